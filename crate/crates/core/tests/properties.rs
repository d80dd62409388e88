mod common;

use std::sync::Arc;

use common::*;
use gerbe_core::circle::pairing;
use gerbe_core::cochain::{Base, Cochain};
use gerbe_core::group::{central_extension, ExtensionCocycle};
use gerbe_core::json::{cochain_to_json, parse_cochain, DEFAULT_MAX_ORDER};
use gerbe_core::{CircleValue, FiniteAbelianGroup, FiniteGroup};
use proptest::prelude::*;

fn circle() -> impl Strategy<Value = CircleValue> {
    (1u64..64).prop_flat_map(|den| (0..den, Just(den))).prop_map(|(n, d)| CircleValue::new(n, d))
}

/// A cochain on `Z/n` of the given degree with values `v / level`.
fn cochain(n: usize, degree: usize, level: u64, values: &[u64]) -> Cochain {
    let g = Arc::new(FiniteGroup::cyclic(n));
    let mut i = 0;
    Cochain::from_fn(Base::Group(g), degree, |_, _| {
        let v = values[i % values.len()];
        i += 1;
        CircleValue::new(v % level, level)
    })
    .unwrap()
}

proptest! {
    #[test]
    fn circle_display_round_trips(x in circle()) {
        let back: CircleValue = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn circle_is_an_abelian_group(x in circle(), y in circle(), z in circle()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert!(x.add(&x.neg()).is_zero());
        prop_assert_eq!(x.scale(3), x.add(&x).add(&x));
    }

    #[test]
    fn levels_are_exact(num in 0u64..1000, den in 1u64..60, k in 1u64..5) {
        let x = CircleValue::new(num, den);
        prop_assert_eq!(x.at_level(den * k), Some((num % den) * k));
    }

    #[test]
    fn delta_matches_oracle_and_squares_to_zero(
        n in 2usize..5,
        degree in 0usize..3,
        level in 2u64..7,
        values in prop::collection::vec(0u64..1000, 1..40),
    ) {
        let c = cochain(n, degree, level, &values);
        let g = FiniteGroup::cyclic(n);
        let d = c.delta();
        prop_assert_eq!(dense(&d, level), delta(&g, &point_action(n), level, degree, &dense(&c, level)));
        prop_assert!(d.delta().is_zero());
    }

    #[test]
    fn cochain_json_round_trips(
        n in 1usize..5,
        degree in 0usize..3,
        level in 1u64..9,
        values in prop::collection::vec(0u64..1000, 1..40),
    ) {
        let c = cochain(n, degree, level, &values);
        let back = parse_cochain(&cochain_to_json(&c), None, DEFAULT_MAX_ORDER).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn pairing_is_bilinear(
        factors in prop::sample::select(abelian_groups(24)),
        seed in prop::collection::vec(0u64..100, 9),
    ) {
        let s = FiniteAbelianGroup::new(factors.clone()).unwrap();
        let pick = |o: usize| factors.iter().enumerate().map(|(i, &d)| seed[(i + o) % 9] % d).collect::<Vec<_>>();
        let (t, x, y) = (pick(0), pick(3), pick(6));
        let sum = s.add(&x, &y);
        prop_assert_eq!(pairing(&s, &t, &sum), pairing(&s, &t, &x).add(&pairing(&s, &t, &y)));
        let tsum = s.add(&t, &x);
        prop_assert_eq!(pairing(&s, &tsum, &y), pairing(&s, &t, &y).add(&pairing(&s, &x, &y)));
    }

    /// Cohomologous extension cocycles give isomorphic groups; here checked
    /// through order census and commutativity.
    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions(
        m in 2u64..5,
        n in 2usize..5,
        t in 0u64..5,
        c in prop::collection::vec(0u64..5, 5),
    ) {
        let s = FiniteAbelianGroup::cyclic(m);
        let k = Arc::new(FiniteGroup::cyclic(n));
        let carry = |a: usize, b: usize| (t * ((a + b) / n) as u64) % m;
        let shift = |a: usize| if a == 0 { 0 } else { c[a] % m };
        let f: Vec<usize> = (0..n * n).map(|i| carry(i / n, i % n) as usize).collect();
        let g: Vec<usize> = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                ((carry(a, b) + shift(a) + shift(b) + m - shift((a + b) % n)) % m) as usize
            })
            .collect();
        let e1 = central_extension(&ExtensionCocycle { s: s.clone(), k: k.clone(), values: f }).unwrap();
        let e2 = central_extension(&ExtensionCocycle { s, k, values: g }).unwrap();
        prop_assert_eq!(census(&e1.group), census(&e2.group));
        prop_assert!(abelian(&e1.group) && abelian(&e2.group));
    }
}
