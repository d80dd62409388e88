//! JSON forms of groups, cochains, gerbes and crossed modules.
//!
//! Element indices in a payload refer to the labels of the group as it was
//! given. Table groups are relabeled so that the identity is `0`; every index
//! read from the same payload goes through that relabeling, and every output
//! uses canonical labels together with the canonical table.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::abelian::FiniteAbelianGroup;
use crate::circle::{BilinearForm, CircleValue};
use crate::cochain::{ActionGroupoid, Base, Cochain, ModuleCochain};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub const DEFAULT_MAX_ORDER: usize = 4096;

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Table { table: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Abelian { factors: Vec<u64> },
}

/// A parsed group together with `relabel[input label] = canonical label`.
#[derive(Clone, Debug)]
pub struct ParsedGroup {
    pub group: Arc<FiniteGroup>,
    pub relabel: Vec<usize>,
}

impl ParsedGroup {
    pub fn canonical(group: Arc<FiniteGroup>) -> Self {
        let relabel = (0..group.order()).collect();
        ParsedGroup { group, relabel }
    }

    pub fn element(&self, x: usize) -> Result<usize> {
        self.relabel
            .get(x)
            .copied()
            .ok_or_else(|| Error::Malformed(format!("element {x} out of range for a group of order {}", self.relabel.len())))
    }

    pub fn elements(&self, xs: &[usize]) -> Result<Vec<usize>> {
        xs.iter().map(|&x| self.element(x)).collect()
    }
}

pub fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Malformed(e.to_string()))
}

/// Required field of an object payload.
pub fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Malformed(format!("missing field `{name}`")))
}

pub fn parse_abelian(factors: &[u64], max_order: usize) -> Result<FiniteAbelianGroup> {
    let order = factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d.max(1)));
    match order {
        Some(o) if o <= max_order as u64 => FiniteAbelianGroup::from_cyclic(factors),
        _ => Err(Error::OrderLimitExceeded { limit: max_order }),
    }
}

pub fn parse_group(v: &Value, max_order: usize) -> Result<ParsedGroup> {
    let desc: GroupSpec = from_value(v)?;
    match desc {
        GroupSpec::Table { table } => {
            let (g, relabel) = FiniteGroup::from_table_capped(&table, max_order)?;
            Ok(ParsedGroup { group: Arc::new(g), relabel })
        }
        GroupSpec::Perm { degree, generators } => {
            let g = FiniteGroup::from_permutations(degree, &generators, max_order)?;
            Ok(ParsedGroup::canonical(Arc::new(g)))
        }
        GroupSpec::Abelian { factors } => {
            let a = parse_abelian(&factors, max_order)?;
            Ok(ParsedGroup::canonical(Arc::new(FiniteGroup::from_abelian(&a))))
        }
    }
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({ "kind": "table", "table": g.table() })
}

/// Group JSON with a few invariants for reports.
pub fn group_summary(g: &FiniteGroup) -> Value {
    let census: serde_json::Map<String, Value> =
        g.order_census().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut out = json!({
        "group": group_to_json(g),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "center": g.center(),
        "order_census": census,
    });
    if g.is_abelian() {
        if let Ok(st) = crate::group::abelian_invariants(g) {
            out["factors"] = json!(st.invariants.factors());
        }
    }
    out
}

#[derive(Clone, Debug, Deserialize)]
struct SpaceSpec {
    action: Vec<Vec<usize>>,
    #[serde(default)]
    space_size: Option<usize>,
}

/// `{"action": [[x.g for g] for x]}`, with group arguments in input labels.
pub fn parse_space(v: &Value, group: &ParsedGroup) -> Result<Arc<ActionGroupoid>> {
    let desc: SpaceSpec = from_value(v)?;
    if let Some(n) = desc.space_size {
        if n != desc.action.len() {
            return Err(Error::Malformed("space_size does not match the action table".into()));
        }
    }
    let n = group.group.order();
    let mut table = vec![vec![0; n]; desc.action.len()];
    for (x, row) in desc.action.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidAction(format!("row {x} has the wrong length")));
        }
        for (g, &y) in row.iter().enumerate() {
            table[x][group.element(g)?] = y;
        }
    }
    Ok(Arc::new(ActionGroupoid::new(group.group.clone(), &table)?))
}

pub fn space_to_json(a: &ActionGroupoid) -> Value {
    json!({ "space_size": a.points(), "action": a.table() })
}

pub fn base_to_json(b: &Base) -> Value {
    match b {
        Base::Group(g) => group_to_json(g),
        Base::Groupoid(a) => json!({
            "kind": "groupoid",
            "group": group_to_json(a.group()),
            "space_size": a.points(),
            "action": a.table(),
        }),
    }
}

/// Reads a `base` object as emitted by [`base_to_json`].
pub fn parse_base(v: &Value, max_order: usize) -> Result<(Base, ParsedGroup)> {
    if v.get("kind").and_then(Value::as_str) == Some("groupoid") {
        let g = parse_group(field(v, "group")?, max_order)?;
        let space = parse_space(&json!({ "action": field(v, "action")? }), &g)?;
        Ok((Base::Groupoid(space), g))
    } else {
        let g = parse_group(v, max_order)?;
        Ok((Base::Group(g.group.clone()), g))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrySpec {
    #[serde(default)]
    point: Option<usize>,
    args: Vec<usize>,
    value: CircleValue,
}

#[derive(Clone, Debug, Deserialize)]
struct CochainSpec {
    degree: usize,
    #[serde(default)]
    normalized: Option<bool>,
    #[serde(default)]
    entries: Vec<EntrySpec>,
}

/// Parses a Q/Z-valued cochain on `base`; group arguments are in the labels
/// of `group`. Omitted entries are zero.
pub fn parse_cochain_on(v: &Value, base: &Base, group: &ParsedGroup) -> Result<Cochain> {
    let desc: CochainSpec = from_value(v)?;
    let n = group.group.order();
    let points = base.points();
    let len = points
        .checked_mul(n.checked_pow(desc.degree as u32).unwrap_or(usize::MAX))
        .filter(|&l| l <= 1 << 26)
        .ok_or(Error::SizeLimitExceeded { rows: points, cols: usize::MAX, limit: 1 << 26 })?;
    let mut vals = vec![CircleValue::zero(); len];
    let mut seen = vec![false; len];
    for e in &desc.entries {
        if e.args.len() != desc.degree {
            return Err(Error::Malformed(format!("entry {:?} has arity {} in degree {}", e.args, e.args.len(), desc.degree)));
        }
        let x = e.point.unwrap_or(0);
        if x >= points || (e.point.is_some() && !base.is_groupoid()) {
            return Err(Error::Malformed(format!("bad point in entry {:?}", e.args)));
        }
        let args = group.elements(&e.args)?;
        let idx = args.iter().fold(x, |acc, &g| acc * n + g);
        if seen[idx] {
            return Err(Error::Malformed(format!("duplicate entry {:?}", e.args)));
        }
        seen[idx] = true;
        vals[idx] = e.value.clone();
    }
    let c = Cochain::from_circle_values(base.clone(), desc.degree, &vals)?;
    if desc.normalized == Some(true) && !c.is_normalized() {
        return Err(Error::Malformed("cochain marked normalized has a nonzero identity entry".into()));
    }
    Ok(c)
}

/// Parses a cochain, taking the base from its own `base` field when present
/// and otherwise from `context`.
pub fn parse_cochain(v: &Value, context: Option<(&Base, &ParsedGroup)>, max_order: usize) -> Result<Cochain> {
    match (v.get("base"), context) {
        (Some(b), ctx) => {
            let (base, g) = parse_base(b, max_order)?;
            if let Some((cb, _)) = ctx {
                if *cb != base {
                    return Err(Error::DomainMismatch);
                }
            }
            parse_cochain_on(v, &base, &g)
        }
        (None, Some((base, g))) => parse_cochain_on(v, base, g),
        (None, None) => Err(Error::Malformed("cochain without a base".into())),
    }
}

pub fn cochain_to_json(c: &Cochain) -> Value {
    let groupoid = c.base().is_groupoid();
    let entries: Vec<Value> = c
        .entries()
        .into_iter()
        .map(|(x, args, v)| {
            if groupoid {
                json!({ "point": x, "args": args, "value": v })
            } else {
                json!({ "args": args, "value": v })
            }
        })
        .collect();
    json!({
        "base": base_to_json(c.base()),
        "degree": c.degree(),
        "normalized": c.is_normalized(),
        "entries": entries,
    })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ModuleValue {
    Index(usize),
    Coords(Vec<u64>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleEntry {
    args: Vec<usize>,
    value: ModuleValue,
}

#[derive(Clone, Debug, Deserialize)]
struct ModuleCochainSpec {
    degree: usize,
    #[serde(default)]
    entries: Vec<ModuleEntry>,
}

/// A cochain with values in `module`; a value is a coordinate list or a
/// tuple index.
pub fn parse_module_cochain(v: &Value, group: &ParsedGroup, module: &FiniteAbelianGroup) -> Result<ModuleCochain> {
    let desc: ModuleCochainSpec = from_value(v)?;
    let n = group.group.order();
    let len = n.checked_pow(desc.degree as u32).filter(|&l| l <= 1 << 24).ok_or(Error::SizeLimitExceeded {
        rows: n,
        cols: desc.degree,
        limit: 1 << 24,
    })?;
    let mut vals = vec![module.zero(); len];
    for e in &desc.entries {
        if e.args.len() != desc.degree {
            return Err(Error::Malformed(format!("entry {:?} has arity {} in degree {}", e.args, e.args.len(), desc.degree)));
        }
        let args = group.elements(&e.args)?;
        let idx = args.iter().fold(0, |acc, &g| acc * n + g);
        vals[idx] = match &e.value {
            ModuleValue::Index(i) if *i < module.order() => module.element(*i),
            ModuleValue::Coords(c) if c.len() == module.rank() => c.clone(),
            _ => return Err(Error::Malformed(format!("bad module value at {:?}", e.args))),
        };
    }
    let mut i = 0;
    ModuleCochain::from_fn(group.group.clone(), module.clone(), desc.degree, |_| {
        i += 1;
        vals[i - 1].clone()
    })
}

pub fn module_cochain_to_json(c: &ModuleCochain) -> Value {
    let n = c.group().order();
    let d = c.degree();
    let total = n.pow(d as u32);
    let mut entries = Vec::new();
    let mut args = vec![0; d];
    for i in 0..total {
        let mut r = i;
        for a in args.iter_mut().rev() {
            *a = r % n;
            r /= n;
        }
        let v = c.get(&args);
        if v.iter().any(|&x| x != 0) {
            entries.push(json!({ "args": args, "value": v }));
        }
    }
    json!({ "module": c.module().factors(), "degree": d, "entries": entries })
}

/// `{"group": ..., "alpha": <cochain>}`.
pub fn parse_gerbe_parts(v: &Value, max_order: usize) -> Result<(ParsedGroup, Cochain)> {
    let g = parse_group(field(v, "group")?, max_order)?;
    let base = Base::Group(g.group.clone());
    let alpha = parse_cochain(field(v, "alpha")?, Some((&base, &g)), max_order)?;
    Ok((g, alpha))
}

pub fn gerbe_to_json(group: &FiniteGroup, alpha: &Cochain) -> Value {
    json!({ "group": group_to_json(group), "alpha": cochain_to_json(alpha) })
}

/// Form matrix of `"p/q"` strings over the coordinates of `domain`.
pub fn parse_form(v: &Value, domain: &FiniteAbelianGroup) -> Result<BilinearForm> {
    let matrix: Vec<Vec<CircleValue>> = from_value(v)?;
    BilinearForm::new(domain.clone(), matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_groups_are_relabeled() {
        let v = json!({"kind": "table", "table": [[1, 0], [0, 1]]});
        let g = parse_group(&v, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.group.order(), 2);
        assert_eq!(g.element(1).unwrap(), 0);
        let back = parse_group(&group_to_json(&g.group), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(*back.group, *g.group);
    }

    #[test]
    fn cochain_round_trip() {
        let g = ParsedGroup::canonical(Arc::new(FiniteGroup::cyclic(3)));
        let base = Base::Group(g.group.clone());
        let v = json!({"degree": 2, "normalized": true, "entries": [{"args": [1, 2], "value": "1/3"}]});
        let c = parse_cochain(&v, Some((&base, &g)), DEFAULT_MAX_ORDER).unwrap();
        let out = cochain_to_json(&c);
        let again = parse_cochain(&out, None, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn bad_arity_is_malformed() {
        let g = ParsedGroup::canonical(Arc::new(FiniteGroup::cyclic(2)));
        let base = Base::Group(g.group.clone());
        let v = json!({"degree": 2, "entries": [{"args": [1], "value": "1/2"}]});
        assert!(matches!(parse_cochain(&v, Some((&base, &g)), 16), Err(Error::Malformed(_))));
    }
}
