//! Command dispatch shared by the `gerbe` binary and the C interface.
//!
//! A command takes a JSON payload and returns a report
//! `{"command", "status", "result" | "error", "witness", "timing_ms"}`.
//! Apart from `timing_ms` a report is a deterministic function of the request.

use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use crate::abelian::FiniteAbelianGroup;
use crate::circle::{BilinearForm, CircleValue};
use crate::cochain::{cohomology_group, solve_coboundary, Base, Cochain, Limits, ModuleCochain};
use crate::crossmod::{finite_fiber_pair, four_term, CrossedModule, FourTermSequence};
use crate::duality::{double_dual_check, dual_gerbe, omega_membership, DualityInput};
use crate::error::{Error, ErrorKind, Result};
use crate::gerbe::{canonical_representation, count_representation_classes, make_gerbe, representation_exists, MultiplicativeGerbe};
use crate::group::{central_extension, quotient_by_central, CentralExtension, Fibre, FiniteGroup};
use crate::json::*;
use crate::spectral::{fiber_restriction, lhs_e2};

pub const COMMANDS: &[&str] = &[
    "group.inspect",
    "group.quotient",
    "group.extension",
    "cohomology",
    "cocycle.check",
    "cocycle.solve",
    "cocycle.equal",
    "gerbe.make",
    "gerbe.rep.exists",
    "gerbe.rep.count",
    "gerbe.rep.canonical",
    "dual",
    "doubledual",
    "crossmod.pair",
    "crossmod.validate",
    "spectral.e2",
    "spectral.restrict",
];

#[derive(Clone, Debug)]
pub struct Options {
    pub limits: Limits,
    pub max_order: usize,
    /// Include full witness cochains in reports.
    pub emit_witness: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { limits: Limits::default(), max_order: DEFAULT_MAX_ORDER, emit_witness: false }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub exit_code: i32,
    pub json: Value,
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Mathematical => 1,
        ErrorKind::Input => 2,
        ErrorKind::Resource => 3,
    }
}

fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Mathematical => "mathematical",
        ErrorKind::Input => "input",
        ErrorKind::Resource => "resource",
    }
}

pub fn error_to_json(e: &Error) -> Value {
    let debug = format!("{e:?}");
    let code: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = json!({ "kind": kind_name(e.kind()), "code": code, "message": e.to_string() });
    match e {
        Error::NotACocycle { witness }
        | Error::RepresentationFails { witness }
        | Error::MorphismFails { witness }
        | Error::RestrictionNotCharacter { witness }
        | Error::CompatibilityFailed { witness } => out["witness"] = json!(witness),
        Error::NotInOmega { stage, level } => {
            out["stage"] = json!(stage);
            out["level"] = json!(level);
        }
        Error::NoSolutionAtLevel { level } | Error::LevelTooCoarse { level } => out["level"] = json!(level),
        Error::NotAssociative { a, b, c } => out["witness"] = json!([a, b, c]),
        Error::NotHomomorphism { a, b } | Error::NotAbelian { a, b } => out["witness"] = json!([a, b]),
        Error::NotCentral { element, witness } => out["witness"] = json!([element, witness]),
        Error::NotEquivariant { point, element } => out["witness"] = json!([point, element]),
        _ => {}
    }
    out
}

/// Runs `command` on a payload given as text.
pub fn run_str(command: &str, payload: &str, opts: &Options) -> Report {
    match serde_json::from_str::<Value>(payload) {
        Ok(v) => run(command, &v, opts),
        Err(e) => failure(command, &Error::Malformed(format!("payload is not JSON: {e}")), 0.0),
    }
}

fn failure(command: &str, e: &Error, ms: f64) -> Report {
    Report {
        exit_code: exit_code(e.kind()),
        json: json!({ "command": command, "status": "error", "error": error_to_json(e), "timing_ms": ms }),
    }
}

pub fn run(command: &str, payload: &Value, opts: &Options) -> Report {
    let start = Instant::now();
    let out = dispatch(command, payload, opts);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    match out {
        Ok((result, witness)) => Report {
            exit_code: 0,
            json: json!({
                "command": command,
                "status": "ok",
                "result": result,
                "witness": witness,
                "timing_ms": ms,
            }),
        },
        Err(e) => failure(command, &e, ms),
    }
}

type Outcome = Result<(Value, Value)>;

fn dispatch(command: &str, p: &Value, o: &Options) -> Outcome {
    if !p.is_object() {
        return Err(Error::Malformed("payload must be a JSON object".into()));
    }
    match command {
        "group.inspect" => group_inspect(p, o),
        "group.quotient" => group_quotient(p, o),
        "group.extension" => group_extension(p, o),
        "cohomology" => cohomology(p, o),
        "cocycle.check" => cocycle_check(p, o),
        "cocycle.solve" => cocycle_solve(p, o),
        "cocycle.equal" => cocycle_equal(p, o),
        "gerbe.make" => gerbe_make(p, o),
        "gerbe.rep.exists" => rep_exists(p, o),
        "gerbe.rep.count" => rep_count(p, o),
        "gerbe.rep.canonical" => rep_canonical(p, o),
        "dual" => dual(p, o),
        "doubledual" => doubledual(p, o),
        "crossmod.pair" => crossmod_pair(p, o),
        "crossmod.validate" => crossmod_validate(p, o),
        "spectral.e2" => spectral_e2(p, o),
        "spectral.restrict" => spectral_restrict(p, o),
        _ => Err(Error::Malformed(format!("unknown command `{command}`"))),
    }
}

fn opt_usize(p: &Value, name: &str, default: usize) -> Result<usize> {
    match p.get(name) {
        None => Ok(default),
        Some(v) => from_value(v),
    }
}

fn group_inspect(p: &Value, o: &Options) -> Outcome {
    let g = parse_group(field(p, "group")?, o.max_order)?;
    let mut out = group_summary(&g.group);
    out["relabel"] = json!(g.relabel);
    Ok((out, Value::Null))
}

fn extension_json(ext: &CentralExtension) -> Value {
    json!({
        "group": group_summary(&ext.group),
        "fibre": { "factors": ext.fibre.group.factors(), "elements": ext.fibre.elements },
        "quotient": group_to_json(&ext.quotient),
        "pi": ext.pi,
        "section": ext.section,
        "cocycle": module_cochain_to_json(&ModuleCochain::from_extension_cocycle(&ext.cocycle)),
    })
}

fn parse_extension_input(p: &Value, o: &Options) -> Result<(ParsedGroup, CentralExtension)> {
    let g = parse_group(field(p, "group")?, o.max_order)?;
    let elements: Vec<usize> = from_value(field(p, "central_subgroup")?)?;
    let elements = g.elements(&elements)?;
    let fibre = Fibre::from_subgroup(&g.group, &elements)?;
    let ext = quotient_by_central(&g.group, fibre)?;
    Ok((g, ext))
}

fn group_quotient(p: &Value, o: &Options) -> Outcome {
    let g = parse_group(field(p, "group")?, o.max_order)?;
    let elements: Vec<usize> = from_value(p.get("subgroup").or(p.get("central_subgroup")).ok_or_else(|| {
        Error::Malformed("missing field `subgroup`".into())
    })?)?;
    let fibre = Fibre::from_subgroup(&g.group, &g.elements(&elements)?)?;
    let ext = quotient_by_central(&g.group, fibre)?;
    Ok((extension_json(&ext), Value::Null))
}

fn group_extension(p: &Value, o: &Options) -> Outcome {
    let s_factors: Vec<u64> = from_value(field(p, "s")?)?;
    let s = parse_abelian(&s_factors, o.max_order)?;
    let k = parse_group(field(p, "k")?, o.max_order)?;
    if s.order().saturating_mul(k.group.order()) > o.max_order {
        return Err(Error::OrderLimitExceeded { limit: o.max_order });
    }
    let f = match p.get("cocycle") {
        Some(v) => parse_module_cochain(v, &k, &s)?,
        None => ModuleCochain::zero(k.group.clone(), s.clone(), 2),
    };
    if f.degree() != 2 {
        return Err(Error::Malformed("extension cocycle must have degree 2".into()));
    }
    let ext = central_extension(&f.to_extension_cocycle()?)?;
    Ok((extension_json(&ext), Value::Null))
}

fn cohomology(p: &Value, o: &Options) -> Outcome {
    let g = parse_group(field(p, "group")?, o.max_order)?;
    let n = opt_usize(p, "degree", 2)?;
    if n == 0 {
        return Err(Error::Malformed("degree must be at least 1".into()));
    }
    let h = cohomology_group(&g.group, n, &o.limits)?;
    let gens: Vec<Value> = h.representatives.iter().map(cochain_to_json).collect();
    Ok((json!({ "degree": n, "factors": h.factors, "order": h.order, "generators": gens }), Value::Null))
}

/// Base and labels for cochain payloads: `group` plus optional `action`, or
/// the `base` carried by the cochain itself.
fn cochain_context(p: &Value, o: &Options) -> Result<Option<(Base, ParsedGroup)>> {
    let Some(gv) = p.get("group") else { return Ok(None) };
    let g = parse_group(gv, o.max_order)?;
    let base = match p.get("action") {
        Some(a) => Base::Groupoid(parse_space(&json!({ "action": a }), &g)?),
        None => Base::Group(g.group.clone()),
    };
    Ok(Some((base, g)))
}

fn read_cochain(p: &Value, name: &str, ctx: &Option<(Base, ParsedGroup)>, o: &Options) -> Result<Cochain> {
    parse_cochain(field(p, name)?, ctx.as_ref().map(|(b, g)| (b, g)), o.max_order)
}

fn cocycle_check(p: &Value, o: &Options) -> Outcome {
    let ctx = cochain_context(p, o)?;
    let c = read_cochain(p, "cochain", &ctx, o)?;
    let violation = c.cocycle_violation();
    Ok((
        json!({ "cocycle": violation.is_none(), "normalized": c.is_normalized(), "violation": violation }),
        Value::Null,
    ))
}

fn cocycle_solve(p: &Value, o: &Options) -> Outcome {
    let ctx = cochain_context(p, o)?;
    let c = read_cochain(p, "cochain", &ctx, o)?;
    let b = solve_coboundary(&c, &o.limits)?;
    if b.delta() != c {
        return Err(Error::InternalVerificationFailed("primitive does not solve the equation".into()));
    }
    Ok((json!({ "primitive": cochain_to_json(&b), "verified": true }), Value::Null))
}

fn cocycle_equal(p: &Value, o: &Options) -> Outcome {
    let ctx = cochain_context(p, o)?;
    let a = read_cochain(p, "a", &ctx, o)?;
    let b = read_cochain(p, "b", &ctx, o)?;
    if a.base() != b.base() || a.degree() != b.degree() {
        return Err(Error::DomainMismatch);
    }
    let diff = a.sub(&b)?;
    if diff.is_zero() {
        return Ok((json!({ "equal": true }), Value::Null));
    }
    match solve_coboundary(&diff, &o.limits) {
        Ok(c) => {
            let w = if o.emit_witness { json!({ "primitive": cochain_to_json(&c) }) } else { Value::Null };
            Ok((json!({ "equal": true }), w))
        }
        Err(Error::NoSolutionAtLevel { level }) => Ok((json!({ "equal": false, "level": level }), Value::Null)),
        Err(e) => Err(e),
    }
}

fn read_gerbe(v: &Value, o: &Options) -> Result<(ParsedGroup, MultiplicativeGerbe)> {
    let (g, alpha) = parse_gerbe_parts(v, o.max_order)?;
    if let Some(w) = alpha.cocycle_violation() {
        return Err(Error::NotACocycle { witness: w });
    }
    let gerbe = make_gerbe(g.group.clone(), alpha, &o.limits)?;
    Ok((g, gerbe))
}

fn is_exact(c: &Cochain, limits: &Limits) -> Result<bool> {
    if c.is_zero() {
        return Ok(true);
    }
    match solve_coboundary(c, limits) {
        Ok(_) => Ok(true),
        Err(Error::NoSolutionAtLevel { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn is_exact_module(c: &ModuleCochain, limits: &Limits) -> Result<bool> {
    match c.solve_coboundary(limits) {
        Ok(_) => Ok(true),
        Err(Error::NoSolutionAtLevel { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn gerbe_make(p: &Value, o: &Options) -> Outcome {
    let (_, gerbe) = read_gerbe(p.get("gerbe").unwrap_or(p), o)?;
    let trivial = is_exact(gerbe.alpha(), &o.limits)?;
    Ok((json!({ "gerbe": gerbe_to_json(gerbe.group(), gerbe.alpha()), "class_trivial": trivial }), Value::Null))
}

fn rep_input(p: &Value, o: &Options) -> Result<(MultiplicativeGerbe, Arc<crate::cochain::ActionGroupoid>)> {
    let (g, gerbe) = read_gerbe(field(p, "gerbe")?, o)?;
    let space = match p.get("space") {
        Some(s) => parse_space(s, &g)?,
        None => Arc::new(crate::cochain::ActionGroupoid::point(g.group.clone())),
    };
    Ok((gerbe, space))
}

fn rep_exists(p: &Value, o: &Options) -> Outcome {
    let (gerbe, space) = rep_input(p, o)?;
    let beta = representation_exists(&gerbe, &space, &o.limits)?;
    let witness = match (&beta, o.emit_witness) {
        (Some(b), true) => json!({ "beta": cochain_to_json(b) }),
        _ => Value::Null,
    };
    Ok((json!({ "exists": beta.is_some(), "space_size": space.points() }), witness))
}

fn rep_count(p: &Value, o: &Options) -> Outcome {
    let (gerbe, space) = rep_input(p, o)?;
    let n = count_representation_classes(&gerbe, &space, &o.limits)?;
    Ok((json!({ "count": n, "space_size": space.points() }), Value::Null))
}

fn rep_canonical(p: &Value, o: &Options) -> Outcome {
    let (_, gerbe) = read_gerbe(field(p, "gerbe")?, o)?;
    let r = canonical_representation(&gerbe);
    crate::gerbe::GerbeRepresentation::new(gerbe, r.space.clone(), r.beta.clone())?;
    let mut rep = space_to_json(&r.space);
    rep["beta"] = cochain_to_json(&r.beta);
    Ok((json!({ "representation": rep, "verified": true }), Value::Null))
}

fn duality_input(p: &Value, o: &Options) -> Result<DualityInput> {
    let (g, gerbe) = read_gerbe(field(p, "gerbe")?, o)?;
    let elements: Vec<usize> = from_value(field(p, "central_subgroup")?)?;
    DualityInput::new(gerbe, &g.elements(&elements)?)
}

fn dual(p: &Value, o: &Options) -> Outcome {
    let input = duality_input(p, o)?;
    let w = omega_membership(&input, &o.limits)?;
    w.verify(&input)?;
    let d = dual_gerbe(&input, &w, &o.limits)?;
    let f = ModuleCochain::from_extension_cocycle(&input.extension.cocycle);
    let classes = json!({
        "alpha_trivial": is_exact(input.gerbe.alpha(), &o.limits)?,
        "F_trivial": is_exact_module(&f, &o.limits)?,
        "F_hat_trivial": is_exact_module(&d.f_hat, &o.limits)?,
        "alpha_hat_trivial": is_exact(d.alpha_hat(), &o.limits)?,
    });
    let witness = if o.emit_witness {
        let gammas: Vec<Value> = w.gamma.components().iter().map(cochain_to_json).collect();
        json!({ "verified": true, "beta": cochain_to_json(&w.beta), "gamma": gammas })
    } else {
        json!({ "verified": true })
    };
    let result = json!({
        "dual_group": group_summary(&d.extension.group),
        "dual_fibre": d.extension.fibre.group.factors(),
        "quotient": group_to_json(&input.extension.quotient),
        "F": module_cochain_to_json(&f),
        "F_hat": module_cochain_to_json(&d.f_hat),
        "alpha_hat": cochain_to_json(d.alpha_hat()),
        "witness": witness,
        "classes": classes,
    });
    Ok((result, witness))
}

fn doubledual(p: &Value, o: &Options) -> Outcome {
    let input = duality_input(p, o)?;
    let w = omega_membership(&input, &o.limits)?;
    let r = double_dual_check(&input, &w, &o.limits)?;
    let result = json!({
        "dual_group": group_summary(&r.dual.extension.group),
        "double_dual_group": group_summary(&r.double_dual.extension.group),
        "comparison": r.comparison.images,
        "alpha_double_hat": cochain_to_json(r.double_dual.alpha_hat()),
        "class_match": true,
    });
    let witness = if o.emit_witness { json!({ "transported": cochain_to_json(&r.transported) }) } else { Value::Null };
    Ok((result, witness))
}

/// `b(e_i, e_i) = 1/d_i` and zero off the diagonal.
fn diagonal_form(s: &FiniteAbelianGroup) -> Result<BilinearForm> {
    let r = s.rank();
    let matrix = (0..r)
        .map(|i| (0..r).map(|j| if i == j { CircleValue::new(1, s.factors()[i]) } else { CircleValue::zero() }).collect())
        .collect();
    BilinearForm::new(s.clone(), matrix)
}

fn crossmod_json(x: &CrossedModule, seq: &FourTermSequence) -> Value {
    json!({
        "n": group_to_json(&x.n),
        "e": group_to_json(&x.e),
        "phi": x.phi,
        "action": x.action,
        "pi1": seq.pi1.factors(),
        "pi0": group_summary(&seq.pi0),
    })
}

fn crossmod_pair(p: &Value, o: &Options) -> Outcome {
    let (_, ext) = parse_extension_input(p, o)?;
    let s = &ext.fibre.group;
    let b = match p.get("form") {
        Some(v) => parse_form(v, s)?,
        None => diagonal_form(s)?,
    };
    let level = match p.get("level") {
        Some(v) => from_value(v)?,
        None => b.level(),
    };
    let size = (s.order() as u64).saturating_mul(level);
    if size > o.max_order as u64 || (s.order() * ext.group.order()) > o.max_order {
        return Err(Error::OrderLimitExceeded { limit: o.max_order });
    }
    let pair = finite_fiber_pair(&ext, &b, level)?;
    Ok((
        json!({
            "level": level,
            "first": crossmod_json(&pair.first, &pair.first_sequence),
            "second": crossmod_json(&pair.second, &pair.second_sequence),
            "first_pi0_iso": pair.first_iso.images,
            "second_pi0_iso": pair.second_iso.images,
            "pi0_distinguished": pair.pi0_distinguished(),
        }),
        Value::Null,
    ))
}

fn crossmod_validate(p: &Value, o: &Options) -> Outcome {
    let n = parse_group(field(p, "n")?, o.max_order)?;
    let e = parse_group(field(p, "e")?, o.max_order)?;
    let phi_in: Vec<usize> = from_value(field(p, "phi")?)?;
    let action_in: Vec<Vec<usize>> = from_value(field(p, "action")?)?;
    if phi_in.len() != n.group.order() || action_in.len() != e.group.order() {
        return Err(Error::Malformed("phi or action has the wrong length".into()));
    }
    let mut phi = vec![0; n.group.order()];
    for (m, &x) in phi_in.iter().enumerate() {
        phi[n.element(m)?] = e.element(x)?;
    }
    let mut action = vec![vec![0; n.group.order()]; e.group.order()];
    for (x, row) in action_in.iter().enumerate() {
        if row.len() != n.group.order() {
            return Err(Error::Malformed(format!("action row {x} has the wrong length")));
        }
        for (m, &y) in row.iter().enumerate() {
            action[e.element(x)?][n.element(m)?] = n.element(y)?;
        }
    }
    let x = CrossedModule::new(n.group, e.group, phi, action)?;
    let seq = four_term(&x)?;
    Ok((json!({ "valid": true, "pi1": seq.pi1.factors(), "pi0": group_summary(&seq.pi0) }), Value::Null))
}

fn spectral_e2(p: &Value, o: &Options) -> Outcome {
    let max_p = opt_usize(p, "max_p", 3)?;
    let max_q = opt_usize(p, "max_q", 2)?;
    let (k, s): (Arc<FiniteGroup>, FiniteAbelianGroup) = if p.get("group").is_some() {
        let (_, ext) = parse_extension_input(p, o)?;
        (ext.quotient.clone(), ext.fibre.group.clone())
    } else {
        let k = parse_group(field(p, "k")?, o.max_order)?;
        let factors: Vec<u64> = from_value(field(p, "s")?)?;
        (k.group, parse_abelian(&factors, o.max_order)?)
    };
    let mut terms = Vec::new();
    let mut table = Vec::new();
    for q in 0..=max_q {
        let mut row = Vec::new();
        for pp in 0..=max_p {
            let t = lhs_e2(&k, &s, pp, q, &o.limits)?;
            row.push(match t.order() {
                Some(n) => json!(n),
                None => json!("inf"),
            });
            terms.push(t);
        }
        table.push(row);
    }
    Ok((json!({ "max_p": max_p, "max_q": max_q, "orders": table, "terms": terms }), Value::Null))
}

fn spectral_restrict(p: &Value, o: &Options) -> Outcome {
    let (g, gerbe) = read_gerbe(field(p, "gerbe")?, o)?;
    let elements: Vec<usize> = from_value(field(p, "subgroup")?)?;
    let r = fiber_restriction(&gerbe, &g.elements(&elements)?, &o.limits)?;
    Ok((
        json!({ "trivial": r.trivial, "level": r.level, "restricted": cochain_to_json(&r.restricted) }),
        Value::Null,
    ))
}
