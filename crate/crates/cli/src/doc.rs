//! Game and profile documents: JSON parsing with field-path errors, and the
//! inverse emitters.
//!
//! Rationals are written as `"p/q"` strings (integers without a slash) and
//! read from either strings or JSON integers. Players are numbered from 1 in
//! documents and from 0 internally.

use std::collections::BTreeMap;
use std::fmt;

use groupgames::rational::{self, Rational};
use groupgames::{
    Bijection, Element, EpFn, FiniteMeasure, GameSpec, Group, GroupKind, Measure, OrderWeights,
    PayoffFn, Piece, PredicateZ2, Profile, Sign, StepFn, TableFn,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// A parse or validation failure located by field path (and by line and
/// column for syntax errors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub location: String,
    pub reason: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.reason)
    }
}

impl std::error::Error for DocError {}

pub type DocResult<T> = Result<T, DocError>;

fn fail<T>(path: &str, reason: impl Into<String>) -> DocResult<T> {
    Err(DocError {
        location: if path.is_empty() { "document".into() } else { path.into() },
        reason: reason.into(),
    })
}

fn lift<T>(path: &str, r: groupgames::Result<T>) -> DocResult<T> {
    r.or_else(|e| fail(path, e.to_string()))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

/// Parses JSON text, reporting syntax errors by line and column.
pub fn parse_json(text: &str) -> DocResult<Value> {
    serde_json::from_str(text).map_err(|e| {
        let location = format!("line {} column {}", e.line(), e.column());
        let full = e.to_string();
        let suffix = format!(" at {location}");
        let reason = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        DocError { location, reason }
    })
}

fn object<'a>(v: &'a Value, path: &str) -> DocResult<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| fail(path, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> DocResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> DocResult<&'a Value> {
    obj.get(key).map_or_else(|| fail(&join(path, key), "missing field"), Ok)
}

fn kind<'a>(obj: &'a Map<String, Value>, path: &str) -> DocResult<&'a str> {
    let k = field(obj, "kind", path)?;
    k.as_str().map_or_else(|| fail(&join(path, "kind"), "expected a string"), Ok)
}

fn usize_of(v: &Value, path: &str) -> DocResult<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .map_or_else(|| fail(path, "expected a nonnegative integer"), Ok)
}

fn i64_of(v: &Value, path: &str) -> DocResult<i64> {
    v.as_i64().map_or_else(|| fail(path, "expected an integer"), Ok)
}

fn bool_of(v: &Value, path: &str) -> DocResult<bool> {
    v.as_bool().map_or_else(|| fail(path, "expected true or false"), Ok)
}

fn bigint_of(v: &Value, path: &str) -> DocResult<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer")),
        Value::String(s) => s.trim().parse().or_else(|_| fail(path, format!("`{s}` is not an integer"))),
        _ => fail(path, "expected an integer"),
    }
}

pub fn rational_of(v: &Value, path: &str) -> DocResult<Rational> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => lift(path, rational::parse(&n.to_string())),
        Value::Number(_) => fail(path, "decimal literals are not exact; write \"p/q\""),
        Value::String(s) => lift(path, rational::parse(s)),
        _ => fail(path, "expected a rational such as \"1/2\""),
    }
}

fn rationals_of(v: &Value, path: &str) -> DocResult<Vec<Rational>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_of(x, &index(path, i)))
        .collect()
}

fn pair_of(v: &Value, path: &str) -> DocResult<(i64, i64)> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return fail(path, "expected a pair [a, b]");
    }
    Ok((i64_of(&a[0], &index(path, 0))?, i64_of(&a[1], &index(path, 1))?))
}

pub fn rat(q: &Rational) -> Value {
    Value::String(rational::format(q))
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => json!(k),
        None => Value::String(n.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Groups and elements

pub fn parse_group(v: &Value, path: &str) -> DocResult<Group> {
    if let Some(s) = v.as_str() {
        return match s.split_whitespace().collect::<Vec<_>>()[..] {
            ["Z" | "integers"] => Ok(Group::integers()),
            ["Z2" | "lattice-z2"] => Ok(Group::lattice_z2()),
            ["Q1" | "rational-circle"] => Ok(Group::rational_circle()),
            ["zc", m] => match m.parse::<u64>() {
                Ok(m) => lift(path, Group::cyclic(m)),
                Err(_) => fail(path, format!("`{m}` is not a modulus")),
            },
            _ => fail(path, format!("unknown group `{s}`")),
        };
    }
    let obj = object(v, path)?;
    match kind(obj, path)? {
        "Z" | "integers" => Ok(Group::integers()),
        "Z2" | "lattice-z2" => Ok(Group::lattice_z2()),
        "Q1" | "rational-circle" => Ok(Group::rational_circle()),
        "zc" | "cyclic" => {
            let m = field(obj, "modulus", path)?;
            let m = m.as_u64().map_or_else(|| fail(&join(path, "modulus"), "expected a positive integer"), Ok)?;
            lift(path, Group::cyclic(m))
        }
        "table" => {
            let tp = join(path, "table");
            let table = array(field(obj, "table", path)?, &tp)?
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let rp = index(&tp, i);
                    array(row, &rp)?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| usize_of(x, &index(&rp, j)))
                        .collect::<DocResult<Vec<_>>>()
                })
                .collect::<DocResult<Vec<_>>>()?;
            let identity = usize_of(field(obj, "identity", path)?, &join(path, "identity"))?;
            let ip = join(path, "inverse");
            let inverse = array(field(obj, "inverse", path)?, &ip)?
                .iter()
                .enumerate()
                .map(|(i, x)| usize_of(x, &index(&ip, i)))
                .collect::<DocResult<Vec<_>>>()?;
            let labels = match obj.get("labels") {
                None | Some(Value::Null) => None,
                Some(l) => {
                    let lp = join(path, "labels");
                    Some(
                        array(l, &lp)?
                            .iter()
                            .enumerate()
                            .map(|(i, x)| {
                                x.as_str()
                                    .map(str::to_string)
                                    .map_or_else(|| fail(&index(&lp, i), "expected a string"), Ok)
                            })
                            .collect::<DocResult<Vec<_>>>()?,
                    )
                }
            };
            let abelian = bool_of(field(obj, "abelian", path)?, &join(path, "abelian"))?;
            let fc = match obj.get("fc") {
                Some(f) => bool_of(f, &join(path, "fc"))?,
                None => abelian,
            };
            lift(path, Group::table(table, identity, inverse, labels, abelian, fc))
        }
        "product" => {
            let fp = join(path, "factors");
            let factors = array(field(obj, "factors", path)?, &fp)?
                .iter()
                .enumerate()
                .map(|(i, f)| parse_group(f, &index(&fp, i)))
                .collect::<DocResult<Vec<_>>>()?;
            lift(path, Group::product(factors))
        }
        other => fail(&join(path, "kind"), format!("unknown group kind `{other}`")),
    }
}

pub fn emit_group(g: &Group) -> Value {
    match g.kind() {
        GroupKind::Integers => json!("Z"),
        GroupKind::LatticeZ2 => json!("Z2"),
        GroupKind::RationalCircle => json!("Q1"),
        GroupKind::Cyclic { modulus } => json!(format!("zc {modulus}")),
        GroupKind::Table(t) => {
            let mut obj = json!({
                "kind": "table",
                "table": t.rows(),
                "identity": t.identity(),
                "inverse": t.inverses(),
                "abelian": g.is_abelian(),
                "fc": g.is_fc(),
            });
            if let Some(labels) = t.labels() {
                obj["labels"] = json!(labels);
            }
            obj
        }
        GroupKind::Product(fs) => json!({
            "kind": "product",
            "factors": fs.iter().map(emit_group).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_element(g: &Group, v: &Value, path: &str) -> DocResult<Element> {
    let x = match g.kind() {
        GroupKind::Cyclic { .. } => {
            let r = v.as_u64().map_or_else(|| fail(path, "expected a residue"), Ok)?;
            Element::Residue(r)
        }
        GroupKind::Table(t) => match v {
            Value::String(s) => match t.label_index(s) {
                Some(i) => Element::Index(i),
                None => return fail(path, format!("unknown element label `{s}`")),
            },
            _ => Element::Index(usize_of(v, path)?),
        },
        GroupKind::Integers => Element::Int(bigint_of(v, path)?),
        GroupKind::LatticeZ2 => {
            let a = array(v, path)?;
            if a.len() != 2 {
                return fail(path, "expected a lattice point [x, y]");
            }
            Element::Pair(bigint_of(&a[0], &index(path, 0))?, bigint_of(&a[1], &index(path, 1))?)
        }
        GroupKind::RationalCircle => {
            let q = rational_of(v, path)?;
            if q < rational::zero() || q >= rational::one() {
                return fail(path, format!("{q} is not in [0, 1)"));
            }
            Element::frac(q)
        }
        GroupKind::Product(fs) => {
            let a = array(v, path)?;
            if a.len() != fs.len() {
                return fail(path, format!("expected {} components", fs.len()));
            }
            Element::Tuple(
                fs.iter()
                    .zip(a)
                    .enumerate()
                    .map(|(i, (f, x))| parse_element(f, x, &index(path, i)))
                    .collect::<DocResult<Vec<_>>>()?,
            )
        }
    };
    lift(path, g.check(&x))?;
    Ok(x)
}

pub fn emit_element(g: &Group, x: &Element) -> Value {
    match (g.kind(), x) {
        (GroupKind::Table(t), Element::Index(i)) => match t.labels() {
            Some(ls) => json!(ls[*i]),
            None => json!(i),
        },
        (GroupKind::Product(fs), Element::Tuple(xs)) => {
            Value::Array(fs.iter().zip(xs).map(|(f, x)| emit_element(f, x)).collect())
        }
        (_, Element::Residue(r)) => json!(r),
        (_, Element::Index(i)) => json!(i),
        (_, Element::Int(n)) => int_value(n),
        (_, Element::Pair(a, b)) => json!([int_value(a), int_value(b)]),
        (_, Element::Frac(q)) => rat(q),
        (_, Element::Tuple(xs)) => Value::Array(xs.iter().map(|x| emit_element(g, x)).collect()),
    }
}

// ---------------------------------------------------------------------------
// Payoff functions

fn parse_predicate(v: &Value, path: &str) -> DocResult<PredicateZ2> {
    let obj = object(v, path)?;
    let parts = |key: &str| -> DocResult<Vec<PredicateZ2>> {
        let p = join(path, key);
        array(field(obj, key, path)?, &p)?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_predicate(x, &index(&p, i)))
            .collect()
    };
    match kind(obj, path)? {
        "cone" | "cone-z2" => {
            let u = pair_of(field(obj, "u", path)?, &join(path, "u"))?;
            let v = pair_of(field(obj, "v", path)?, &join(path, "v"))?;
            lift(path, PredicateZ2::cone(u, v))
        }
        "periodic" | "periodic-z2" => {
            let (m1, m2) = pair_of(field(obj, "periods", path)?, &join(path, "periods"))?;
            let (m1, m2) = match (u32::try_from(m1), u32::try_from(m2)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return fail(&join(path, "periods"), "periods must be positive"),
            };
            let tp = join(path, "table");
            let table = array(field(obj, "table", path)?, &tp)?
                .iter()
                .enumerate()
                .map(|(i, x)| bool_of(x, &index(&tp, i)))
                .collect::<DocResult<Vec<_>>>()?;
            lift(path, PredicateZ2::periodic((m1, m2), table))
        }
        "finite" => {
            let pp = join(path, "points");
            let points = array(field(obj, "points", path)?, &pp)?
                .iter()
                .enumerate()
                .map(|(i, x)| pair_of(x, &index(&pp, i)))
                .collect::<DocResult<_>>()?;
            Ok(PredicateZ2::Finite(points))
        }
        "not" => Ok(PredicateZ2::Not(Box::new(parse_predicate(field(obj, "of", path)?, &join(path, "of"))?))),
        "and" => Ok(PredicateZ2::And(parts("of")?)),
        "or" => Ok(PredicateZ2::Or(parts("of")?)),
        other => fail(&join(path, "kind"), format!("unknown predicate kind `{other}`")),
    }
}

fn emit_predicate(p: &PredicateZ2) -> Value {
    match p {
        PredicateZ2::Cone { u, v } => json!({"kind": "cone", "u": [u.0, u.1], "v": [v.0, v.1]}),
        PredicateZ2::Periodic { periods, table } => {
            json!({"kind": "periodic", "periods": [periods.0, periods.1], "table": table})
        }
        PredicateZ2::Finite(points) => json!({
            "kind": "finite",
            "points": points.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        }),
        PredicateZ2::Not(q) => json!({"kind": "not", "of": emit_predicate(q)}),
        PredicateZ2::And(qs) => json!({"kind": "and", "of": qs.iter().map(emit_predicate).collect::<Vec<_>>()}),
        PredicateZ2::Or(qs) => json!({"kind": "or", "of": qs.iter().map(emit_predicate).collect::<Vec<_>>()}),
    }
}

pub fn parse_payoff(g: &Group, v: &Value, path: &str) -> DocResult<PayoffFn> {
    let obj = object(v, path)?;
    let phi: PayoffFn = match kind(obj, path)? {
        "table" => {
            let values = rationals_of(field(obj, "values", path)?, &join(path, "values"))?;
            lift(path, TableFn::new(g.clone(), values))?.into()
        }
        "ep-z" | "eventually-periodic" => {
            let period = usize_of(field(obj, "period", path)?, &join(path, "period"))?;
            let right = rationals_of(field(obj, "right", path)?, &join(path, "right"))?;
            let left = rationals_of(field(obj, "left", path)?, &join(path, "left"))?;
            let radius = usize_of(field(obj, "core_radius", path)?, &join(path, "core_radius"))?;
            let core = rationals_of(field(obj, "core", path)?, &join(path, "core"))?;
            lift(path, EpFn::new(period, right, left, radius, core))?.into()
        }
        "step-q1" | "step" => {
            let breakpoints = rationals_of(field(obj, "breakpoints", path)?, &join(path, "breakpoints"))?;
            let pp = join(path, "pieces");
            let pieces = array(field(obj, "pieces", path)?, &pp)?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let ip = index(&pp, i);
                    let o = object(x, &ip)?;
                    let slope = match o.get("slope") {
                        Some(s) => rational_of(s, &join(&ip, "slope"))?,
                        None => rational::zero(),
                    };
                    let intercept = rational_of(field(o, "intercept", &ip)?, &join(&ip, "intercept"))?;
                    Ok(Piece::linear(slope, intercept))
                })
                .collect::<DocResult<Vec<_>>>()?;
            let mut points = BTreeMap::new();
            if let Some(ps) = obj.get("points") {
                let pp = join(path, "points");
                for (i, x) in array(ps, &pp)?.iter().enumerate() {
                    let ip = index(&pp, i);
                    let o = object(x, &ip)?;
                    let at = rational_of(field(o, "at", &ip)?, &join(&ip, "at"))?;
                    let value = rational_of(field(o, "value", &ip)?, &join(&ip, "value"))?;
                    if points.insert(at.clone(), value).is_some() {
                        return fail(&ip, format!("point {at} listed twice"));
                    }
                }
            }
            lift(path, StepFn::new(breakpoints, pieces, points))?.into()
        }
        "cone-z2" | "periodic-z2" => parse_predicate(v, path)?.into(),
        "predicate" => parse_predicate(field(obj, "set", path)?, &join(path, "set"))?.into(),
        other => return fail(&join(path, "kind"), format!("unknown payoff kind `{other}`")),
    };
    lift(path, phi.check_group(g))?;
    Ok(phi)
}

pub fn emit_payoff(phi: &PayoffFn) -> Value {
    let rats = |xs: &[Rational]| xs.iter().map(rat).collect::<Vec<_>>();
    match phi {
        PayoffFn::Table(t) => json!({"kind": "table", "values": rats(t.values())}),
        PayoffFn::Ep(f) => json!({
            "kind": "ep-z",
            "period": f.period(),
            "right": rats(f.right()),
            "left": rats(f.left()),
            "core_radius": f.core_radius(),
            "core": rats(f.core()),
        }),
        PayoffFn::Step(f) => json!({
            "kind": "step-q1",
            "breakpoints": rats(f.breakpoints()),
            "pieces": f.pieces().iter().map(|p| json!({"slope": rat(&p.slope), "intercept": rat(&p.intercept)})).collect::<Vec<_>>(),
            "points": f.points().iter().map(|(a, v)| json!({"at": rat(a), "value": rat(v)})).collect::<Vec<_>>(),
        }),
        PayoffFn::Predicate(p @ (PredicateZ2::Cone { .. } | PredicateZ2::Periodic { .. })) => {
            let mut v = emit_predicate(p);
            let tag = format!("{}-z2", v["kind"].as_str().unwrap_or_default());
            v["kind"] = json!(tag);
            v
        }
        PayoffFn::Predicate(p) => json!({"kind": "predicate", "set": emit_predicate(p)}),
    }
}

// ---------------------------------------------------------------------------
// Bijections

pub fn parse_bijection(g: &Group, v: &Value, path: &str) -> DocResult<Bijection> {
    if v.as_str() == Some("identity") {
        return Ok(Bijection::Identity);
    }
    if v.as_str() == Some("inverse") {
        return lift(path, Bijection::group_inverse(g));
    }
    let obj = object(v, path)?;
    let eta = match kind(obj, path)? {
        "identity" => Bijection::Identity,
        "inverse" => lift(path, Bijection::group_inverse(g))?,
        "affine" => {
            let s = i64_of(field(obj, "sign", path)?, &join(path, "sign"))?;
            let sign = lift(&join(path, "sign"), Sign::from_i64(s))?;
            let sp = join(path, "shift");
            match g.kind() {
                GroupKind::Integers => {
                    let shift = match obj.get("shift") {
                        Some(x) => bigint_of(x, &sp)?,
                        None => BigInt::from(0),
                    };
                    Bijection::affine_z(sign, shift)
                }
                GroupKind::RationalCircle => {
                    let shift = match obj.get("shift") {
                        Some(x) => rational_of(x, &sp)?,
                        None => rational::zero(),
                    };
                    Bijection::affine_q1(sign, shift)
                }
                _ => return fail(path, format!("affine maps need Z or Q1, not {}", g.tag())),
            }
        }
        "permutation" => {
            let pp = join(path, "perm");
            let perm = array(field(obj, "perm", path)?, &pp)?
                .iter()
                .enumerate()
                .map(|(i, x)| usize_of(x, &index(&pp, i)))
                .collect::<DocResult<Vec<_>>>()?;
            lift(path, Bijection::permutation(perm))?
        }
        other => return fail(&join(path, "kind"), format!("unknown bijection kind `{other}`")),
    };
    lift(path, eta.check_compatible(g))?;
    Ok(eta)
}

pub fn emit_bijection(g: &Group, eta: &Bijection) -> Value {
    match eta {
        Bijection::Identity => json!("identity"),
        Bijection::AffineZ { sign, shift } => {
            json!({"kind": "affine", "sign": sign.as_i64(), "shift": int_value(shift)})
        }
        Bijection::AffineQ1 { sign, shift } => json!({"kind": "affine", "sign": sign.as_i64(), "shift": rat(shift)}),
        Bijection::Permutation(p) => {
            if Bijection::group_inverse(g).ok().as_ref() == Some(eta) {
                json!("inverse")
            } else {
                json!({"kind": "permutation", "perm": p})
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Measures and profiles

pub fn parse_measure(g: &Group, v: &Value, path: &str) -> DocResult<Measure> {
    if let Some(s) = v.as_str() {
        let m = match s.split_once(' ').map(|(a, b)| (a, b.trim())) {
            None if s == "interval-mean" => Measure::IntervalMean,
            None if s == "uniform" => Measure::Uniform,
            Some(("two-ended", t)) => {
                lift(path, Measure::two_ended(lift(path, rational::parse(t))?))?
            }
            Some(("dirac", x)) => {
                let x = serde_json::from_str(x).unwrap_or_else(|_| Value::String(x.to_string()));
                Measure::dirac(parse_element(g, &x, path)?)
            }
            _ => return fail(path, format!("unknown measure `{s}`")),
        };
        lift(path, m.validate(g))?;
        return Ok(m);
    }
    let obj = object(v, path)?;
    let m = match kind(obj, path)? {
        "finite" => {
            let sp = join(path, "support");
            let entries = array(field(obj, "support", path)?, &sp)?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let ip = index(&sp, i);
                    let o = object(x, &ip)?;
                    let at = parse_element(g, field(o, "at", &ip)?, &join(&ip, "at"))?;
                    let w = rational_of(field(o, "weight", &ip)?, &join(&ip, "weight"))?;
                    Ok((at, w))
                })
                .collect::<DocResult<Vec<_>>>()?;
            Measure::Finite(lift(&sp, FiniteMeasure::new(entries))?)
        }
        "dirac" => Measure::dirac(parse_element(g, field(obj, "at", path)?, &join(path, "at"))?),
        "two-ended" => {
            let theta = rational_of(field(obj, "theta", path)?, &join(path, "theta"))?;
            lift(&join(path, "theta"), Measure::two_ended(theta))?
        }
        "interval-mean" => Measure::IntervalMean,
        "uniform" => Measure::Uniform,
        "mix" | "mixture" => {
            let w = rational_of(field(obj, "weight", path)?, &join(path, "weight"))?;
            let a = parse_measure(g, field(obj, "first", path)?, &join(path, "first"))?;
            let b = parse_measure(g, field(obj, "second", path)?, &join(path, "second"))?;
            lift(path, Measure::mixture(w, a, b))?
        }
        other => return fail(&join(path, "kind"), format!("unknown measure kind `{other}`")),
    };
    lift(path, m.validate(g))?;
    Ok(m)
}

pub fn emit_measure(g: &Group, m: &Measure) -> Value {
    match m {
        Measure::Finite(f) => json!({
            "kind": "finite",
            "support": f.iter().map(|(x, w)| json!({"at": emit_element(g, x), "weight": rat(w)})).collect::<Vec<_>>(),
        }),
        Measure::TwoEnded(t) => json!({"kind": "two-ended", "theta": rat(t)}),
        Measure::IntervalMean => json!("interval-mean"),
        Measure::Uniform => json!("uniform"),
        Measure::Mixture { weight, first, second } => json!({
            "kind": "mix",
            "weight": rat(weight),
            "first": emit_measure(g, first),
            "second": emit_measure(g, second),
        }),
    }
}

/// A profile is either a bare array of measures or an object with a
/// `profile` array.
pub fn parse_profile(game: &GameSpec, v: &Value, path: &str) -> DocResult<Profile> {
    let (list, lp) = match v {
        Value::Array(a) => (a, path.to_string()),
        Value::Object(o) => {
            let lp = join(path, "profile");
            (array(field(o, "profile", path)?, &lp)?, lp)
        }
        _ => return fail(path, "expected a profile"),
    };
    if list.len() != game.players() {
        return fail(&lp, format!("{} measures for {} players", list.len(), game.players()));
    }
    let measures = list
        .iter()
        .enumerate()
        .map(|(i, m)| parse_measure(game.group(), m, &index(&lp, i)))
        .collect::<DocResult<Vec<_>>>()?;
    let profile = Profile::new(measures);
    lift(&lp, profile.validate(game))?;
    Ok(profile)
}

pub fn emit_profile(game: &GameSpec, p: &Profile) -> Value {
    Value::Array(p.measures().iter().map(|m| emit_measure(game.group(), m)).collect())
}

// ---------------------------------------------------------------------------
// Order weights

fn parse_order(v: &Value, players: usize, path: &str) -> DocResult<Vec<usize>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = usize_of(x, &index(path, i))?;
            if p == 0 || p > players {
                return fail(&index(path, i), format!("player {p} is not in 1..={players}"));
            }
            Ok(p - 1)
        })
        .collect()
}

pub fn parse_nu(v: &Value, players: usize, path: &str) -> DocResult<OrderWeights> {
    if v.as_str() == Some("uniform") {
        return lift(path, OrderWeights::uniform(players));
    }
    if let Value::Array(list) = v {
        return parse_weights(list, players, path);
    }
    let obj = object(v, path)?;
    if let Some(order) = obj.get("single") {
        let order = parse_order(order, players, &join(path, "single"))?;
        return lift(&join(path, "single"), OrderWeights::single(order));
    }
    let wp = join(path, "weights");
    parse_weights(array(field(obj, "weights", path)?, &wp)?, players, &wp)
}

fn parse_weights(list: &[Value], players: usize, wp: &str) -> DocResult<OrderWeights> {
    let entries = list
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let ip = index(wp, i);
            let o = object(x, &ip)?;
            let order = parse_order(field(o, "order", &ip)?, players, &join(&ip, "order"))?;
            let w = rational_of(field(o, "weight", &ip)?, &join(&ip, "weight"))?;
            Ok((order, w))
        })
        .collect::<DocResult<Vec<_>>>()?;
    lift(wp, OrderWeights::explicit(players, entries))
}

/// Command-line form: `uniform`, an order such as `2,1`, or weighted orders
/// such as `1,2=1/3;2,1=2/3`.
pub fn parse_nu_flag(text: &str, players: usize) -> DocResult<OrderWeights> {
    let path = "--nu";
    let t = text.trim();
    if t == "uniform" {
        return lift(path, OrderWeights::uniform(players));
    }
    let order = |s: &str| -> DocResult<Vec<usize>> {
        s.split(',')
            .map(|p| match p.trim().parse::<usize>() {
                Ok(k) if k >= 1 && k <= players => Ok(k - 1),
                _ => fail(path, format!("`{p}` is not a player in 1..={players}")),
            })
            .collect()
    };
    if !t.contains('=') {
        return lift(path, OrderWeights::single(order(t)?));
    }
    let entries = t
        .split(';')
        .map(|part| {
            let (o, w) = part.split_once('=').map_or_else(|| fail(path, format!("`{part}` needs ORDER=WEIGHT")), Ok)?;
            Ok((order(o)?, lift(path, rational::parse(w))?))
        })
        .collect::<DocResult<Vec<_>>>()?;
    lift(path, OrderWeights::explicit(players, entries))
}

pub fn emit_nu(nu: &OrderWeights) -> Value {
    match nu {
        OrderWeights::Uniform { .. } => json!("uniform"),
        OrderWeights::Explicit { weights, .. } => Value::Array(
            weights
                .iter()
                .map(|(o, w)| json!({"order": one_based(o), "weight": rat(w)}))
                .collect(),
        ),
    }
}

pub fn one_based(order: &[usize]) -> Vec<usize> {
    order.iter().map(|p| p + 1).collect()
}

// ---------------------------------------------------------------------------
// Games

/// A parsed game document with its optional embedded profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDocument {
    pub game: GameSpec,
    pub profile: Option<Profile>,
}

pub fn parse_game(v: &Value) -> DocResult<GameDocument> {
    let obj = object(v, "")?;
    let group = parse_group(field(obj, "group", "")?, "group")?;
    let players = usize_of(field(obj, "players", "")?, "players")?;
    let list = |key: &str| -> DocResult<&Vec<Value>> {
        let a = array(field(obj, key, "")?, key)?;
        if a.len() != players {
            return fail(key, format!("{} entries for {} players", a.len(), players));
        }
        Ok(a)
    };
    let phi = list("phi")?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_payoff(&group, x, &index("phi", i)))
        .collect::<DocResult<Vec<_>>>()?;
    let eta = match obj.get("eta") {
        None | Some(Value::Null) => vec![Bijection::Identity; players],
        Some(_) => list("eta")?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_bijection(&group, x, &index("eta", i)))
            .collect::<DocResult<Vec<_>>>()?,
    };
    let neighborhoods = match obj.get("neighborhoods") {
        None | Some(Value::Null) => None,
        Some(_) => Some(
            list("neighborhoods")?
                .iter()
                .enumerate()
                .map(|(i, x)| parse_order(x, players, &index("neighborhoods", i)))
                .collect::<DocResult<Vec<_>>>()?,
        ),
    };
    let nu = match obj.get("nu") {
        None | Some(Value::Null) => lift("nu", OrderWeights::uniform(players))?,
        Some(n) => parse_nu(n, players, "nu")?,
    };
    let game = lift("", GameSpec::new(group, phi, eta, neighborhoods, nu))?;
    let profile = match obj.get("profile") {
        None | Some(Value::Null) => None,
        Some(p) => Some(parse_profile(&game, p, "profile")?),
    };
    Ok(GameDocument { game, profile })
}

pub fn emit_game(doc: &GameDocument) -> Value {
    let game = &doc.game;
    let g = game.group();
    let mut obj = Map::new();
    obj.insert("group".into(), emit_group(g));
    obj.insert("players".into(), json!(game.players()));
    obj.insert("phi".into(), Value::Array(game.phis().iter().map(emit_payoff).collect()));
    obj.insert(
        "eta".into(),
        Value::Array(game.etas().iter().map(|e| emit_bijection(g, e)).collect()),
    );
    if !game.is_complete() {
        obj.insert(
            "neighborhoods".into(),
            Value::Array(game.neighborhoods().iter().map(|n| json!(one_based(n))).collect()),
        );
    }
    obj.insert("nu".into(), emit_nu(game.nu()));
    if let Some(p) = &doc.profile {
        obj.insert("profile".into(), emit_profile(game, p));
    }
    Value::Object(obj)
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
