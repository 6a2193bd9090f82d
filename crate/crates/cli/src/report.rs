//! Structured reports for solve, verify, payoff, gap and fubini.

use groupgames::integration::{payoff_terms, Term};
use groupgames::rational::Rational;
use groupgames::{
    construct_equilibrium, i_range, iterated_payoff, verify_equilibrium, z_structure_check,
    Deviation, GameSpec, GapEntry, GapReport, GroupKind, OrderWeights, Profile,
};
use groupgames::equilibrium::{ArgMax, ThetaRequirement};
use itertools::Itertools;
use serde_json::{json, Map, Value};

use crate::doc::{emit_element, emit_measure, emit_nu, emit_profile, one_based, rat};

pub type ReportResult = groupgames::Result<Value>;

/// Which end of each order is integrated first.
pub fn convention(flipped: bool) -> Value {
    if flipped {
        json!("orders list players from the outermost integral inward")
    } else {
        json!("orders list players from the innermost integral outward")
    }
}

/// The weights actually used: `--flip-order` reverses every order.
pub fn effective_nu(nu: &OrderWeights, flipped: bool) -> OrderWeights {
    if flipped {
        nu.reversed()
    } else {
        nu.clone()
    }
}

fn terms_value(terms: &[Term]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| json!({"order": one_based(&t.order), "weight": rat(&t.weight), "value": rat(&t.value)}))
            .collect(),
    )
}

fn deviation_value(game: &GameSpec, d: &Deviation) -> Value {
    match d {
        Deviation::Pure(x) => json!({"kind": "pure", "at": emit_element(game.group(), x)}),
        Deviation::Mean(m) => json!({"kind": "mean", "measure": emit_measure(game.group(), m)}),
        Deviation::Unattained => json!({"kind": "unattained-supremum"}),
    }
}

pub fn gap_entry(game: &GameSpec, e: &GapEntry) -> Value {
    json!({
        "player": e.player + 1,
        "payoff": rat(&e.payoff),
        "terms": terms_value(&e.terms),
        "best_deviation": deviation_value(game, &e.best_deviation),
        "deviation_payoff": rat(&e.deviation_payoff),
        "deviation_terms": terms_value(&e.deviation_terms),
        "gap": rat(&e.gap),
    })
}

pub fn gap_report(game: &GameSpec, r: &GapReport) -> Value {
    json!({
        "certified": r.certified,
        "players": r.entries.iter().map(|e| gap_entry(game, e)).collect::<Vec<_>>(),
    })
}

fn argmax_value(a: &ArgMax) -> Value {
    match a {
        ArgMax::Theta(t) => json!({"kind": "two-ended", "theta": rat(t)}),
        ArgMax::AnyTheta => json!({"kind": "two-ended", "theta": "any"}),
        ArgMax::IntervalMean => json!("interval-mean"),
        ArgMax::Uniform => json!("uniform"),
    }
}

/// Tail-structure check as JSON, or `None` off `Z` or for non-two-ended
/// profiles.
pub fn z_structure(game: &GameSpec, profile: &Profile) -> Option<Value> {
    if !matches!(game.group().kind(), GroupKind::Integers) {
        return None;
    }
    let r = z_structure_check(game, profile).ok()?;
    Some(json!({
        "passes": r.passes,
        "players": r.entries.iter().map(|e| json!({
            "player": e.player + 1,
            "a_minus": rat(&e.a_minus),
            "a_plus": rat(&e.a_plus),
            "theta": rat(&e.theta),
            "required": match e.required {
                ThetaRequirement::One => "1",
                ThetaRequirement::Zero => "0",
                ThetaRequirement::Any => "any",
            },
            "passes": e.passes,
        })).collect::<Vec<_>>(),
    }))
}

pub fn verify(game: &GameSpec, profile: &Profile, nu: &OrderWeights, flipped: bool) -> ReportResult {
    let used = effective_nu(nu, flipped);
    let r = verify_equilibrium(game, profile, &used)?;
    let mut obj = Map::new();
    obj.insert("command".into(), json!("verify"));
    obj.insert("convention".into(), convention(flipped));
    obj.insert("nu".into(), emit_nu(nu));
    obj.insert("profile".into(), emit_profile(game, profile));
    obj.insert("certified".into(), json!(r.certified));
    obj.insert(
        "players".into(),
        Value::Array(r.entries.iter().map(|e| gap_entry(game, e)).collect()),
    );
    if let Some(z) = z_structure(game, profile) {
        obj.insert("tail_structure".into(), z);
    }
    Ok(Value::Object(obj))
}

pub fn solve(game: &GameSpec, nu: &OrderWeights, flipped: bool) -> ReportResult {
    let profile = construct_equilibrium(game)?;
    let ranges = (0..game.players())
        .map(|i| {
            let r = i_range(game.phi(i), game.group())?;
            Ok(json!({
                "player": i + 1,
                "lo": rat(&r.lo),
                "hi": rat(&r.hi),
                "argmax": argmax_value(&r.argmax),
            }))
        })
        .collect::<groupgames::Result<Vec<_>>>()?;
    let used = effective_nu(nu, flipped);
    let r = verify_equilibrium(game, &profile, &used)?;
    let mut obj = Map::new();
    obj.insert("command".into(), json!("solve"));
    obj.insert("convention".into(), convention(flipped));
    obj.insert("nu".into(), emit_nu(nu));
    obj.insert(
        "note".into(),
        json!("each player maximizes the mean of its own payoff in the coordinates eta_i(x_i); ties on Z resolve to theta = 1/2; the construction never reads nu"),
    );
    obj.insert("invariant_mean_ranges".into(), Value::Array(ranges));
    obj.insert("profile".into(), emit_profile(game, &profile));
    obj.insert("verification".into(), gap_report(game, &r));
    if let Some(z) = z_structure(game, &profile) {
        obj.insert("tail_structure".into(), z);
    }
    Ok(Value::Object(obj))
}

pub fn payoff(game: &GameSpec, profile: &Profile, nu: &OrderWeights, flipped: bool) -> ReportResult {
    let used = effective_nu(nu, flipped);
    let players = (0..game.players())
        .map(|i| {
            let terms = payoff_terms(game, profile, &used, i)?;
            let total: Rational = terms.iter().map(|t| &t.weight * &t.value).sum();
            Ok(json!({"player": i + 1, "payoff": rat(&total), "terms": terms_value(&terms)}))
        })
        .collect::<groupgames::Result<Vec<_>>>()?;
    Ok(json!({
        "command": "payoff",
        "convention": convention(flipped),
        "nu": emit_nu(nu),
        "profile": emit_profile(game, profile),
        "players": players,
    }))
}

pub fn gap(game: &GameSpec, profile: &Profile, player: usize, nu: &OrderWeights, flipped: bool) -> ReportResult {
    let used = effective_nu(nu, flipped);
    let e = groupgames::best_response_gap(game, profile, player, &used)?;
    Ok(json!({
        "command": "gap",
        "convention": convention(flipped),
        "nu": emit_nu(nu),
        "profile": emit_profile(game, profile),
        "entry": gap_entry(game, &e),
    }))
}

/// Every order of each neighborhood, evaluated separately, to expose
/// order dependence.
pub fn fubini(game: &GameSpec, profile: &Profile) -> ReportResult {
    let players = (0..game.players())
        .map(|i| {
            let hood = game.neighborhood(i);
            let values = hood
                .iter()
                .copied()
                .permutations(hood.len())
                .map(|order| {
                    let v = iterated_payoff(game, profile, &order, i)?;
                    Ok((order, v))
                })
                .collect::<groupgames::Result<Vec<_>>>()?;
            let agree = values.iter().all(|(_, v)| v == &values[0].1);
            Ok(json!({
                "player": i + 1,
                "orders": values.iter().map(|(o, v)| json!({"order": one_based(o), "value": rat(v)})).collect::<Vec<_>>(),
                "orders_agree": agree,
            }))
        })
        .collect::<groupgames::Result<Vec<_>>>()?;
    Ok(json!({
        "command": "fubini",
        "convention": convention(false),
        "profile": emit_profile(game, profile),
        "players": players,
    }))
}
