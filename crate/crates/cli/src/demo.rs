//! One demo per worked example game.

use anyhow::bail;
use groupgames::catalog;
use groupgames::foelner::{build_window, invariance_defect, upper_banach_density, window_mean, WindowSpec};
use groupgames::rational::{int, ratio};
use groupgames::{
    construct_equilibrium, deviation_value, fubini_gap, payoff_nu, verify_equilibrium, Element, EpFn,
    GameSpec, Measure, OrderWeights, PayoffFn, PredicateZ2, Profile,
};
use serde_json::{json, Value};

use crate::doc::{emit_element, emit_game, emit_measure, emit_nu, emit_profile, rat, GameDocument};
use crate::report;

pub const DEMOS: &[&str] = &[
    "mp-finite",
    "rsp-finite",
    "mp-z",
    "wald",
    "rsp-q1",
    "cones-z2",
    "love-hate",
    "fubini-remark",
];

/// Returns the report and whether every claimed certification held.
pub fn run(name: &str) -> anyhow::Result<(Value, bool)> {
    match name {
        "mp-finite" => finite(catalog::matching_pennies(), name),
        "rsp-finite" => rsp_finite(),
        "mp-z" => pennies_z(),
        "wald" => wald(),
        "rsp-q1" => rsp_q1(),
        "cones-z2" => cones(),
        "love-hate" => love_hate(),
        "fubini-remark" => fubini_remark(),
        other => bail!("unknown demo `{other}`; expected one of {}", DEMOS.join(", ")),
    }
}

fn orders() -> Vec<OrderWeights> {
    vec![
        OrderWeights::uniform(2).expect("two players"),
        OrderWeights::single(vec![0, 1]).expect("order"),
        OrderWeights::single(vec![1, 0]).expect("order"),
    ]
}

fn document(game: &GameSpec) -> Value {
    emit_game(&GameDocument { game: game.clone(), profile: None })
}

fn finite(game: GameSpec, name: &str) -> anyhow::Result<(Value, bool)> {
    let solved = report::solve(&game, game.nu(), false)?;
    let ok = solved["verification"]["certified"] == json!(true);
    Ok((json!({"demo": name, "game": document(&game), "solve": solved}), ok))
}

fn rsp_finite() -> anyhow::Result<(Value, bool)> {
    let (mut v, ok) = finite(catalog::rock_scissors_paper(), "rsp-finite")?;
    let g = catalog::rsp_group();
    let names = ["R", "P", "S"];
    let table: Vec<Value> = (0..3)
        .map(|a| {
            let row: Vec<Value> = (0..3)
                .map(|b| {
                    let c = g.combine(&Element::Index(a), &Element::Index(b)).expect("table element");
                    emit_element(&g, &c)
                })
                .collect();
            json!({"row": names[a], "products": row})
        })
        .collect();
    v["group_table"] = Value::Array(table);
    Ok((v, ok))
}

fn pennies_z() -> anyhow::Result<(Value, bool)> {
    let game = catalog::matching_pennies_z();
    let grid: Vec<_> = (0..=4).map(|k| ratio(k, 4)).collect();
    let mut rows = Vec::new();
    let mut ok = true;
    for a in &grid {
        for b in &grid {
            let profile = Profile::new(vec![Measure::TwoEnded(a.clone()), Measure::TwoEnded(b.clone())]);
            let r = verify_equilibrium(&game, &profile, game.nu())?;
            ok &= r.certified;
            rows.push(json!({
                "theta": [rat(a), rat(b)],
                "u1": rat(&r.entries[0].payoff),
                "gaps": r.entries.iter().map(|e| rat(&e.gap)).collect::<Vec<_>>(),
                "certified": r.certified,
            }));
        }
    }
    let mod2 = catalog::mod2_profile();
    let m = report::verify(&game, &mod2, game.nu(), false)?;
    ok &= m["certified"] == json!(true);
    Ok((
        json!({
            "demo": "mp-z",
            "game": document(&game),
            "two_ended_grid": rows,
            "mod2_profile": m,
        }),
        ok,
    ))
}

fn wald() -> anyhow::Result<(Value, bool)> {
    let game = catalog::wald();
    let constructed = construct_equilibrium(&game)?;
    let mut ok = true;
    let mut by_order = Vec::new();
    for nu in orders() {
        let r = verify_equilibrium(&game, &constructed, &nu)?;
        ok &= r.certified;
        by_order.push(json!({
            "nu": emit_nu(&nu),
            "payoffs": r.entries.iter().map(|e| rat(&e.payoff)).collect::<Vec<_>>(),
            "gaps": r.entries.iter().map(|e| rat(&e.gap)).collect::<Vec<_>>(),
            "certified": r.certified,
        }));
    }
    let stated = catalog::wald_stated_profile();
    let mut stated_rows = Vec::new();
    for nu in orders() {
        let r = verify_equilibrium(&game, &stated, &nu)?;
        stated_rows.push(json!({
            "nu": emit_nu(&nu),
            "payoffs": r.entries.iter().map(|e| rat(&e.payoff)).collect::<Vec<_>>(),
            "gaps": r.entries.iter().map(|e| rat(&e.gap)).collect::<Vec<_>>(),
            "certified": r.certified,
        }));
    }
    Ok((
        json!({
            "demo": "wald",
            "game": document(&game),
            "constructed": {
                "profile": emit_profile(&game, &constructed),
                "report": report::verify(&game, &constructed, game.nu(), false)?,
                "by_order": by_order,
            },
            "alternative_profile": {
                "note": "player 2 places its mass toward -infinity in y; its gap equals the weight of the orders that integrate player 2 first",
                "profile": emit_profile(&game, &stated),
                "by_order": stated_rows,
            },
        }),
        ok,
    ))
}

fn rsp_q1() -> anyhow::Result<(Value, bool)> {
    let (alpha, beta) = (ratio(1, 3), ratio(2, 3));
    let game = catalog::rock_scissors_paper_q1(&alpha, &beta)?;
    let profile = Profile::new(vec![Measure::IntervalMean, Measure::IntervalMean]);
    let r = report::verify(&game, &profile, game.nu(), false)?;
    let ok = r["certified"] == json!(true);
    let samples: Vec<Value> = [0i64, 1, 5, 8, 11]
        .iter()
        .map(|&k| {
            let x = Element::frac(ratio(k, 12));
            let v = deviation_value(&game, &profile, 0, &Measure::dirac(x.clone()), game.nu())?;
            Ok(json!({"at": emit_element(game.group(), &x), "payoff": rat(&v)}))
        })
        .collect::<groupgames::Result<_>>()?;
    Ok((
        json!({
            "demo": "rsp-q1",
            "alpha": rat(&alpha),
            "beta": rat(&beta),
            "game": document(&game),
            "report": r,
            "pure_deviations_player1": samples,
        }),
        ok,
    ))
}

fn cones() -> anyhow::Result<(Value, bool)> {
    let game = catalog::cones_z2();
    let group = game.group();
    let mut players = Vec::new();
    let mut ok = true;
    for i in 0..game.players() {
        let PayoffFn::Predicate(cone) = game.phi(i) else {
            bail!("cone game payoffs are predicates");
        };
        let mut density = Vec::new();
        let mut defect = Vec::new();
        for n in [1u64, 2, 5, 10, 20, 50, 100, 200] {
            let w = build_window(group, &WindowSpec::Z2Cone { n, cone: cone.clone() })?;
            let d = window_mean(game.phi(i), &w)?;
            ok &= d == int(1);
            density.push(json!({"n": n, "window_size": w.size().to_string(), "value": rat(&d)}));
            let g = Element::pair(1, 1);
            defect.push(json!({"n": n, "g": [1, 1], "defect": rat(&invariance_defect(&w, &g)?)}));
        }
        let banach = upper_banach_density(game.phi(i), 40, 400)?;
        players.push(json!({
            "player": i + 1,
            "cone": match cone {
                PredicateZ2::Cone { u, v } => json!({"u": [u.0, u.1], "v": [v.0, v.1]}),
                _ => Value::Null,
            },
            "density_on_own_windows": density,
            "defect_sweep": defect,
            "banach_density_n40": rat(&banach),
        }));
    }
    Ok((
        json!({
            "demo": "cones-z2",
            "game": document(&game),
            "note": "invariant means on Z2 exist only as limits of window measures; the sweep shows each player's window measures give its own cone full mass while the windows become invariant",
            "players": players,
        }),
        ok,
    ))
}

fn love_hate() -> anyhow::Result<(Value, bool)> {
    let game = catalog::love_and_hate(2)?;
    let profile = Profile::new(vec![Measure::IntervalMean; 4]);
    let r = report::verify(&game, &profile, game.nu(), false)?;
    let ok = r["certified"] == json!(true);
    Ok((json!({"demo": "love-hate", "game": document(&game), "report": r}), ok))
}

fn fubini_remark() -> anyhow::Result<(Value, bool)> {
    let nat: PayoffFn = EpFn::indicator_naturals().into();
    let low = Measure::TwoEnded(int(0));
    let high = Measure::TwoEnded(int(1));
    let pairs = [
        (low.clone(), high.clone()),
        (Measure::dirac(Element::int(-5)), high.clone()),
        (Measure::dirac(Element::int(3)), high.clone()),
        (low.clone(), low.clone()),
    ];
    let z = groupgames::Group::integers();
    let rows = pairs
        .iter()
        .map(|(mu, lambda)| {
            let (inner_mu, inner_lambda) = fubini_gap(&nat, mu, lambda)?;
            Ok(json!({
                "mu": emit_measure(&z, mu),
                "lambda": emit_measure(&z, lambda),
                "mu_innermost": rat(&inner_mu),
                "lambda_innermost": rat(&inner_lambda),
            }))
        })
        .collect::<groupgames::Result<Vec<_>>>()?;
    // Same functional through a game: u = 1_N(x + y) for both players.
    let game = GameSpec::new(
        z.clone(),
        vec![nat.clone(), nat],
        vec![groupgames::Bijection::Identity; 2],
        None,
        OrderWeights::uniform(2)?,
    )?;
    let profile = Profile::new(vec![low, high]);
    let by_order: Vec<Value> = orders()
        .iter()
        .map(|nu| Ok(json!({"nu": emit_nu(nu), "u1": rat(&payoff_nu(&game, &profile, nu, 0)?)})))
        .collect::<groupgames::Result<_>>()?;
    Ok((
        json!({
            "demo": "fubini-remark",
            "function": "indicator of the naturals, evaluated at x + y",
            "pairs": rows,
            "game_payoff_by_order": by_order,
        }),
        true,
    ))
}
