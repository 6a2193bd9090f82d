//! Acceptance runner: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use groupgames::catalog;
use groupgames::foelner::{build_window, density_sweep, invariance_defect, window_mean, WindowSpec};
use groupgames::rational::{factorial, int, ratio};
use groupgames::{
    best_response_gap, construct_equilibrium, deviation_value, fubini_gap, integrate, payoff_nu,
    verify_equilibrium, z_structure_check, Element, EpFn, GameSpec, Group, Measure,
    OrderWeights, PayoffFn, PredicateZ2, Profile, Rational, StepFn,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn nus() -> Vec<OrderWeights> {
    vec![
        OrderWeights::uniform(2).unwrap(),
        OrderWeights::single(vec![0, 1]).unwrap(),
        OrderWeights::single(vec![1, 0]).unwrap(),
    ]
}

/// Exhaustive pure deviations by direct enumeration on a finite group.
fn best_pure(game: &GameSpec, profile: &Profile, i: usize) -> Result<Rational, String> {
    let mut best: Option<Rational> = None;
    for x in game.group().elements().map_err(err)? {
        let v = deviation_value(game, profile, i, &Measure::dirac(x), game.nu()).map_err(err)?;
        best = Some(match best {
            Some(b) if b >= v => b,
            _ => v,
        });
    }
    best.ok_or_else(|| "empty group".to_string())
}

fn criterion_1() -> Outcome {
    let game = catalog::matching_pennies();
    let profile = construct_equilibrium(&game).map_err(err)?;
    ensure!(
        profile.measures() == [Measure::Uniform, Measure::Uniform],
        "constructed {:?}",
        profile
    );
    for i in 0..2 {
        let u = payoff_nu(&game, &profile, game.nu(), i).map_err(err)?;
        ensure!(u.is_zero(), "player {} value {}", i + 1, u);
        let gap = best_pure(&game, &profile, i)? - &u;
        ensure!(gap.is_zero(), "player {} exhaustive gap {}", i + 1, gap);
        let entry = best_response_gap(&game, &profile, i, game.nu()).map_err(err)?;
        ensure!(entry.gap.is_zero(), "player {} reported gap {}", i + 1, entry.gap);
    }
    Ok("uniform pair, values 0 and 0, gaps 0".into())
}

fn criterion_2() -> Outcome {
    let g = catalog::rsp_group();
    let (r, p, s) = (Element::Index(0), Element::Index(1), Element::Index(2));
    for (a, b) in [(&r, &r), (&p, &s), (&s, &p)] {
        ensure!(g.combine(a, b).map_err(err)? == r, "{:?}*{:?} is not R", a, b);
    }
    let game = catalog::rock_scissors_paper();
    let profile = construct_equilibrium(&game).map_err(err)?;
    ensure!(profile.measures() == [Measure::Uniform, Measure::Uniform], "constructed {:?}", profile);
    let u1 = payoff_nu(&game, &profile, game.nu(), 0).map_err(err)?;
    ensure!(u1 == ratio(1, 2), "u_1 = {}", u1);
    for i in 0..2 {
        let u = payoff_nu(&game, &profile, game.nu(), i).map_err(err)?;
        let gap = best_pure(&game, &profile, i)? - &u;
        ensure!(gap.is_zero(), "player {} gap {}", i + 1, gap);
    }
    Ok("R*R = P*S = S*P = R, u_1 = 1/2, gaps 0".into())
}

fn criterion_3() -> Outcome {
    let game = catalog::wald();
    let profile = construct_equilibrium(&game).map_err(err)?;
    for nu in nus() {
        let report = verify_equilibrium(&game, &profile, &nu).map_err(err)?;
        ensure!(report.certified, "not certified under {:?}", nu);
        for e in &report.entries {
            ensure!(e.gap.is_zero(), "player {} gap {} under {:?}", e.player + 1, e.gap, nu);
        }
    }
    let uniform = OrderWeights::uniform(2).unwrap();
    let u: Vec<Rational> = (0..2)
        .map(|i| payoff_nu(&game, &profile, &uniform, i))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure!(u == [ratio(1, 2), ratio(1, 2)], "payoffs {:?}", u);
    let nat: PayoffFn = EpFn::indicator_naturals().into();
    let f = fubini_gap(&nat, &Measure::TwoEnded(int(0)), &Measure::TwoEnded(int(1))).map_err(err)?;
    ensure!(f == (int(0), int(1)), "fubini {:?}", f);

    // The profile with player 2's mass toward −∞.
    let stated = catalog::wald_stated_profile();
    let mut gaps = Vec::new();
    for nu in nus() {
        let weight: Rational = nu.terms().into_iter().filter(|(o, _)| o[0] == 1).map(|(_, w)| w).sum();
        let report = verify_equilibrium(&game, &stated, &nu).map_err(err)?;
        ensure!(
            report.entries[1].gap == weight,
            "stated profile player-2 gap {} vs order weight {}",
            report.entries[1].gap,
            weight
        );
        gaps.push(report.entries[1].gap.to_string());
    }
    Ok(format!(
        "constructed profile certified, payoffs (1/2, 1/2), fubini (0, 1); stated profile player-2 gaps {} (flagged: sign question)",
        gaps.join(", ")
    ))
}

fn criterion_4() -> Outcome {
    let game = catalog::matching_pennies_z();
    let grid: Vec<Rational> = (0..=4).map(|k| ratio(k, 4)).collect();
    let mut count = 0;
    for a in &grid {
        for b in &grid {
            let profile = Profile::new(vec![Measure::TwoEnded(a.clone()), Measure::TwoEnded(b.clone())]);
            for nu in nus() {
                let u1 = payoff_nu(&game, &profile, &nu, 0).map_err(err)?;
                ensure!(u1 == ratio(1, 2), "u_1 = {} at θ = ({}, {})", u1, a, b);
                let report = verify_equilibrium(&game, &profile, &nu).map_err(err)?;
                for e in &report.entries {
                    ensure!(e.gap.is_zero(), "gap {} at θ = ({}, {})", e.gap, a, b);
                }
                count += 1;
            }
        }
    }
    let mod2 = catalog::mod2_profile();
    for nu in nus() {
        let report = verify_equilibrium(&game, &mod2, &nu).map_err(err)?;
        ensure!(report.certified, "mod-2 profile not certified");
        for e in &report.entries {
            ensure!(e.gap.is_zero(), "mod-2 gap {}", e.gap);
        }
    }
    Ok(format!("{count} two-ended cases with u_1 = 1/2 and gap 0; mod-2 profile certified"))
}

fn criterion_5() -> Outcome {
    let (alpha, beta) = (ratio(1, 3), ratio(2, 3));
    let game = catalog::rock_scissors_paper_q1(&alpha, &beta).map_err(err)?;
    let profile = Profile::new(vec![Measure::IntervalMean, Measure::IntervalMean]);
    let expected = (int(1) - &beta) + (&beta - &alpha) / int(2);
    ensure!(expected == ratio(1, 2), "closed form {}", expected);
    for nu in nus() {
        let report = verify_equilibrium(&game, &profile, &nu).map_err(err)?;
        ensure!(report.certified, "not certified");
        ensure!(report.entries[0].payoff == expected, "u_1 = {}", report.entries[0].payoff);
        for k in 0..60 {
            let x = Measure::dirac(Element::frac(ratio(k, 60)));
            let v = deviation_value(&game, &profile, 0, &x, &nu).map_err(err)?;
            ensure!(v == expected, "deviation to {}/60 pays {}", k, v);
        }
    }
    Ok("interval means certified, u_1 = 1/2, 60 pure deviations pay 1/2".into())
}

fn criterion_6() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config::with_cases(100),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let pair = (0i64..60, 0i64..60, 1i64..=60, 1i64..=60).prop_filter_map("a < b", |(p, q, r, s)| {
        let a = ratio(p % r, r);
        let b = ratio(q % s, s);
        (a < b).then_some((a, b))
    });
    let mut pairs = Vec::new();
    while pairs.len() < 100 {
        let tree = pair.new_tree(&mut runner).map_err(err)?;
        pairs.push(proptest::strategy::ValueTree::current(&tree));
    }
    let q1 = Group::rational_circle();
    let mut window_checks = 0;
    for (a, b) in &pairs {
        let closed: PayoffFn = StepFn::indicator_closed(a, b).map_err(err)?.into();
        let v = integrate(&closed, &Measure::IntervalMean).map_err(err)?;
        ensure!(v == b - a, "closed [{}, {}] integrates to {}", a, b, v);
        let half_open: PayoffFn = StepFn::indicator_half_open(a, b).map_err(err)?.into();
        for n in 1..=7u32 {
            let fact = factorial(n);
            if !(&fact % a.denom()).is_zero() || !(&fact % b.denom()).is_zero() {
                continue;
            }
            let w = build_window(&q1, &WindowSpec::Q1Factorial(n)).map_err(err)?;
            let m = window_mean(&half_open, &w).map_err(err)?;
            ensure!(m == b - a, "[{}, {}) on {}! points has mean {}", a, b, n, m);
            window_checks += 1;
        }
    }
    Ok(format!("100 pairs integrate to b - a; {window_checks} factorial-window counts exact"))
}

fn criterion_7() -> Outcome {
    let z2 = Group::lattice_z2();
    let quad = PredicateZ2::open_quadrant();
    let ns: Vec<u64> = (1..=10).chain((20..=1000).step_by(20)).collect();
    let specs: Vec<WindowSpec> = ns.iter().map(|&n| WindowSpec::Z2Cone { n, cone: quad.clone() }).collect();
    for p in density_sweep(&z2, &quad.clone().into(), &specs).map_err(err)? {
        ensure!(p.value == int(1), "density {} at n = {}", p.value, p.n);
    }
    let g = Element::pair(1, 1);
    let mut last: Option<Rational> = None;
    let mut at_200 = None;
    for n in (200..=1000).step_by(50) {
        let w = build_window(&z2, &WindowSpec::Z2Cone { n, cone: quad.clone() }).map_err(err)?;
        let d = invariance_defect(&w, &g).map_err(err)?;
        if n == 200 {
            ensure!(d < ratio(1, 50), "defect {} at n = 200", d);
            at_200 = Some(d.clone());
        }
        if let Some(prev) = &last {
            ensure!(&d <= prev, "defect rose to {} at n = {}", d, n);
        }
        last = Some(d);
    }
    Ok(format!(
        "density 1 on {} windows; defect {} at n = 200, nonincreasing to n = 1000",
        specs.len(),
        at_200.unwrap()
    ))
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let wald = catalog::wald();
    let mp = catalog::matching_pennies_z();
    let mut certified: Vec<(GameSpec, Profile)> = vec![(wald.clone(), construct_equilibrium(&wald).map_err(err)?)];
    for k in 0..=4 {
        certified.push((
            mp.clone(),
            Profile::new(vec![Measure::TwoEnded(ratio(k, 4)), Measure::TwoEnded(ratio(4 - k, 4))]),
        ));
    }
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (prop::collection::vec(ep_fn(), 2), prop::collection::vec(affine_z(), 2));
    let mut wrong_end = 0;
    while wrong_end < 50 {
        let (phis, etas) = proptest::strategy::ValueTree::current(&strategy.new_tree(&mut runner).map_err(err)?);
        let game = z_game(phis.clone(), etas.clone());
        certified.push((game.clone(), construct_equilibrium(&game).map_err(err)?));
        let (a_minus, a_plus) = phis[0].eventual_averages();
        if a_minus == a_plus {
            continue;
        }
        // Wrong end in the player's own coordinates, pulled back through η.
        let wrong_z = if a_plus > a_minus { int(0) } else { int(1) };
        let wrong = Measure::TwoEnded(wrong_z).pushforward(&etas[0]).map_err(err)?;
        let profile = construct_equilibrium(&game).map_err(err)?.replace(0, wrong);
        let entry = best_response_gap(&game, &profile, 0, game.nu()).map_err(err)?;
        ensure!(entry.gap.is_positive(), "wrong-end gap {} for {:?}", entry.gap, phis[0]);
        let report = verify_equilibrium(&game, &profile, game.nu()).map_err(err)?;
        ensure!(!report.certified, "wrong-end profile certified");
        wrong_end += 1;
    }
    for (game, profile) in &certified {
        let report = verify_equilibrium(game, profile, game.nu()).map_err(err)?;
        ensure!(report.certified, "expected a certified profile");
        let z = z_structure_check(game, profile).map_err(err)?;
        ensure!(z.passes, "tail structure fails on a certified profile: {:?}", z);
        checked += 1;
    }
    Ok(format!("{checked} certified profiles pass; {wrong_end} wrong-end profiles have positive gaps"))
}

fn run_suite<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 200, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

type Suite = Box<dyn Fn() -> Result<(), String>>;

fn criterion_9() -> Outcome {
    let suites: Vec<(&str, Suite)> = vec![
        ("group axioms", Box::new(|| {
            run_suite("group axioms", (0usize..10, seed(), seed(), seed()), |(g, a, b, c)| check_group_axioms(g, a, b, c))
        })),
        ("change of variables", Box::new(|| {
            run_suite("change of variables", (ep_fn(), measure_z(), affine_z()), |(f, m, e)| check_change_of_variables(&f, &m, &e))
        })),
        ("closure", Box::new(|| {
            run_suite("closure on Z", (ep_fn(), finite_measure_z(), affine_z()), |(f, m, e)| check_closure_z(&f, &m, &e))?;
            run_suite("closure on Q1", (step_fn(), finite_measure_q1(), affine_q1()), |(f, m, e)| check_closure_q1(&f, &m, &e))
        })),
        ("order independence", Box::new(|| {
            run_suite(
                "order independence",
                (
                    prop::collection::vec(ep_fn(), 3),
                    prop::collection::vec(affine_z(), 3),
                    prop::collection::vec(finite_measure_z(), 3),
                ),
                |(p, e, m)| check_order_independence(p, e, m),
            )
        })),
        ("variational principle", Box::new(|| {
            run_suite("variational principle", (ep_fn(), ep_fn(), affine_z(), theta()), |(f, g, e, t)| check_variational(f, g, e, t))
        })),
        ("zero sum", Box::new(|| {
            run_suite(
                "zero sum",
                (ep_fn(), small_rational(), affine_z(), measure_z(), measure_z(), order_weights(2)),
                |(f, c, e, a, b, nu)| check_zero_sum(f, c, e, a, b, nu),
            )
        })),
        ("nu independence", Box::new(|| {
            run_suite(
                "nu independence",
                (
                    prop::collection::vec(ep_fn(), 3),
                    prop::collection::vec(affine_z(), 3),
                    prop::collection::vec(order_weights(3), 3),
                ),
                |(p, e, nus)| check_nu_independence(p, e, nus),
            )
        })),
        ("banach density", Box::new(|| run_suite("banach density", ep_set(), |s| check_banach(&s)))),
    ];
    let mut failures = Vec::new();
    for (name, suite) in &suites {
        if let Err(e) = suite() {
            failures.push(format!("{name}: {e}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} suites x 200 cases", suites.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {n}: PASS ({detail}) [{:.2}s]", t.elapsed().as_secs_f64()),
            Err(reason) => {
                failed += 1;
                println!("criterion {n}: FAIL ({reason}) [{:.2}s]", t.elapsed().as_secs_f64());
            }
        }
    }
    println!(
        "acceptance: {} of 9 criteria pass in {:.2}s",
        9 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

