//! Strategies, brute-force oracles and property checks shared by the
//! property suite and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeMap;

use groupgames::foelner::upper_banach_density;
use groupgames::integration::payoff_terms;
use groupgames::rational::{int, ratio};
use groupgames::{
    best_response_gap, construct_equilibrium, integrate, iterated_payoff, partial_integrate,
    payoff_nu, verify_equilibrium, Bijection, Element, EpFn, FiniteMeasure, GameSpec, Group,
    Measure, OrderWeights, PayoffFn, Piece, Profile, Rational, Sign, StepFn,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

pub fn theta() -> impl Strategy<Value = Rational> {
    (0i64..=8).prop_map(|k| ratio(k, 8))
}

pub fn sign() -> impl Strategy<Value = Sign> {
    any::<bool>().prop_map(|b| if b { Sign::Plus } else { Sign::Minus })
}

pub fn ep_fn() -> impl Strategy<Value = EpFn> {
    (1usize..=4, 0usize..=3)
        .prop_flat_map(|(m, k)| {
            (
                Just(m),
                Just(k),
                prop::collection::vec(small_rational(), m),
                prop::collection::vec(small_rational(), m),
                prop::collection::vec(small_rational(), 2 * k + 1),
            )
        })
        .prop_map(|(m, k, right, left, core)| EpFn::new(m, right, left, k, core).unwrap())
}

/// Eventually periodic indicator functions.
pub fn ep_set() -> impl Strategy<Value = EpFn> {
    (1usize..=5, 0usize..=6)
        .prop_flat_map(|(m, k)| {
            (
                Just(m),
                Just(k),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(any::<bool>(), 2 * k + 1),
            )
        })
        .prop_map(|(m, k, right, left, core)| {
            let v = |b: Vec<bool>| b.into_iter().map(|x| int(x as i64)).collect();
            EpFn::new(m, v(right), v(left), k, v(core)).unwrap()
        })
}

pub fn affine_z() -> impl Strategy<Value = Bijection> {
    (sign(), -10i64..=10).prop_map(|(s, c)| Bijection::affine_z(s, c))
}

pub fn affine_q1() -> impl Strategy<Value = Bijection> {
    (sign(), 0i64..12, 1i64..=12).prop_map(|(s, n, d)| Bijection::affine_q1(s, ratio(n, d)))
}

pub fn step_fn() -> impl Strategy<Value = StepFn> {
    let piece = (any::<bool>(), small_rational(), small_rational()).prop_map(|(linear, a, b)| {
        if linear {
            Piece::linear(a, b)
        } else {
            Piece::constant(b)
        }
    });
    (
        prop::collection::btree_set(1i64..24, 0..4),
        prop::collection::vec(piece, 4),
        prop::collection::vec(((0i64..30), (1i64..=30), small_rational()), 0..3),
    )
        .prop_map(|(cuts, pieces, points)| {
            let mut breakpoints = vec![int(0)];
            breakpoints.extend(cuts.iter().map(|&c| ratio(c, 24)));
            breakpoints.push(int(1));
            let pieces = pieces[..breakpoints.len() - 1].to_vec();
            let points: BTreeMap<Rational, Rational> = points
                .into_iter()
                .map(|(n, d, v)| (ratio(n % d, d), v))
                .collect();
            StepFn::new(breakpoints, pieces, points).unwrap()
        })
}

pub fn finite_measure_z() -> impl Strategy<Value = FiniteMeasure> {
    prop::collection::vec((-15i64..=15, 1i64..=5), 1..=4).prop_map(|pts| {
        let total: i64 = pts.iter().map(|p| p.1).sum();
        FiniteMeasure::new(pts.into_iter().map(|(x, w)| (Element::int(x), ratio(w, total)))).unwrap()
    })
}

pub fn finite_measure_q1() -> impl Strategy<Value = FiniteMeasure> {
    prop::collection::vec((0i64..30, 1i64..=30, 1i64..=5), 1..=3).prop_map(|pts| {
        let total: i64 = pts.iter().map(|p| p.2).sum();
        FiniteMeasure::new(
            pts.into_iter()
                .map(|(n, d, w)| (Element::frac(ratio(n % d, d)), ratio(w, total))),
        )
        .unwrap()
    })
}

/// Two-ended means, finite measures and mixtures of the two on `Z`.
pub fn measure_z() -> impl Strategy<Value = Measure> {
    let leaf = prop_oneof![
        theta().prop_map(Measure::TwoEnded),
        finite_measure_z().prop_map(Measure::Finite),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (theta(), inner.clone(), inner)
            .prop_map(|(w, a, b)| Measure::mixture(w, a, b).unwrap())
    })
}

pub fn order_weights(n: usize) -> impl Strategy<Value = OrderWeights> {
    use itertools::Itertools;
    let orders: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let count = orders.len();
    prop_oneof![
        Just(OrderWeights::uniform(n).unwrap()),
        (0..count).prop_map({
            let orders = orders.clone();
            move |k| OrderWeights::single(orders[k].clone()).unwrap()
        }),
        prop::collection::vec(0i64..=4, count).prop_map(move |ws| {
            let total: i64 = ws.iter().sum();
            if total == 0 {
                return OrderWeights::uniform(n).unwrap();
            }
            OrderWeights::explicit(
                n,
                orders
                    .iter()
                    .cloned()
                    .zip(ws)
                    .map(|(o, w)| (o, ratio(w, total)))
                    .collect(),
            )
            .unwrap()
        }),
    ]
}

/// Symmetric group on three letters as a Cayley table.
pub fn s3() -> Group {
    use itertools::Itertools;
    let perms: Vec<Vec<usize>> = (0..3).permutations(3).collect();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| perms.iter().map(|b| index(&(0..3).map(|i| a[b[i]]).collect())).collect())
        .collect();
    let identity = index(&vec![0, 1, 2]);
    let inverse = perms
        .iter()
        .map(|a| {
            let mut inv = vec![0; 3];
            for (i, &v) in a.iter().enumerate() {
                inv[v] = i;
            }
            index(&inv)
        })
        .collect();
    Group::table(table, identity, inverse, None, false, true).unwrap()
}

pub fn klein_four() -> Group {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    Group::table(table, 0, vec![0, 1, 2, 3], None, true, true).unwrap()
}

/// A fixed list of group instances for the axiom checks.
pub fn group_instances() -> Vec<Group> {
    vec![
        Group::cyclic(1).unwrap(),
        Group::cyclic(7).unwrap(),
        Group::integers(),
        Group::lattice_z2(),
        Group::rational_circle(),
        s3(),
        klein_four(),
        Group::product(vec![Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()]).unwrap(),
        Group::product(vec![Group::cyclic(2).unwrap(), s3()]).unwrap(),
        Group::product(vec![Group::integers(), Group::rational_circle()]).unwrap(),
    ]
}

/// Deterministic element of `g` from a seed.
pub fn element_from_seed(g: &Group, seed: (i64, i64, i64)) -> Element {
    use groupgames::GroupKind;
    match g.kind() {
        GroupKind::Integers => Element::int(seed.0),
        GroupKind::LatticeZ2 => Element::pair(seed.0, seed.1),
        GroupKind::RationalCircle => {
            let d = seed.2.rem_euclid(40) + 1;
            Element::frac(ratio(seed.0.rem_euclid(d), d))
        }
        GroupKind::Product(fs) => Element::Tuple(
            fs.iter()
                .enumerate()
                .map(|(k, f)| {
                    let k = k as i64;
                    element_from_seed(f, (seed.0 + 7 * k, seed.1 - 3 * k, seed.2 + k))
                })
                .collect(),
        ),
        _ => {
            let order = g.order().unwrap() as i64;
            g.element_at(seed.0.rem_euclid(order) as usize).unwrap()
        }
    }
}

pub fn seed() -> impl Strategy<Value = (i64, i64, i64)> {
    (-500i64..500, -500i64..500, 0i64..1000)
}

/// `Σ_{x ∈ window} φ(x) / |window|` by direct evaluation.
pub fn window_average(f: &EpFn, lo: i64, hi: i64) -> Rational {
    let total: Rational = (lo..=hi).map(|x| f.eval_i64(x).clone()).sum();
    total / int(hi - lo + 1)
}

/// Brute-force expectation of `φ_i(Σ_j η_j(x_j))` over a product of finite
/// supports.
pub fn brute_force_payoff(game: &GameSpec, measures: &[FiniteMeasure], i: usize) -> Rational {
    let hood = game.neighborhood(i);
    let mut total = Rational::zero();
    let mut stack: Vec<(usize, Element, Rational)> =
        vec![(0, game.group().identity(), int(1))];
    while let Some((depth, acc, w)) = stack.pop() {
        if depth == hood.len() {
            total += w * game.phi(i).eval(&acc).unwrap();
            continue;
        }
        let j = hood[depth];
        for (s, ws) in measures[j].iter() {
            let z = game.group().combine(&acc, &game.eta(j).apply(s).unwrap()).unwrap();
            stack.push((depth + 1, z, &w * ws));
        }
    }
    total
}

pub fn z_game(phis: Vec<EpFn>, etas: Vec<Bijection>) -> GameSpec {
    let n = phis.len();
    GameSpec::new(
        Group::integers(),
        phis.into_iter().map(PayoffFn::Ep).collect(),
        etas,
        None,
        OrderWeights::uniform(n).unwrap(),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Property checks. Each returns a proptest error describing the failure.

pub fn check_group_axioms(gi: usize, a: (i64, i64, i64), b: (i64, i64, i64), c: (i64, i64, i64)) -> Check {
    let groups = group_instances();
    let g = &groups[gi % groups.len()];
    let (a, b, c) = (element_from_seed(g, a), element_from_seed(g, b), element_from_seed(g, c));
    let ab_c = g.combine(&g.combine(&a, &b).unwrap(), &c).unwrap();
    let a_bc = g.combine(&a, &g.combine(&b, &c).unwrap()).unwrap();
    prop_assert_eq!(ab_c, a_bc);
    prop_assert_eq!(g.combine(&a, &g.inverse(&a).unwrap()).unwrap(), g.identity());
    prop_assert_eq!(g.combine(&g.identity(), &a).unwrap(), a.clone());
    if g.is_abelian() {
        prop_assert_eq!(g.combine(&a, &b).unwrap(), g.combine(&b, &a).unwrap());
    }
    Ok(())
}

pub fn check_change_of_variables(phi: &EpFn, mu: &Measure, eta: &Bijection) -> Check {
    let phi = PayoffFn::Ep(phi.clone());
    let lhs = integrate(&phi, &mu.pushforward(eta).unwrap()).unwrap();
    let rhs = integrate(&phi.precompose(&eta.inverse()).unwrap(), mu).unwrap();
    prop_assert_eq!(lhs, rhs);
    prop_assert_eq!(&mu.pushforward(eta).unwrap().pushforward(&eta.inverse()).unwrap(), mu);
    Ok(())
}

pub fn check_closure_z(phi: &EpFn, mu: &FiniteMeasure, eta: &Bijection) -> Check {
    let f = PayoffFn::Ep(phi.clone());
    let conv = partial_integrate(&f, &Measure::Finite(mu.clone()), eta).unwrap();
    prop_assert_eq!(conv.eventual_averages().unwrap(), phi.eventual_averages());
    // Pointwise against the defining sum.
    for w in -20i64..=20 {
        let direct: Rational = mu
            .iter()
            .map(|(s, p)| {
                let z = eta.apply(s).unwrap();
                p * phi.eval(&(BigInt::from(w) + z.as_int().unwrap()))
            })
            .sum();
        prop_assert_eq!(conv.eval(&Element::int(w)).unwrap(), direct);
    }
    Ok(())
}

pub fn check_closure_q1(phi: &StepFn, mu: &FiniteMeasure, eta: &Bijection) -> Check {
    let f = PayoffFn::Step(phi.clone());
    let conv = partial_integrate(&f, &Measure::Finite(mu.clone()), eta).unwrap();
    prop_assert_eq!(conv.lebesgue().unwrap(), phi.lebesgue());
    for k in 0..60 {
        let w = ratio(k, 60);
        let direct: Rational = mu
            .iter()
            .map(|(s, p)| {
                let z = eta.apply(s).unwrap();
                p * phi.eval(&(&w + z.as_frac().unwrap()))
            })
            .sum();
        prop_assert_eq!(conv.eval(&Element::frac(w)).unwrap(), direct);
    }
    Ok(())
}

pub fn check_order_independence(phis: Vec<EpFn>, etas: Vec<Bijection>, measures: Vec<FiniteMeasure>) -> Check {
    use itertools::Itertools;
    let n = phis.len();
    let game = z_game(phis, etas);
    let profile = Profile::new(measures.iter().cloned().map(Measure::Finite).collect());
    for i in 0..n {
        let oracle = brute_force_payoff(&game, &measures, i);
        for order in (0..n).permutations(n) {
            prop_assert_eq!(iterated_payoff(&game, &profile, &order, i).unwrap(), oracle.clone());
        }
    }
    Ok(())
}

/// With player `i` innermost, the best representable deviation against
/// two-ended opponents earns `max(A_−, A_+)`.
pub fn check_variational(phi1: EpFn, phi2: EpFn, eta1: Bijection, opponent: Rational) -> Check {
    let (a_minus, a_plus) = phi1.eventual_averages();
    let game = z_game(vec![phi1, phi2], vec![eta1, Bijection::Identity]);
    let profile = Profile::new(vec![Measure::TwoEnded(int(0)), Measure::TwoEnded(opponent)]);
    let nu = OrderWeights::single(vec![0, 1]).unwrap();
    let entry = best_response_gap(&game, &profile, 0, &nu).unwrap();
    prop_assert_eq!(entry.deviation_payoff, a_minus.max(a_plus));
    Ok(())
}

pub fn check_zero_sum(phi: EpFn, c: Rational, eta2: Bijection, m1: Measure, m2: Measure, nu: OrderWeights) -> Check {
    let phi2 = EpFn::linear_combination(&[(int(-1), &phi), (c.clone(), &EpFn::constant(int(1)))]).unwrap();
    let game = z_game(vec![phi, phi2], vec![Bijection::Identity, eta2]);
    let profile = Profile::new(vec![m1, m2]);
    let u1 = payoff_nu(&game, &profile, &nu, 0).unwrap();
    let u2 = payoff_nu(&game, &profile, &nu, 1).unwrap();
    prop_assert_eq!(u1 + u2, c);
    Ok(())
}

pub fn check_nu_independence(phis: Vec<EpFn>, etas: Vec<Bijection>, nus: Vec<OrderWeights>) -> Check {
    let n = phis.len();
    let game = z_game(phis, etas);
    let profile = construct_equilibrium(&game).unwrap();
    for nu in nus {
        let other = game.with_nu(nu.clone()).unwrap();
        prop_assert_eq!(&construct_equilibrium(&other).unwrap(), &profile);
        let report = verify_equilibrium(&other, &profile, &nu).unwrap();
        prop_assert!(report.certified);
        for e in &report.entries {
            prop_assert!(e.gap.is_zero(), "player {} gap {}", e.player + 1, e.gap);
        }
        prop_assert_eq!(report.entries.len(), n);
    }
    Ok(())
}

pub fn check_banach(set: &EpFn) -> Check {
    let n: u64 = 10_000;
    let (a_minus, a_plus) = set.eventual_averages();
    let hi = a_minus.max(a_plus);
    let d = upper_banach_density(&PayoffFn::Ep(set.clone()), n, 10 * n).unwrap();
    let size = int(2 * n as i64 + 1);
    prop_assert!((&d - &hi).abs_le(&ratio(1, 100)), "density {} vs {}", d, hi);
    let slack = int((2 * set.period() + 2 * set.core_radius() + 1) as i64) / size;
    prop_assert!(d <= &hi + slack, "density {} exceeds {} by more than the boundary", d, hi);
    Ok(())
}

trait AbsLe {
    fn abs_le(&self, bound: &Rational) -> bool;
}

impl AbsLe for Rational {
    fn abs_le(&self, bound: &Rational) -> bool {
        use num_traits::Signed;
        self.abs() <= *bound
    }
}

/// Per-term payoffs of a profile, for inspection in failure messages.
pub fn terms_of(game: &GameSpec, profile: &Profile, nu: &OrderWeights, i: usize) -> Vec<(Vec<usize>, Rational)> {
    payoff_terms(game, profile, nu, i)
        .unwrap()
        .into_iter()
        .map(|t| (t.order, t.value))
        .collect()
}
