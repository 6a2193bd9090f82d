//! The worked example games, ready to solve.

use std::collections::BTreeMap;

use crate::equilibrium::{GameSpec, Profile};
use crate::error::Result;
use crate::group::{Bijection, Element, Group, Sign};
use crate::integration::OrderWeights;
use crate::measure::{FiniteMeasure, Measure};
use crate::payoff::{EpFn, PayoffFn, Piece, PredicateZ2, StepFn, TableFn};
use crate::rational::{int, ratio, Rational};

/// `{A, B}` with `B` the identity and `A * A = B`.
pub fn pennies_group() -> Group {
    Group::table(
        vec![vec![1, 0], vec![0, 1]],
        1,
        vec![0, 1],
        Some(vec!["A".into(), "B".into()]),
        true,
        true,
    )
    .expect("valid table")
}

/// `{R, P, S}` with `R` the identity, isomorphic to `Z/3`.
pub fn rsp_group() -> Group {
    Group::table(
        vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        0,
        vec![0, 2, 1],
        Some(vec!["R".into(), "P".into(), "S".into()]),
        true,
        true,
    )
    .expect("valid table")
}

fn two_player(group: Group, phi1: PayoffFn, phi2: PayoffFn, eta: [Bijection; 2]) -> GameSpec {
    GameSpec::new(
        group,
        vec![phi1, phi2],
        eta.to_vec(),
        None,
        OrderWeights::uniform(2).expect("two players"),
    )
    .expect("catalog games are valid")
}

fn complement(phi: &PayoffFn) -> PayoffFn {
    phi.affine(&int(-1), &int(1)).expect("representable")
}

/// Matching pennies: `u_1 = −u_2 = φ(x * y)` with `φ(A) = 1`, `φ(B) = −1`.
pub fn matching_pennies() -> GameSpec {
    let g = pennies_group();
    let phi: PayoffFn = TableFn::new(g.clone(), vec![int(1), int(-1)]).expect("two values").into();
    let phi2 = phi.scale(&int(-1)).expect("representable");
    two_player(g, phi, phi2, [Bijection::Identity, Bijection::Identity])
}

/// Rock-scissors-paper: `u_1 = φ(x⁻¹ * y)`, `u_2 = 1 − u_1`.
pub fn rock_scissors_paper() -> GameSpec {
    let g = rsp_group();
    let phi: PayoffFn = TableFn::new(g.clone(), vec![ratio(1, 2), int(0), int(1)])
        .expect("three values")
        .into();
    let inv = Bijection::group_inverse(&g).expect("finite group");
    let phi2 = complement(&phi);
    two_player(g, phi, phi2, [inv, Bijection::Identity])
}

/// Matching pennies on `Z`: `u_1 = 1 − u_2 = 1_{2Z}(x + y)`.
pub fn matching_pennies_z() -> GameSpec {
    let phi: PayoffFn = EpFn::indicator_residue(2, 0).expect("period 2").into();
    let phi2 = complement(&phi);
    two_player(Group::integers(), phi, phi2, [Bijection::Identity, Bijection::Identity])
}

/// `1` above zero, `1/2` at zero, `0` below.
pub fn wald_phi() -> EpFn {
    EpFn::new(1, vec![int(1)], vec![int(0)], 0, vec![ratio(1, 2)]).expect("valid")
}

/// Wald's game: `u_1 = 1 − u_2 = φ(x − y)`, written with `η_2(y) = −y`.
pub fn wald() -> GameSpec {
    let phi: PayoffFn = wald_phi().into();
    let phi2 = complement(&phi);
    two_player(
        Group::integers(),
        phi,
        phi2,
        [Bijection::Identity, Bijection::affine_z(Sign::Minus, 0)],
    )
}

/// Player 1 toward `+∞` in `x`, player 2 toward `−∞` in `y`.
pub fn wald_stated_profile() -> Profile {
    Profile::new(vec![Measure::TwoEnded(int(1)), Measure::TwoEnded(int(0))])
}

/// Mass `1/2` on each of `0` and `1`.
pub fn mod2_profile() -> Profile {
    let m = FiniteMeasure::new([(Element::int(0), ratio(1, 2)), (Element::int(1), ratio(1, 2))])
        .expect("weights sum to 1");
    Profile::new(vec![Measure::Finite(m.clone()), Measure::Finite(m)])
}

/// The payoff of the countable rock-scissors-paper game as a function of
/// `y − x`: `0` on `(0, α)`, `1/2` on `[α, β]` and at `0`, `1` on `(β, 1)`.
pub fn rsp_q1_phi(alpha: &Rational, beta: &Rational) -> Result<StepFn> {
    StepFn::new(
        vec![int(0), alpha.clone(), beta.clone(), int(1)],
        vec![
            Piece::constant(int(0)),
            Piece::constant(ratio(1, 2)),
            Piece::constant(int(1)),
        ],
        BTreeMap::from([(int(0), ratio(1, 2)), (beta.clone(), ratio(1, 2))]),
    )
}

/// Countable rock-scissors-paper on `Q ∩ [0,1)` with thresholds `α < β`.
pub fn rock_scissors_paper_q1(alpha: &Rational, beta: &Rational) -> Result<GameSpec> {
    let phi: PayoffFn = rsp_q1_phi(alpha, beta)?.into();
    let phi2 = complement(&phi);
    Ok(two_player(
        Group::rational_circle(),
        phi,
        phi2,
        [Bijection::affine_q1(Sign::Minus, int(0)), Bijection::Identity],
    ))
}

/// Circular distance to zero, `min(w, 1 − w)`.
pub fn circle_distance() -> StepFn {
    StepFn::new(
        vec![int(0), ratio(1, 2), int(1)],
        vec![Piece::linear(int(1), int(0)), Piece::linear(int(-1), int(1))],
        BTreeMap::new(),
    )
    .expect("valid")
}

/// Love and hate with `2k` players on a cycle. Counting players from 1, odd
/// players want distance from their successor and even players want to be
/// close to it.
pub fn love_and_hate(k: usize) -> Result<GameSpec> {
    let n = 2 * k;
    let d = circle_distance();
    let phi = (0..n)
        .map(|i| {
            if i % 2 == 0 {
                PayoffFn::Step(d.clone())
            } else {
                PayoffFn::Step(d.scale(&int(-1)))
            }
        })
        .collect();
    let eta = (0..n)
        .map(|i| {
            if i % 2 == 0 {
                Bijection::affine_q1(Sign::Minus, int(0))
            } else {
                Bijection::Identity
            }
        })
        .collect();
    let hoods = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    GameSpec::new(
        Group::rational_circle(),
        phi,
        eta,
        Some(hoods),
        OrderWeights::uniform(n)?,
    )
}

/// Two players on `Z²`, each paid by membership of the sum in an open cone:
/// the first quadrant for player 1 and the third for player 2.
pub fn cones_z2() -> GameSpec {
    let c1 = PredicateZ2::open_quadrant();
    let c2 = PredicateZ2::cone((-1, 0), (0, -1)).expect("valid cone");
    two_player(
        Group::lattice_z2(),
        c1.into(),
        c2.into(),
        [Bijection::Identity, Bijection::Identity],
    )
}
