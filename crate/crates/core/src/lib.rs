//! Exact-arithmetic engine for group games on countable groups.
//!
//! A group game assigns every player the same strategy group `G` and pays
//! player `i` the value `φ_i(η_1(x_1) * … * η_N(x_N))` (optionally restricted
//! to a neighborhood of players). Mixed strategies are finitely additive, so
//! the expected payoff depends on the order in which the iterated integrals
//! are taken; a probability `ν` over orders selects the product.
//!
//! The crate is layered bottom-up:
//!
//! * [`group`]: strategy groups, elements and the bijections `η`.
//! * [`payoff`]: representable payoff classes with exact statistics.
//! * [`measure`]: finite-support measures and symbolic invariant means.
//! * [`integration`]: single, partial and order-weighted iterated integrals.
//! * [`equilibrium`]: equilibrium construction and exact best-response gaps.
//! * [`foelner`]: Følner windows, invariance defects and density oracles.
//! * [`catalog`]: the worked example games.
//!
//! Every value on the symbolic path is an exact [`Rational`]; there is no
//! floating point outside of decimal annotations.

pub mod catalog;
pub mod equilibrium;
pub mod error;
pub mod foelner;
pub mod group;
pub mod integration;
pub mod measure;
pub mod payoff;
pub mod rational;

pub use equilibrium::{
    best_response_gap, construct_equilibrium, deviation_value, i_range, verify_equilibrium,
    z_structure_check, ArgMax, Deviation, GameSpec, GapEntry, GapReport, IRange, Profile,
};
pub use error::{Error, Result};
pub use group::{Bijection, Element, Group, GroupExpr, GroupKind, Sign};
pub use integration::{
    fubini_gap, integrate, iterated_payoff, partial_integrate, payoff_nu, OrderWeights,
};
pub use measure::{FiniteMeasure, Measure};
pub use payoff::{EpFn, PayoffFn, Piece, PredicateZ2, StepFn, TableFn};
pub use rational::Rational;
