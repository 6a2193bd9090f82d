//! Exact integration of representable payoffs against mixed strategies.
//!
//! For a payoff `φ(Σ_j η_j(x_j))` on an abelian group the iterated integral
//! is computed one variable at a time. The state is a function `ψ` of the
//! sum `w` of the variables not yet integrated:
//!
//! * a finitely supported `μ` turns `ψ` into `w ↦ Σ μ(s)·ψ(w + η(s))`;
//! * a symbolic invariant mean turns `ψ` into a constant, independent of the
//!   remaining variables.
//!
//! The order of integration is a permutation `π`; `π[0]` is the innermost
//! integral. A weighting `ν` over permutations averages the per-order values.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::equilibrium::{GameSpec, Profile};
use crate::error::{Error, Result};
use crate::group::{Bijection, Element, Group, Sign};
use crate::measure::{FiniteMeasure, Measure};
use crate::payoff::PayoffFn;
use crate::rational::{self, Rational};

/// A probability `ν` over orders of the players `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderWeights {
    /// `1/n!` on every order.
    Uniform { players: usize },
    /// Sparse weights; orders not listed have weight zero.
    Explicit {
        players: usize,
        weights: BTreeMap<Vec<usize>, Rational>,
    },
}

impl OrderWeights {
    pub fn uniform(players: usize) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidOrderWeights("no players".into()));
        }
        Ok(OrderWeights::Uniform { players })
    }

    pub fn explicit(players: usize, entries: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (k, (order, w)) in entries.into_iter().enumerate() {
            if !is_order(&order, players) {
                return Err(Error::InvalidOrderWeights(format!(
                    "entry {k}: {order:?} is not an order of {players} players"
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidOrderWeights(format!("entry {k}: negative weight {w}")));
            }
            if weights.insert(order.clone(), w).is_some() {
                return Err(Error::InvalidOrderWeights(format!("entry {k}: order {order:?} repeated")));
            }
        }
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidOrderWeights(format!("weights sum to {total}, not 1")));
        }
        weights.retain(|_, w| !w.is_zero());
        Ok(OrderWeights::Explicit { players, weights })
    }

    /// All weight on a single order.
    pub fn single(order: Vec<usize>) -> Result<Self> {
        let players = order.len();
        OrderWeights::explicit(players, vec![(order, rational::one())])
    }

    pub fn players(&self) -> usize {
        match self {
            OrderWeights::Uniform { players } | OrderWeights::Explicit { players, .. } => *players,
        }
    }

    /// Every order with positive weight.
    pub fn terms(&self) -> Vec<(Vec<usize>, Rational)> {
        match self {
            OrderWeights::Uniform { players } => uniform_orders(&(0..*players).collect::<Vec<_>>()),
            OrderWeights::Explicit { weights, .. } => {
                weights.iter().map(|(o, w)| (o.clone(), w.clone())).collect()
            }
        }
    }

    /// The same weights on reversed orders: the innermost integral becomes
    /// the outermost.
    pub fn reversed(&self) -> Self {
        match self {
            OrderWeights::Uniform { .. } => self.clone(),
            OrderWeights::Explicit { players, weights } => OrderWeights::Explicit {
                players: *players,
                weights: weights
                    .iter()
                    .map(|(o, w)| (o.iter().rev().copied().collect(), w.clone()))
                    .collect(),
            },
        }
    }

    /// Weights induced on the relative orders of `subset`: `ν` summed over
    /// all orders that restrict to the same sequence.
    pub fn marginal(&self, subset: &[usize]) -> Vec<(Vec<usize>, Rational)> {
        match self {
            OrderWeights::Uniform { .. } => uniform_orders(subset),
            OrderWeights::Explicit { weights, .. } => {
                let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
                for (order, w) in weights {
                    let restricted: Vec<usize> =
                        order.iter().copied().filter(|p| subset.contains(p)).collect();
                    *out.entry(restricted).or_insert_with(rational::zero) += w;
                }
                out.into_iter().collect()
            }
        }
    }
}

fn is_order(order: &[usize], players: usize) -> bool {
    order.len() == players && {
        let mut seen = vec![false; players];
        order.iter().all(|&p| p < players && !std::mem::replace(&mut seen[p], true))
    }
}

fn uniform_orders(subset: &[usize]) -> Vec<(Vec<usize>, Rational)> {
    let orders: Vec<Vec<usize>> = subset.iter().copied().permutations(subset.len()).collect();
    let w = Rational::new(1.into(), orders.len().into());
    orders.into_iter().map(|o| (o, w.clone())).collect()
}

/// `∫ φ dμ`.
pub fn integrate(phi: &PayoffFn, mu: &Measure) -> Result<Rational> {
    match mu {
        Measure::Finite(m) => m
            .iter()
            .try_fold(rational::zero(), |acc, (x, w)| Ok(acc + w * phi.eval(x)?)),
        Measure::TwoEnded(theta) => {
            let (a_minus, a_plus) = phi.eventual_averages()?;
            Ok(theta * a_plus + (rational::one() - theta) * a_minus)
        }
        Measure::IntervalMean => phi.lebesgue(),
        Measure::Uniform => match phi {
            PayoffFn::Table(t) => Ok(t.mean()),
            _ => Err(Error::mismatch("table", phi.class())),
        },
        Measure::Mixture {
            weight,
            first,
            second,
        } => Ok(weight * integrate(phi, first)? + (rational::one() - weight) * integrate(phi, second)?),
    }
}

/// Integrates out one variable of `w ↦ φ(w + η(x))` against `μ`.
///
/// The result is a function of the remaining sum `w`, constant whenever `μ`
/// is a symbolic invariant mean.
pub fn partial_integrate(phi: &PayoffFn, mu: &Measure, eta: &Bijection) -> Result<PayoffFn> {
    if let PayoffFn::Table(t) = phi {
        if !t.group().is_abelian() {
            return Err(Error::Unsupported(
                "partial integration needs an abelian group".into(),
            ));
        }
    }
    if phi.as_constant().is_some() {
        return Ok(phi.clone());
    }
    match mu {
        Measure::Finite(m) => {
            let terms = m
                .iter()
                .map(|(s, w)| Ok((w.clone(), eta.apply(s)?)))
                .collect::<Result<Vec<_>>>()?;
            phi.convolve(&terms)
        }
        Measure::TwoEnded(theta) => {
            let sign = match eta {
                Bijection::Identity => Sign::Plus,
                Bijection::AffineZ { sign, .. } => *sign,
                _ => return Err(Error::mismatch("affine-z bijection", eta.family())),
            };
            let (a_minus, a_plus) = phi.eventual_averages()?;
            let (toward_plus, toward_minus) = match sign {
                Sign::Plus => (a_plus, a_minus),
                Sign::Minus => (a_minus, a_plus),
            };
            phi.constant_like(theta * toward_plus + (rational::one() - theta) * toward_minus)
        }
        Measure::IntervalMean => {
            if !matches!(eta, Bijection::Identity | Bijection::AffineQ1 { .. }) {
                return Err(Error::mismatch("affine-q1 bijection", eta.family()));
            }
            phi.constant_like(phi.lebesgue()?)
        }
        Measure::Uniform => match phi {
            PayoffFn::Table(t) => {
                eta.check_compatible(t.group())?;
                phi.constant_like(t.mean())
            }
            _ => Err(Error::mismatch("table", phi.class())),
        },
        Measure::Mixture {
            weight,
            first,
            second,
        } => {
            let a = partial_integrate(phi, first, eta)?;
            let b = partial_integrate(phi, second, eta)?;
            PayoffFn::linear_combination(&[(weight.clone(), &a), (rational::one() - weight, &b)])
        }
    }
}

/// True when the game is evaluated by sequential partial integration rather
/// than by enumerating finite supports.
fn uses_calculus(game: &GameSpec, i: usize) -> bool {
    game.group().is_abelian() && !matches!(game.phi(i), PayoffFn::Predicate(_))
}

/// Restriction of `order` to the neighborhood of `i`, checked to list each
/// neighbor exactly once.
fn restrict(game: &GameSpec, order: &[usize], i: usize) -> Result<Vec<usize>> {
    let hood = game.neighborhood(i);
    let restricted: Vec<usize> = order.iter().copied().filter(|p| hood.contains(p)).collect();
    let mut sorted = restricted.clone();
    sorted.sort_unstable();
    if sorted != hood {
        return Err(Error::InvalidOrderWeights(format!(
            "order {order:?} does not list every neighbor of player {} exactly once",
            i + 1
        )));
    }
    Ok(restricted)
}

/// Runs the sequential calculus over `order`, starting from `φ_i`, and
/// returns the resulting function of the remaining sum.
fn integrate_sequence(
    game: &GameSpec,
    measures: &[&Measure],
    order: &[usize],
    i: usize,
) -> Result<PayoffFn> {
    let mut psi = game.phi(i).clone();
    for &j in order {
        if psi.as_constant().is_some() {
            break;
        }
        psi = partial_integrate(&psi, measures[j], game.eta(j))?;
    }
    Ok(psi)
}

/// Expected payoff of `i` by direct enumeration of finite supports; exact for
/// any group because every integral is a finite sum.
fn enumerate_payoff(game: &GameSpec, measures: &[&Measure], i: usize) -> Result<Rational> {
    let group = game.group();
    let mut dist: BTreeMap<Element, Rational> = [(group.identity(), rational::one())].into_iter().collect();
    for &j in game.neighborhood(i).iter() {
        let m = finite_for(group, measures[j], j)?;
        let mut next: BTreeMap<Element, Rational> = BTreeMap::new();
        for (a, wa) in &dist {
            for (s, ws) in m.iter() {
                let z = group.combine(a, &game.eta(j).apply(s)?)?;
                *next.entry(z).or_insert_with(rational::zero) += wa * ws;
            }
        }
        dist = next;
    }
    dist.iter()
        .try_fold(rational::zero(), |acc, (z, w)| Ok(acc + w * game.phi(i).eval(z)?))
}

fn finite_for(group: &Group, mu: &Measure, j: usize) -> Result<FiniteMeasure> {
    mu.to_finite(group).map_err(|_| {
        Error::Unsupported(format!(
            "player {} uses a symbolic mean, which this game can only integrate by enumeration of finite supports",
            j + 1
        ))
    })
}

fn measures_of(profile: &Profile) -> Vec<&Measure> {
    profile.measures().iter().collect()
}

/// `u_i` integrated in the order `order` (innermost first). Players outside
/// the neighborhood of `i` are skipped.
pub fn iterated_payoff(game: &GameSpec, profile: &Profile, order: &[usize], i: usize) -> Result<Rational> {
    let measures = measures_of(profile);
    iterated_with(game, &measures, order, i)
}

fn iterated_with(game: &GameSpec, measures: &[&Measure], order: &[usize], i: usize) -> Result<Rational> {
    let restricted = restrict(game, order, i)?;
    if !uses_calculus(game, i) {
        return enumerate_payoff(game, measures, i);
    }
    integrate_sequence(game, measures, &restricted, i)?.eval(&game.group().identity())
}

/// One term `ν(π)·u_i^π` of the order-weighted payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// Relative order of the neighborhood, innermost first.
    pub order: Vec<usize>,
    pub weight: Rational,
    pub value: Rational,
}

/// Cache key for a term: orders that agree up to the first measure whose
/// integral is constant share a value, and finitely supported measures
/// before it commute.
fn term_key(measures: &[&Measure], order: &[usize]) -> Vec<usize> {
    let mut key = Vec::new();
    let mut commuting = true;
    for &j in order {
        key.push(j);
        if measures[j].is_invariant() {
            break;
        }
        if !matches!(measures[j], Measure::Finite(_)) {
            commuting = false;
        }
    }
    if commuting && !key.is_empty() {
        let settled = measures[*key.last().expect("nonempty order")].is_invariant();
        let free = if settled { key.len() - 1 } else { key.len() };
        key[..free].sort_unstable();
    }
    key
}

/// Per-order terms of `u_i^ν` over the relative orders of `i`'s neighborhood.
pub fn payoff_terms(game: &GameSpec, profile: &Profile, nu: &OrderWeights, i: usize) -> Result<Vec<Term>> {
    check_nu(game, nu)?;
    let measures = measures_of(profile);
    let mut cache: HashMap<Vec<usize>, Rational> = HashMap::new();
    nu.marginal(game.neighborhood(i))
        .into_iter()
        .map(|(order, weight)| {
            let key = term_key(&measures, &order);
            let value = match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = iterated_with(game, &measures, &order, i)?;
                    cache.insert(key, v.clone());
                    v
                }
            };
            Ok(Term { order, weight, value })
        })
        .collect()
}

/// `u_i^ν = Σ_π ν(π)·u_i^π`.
pub fn payoff_nu(game: &GameSpec, profile: &Profile, nu: &OrderWeights, i: usize) -> Result<Rational> {
    Ok(payoff_terms(game, profile, nu, i)?
        .iter()
        .map(|t| &t.weight * &t.value)
        .sum())
}

fn check_nu(game: &GameSpec, nu: &OrderWeights) -> Result<()> {
    if nu.players() != game.players() {
        return Err(Error::InvalidOrderWeights(format!(
            "order weights for {} players in a {}-player game",
            nu.players(),
            game.players()
        )));
    }
    Ok(())
}

/// `w ↦ Σ_π ν(π)·g_π(w)`, where `g_π` integrates every neighbor of `i`
/// except `i` itself in the order `π`. The payoff of the pure deviation
/// `δ_x` is this function at `η_i(x)`.
pub fn deviation_function(game: &GameSpec, profile: &Profile, nu: &OrderWeights, i: usize) -> Result<PayoffFn> {
    check_nu(game, nu)?;
    if !uses_calculus(game, i) {
        return Err(Error::Unsupported(
            "deviation functions need an abelian group and a convolvable payoff".into(),
        ));
    }
    let measures = measures_of(profile);
    let mut cache: HashMap<Vec<usize>, PayoffFn> = HashMap::new();
    let mut parts: Vec<(Rational, PayoffFn)> = Vec::new();
    for (order, weight) in nu.marginal(game.neighborhood(i)) {
        let others: Vec<usize> = order.into_iter().filter(|&j| j != i).collect();
        let key = term_key(&measures, &others);
        let g = match cache.get(&key) {
            Some(g) => g.clone(),
            None => {
                let g = integrate_sequence(game, &measures, &others, i)?;
                cache.insert(key, g.clone());
                g
            }
        };
        parts.push((weight, g));
    }
    let refs: Vec<(Rational, &PayoffFn)> = parts.iter().map(|(w, g)| (w.clone(), g)).collect();
    PayoffFn::linear_combination(&refs)
}

/// The two iterated integrals of `φ(x + y)` with `x ~ μ`, `y ~ λ`:
/// `(μ innermost, λ innermost)`.
pub fn fubini_gap(phi: &PayoffFn, mu: &Measure, lambda: &Measure) -> Result<(Rational, Rational)> {
    let id = Bijection::Identity;
    let mu_inner = integrate(&partial_integrate(phi, mu, &id)?, lambda)?;
    let lambda_inner = integrate(&partial_integrate(phi, lambda, &id)?, mu)?;
    Ok((mu_inner, lambda_inner))
}
