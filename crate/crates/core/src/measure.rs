//! Mixed strategies: finitely supported measures and the symbolic invariant
//! means used by the integration calculus.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Bijection, Element, Group, GroupKind, Sign};
use crate::rational::{self, Rational};

/// A probability measure with finite support and exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMeasure {
    weights: BTreeMap<Element, Rational>,
}

impl FiniteMeasure {
    /// Zero weights are dropped; repeated points are merged.
    pub fn new(entries: impl IntoIterator<Item = (Element, Rational)>) -> Result<Self> {
        let mut weights: BTreeMap<Element, Rational> = BTreeMap::new();
        for (x, w) in entries {
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative weight {w} at {x}")));
            }
            *weights.entry(x).or_insert_with(rational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(FiniteMeasure { weights })
    }

    pub fn dirac(x: Element) -> Self {
        FiniteMeasure {
            weights: [(x, rational::one())].into_iter().collect(),
        }
    }

    /// Uniform weight on a nonempty list of distinct points.
    pub fn uniform_on(points: Vec<Element>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("uniform measure on an empty set".into()));
        }
        let w = Rational::new(1.into(), points.len().into());
        FiniteMeasure::new(points.into_iter().map(|x| (x, w.clone())))
    }

    pub fn weights(&self) -> &BTreeMap<Element, Rational> {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Rational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn map_points(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        FiniteMeasure::new(
            self.weights
                .iter()
                .map(|(x, w)| Ok((f(x)?, w.clone())))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Measure {
    Finite(FiniteMeasure),
    /// Invariant means on `Z` with `λ(N) = θ`; they all agree on
    /// eventually periodic functions.
    TwoEnded(Rational),
    /// Invariant means on `Q ∩ [0,1)`, which integrate step functions to
    /// their Lebesgue value.
    IntervalMean,
    /// The uniform measure on a finite group.
    Uniform,
    /// `weight·first + (1 − weight)·second`.
    Mixture {
        weight: Rational,
        first: Box<Measure>,
        second: Box<Measure>,
    },
}

impl Measure {
    pub fn dirac(x: Element) -> Self {
        Measure::Finite(FiniteMeasure::dirac(x))
    }

    pub fn two_ended(theta: Rational) -> Result<Self> {
        if !rational::is_probability(&theta) {
            return Err(Error::InvalidMeasure(format!("theta {theta} outside [0,1]")));
        }
        Ok(Measure::TwoEnded(theta))
    }

    pub fn mixture(weight: Rational, first: Measure, second: Measure) -> Result<Self> {
        if !rational::is_probability(&weight) {
            return Err(Error::InvalidMeasure(format!("mixture weight {weight} outside [0,1]")));
        }
        Ok(Measure::Mixture {
            weight,
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Measure::Finite(_) => "finite",
            Measure::TwoEnded(_) => "two-ended",
            Measure::IntervalMean => "interval-mean",
            Measure::Uniform => "uniform",
            Measure::Mixture { .. } => "mix",
        }
    }

    /// True when the measure is a symbolic invariant mean, so integrating it
    /// out produces a constant.
    pub fn is_invariant(&self) -> bool {
        match self {
            Measure::Finite(_) => false,
            Measure::TwoEnded(_) | Measure::IntervalMean | Measure::Uniform => true,
            Measure::Mixture { first, second, .. } => first.is_invariant() && second.is_invariant(),
        }
    }

    /// True when no symbolic mean occurs anywhere in the measure.
    pub fn is_countably_additive(&self) -> bool {
        match self {
            Measure::Finite(_) => true,
            Measure::TwoEnded(_) | Measure::IntervalMean => false,
            Measure::Uniform => true,
            Measure::Mixture { first, second, .. } => {
                first.is_countably_additive() && second.is_countably_additive()
            }
        }
    }

    pub fn validate(&self, group: &Group) -> Result<()> {
        match self {
            Measure::Finite(m) => {
                if m.is_empty() {
                    return Err(Error::InvalidMeasure("empty support".into()));
                }
                m.weights.keys().try_for_each(|x| group.check(x))
            }
            Measure::TwoEnded(theta) => {
                if !matches!(group.kind(), GroupKind::Integers) {
                    return Err(Error::InvalidMeasure(format!(
                        "two-ended means live on Z, not {}",
                        group.tag()
                    )));
                }
                if !rational::is_probability(theta) {
                    return Err(Error::InvalidMeasure(format!("theta {theta} outside [0,1]")));
                }
                Ok(())
            }
            Measure::IntervalMean => match group.kind() {
                GroupKind::RationalCircle => Ok(()),
                _ => Err(Error::InvalidMeasure(format!(
                    "the interval mean lives on Q1, not {}",
                    group.tag()
                ))),
            },
            Measure::Uniform => {
                if group.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidMeasure(format!(
                        "no uniform measure on infinite group {}",
                        group.tag()
                    )))
                }
            }
            Measure::Mixture {
                weight,
                first,
                second,
            } => {
                if !rational::is_probability(weight) {
                    return Err(Error::InvalidMeasure(format!(
                        "mixture weight {weight} outside [0,1]"
                    )));
                }
                first.validate(group)?;
                second.validate(group)
            }
        }
    }

    /// The measure `ρ` with `ρ(A) = μ(η(A))`, i.e. the image of `μ` under
    /// `η⁻¹`.
    pub fn pushforward(&self, eta: &Bijection) -> Result<Self> {
        if eta.is_identity() {
            return Ok(self.clone());
        }
        match (self, eta) {
            (Measure::Finite(m), _) => {
                let inv = eta.inverse();
                Ok(Measure::Finite(m.map_points(|x| inv.apply(x))?))
            }
            (Measure::TwoEnded(theta), Bijection::AffineZ { sign, .. }) => Ok(Measure::TwoEnded(
                match sign {
                    Sign::Plus => theta.clone(),
                    Sign::Minus => rational::one() - theta,
                },
            )),
            (Measure::IntervalMean, Bijection::AffineQ1 { .. }) => Ok(Measure::IntervalMean),
            (Measure::Uniform, Bijection::Permutation(_)) => Ok(Measure::Uniform),
            (
                Measure::Mixture {
                    weight,
                    first,
                    second,
                },
                _,
            ) => Measure::mixture(weight.clone(), first.pushforward(eta)?, second.pushforward(eta)?),
            _ => Err(Error::mismatch(
                format!("bijection compatible with a {} measure", self.tag()),
                eta.family(),
            )),
        }
    }

    /// Expands a countably additive measure on a finite group to explicit
    /// weights.
    pub fn to_finite(&self, group: &Group) -> Result<FiniteMeasure> {
        match self {
            Measure::Finite(m) => Ok(m.clone()),
            Measure::Uniform => FiniteMeasure::uniform_on(group.elements()?),
            Measure::Mixture {
                weight,
                first,
                second,
            } => {
                let a = first.to_finite(group)?;
                let b = second.to_finite(group)?;
                let rest = rational::one() - weight;
                FiniteMeasure::new(
                    a.iter()
                        .map(|(x, w)| (x.clone(), w * weight))
                        .chain(b.iter().map(|(x, w)| (x.clone(), w * &rest))),
                )
            }
            _ => Err(Error::Unsupported(format!(
                "{} is not finitely supported",
                self.tag()
            ))),
        }
    }
}
