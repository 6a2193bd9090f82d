//! Representable payoff functions `φ : G → Q`.
//!
//! Each class is closed under the operations the integration calculus
//! needs: precomposition with the group's bijections, finite convolution
//! and linear combination. Suprema are exact.

mod ep;
mod predicate;
mod step;
mod table;

pub use ep::{EpFn, ScaledEp, MAX_CORE_RADIUS};
pub use predicate::{PredicateZ2, RowRange};
pub use step::{Piece, StepFn};
pub use table::TableFn;

use crate::error::{Error, Result};
use crate::group::{Bijection, Element, Group, GroupKind, Sign};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PayoffFn {
    Table(TableFn),
    Ep(EpFn),
    Step(StepFn),
    Predicate(PredicateZ2),
}

impl PayoffFn {
    pub fn class(&self) -> &'static str {
        match self {
            PayoffFn::Table(_) => "table",
            PayoffFn::Ep(_) => "ep-z",
            PayoffFn::Step(_) => "step-q1",
            PayoffFn::Predicate(_) => "predicate-z2",
        }
    }

    pub fn check_group(&self, group: &Group) -> Result<()> {
        let ok = match (self, group.kind()) {
            (PayoffFn::Table(t), _) => t.group() == group,
            (PayoffFn::Ep(_), GroupKind::Integers) => true,
            (PayoffFn::Step(_), GroupKind::RationalCircle) => true,
            (PayoffFn::Predicate(_), GroupKind::LatticeZ2) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::mismatch(
                format!("payoff on {}", group.tag()),
                self.class(),
            ))
        }
    }

    pub fn eval(&self, x: &Element) -> Result<Rational> {
        match (self, x) {
            (PayoffFn::Table(t), _) => t.eval(x),
            (PayoffFn::Ep(f), Element::Int(n)) => Ok(f.eval(n)),
            (PayoffFn::Step(f), Element::Frac(q)) => Ok(f.eval(q)),
            (PayoffFn::Predicate(p), Element::Pair(a, b)) => Ok(if p.contains(a, b) {
                rational::one()
            } else {
                rational::zero()
            }),
            _ => Err(Error::mismatch(
                format!("argument of {}", self.class()),
                x.variant_name(),
            )),
        }
    }

    /// Exact supremum with a witness when the supremum is attained.
    pub fn sup(&self) -> Result<(Rational, Option<Element>)> {
        match self {
            PayoffFn::Table(t) => {
                let (v, w) = t.sup();
                Ok((v, Some(w)))
            }
            PayoffFn::Ep(f) => {
                let (v, w) = f.sup();
                Ok((v, Some(Element::Int(w))))
            }
            PayoffFn::Step(f) => {
                let (v, w) = f.sup();
                Ok((v, w.map(Element::Frac)))
            }
            PayoffFn::Predicate(_) => Err(Error::Unsupported(
                "no exact supremum for Z² predicates; use the density sweeps".into(),
            )),
        }
    }

    pub fn inf(&self) -> Result<(Rational, Option<Element>)> {
        let (v, w) = self.scale(&-rational::one())?.sup()?;
        Ok((-v, w))
    }

    /// `w ↦ φ(η(w))`.
    pub fn precompose(&self, eta: &Bijection) -> Result<Self> {
        if eta.is_identity() {
            return Ok(self.clone());
        }
        match (self, eta) {
            (PayoffFn::Ep(f), Bijection::AffineZ { sign, shift }) => {
                Ok(PayoffFn::Ep(f.precompose(*sign, shift)?))
            }
            (PayoffFn::Step(f), Bijection::AffineQ1 { sign, shift }) => {
                Ok(PayoffFn::Step(f.precompose(*sign, shift)))
            }
            (PayoffFn::Table(t), Bijection::Permutation(_)) => Ok(PayoffFn::Table(t.precompose(eta)?)),
            _ => Err(Error::mismatch(
                format!("bijection compatible with {}", self.class()),
                eta.family(),
            )),
        }
    }

    /// `w ↦ Σ a·φ(w * g)` for a finite list of weighted shifts.
    pub fn convolve(&self, terms: &[(Rational, Element)]) -> Result<Self> {
        match self {
            PayoffFn::Table(t) => Ok(PayoffFn::Table(t.convolve(terms)?)),
            PayoffFn::Ep(f) => {
                let shifts = terms
                    .iter()
                    .map(|(a, g)| match g {
                        Element::Int(n) => Ok((a.clone(), n.clone())),
                        _ => Err(Error::mismatch("integer shift", g.variant_name())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PayoffFn::Ep(f.convolve(&shifts)?))
            }
            PayoffFn::Step(f) => {
                let shifted = terms
                    .iter()
                    .map(|(a, g)| match g {
                        Element::Frac(q) => Ok((a.clone(), f.precompose(Sign::Plus, q))),
                        _ => Err(Error::mismatch("rational shift", g.variant_name())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let refs: Vec<(Rational, &StepFn)> = shifted.iter().map(|(a, s)| (a.clone(), s)).collect();
                Ok(PayoffFn::Step(StepFn::linear_combination(&refs)))
            }
            PayoffFn::Predicate(_) => Err(Error::Unsupported(
                "convolution of Z² predicates is not representable".into(),
            )),
        }
    }

    pub fn linear_combination(terms: &[(Rational, &PayoffFn)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidFunction("empty linear combination".into()))?
            .1;
        macro_rules! collect {
            ($variant:ident) => {
                terms
                    .iter()
                    .map(|(a, f)| match f {
                        PayoffFn::$variant(g) => Ok((a.clone(), g)),
                        other => Err(Error::mismatch(first.class(), other.class())),
                    })
                    .collect::<Result<Vec<_>>>()?
            };
        }
        match first {
            PayoffFn::Table(_) => Ok(PayoffFn::Table(TableFn::linear_combination(&collect!(Table))?)),
            PayoffFn::Ep(_) => Ok(PayoffFn::Ep(EpFn::linear_combination(&collect!(Ep))?)),
            PayoffFn::Step(_) => Ok(PayoffFn::Step(StepFn::linear_combination(&collect!(Step)))),
            PayoffFn::Predicate(_) => Err(Error::Unsupported(
                "linear combinations of Z² predicates are not representable".into(),
            )),
        }
    }

    /// The constant function `c` in the same class and on the same group.
    pub fn constant_like(&self, c: Rational) -> Result<Self> {
        match self {
            PayoffFn::Table(t) => Ok(PayoffFn::Table(TableFn::constant(t.group().clone(), c)?)),
            PayoffFn::Ep(_) => Ok(PayoffFn::Ep(EpFn::constant(c))),
            PayoffFn::Step(_) => Ok(PayoffFn::Step(StepFn::constant(c))),
            PayoffFn::Predicate(_) => Err(Error::Unsupported(
                "constant functions are not Z² predicates".into(),
            )),
        }
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match self {
            PayoffFn::Table(t) => t.as_constant(),
            PayoffFn::Ep(f) => f.as_constant(),
            PayoffFn::Step(f) => f.as_constant(),
            PayoffFn::Predicate(_) => None,
        }
    }

    pub fn scale(&self, a: &Rational) -> Result<Self> {
        PayoffFn::linear_combination(&[(a.clone(), self)])
    }

    /// `a·φ + b`.
    pub fn affine(&self, a: &Rational, b: &Rational) -> Result<Self> {
        let one = self.constant_like(rational::one())?;
        PayoffFn::linear_combination(&[(a.clone(), self), (b.clone(), &one)])
    }

    pub fn eventual_averages(&self) -> Result<(Rational, Rational)> {
        match self {
            PayoffFn::Ep(f) => Ok(f.eventual_averages()),
            _ => Err(Error::mismatch("ep-z", self.class())),
        }
    }

    pub fn lebesgue(&self) -> Result<Rational> {
        match self {
            PayoffFn::Step(f) => Ok(f.lebesgue()),
            _ => Err(Error::mismatch("step-q1", self.class())),
        }
    }
}

impl From<TableFn> for PayoffFn {
    fn from(f: TableFn) -> Self {
        PayoffFn::Table(f)
    }
}

impl From<EpFn> for PayoffFn {
    fn from(f: EpFn) -> Self {
        PayoffFn::Ep(f)
    }
}

impl From<StepFn> for PayoffFn {
    fn from(f: StepFn) -> Self {
        PayoffFn::Step(f)
    }
}

impl From<PredicateZ2> for PayoffFn {
    fn from(p: PredicateZ2) -> Self {
        PayoffFn::Predicate(p)
    }
}
