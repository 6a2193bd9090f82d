//! Decidable subsets of `Z²` used as indicator payoffs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PredicateZ2 {
    /// Open sector swept counterclockwise from `u` to `v`; the angle is
    /// strictly between 0 and π.
    Cone { u: (i64, i64), v: (i64, i64) },
    /// Membership by residues: `table[(x mod m1)·m2 + (y mod m2)]`.
    Periodic { periods: (u32, u32), table: Vec<bool> },
    Finite(BTreeSet<(i64, i64)>),
    Not(Box<PredicateZ2>),
    And(Vec<PredicateZ2>),
    Or(Vec<PredicateZ2>),
}

/// Integer `x` range of a predicate on a fixed row `y`, inclusive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRange {
    Empty,
    Range { lo: Option<i64>, hi: Option<i64> },
}

impl RowRange {
    fn intersect(self, other: RowRange) -> RowRange {
        match (self, other) {
            (RowRange::Range { lo: a, hi: b }, RowRange::Range { lo: c, hi: d }) => {
                let lo = match (a, c) {
                    (Some(a), Some(c)) => Some(a.max(c)),
                    _ => a.or(c),
                };
                let hi = match (b, d) {
                    (Some(b), Some(d)) => Some(b.min(d)),
                    _ => b.or(d),
                };
                match (lo, hi) {
                    (Some(l), Some(h)) if l > h => RowRange::Empty,
                    _ => RowRange::Range { lo, hi },
                }
            }
            _ => RowRange::Empty,
        }
    }

    /// Number of integers in `[lo, hi] ∩ range`.
    pub fn count_within(self, lo: i64, hi: i64) -> u64 {
        match self {
            RowRange::Empty => 0,
            RowRange::Range { lo: a, hi: b } => {
                let l = a.map_or(lo, |a| a.max(lo));
                let h = b.map_or(hi, |b| b.min(hi));
                if l > h {
                    0
                } else {
                    (h - l + 1) as u64
                }
            }
        }
    }
}

/// Integers `x` with `a·x > b`.
fn half_line(a: i64, b: i128) -> RowRange {
    let a = a as i128;
    match a.signum() {
        0 if b < 0 => RowRange::Range { lo: None, hi: None },
        0 => RowRange::Empty,
        1 => RowRange::Range {
            lo: clamp(Integer::div_floor(&b, &a) + 1),
            hi: None,
        },
        _ => RowRange::Range {
            lo: None,
            hi: clamp(Integer::div_ceil(&b, &a) - 1),
        },
    }
}

fn clamp(x: i128) -> Option<i64> {
    Some(x.clamp(i64::MIN as i128, i64::MAX as i128) as i64)
}

impl PredicateZ2 {
    pub fn cone(u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        let cross = u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128;
        if cross <= 0 {
            return Err(Error::InvalidFunction(format!(
                "cone from {u:?} to {v:?} must turn counterclockwise by less than π"
            )));
        }
        Ok(PredicateZ2::Cone { u, v })
    }

    /// Cone from rational direction vectors, scaled to integer directions.
    pub fn cone_rational(u: (Rational, Rational), v: (Rational, Rational)) -> Result<Self> {
        Self::cone(integer_direction(&u)?, integer_direction(&v)?)
    }

    /// The open first quadrant `{x > 0, y > 0}`.
    pub fn open_quadrant() -> Self {
        PredicateZ2::Cone { u: (1, 0), v: (0, 1) }
    }

    pub fn periodic(periods: (u32, u32), table: Vec<bool>) -> Result<Self> {
        if periods.0 == 0 || periods.1 == 0 {
            return Err(Error::InvalidFunction("periods must be positive".into()));
        }
        let expected = periods.0 as usize * periods.1 as usize;
        if table.len() != expected {
            return Err(Error::InvalidFunction(format!(
                "periodic table needs {expected} entries, got {}",
                table.len()
            )));
        }
        Ok(PredicateZ2::Periodic { periods, table })
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        if let (Some(a), Some(b)) = (x.to_i64(), y.to_i64()) {
            return self.contains_i64(a, b);
        }
        match self {
            PredicateZ2::Cone { u, v } => {
                let cu = BigInt::from(u.0) * y - BigInt::from(u.1) * x;
                let cv = x * BigInt::from(v.1) - y * BigInt::from(v.0);
                cu.is_positive() && cv.is_positive()
            }
            PredicateZ2::Periodic { periods, table } => {
                let r = x.mod_floor(&BigInt::from(periods.0)).to_usize().expect("small");
                let s = y.mod_floor(&BigInt::from(periods.1)).to_usize().expect("small");
                table[r * periods.1 as usize + s]
            }
            PredicateZ2::Finite(_) => false,
            PredicateZ2::Not(p) => !p.contains(x, y),
            PredicateZ2::And(ps) => ps.iter().all(|p| p.contains(x, y)),
            PredicateZ2::Or(ps) => ps.iter().any(|p| p.contains(x, y)),
        }
    }

    pub fn contains_i64(&self, x: i64, y: i64) -> bool {
        match self {
            PredicateZ2::Cone { u, v } => {
                let (x, y) = (x as i128, y as i128);
                u.0 as i128 * y - u.1 as i128 * x > 0 && x * v.1 as i128 - y * v.0 as i128 > 0
            }
            PredicateZ2::Periodic { periods, table } => {
                let r = x.rem_euclid(periods.0 as i64) as usize;
                let s = y.rem_euclid(periods.1 as i64) as usize;
                table[r * periods.1 as usize + s]
            }
            PredicateZ2::Finite(points) => points.contains(&(x, y)),
            PredicateZ2::Not(p) => !p.contains_i64(x, y),
            PredicateZ2::And(ps) => ps.iter().all(|p| p.contains_i64(x, y)),
            PredicateZ2::Or(ps) => ps.iter().any(|p| p.contains_i64(x, y)),
        }
    }

    /// The `x` range on row `y` for a cone; `None` for other variants.
    pub fn cone_row(&self, y: i64) -> Option<RowRange> {
        match self {
            PredicateZ2::Cone { u, v } => {
                // u × p > 0  ⇔  (−u₂)·x > −u₁·y ;  p × v > 0  ⇔  v₂·x > v₁·y
                let first = half_line(-u.1, -(u.0 as i128) * y as i128);
                let second = half_line(v.1, v.0 as i128 * y as i128);
                Some(first.intersect(second))
            }
            _ => None,
        }
    }
}

fn integer_direction(p: &(Rational, Rational)) -> Result<(i64, i64)> {
    let den = p.0.denom().lcm(p.1.denom());
    let x = (&p.0 * Rational::from_integer(den.clone())).to_integer();
    let y = (&p.1 * Rational::from_integer(den)).to_integer();
    if x.is_zero() && y.is_zero() {
        return Err(Error::InvalidFunction("cone direction must be nonzero".into()));
    }
    let g = x.gcd(&y);
    match ((x / &g).to_i64(), (y / &g).to_i64()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::OutOfRange("cone direction too large".into())),
    }
}
