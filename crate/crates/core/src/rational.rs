//! Exact rational helpers shared by every layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"-p/q"` or an integer literal into a reduced rational.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(t.to_string()))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(t.to_string()))?;
            if q.is_zero() {
                return Err(Error::Parse(t.to_string()));
            }
            Rational::new(p, q)
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| Error::Parse(t.to_string()))?;
            Rational::from_integer(p)
        }
    };
    Ok(parsed)
}

/// Canonical text form: `p/q` reduced with positive denominator, `p` for integers.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Representative of `q` modulo 1 in `[0, 1)`.
pub fn mod_one(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn max_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().max().cloned()
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

pub fn mean(values: &[Rational]) -> Rational {
    let total: Rational = values.iter().sum();
    total / int(values.len() as i64)
}

pub fn is_probability(q: &Rational) -> bool {
    !q.is_negative() && q <= &one()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
