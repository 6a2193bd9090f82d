//! Eventually periodic functions on `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::Sign;
use crate::rational::{self, Rational};

/// Largest core radius the engine will materialize.
pub const MAX_CORE_RADIUS: usize = 1 << 22;

/// `φ : Z → Q` with an explicit core on `[-K, K]` and period-`m` tails.
///
/// For `x > K` the value is `right[x mod m]`, for `x < -K` it is
/// `left[x mod m]` (residues taken in `0..m`). Values are stored in a canonical
/// form: minimal common period, then minimal core radius.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpFn {
    period: usize,
    right: Vec<Rational>,
    left: Vec<Rational>,
    core_radius: usize,
    core: Vec<Rational>,
}

impl EpFn {
    pub fn new(
        period: usize,
        right: Vec<Rational>,
        left: Vec<Rational>,
        core_radius: usize,
        core: Vec<Rational>,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidFunction("period must be at least 1".into()));
        }
        if right.len() != period || left.len() != period {
            return Err(Error::InvalidFunction(format!(
                "tails must list {period} values (got right={}, left={})",
                right.len(),
                left.len()
            )));
        }
        if core_radius > MAX_CORE_RADIUS {
            return Err(Error::OutOfRange(format!("core radius {core_radius}")));
        }
        if core.len() != 2 * core_radius + 1 {
            return Err(Error::InvalidFunction(format!(
                "core must list {} values for radius {core_radius}, got {}",
                2 * core_radius + 1,
                core.len()
            )));
        }
        let mut f = EpFn {
            period,
            right,
            left,
            core_radius,
            core,
        };
        f.normalize();
        Ok(f)
    }

    pub fn constant(c: Rational) -> Self {
        EpFn {
            period: 1,
            right: vec![c.clone()],
            left: vec![c.clone()],
            core_radius: 0,
            core: vec![c],
        }
    }

    /// Indicator of `{x ≥ 0}`.
    pub fn indicator_naturals() -> Self {
        EpFn::new(
            1,
            vec![rational::one()],
            vec![rational::zero()],
            0,
            vec![rational::one()],
        )
        .expect("valid literal")
    }

    /// Indicator of `m·Z + r`.
    pub fn indicator_residue(modulus: usize, residue: usize) -> Result<Self> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::InvalidFunction(format!(
                "residue {residue} mod {modulus}"
            )));
        }
        let tail: Vec<Rational> = (0..modulus)
            .map(|r| if r == residue { rational::one() } else { rational::zero() })
            .collect();
        let core = vec![tail[0].clone()];
        EpFn::new(modulus, tail.clone(), tail, 0, core)
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn right(&self) -> &[Rational] {
        &self.right
    }

    pub fn left(&self) -> &[Rational] {
        &self.left
    }

    pub fn core_radius(&self) -> usize {
        self.core_radius
    }

    pub fn core(&self) -> &[Rational] {
        &self.core
    }

    fn residue(&self, x: &BigInt) -> usize {
        x.mod_floor(&BigInt::from(self.period))
            .to_usize()
            .expect("residue below period")
    }

    fn residue_i64(&self, x: i64) -> usize {
        x.rem_euclid(self.period as i64) as usize
    }

    pub fn eval(&self, x: &BigInt) -> Rational {
        let k = BigInt::from(self.core_radius);
        if x.abs() <= k {
            let idx = (x + &k).to_usize().expect("inside core");
            self.core[idx].clone()
        } else if x.is_positive() {
            self.right[self.residue(x)].clone()
        } else {
            self.left[self.residue(x)].clone()
        }
    }

    pub fn eval_i64(&self, x: i64) -> &Rational {
        let k = self.core_radius as i64;
        if x.abs() <= k {
            &self.core[(x + k) as usize]
        } else if x > 0 {
            &self.right[self.residue_i64(x)]
        } else {
            &self.left[self.residue_i64(x)]
        }
    }

    /// `(A_-, A_+)`: the averages of the left and right tails.
    pub fn eventual_averages(&self) -> (Rational, Rational) {
        (rational::mean(&self.left), rational::mean(&self.right))
    }

    /// Exact supremum with a point where it is attained. Every value of an
    /// eventually periodic function is attained, so a witness always exists.
    pub fn sup(&self) -> (Rational, BigInt) {
        let mut best: Option<(Rational, BigInt)> = None;
        let mut consider = |v: &Rational, x: BigInt| {
            if best.as_ref().is_none_or(|(b, _)| v > b) {
                best = Some((v.clone(), x));
            }
        };
        let k = self.core_radius as i64;
        for (i, v) in self.core.iter().enumerate() {
            consider(v, BigInt::from(i as i64 - k));
        }
        for r in 0..self.period {
            consider(&self.right[r], BigInt::from(self.first_right_point(r)));
            consider(&self.left[r], BigInt::from(self.first_left_point(r)));
        }
        best.expect("core is never empty")
    }

    pub fn inf(&self) -> (Rational, BigInt) {
        let (v, x) = self.scale(&-rational::one()).sup();
        (-v, x)
    }

    /// Smallest `x > K` with `x ≡ r (mod m)`.
    fn first_right_point(&self, r: usize) -> i64 {
        let start = self.core_radius as i64 + 1;
        start + (r as i64 - start).rem_euclid(self.period as i64)
    }

    /// Largest `x < -K` with `x ≡ r (mod m)`.
    fn first_left_point(&self, r: usize) -> i64 {
        let start = -(self.core_radius as i64) - 1;
        start - (start - r as i64).rem_euclid(self.period as i64)
    }

    /// `w ↦ φ(s·w + c)`.
    pub fn precompose(&self, sign: Sign, shift: &BigInt) -> Result<Self> {
        let c = shift
            .to_i64()
            .ok_or_else(|| Error::OutOfRange(format!("shift {shift}")))?;
        let k_new = self
            .core_radius
            .checked_add(c.unsigned_abs() as usize)
            .filter(|k| *k <= MAX_CORE_RADIUS)
            .ok_or_else(|| Error::OutOfRange(format!("core radius after shift by {c}")))?;
        let m = self.period as i64;
        let s = sign.as_i64();
        let core = (-(k_new as i64)..=k_new as i64)
            .map(|w| self.eval_i64(s * w + c).clone())
            .collect();
        let (right, left) = match sign {
            Sign::Plus => (
                (0..m).map(|r| self.right[(r + c).rem_euclid(m) as usize].clone()).collect(),
                (0..m).map(|r| self.left[(r + c).rem_euclid(m) as usize].clone()).collect(),
            ),
            Sign::Minus => (
                (0..m).map(|r| self.left[(c - r).rem_euclid(m) as usize].clone()).collect(),
                (0..m).map(|r| self.right[(c - r).rem_euclid(m) as usize].clone()).collect(),
            ),
        };
        EpFn::new(self.period, right, left, k_new, core)
    }

    /// `w ↦ Σ_t a_t · φ(w + g_t)`.
    pub fn convolve(&self, terms: &[(Rational, BigInt)]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(EpFn::constant(rational::zero()));
        }
        let shifts = terms
            .iter()
            .map(|(_, g)| g.to_i64().ok_or_else(|| Error::OutOfRange(format!("shift {g}"))))
            .collect::<Result<Vec<i64>>>()?;
        let reach = shifts.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0);
        let k_new = self
            .core_radius
            .checked_add(reach)
            .filter(|k| *k <= MAX_CORE_RADIUS)
            .ok_or_else(|| Error::OutOfRange("core radius after convolution".into()))?;
        let m = self.period as i64;
        let core = (-(k_new as i64)..=k_new as i64)
            .map(|w| {
                terms
                    .iter()
                    .zip(&shifts)
                    .map(|((a, _), g)| a * self.eval_i64(w + g))
                    .sum()
            })
            .collect();
        let tail = |values: &[Rational]| -> Vec<Rational> {
            (0..m)
                .map(|r| {
                    terms
                        .iter()
                        .zip(&shifts)
                        .map(|((a, _), g)| a * &values[(r + g).rem_euclid(m) as usize])
                        .sum()
                })
                .collect()
        };
        EpFn::new(self.period, tail(&self.right), tail(&self.left), k_new, core)
    }

    pub fn linear_combination(terms: &[(Rational, &EpFn)]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(EpFn::constant(rational::zero()));
        }
        let period = terms
            .iter()
            .fold(1usize, |acc, (_, f)| acc.lcm(&f.period));
        let k = terms.iter().map(|(_, f)| f.core_radius).max().unwrap_or(0) as i64;
        let core = (-k..=k)
            .map(|w| terms.iter().map(|(a, f)| a * f.eval_i64(w)).sum())
            .collect();
        let right = (0..period)
            .map(|r| terms.iter().map(|(a, f)| a * &f.right[r % f.period]).sum())
            .collect();
        let left = (0..period)
            .map(|r| terms.iter().map(|(a, f)| a * &f.left[r % f.period]).sum())
            .collect();
        EpFn::new(period, right, left, k as usize, core)
    }

    pub fn scale(&self, a: &Rational) -> Self {
        EpFn {
            period: self.period,
            right: self.right.iter().map(|v| v * a).collect(),
            left: self.left.iter().map(|v| v * a).collect(),
            core_radius: self.core_radius,
            core: self.core.iter().map(|v| v * a).collect(),
        }
        .normalized()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        (self.period == 1
            && self.core_radius == 0
            && self.right[0] == self.left[0]
            && self.core[0] == self.right[0])
            .then_some(&self.core[0])
    }

    /// `Σ_{x=lo}^{hi} φ(x)`, computed per residue class.
    pub fn window_sum(&self, lo: i64, hi: i64) -> Rational {
        if lo > hi {
            return rational::zero();
        }
        let k = self.core_radius as i64;
        let mut total = rational::zero();
        let (l_lo, l_hi) = (lo, hi.min(-k - 1));
        if l_lo <= l_hi {
            total += self.tail_sum(&self.left, l_lo, l_hi);
        }
        let (c_lo, c_hi) = (lo.max(-k), hi.min(k));
        for x in c_lo..=c_hi {
            total += &self.core[(x + k) as usize];
        }
        let (r_lo, r_hi) = (lo.max(k + 1), hi);
        if r_lo <= r_hi {
            total += self.tail_sum(&self.right, r_lo, r_hi);
        }
        total
    }

    fn tail_sum(&self, values: &[Rational], lo: i64, hi: i64) -> Rational {
        let m = self.period as i64;
        values
            .iter()
            .enumerate()
            .map(|(r, v)| {
                let r = r as i64;
                let count = (hi - r).div_euclid(m) - (lo - 1 - r).div_euclid(m);
                v * Rational::from_integer(BigInt::from(count))
            })
            .sum()
    }

    /// The function scaled to integers: `(D, core, right, left)` with every
    /// value equal to `numerator / D`. `None` if the numerators overflow.
    pub fn scaled(&self) -> Option<ScaledEp> {
        let all = self.core.iter().chain(&self.right).chain(&self.left);
        let d = rational::lcm_denominators(all).to_i128()?;
        let conv = |v: &Rational| -> Option<i128> {
            (v.numer() * BigInt::from(d) / v.denom()).to_i128()
        };
        Some(ScaledEp {
            denominator: d,
            period: self.period as i64,
            core_radius: self.core_radius as i64,
            core: self.core.iter().map(conv).collect::<Option<_>>()?,
            right: self.right.iter().map(conv).collect::<Option<_>>()?,
            left: self.left.iter().map(conv).collect::<Option<_>>()?,
        })
    }

    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        let p_right = minimal_period(&self.right);
        let p_left = minimal_period(&self.left);
        let p = p_right.lcm(&p_left);
        if p < self.period {
            self.right.truncate(p);
            self.left.truncate(p);
            self.period = p;
        }
        while self.core_radius > 0 {
            let k = self.core_radius as i64;
            let left_edge = &self.core[0];
            let right_edge = &self.core[self.core.len() - 1];
            if *left_edge == self.left[self.residue_i64(-k)]
                && *right_edge == self.right[self.residue_i64(k)]
            {
                self.core.pop();
                self.core.remove(0);
                self.core_radius -= 1;
            } else {
                break;
            }
        }
    }
}

/// Integer-scaled copy of an [`EpFn`] for fast window scans.
#[derive(Debug, Clone)]
pub struct ScaledEp {
    pub denominator: i128,
    period: i64,
    core_radius: i64,
    core: Vec<i128>,
    right: Vec<i128>,
    left: Vec<i128>,
}

impl ScaledEp {
    pub fn eval(&self, x: i64) -> i128 {
        if x.abs() <= self.core_radius {
            self.core[(x + self.core_radius) as usize]
        } else if x > 0 {
            self.right[x.rem_euclid(self.period) as usize]
        } else {
            self.left[x.rem_euclid(self.period) as usize]
        }
    }
}

fn minimal_period(values: &[Rational]) -> usize {
    let m = values.len();
    (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .find(|&d| (d..m).all(|i| values[i] == values[i - d]))
        .unwrap_or(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    pub(crate) fn wald_phi() -> EpFn {
        EpFn::new(1, vec![int(1)], vec![int(0)], 0, vec![ratio(1, 2)]).unwrap()
    }

    #[test]
    fn parity_indicator_evaluates() {
        let even = EpFn::new(2, vec![int(1), int(0)], vec![int(1), int(0)], 0, vec![int(1)]).unwrap();
        assert_eq!(even.eval(&BigInt::from(7)), int(0));
        assert_eq!(even.eval(&BigInt::from(-4)), int(1));
        assert_eq!(even.eventual_averages(), (ratio(1, 2), ratio(1, 2)));
        assert_eq!(even, EpFn::indicator_residue(2, 0).unwrap());
    }

    #[test]
    fn wald_values_and_averages() {
        let f = wald_phi();
        assert_eq!(f.eval(&BigInt::from(0)), ratio(1, 2));
        assert_eq!(f.eval(&BigInt::from(3)), int(1));
        assert_eq!(f.eval(&BigInt::from(-3)), int(0));
        assert_eq!(f.eventual_averages(), (int(0), int(1)));
        assert_eq!(f.sup().0, int(1));
        assert_eq!(f.inf().0, int(0));
        let n = EpFn::indicator_naturals();
        assert_eq!(n.eventual_averages(), (int(0), int(1)));
    }

    #[test]
    fn normalization_is_canonical() {
        // Period 4 with repeated halves and a redundant core.
        let a = EpFn::new(
            4,
            vec![int(1), int(0), int(1), int(0)],
            vec![int(2), int(2), int(2), int(2)],
            2,
            vec![int(2), int(2), int(5), int(0), int(1)],
        )
        .unwrap();
        assert_eq!(a.period(), 2);
        assert_eq!(a.core_radius(), 0);
        let b = EpFn::new(2, vec![int(1), int(0)], vec![int(2), int(2)], 0, vec![int(5)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn precompose_reflection_swaps_tails() {
        let n = EpFn::indicator_naturals();
        let r = n.precompose(Sign::Minus, &BigInt::from(0)).unwrap();
        assert_eq!(r.eventual_averages(), (int(1), int(0)));
        for x in -5..=5 {
            assert_eq!(r.eval(&BigInt::from(x)), n.eval(&BigInt::from(-x)));
        }
    }

    #[test]
    fn precompose_translation_keeps_tails() {
        let f = wald_phi();
        let g = f.precompose(Sign::Plus, &BigInt::from(3)).unwrap();
        assert_eq!(g.eventual_averages(), (int(0), int(1)));
        assert_eq!(g.eval(&BigInt::from(-3)), ratio(1, 2));
        assert_eq!(g.eval(&BigInt::from(-4)), int(0));
    }

    #[test]
    fn translation_of_naturals() {
        let n = EpFn::indicator_naturals();
        let t = n.convolve(&[(int(1), BigInt::from(5))]).unwrap();
        for w in -12..12 {
            let expected = if w >= -5 { int(1) } else { int(0) };
            assert_eq!(t.eval(&BigInt::from(w)), expected, "w = {w}");
        }
        assert_eq!(t.eventual_averages(), (int(0), int(1)));
    }

    #[test]
    fn sup_witness_in_tail() {
        let f = EpFn::new(3, vec![int(0), int(7), int(1)], vec![int(2); 3], 1, vec![int(3), int(4), int(5)])
            .unwrap();
        let (v, x) = f.sup();
        assert_eq!(v, int(7));
        assert_eq!(f.eval(&x), int(7));
        assert!(x > BigInt::from(1));
    }

    #[test]
    fn window_sum_matches_pointwise() {
        let f = EpFn::new(3, vec![int(0), ratio(7, 2), int(1)], vec![int(2), int(-1), int(0)], 2,
            vec![int(3), int(4), int(5), int(6), int(-2)]).unwrap();
        for lo in -12..4 {
            for hi in lo - 1..14 {
                let direct: Rational = (lo..=hi).map(|x| f.eval_i64(x).clone()).sum();
                assert_eq!(f.window_sum(lo, hi), direct, "[{lo},{hi}]");
            }
        }
    }

    #[test]
    fn scaled_values_agree() {
        let f = EpFn::new(2, vec![ratio(1, 3), ratio(1, 2)], vec![int(0), ratio(-5, 6)], 1,
            vec![int(1), int(2), ratio(1, 4)]).unwrap();
        let s = f.scaled().unwrap();
        for x in -9..9 {
            assert_eq!(
                Rational::new(BigInt::from(s.eval(x)), BigInt::from(s.denominator)),
                *f.eval_i64(x)
            );
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(EpFn::new(0, vec![], vec![], 0, vec![int(0)]).is_err());
        assert!(EpFn::new(2, vec![int(0)], vec![int(0), int(0)], 0, vec![int(0)]).is_err());
        assert!(EpFn::new(1, vec![int(0)], vec![int(0)], 1, vec![int(0)]).is_err());
    }
}
