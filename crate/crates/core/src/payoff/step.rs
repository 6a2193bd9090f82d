//! Piecewise-linear functions on `Q ∩ [0,1)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::Sign;
use crate::rational::{self, Rational};

/// `w ↦ slope·w + intercept`; a constant piece has slope zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn constant(c: Rational) -> Self {
        Piece {
            slope: rational::zero(),
            intercept: c,
        }
    }

    pub fn linear(slope: Rational, intercept: Rational) -> Self {
        Piece { slope, intercept }
    }

    pub fn at(&self, w: &Rational) -> Rational {
        &self.slope * w + &self.intercept
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// `∫_a^b (slope·w + intercept) dw`.
    fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        &self.slope * (b * b - a * a) / rational::int(2) + &self.intercept * (b - a)
    }
}

/// Piece `j` covers `[t_j, t_{j+1})`; `points` overrides individual values.
///
/// Canonical form: adjacent pieces differ and no point value repeats the
/// value its piece already gives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFn {
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece>,
    points: BTreeMap<Rational, Rational>,
}

impl StepFn {
    pub fn new(
        breakpoints: Vec<Rational>,
        pieces: Vec<Piece>,
        points: BTreeMap<Rational, Rational>,
    ) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidFunction("need breakpoints 0 = t_0 < … < t_k = 1".into()));
        }
        if !breakpoints[0].is_zero() || breakpoints[breakpoints.len() - 1] != rational::one() {
            return Err(Error::InvalidFunction("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing".into()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        if let Some(p) = points.keys().find(|p| p.is_negative() || **p >= rational::one()) {
            return Err(Error::InvalidFunction(format!("point {p} is outside [0,1)")));
        }
        let mut f = StepFn {
            breakpoints,
            pieces,
            points,
        };
        f.normalize();
        Ok(f)
    }

    pub fn constant(c: Rational) -> Self {
        StepFn {
            breakpoints: vec![rational::zero(), rational::one()],
            pieces: vec![Piece::constant(c)],
            points: BTreeMap::new(),
        }
    }

    /// Indicator of the closed interval `[a, b]` intersected with `[0, 1)`.
    pub fn indicator_closed(a: &Rational, b: &Rational) -> Result<Self> {
        let mut f = StepFn::indicator_half_open(a, b)?;
        if *b < rational::one() {
            f.points.insert(b.clone(), rational::one());
            f.normalize();
        }
        Ok(f)
    }

    /// Indicator of `[a, b)` with `0 ≤ a < b ≤ 1`.
    pub fn indicator_half_open(a: &Rational, b: &Rational) -> Result<Self> {
        if a.is_negative() || a >= b || *b > rational::one() {
            return Err(Error::InvalidFunction(format!("interval [{a}, {b}) not inside [0,1]")));
        }
        let mut breakpoints = vec![rational::zero()];
        let mut pieces = Vec::new();
        if !a.is_zero() {
            breakpoints.push(a.clone());
            pieces.push(Piece::constant(rational::zero()));
        }
        pieces.push(Piece::constant(rational::one()));
        if *b < rational::one() {
            breakpoints.push(b.clone());
            pieces.push(Piece::constant(rational::zero()));
        }
        breakpoints.push(rational::one());
        StepFn::new(breakpoints, pieces, BTreeMap::new())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn points(&self) -> &BTreeMap<Rational, Rational> {
        &self.points
    }

    fn piece_index(&self, w: &Rational) -> usize {
        // Largest j with t_j ≤ w.
        match self.breakpoints.binary_search(w) {
            Ok(j) => j.min(self.pieces.len() - 1),
            Err(j) => j - 1,
        }
    }

    fn default_at(&self, w: &Rational) -> Rational {
        self.pieces[self.piece_index(w)].at(w)
    }

    /// Value at `w ∈ [0, 1)`; other rationals are reduced modulo 1 first.
    pub fn eval(&self, w: &Rational) -> Rational {
        let w = rational::mod_one(w);
        match self.points.get(&w) {
            Some(v) => v.clone(),
            None => self.default_at(&w),
        }
    }

    /// Lebesgue integral over `[0, 1)`; point values have measure zero.
    pub fn lebesgue(&self) -> Rational {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, t)| p.integral(&t[0], &t[1]))
            .sum()
    }

    /// Exact supremum over rational points and, when it is attained, a
    /// rational witness.
    pub fn sup(&self) -> (Rational, Option<Rational>) {
        let mut candidates: Vec<(Rational, Option<Rational>)> = Vec::new();
        for (p, v) in &self.points {
            candidates.push((v.clone(), Some(p.clone())));
        }
        for (piece, t) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            let left = piece.at(&t[0]);
            let right = piece.at(&t[1]);
            if piece.is_constant() {
                candidates.push((left, Some(self.free_point(&t[0], &t[1]))));
            } else {
                let left_attained = !self.points.contains_key(&t[0]);
                candidates.push((left, left_attained.then(|| t[0].clone())));
                candidates.push((right, None));
            }
        }
        let sup = candidates
            .iter()
            .map(|(v, _)| v)
            .max()
            .cloned()
            .expect("at least one piece");
        let witness = candidates
            .into_iter()
            .filter(|(v, _)| *v == sup)
            .find_map(|(_, w)| w);
        (sup, witness)
    }

    pub fn inf(&self) -> (Rational, Option<Rational>) {
        let (v, w) = self.scale(&-rational::one()).sup();
        (-v, w)
    }

    /// A rational in `(a, b)` with no point override.
    fn free_point(&self, a: &Rational, b: &Rational) -> Rational {
        let mut w = (a + b) / rational::int(2);
        while self.points.contains_key(&w) {
            w = (a + &w) / rational::int(2);
        }
        w
    }

    /// `w ↦ φ(s·w + c mod 1)`.
    pub fn precompose(&self, sign: Sign, shift: &Rational) -> Self {
        let s = rational::int(sign.as_i64());
        let c = rational::mod_one(shift);
        let forward = |w: &Rational| rational::mod_one(&(&s * w + &c));
        // η⁻¹(y) = s·(y − c)
        let backward = |y: &Rational| rational::mod_one(&(&s * (y - &c)));
        let cuts: BTreeSet<Rational> = self.breakpoints[..self.breakpoints.len() - 1]
            .iter()
            .map(backward)
            .chain(std::iter::once(rational::zero()))
            .collect();
        let mut breakpoints: Vec<Rational> = cuts.into_iter().collect();
        breakpoints.push(rational::one());
        let pieces = breakpoints
            .windows(2)
            .map(|t| {
                let mid = (&t[0] + &t[1]) / rational::int(2);
                let raw = &s * &mid + &c;
                let wrapped = rational::mod_one(&raw);
                let wrap = &wrapped - &raw;
                let old = &self.pieces[self.piece_index(&wrapped)];
                Piece::linear(&old.slope * &s, &old.slope * (&c + &wrap) + &old.intercept)
            })
            .collect();
        let mut points: BTreeMap<Rational, Rational> = breakpoints[..breakpoints.len() - 1]
            .iter()
            .map(|b| (b.clone(), self.eval(&forward(b))))
            .collect();
        for (p, v) in &self.points {
            points.insert(backward(p), v.clone());
        }
        let mut f = StepFn {
            breakpoints,
            pieces,
            points,
        };
        f.normalize();
        f
    }

    pub fn linear_combination(terms: &[(Rational, &StepFn)]) -> Self {
        if terms.is_empty() {
            return StepFn::constant(rational::zero());
        }
        let cuts: BTreeSet<Rational> = terms
            .iter()
            .flat_map(|(_, f)| f.breakpoints.iter().cloned())
            .collect();
        let breakpoints: Vec<Rational> = cuts.into_iter().collect();
        let pieces = breakpoints
            .windows(2)
            .map(|t| {
                let (mut slope, mut intercept) = (rational::zero(), rational::zero());
                for (a, f) in terms {
                    let p = &f.pieces[f.piece_index(&t[0])];
                    slope += a * &p.slope;
                    intercept += a * &p.intercept;
                }
                Piece::linear(slope, intercept)
            })
            .collect();
        let keys: BTreeSet<Rational> = terms
            .iter()
            .flat_map(|(_, f)| f.points.keys().cloned())
            .collect();
        let points = keys
            .into_iter()
            .map(|p| {
                let v = terms.iter().map(|(a, f)| a * f.eval(&p)).sum();
                (p, v)
            })
            .collect();
        let mut f = StepFn {
            breakpoints,
            pieces,
            points,
        };
        f.normalize();
        f
    }

    pub fn scale(&self, a: &Rational) -> Self {
        StepFn::linear_combination(&[(a.clone(), self)])
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        (self.pieces.len() == 1 && self.pieces[0].is_constant() && self.points.is_empty())
            .then_some(&self.pieces[0].intercept)
    }

    /// `Σ_{k=0}^{N-1} φ(t + k/N)`: the unnormalized average of `φ` over a
    /// coset of the cyclic subgroup of order `N`.
    pub fn grid_sum(&self, n: &BigInt, offset: &Rational) -> Rational {
        let shifted = if offset.is_zero() {
            self.clone()
        } else {
            self.precompose(Sign::Plus, offset)
        };
        let nq = Rational::from_integer(n.clone());
        let mut total = rational::zero();
        for (piece, t) in shifted.pieces.iter().zip(shifted.breakpoints.windows(2)) {
            // Grid points k/N in [t_j, t_{j+1}).
            let k0 = (&t[0] * &nq).ceil().to_integer();
            let k1 = (&t[1] * &nq).ceil().to_integer() - BigInt::from(1);
            if k1 < k0 {
                continue;
            }
            let count = &k1 - &k0 + BigInt::from(1);
            let index_sum = Rational::from_integer((&k0 + &k1) * &count) / rational::int(2);
            total += &piece.slope * index_sum / &nq + &piece.intercept * Rational::from_integer(count);
        }
        for (p, v) in &shifted.points {
            if (p * &nq).is_integer() {
                total += v - shifted.default_at(p);
            }
        }
        total
    }

    fn normalize(&mut self) {
        let mut breakpoints = vec![self.breakpoints[0].clone()];
        let mut pieces: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for (piece, t) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            if pieces.last() == Some(piece) {
                breakpoints.pop();
            } else {
                pieces.push(piece.clone());
            }
            breakpoints.push(t[1].clone());
        }
        self.breakpoints = breakpoints;
        self.pieces = pieces;
        let points = std::mem::take(&mut self.points);
        self.points = points
            .into_iter()
            .filter(|(p, v)| self.default_at(p) != *v)
            .collect();
    }

    /// Least common multiple of the denominators of breakpoints and point keys.
    pub fn denominators_lcm(&self) -> BigInt {
        self.breakpoints
            .iter()
            .chain(self.points.keys())
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn neg_distance() -> StepFn {
        // −min(w, 1 − w)
        StepFn::new(
            vec![int(0), ratio(1, 2), int(1)],
            vec![Piece::linear(int(-1), int(0)), Piece::linear(int(1), int(-1))],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn interval_indicator_membership() {
        let f = StepFn::indicator_closed(&ratio(1, 4), &ratio(1, 2)).unwrap();
        assert_eq!(f.eval(&ratio(1, 3)), int(1));
        assert_eq!(f.eval(&ratio(1, 4)), int(1));
        assert_eq!(f.eval(&ratio(1, 2)), int(1));
        assert_eq!(f.eval(&ratio(3, 5)), int(0));
        assert_eq!(f.eval(&ratio(1, 5)), int(0));
        assert_eq!(f.lebesgue(), ratio(1, 4));
    }

    #[test]
    fn lebesgue_of_constants_and_tents() {
        assert_eq!(StepFn::constant(int(1)).lebesgue(), int(1));
        assert_eq!(neg_distance().lebesgue(), ratio(-1, 4));
        assert_eq!(neg_distance().scale(&int(-1)).lebesgue(), ratio(1, 4));
    }

    #[test]
    fn sup_of_negative_distance() {
        let (v, w) = neg_distance().sup();
        assert_eq!(v, int(0));
        assert_eq!(w, Some(int(0)));
        let (lo, _) = neg_distance().inf();
        assert_eq!(lo, ratio(-1, 2));
    }

    #[test]
    fn sup_not_attained_on_open_end() {
        // w on [0,1): sup 1 approached, never attained.
        let f = StepFn::new(vec![int(0), int(1)], vec![Piece::linear(int(1), int(0))], BTreeMap::new())
            .unwrap();
        assert_eq!(f.sup(), (int(1), None));
    }

    #[test]
    fn translation_of_interval() {
        let f = StepFn::indicator_closed(&ratio(1, 4), &ratio(1, 2)).unwrap();
        let g = f.precompose(Sign::Plus, &ratio(1, 4));
        assert_eq!(g, StepFn::indicator_closed(&int(0), &ratio(1, 4)).unwrap());
        assert_eq!(g.lebesgue(), ratio(1, 4));
    }

    #[test]
    fn reflection_matches_pointwise() {
        let f = StepFn::new(
            vec![int(0), ratio(1, 3), ratio(2, 3), int(1)],
            vec![
                Piece::constant(int(0)),
                Piece::constant(ratio(1, 2)),
                Piece::linear(int(2), int(-1)),
            ],
            [(int(0), ratio(1, 2)), (ratio(1, 2), int(7))].into_iter().collect(),
        )
        .unwrap();
        for (sign, c) in [(Sign::Minus, int(0)), (Sign::Minus, ratio(1, 5)), (Sign::Plus, ratio(3, 7))] {
            let g = f.precompose(sign, &c);
            for k in 0..210 {
                let w = ratio(k, 210);
                let y = rational::mod_one(&(rational::int(sign.as_i64()) * &w + &c));
                assert_eq!(g.eval(&w), f.eval(&y), "w={w}");
            }
            assert_eq!(g.lebesgue(), f.lebesgue());
        }
    }

    #[test]
    fn grid_sum_counts_half_open_exactly() {
        let f = StepFn::indicator_half_open(&ratio(1, 4), &ratio(1, 2)).unwrap();
        assert_eq!(f.grid_sum(&BigInt::from(24), &int(0)), int(6));
        let closed = StepFn::indicator_closed(&ratio(1, 4), &ratio(1, 2)).unwrap();
        assert_eq!(closed.grid_sum(&BigInt::from(24), &int(0)), int(7));
        // Brute force on a coset.
        let off = ratio(1, 100);
        let direct: Rational = (0..24).map(|k| closed.eval(&(&off + ratio(k, 24)))).sum();
        assert_eq!(closed.grid_sum(&BigInt::from(24), &off), direct);
    }

    #[test]
    fn canonical_after_combination() {
        let a = StepFn::indicator_half_open(&int(0), &ratio(1, 2)).unwrap();
        let b = StepFn::indicator_half_open(&ratio(1, 2), &int(1)).unwrap();
        let sum = StepFn::linear_combination(&[(int(1), &a), (int(1), &b)]);
        assert_eq!(sum, StepFn::constant(int(1)));
        assert_eq!(sum.as_constant(), Some(&int(1)));
    }

    #[test]
    fn rejects_malformed() {
        assert!(StepFn::new(vec![int(0), int(1)], vec![], BTreeMap::new()).is_err());
        assert!(StepFn::new(vec![int(0), ratio(1, 2)], vec![Piece::constant(int(0))], BTreeMap::new()).is_err());
        assert!(StepFn::new(
            vec![int(0), int(1)],
            vec![Piece::constant(int(0))],
            [(int(1), int(1))].into_iter().collect()
        )
        .is_err());
    }
}
