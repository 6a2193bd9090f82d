//! Følner windows, invariance defects and window densities.
//!
//! A window's empirical measure is an ordinary [`FiniteMeasure`], so every
//! symbolic integral can be cross-checked through the same integration path.
//! Counting, however, is done in closed form or row by row wherever the
//! window is large.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind};
use crate::measure::{FiniteMeasure, Measure};
use crate::payoff::{EpFn, PayoffFn, PredicateZ2, RowRange};
use crate::rational::{self, Rational};

/// Largest window that [`Window::elements`] will enumerate.
pub const MAX_ENUMERATION: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowSpec {
    /// `{−n, …, n}` in `Z`.
    ZSymmetric(u64),
    /// `{0, …, n}` in `Z`.
    ZRight(u64),
    /// `{−n, …, 0}` in `Z`.
    ZLeft(u64),
    /// `{lo, …, hi}` in `Z`.
    ZInterval { lo: i64, hi: i64 },
    /// `{−n, …, n}² ∩ C` for an open cone `C`.
    Z2Cone { n: u64, cone: PredicateZ2 },
    /// `{−n, …, n}²`.
    Z2Square(u64),
    /// `{k/n! : 0 ≤ k < n!}` in `Q ∩ [0,1)`.
    Q1Factorial(u32),
    /// The whole of a finite group.
    FiniteWhole,
}

impl WindowSpec {
    /// The size parameter `n`, or 0 where there is none.
    pub fn n(&self) -> u64 {
        match self {
            WindowSpec::ZSymmetric(n)
            | WindowSpec::ZRight(n)
            | WindowSpec::ZLeft(n)
            | WindowSpec::Z2Square(n)
            | WindowSpec::Z2Cone { n, .. } => *n,
            WindowSpec::Q1Factorial(n) => *n as u64,
            WindowSpec::ZInterval { lo, hi } => hi.abs_diff(*lo),
            WindowSpec::FiniteWhole => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Interval { lo: i64, hi: i64 },
    /// `(y, x_lo, x_hi)` for every nonempty row.
    Rows(Vec<(i64, i64, i64)>),
    /// The subgroup of order `N`.
    Grid(BigInt),
    Whole(Group),
}

/// A finite window in a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    spec: WindowSpec,
    shape: Shape,
}

pub fn build_window(group: &Group, spec: &WindowSpec) -> Result<Window> {
    let shape = match (spec, group.kind()) {
        (WindowSpec::ZSymmetric(n), GroupKind::Integers) => {
            let n = to_i64(*n)?;
            Shape::Interval { lo: -n, hi: n }
        }
        (WindowSpec::ZRight(n), GroupKind::Integers) => Shape::Interval { lo: 0, hi: to_i64(*n)? },
        (WindowSpec::ZLeft(n), GroupKind::Integers) => Shape::Interval { lo: -to_i64(*n)?, hi: 0 },
        (WindowSpec::ZInterval { lo, hi }, GroupKind::Integers) => {
            if lo > hi {
                return Err(Error::InvalidWindow(format!("empty interval {lo}..{hi}")));
            }
            Shape::Interval { lo: *lo, hi: *hi }
        }
        (WindowSpec::Z2Square(n), GroupKind::LatticeZ2) => {
            let n = to_i64(*n)?;
            Shape::Rows((-n..=n).map(|y| (y, -n, n)).collect())
        }
        (WindowSpec::Z2Cone { n, cone }, GroupKind::LatticeZ2) => {
            if !matches!(cone, PredicateZ2::Cone { .. }) {
                return Err(Error::InvalidWindow("cone windows need a cone predicate".into()));
            }
            let n = to_i64(*n)?;
            let rows: Vec<(i64, i64, i64)> = (-n..=n)
                .filter_map(|y| {
                    let row = cone.cone_row(y)?;
                    match row {
                        RowRange::Empty => None,
                        RowRange::Range { lo, hi } => {
                            let l = lo.map_or(-n, |l| l.max(-n));
                            let h = hi.map_or(n, |h| h.min(n));
                            (l <= h).then_some((y, l, h))
                        }
                    }
                })
                .collect();
            if rows.is_empty() {
                return Err(Error::InvalidWindow(format!("cone window of size {n} is empty")));
            }
            Shape::Rows(rows)
        }
        (WindowSpec::Q1Factorial(n), GroupKind::RationalCircle) => {
            if *n == 0 {
                return Err(Error::InvalidWindow("factorial windows start at n = 1".into()));
            }
            Shape::Grid(rational::factorial(*n))
        }
        (WindowSpec::FiniteWhole, _) if group.is_finite() => Shape::Whole(group.clone()),
        _ => {
            return Err(Error::InvalidWindow(format!(
                "window {spec:?} does not fit group {}",
                group.tag()
            )))
        }
    };
    Ok(Window {
        spec: spec.clone(),
        shape,
    })
}

fn to_i64(n: u64) -> Result<i64> {
    i64::try_from(n)
        .ok()
        .filter(|n| *n < i64::MAX / 64)
        .ok_or_else(|| Error::OutOfRange(format!("window size {n}")))
}

fn overlap(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.1.min(b.1) - a.0.max(b.0) + 1).max(0)
}

impl Window {
    pub fn spec(&self) -> &WindowSpec {
        &self.spec
    }

    pub fn size(&self) -> BigInt {
        match &self.shape {
            Shape::Interval { lo, hi } => BigInt::from(hi - lo + 1),
            Shape::Rows(rows) => rows.iter().map(|(_, l, h)| BigInt::from(h - l + 1)).sum(),
            Shape::Grid(n) => n.clone(),
            Shape::Whole(g) => BigInt::from(g.order().expect("finite")),
        }
    }

    pub fn elements(&self) -> Result<Vec<Element>> {
        let size = self.size();
        if size > BigInt::from(MAX_ENUMERATION) {
            return Err(Error::OutOfRange(format!("window of {size} elements is too large to enumerate")));
        }
        Ok(match &self.shape {
            Shape::Interval { lo, hi } => (*lo..=*hi).map(Element::int).collect(),
            Shape::Rows(rows) => rows
                .iter()
                .flat_map(|&(y, l, h)| (l..=h).map(move |x| Element::pair(x, y)))
                .collect(),
            Shape::Grid(n) => {
                let n = n.to_u64().expect("bounded by the size check");
                (0..n)
                    .map(|k| Element::frac(Rational::new(k.into(), n.into())))
                    .collect()
            }
            Shape::Whole(g) => g.elements()?,
        })
    }

    /// The uniform measure on the window.
    pub fn empirical(&self) -> Result<FiniteMeasure> {
        FiniteMeasure::uniform_on(self.elements()?)
    }

    /// `|F ∩ (g * F)|`.
    fn overlap_with_translate(&self, g: &Element) -> Result<BigInt> {
        match (&self.shape, g) {
            (Shape::Interval { lo, hi }, Element::Int(k)) => {
                let len = BigInt::from(hi - lo + 1);
                Ok((len - k.abs()).max(BigInt::zero()))
            }
            (Shape::Rows(rows), Element::Pair(gx, gy)) => {
                let (Some(gx), Some(gy)) = (gx.to_i64(), gy.to_i64()) else {
                    return Ok(BigInt::zero());
                };
                let total: i64 = rows
                    .par_iter()
                    .map(|&(y, l, h)| match rows.binary_search_by_key(&(y - gy), |r| r.0) {
                        Ok(k) => {
                            let (_, l2, h2) = rows[k];
                            overlap((l, h), (l2 + gx, h2 + gx))
                        }
                        Err(_) => 0,
                    })
                    .sum();
                Ok(BigInt::from(total))
            }
            (Shape::Grid(n), Element::Frac(q)) => {
                let on_grid = (q * Rational::from_integer(n.clone())).is_integer();
                Ok(if on_grid { n.clone() } else { BigInt::zero() })
            }
            (Shape::Whole(g), x) => {
                g.check(x)?;
                Ok(BigInt::from(g.order().expect("finite")))
            }
            _ => Err(Error::mismatch("element of the window's group", g.variant_name())),
        }
    }
}

/// `|(g * F) △ F| / |F|`.
pub fn invariance_defect(window: &Window, g: &Element) -> Result<Rational> {
    let size = window.size();
    let common = window.overlap_with_translate(g)?;
    Ok(Rational::new((&size - common) * 2, size))
}

/// `|A ∩ F| / |F|` for an indicator, or the window average of any
/// representable function.
pub fn window_mean(phi: &PayoffFn, window: &Window) -> Result<Rational> {
    let size = window.size();
    let total = match (&window.shape, phi) {
        (Shape::Interval { lo, hi }, PayoffFn::Ep(f)) => f.window_sum(*lo, *hi),
        (Shape::Grid(n), PayoffFn::Step(f)) => f.grid_sum(n, &rational::zero()),
        (Shape::Rows(rows), PayoffFn::Predicate(p)) => Rational::from_integer(BigInt::from(count_rows(p, rows))),
        (Shape::Whole(_), PayoffFn::Table(t)) => return Ok(t.mean()),
        _ => {
            return Err(Error::mismatch(
                format!("function for window {:?}", window.spec),
                phi.class(),
            ))
        }
    };
    Ok(total / Rational::from_integer(size))
}

fn count_rows(p: &PredicateZ2, rows: &[(i64, i64, i64)]) -> u64 {
    rows.par_iter()
        .map(|&(y, l, h)| match p.cone_row(y) {
            Some(range) => range.count_within(l, h),
            None => (l..=h).filter(|&x| p.contains_i64(x, y)).count() as u64,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPoint {
    pub n: u64,
    pub window_size: BigInt,
    pub value: Rational,
}

/// Window averages of `phi` along a list of windows.
pub fn density_sweep(group: &Group, phi: &PayoffFn, specs: &[WindowSpec]) -> Result<Vec<SweepPoint>> {
    specs
        .iter()
        .map(|spec| {
            let w = build_window(group, spec)?;
            Ok(SweepPoint {
                n: spec.n(),
                window_size: w.size(),
                value: window_mean(phi, &w)?,
            })
        })
        .collect()
}

/// Invariance defects of `g` along a list of windows.
pub fn defect_sweep(group: &Group, g: &Element, specs: &[WindowSpec]) -> Result<Vec<SweepPoint>> {
    group.check(g)?;
    specs
        .iter()
        .map(|spec| {
            let w = build_window(group, spec)?;
            Ok(SweepPoint {
                n: spec.n(),
                window_size: w.size(),
                value: invariance_defect(&w, g)?,
            })
        })
        .collect()
}

/// `max_{|t| ≤ range} |A ∩ (t + F_n)| / |F_n|` with `F_n` the symmetric
/// window (`{−n..n}` on `Z`, `{−n..n}²` on `Z²`, each coordinate of `t`
/// ranging over `−range..=range`).
///
/// This is a lower bound for the largest invariant-mean value of the
/// indicator; for eventually periodic sets it converges to the larger tail
/// average.
pub fn upper_banach_density(phi: &PayoffFn, n: u64, range: u64) -> Result<Rational> {
    let n = to_i64(n)?;
    let r = to_i64(range)?;
    match phi {
        PayoffFn::Ep(f) => Ok(banach_z(f, n, r)),
        PayoffFn::Predicate(p) => banach_z2(p, n, r),
        _ => Err(Error::Unsupported(format!(
            "banach density sweeps cover Z and Z², not {}",
            phi.class()
        ))),
    }
}

fn banach_z(f: &EpFn, n: i64, r: i64) -> Rational {
    let len = 2 * n + 1;
    let Some(s) = f.scaled() else {
        let best = (-r..=r)
            .map(|t| f.window_sum(t - n, t + n))
            .max()
            .expect("nonempty range");
        return best / rational::int(len);
    };
    let span = 2 * r + 1;
    let chunks = rayon::current_num_threads().max(1) as i64;
    let chunk = (span + chunks - 1) / chunks;
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let t0 = -r + c * chunk;
            let t1 = (t0 + chunk - 1).min(r);
            if t0 > t1 {
                return None;
            }
            let mut sum: i128 = (t0 - n..=t0 + n).map(|x| s.eval(x)).sum();
            let mut best = sum;
            for t in t0 + 1..=t1 {
                sum += s.eval(t + n) - s.eval(t - n - 1);
                best = best.max(sum);
            }
            Some(best)
        })
        .max()
        .expect("nonempty range");
    Rational::new(BigInt::from(best), BigInt::from(s.denominator) * BigInt::from(len))
}

/// Cap on the prefix-sum grid used for `Z²` scans.
const MAX_GRID_CELLS: i64 = 64_000_000;

fn banach_z2(p: &PredicateZ2, n: i64, r: i64) -> Result<Rational> {
    // Prefix sums over [−r−n, r+n]².
    let side = 2 * (r + n) + 1;
    if side.checked_mul(side).is_none_or(|c| c > MAX_GRID_CELLS) {
        return Err(Error::OutOfRange(format!(
            "a {side}×{side} scan exceeds {MAX_GRID_CELLS} cells"
        )));
    }
    let base = -(r + n);
    let side_u = side as usize;
    let rows: Vec<Vec<u32>> = (0..side)
        .into_par_iter()
        .map(|j| {
            let y = base + j;
            let mut acc = vec![0u32; side_u + 1];
            for i in 0..side {
                acc[i as usize + 1] = acc[i as usize] + p.contains_i64(base + i, y) as u32;
            }
            acc
        })
        .collect();
    // Column-wise prefix over rows.
    let mut prefix = vec![vec![0u64; side_u + 1]; side_u + 1];
    for j in 0..side_u {
        for i in 0..=side_u {
            prefix[j + 1][i] = prefix[j][i] + rows[j][i] as u64;
        }
    }
    let w = (2 * n + 1) as usize;
    let best = (0..=(2 * r) as usize)
        .into_par_iter()
        .map(|ty| {
            (0..=(2 * r) as usize)
                .map(|tx| {
                    prefix[ty + w][tx + w] + prefix[ty][tx] - prefix[ty][tx + w] - prefix[ty + w][tx]
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let len = (2 * n + 1) as u64;
    Ok(Rational::new(BigInt::from(best), BigInt::from(len * len)))
}

/// Window average by enumeration and the finite-measure integration path.
pub fn empirical_mean(phi: &PayoffFn, window: &Window) -> Result<Rational> {
    crate::integration::integrate(phi, &Measure::Finite(window.empirical()?))
}
