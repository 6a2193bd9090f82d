//! Strategy groups, their elements, and the bijections `η` applied to each
//! player's strategy before the group operation.
//!
//! Groups are immutable after construction. Finite Cayley tables are checked
//! eagerly (Latin square, identity, inverses, associativity) so an invalid
//! table never reaches the integration layer.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels
            .as_ref()
            .and_then(|ls| ls.iter().position(|l| l == label))
    }

    fn is_commutative(&self) -> bool {
        let k = self.order();
        (0..k).all(|a| (0..k).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `Z/mZ` with residues `0..m`.
    Cyclic { modulus: u64 },
    /// A finite group given by its multiplication table.
    Table(CayleyTable),
    /// `(Z, +)`.
    Integers,
    /// `(Z², +)`.
    LatticeZ2,
    /// `Q ∩ [0,1)` with addition modulo 1.
    RationalCircle,
    /// Componentwise direct product.
    Product(Vec<Group>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    kind: GroupKind,
    abelian: bool,
    fc: bool,
}

impl Group {
    pub fn cyclic(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidGroup("cyclic modulus must be at least 1".into()));
        }
        Ok(Group {
            kind: GroupKind::Cyclic { modulus },
            abelian: true,
            fc: true,
        })
    }

    pub fn integers() -> Self {
        Group {
            kind: GroupKind::Integers,
            abelian: true,
            fc: true,
        }
    }

    pub fn lattice_z2() -> Self {
        Group {
            kind: GroupKind::LatticeZ2,
            abelian: true,
            fc: true,
        }
    }

    pub fn rational_circle() -> Self {
        Group {
            kind: GroupKind::RationalCircle,
            abelian: true,
            fc: true,
        }
    }

    /// Builds a finite group from a Cayley table. `abelian` and `fc` are
    /// declared by the caller; a declared-abelian table must commute.
    pub fn table(
        table: Vec<Vec<usize>>,
        identity: usize,
        inverse: Vec<usize>,
        labels: Option<Vec<String>>,
        abelian: bool,
        fc: bool,
    ) -> Result<Self> {
        let k = table.len();
        if k == 0 {
            return Err(Error::InvalidGroup("table must have at least one element".into()));
        }
        if identity >= k {
            return Err(Error::InvalidGroup(format!("identity index {identity} out of range")));
        }
        if inverse.len() != k {
            return Err(Error::InvalidGroup(format!(
                "inverse table has length {}, expected {k}",
                inverse.len()
            )));
        }
        if let Some(ls) = &labels {
            if ls.len() != k {
                return Err(Error::InvalidGroup(format!(
                    "{} labels for a group of order {k}",
                    ls.len()
                )));
            }
            let mut sorted = ls.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != k {
                return Err(Error::InvalidGroup("labels must be distinct".into()));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::InvalidGroup(format!("row {a} is not a permutation")));
            }
        }
        for b in 0..k {
            let column: Vec<usize> = table.iter().map(|row| row[b]).collect();
            if !is_permutation(&column) {
                return Err(Error::InvalidGroup(format!("column {b} is not a permutation")));
            }
        }
        for x in 0..k {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(Error::InvalidGroup(format!(
                    "element {identity} is not a two-sided identity (fails at {x})"
                )));
            }
            let inv = inverse[x];
            if inv >= k || table[x][inv] != identity || table[inv][x] != identity {
                return Err(Error::InvalidGroup(format!(
                    "inverse table inconsistent at element {x}"
                )));
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = table[a][b];
                for c in 0..k {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "operation is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let cayley = CayleyTable {
            table,
            identity,
            inverse,
            labels,
        };
        if abelian && !cayley.is_commutative() {
            return Err(Error::InvalidGroup(
                "table declared abelian but the operation does not commute".into(),
            ));
        }
        if abelian && !fc {
            return Err(Error::InvalidGroup("an abelian group is always FC".into()));
        }
        Ok(Group {
            kind: GroupKind::Table(cayley),
            abelian,
            fc,
        })
    }

    pub fn product(factors: Vec<Group>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("direct product needs at least one factor".into()));
        }
        let abelian = factors.iter().all(|f| f.abelian);
        let fc = factors.iter().all(|f| f.fc);
        Ok(Group {
            kind: GroupKind::Product(factors),
            abelian,
            fc,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_fc(&self) -> bool {
        self.fc
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            GroupKind::Cyclic { .. } => "zc",
            GroupKind::Table(_) => "table",
            GroupKind::Integers => "Z",
            GroupKind::LatticeZ2 => "Z2",
            GroupKind::RationalCircle => "Q1",
            GroupKind::Product(_) => "product",
        }
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Cyclic { modulus } => usize::try_from(*modulus).ok(),
            GroupKind::Table(t) => Some(t.order()),
            GroupKind::Integers | GroupKind::LatticeZ2 | GroupKind::RationalCircle => None,
            GroupKind::Product(fs) => fs
                .iter()
                .try_fold(1usize, |acc, f| f.order().and_then(|o| acc.checked_mul(o))),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Position of a finite-group element in the canonical enumeration
    /// (row-major for products).
    pub fn index_of(&self, x: &Element) -> Result<usize> {
        self.check(x)?;
        match (&self.kind, x) {
            (GroupKind::Cyclic { .. }, Element::Residue(r)) => Ok(*r as usize),
            (GroupKind::Table(_), Element::Index(i)) => Ok(*i),
            (GroupKind::Product(fs), Element::Tuple(xs)) => {
                let mut idx = 0usize;
                for (f, xi) in fs.iter().zip(xs) {
                    let o = f.order().ok_or_else(|| {
                        Error::Unsupported("indexing a product with an infinite factor".into())
                    })?;
                    idx = idx * o + f.index_of(xi)?;
                }
                Ok(idx)
            }
            _ => Err(Error::Unsupported(format!(
                "element indexing on infinite group {}",
                self.tag()
            ))),
        }
    }

    pub fn element_at(&self, idx: usize) -> Result<Element> {
        let order = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("enumerating infinite group {}", self.tag())))?;
        if idx >= order {
            return Err(Error::InvalidElement(format!("index {idx} out of range for order {order}")));
        }
        match &self.kind {
            GroupKind::Cyclic { .. } => Ok(Element::Residue(idx as u64)),
            GroupKind::Table(_) => Ok(Element::Index(idx)),
            GroupKind::Product(fs) => {
                let mut rest = idx;
                let mut parts = vec![Element::Index(0); fs.len()];
                for (slot, f) in parts.iter_mut().zip(fs).rev() {
                    let o = f.order().expect("finite product");
                    *slot = f.element_at(rest % o)?;
                    rest /= o;
                }
                Ok(Element::Tuple(parts))
            }
            _ => unreachable!("finite order implies a finite variant"),
        }
    }

    pub fn elements(&self) -> Result<Vec<Element>> {
        let order = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("enumerating infinite group {}", self.tag())))?;
        (0..order).map(|i| self.element_at(i)).collect()
    }

    /// Confirms that `x` is an element of this group.
    pub fn check(&self, x: &Element) -> Result<()> {
        match (&self.kind, x) {
            (GroupKind::Cyclic { modulus }, Element::Residue(r)) if r < modulus => Ok(()),
            (GroupKind::Table(t), Element::Index(i)) if *i < t.order() => Ok(()),
            (GroupKind::Integers, Element::Int(_)) => Ok(()),
            (GroupKind::LatticeZ2, Element::Pair(_, _)) => Ok(()),
            (GroupKind::RationalCircle, Element::Frac(q))
                if !q.is_negative() && q < &rational::one() =>
            {
                Ok(())
            }
            (GroupKind::Product(fs), Element::Tuple(xs)) if fs.len() == xs.len() => {
                fs.iter().zip(xs).try_for_each(|(f, xi)| f.check(xi))
            }
            _ => Err(Error::mismatch(
                format!("element of {}", self.tag()),
                x.to_string(),
            )),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Cyclic { .. } => Element::Residue(0),
            GroupKind::Table(t) => Element::Index(t.identity),
            GroupKind::Integers => Element::Int(BigInt::zero()),
            GroupKind::LatticeZ2 => Element::Pair(BigInt::zero(), BigInt::zero()),
            GroupKind::RationalCircle => Element::Frac(rational::zero()),
            GroupKind::Product(fs) => Element::Tuple(fs.iter().map(Group::identity).collect()),
        }
    }

    pub fn combine(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.combine_unchecked(a, b))
    }

    fn combine_unchecked(&self, a: &Element, b: &Element) -> Element {
        match (&self.kind, a, b) {
            (GroupKind::Cyclic { modulus }, Element::Residue(x), Element::Residue(y)) => {
                Element::Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (GroupKind::Table(t), Element::Index(x), Element::Index(y)) => {
                Element::Index(t.table[*x][*y])
            }
            (GroupKind::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (GroupKind::LatticeZ2, Element::Pair(x1, x2), Element::Pair(y1, y2)) => {
                Element::Pair(x1 + y1, x2 + y2)
            }
            (GroupKind::RationalCircle, Element::Frac(x), Element::Frac(y)) => {
                Element::Frac(rational::mod_one(&(x + y)))
            }
            (GroupKind::Product(fs), Element::Tuple(xs), Element::Tuple(ys)) => Element::Tuple(
                fs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| f.combine_unchecked(x, y))
                    .collect(),
            ),
            _ => unreachable!("elements were checked against the group"),
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.inverse_unchecked(a))
    }

    fn inverse_unchecked(&self, a: &Element) -> Element {
        match (&self.kind, a) {
            (GroupKind::Cyclic { modulus }, Element::Residue(x)) => {
                Element::Residue((*modulus - *x) % *modulus)
            }
            (GroupKind::Table(t), Element::Index(x)) => Element::Index(t.inverse[*x]),
            (GroupKind::Integers, Element::Int(x)) => Element::Int(-x),
            (GroupKind::LatticeZ2, Element::Pair(x1, x2)) => Element::Pair(-x1, -x2),
            (GroupKind::RationalCircle, Element::Frac(x)) => {
                Element::Frac(rational::mod_one(&-x))
            }
            (GroupKind::Product(fs), Element::Tuple(xs)) => Element::Tuple(
                fs.iter()
                    .zip(xs)
                    .map(|(f, x)| f.inverse_unchecked(x))
                    .collect(),
            ),
            _ => unreachable!("element was checked against the group"),
        }
    }

    /// Left-to-right product of `items`; the empty product is the identity.
    pub fn fold<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        items
            .into_iter()
            .try_fold(self.identity(), |acc, x| self.combine(&acc, x))
    }

    pub fn eval(&self, expr: &GroupExpr) -> Result<Element> {
        match expr {
            GroupExpr::Combine(a, b) => self.combine(a, b),
            GroupExpr::Inverse(a) => self.inverse(a),
            GroupExpr::Identity => Ok(self.identity()),
            GroupExpr::Fold(items) => self.fold(items),
        }
    }

    /// Renders an element using table labels where available.
    pub fn display_element(&self, x: &Element) -> String {
        match (&self.kind, x) {
            (GroupKind::Table(t), Element::Index(i)) => match t.labels.as_ref() {
                Some(ls) if *i < ls.len() => ls[*i].clone(),
                _ => i.to_string(),
            },
            (GroupKind::Product(fs), Element::Tuple(xs)) => {
                let parts: Vec<String> = fs
                    .iter()
                    .zip(xs)
                    .map(|(f, x)| f.display_element(x))
                    .collect();
                format!("({})", parts.join(","))
            }
            _ => x.to_string(),
        }
    }
}

fn is_permutation(values: &[usize]) -> bool {
    let mut seen = vec![false; values.len()];
    for &v in values {
        if v >= values.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Residue(u64),
    Index(usize),
    Int(BigInt),
    Pair(BigInt, BigInt),
    /// Reduced fraction in `[0, 1)`; build through [`Element::frac`].
    Frac(Rational),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn int(n: i64) -> Self {
        Element::Int(BigInt::from(n))
    }

    pub fn pair(a: i64, b: i64) -> Self {
        Element::Pair(BigInt::from(a), BigInt::from(b))
    }

    /// The class of `q` modulo 1.
    pub fn frac(q: Rational) -> Self {
        Element::Frac(rational::mod_one(&q))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Element::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_frac(&self) -> Option<&Rational> {
        match self {
            Element::Frac(q) => Some(q),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Element::Residue(_) => "residue",
            Element::Index(_) => "table index",
            Element::Int(_) => "integer",
            Element::Pair(_, _) => "integer pair",
            Element::Frac(_) => "fraction",
            Element::Tuple(_) => "tuple",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residue(r) => write!(f, "{r}"),
            Element::Index(i) => write!(f, "#{i}"),
            Element::Int(n) => write!(f, "{n}"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
            Element::Frac(q) => write!(f, "{q}"),
            Element::Tuple(xs) => {
                let parts: Vec<String> = xs.iter().map(Element::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Combine(Element, Element),
    Inverse(Element),
    Identity,
    Fold(Vec<Element>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidBijection(format!("sign must be +1 or -1, got {other}"))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// The per-player bijection `η : G → G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bijection {
    Identity,
    /// `x ↦ s·x + c` on `Z`.
    AffineZ { sign: Sign, shift: BigInt },
    /// `x ↦ s·x + c (mod 1)` on `Q ∩ [0,1)`; `c` is kept in `[0, 1)`.
    AffineQ1 { sign: Sign, shift: Rational },
    /// Permutation of element indices of a finite group.
    Permutation(Vec<usize>),
}

impl Bijection {
    pub fn affine_z(sign: Sign, shift: impl Into<BigInt>) -> Self {
        Bijection::AffineZ {
            sign,
            shift: shift.into(),
        }
    }

    pub fn affine_q1(sign: Sign, shift: Rational) -> Self {
        Bijection::AffineQ1 {
            sign,
            shift: rational::mod_one(&shift),
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        if perm.is_empty() || !is_permutation(&perm) {
            return Err(Error::InvalidBijection(format!(
                "{perm:?} is not a permutation of 0..{}",
                perm.len()
            )));
        }
        Ok(Bijection::Permutation(perm))
    }

    /// The inversion map `x ↦ x⁻¹` of a cyclic or table group, as a
    /// permutation of element indices.
    pub fn group_inverse(group: &Group) -> Result<Self> {
        let elements = group.elements()?;
        let perm = elements
            .iter()
            .map(|x| group.index_of(&group.inverse(x)?))
            .collect::<Result<Vec<_>>>()?;
        let eta = Bijection::permutation(perm)?;
        eta.check_compatible(group)?;
        Ok(eta)
    }

    /// `+1`/`-1` for the affine families and the identity.
    pub fn sign(&self) -> Option<Sign> {
        match self {
            Bijection::Identity => Some(Sign::Plus),
            Bijection::AffineZ { sign, .. } | Bijection::AffineQ1 { sign, .. } => Some(*sign),
            Bijection::Permutation(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Bijection::Identity => true,
            Bijection::AffineZ { sign, shift } => *sign == Sign::Plus && shift.is_zero(),
            Bijection::AffineQ1 { sign, shift } => *sign == Sign::Plus && shift.is_zero(),
            Bijection::Permutation(p) => p.iter().enumerate().all(|(i, &v)| i == v),
        }
    }

    pub fn check_compatible(&self, group: &Group) -> Result<()> {
        match (self, group.kind()) {
            (Bijection::Identity, _) => Ok(()),
            (Bijection::AffineZ { .. }, GroupKind::Integers) => Ok(()),
            (Bijection::AffineQ1 { .. }, GroupKind::RationalCircle) => Ok(()),
            (Bijection::Permutation(p), GroupKind::Cyclic { .. } | GroupKind::Table(_))
                if Some(p.len()) == group.order() =>
            {
                Ok(())
            }
            _ => Err(Error::mismatch(
                format!("bijection on {}", group.tag()),
                self.family(),
            )),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Bijection::Identity => "identity",
            Bijection::AffineZ { .. } => "affine-z",
            Bijection::AffineQ1 { .. } => "affine-q1",
            Bijection::Permutation(_) => "perm",
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (Bijection::Identity, _) => Ok(x.clone()),
            (Bijection::AffineZ { sign, shift }, Element::Int(n)) => Ok(Element::Int(match sign {
                Sign::Plus => n + shift,
                Sign::Minus => shift - n,
            })),
            (Bijection::AffineQ1 { sign, shift }, Element::Frac(q)) => Ok(Element::frac(match sign {
                Sign::Plus => q + shift,
                Sign::Minus => shift - q,
            })),
            (Bijection::Permutation(p), Element::Residue(r)) if (*r as usize) < p.len() => {
                Ok(Element::Residue(p[*r as usize] as u64))
            }
            (Bijection::Permutation(p), Element::Index(i)) if *i < p.len() => {
                Ok(Element::Index(p[*i]))
            }
            _ => Err(Error::mismatch(
                format!("element for {} bijection", self.family()),
                x.to_string(),
            )),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Bijection::Identity => Bijection::Identity,
            Bijection::AffineZ { sign, shift } => Bijection::AffineZ {
                sign: *sign,
                shift: match sign {
                    Sign::Plus => -shift,
                    Sign::Minus => shift.clone(),
                },
            },
            Bijection::AffineQ1 { sign, shift } => Bijection::affine_q1(
                *sign,
                match sign {
                    Sign::Plus => -shift,
                    Sign::Minus => shift.clone(),
                },
            ),
            Bijection::Permutation(p) => {
                let mut inv = vec![0; p.len()];
                for (i, &v) in p.iter().enumerate() {
                    inv[v] = i;
                }
                Bijection::Permutation(inv)
            }
        }
    }
}
