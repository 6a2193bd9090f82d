//! Payoff functions on finite groups, stored as one value per element.

use crate::error::{Error, Result};
use crate::group::{Bijection, Element, Group};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableFn {
    group: Group,
    values: Vec<Rational>,
}

impl TableFn {
    pub fn new(group: Group, values: Vec<Rational>) -> Result<Self> {
        let order = group.order().ok_or_else(|| {
            Error::InvalidFunction(format!("table function on infinite group {}", group.tag()))
        })?;
        if values.len() != order {
            return Err(Error::InvalidFunction(format!(
                "table has {} values for a group of order {order}",
                values.len()
            )));
        }
        Ok(TableFn { group, values })
    }

    pub fn constant(group: Group, c: Rational) -> Result<Self> {
        let order = group.order().unwrap_or(0);
        TableFn::new(group, vec![c; order])
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn eval(&self, x: &Element) -> Result<Rational> {
        Ok(self.values[self.group.index_of(x)?].clone())
    }

    /// Average over the whole group: the unique invariant mean.
    pub fn mean(&self) -> Rational {
        rational::mean(&self.values)
    }

    pub fn sup(&self) -> (Rational, Element) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("groups are nonempty");
        (v.clone(), self.group.element_at(i).expect("index in range"))
    }

    pub fn inf(&self) -> (Rational, Element) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("groups are nonempty");
        (v.clone(), self.group.element_at(i).expect("index in range"))
    }

    /// `w ↦ φ(η(w))`.
    pub fn precompose(&self, eta: &Bijection) -> Result<Self> {
        eta.check_compatible(&self.group)?;
        self.map_argument(|w| eta.apply(w))
    }

    /// `w ↦ Σ a·φ(w * g)`.
    pub fn convolve(&self, terms: &[(Rational, Element)]) -> Result<Self> {
        for (_, g) in terms {
            self.group.check(g)?;
        }
        let values = self
            .group
            .elements()?
            .iter()
            .map(|w| {
                terms.iter().try_fold(rational::zero(), |acc, (a, g)| {
                    Ok(acc + a * self.eval(&self.group.combine(w, g)?)?)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TableFn::new(self.group.clone(), values)
    }

    pub fn linear_combination(terms: &[(Rational, &TableFn)]) -> Result<Self> {
        let group = terms
            .first()
            .map(|(_, f)| f.group.clone())
            .ok_or_else(|| Error::InvalidFunction("empty linear combination".into()))?;
        if let Some((_, f)) = terms.iter().find(|(_, f)| f.group != group) {
            return Err(Error::mismatch(group.tag(), f.group.tag()));
        }
        let values = (0..group.order().expect("finite"))
            .map(|k| terms.iter().map(|(a, f)| a * &f.values[k]).sum())
            .collect();
        TableFn::new(group, values)
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        let first = &self.values[0];
        self.values.iter().all(|v| v == first).then_some(first)
    }

    fn map_argument(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        let values = self
            .group
            .elements()?
            .iter()
            .map(|w| self.eval(&f(w)?))
            .collect::<Result<Vec<_>>>()?;
        TableFn::new(self.group.clone(), values)
    }
}
