//! Semigroup backends: finite tables, ℕ̄^k and order-preserving maps on a
//! finite poset (Lsc(X, ℕ̄) for the Alexandrov topology).

mod json;
mod poset;
mod table;

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ext::ExtNat;

pub use json::{load_model, model_from_json, model_from_spec, model_to_json};
pub use poset::Poset;
pub use table::TableModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CuModel {
    Table(TableModel),
    /// ℕ̄^k; the poset is the k-point antichain.
    Vector(Poset),
    Lsc(Poset),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Table(usize),
    Vector(Vec<ExtNat>),
    Lsc(Vec<ExtNat>),
}

impl Element {
    /// Coordinates of a pointwise element.
    pub fn coords(&self) -> Option<&[ExtNat]> {
        match self {
            Element::Table(_) => None,
            Element::Vector(v) | Element::Lsc(v) => Some(v),
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            Element::Table(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Table(i) => write!(f, "#{i}"),
            Element::Vector(v) | Element::Lsc(v) => write!(f, "({})", v.iter().join(",")),
        }
    }
}

/// How an increasing sequence continues after its listed prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainTail {
    /// The last listed term repeats forever.
    Stationary,
    /// Each further term adds `step` to the previous one.
    Linear { step: Element },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingChain {
    pub prefix: Vec<Element>,
    pub tail: ChainTail,
}

impl IncreasingChain {
    pub fn stationary(prefix: Vec<Element>) -> IncreasingChain {
        IncreasingChain { prefix, tail: ChainTail::Stationary }
    }

    pub fn linear(start: Element, step: Element) -> IncreasingChain {
        IncreasingChain { prefix: vec![start], tail: ChainTail::Linear { step } }
    }

    /// The `n`-th term (0-based).
    pub fn term(&self, m: &CuModel, n: usize) -> Result<Element> {
        if let Some(x) = self.prefix.get(n) {
            return Ok(x.clone());
        }
        let last = self
            .prefix
            .last()
            .ok_or_else(|| Error::Precondition("chain needs at least one listed term".into()))?;
        match &self.tail {
            ChainTail::Stationary => Ok(last.clone()),
            ChainTail::Linear { step } => {
                let extra = (n + 1 - self.prefix.len()) as u64;
                Ok(m.add(last, &m.times(step, extra)?)?)
            }
        }
    }
}

impl CuModel {
    pub fn vector(k: usize) -> CuModel {
        CuModel::Vector(Poset::antichain(k))
    }

    pub fn lsc(poset: Poset) -> CuModel {
        CuModel::Lsc(poset)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CuModel::Table(_) => "table",
            CuModel::Vector(_) => "vector",
            CuModel::Lsc(_) => "lsc",
        }
    }

    /// Short human-readable description, e.g. `vector:2`.
    pub fn describe(&self) -> String {
        match self {
            CuModel::Table(t) => format!("table({} elements)", t.len()),
            CuModel::Vector(p) => format!("vector:{}", p.len()),
            CuModel::Lsc(p) => format!("lsc({} points, {} strict pairs)", p.len(), p.strict_pairs().len()),
        }
    }

    pub fn is_pointwise(&self) -> bool {
        !matches!(self, CuModel::Table(_))
    }

    pub fn table(&self) -> Option<&TableModel> {
        match self {
            CuModel::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn poset(&self) -> Option<&Poset> {
        match self {
            CuModel::Table(_) => None,
            CuModel::Vector(p) | CuModel::Lsc(p) => Some(p),
        }
    }

    /// Number of coordinates (points) of a pointwise model.
    pub fn dim(&self) -> Option<usize> {
        self.poset().map(Poset::len)
    }

    pub fn point(&self, coords: Vec<ExtNat>) -> Result<Element> {
        let x = match self {
            CuModel::Table(_) => return Err(Error::Domain("table models have no coordinates".into())),
            CuModel::Vector(_) => Element::Vector(coords),
            CuModel::Lsc(_) => Element::Lsc(coords),
        };
        self.check(&x)?;
        Ok(x)
    }

    /// Wraps coordinates already known to be well formed.
    pub(crate) fn point_unchecked(&self, coords: Vec<ExtNat>) -> Element {
        match self {
            CuModel::Lsc(_) => Element::Lsc(coords),
            _ => Element::Vector(coords),
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (CuModel::Table(t), Element::Table(i)) if *i < t.len() => Ok(()),
            (CuModel::Vector(p), Element::Vector(v)) if v.len() == p.len() => Ok(()),
            (CuModel::Lsc(p), Element::Lsc(v)) if v.len() == p.len() => {
                if p.is_order_preserving(v) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("{x} is not order preserving on the poset")))
                }
            }
            _ => Err(Error::Domain(format!("{x} does not belong to the {} model", self.kind()))),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            CuModel::Table(t) => Element::Table(t.zero()),
            CuModel::Vector(p) => Element::Vector(vec![ExtNat::ZERO; p.len()]),
            CuModel::Lsc(p) => Element::Lsc(vec![ExtNat::ZERO; p.len()]),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (CuModel::Table(t), Element::Table(a), Element::Table(b)) => Element::Table(t.add(*a, *b)),
            _ => {
                let (a, b) = (x.coords().unwrap(), y.coords().unwrap());
                self.point_unchecked(a.iter().zip(b).map(|(u, v)| *u + *v).collect())
            }
        }
    }

    /// `n · x`.
    pub fn times(&self, x: &Element, n: u64) -> Result<Element> {
        self.check(x)?;
        Ok(match (self, x) {
            (CuModel::Table(t), Element::Table(a)) => {
                let mut acc = t.zero();
                for _ in 0..n {
                    acc = t.add(acc, *a);
                }
                Element::Table(acc)
            }
            _ => self.point_unchecked(x.coords().unwrap().iter().map(|v| v.times(n)).collect()),
        })
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_unchecked(x, y))
    }

    pub(crate) fn leq_unchecked(&self, x: &Element, y: &Element) -> bool {
        match (self, x, y) {
            (CuModel::Table(t), Element::Table(a), Element::Table(b)) => t.leq(*a, *b),
            _ => x.coords().unwrap().iter().zip(y.coords().unwrap()).all(|(u, v)| u <= v),
        }
    }

    pub fn waybelow(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.waybelow_unchecked(x, y))
    }

    pub(crate) fn waybelow_unchecked(&self, x: &Element, y: &Element) -> bool {
        self.leq_unchecked(x, y) && x.coords().is_none_or(|c| c.iter().all(|v| v.is_finite()))
    }

    /// Pointwise minimum; `None` on table models.
    pub fn pointwise_min(&self, x: &Element, y: &Element) -> Option<Element> {
        let (a, b) = (x.coords()?, y.coords()?);
        Some(self.point_unchecked(a.iter().zip(b).map(|(u, v)| *u.min(v)).collect()))
    }

    /// Pointwise maximum; `None` on table models.
    pub fn pointwise_max(&self, x: &Element, y: &Element) -> Option<Element> {
        let (a, b) = (x.coords()?, y.coords()?);
        Some(self.point_unchecked(a.iter().zip(b).map(|(u, v)| *u.max(v)).collect()))
    }

    /// Least upper bound of an increasing chain.
    pub fn sup_chain(&self, chain: &IncreasingChain) -> Result<Element> {
        let Some(first) = chain.prefix.first() else {
            return Err(Error::Precondition("chain needs at least one listed term".into()));
        };
        for x in &chain.prefix {
            self.check(x)?;
        }
        for (a, b) in chain.prefix.iter().tuple_windows() {
            if !self.leq_unchecked(a, b) {
                return Err(Error::Precondition(format!("chain is not increasing: {a} is not below {b}")));
            }
        }
        let last = chain.prefix.last().unwrap_or(first);
        match &chain.tail {
            ChainTail::Stationary => Ok(last.clone()),
            ChainTail::Linear { step } => {
                self.check(step)?;
                match self {
                    CuModel::Table(_) => {
                        let mut cur = last.clone();
                        loop {
                            let next = self.add_unchecked(&cur, step);
                            if next == cur {
                                return Ok(cur);
                            }
                            cur = next;
                        }
                    }
                    _ => {
                        let coords = last
                            .coords()
                            .unwrap()
                            .iter()
                            .zip(step.coords().unwrap())
                            .map(|(v, s)| if s.is_zero() { *v } else { ExtNat::Inf })
                            .collect();
                        Ok(self.point_unchecked(coords))
                    }
                }
            }
        }
    }

    /// Every element of the model inside the coordinate cap, in enumeration
    /// order. Pointwise coordinates range over `0..=cap` then ∞, with
    /// coordinate 0 most significant; this order extends the partial order.
    pub fn scope(&self, cap: Option<u64>) -> Result<Vec<Element>> {
        match self {
            CuModel::Table(t) => Ok((0..t.len()).map(Element::Table).collect()),
            CuModel::Vector(p) | CuModel::Lsc(p) => {
                let cap = cap.ok_or_else(|| {
                    Error::Config(format!("a coordinate cap is required to quantify over {}", self.describe()))
                })?;
                let values: Vec<ExtNat> = (0..=cap).map(ExtNat::Fin).chain(std::iter::once(ExtNat::Inf)).collect();
                let out = (0..p.len())
                    .map(|_| values.iter().copied())
                    .multi_cartesian_product()
                    .filter(|v| p.is_order_preserving(v))
                    .map(|v| self.point_unchecked(v))
                    .collect::<Vec<_>>();
                // multi_cartesian_product yields nothing for zero factors.
                if p.is_empty() {
                    return Ok(vec![self.zero()]);
                }
                Ok(out)
            }
        }
    }

    /// Indicator element ∞·χ_U of a point set.
    pub fn infinite_on(&self, set: &[bool]) -> Option<Element> {
        self.poset()?;
        Some(self.point_unchecked(set.iter().map(|&b| if b { ExtNat::Inf } else { ExtNat::ZERO }).collect()))
    }

    /// Support `{p : x(p) > 0}` of a pointwise element.
    pub fn support(&self, x: &Element) -> Option<Vec<bool>> {
        Some(x.coords()?.iter().map(|v| !v.is_zero()).collect())
    }
}
