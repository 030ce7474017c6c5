//! Finite subsets of ℤ and ℤ/mℤ and their sum and difference sets.

mod gap;
mod mstd;
mod sidon;
mod stein;

use std::fmt;

use num_rational::BigRational;

use crate::dist::{CyclicDistribution, IntegerDistribution, LogBase};
use crate::error::{Error, Result};
use crate::exact::{exact_entropy_diff_cyclic, exact_entropy_diff_integer, ExactLogRatio};

pub use gap::{
    find_target_diff, lp_gap_distributions, min_embedding_base, product_embed, LpGap, TargetDiff,
    EMBED_SUPPORT_LIMIT,
    NEGATIVE_ENDPOINT_SIZE, POSITIVE_ENDPOINT,
};
pub use mstd::{
    canonical_form, mstd_search, MstdQuery, MstdRecord, MstdSearch, CSV_HEADER as MSTD_CSV_HEADER,
    SEARCH_LIMIT,
};
pub use sidon::sidon_set;
pub use stein::{stein_iterate, SteinLevel, SteinTrace, DEFAULT_STEIN_BUDGET};

/// The group a set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Integers,
    Cyclic(u64),
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Integers => write!(f, "Z"),
            Ambient::Cyclic(m) => write!(f, "Z/{m}Z"),
        }
    }
}

/// A finite set of integers or residues, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSet {
    elements: Vec<i64>,
    ambient: Ambient,
}

impl IntSet {
    pub fn integers(elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Self {
            elements,
            ambient: Ambient::Integers,
        }
    }

    /// Residues are reduced into `[0, modulus)`.
    pub fn cyclic(modulus: u64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let m = modulus as i64;
        let mut elements: Vec<i64> = elements.into_iter().map(|x| x.rem_euclid(m)).collect();
        elements.sort_unstable();
        elements.dedup();
        Ok(Self {
            elements,
            ambient: Ambient::Cyclic(modulus),
        })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    fn with_elements(&self, elements: Vec<i64>) -> Self {
        match self.ambient {
            Ambient::Integers => Self::integers(elements),
            Ambient::Cyclic(m) => Self::cyclic(m, elements).expect("modulus already validated"),
        }
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(
                self.ambient.to_string(),
                other.ambient.to_string(),
            ));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.same_ambient(other)?;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.elements {
            for &b in &other.elements {
                out.push(a + sign * b);
            }
        }
        Ok(self.with_elements(out))
    }

    /// `A + B`.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    /// `A − B`.
    pub fn difference_set(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    /// `m·A = {m·a}`.
    pub fn dilate(&self, m: i64) -> Self {
        self.with_elements(self.elements.iter().map(|a| a * m).collect())
    }

    pub fn translate(&self, t: i64) -> Self {
        self.with_elements(self.elements.iter().map(|a| a + t).collect())
    }

    /// `|A + A| > |A − A|`.
    pub fn is_mstd(&self) -> bool {
        let sums = self.sumset(self).expect("same ambient").len();
        let diffs = self.difference_set(self).expect("same ambient").len();
        sums > diffs
    }

    /// The uniform law on the set, as a distribution on ℤ.
    pub fn uniform_integer<P: crate::prob::Probability>(&self) -> Result<IntegerDistribution<P>> {
        match self.ambient {
            Ambient::Integers => IntegerDistribution::uniform_on(&self.elements),
            Ambient::Cyclic(_) => Err(Error::InvalidArgument(
                "set lives in a cyclic group".into(),
            )),
        }
    }

    /// The uniform law on the set, as a distribution on ℤ/mℤ.
    pub fn uniform_cyclic<P: crate::prob::Probability>(&self) -> Result<CyclicDistribution<P>> {
        match self.ambient {
            Ambient::Cyclic(m) => CyclicDistribution::uniform_on(m as usize, &self.elements),
            Ambient::Integers => Err(Error::InvalidArgument("set lives in ℤ".into())),
        }
    }

    /// `H(X+Y) − H(X−Y)` for `X, Y` i.i.d. uniform on the set, in floats.
    pub fn uniform_entropy_diff(&self, base: LogBase) -> Result<f64> {
        match self.ambient {
            Ambient::Integers => Ok(self.uniform_integer::<f64>()?.sum_minus_diff_entropy(base)),
            Ambient::Cyclic(_) => Ok(self.uniform_cyclic::<f64>()?.sum_minus_diff_entropy(base)),
        }
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Exact `H(X+Y) − H(X−Y)` for `X, Y` i.i.d. uniform on `set`, with scale
/// `1/|A|²`.
pub fn exact_entropy_diff_uniform(set: &IntSet) -> Result<ExactLogRatio> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("set is empty".into()));
    }
    match set.ambient {
        Ambient::Integers => exact_entropy_diff_integer(&set.uniform_integer::<BigRational>()?),
        Ambient::Cyclic(_) => exact_entropy_diff_cyclic(&set.uniform_cyclic::<BigRational>()?),
    }
}

/// Conway's MSTD set.
pub const CONWAY: [i64; 8] = [0, 2, 3, 4, 7, 11, 12, 14];

/// Marica's MSTD set.
pub const MARICA: [i64; 9] = [1, 2, 3, 5, 8, 9, 13, 15, 16];
