//! Exhaustive search for MSTD sets (`|A+A| > |A−A|`).
//!
//! Integer searches enumerate sets with minimum 0 inside `[0, width]`;
//! cyclic searches enumerate subsets of ℤ/mℤ. Sets are produced in
//! lexicographic order of their sorted element lists.
//!
//! With `canonical`, one representative per affine class is kept:
//! * in ℤ, sets with `gcd = 1` that are lexicographically no larger than
//!   their reflection `max − A`;
//! * in ℤ/mℤ, sets equal to the lexicographic minimum of all their images
//!   `a·A + b` with `a` a unit.

use num_integer::Integer;

use super::{Ambient, IntSet};
use crate::error::{Error, Result};

/// Largest number of candidate subsets a search may enumerate.
pub const SEARCH_LIMIT: u128 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MstdQuery {
    /// `Ambient::Integers` searches `[0, width]`.
    pub ambient: Ambient,
    pub width: u64,
    pub min_size: usize,
    pub max_size: usize,
    pub canonical: bool,
}

impl MstdQuery {
    pub fn integers(width: u64, max_size: usize, canonical: bool) -> Self {
        Self {
            ambient: Ambient::Integers,
            width,
            min_size: 1,
            max_size,
            canonical,
        }
    }

    pub fn cyclic(modulus: u64, max_size: usize, canonical: bool) -> Self {
        Self {
            ambient: Ambient::Cyclic(modulus),
            width: modulus.saturating_sub(1),
            min_size: 1,
            max_size,
            canonical,
        }
    }

    pub fn with_min_size(mut self, min_size: usize) -> Self {
        self.min_size = min_size;
        self
    }

    /// Whether 0 is forced into every candidate (translation normalization).
    fn zero_forced(&self) -> bool {
        matches!(self.ambient, Ambient::Integers) || self.canonical
    }

    /// Number of candidate subsets the search enumerates.
    pub fn search_space(&self) -> u128 {
        let free = if self.zero_forced() {
            self.width
        } else {
            self.width + 1
        };
        let offset = usize::from(self.zero_forced());
        (self.min_size.max(offset)..=self.max_size)
            .map(|s| binomial(free, (s - offset) as u64))
            .fold(0u128, |acc, c| acc.saturating_add(c))
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// One search hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MstdRecord {
    pub set: IntSet,
    pub sums: usize,
    pub diffs: usize,
}

impl MstdRecord {
    /// `m,size,elements,|A+A|,|A−A|`; `m` is 0 for sets in ℤ.
    pub fn csv_line(&self) -> String {
        let m = match self.set.ambient() {
            Ambient::Integers => 0,
            Ambient::Cyclic(m) => m,
        };
        let elements: Vec<String> = self.set.elements().iter().map(|x| x.to_string()).collect();
        format!(
            "{},{},{},{},{}",
            m,
            self.set.len(),
            elements.join(";"),
            self.sums,
            self.diffs
        )
    }
}

pub const CSV_HEADER: &str = "m,size,elements,sums,diffs";

/// Lazily enumerates MSTD sets for a query.
#[derive(Debug, Clone)]
pub struct MstdSearch {
    query: MstdQuery,
    current: Vec<i64>,
    started: bool,
    done: bool,
}

/// Validates the query and returns the result stream.
pub fn mstd_search(query: MstdQuery) -> Result<MstdSearch> {
    if query.max_size == 0 || query.min_size > query.max_size {
        return Err(Error::InvalidArgument(format!(
            "size range {}..={} is empty",
            query.min_size, query.max_size
        )));
    }
    if let Ambient::Cyclic(m) = query.ambient {
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
    }
    let space = query.search_space();
    if space > SEARCH_LIMIT {
        return Err(Error::Budget(format!(
            "search space of {space} subsets exceeds the limit of {SEARCH_LIMIT}"
        )));
    }
    Ok(MstdSearch {
        current: vec![0],
        query,
        started: false,
        done: false,
    })
}

impl MstdSearch {
    pub fn query(&self) -> &MstdQuery {
        &self.query
    }

    /// Moves to the next candidate in lexicographic preorder.
    fn step(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        let hi = self.query.width as i64;
        let last = *self.current.last().expect("never empty between steps");
        if self.current.len() < self.query.max_size && last < hi {
            self.current.push(last + 1);
            return true;
        }
        loop {
            let Some(last) = self.current.pop() else {
                return false;
            };
            if self.current.is_empty() && self.query.zero_forced() {
                return false;
            }
            if last < hi {
                self.current.push(last + 1);
                return true;
            }
        }
    }

    fn evaluate(&self) -> Option<MstdRecord> {
        let set = &self.current;
        if set.len() < self.query.min_size {
            return None;
        }
        let (sums, diffs) = match self.query.ambient {
            Ambient::Integers => integer_counts(set, self.query.width),
            Ambient::Cyclic(m) => cyclic_counts(set, m),
        };
        if sums <= diffs {
            return None;
        }
        if self.query.canonical && !is_canonical(set, self.query.ambient) {
            return None;
        }
        let set = match self.query.ambient {
            Ambient::Integers => IntSet::integers(set.iter().copied()),
            Ambient::Cyclic(m) => IntSet::cyclic(m, set.iter().copied()).ok()?,
        };
        Some(MstdRecord { set, sums, diffs })
    }
}

impl Iterator for MstdSearch {
    type Item = MstdRecord;

    fn next(&mut self) -> Option<MstdRecord> {
        while !self.done {
            if !self.step() {
                self.done = true;
                break;
            }
            if let Some(rec) = self.evaluate() {
                return Some(rec);
            }
        }
        None
    }
}

fn integer_counts(set: &[i64], width: u64) -> (usize, usize) {
    if width <= 62 {
        let w = width as u32;
        let mask: u128 = set.iter().fold(0, |m, &x| m | (1u128 << x));
        let mut sums = 0u128;
        let mut diffs = 0u128;
        for &a in set {
            sums |= mask << a;
            diffs |= mask << (w - a as u32);
        }
        (sums.count_ones() as usize, diffs.count_ones() as usize)
    } else {
        let s = IntSet::integers(set.iter().copied());
        (
            s.sumset(&s).expect("same ambient").len(),
            s.difference_set(&s).expect("same ambient").len(),
        )
    }
}

fn cyclic_counts(set: &[i64], m: u64) -> (usize, usize) {
    if m <= 64 {
        let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mask: u64 = set.iter().fold(0, |acc, &x| acc | (1u64 << x));
        let rot = |by: u64| -> u64 {
            let by = by % m;
            if by == 0 {
                mask
            } else {
                ((mask << by) | (mask >> (m - by))) & full
            }
        };
        let mut sums = 0u64;
        let mut diffs = 0u64;
        for &a in set {
            sums |= rot(a as u64);
            diffs |= rot(m - a as u64);
        }
        (sums.count_ones() as usize, diffs.count_ones() as usize)
    } else {
        let s = IntSet::cyclic(m, set.iter().copied()).expect("positive modulus");
        (
            s.sumset(&s).expect("same ambient").len(),
            s.difference_set(&s).expect("same ambient").len(),
        )
    }
}

fn is_canonical(set: &[i64], ambient: Ambient) -> bool {
    canonical_form(set, ambient).as_slice() == set
}

/// The affine-class representative of a sorted set (see module docs).
pub fn canonical_form(set: &[i64], ambient: Ambient) -> Vec<i64> {
    if set.is_empty() {
        return Vec::new();
    }
    match ambient {
        Ambient::Integers => {
            let min = set[0];
            let g = set.iter().fold(0i64, |g, &x| g.gcd(&(x - min)));
            let g = g.max(1);
            let forward: Vec<i64> = set.iter().map(|&x| (x - min) / g).collect();
            let max = *forward.last().expect("non-empty");
            let mut reflected: Vec<i64> = forward.iter().map(|&x| max - x).collect();
            reflected.reverse();
            forward.min(reflected)
        }
        Ambient::Cyclic(m) => {
            let m = m as i64;
            let mut best: Option<Vec<i64>> = None;
            for a in (1..m.max(2)).filter(|a| a.gcd(&m) == 1) {
                for b in 0..m {
                    let mut image: Vec<i64> =
                        set.iter().map(|&x| (a * x + b).rem_euclid(m)).collect();
                    image.sort_unstable();
                    if best.as_ref().is_none_or(|cur| image < *cur) {
                        best = Some(image);
                    }
                }
            }
            best.unwrap_or_else(|| set.to_vec())
        }
    }
}
