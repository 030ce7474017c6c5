//! Stein's iteration `A_j = A_{j−1} + m_j·A_{j−1}`.

use std::collections::HashSet;

use super::{Ambient, IntSet};
use crate::error::{Error, Result};

/// Default cap on `|A_k|`.
pub const DEFAULT_STEIN_BUDGET: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinLevel {
    pub set: IntSet,
    pub multiplier: i64,
    /// `|A_j + A_j|`.
    pub sums: usize,
    /// `|A_j − A_j|`.
    pub diffs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinTrace {
    pub base: IntSet,
    pub levels: Vec<SteinLevel>,
}

impl SteinTrace {
    /// The last set of the iteration (the base when there are no levels).
    pub fn last(&self) -> &IntSet {
        self.levels.last().map_or(&self.base, |l| &l.set)
    }
}

/// True when `(x, y) ↦ x + m·y` is injective on `X × X`.
fn dilated_sum_injective(x: &[i64], m: i64) -> bool {
    let mut seen = HashSet::with_capacity(x.len() * x.len());
    x.iter()
        .all(|&a| x.iter().all(|&b| seen.insert(a + m * b)))
}

/// Smallest `m ≥ 1` with `|X + mX| = |X|²` for `X ∈ {A, A+A, A−A}`.
fn smallest_multiplier(a: &IntSet, sums: &IntSet, diffs: &IntSet) -> i64 {
    // m = 2·diam(A) + 1 separates every coordinate, so the loop terminates.
    (1..)
        .find(|&m| {
            dilated_sum_injective(a.elements(), m)
                && dilated_sum_injective(diffs.elements(), m)
                && dilated_sum_injective(sums.elements(), m)
        })
        .expect("unbounded range")
}

/// Runs `k` levels of the iteration with the smallest admissible multiplier
/// at each level, refusing when `|A|^(2^k)` exceeds `budget`.
pub fn stein_iterate(a: &IntSet, k: u32, budget: u64) -> Result<SteinTrace> {
    if a.ambient() != Ambient::Integers {
        return Err(Error::InvalidArgument(
            "Stein iteration needs a set of integers".into(),
        ));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("set is empty".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one level".into()));
    }
    let final_size = (a.len() as f64).powf(2f64.powi(k.min(64) as i32));
    if final_size > budget as f64 {
        return Err(Error::Budget(format!(
            "|A_{k}| = {}^(2^{k}) exceeds the budget of {budget} elements",
            a.len()
        )));
    }
    let mut levels: Vec<SteinLevel> = Vec::with_capacity(k as usize);
    let mut current = a.clone();
    let mut sums = current.sumset(&current)?;
    let mut diffs = current.difference_set(&current)?;
    for _ in 0..k {
        let m = smallest_multiplier(&current, &sums, &diffs);
        let next = current.sumset(&current.dilate(m))?;
        let next_sums = next.sumset(&next)?;
        let next_diffs = next.difference_set(&next)?;
        debug_assert_eq!(next.len(), current.len() * current.len());
        debug_assert_eq!(next_sums.len(), sums.len() * sums.len());
        debug_assert_eq!(next_diffs.len(), diffs.len() * diffs.len());
        levels.push(SteinLevel {
            set: next.clone(),
            multiplier: m,
            sums: next_sums.len(),
            diffs: next_diffs.len(),
        });
        current = next;
        sums = next_sums;
        diffs = next_diffs;
    }
    Ok(SteinTrace {
        base: a.clone(),
        levels,
    })
}
