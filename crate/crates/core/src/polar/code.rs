//! Polar codes with kernel `[[1, 0], [c, 1]]` and the butterfly encoder.
//!
//! The codeword is `x = u · K^{⊗ℓ}` in natural order: for `u = (a, b)` split
//! in halves, `x = (s + c·t, t)` with `s`, `t` the encodings of `a` and `b`.
//! No bit-reversal permutation is applied, so index `i` of `u` is the same
//! index used by the decoder and by reliability profiles.

use crate::error::{Error, Result};
use crate::field::require_prime;

/// In-place `v ← v · K^{⊗ℓ}` over 𝔽_q; `coef` is `c` (or `q − c` for the
/// inverse).
pub fn butterfly(v: &mut [u32], q: u32, coef: u32) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let (q, coef) = (q as u64, coef as u64);
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (top, bottom) = block.split_at_mut(h);
            for (a, &b) in top.iter_mut().zip(bottom.iter()) {
                *a = ((*a as u64 + coef * b as u64) % q) as u32;
            }
        }
        h *= 2;
    }
}

/// A polar code of length `n` over 𝔽_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    q: u32,
    n: usize,
    c: u32,
    frozen: Vec<usize>,
    frozen_values: Vec<u32>,
    frozen_mask: Vec<bool>,
}

impl PolarCode {
    /// Frozen indices may be given in any order; frozen values are zero.
    pub fn new(q: u32, n: usize, c: u32, frozen: impl IntoIterator<Item = usize>) -> Result<Self> {
        require_prime(q as u64)?;
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("block length {n} is not a power of two")));
        }
        if c == 0 || c >= q {
            return Err(Error::InvalidArgument(format!(
                "kernel coefficient {c} must lie in 1..{q}"
            )));
        }
        let mut frozen: Vec<usize> = frozen.into_iter().collect();
        frozen.sort_unstable();
        frozen.dedup();
        if let Some(&bad) = frozen.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!("frozen index {bad} ≥ n = {n}")));
        }
        let mut frozen_mask = vec![false; n];
        for &i in &frozen {
            frozen_mask[i] = true;
        }
        Ok(Self {
            q,
            n,
            c,
            frozen_values: vec![0; frozen.len()],
            frozen,
            frozen_mask,
        })
    }

    /// Replaces the frozen values (one per frozen index, in index order).
    pub fn with_frozen_values(mut self, values: Vec<u32>) -> Result<Self> {
        if values.len() != self.frozen.len() || values.iter().any(|&v| v >= self.q) {
            return Err(Error::InvalidArgument(
                "need one field element per frozen index".into(),
            ));
        }
        self.frozen_values = values;
        Ok(self)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn frozen_values(&self) -> &[u32] {
        &self.frozen_values
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    pub fn dimension(&self) -> usize {
        self.n - self.frozen.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n as f64
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.frozen_mask[i]).collect()
    }

    /// Frozen value per index (zero at information positions).
    pub fn frozen_value_map(&self) -> Vec<u32> {
        let mut out = vec![0; self.n];
        for (&i, &v) in self.frozen.iter().zip(&self.frozen_values) {
            out[i] = v;
        }
        out
    }

    fn check_word(&self, u: &[u32]) -> Result<()> {
        if u.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "word has length {}, expected {}",
                u.len(),
                self.n
            )));
        }
        if let Some(pos) = u.iter().position(|&s| s >= self.q) {
            return Err(Error::InvalidArgument(format!(
                "symbol {} at position {pos} is outside 𝔽_{}",
                u[pos], self.q
            )));
        }
        Ok(())
    }

    /// `x = u · K^{⊗ℓ}`.
    pub fn encode(&self, u: &[u32]) -> Result<Vec<u32>> {
        self.check_word(u)?;
        let mut x = u.to_vec();
        butterfly(&mut x, self.q, self.c);
        Ok(x)
    }

    /// `u = x · (K^{-1})^{⊗ℓ}` with `K^{-1} = [[1, 0], [−c, 1]]`.
    pub fn inverse(&self, x: &[u32]) -> Result<Vec<u32>> {
        self.check_word(x)?;
        let mut u = x.to_vec();
        butterfly(&mut u, self.q, self.q - self.c);
        Ok(u)
    }
}
