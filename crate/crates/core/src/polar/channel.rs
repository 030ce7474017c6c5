//! Finite channels, additive-noise channels over 𝔽_q and the exact one-step
//! polar transform.

use std::collections::HashMap;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::dist::{CyclicDistribution, LogBase};
use crate::error::{Error, Result};
use crate::field::require_prime;
use crate::prob::neumaier_sum;

/// Tolerance on row sums of a transition matrix.
pub const ROW_TOLERANCE: f64 = 1e-12;

/// A stochastic matrix `W(y|x)`, stored row-major by input.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteChannel {
    input_size: usize,
    output_size: usize,
    transitions: Vec<f64>,
}

impl FiniteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        let output_size = rows.first().map_or(0, Vec::len);
        if input_size == 0 || output_size == 0 {
            return Err(Error::InvalidArgument("channel needs inputs and outputs".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::InvalidArgument(format!(
                    "row {x} has {} entries, expected {output_size}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidDistribution(format!("row {x} has a bad entry")));
            }
            let total = neumaier_sum(row.iter().copied());
            if (total - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "row {x} sums to {total}"
                )));
            }
        }
        Ok(Self {
            input_size,
            output_size,
            transitions: rows.concat(),
        })
    }

    /// Binary erasure channel; outputs are 0, 1 and erasure (2).
    pub fn bec(eps: f64) -> Result<Self> {
        check_unit(eps)?;
        Self::new(vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]])
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        check_unit(p)?;
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Noiseless channel on `q` symbols.
    pub fn identity(q: usize) -> Result<Self> {
        Self::new(
            (0..q)
                .map(|x| (0..q).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.transitions[x * self.output_size + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.transitions[x * self.output_size..(x + 1) * self.output_size]
    }

    /// `I(X; Y)` for uniform `X`, in base `input_size` (0 for a single input).
    pub fn mutual_information(&self) -> f64 {
        if self.input_size < 2 {
            return 0.0;
        }
        let q = self.input_size as f64;
        let terms = (0..self.output_size).flat_map(|y| {
            let py: f64 = (0..self.input_size).map(|x| self.prob(y, x)).sum::<f64>() / q;
            (0..self.input_size).filter_map(move |x| {
                let w = self.prob(y, x);
                (w > 0.0).then(|| w / q * (w / py).ln())
            })
        });
        let nats = neumaier_sum(terms);
        LogBase::new(q).expect("q ≥ 2").from_nats(nats).clamp(0.0, 1.0)
    }

    /// The synthetic channels `W⁻: u₁ ↦ (y₁, y₂)` and
    /// `W⁺: u₂ ↦ (y₁, y₂, u₁)` for `(x₁, x₂) = (u₁ + c·u₂, u₂)`.
    ///
    /// Output `(y₁, y₂)` of `W⁻` has index `y₁·|Y| + y₂`; output
    /// `(y₁, y₂, u₁)` of `W⁺` has index `(y₁·|Y| + y₂)·q + u₁`.
    pub fn one_step_transform(&self, c: u32) -> Result<(FiniteChannel, FiniteChannel)> {
        let q = self.input_size;
        require_prime(q as u64)?;
        let c = c as usize % q;
        if c == 0 {
            return Err(Error::InvalidArgument("kernel coefficient must be nonzero".into()));
        }
        let ny = self.output_size;
        let inv_q = 1.0 / q as f64;
        let mut minus = vec![0.0; q * ny * ny];
        let mut plus = vec![0.0; q * ny * ny * q];
        for u1 in 0..q {
            for u2 in 0..q {
                let x1 = (u1 + c * u2) % q;
                for y1 in 0..ny {
                    let w1 = self.prob(y1, x1);
                    if w1 == 0.0 {
                        continue;
                    }
                    for y2 in 0..ny {
                        let p = inv_q * w1 * self.prob(y2, u2);
                        let pair = y1 * ny + y2;
                        minus[u1 * ny * ny + pair] += p;
                        plus[u2 * ny * ny * q + pair * q + u1] = p;
                    }
                }
            }
        }
        Ok((
            FiniteChannel {
                input_size: q,
                output_size: ny * ny,
                transitions: minus,
            },
            FiniteChannel {
                input_size: q,
                output_size: ny * ny * q,
                transitions: plus,
            },
        ))
    }

    /// Equivalent channel with all-zero outputs dropped and outputs with
    /// proportional likelihood columns merged. Mutual information is unchanged.
    pub fn merge_outputs(&self) -> FiniteChannel {
        const GRID: f64 = 1e9;
        let mut groups: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for y in 0..self.output_size {
            let col: Vec<f64> = (0..self.input_size).map(|x| self.prob(y, x)).collect();
            let total: f64 = col.iter().sum();
            if total == 0.0 {
                continue;
            }
            let key: Vec<i64> = col.iter().map(|p| (p / total * GRID).round() as i64).collect();
            match groups.get(&key) {
                Some(&g) => {
                    for (acc, p) in columns[g].iter_mut().zip(&col) {
                        *acc += p;
                    }
                }
                None => {
                    groups.insert(key, columns.len());
                    columns.push(col);
                }
            }
        }
        let output_size = columns.len();
        let mut transitions = vec![0.0; self.input_size * output_size];
        for (y, col) in columns.iter().enumerate() {
            for (x, p) in col.iter().enumerate() {
                transitions[x * output_size + y] = *p;
            }
        }
        FiniteChannel {
            input_size: self.input_size,
            output_size,
            transitions,
        }
    }
}

fn check_unit(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("parameter {p} outside [0, 1]")))
    }
}

/// `I(W)` in base `|X|` for uniform input.
pub fn mutual_information(w: &FiniteChannel) -> f64 {
    w.mutual_information()
}

/// `(W⁻, W⁺)` for the kernel `[[1, 0], [c, 1]]`.
pub fn one_step_transform(w: &FiniteChannel, c: u32) -> Result<(FiniteChannel, FiniteChannel)> {
    w.one_step_transform(c)
}

/// `Y = X + Z` over 𝔽_q with `Z ~ noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveChannel {
    q: u32,
    noise: CyclicDistribution<f64>,
    cumulative: Vec<f64>,
}

impl AdditiveChannel {
    pub fn new(noise: CyclicDistribution<f64>) -> Result<Self> {
        let q = noise.modulus() as u64;
        require_prime(q)?;
        let mut acc = 0.0;
        let cumulative = noise
            .probs()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            q: q as u32,
            noise,
            cumulative,
        })
    }

    /// Noiseless channel on 𝔽_q.
    pub fn noiseless(q: u32) -> Result<Self> {
        Self::new(CyclicDistribution::point_mass(q as usize, 0)?)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn noise(&self) -> &CyclicDistribution<f64> {
        &self.noise
    }

    /// `W(y | x) = μ(y − x)`.
    pub fn likelihood(&self, y: u32, x: u32) -> f64 {
        self.noise.probs()[((y + self.q - x) % self.q) as usize]
    }

    /// Draws one noise symbol.
    pub fn sample_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let r: f64 = rng.random();
        let last_positive = self
            .noise
            .probs()
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("valid distribution");
        self.cumulative
            .iter()
            .position(|&c| r < c)
            .unwrap_or(last_positive)
            .min(last_positive) as u32
    }

    /// The channel as an explicit transition matrix.
    pub fn to_finite(&self) -> FiniteChannel {
        let q = self.q;
        FiniteChannel::new(
            (0..q)
                .map(|x| (0..q).map(|y| self.likelihood(y, x)).collect())
                .collect(),
        )
        .expect("noise is a valid distribution")
    }

    /// `1 − H(μ)` in base q.
    pub fn capacity(&self) -> f64 {
        1.0 - self
            .noise
            .entropy(LogBase::new(self.q as f64).expect("q ≥ 2"))
    }

    /// Short hex SHA-256 of `q` and the exact bit patterns of the noise masses.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.q.to_le_bytes());
        for p in self.noise.probs() {
            h.update(p.to_bits().to_le_bytes());
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn mutual_information_basics() {
        assert!((FiniteChannel::identity(3).unwrap().mutual_information() - 1.0).abs() < 1e-15);
        let useless = FiniteChannel::new(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        assert_eq!(useless.mutual_information(), 0.0);
        for eps in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let i = FiniteChannel::bec(eps).unwrap().mutual_information();
            assert!((i - (1.0 - eps)).abs() < 1e-15, "{eps}");
        }
    }

    #[test]
    fn rows_are_validated() {
        assert!(FiniteChannel::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(FiniteChannel::new(vec![vec![0.5, 0.5], vec![1.0]]).is_err());
        assert!(FiniteChannel::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(FiniteChannel::bec(1.5).is_err());
    }

    #[test]
    fn erasure_transform_closed_form() {
        for eps in [0.1, 0.3, 0.5, 0.8] {
            let (m, p) = FiniteChannel::bec(eps).unwrap().one_step_transform(1).unwrap();
            let (m, p) = (m.merge_outputs(), p.merge_outputs());
            assert!((m.mutual_information() - (1.0 - (2.0 * eps - eps * eps))).abs() < 1e-12);
            assert!((p.mutual_information() - (1.0 - eps * eps)).abs() < 1e-12);
            assert_eq!(m.output_size(), 3);
            assert_eq!(p.output_size(), 3);
        }
    }

    #[test]
    fn transform_conserves_information() {
        let w = FiniteChannel::new(vec![
            vec![0.5, 0.2, 0.3],
            vec![0.1, 0.6, 0.3],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        for c in 1..3 {
            let (m, p) = w.one_step_transform(c).unwrap();
            let i = w.mutual_information();
            assert!((m.mutual_information() + p.mutual_information() - 2.0 * i).abs() < 1e-12);
            assert!(p.mutual_information() >= i && i >= m.mutual_information());
            let merged = p.merge_outputs();
            assert!((merged.mutual_information() - p.mutual_information()).abs() < 1e-12);
        }
        assert!(w.one_step_transform(0).is_err());
    }

    #[test]
    fn noise_sampling_follows_the_law() {
        let ch = AdditiveChannel::new(CyclicDistribution::new(vec![0.7, 0.3, 0.0]).unwrap()).unwrap();
        let mut rng = trial_rng(1, 0);
        let draws: Vec<u32> = (0..20_000).map(|_| ch.sample_noise(&mut rng)).collect();
        assert!(!draws.contains(&2));
        let ones = draws.iter().filter(|&&z| z == 1).count() as f64 / 20_000.0;
        assert!((ones - 0.3).abs() < 0.015);
        assert!((ch.capacity() - (1.0 - 0.5562)).abs() < 1e-3);
    }

    #[test]
    fn digests_track_the_noise() {
        let a = AdditiveChannel::new(CyclicDistribution::new(vec![0.7, 0.3, 0.0]).unwrap()).unwrap();
        let b = AdditiveChannel::new(CyclicDistribution::new(vec![0.7, 0.0, 0.3]).unwrap()).unwrap();
        assert_eq!(a.digest(), a.clone().digest());
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 16);
        assert_eq!(a.to_finite().prob(1, 0), 0.3);
    }
}
