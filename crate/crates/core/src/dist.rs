//! Distributions on ℤ/mℤ and on ℤ: entropy, convolution, weighted sums and
//! the discrete Fourier transform.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::prob::{entropy_nats, neumaier_sum, Probability};

/// Logarithm base for entropies. Construct with [`LogBase::new`] or use
/// [`LogBase::NATURAL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBase(Option<f64>);

impl LogBase {
    pub const NATURAL: LogBase = LogBase(None);
    pub const BITS: LogBase = LogBase(Some(2.0));

    pub fn new(base: f64) -> Result<Self> {
        if base.is_finite() && base > 1.0 {
            Ok(LogBase(Some(base)))
        } else {
            Err(Error::InvalidBase(base))
        }
    }

    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self.0 {
            None => nats,
            Some(b) => nats / b.ln(),
        }
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::NATURAL
    }
}

fn validate<P: Probability>(probs: &[P]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("no masses".into()));
    }
    if let Some(i) = probs.iter().position(|p| p.is_negative()) {
        return Err(Error::InvalidDistribution(format!(
            "mass {i} is negative: {:?}",
            probs[i]
        )));
    }
    let total = P::sum(probs);
    if !P::is_unit_total(&total) {
        return Err(Error::InvalidDistribution(format!(
            "masses sum to {}, not 1",
            total.to_f64()
        )));
    }
    Ok(())
}

/// A probability distribution on ℤ/mℤ; `probs[k]` is the mass of residue `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicDistribution<P = f64> {
    probs: Vec<P>,
}

impl<P: Probability> CyclicDistribution<P> {
    /// The modulus is the length of `probs`.
    pub fn new(probs: Vec<P>) -> Result<Self> {
        validate(&probs)?;
        Ok(Self { probs })
    }

    pub fn uniform(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(Self {
            probs: vec![P::from_ratio(1, modulus as u64); modulus],
        })
    }

    pub fn point_mass(modulus: usize, at: usize) -> Result<Self> {
        if at >= modulus {
            return Err(Error::InvalidArgument(format!(
                "point {at} outside ℤ/{modulus}ℤ"
            )));
        }
        let mut probs = vec![P::zero(); modulus];
        probs[at] = P::one();
        Ok(Self { probs })
    }

    /// Uniform distribution on the given residues (reduced mod `modulus`,
    /// duplicates collapsed).
    pub fn uniform_on(modulus: usize, residues: &[i64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut hit = vec![false; modulus];
        for &r in residues {
            hit[r.rem_euclid(modulus as i64) as usize] = true;
        }
        let count = hit.iter().filter(|&&h| h).count();
        if count == 0 {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mass = P::from_ratio(1, count as u64);
        let probs = hit
            .into_iter()
            .map(|h| if h { mass.clone() } else { P::zero() })
            .collect();
        Ok(Self { probs })
    }

    pub fn modulus(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[P] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<P> {
        self.probs
    }

    /// Residues with positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.modulus())
            .filter(|&k| !self.probs[k].is_zero())
            .collect()
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        base.from_nats(entropy_nats(&self.probs))
    }

    /// Law of `X + λ·Y` for independent `X ~ self`, `Y ~ other`.
    pub fn weighted_convolve(&self, other: &Self, lambda: i64) -> Result<Self> {
        let m = self.modulus();
        if other.modulus() != m {
            return Err(Error::ModulusMismatch {
                left: m,
                right: other.modulus(),
            });
        }
        let lambda = lambda.rem_euclid(m as i64) as usize;
        let mut out = vec![P::zero(); m];
        for (i, pi) in self.probs.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in other.probs.iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                let k = (i + lambda * j) % m;
                out[k] = out[k].add(&pi.mul(qj));
            }
        }
        Ok(Self { probs: out })
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.weighted_convolve(other, 1)
    }

    /// Law of `−X`.
    pub fn negate(&self) -> Self {
        let m = self.modulus();
        Self {
            probs: (0..m).map(|k| self.probs[(m - k) % m].clone()).collect(),
        }
    }

    /// Law of `a·X` (a permutation of the masses when `a` is a unit mod m).
    pub fn dilate(&self, a: i64) -> Self {
        let m = self.modulus();
        let a = a.rem_euclid(m as i64) as usize;
        let mut probs = vec![P::zero(); m];
        for (k, p) in self.probs.iter().enumerate() {
            let j = (a * k) % m;
            probs[j] = probs[j].add(p);
        }
        Self { probs }
    }

    /// `H(X+Y) − H(X−Y)` for `X, Y` i.i.d. with this law.
    pub fn sum_minus_diff_entropy(&self, base: LogBase) -> f64 {
        let sum = self.weighted_convolve(self, 1).expect("same modulus");
        let diff = self.weighted_convolve(self, -1).expect("same modulus");
        sum.entropy(base) - diff.entropy(base)
    }

    /// Float copy of this distribution.
    pub fn to_f64(&self) -> CyclicDistribution<f64> {
        CyclicDistribution {
            probs: self.probs.iter().map(|p| p.to_f64()).collect(),
        }
    }
}

impl CyclicDistribution<f64> {
    /// Fourier coefficients `p̂_j = Σ_k p_k e^{−2πijk/m}`.
    pub fn dft(&self) -> Vec<Complex64> {
        let m = self.modulus();
        (0..m)
            .map(|j| {
                self.probs
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| {
                        let angle = -2.0 * PI * ((j * k) % m) as f64 / m as f64;
                        Complex64::from_polar(p, angle)
                    })
                    .sum()
            })
            .collect()
    }

    /// Euclidean norm of the mass vector.
    pub fn l2_norm(&self) -> f64 {
        neumaier_sum(self.probs.iter().map(|p| p * p)).sqrt()
    }

    /// `‖p − U‖₂` where `U` is uniform on ℤ/mℤ.
    pub fn distance_to_uniform(&self) -> f64 {
        let u = 1.0 / self.modulus() as f64;
        neumaier_sum(self.probs.iter().map(|p| (p - u) * (p - u))).sqrt()
    }
}

/// A finitely supported distribution on ℤ.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerDistribution<P = f64> {
    support: Vec<i64>,
    probs: Vec<P>,
}

impl<P: Probability> IntegerDistribution<P> {
    /// `support` must be strictly increasing and parallel to `probs`.
    /// Zero masses are kept as given.
    pub fn new(support: Vec<i64>, probs: Vec<P>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support points but {} masses",
                support.len(),
                probs.len()
            )));
        }
        if let Some(w) = support.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution(format!(
                "support not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        validate(&probs)?;
        Ok(Self { support, probs })
    }

    /// Builds from unordered `(point, mass)` pairs, merging repeated points and
    /// dropping zero masses.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, P)>) -> Result<Self> {
        let mut acc: BTreeMap<i64, P> = BTreeMap::new();
        for (x, p) in pairs {
            acc.entry(x)
                .and_modify(|q| *q = q.add(&p))
                .or_insert(p);
        }
        let (support, probs): (Vec<_>, Vec<_>) =
            acc.into_iter().filter(|(_, p)| !p.is_zero()).unzip();
        Self::new(support, probs)
    }

    pub fn point_mass(at: i64) -> Self {
        Self {
            support: vec![at],
            probs: vec![P::one()],
        }
    }

    /// Uniform on the distinct values of `points`.
    pub fn uniform_on(points: &[i64]) -> Result<Self> {
        let mut support = points.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mass = P::from_ratio(1, support.len() as u64);
        let probs = vec![mass; support.len()];
        Ok(Self { support, probs })
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn probs(&self) -> &[P] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &P)> + '_ {
        self.support.iter().copied().zip(self.probs.iter())
    }

    /// `max(support) − min(support)`.
    pub fn diameter(&self) -> i64 {
        match (self.support.first(), self.support.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        base.from_nats(entropy_nats(&self.probs))
    }

    /// Law of `X + sign·Y`; `negate_other` selects the minus sign.
    pub fn convolve(&self, other: &Self, negate_other: bool) -> Self {
        let sign = if negate_other { -1 } else { 1 };
        let mut acc: BTreeMap<i64, P> = BTreeMap::new();
        for (x, p) in self.iter() {
            if p.is_zero() {
                continue;
            }
            for (y, q) in other.iter() {
                if q.is_zero() {
                    continue;
                }
                let mass = p.mul(q);
                acc.entry(x + sign * y)
                    .and_modify(|m| *m = m.add(&mass))
                    .or_insert(mass);
            }
        }
        let (support, probs) = acc.into_iter().unzip();
        Self { support, probs }
    }

    pub fn sum_minus_diff_entropy(&self, base: LogBase) -> f64 {
        let sum = self.convolve(self, false);
        let diff = self.convolve(self, true);
        sum.entropy(base) - diff.entropy(base)
    }

    /// Convex combination `(1 − t)·self + t·other` over the union of supports.
    pub fn mix(&self, other: &Self, t: &P) -> Self
    where
        P: std::ops::Sub<Output = P>,
    {
        let one_minus = P::one() - t.clone();
        let pairs = self
            .iter()
            .map(|(x, p)| (x, p.mul(&one_minus)))
            .chain(other.iter().map(|(x, p)| (x, p.mul(t))));
        let mut acc: BTreeMap<i64, P> = BTreeMap::new();
        for (x, p) in pairs {
            acc.entry(x).and_modify(|q| *q = q.add(&p)).or_insert(p);
        }
        let (support, probs) = acc.into_iter().filter(|(_, p)| !p.is_zero()).unzip();
        Self { support, probs }
    }

    /// Law of `X + shift`.
    pub fn translate(&self, shift: i64) -> Self {
        Self {
            support: self.support.iter().map(|x| x + shift).collect(),
            probs: self.probs.clone(),
        }
    }

    pub fn to_f64(&self) -> IntegerDistribution<f64> {
        IntegerDistribution {
            support: self.support.clone(),
            probs: self.probs.iter().map(|p| p.to_f64()).collect(),
        }
    }
}
