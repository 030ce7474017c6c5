//! Choice of the coefficient `c` in the kernel `K = [[1, 0], [c, 1]]` over 𝔽_q.
//!
//! For i.i.d. `U₁, U₂ ~ μ` the kernel produces `X₁ = U₁ + λU₂` and `X₂ = U₂`.
//! Since `H(X₁) + H(X₂ | X₁) = 2H(μ)`, the spread `H(X₁) − H(μ)` equals
//! `H(μ) − H(X₂ | X₁)`; the best λ maximizes `H(U₁ + λU₂)`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::dist::{CyclicDistribution, LogBase};
use crate::error::{Error, Result};
use crate::field::require_prime;
use crate::prob::{entropy_nats, Probability};
use crate::sumsets::{Ambient, IntSet};

/// The 2×2 kernel `[[1, 0], [c, 1]]` over 𝔽_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Kernel {
    q: u32,
    c: u32,
}

impl Kernel {
    pub fn new(q: u32, c: u32) -> Result<Self> {
        require_prime(q as u64)?;
        if c == 0 || c >= q {
            return Err(Error::InvalidArgument(format!(
                "kernel coefficient {c} must lie in 1..{q}"
            )));
        }
        Ok(Self { q, c })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn matrix(&self) -> [[u32; 2]; 2] {
        [[1, 0], [self.c, 1]]
    }
}

/// One-step entropy bookkeeping for a coefficient λ, in base q.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadReport {
    pub lambda: u32,
    /// `H(U₁ + λU₂)`.
    pub sum_entropy: f64,
    /// `H(U₁ + λU₂) − H(μ)`.
    pub spread: f64,
    /// `H(U₂ | U₁ + λU₂)`.
    pub cond_entropy: f64,
}

fn field_order<P: Probability>(mu: &CyclicDistribution<P>) -> Result<u32> {
    let q = mu.modulus() as u64;
    require_prime(q)?;
    u32::try_from(q).map_err(|_| Error::InvalidArgument(format!("field order {q} too large")))
}

/// Joint law `P(X₁ = x, U₂ = u)` as a `q × q` row-major table.
fn joint_law<P: Probability>(mu: &CyclicDistribution<P>, lambda: u32) -> Vec<P> {
    let q = mu.modulus();
    let p = mu.probs();
    let mut joint = vec![P::zero(); q * q];
    for (u1, a) in p.iter().enumerate() {
        for (u2, b) in p.iter().enumerate() {
            let x = (u1 + lambda as usize * u2) % q;
            joint[x * q + u2] = a.mul(b);
        }
    }
    joint
}

/// Entropies of `X₁ = U₁ + λU₂` and of `U₂` given `X₁`.
pub fn conditional_spread<P: Probability>(
    mu: &CyclicDistribution<P>,
    lambda: u32,
) -> Result<SpreadReport> {
    let q = field_order(mu)?;
    let lambda = lambda % q;
    let base = LogBase::new(q as f64)?;
    let h_mu = mu.entropy(base);
    let joint = joint_law(mu, lambda);
    let q = q as usize;

    let mut marginal = Vec::with_capacity(q);
    let mut cond_nats = 0.0;
    for row in joint.chunks(q) {
        let px: f64 = P::sum(row).to_f64();
        marginal.push(px);
        if px > 0.0 {
            let conditional: Vec<f64> = row.iter().map(|p| p.to_f64() / px).collect();
            cond_nats += px * entropy_nats(&conditional);
        }
    }
    let sum_entropy = base.from_nats(entropy_nats(&marginal));
    Ok(SpreadReport {
        lambda,
        sum_entropy,
        spread: sum_entropy - h_mu,
        cond_entropy: base.from_nats(cond_nats),
    })
}

/// All λ ∈ {1, …, q−1} maximizing `H(U₁ + λU₂)`, ascending.
///
/// Float laws treat entropies within 1e-12 as tied; rational laws are
/// compared exactly.
pub fn optimal_coefficient<P: Probability>(mu: &CyclicDistribution<P>) -> Result<Vec<u32>> {
    let q = field_order(mu)?;
    let laws: Vec<(u32, Vec<P>)> = (1..q)
        .into_par_iter()
        .map(|lambda| {
            let law = mu
                .weighted_convolve(mu, lambda as i64)
                .expect("same modulus");
            (lambda, law.into_probs())
        })
        .collect();
    let mut best: Vec<u32> = Vec::new();
    let mut best_law: Option<&[P]> = None;
    for (lambda, law) in &laws {
        match best_law.map(|b| P::cmp_entropy(law, b)) {
            None | Some(Ordering::Greater) => {
                best = vec![*lambda];
                best_law = Some(law);
            }
            Some(Ordering::Equal) => best.push(*lambda),
            Some(Ordering::Less) => {}
        }
    }
    Ok(best)
}

/// True when `(u₁, u₂) ↦ u₁ + γu₂` is injective on `S × S`, i.e.
/// `|S + γS| = |S|²`. Then `U₂` is recoverable from `U₁ + γU₂`.
pub fn support_condition(support: &IntSet, gamma: u32) -> Result<bool> {
    let Ambient::Cyclic(q) = support.ambient() else {
        return Err(Error::InvalidArgument(
            "support must be a subset of a prime field".into(),
        ));
    };
    require_prime(q)?;
    if support.is_empty() {
        return Err(Error::InvalidArgument("support is empty".into()));
    }
    if gamma as u64 % q == 0 {
        return Err(Error::InvalidArgument("γ must be nonzero".into()));
    }
    let image = support.sumset(&support.dilate(gamma as i64))?;
    Ok(image.len() == support.len() * support.len())
}

/// Kernel with the smallest optimal coefficient.
pub fn two_optimal_kernel<P: Probability>(mu: &CyclicDistribution<P>) -> Result<Kernel> {
    let q = field_order(mu)?;
    let best = optimal_coefficient(mu)?;
    let c = best.first().copied().unwrap_or(1);
    Kernel::new(q, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn dist(p: &[f64]) -> CyclicDistribution {
        CyclicDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn ternary_optimum() {
        assert_eq!(optimal_coefficient(&dist(&[0.7, 0.3, 0.0])).unwrap(), vec![2]);
        assert_eq!(optimal_coefficient(&dist(&[0.5, 0.2, 0.3])).unwrap(), vec![2]);
        assert_eq!(optimal_coefficient(&dist(&[0.4, 0.3, 0.3])).unwrap(), vec![1, 2]);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let exact = CyclicDistribution::new(vec![r(1, 2), r(1, 4), r(1, 4)]).unwrap();
        assert_eq!(optimal_coefficient(&exact).unwrap(), vec![1, 2]);
        // a translate of a symmetric law ties even though μ(1) ≠ μ(2)
        let shifted = CyclicDistribution::new(vec![r(1, 2), r(1, 2), r(0, 1)]).unwrap();
        assert_eq!(optimal_coefficient(&shifted).unwrap(), vec![1, 2]);
    }

    #[test]
    fn quinary_examples() {
        assert_eq!(
            optimal_coefficient(&dist(&[0.8, 0.1, 0.1, 0.0, 0.0])).unwrap(),
            vec![4]
        );
        assert_eq!(
            optimal_coefficient(&dist(&[0.7, 0.2, 0.1, 0.0, 0.0])).unwrap(),
            vec![2, 3]
        );
    }

    #[test]
    fn spread_fixed_points() {
        let u = CyclicDistribution::<f64>::uniform(5).unwrap();
        for l in 1..5 {
            let r = conditional_spread(&u, l).unwrap();
            assert!(r.spread.abs() < 1e-12);
            assert!((r.cond_entropy - 1.0).abs() < 1e-12);
        }
        let d = CyclicDistribution::<f64>::point_mass(7, 3).unwrap();
        let r = conditional_spread(&d, 2).unwrap();
        assert_eq!((r.spread, r.cond_entropy), (0.0, 0.0));
    }

    #[test]
    fn support_condition_examples() {
        let s = IntSet::cyclic(5, [0, 1]).unwrap();
        assert!(support_condition(&s, 2).unwrap());
        let s = IntSet::cyclic(11, [0, 1, 2]).unwrap();
        assert!(!support_condition(&s, 2).unwrap());
        assert!(support_condition(&s, 3).unwrap());
        for q in [5u64, 7, 11, 13, 17, 101] {
            let k = ((q - 1) as f64).sqrt().floor() as i64;
            let s = IntSet::cyclic(q, 0..k).unwrap();
            assert!(support_condition(&s, k as u32).unwrap(), "q = {q}");
        }
        let exact = conditional_spread(&dist(&[0.5, 0.5, 0.0, 0.0, 0.0]), 2).unwrap();
        assert_eq!(exact.cond_entropy, 0.0);
        assert!(support_condition(&IntSet::cyclic(12, [0, 1]).unwrap(), 5).is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(two_optimal_kernel(&dist(&[0.7, 0.3, 0.0])).unwrap().c(), 2);
        assert_eq!(
            two_optimal_kernel(&dist(&[0.5, 0.5, 0.0, 0.0, 0.0])).unwrap().c(),
            2
        );
        assert_eq!(two_optimal_kernel(&dist(&[0.9, 0.1])).unwrap().c(), 1);
        assert!(optimal_coefficient(&dist(&[0.25; 4])).is_err());
        assert!(Kernel::new(5, 0).is_err());
        assert_eq!(Kernel::new(5, 3).unwrap().matrix(), [[1, 0], [3, 1]]);
    }

    #[test]
    fn rational_joint_is_a_permutation_of_the_product_law() {
        // Balance holds exactly: the map (u₁, u₂) ↦ (u₁ + λu₂, u₂) only
        // relabels the masses of μ ⊗ μ.
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let mu = CyclicDistribution::new(vec![r(1, 2), r(1, 3), r(1, 12), r(1, 12), r(0, 1)]).unwrap();
        let mut product: Vec<BigRational> = mu
            .probs()
            .iter()
            .flat_map(|a| mu.probs().iter().map(move |b| a * b))
            .collect();
        product.sort();
        for lambda in 1..5 {
            let mut joint = joint_law(&mu, lambda);
            joint.sort();
            assert_eq!(joint, product);
        }
    }
}
