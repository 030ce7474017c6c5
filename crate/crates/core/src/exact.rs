//! Exact entropy differences.
//!
//! For a law whose masses share a common denominator `D`, every mass of
//! `X ± Y` is `c/D²` for an integer `c`, and the normalizing terms cancel in
//! the difference:
//!
//! ```text
//! H(X+Y) − H(X−Y) = (1/D²) · log( Π_{d∈X−Y} c_d^{c_d} / Π_{s∈X+Y} c_s^{c_s} )
//! ```
//!
//! which is represented without rounding as an [`ExactLogRatio`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dist::{CyclicDistribution, IntegerDistribution, LogBase};
use crate::error::{Error, Result};
use crate::prob::{common_denominator, ln_biguint, self_power_product};

/// Largest common denominator `D²` accepted by the exact routines.
pub const MAX_EXACT_DENOMINATOR: u64 = 1 << 16;

/// The real number `scale · log(numerator / denominator)`, base-free up to
/// the choice of logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLogRatio {
    scale: BigRational,
    numerator: BigUint,
    denominator: BigUint,
}

impl ExactLogRatio {
    /// Reduces `numerator/denominator` to lowest terms.
    pub fn new(scale: BigRational, numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if numerator.is_zero() || denominator.is_zero() {
            return Err(Error::InvalidArgument(
                "log ratio needs positive numerator and denominator".into(),
            ));
        }
        let g = numerator.gcd(&denominator);
        Ok(Self {
            scale,
            numerator: numerator / &g,
            denominator: denominator / &g,
        })
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// True when the represented value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.numerator == self.denominator
    }

    pub fn value(&self, base: LogBase) -> f64 {
        let ln = ln_biguint(&self.numerator) - ln_biguint(&self.denominator);
        base.from_nats(self.scale.to_f64().unwrap_or(f64::NAN) * ln)
    }

    /// Exact equality of the represented real numbers.
    ///
    /// `s₁·log r₁ = s₂·log r₂` iff `r₁^(a₁b₂) = r₂^(a₂b₁)` with `sᵢ = aᵢ/bᵢ`.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let sign = |s: &BigRational| s.numer().sign();
        let up = |r: &Self| r.numerator > r.denominator;
        if (sign(&self.scale) == sign(&other.scale)) != (up(self) == up(other)) {
            return false;
        }
        let exp = |a: &BigInt, b: &BigInt| -> Option<u32> { (a * b).magnitude().to_u32() };
        let (Some(e1), Some(e2)) = (
            exp(self.scale.numer(), other.scale.denom()),
            exp(other.scale.numer(), self.scale.denom()),
        ) else {
            return false;
        };
        let g = e1.gcd(&e2);
        let (e1, e2) = (e1 / g, e2 / g);
        let (num2, den2) = if sign(&self.scale) == sign(&other.scale) {
            (&other.numerator, &other.denominator)
        } else {
            (&other.denominator, &other.numerator)
        };
        self.numerator.pow(e1) == num2.pow(e2) && self.denominator.pow(e1) == den2.pow(e2)
    }
}

impl fmt::Display for ExactLogRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * log({}/{})",
            self.scale, self.numerator, self.denominator
        )
    }
}

fn ratio_from_counts(
    den_squared: &BigUint,
    sum_counts: &[BigUint],
    diff_counts: &[BigUint],
) -> Result<ExactLogRatio> {
    let scale = BigRational::new(BigInt::one(), BigInt::from(den_squared.clone()));
    ExactLogRatio::new(
        scale,
        self_power_product(diff_counts),
        self_power_product(sum_counts),
    )
}

fn check_budget(den: &BigUint) -> Result<BigUint> {
    let d2 = den * den;
    if d2 > BigUint::from(MAX_EXACT_DENOMINATOR) {
        return Err(Error::Budget(format!(
            "common denominator squared {d2} exceeds {MAX_EXACT_DENOMINATOR}"
        )));
    }
    Ok(d2)
}

fn scaled_counts(probs: &[BigRational], den_squared: &BigUint) -> Vec<BigUint> {
    let scale = BigRational::from_integer(BigInt::from(den_squared.clone()));
    probs
        .iter()
        .map(|p| {
            let c = p * &scale;
            debug_assert!(c.is_integer());
            c.to_integer().to_biguint().expect("non-negative mass")
        })
        .collect()
}

/// Exact `H(X+Y) − H(X−Y)` for `X, Y` i.i.d. with a rational law on ℤ.
pub fn exact_entropy_diff_integer(p: &IntegerDistribution<BigRational>) -> Result<ExactLogRatio> {
    let (den, _) = common_denominator(p.probs());
    let d2 = check_budget(&den)?;
    let sum = p.convolve(p, false);
    let diff = p.convolve(p, true);
    ratio_from_counts(
        &d2,
        &scaled_counts(sum.probs(), &d2),
        &scaled_counts(diff.probs(), &d2),
    )
}

/// Exact `H(X+Y) − H(X−Y)` for `X, Y` i.i.d. with a rational law on ℤ/mℤ.
pub fn exact_entropy_diff_cyclic(p: &CyclicDistribution<BigRational>) -> Result<ExactLogRatio> {
    let (den, _) = common_denominator(p.probs());
    let d2 = check_budget(&den)?;
    let sum = p.weighted_convolve(p, 1)?;
    let diff = p.weighted_convolve(p, -1)?;
    ratio_from_counts(
        &d2,
        &scaled_counts(sum.probs(), &d2),
        &scaled_counts(diff.probs(), &d2),
    )
}
