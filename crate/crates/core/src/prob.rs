//! Probability masses: plain `f64` or exact `BigRational`.
//!
//! Distributions are generic over [`Probability`]; the choice of type is the
//! exactness flag. Float masses are validated to a normalization tolerance,
//! rational masses must sum to exactly one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tolerance on `|Σp − 1|` for float distributions.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Two float entropies closer than this are treated as tied.
pub const ENTROPY_TIE_TOLERANCE: f64 = 1e-12;

/// Largest common denominator for which rational entropies are compared by
/// exact big-integer products. Beyond it the comparison falls back to floats.
const EXACT_COMPARE_MAX_DENOMINATOR: u64 = 1 << 20;

pub trait Probability: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: u64, den: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;

    /// Whether `total` (the sum of a distribution's masses) counts as one.
    fn is_unit_total(total: &Self) -> bool;

    /// Orders two probability vectors by Shannon entropy.
    ///
    /// Float vectors within [`ENTROPY_TIE_TOLERANCE`] compare `Equal`;
    /// rational vectors compare exactly.
    fn cmp_entropy(a: &[Self], b: &[Self]) -> Ordering;

    /// Sum of a slice (compensated for floats).
    fn sum(values: &[Self]) -> Self {
        values.iter().fold(Self::zero(), |acc, v| acc.add(v))
    }
}

impl Probability for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0 || self.is_nan()
    }

    fn is_unit_total(total: &Self) -> bool {
        (total - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    fn cmp_entropy(a: &[Self], b: &[Self]) -> Ordering {
        let ha = entropy_nats(a);
        let hb = entropy_nats(b);
        if (ha - hb).abs() <= ENTROPY_TIE_TOLERANCE {
            Ordering::Equal
        } else {
            ha.partial_cmp(&hb).unwrap_or(Ordering::Equal)
        }
    }

    fn sum(values: &[Self]) -> Self {
        neumaier_sum(values.iter().copied())
    }
}

impl Probability for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_unit_total(total: &Self) -> bool {
        One::is_one(total)
    }

    fn cmp_entropy(a: &[Self], b: &[Self]) -> Ordering {
        cmp_entropy_exact(a, b)
    }
}

/// Neumaier's compensated summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `−Σ p ln p` with the `0·ln 0 = 0` convention.
pub fn entropy_nats(probs: &[impl Probability]) -> f64 {
    neumaier_sum(probs.iter().map(|p| {
        let p = p.to_f64();
        if p > 0.0 {
            -p * p.ln()
        } else {
            0.0
        }
    }))
}

/// Natural log of a big unsigned integer, without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Scales rational masses to integers over their least common denominator.
///
/// Returns `(D, counts)` with `p_k = counts_k / D`.
pub fn common_denominator(probs: &[BigRational]) -> (BigUint, Vec<BigUint>) {
    let den = probs
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let counts = probs
        .iter()
        .map(|p| {
            let scaled = p * BigRational::from_integer(den.clone());
            scaled
                .to_integer()
                .to_biguint()
                .expect("probability masses are non-negative")
        })
        .collect();
    (den.to_biguint().expect("denominators are positive"), counts)
}

/// `Π a^a` over the given integer counts (zero counts contribute 1).
pub fn self_power_product(counts: &[BigUint]) -> BigUint {
    counts.iter().fold(BigUint::one(), |acc, a| {
        match a.to_u32() {
            Some(0) | Some(1) => acc,
            Some(e) => acc * a.pow(e),
            None => panic!("count {a} too large for an exact power product"),
        }
    })
}

fn cmp_entropy_exact(a: &[BigRational], b: &[BigRational]) -> Ordering {
    // Over a shared denominator D, H = ln D − (1/D)·ln Π c^c, so a larger
    // entropy is a smaller power product.
    let all: Vec<BigRational> = a.iter().chain(b.iter()).cloned().collect();
    let (den, _) = common_denominator(&all);
    let scale = BigRational::from_integer(BigInt::from(den.clone()));
    let counts = |v: &[BigRational]| -> Vec<BigUint> {
        v.iter()
            .map(|p| {
                (p * &scale)
                    .to_integer()
                    .to_biguint()
                    .expect("non-negative")
            })
            .collect()
    };
    let ca = counts(a);
    let cb = counts(b);
    let weighted = |c: &[BigUint]| -> f64 {
        neumaier_sum(c.iter().map(|x| {
            let ln_x = ln_biguint(x);
            if ln_x.is_finite() && ln_x > 0.0 {
                ln_x.exp() * ln_x
            } else {
                0.0
            }
        }))
    };
    let sa = weighted(&ca);
    let sb = weighted(&cb);
    let slack = 1e-9 * (1.0 + sa.abs() + sb.abs());
    if (sa - sb).abs() > slack {
        return sb.partial_cmp(&sa).unwrap_or(Ordering::Equal);
    }
    if den > BigUint::from(EXACT_COMPARE_MAX_DENOMINATOR) {
        return Ordering::Equal;
    }
    self_power_product(&cb).cmp(&self_power_product(&ca))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(v), 2.0);
    }

    #[test]
    fn ln_of_huge_integer() {
        let x = BigUint::from(3u32).pow(2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_biguint(&x) - expected).abs() < 1e-9 * expected);
        assert!((ln_biguint(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_comparison_detects_permutation_ties() {
        let a = vec![r(1, 2), r(1, 3), r(1, 6)];
        let b = vec![r(1, 6), r(1, 2), r(1, 3)];
        assert_eq!(BigRational::cmp_entropy(&a, &b), Ordering::Equal);
        let u = vec![r(1, 3), r(1, 3), r(1, 3)];
        assert_eq!(BigRational::cmp_entropy(&u, &a), Ordering::Greater);
        assert_eq!(BigRational::cmp_entropy(&a, &u), Ordering::Less);
    }

    #[test]
    fn float_comparison_uses_tie_tolerance() {
        let a = [0.5, 0.25, 0.25];
        let b = [0.25, 0.5, 0.25 + 1e-17];
        assert_eq!(f64::cmp_entropy(&a, &b), Ordering::Equal);
        assert_eq!(f64::cmp_entropy(&[1.0, 0.0], &a), Ordering::Less);
    }

    #[test]
    fn common_denominator_scales_to_integers() {
        let (d, c) = common_denominator(&[r(1, 4), r(1, 6), r(7, 12)]);
        assert_eq!(d, BigUint::from(12u32));
        let c: Vec<u32> = c.iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(c, vec![3, 2, 7]);
    }
}
