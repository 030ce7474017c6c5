//! Distributions with prescribed sum/difference entropy gaps: the Sidon and
//! Stein construction, product embeddings and arbitrary targets.

use super::{sidon_set, stein_iterate, IntSet, DEFAULT_STEIN_BUDGET};
use crate::dist::{IntegerDistribution, LogBase};
use crate::error::{Error, Result};
use crate::prob::Probability;

/// Largest support `|supp p|^k` that [`product_embed`] will build.
pub const EMBED_SUPPORT_LIMIT: u64 = 1 << 20;

/// Uniform law on this set has `H(X+Y) − H(X−Y) > 0`; the mixing path for
/// positive targets ends here.
pub const POSITIVE_ENDPOINT: [i64; 17] = [0, 1, 3, 4, 5, 8, 12, 13, 15, 16, 17, 20, 24, 25, 27, 28, 29];

/// The mixing path for negative targets ends at the uniform law on a greedy
/// Sidon set of this size.
pub const NEGATIVE_ENDPOINT_SIZE: usize = 8;

const MAX_BISECTIONS: usize = 80;

/// Output of [`lp_gap_distributions`]. Entropies are in nats.
#[derive(Debug, Clone)]
pub struct LpGap {
    pub set: IntSet,
    pub distribution: IntegerDistribution<f64>,
    pub sum_entropy: f64,
    pub diff_entropy: f64,
    /// Upper bound `2^L · log|A + A|` on `H(X+Y)`.
    pub sum_upper: f64,
    /// Lower bound `(|A − A| / |A|²)^(2^L) · 2^(L+1) · log|A|` on `H(X−Y)`.
    pub diff_lower: f64,
}

impl LpGap {
    /// `H(X−Y) − H(X+Y)`.
    pub fn gap(&self) -> f64 {
        self.diff_entropy - self.sum_entropy
    }
}

/// Stein level count used by [`lp_gap_distributions`].
const LP_GAP_LEVELS: u32 = 1;

/// Uniform law on one Stein level over a greedy Sidon set of `k²` elements,
/// with the entropy bounds for that level.
pub fn lp_gap_distributions(k: u32) -> Result<LpGap> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let base = sidon_set((k * k) as usize);
    let trace = stein_iterate(&base, LP_GAP_LEVELS, DEFAULT_STEIN_BUDGET)?;
    let set = trace.last().clone();
    let distribution = set.uniform_integer::<f64>()?;
    let sum_entropy = distribution.convolve(&distribution, false).entropy(LogBase::NATURAL);
    let diff_entropy = distribution.convolve(&distribution, true).entropy(LogBase::NATURAL);

    let n = base.len() as f64;
    let sums = base.sumset(&base)?.len() as f64;
    let diffs = base.difference_set(&base)?.len() as f64;
    let power = 2f64.powi(LP_GAP_LEVELS as i32);
    Ok(LpGap {
        set,
        distribution,
        sum_entropy,
        diff_entropy,
        sum_upper: power * sums.ln(),
        diff_lower: (diffs / (n * n)).powf(power) * 2.0 * power * n.ln(),
    })
}

/// Smallest base `d` for which `x ↦ Σ xᵢ d^(i−1)` is injective on the sum
/// and difference supports of every coordinate: `2·diam(p) + 1`.
pub fn min_embedding_base<P: Probability>(p: &IntegerDistribution<P>) -> i64 {
    2 * p.diameter() + 1
}

fn scale_support<P: Probability>(p: &IntegerDistribution<P>, factor: i64) -> Result<IntegerDistribution<P>> {
    let support = p
        .support()
        .iter()
        .map(|&x| x.checked_mul(factor))
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| Error::Budget("embedded support overflows i64".into()))?;
    IntegerDistribution::new(support, p.probs().to_vec())
}

/// Law of `Σ_{i=1..k} Xᵢ d^(i−1)` for i.i.d. `Xᵢ ~ p`.
pub fn product_embed<P: Probability>(
    p: &IntegerDistribution<P>,
    k: u32,
    d: i64,
) -> Result<IntegerDistribution<P>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let d_min = min_embedding_base(p);
    if d < d_min {
        return Err(Error::InvalidArgument(format!(
            "base {d} is too small; the minimal admissible base is {d_min}"
        )));
    }
    let size = (p.len() as u64).checked_pow(k);
    if size.is_none_or(|s| s > EMBED_SUPPORT_LIMIT) {
        return Err(Error::Budget(format!(
            "embedded support {}^{k} exceeds {EMBED_SUPPORT_LIMIT} points",
            p.len()
        )));
    }
    let mut out = p.clone();
    let mut factor = 1i64;
    for _ in 1..k {
        factor = factor
            .checked_mul(d)
            .ok_or_else(|| Error::Budget("embedding base power overflows i64".into()))?;
        out = out.convolve(&scale_support(p, factor)?, false);
    }
    Ok(out)
}

/// Output of [`find_target_diff`].
#[derive(Debug, Clone)]
pub struct TargetDiff {
    pub distribution: IntegerDistribution<f64>,
    /// Amplification factor of the product embedding.
    pub k: u32,
    /// Embedding base.
    pub base: i64,
    /// Mixing weight of the endpoint law.
    pub t: f64,
    /// `H(X+Y) − H(X−Y)` of `distribution`, in nats (`k` times the value at `t`).
    pub diff: f64,
}

fn anchor() -> IntegerDistribution<f64> {
    IntegerDistribution::uniform_on(&[0, 1]).expect("non-empty")
}

/// A law with `H(X+Y) − H(X−Y)` (nats) within `tol` of `target`.
///
/// Mixes the symmetric law on `{0, 1}` (difference 0) toward an endpoint
/// whose difference has the sign of `target`, picks the smallest `k` with
/// `|target|/k` below the endpoint's magnitude, bisects the mixing weight to
/// hit `target/k` and embeds `k` independent copies.
pub fn find_target_diff(target: f64, tol: f64) -> Result<TargetDiff> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if !target.is_finite() {
        return Err(Error::InvalidArgument(format!("target {target} is not finite")));
    }
    let start = anchor();
    if target.abs() <= tol {
        return Ok(TargetDiff {
            distribution: start,
            k: 1,
            base: 1,
            t: 0.0,
            diff: 0.0,
        });
    }
    let end = if target > 0.0 {
        IntegerDistribution::uniform_on(&POSITIVE_ENDPOINT)?
    } else {
        sidon_set(NEGATIVE_ENDPOINT_SIZE).uniform_integer::<f64>()?
    };
    let diff_at = |t: f64| start.mix(&end, &t).sum_minus_diff_entropy(LogBase::NATURAL);
    let end_diff = diff_at(1.0);
    let k = (target.abs() / end_diff.abs()).floor() + 1.0;
    let size = (end.len() + 1) as f64;
    if size.powf(k) > EMBED_SUPPORT_LIMIT as f64 {
        return Err(Error::Budget(format!(
            "target {target} needs {k} embedded copies, over {EMBED_SUPPORT_LIMIT} support points"
        )));
    }
    let k = k as u32;
    let goal = target / k as f64;
    let local_tol = tol / (2.0 * k as f64);

    // f(0) = 0 and f(1) = end_diff bracket goal.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut t = 1.0;
    let mut value = end_diff;
    for _ in 0..MAX_BISECTIONS {
        if (value - goal).abs() <= local_tol {
            break;
        }
        t = 0.5 * (lo + hi);
        value = diff_at(t);
        if (value - goal).signum() == (0.0 - goal).signum() {
            lo = t;
        } else {
            hi = t;
        }
    }
    let mixed = start.mix(&end, &t);
    let base = min_embedding_base(&mixed);
    let distribution = product_embed(&mixed, k, base)?;
    Ok(TargetDiff {
        distribution,
        k,
        base,
        t,
        diff: k as f64 * value,
    })
}
