//! Block-error-rate curves of SC-decoded polar codes over additive channels.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::{butterfly, construct, select_frozen, AdditiveChannel, ReliabilityProfile, ScDecoder};
use crate::rng::trial_rng;

const CHUNK: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlerPoint {
    pub rate: f64,
    pub trials: u64,
    pub block_errors: u64,
}

impl BlerPoint {
    pub fn bler(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.block_errors as f64 / self.trials as f64
        }
    }

    /// Wilson score interval at `z` standard deviations.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.block_errors, self.trials, z)
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Information-set size used for `rate` at length `n`.
pub fn dimension_for_rate(rate: f64, n: usize) -> usize {
    ((rate * n as f64).round() as usize).min(n)
}

/// Seed offset separating decoding randomness from construction randomness.
pub const DECODE_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Constructs the reliability profile once (`construct_trials` genie runs
/// from `seed`) and evaluates every rate with [`bler_curve_with_profile`]
/// using the decoding seed `seed ^ DECODE_SEED_OFFSET`.
#[allow(clippy::too_many_arguments)]
pub fn bler_curve(
    channel: &AdditiveChannel,
    n: usize,
    c: u32,
    rates: &[f64],
    construct_trials: u64,
    decode_trials: u64,
    seed: u64,
) -> Result<Vec<BlerPoint>> {
    let profile = construct(channel, n, c, construct_trials, seed)?;
    bler_curve_with_profile(channel, &profile, rates, decode_trials, seed ^ DECODE_SEED_OFFSET)
}

/// Runs `decode_trials` transmissions per rate, reusing `profile` for every
/// rate. Trial `t` draws one message over all `n` positions and one noise
/// word from stream `t` of `seed`; each rate zeroes its frozen positions of
/// that message, so information sets and error events are nested in rate.
pub fn bler_curve_with_profile(
    channel: &AdditiveChannel,
    profile: &ReliabilityProfile,
    rates: &[f64],
    decode_trials: u64,
    seed: u64,
) -> Result<Vec<BlerPoint>> {
    if profile.q != channel.q() || profile.noise_digest != channel.digest() {
        return Err(Error::InvalidArgument(
            "reliability profile was built for a different channel".into(),
        ));
    }
    if let Some(r) = rates.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::InvalidArgument(format!("rate {r} outside (0, 1]")));
    }
    let n = profile.n;
    let q = channel.q();
    let c = profile.c;
    let codes = rates
        .iter()
        .map(|&r| select_frozen(profile, dimension_for_rate(r, n)))
        .collect::<Result<Vec<_>>>()?;
    let decoders = codes
        .iter()
        .map(|code| ScDecoder::new(code, channel))
        .collect::<Result<Vec<_>>>()?;

    let chunks = decode_trials.div_ceil(CHUNK);
    let errors = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut decoders = decoders.clone();
            let mut errors = vec![0u64; rates.len()];
            let mut u_full = vec![0u32; n];
            let mut z = vec![0u32; n];
            let mut u = vec![0u32; n];
            let mut y = vec![0u32; n];
            for t in chunk * CHUNK..((chunk + 1) * CHUNK).min(decode_trials) {
                let mut rng = trial_rng(seed, t);
                u_full.iter_mut().for_each(|s| *s = rng.random_range(0..q));
                z.iter_mut().for_each(|s| *s = channel.sample_noise(&mut rng));
                for ((code, dec), err) in codes.iter().zip(decoders.iter_mut()).zip(errors.iter_mut()) {
                    if code.dimension() == 0 {
                        continue;
                    }
                    for i in 0..n {
                        u[i] = if code.is_frozen(i) { 0 } else { u_full[i] };
                    }
                    y.copy_from_slice(&u);
                    butterfly(&mut y, q, c);
                    y.iter_mut().zip(&z).for_each(|(s, &zi)| *s = (*s + zi) % q);
                    let out = dec.decode(&y, None).expect("well-formed words");
                    *err += (out.u_hat != u) as u64;
                }
            }
            errors
        })
        .reduce(
            || vec![0u64; rates.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(rates
        .iter()
        .zip(errors)
        .map(|(&rate, block_errors)| BlerPoint {
            rate,
            trials: decode_trials,
            block_errors,
        })
        .collect())
}

/// CSV body `rate,trials,errors,bler,log10_bler`.
pub fn bler_csv(points: &[BlerPoint]) -> String {
    let mut s = String::from("rate,trials,errors,bler,log10_bler\n");
    for p in points {
        writeln!(
            s,
            "{},{},{},{},{}",
            p.rate,
            p.trials,
            p.block_errors,
            p.bler(),
            p.bler().log10()
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::CyclicDistribution;

    #[test]
    fn wilson_interval_properties() {
        let (lo, hi) = wilson_interval(0, 100, 3.0);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn noiseless_channel_has_no_errors() {
        let ch = AdditiveChannel::noiseless(3).unwrap();
        let pts = bler_curve(&ch, 64, 2, &[0.25, 0.5, 1.0], 10, 200, 1).unwrap();
        assert!(pts.iter().all(|p| p.block_errors == 0));
    }

    #[test]
    fn errors_are_nondecreasing_in_rate() {
        let ch = AdditiveChannel::new(CyclicDistribution::new(vec![0.8, 0.15, 0.05]).unwrap()).unwrap();
        let profile = construct(&ch, 64, 1, 2000, 3).unwrap();
        let rates = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
        let pts = bler_curve_with_profile(&ch, &profile, &rates, 2000, 8).unwrap();
        for w in pts.windows(2) {
            assert!(w[0].block_errors <= w[1].block_errors, "{pts:?}");
        }
        assert!(pts.last().unwrap().block_errors > 0);
    }

    #[test]
    fn mismatched_profile_is_rejected() {
        let a = AdditiveChannel::noiseless(3).unwrap();
        let b = AdditiveChannel::new(CyclicDistribution::new(vec![0.7, 0.3, 0.0]).unwrap()).unwrap();
        let profile = construct(&a, 8, 1, 10, 0).unwrap();
        assert!(bler_curve_with_profile(&b, &profile, &[0.5], 10, 0).is_err());
        assert!(bler_curve_with_profile(&a, &profile, &[0.0], 10, 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = bler_csv(&[BlerPoint { rate: 0.5, trials: 10, block_errors: 1 }]);
        assert_eq!(csv, "rate,trials,errors,bler,log10_bler\n0.5,10,1,0.1,-1\n");
    }
}
