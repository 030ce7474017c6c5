//! Monte-Carlo code construction by genie-aided SC decoding, frozen-set
//! selection and the on-disk reliability cache.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::channel::AdditiveChannel;
use crate::polar::code::PolarCode;
use crate::polar::decoder::ScDecoder;
use crate::rng::trial_rng;

/// Trials handled by one worker task; fixed so the reduction tree does not
/// depend on the pool size.
const CHUNK: u64 = 256;

const CACHE_MAGIC: &str = "# polarsum reliability-profile v1";
const CACHE_COLUMNS: &str = "q,n,c,noise_digest,trials,seed";

/// Per-index genie-aided error counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityProfile {
    pub q: u32,
    pub n: usize,
    pub c: u32,
    pub noise_digest: String,
    pub trials: u64,
    pub seed: u64,
    /// Entry `i` counts trials in which decision `i` was wrong although all
    /// earlier decisions were corrected to the truth.
    pub first_error_counts: Vec<u64>,
}

impl ReliabilityProfile {
    pub fn error_rate(&self, i: usize) -> f64 {
        self.first_error_counts[i] as f64 / self.trials as f64
    }

    pub fn zero_count_indices(&self) -> usize {
        self.first_error_counts.iter().filter(|&&c| c == 0).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{CACHE_MAGIC} ({})", crate::VERSION).unwrap();
        writeln!(s, "{CACHE_COLUMNS}").unwrap();
        writeln!(
            s,
            "{},{},{},{},{},{}",
            self.q, self.n, self.c, self.noise_digest, self.trials, self.seed
        )
        .unwrap();
        for (i, c) in self.first_error_counts.iter().enumerate() {
            writeln!(s, "{i},{c}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Cache(msg.to_string());
        let mut lines = text.lines();
        if !lines.next().is_some_and(|l| l.starts_with(CACHE_MAGIC)) {
            return Err(bad("missing header"));
        }
        if lines.next() != Some(CACHE_COLUMNS) {
            return Err(bad("missing column line"));
        }
        let values: Vec<&str> = lines.next().ok_or_else(|| bad("missing values"))?.split(',').collect();
        if values.len() != 6 {
            return Err(bad("value line needs 6 fields"));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| bad(&format!("bad number {s:?}")));
        let n = num(values[1])? as usize;
        let mut counts = Vec::with_capacity(n);
        for (expected, line) in lines.enumerate() {
            let (i, c) = line.split_once(',').ok_or_else(|| bad("bad count line"))?;
            if num(i)? as usize != expected {
                return Err(bad("count lines out of order"));
            }
            counts.push(num(c)?);
        }
        let profile = Self {
            q: num(values[0])? as u32,
            n,
            c: num(values[2])? as u32,
            noise_digest: values[3].to_string(),
            trials: num(values[4])?,
            seed: num(values[5])?,
            first_error_counts: counts,
        };
        if profile.first_error_counts.len() != n {
            return Err(bad("wrong number of count lines"));
        }
        if profile.first_error_counts.iter().any(|&c| c > profile.trials) {
            return Err(bad("count exceeds trials"));
        }
        Ok(profile)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_text())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }
}

/// Runs `trials` genie-aided decodings of uniform random messages through
/// `channel` and counts per-index decision errors. Uses the current rayon
/// pool; the result does not depend on its size.
pub fn construct(
    channel: &AdditiveChannel,
    n: usize,
    c: u32,
    trials: u64,
    seed: u64,
) -> Result<ReliabilityProfile> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let code = PolarCode::new(channel.q(), n, c, [])?;
    let template = ScDecoder::new(&code, channel)?;
    let q = channel.q();
    let chunks = trials.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut dec = template.clone();
            let mut counts = vec![0u64; n];
            let mut u = vec![0u32; n];
            let mut y = vec![0u32; n];
            for t in chunk * CHUNK..((chunk + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(seed, t);
                u.iter_mut().for_each(|s| *s = rng.random_range(0..q));
                y.copy_from_slice(&u);
                crate::polar::code::butterfly(&mut y, q, c);
                for s in y.iter_mut() {
                    *s = (*s + channel.sample_noise(&mut rng)) % q;
                }
                let out = dec.decode(&y, Some(&u)).expect("well-formed words");
                for (count, &e) in counts.iter_mut().zip(&out.errors) {
                    *count += e as u64;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ReliabilityProfile {
        q,
        n,
        c,
        noise_digest: channel.digest(),
        trials,
        seed,
        first_error_counts: counts,
    })
}

/// Information set of size `k` made of the indices with the fewest errors;
/// among equal counts the smaller index is frozen first.
pub fn select_frozen(profile: &ReliabilityProfile, k: usize) -> Result<PolarCode> {
    let n = profile.n;
    if k > n {
        return Err(Error::InvalidArgument(format!("dimension {k} exceeds n = {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    // worst first
    order.sort_by(|&a, &b| {
        profile.first_error_counts[b]
            .cmp(&profile.first_error_counts[a])
            .then(a.cmp(&b))
    });
    PolarCode::new(profile.q, n, profile.c, order[..n - k].iter().copied())
}

/// How a profile was obtained from the cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// A cache file existed but did not match; the reason is attached.
    Rebuilt(String),
}

/// File name of the cached profile for these parameters.
pub fn cache_path(dir: &Path, q: u32, n: usize, c: u32, trials: u64, seed: u64) -> PathBuf {
    dir.join(format!("profile-q{q}-n{n}-c{c}-t{trials}-s{seed}.csv"))
}

/// Loads the profile from `dir` when present and consistent, otherwise
/// constructs it and writes it back.
pub fn load_or_construct(
    dir: &Path,
    channel: &AdditiveChannel,
    n: usize,
    c: u32,
    trials: u64,
    seed: u64,
) -> Result<(ReliabilityProfile, CacheStatus)> {
    let path = cache_path(dir, channel.q(), n, c, trials, seed);
    let status = if path.exists() {
        match ReliabilityProfile::read(&path) {
            Ok(p)
                if p.noise_digest == channel.digest()
                    && (p.q, p.n, p.c, p.trials, p.seed) == (channel.q(), n, c, trials, seed) =>
            {
                return Ok((p, CacheStatus::Hit));
            }
            Ok(p) => CacheStatus::Rebuilt(format!(
                "noise digest {} does not match {}",
                p.noise_digest,
                channel.digest()
            )),
            Err(e) => CacheStatus::Rebuilt(e.to_string()),
        }
    } else {
        CacheStatus::Built
    };
    let profile = construct(channel, n, c, trials, seed)?;
    profile
        .write(&path)
        .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    Ok((profile, status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::CyclicDistribution;
    use crate::rng::with_workers;

    fn channel(p: &[f64]) -> AdditiveChannel {
        AdditiveChannel::new(CyclicDistribution::new(p.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn noiseless_profile_is_all_zero() {
        let p = construct(&AdditiveChannel::noiseless(3).unwrap(), 16, 2, 300, 1).unwrap();
        assert!(p.first_error_counts.iter().all(|&c| c == 0));
    }

    /// Exact error probabilities of the two synthetic channels at n = 2,
    /// by enumerating (u₁, u₂, z₁, z₂) with the decoder's tie rule.
    fn exact_two_channel_errors(ch: &AdditiveChannel, c: u32) -> [f64; 2] {
        let q = ch.q();
        let mu = ch.noise().probs();
        let argmax = |v: &[f64]| -> u32 {
            let mut b = 0;
            for (i, &p) in v.iter().enumerate() {
                if p > v[b] {
                    b = i;
                }
            }
            b as u32
        };
        let mut err = [0.0; 2];
        for u1 in 0..q {
            for u2 in 0..q {
                for z1 in 0..q {
                    for z2 in 0..q {
                        let pr = mu[z1 as usize] * mu[z2 as usize] / (q * q) as f64;
                        if pr == 0.0 {
                            continue;
                        }
                        let y1 = (u1 + c * u2 + z1) % q;
                        let y2 = (u2 + z2) % q;
                        let minus: Vec<f64> = (0..q)
                            .map(|a| (0..q).map(|b| ch.likelihood(y1, (a + c * b) % q) * ch.likelihood(y2, b)).sum())
                            .collect();
                        let plus: Vec<f64> = (0..q)
                            .map(|b| ch.likelihood(y1, (u1 + c * b) % q) * ch.likelihood(y2, b))
                            .collect();
                        if argmax(&minus) != u1 {
                            err[0] += pr;
                        }
                        if argmax(&plus) != u2 {
                            err[1] += pr;
                        }
                    }
                }
            }
        }
        err
    }

    #[test]
    fn two_index_rates_match_enumeration() {
        let ch = channel(&[0.7, 0.3, 0.0]);
        let trials = 40_000;
        for c in [1, 2] {
            let p = construct(&ch, 2, c, trials, 9).unwrap();
            let exact = exact_two_channel_errors(&ch, c);
            for i in 0..2 {
                let sigma = (exact[i] * (1.0 - exact[i]) / trials as f64).sqrt();
                assert!(
                    (p.error_rate(i) - exact[i]).abs() <= 3.0 * sigma + 1e-12,
                    "c={c} i={i}: {} vs {}",
                    p.error_rate(i),
                    exact[i]
                );
            }
        }
    }

    #[test]
    fn construction_is_independent_of_workers() {
        let ch = channel(&[0.6, 0.25, 0.15]);
        let a = with_workers(1, || construct(&ch, 64, 2, 1000, 4)).unwrap().unwrap();
        let b = with_workers(4, || construct(&ch, 64, 2, 1000, 4)).unwrap().unwrap();
        assert_eq!(a, b);
        let c = with_workers(4, || construct(&ch, 64, 2, 1000, 5)).unwrap().unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn frozen_selection_and_ties() {
        let profile = ReliabilityProfile {
            q: 3,
            n: 4,
            c: 1,
            noise_digest: "x".into(),
            trials: 10,
            seed: 0,
            first_error_counts: vec![5, 0, 5, 0],
        };
        assert!(select_frozen(&profile, 4).unwrap().frozen().is_empty());
        assert_eq!(select_frozen(&profile, 0).unwrap().frozen(), &[0, 1, 2, 3]);
        assert_eq!(select_frozen(&profile, 2).unwrap().frozen(), &[0, 2]);
        assert_eq!(select_frozen(&profile, 1).unwrap().frozen(), &[0, 1, 2]);
        assert!(select_frozen(&profile, 5).is_err());
    }

    #[test]
    fn cache_roundtrip_and_rebuild() {
        let dir = std::env::temp_dir().join(format!("polarsum-cache-test-{}", std::process::id()));
        let ch = channel(&[0.7, 0.3, 0.0]);
        let (p, s) = load_or_construct(&dir, &ch, 8, 2, 50, 1).unwrap();
        assert_eq!(s, CacheStatus::Built);
        let (p2, s2) = load_or_construct(&dir, &ch, 8, 2, 50, 1).unwrap();
        assert_eq!((p2, s2), (p.clone(), CacheStatus::Hit));
        let other = channel(&[0.7, 0.0, 0.3]);
        let (_, s3) = load_or_construct(&dir, &other, 8, 2, 50, 1).unwrap();
        assert!(matches!(s3, CacheStatus::Rebuilt(_)));
        assert_eq!(ReliabilityProfile::from_text(&p.to_text()).unwrap(), p);
        assert!(ReliabilityProfile::from_text("garbage").is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
