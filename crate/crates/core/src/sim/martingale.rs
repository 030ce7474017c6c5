//! Sample paths of the polarization martingale `I(W_n)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::FiniteChannel;
use crate::rng::trial_rng;

/// Deepest transform tree built for explicit channels.
pub const MAX_EXPLICIT_DEPTH: usize = 4;

/// Largest merged output alphabet an explicit transform may reach.
pub const MAX_EXPLICIT_OUTPUTS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingalePath {
    pub branch_signs: Vec<Branch>,
    /// `I(W_0), …, I(W_depth)`; one more entry than `branch_signs`.
    pub mutual_informations: Vec<f64>,
}

impl MartingalePath {
    pub fn final_value(&self) -> f64 {
        *self.mutual_informations.last().expect("never empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelFamily {
    /// Binary erasure channel with erasure probability ε; closed-form steps.
    Erasure(f64),
    /// Exact transforms of an explicit channel with kernel coefficient `c`.
    Explicit { channel: FiniteChannel, c: u32 },
}

/// `(I(W⁻), I(W⁺))` of an erasure channel with capacity `i`.
pub fn erasure_children(i: f64) -> (f64, f64) {
    (i * i, 2.0 * i - i * i)
}

fn explicit_tree(
    channel: &FiniteChannel,
    c: u32,
    depth: usize,
) -> Result<HashMap<Vec<Branch>, f64>> {
    let mut values = HashMap::new();
    let mut frontier = vec![(Vec::new(), channel.merge_outputs())];
    values.insert(Vec::new(), channel.mutual_information());
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (prefix, w) in frontier {
            let (minus, plus) = w.one_step_transform(c)?;
            for (branch, child) in [(Branch::Minus, minus), (Branch::Plus, plus)] {
                let child = child.merge_outputs();
                if child.output_size() > MAX_EXPLICIT_OUTPUTS {
                    return Err(Error::Budget(format!(
                        "transformed channel has {} outputs, over {MAX_EXPLICIT_OUTPUTS}",
                        child.output_size()
                    )));
                }
                let mut path = prefix.clone();
                path.push(branch);
                values.insert(path.clone(), child.mutual_information());
                next.push((path, child));
            }
        }
        frontier = next;
    }
    Ok(values)
}

/// `paths` independent trajectories of length `depth` with uniform branch
/// signs; path `k` draws its signs from stream `k` of `seed`.
pub fn martingale_sample(
    family: &ChannelFamily,
    depth: usize,
    paths: usize,
    seed: u64,
) -> Result<Vec<MartingalePath>> {
    let signs = |k: usize| -> Vec<Branch> {
        let mut rng = trial_rng(seed, k as u64);
        (0..depth)
            .map(|_| if rng.random::<bool>() { Branch::Plus } else { Branch::Minus })
            .collect()
    };
    match family {
        ChannelFamily::Erasure(eps) => {
            if !(0.0..=1.0).contains(eps) {
                return Err(Error::InvalidArgument(format!("erasure probability {eps} outside [0, 1]")));
            }
            Ok((0..paths)
                .into_par_iter()
                .map(|k| {
                    let branch_signs = signs(k);
                    let mut values = vec![1.0 - eps];
                    for b in &branch_signs {
                        let (m, p) = erasure_children(*values.last().expect("non-empty"));
                        values.push(if *b == Branch::Plus { p } else { m });
                    }
                    MartingalePath {
                        branch_signs,
                        mutual_informations: values,
                    }
                })
                .collect())
        }
        ChannelFamily::Explicit { channel, c } => {
            if depth > MAX_EXPLICIT_DEPTH {
                return Err(Error::Budget(format!(
                    "explicit channels support depth at most {MAX_EXPLICIT_DEPTH}, got {depth}"
                )));
            }
            let tree = explicit_tree(channel, *c, depth)?;
            Ok((0..paths)
                .map(|k| {
                    let branch_signs = signs(k);
                    let values = (0..=depth).map(|j| tree[&branch_signs[..j]]).collect();
                    MartingalePath {
                        branch_signs,
                        mutual_informations: values,
                    }
                })
                .collect())
        }
    }
}

/// CSV body `path_id,step,sign,I`; step 0 has an empty sign.
pub fn martingale_csv(paths: &[MartingalePath]) -> String {
    let mut s = String::from("path_id,step,sign,I\n");
    for (k, p) in paths.iter().enumerate() {
        for (step, value) in p.mutual_informations.iter().enumerate() {
            let sign = step
                .checked_sub(1)
                .map_or(String::new(), |j| p.branch_signs[j].symbol().to_string());
            writeln!(s, "{k},{step},{sign},{value}").unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erasure_mean_is_conserved() {
        let paths = martingale_sample(&ChannelFamily::Erasure(0.5), 10, 10_000, 7).unwrap();
        let finals: Vec<f64> = paths.iter().map(MartingalePath::final_value).collect();
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        let var = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / finals.len() as f64;
        assert!((mean - 0.5).abs() <= 3.0 * (var / finals.len() as f64).sqrt());
    }

    #[test]
    fn erasure_step_and_extremes() {
        let (m, p) = erasure_children(1.0 - 0.3);
        assert!((m - (1.0 - (0.6 - 0.09))).abs() < 1e-15);
        assert!((p - (1.0 - 0.09)).abs() < 1e-15);
        let paths = martingale_sample(&ChannelFamily::Erasure(0.0), 6, 20, 1).unwrap();
        assert!(paths.iter().all(|p| p.mutual_informations.iter().all(|&i| i == 1.0)));
    }

    #[test]
    fn explicit_matches_erasure_and_respects_budget() {
        let bec = FiniteChannel::bec(0.4).unwrap();
        let family = ChannelFamily::Explicit { channel: bec, c: 1 };
        let exact = martingale_sample(&family, 4, 50, 3).unwrap();
        let closed = martingale_sample(&ChannelFamily::Erasure(0.4), 4, 50, 3).unwrap();
        for (a, b) in exact.iter().zip(&closed) {
            assert_eq!(a.branch_signs, b.branch_signs);
            for (x, y) in a.mutual_informations.iter().zip(&b.mutual_informations) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(matches!(martingale_sample(&family, 5, 1, 0), Err(Error::Budget(_))));
    }

    #[test]
    fn csv_layout() {
        let paths = martingale_sample(&ChannelFamily::Erasure(0.5), 1, 1, 0).unwrap();
        let csv = martingale_csv(&paths);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "path_id,step,sign,I");
        assert_eq!(lines[1], "0,0,,0.5");
        assert!(lines[2] == "0,1,-,0.25" || lines[2] == "0,1,+,0.75");
    }
}
