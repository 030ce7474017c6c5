//! Points `(I(W), I(W⁺) − I(W))` for binary-input channels.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polar::FiniteChannel;
use crate::rng::trial_rng;

/// Largest output alphabet drawn by [`Sampler::RandomBinary`].
pub const MAX_RANDOM_OUTPUTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// BEC(ε) for ε evenly spaced in [0, 1].
    BecSweep,
    /// BSC(p) for p evenly spaced in [0, 1/2].
    BscSweep,
    /// Channels with 2..=8 outputs and rows drawn uniformly from the simplex.
    RandomBinary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub capacity: f64,
    pub spread: f64,
}

fn grid(j: usize, points: usize) -> f64 {
    if points == 1 {
        0.5
    } else {
        j as f64 / (points - 1) as f64
    }
}

/// A row drawn from the flat Dirichlet law on the simplex.
fn flat_row<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= total);
    // absorb rounding into the largest entry so the row sums to 1
    let excess: f64 = row.iter().sum::<f64>() - 1.0;
    let big = (0..len).max_by(|&a, &b| row[a].total_cmp(&row[b])).expect("len ≥ 1");
    row[big] -= excess;
    row
}

fn random_binary_channel(seed: u64, j: usize) -> FiniteChannel {
    let mut rng = trial_rng(seed, j as u64);
    let outputs = rng.random_range(2..=MAX_RANDOM_OUTPUTS);
    FiniteChannel::new(vec![flat_row(&mut rng, outputs), flat_row(&mut rng, outputs)])
        .expect("rows are normalized")
}

/// Spread of one channel under the binary kernel.
pub fn spread_point(w: &FiniteChannel) -> Result<ScatterPoint> {
    let (_, plus) = w.one_step_transform(1)?;
    let capacity = w.mutual_information();
    Ok(ScatterPoint {
        capacity,
        spread: plus.mutual_information() - capacity,
    })
}

pub fn spread_scatter(sampler: Sampler, points: usize, seed: u64) -> Result<Vec<ScatterPoint>> {
    if points == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    (0..points)
        .into_par_iter()
        .map(|j| {
            let w = match sampler {
                Sampler::BecSweep => FiniteChannel::bec(grid(j, points))?,
                Sampler::BscSweep => FiniteChannel::bsc(0.5 * grid(j, points))?,
                Sampler::RandomBinary => random_binary_channel(seed, j),
            };
            spread_point(&w)
        })
        .collect()
}

/// CSV body `I,spread`.
pub fn scatter_csv(points: &[ScatterPoint]) -> String {
    let mut s = String::from("I,spread\n");
    for p in points {
        writeln!(s, "{},{}", p.capacity, p.spread).unwrap();
    }
    s
}
