//! Successive-cancellation decoding over 𝔽_q.
//!
//! A node of size `m` holds one q-ary probability vector per codeword
//! position, split into a top half (observing `s + c·t`) and a bottom half
//! (observing `t`). The first half of `u` is decoded from
//!
//! ```text
//! P(sᵢ = α) ∝ Σ_β top_i[α + cβ] · bottom_i[β]
//! ```
//!
//! and, once `ŝ` is re-encoded, the second half from
//! `P(tᵢ = β) ∝ top_i[ŝᵢ + cβ] · bottom_i[β]`. Vectors are renormalized at
//! every node.

use crate::error::{Error, Result};
use crate::polar::channel::AdditiveChannel;
use crate::polar::code::PolarCode;

/// Sums below this are floored before renormalizing.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Result of one decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScOutput {
    pub u_hat: Vec<u32>,
    /// First information index whose decision was wrong (genie mode only).
    pub first_error: Option<usize>,
    /// Per-index wrong decisions given correct predecessors (genie mode only).
    pub errors: Vec<bool>,
}

/// Reusable decoder for one code and channel; scratch is owned per instance.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    q: usize,
    n: usize,
    /// `shift[β][α] = (α + cβ) mod q`.
    shift: Vec<Vec<usize>>,
    c: u32,
    frozen: Vec<bool>,
    frozen_values: Vec<u32>,
    noise: Vec<f64>,
    probs: Vec<Vec<f64>>,
    words: Vec<Vec<u32>>,
    saved: Vec<Vec<u32>>,
}

struct Run<'a> {
    genie: Option<&'a [u32]>,
    u_hat: Vec<u32>,
    errors: Vec<bool>,
    first_error: Option<usize>,
    trace: Option<Vec<Vec<f64>>>,
}

fn normalize(v: &mut [f64]) {
    let mut total: f64 = v.iter().sum();
    if !(total >= UNDERFLOW_FLOOR) {
        for p in v.iter_mut() {
            *p = p.max(UNDERFLOW_FLOOR);
        }
        total = v.iter().sum();
    }
    for p in v.iter_mut() {
        *p /= total;
    }
}

impl ScDecoder {
    pub fn new(code: &PolarCode, channel: &AdditiveChannel) -> Result<Self> {
        if code.q() != channel.q() {
            return Err(Error::InvalidArgument(format!(
                "code over 𝔽_{} but channel over 𝔽_{}",
                code.q(),
                channel.q()
            )));
        }
        let q = code.q() as usize;
        let n = code.n();
        let c = code.c() as usize;
        let levels = n.trailing_zeros() as usize + 1;
        Ok(Self {
            q,
            n,
            shift: (0..q)
                .map(|b| (0..q).map(|a| (a + c * b) % q).collect())
                .collect(),
            c: code.c(),
            frozen: (0..n).map(|i| code.is_frozen(i)).collect(),
            frozen_values: code.frozen_value_map(),
            noise: channel.noise().probs().to_vec(),
            probs: (0..levels).map(|d| vec![0.0; (n >> d) * q]).collect(),
            words: (0..levels).map(|d| vec![0; n >> d]).collect(),
            saved: (0..levels).map(|d| vec![0; n >> d]).collect(),
        })
    }

    fn check(&self, y: &[u32], genie: Option<&[u32]>) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "received word has length {}, expected {}",
                y.len(),
                self.n
            )));
        }
        if let Some(pos) = y.iter().position(|&s| s as usize >= self.q) {
            return Err(Error::InvalidArgument(format!(
                "received symbol {} at position {pos} is outside 𝔽_{}",
                y[pos], self.q
            )));
        }
        if let Some(g) = genie {
            if g.len() != self.n || g.iter().any(|&s| s as usize >= self.q) {
                return Err(Error::InvalidArgument("genie word is malformed".into()));
            }
        }
        Ok(())
    }

    /// Decodes `y`; with `genie = Some(u)` each decision is compared to
    /// `u` and then replaced by it.
    pub fn decode(&mut self, y: &[u32], genie: Option<&[u32]>) -> Result<ScOutput> {
        let run = self.run(y, genie, false)?;
        Ok(ScOutput {
            u_hat: run.u_hat,
            first_error: run.first_error,
            errors: run.errors,
        })
    }

    /// Like [`decode`](Self::decode), also returning the normalized posterior
    /// vector seen at every index.
    pub fn decode_traced(
        &mut self,
        y: &[u32],
        genie: Option<&[u32]>,
    ) -> Result<(ScOutput, Vec<Vec<f64>>)> {
        let run = self.run(y, genie, true)?;
        Ok((
            ScOutput {
                u_hat: run.u_hat,
                first_error: run.first_error,
                errors: run.errors,
            },
            run.trace.expect("trace requested"),
        ))
    }

    fn run<'a>(&mut self, y: &[u32], genie: Option<&'a [u32]>, traced: bool) -> Result<Run<'a>> {
        self.check(y, genie)?;
        let q = self.q;
        for (i, &yi) in y.iter().enumerate() {
            let row = &mut self.probs[0][i * q..(i + 1) * q];
            for (x, p) in row.iter_mut().enumerate() {
                *p = self.noise[(yi as usize + q - x) % q];
            }
            normalize(row);
        }
        let mut run = Run {
            genie,
            u_hat: vec![0; self.n],
            errors: vec![false; self.n],
            first_error: None,
            trace: traced.then(|| vec![Vec::new(); self.n]),
        };
        self.node(0, 0, &mut run);
        Ok(run)
    }

    fn node(&mut self, depth: usize, offset: usize, run: &mut Run<'_>) {
        let q = self.q;
        let m = self.n >> depth;
        if m == 1 {
            self.leaf(depth, offset, run);
            return;
        }
        let half = m / 2;

        // first half: sᵢ with tᵢ marginalized
        {
            let (cur, next) = self.probs.split_at_mut(depth + 1);
            let cur = &cur[depth];
            let next = &mut next[0];
            for i in 0..half {
                let top = &cur[i * q..(i + 1) * q];
                let bottom = &cur[(i + half) * q..(i + half + 1) * q];
                let out = &mut next[i * q..(i + 1) * q];
                out.fill(0.0);
                for (beta, &pb) in bottom.iter().enumerate() {
                    if pb == 0.0 {
                        continue;
                    }
                    for (alpha, o) in out.iter_mut().enumerate() {
                        *o += top[self.shift[beta][alpha]] * pb;
                    }
                }
                normalize(out);
            }
        }
        self.node(depth + 1, offset, run);
        let s_hat = std::mem::take(&mut self.saved[depth]);
        let mut s_hat = s_hat;
        s_hat[..half].copy_from_slice(&self.words[depth + 1]);

        // second half: tᵢ given ŝᵢ
        {
            let (cur, next) = self.probs.split_at_mut(depth + 1);
            let cur = &cur[depth];
            let next = &mut next[0];
            for i in 0..half {
                let top = &cur[i * q..(i + 1) * q];
                let bottom = &cur[(i + half) * q..(i + half + 1) * q];
                let out = &mut next[i * q..(i + 1) * q];
                let s = s_hat[i] as usize;
                for (beta, o) in out.iter_mut().enumerate() {
                    *o = top[self.shift[beta][s]] * bottom[beta];
                }
                normalize(out);
            }
        }
        self.node(depth + 1, offset + half, run);

        let c = self.c as usize;
        let (cur, next) = self.words.split_at_mut(depth + 1);
        let word = &mut cur[depth];
        let t_hat = &next[0];
        for i in 0..half {
            word[i] = ((s_hat[i] as usize + c * t_hat[i] as usize) % q) as u32;
            word[i + half] = t_hat[i];
        }
        self.saved[depth] = s_hat;
    }

    fn leaf(&mut self, depth: usize, index: usize, run: &mut Run<'_>) {
        let post = &self.probs[depth][..self.q];
        if let Some(trace) = run.trace.as_mut() {
            trace[index] = post.to_vec();
        }
        let mut decision = if self.frozen[index] {
            self.frozen_values[index]
        } else {
            // ties go to the smallest symbol
            let mut best = 0;
            for (a, &p) in post.iter().enumerate() {
                if p > post[best] {
                    best = a;
                }
            }
            best as u32
        };
        if let Some(truth) = run.genie {
            if !self.frozen[index] && decision != truth[index] {
                run.errors[index] = true;
                run.first_error.get_or_insert(index);
            }
            decision = truth[index];
        }
        run.u_hat[index] = decision;
        self.words[depth][0] = decision;
    }
}

/// One-shot decoding of `y` received through `channel`.
pub fn sc_decode(
    code: &PolarCode,
    y: &[u32],
    channel: &AdditiveChannel,
    genie: Option<&[u32]>,
) -> Result<ScOutput> {
    ScDecoder::new(code, channel)?.decode(y, genie)
}
