//! Entropies of sums, differences and weighted sums of i.i.d. random
//! variables on cyclic groups and on ℤ, the additive-combinatorics
//! constructions around them, and q-ary polar codes whose 2×2 kernel is
//! chosen to maximize the one-step entropy spread.
//!
//! * [`dist`], [`exact`]: distributions, entropies, convolutions, exact
//!   entropy differences.
//! * [`sumsets`]: sumsets, MSTD search, Stein iteration, Sidon sets and the
//!   gap constructions built on them.
//! * [`kernel`]: choice of the kernel coefficient over 𝔽_q.
//! * [`polar`]: encoder, successive-cancellation decoder, Monte-Carlo
//!   construction and exact one-step channel transforms.
//! * [`sim`]: polarization martingale, spread scatter and block-error curves.

pub mod dist;
pub mod error;
pub mod exact;
pub mod field;
pub mod kernel;
pub mod polar;
pub mod prob;
pub mod rng;
pub mod sim;
pub mod sumsets;

pub use dist::{CyclicDistribution, IntegerDistribution, LogBase};
pub use error::{Error, Result};
pub use exact::ExactLogRatio;

/// Version string written into CSV headers and cache files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
