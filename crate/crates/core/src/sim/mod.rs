//! Experiments: martingale paths, spread scatter and block-error curves.
//! CSV writers here produce bodies only; [`comment_header`] supplies the
//! leading `#` lines.

pub mod bler;
pub mod martingale;
pub mod scatter;

pub use bler::{
    bler_csv, bler_curve, bler_curve_with_profile, dimension_for_rate, wilson_interval, BlerPoint,
    DECODE_SEED_OFFSET,
};
pub use martingale::{
    erasure_children, martingale_csv, martingale_sample, Branch, ChannelFamily, MartingalePath,
    MAX_EXPLICIT_DEPTH,
};
pub use scatter::{scatter_csv, spread_point, spread_scatter, Sampler, ScatterPoint};

/// `# polarsum <version>` followed by one `# key=value` line per parameter.
pub fn comment_header(params: &[(&str, String)]) -> String {
    let mut s = format!("# polarsum {}\n", crate::VERSION);
    for (k, v) in params {
        s.push_str(&format!("# {k}={v}\n"));
    }
    s
}
