//! q-ary polar codes with kernel `[[1, 0], [c, 1]]`.

pub mod channel;
pub mod code;
pub mod construct;
pub mod decoder;

pub use channel::{mutual_information, one_step_transform, AdditiveChannel, FiniteChannel};
pub use code::{butterfly, PolarCode};
pub use construct::{
    cache_path, construct, load_or_construct, select_frozen, CacheStatus, ReliabilityProfile,
};
pub use decoder::{sc_decode, ScDecoder, ScOutput};
