//! Reproducible random streams.
//!
//! Every run draws from its own ChaCha8 stream selected by
//! `(master seed, run index)`, so sweeps give identical results no matter how
//! many workers execute them or in which order jobs complete.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream `index` of the generator keyed by `master`.
pub fn run_rng(master: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// SplitMix64 finaliser, used to derive child seeds from a parent and a tag.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child master seed for a labelled sub-experiment (for example one `f` value).
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    mix(master ^ mix(tag))
}

/// Child seed keyed by a concentration value.
pub fn seed_for_f(master: u64, f: f64) -> u64 {
    derive_seed(master, f.to_bits())
}
