//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed and a stream
//! number. Run `r` of an experiment uses seed `run_seed(base, r)`; within a
//! run, stream 0 generates the instance and the algorithm at position `a`
//! of the configured list draws from stream `a + 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Instance,
    Algorithm(usize),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Instance => 0,
            Stream::Algorithm(a) => a as u64 + 1,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}

/// SplitMix64 finalizer applied to `base + run`.
pub fn run_seed(base: u64, run: usize) -> u64 {
    let mut z = base.wrapping_add((run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
