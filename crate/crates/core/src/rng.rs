//! Seeded random streams.
//!
//! Every Monte Carlo loop in the crate pulls its randomness from a stream
//! keyed by `(seed, stream_id)`. The key selects a ChaCha8 keystream (shared
//! seed-derived key, 64-bit stream word), whose first 32 bytes seed a
//! xoshiro256++ generator. The keystreams never overlap, and nothing depends
//! on how work is scheduled across threads; xoshiro keeps the inner Monte
//! Carlo loops cheap.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// The random stream type used throughout the crate.
pub type Stream = Xoshiro256PlusPlus;

/// Returns the stream identified by `(seed, stream_id)`.
pub fn derive_stream(seed: u64, stream_id: u64) -> Stream {
    let mut key = ChaCha8Rng::seed_from_u64(seed);
    key.set_stream(stream_id);
    let mut state = [0u8; 32];
    key.fill_bytes(&mut state);
    Xoshiro256PlusPlus::from_seed(state)
}

/// Packs an experiment tag and a trial index into one stream id.
///
/// The upper 24 bits carry the tag so that distinct experiments run under
/// the same seed draw from disjoint streams.
pub fn stream_id(tag: u32, index: u64) -> u64 {
    debug_assert!(index < (1 << 40));
    (u64::from(tag & 0xff_ffff) << 40) | (index & ((1 << 40) - 1))
}
