//! Seed derivation and counter-based sampling.
//!
//! Every random quantity in the crate is a pure function of a 64-bit seed and
//! a tuple of integer indices, so results do not depend on evaluation order
//! or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a seed with a path of indices into a fresh seed.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(seed), |acc, &x| splitmix(acc ^ splitmix(x)))
}

/// Uniform element of `[0, p)` addressed by `(seed, stream, index)`.
///
/// Rejection sampling on the counter keeps the distribution exactly uniform.
pub fn counter_uniform(seed: u64, stream: u64, index: u64, p: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % p);
    let mut counter = 0u64;
    loop {
        let x = derive_seed(seed, &[stream, index, counter]);
        if x < zone {
            return x % p;
        }
        counter += 1;
    }
}

pub fn rng_for(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}
