//! Counter-based random streams for reproducible Monte Carlo runs.
//!
//! Each trial owns an independent ChaCha8 stream keyed by
//! `(master_seed, point_index, trial_index)`, so results are bit-identical
//! regardless of how trials are scheduled across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// splitmix64 output function; good avalanche on 64-bit keys.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for one trial of one parameter point.
///
/// The raw `point` and `trial` words go into the key verbatim, so distinct
/// (master, point, trial) triples always yield distinct 256-bit keys.
pub fn trial_rng(master: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let words = [
        mix(master),
        point ^ mix(master.rotate_left(17)),
        trial ^ mix(master.rotate_left(43)),
        mix(master ^ mix(point) ^ mix(trial).rotate_left(23)),
    ];
    let mut seed = [0u8; 32];
    for (chunk, w) in seed.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Uniform draw in [0, 1) with 53 random bits.
#[inline]
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Bernoulli sampler with a precomputed 64-bit threshold.
///
/// One `next_u64` per draw: `true` iff the draw falls below `p * 2^64`.
#[derive(Clone, Copy, Debug)]
pub struct Bernoulli {
    threshold: u64,
    always: bool,
}

impl Bernoulli {
    /// `p` outside [0, 1] is an error.
    pub fn new(p: f64) -> Result<Self, crate::ring::RingError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(crate::ring::RingError::InvalidProbability(p));
        }
        if p >= 1.0 {
            return Ok(Self { threshold: 0, always: true });
        }
        // p < 1 so p * 2^64 < 2^64; the cast cannot saturate.
        Ok(Self { threshold: (p * 1.844_674_407_370_955_2e19) as u64, always: false })
    }

    #[inline]
    pub fn sample(&self, rng: &mut impl RngCore) -> bool {
        self.always || rng.next_u64() < self.threshold
    }
}
