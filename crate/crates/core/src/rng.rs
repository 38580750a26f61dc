//! Deterministic seeding and counter-based pair uniforms.
//!
//! Replicate seeds derive from a stable 64-bit hash of (master seed, index),
//! so results are independent of worker count and completion order. Edge
//! weights on implicit complete graphs come from a keyed mix of the pair
//! label, giving bit-exact symmetric weights with Θ(1) memory.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stafford "mix13" finalizer (the SplitMix64 output mix).
#[inline(always)]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Stable hash of `(master, index)` used to seed one replicate.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Generator owned by replicate `index` of an experiment.
pub fn replicate_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// Keyed uniforms on unordered vertex pairs.
#[derive(Debug, Clone, Copy)]
pub struct PairUniforms {
    seed: u64,
}

impl PairUniforms {
    pub fn new(seed: u64) -> Self {
        Self {
            seed: mix64(seed.wrapping_add(GOLDEN)),
        }
    }

    /// Raw mixed bits for the unordered pair `{i, j}`; symmetric in `i, j`.
    /// Larger bits correspond to larger uniforms.
    #[inline(always)]
    pub fn bits(&self, i: u32, j: u32) -> u64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let pack = (u64::from(lo) << 32) | u64::from(hi);
        mix64(self.seed ^ pack.wrapping_mul(GOLDEN))
    }

    /// Uniform in the open interval (0, 1) for the pair `{i, j}`.
    #[inline(always)]
    pub fn unit(&self, i: u32, j: u32) -> f64 {
        Self::bits_to_unit(self.bits(i, j))
    }

    /// Map mixed bits to (0, 1), monotone in the bits.
    #[inline(always)]
    pub fn bits_to_unit(bits: u64) -> f64 {
        ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}
