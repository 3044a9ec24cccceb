//! Seeded randomness for the samplers.

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Exp1};
use rand_xoshiro::Xoshiro256PlusPlus;

/// A seeded pseudo-random generator owned by exactly one sampler.
///
/// The same seed and the same sequence of calls always yield the same
/// outputs. The generator is not cryptographically secure.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: Xoshiro256PlusPlus,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// The seed this source was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A uniform draw from the open interval (0, 1).
    ///
    /// Uses the top 52 bits of one output word and centres the value in its
    /// grid cell, so neither 0 nor 1 can be produced. (With 53 bits the top
    /// cell centre rounds up to 1.0.)
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
        ((self.rng.next_u64() >> 12) as f64 + 0.5) * SCALE
    }

    /// A uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// A fresh seed for a derived generator.
    #[inline]
    pub fn next_seed(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// A standard exponential variate.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        Exp1.sample(&mut self.rng)
    }
}

impl RngCore for RandomSource {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// SplitMix64 finalizer, used to derive independent seeds from a master seed.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
