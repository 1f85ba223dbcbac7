//! Reproducible uniform stream backing every Bernoulli draw.
//!
//! The generator is xoshiro256** seeded from a `u64` through SplitMix64
//! (the reference seeding procedure), and uniforms are the top 53 bits of
//! each output scaled by 2^-53. Both pieces are fully specified, so the
//! stream can be reproduced bit-exactly outside Rust.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const UNIFORM_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256StarStar,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            inner: Xoshiro256StarStar::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniforms consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Next uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        (self.inner.next_u64() >> 11) as f64 * UNIFORM_SCALE
    }
}
