//! Seeded pseudo-randomness used by the random channel generator and the
//! guessing-game simulator.
//!
//! The generator is SplitMix64, spelled out here so that a seed reproduces the
//! same stream in any implementation of this tool:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Floats in `[0, 1)` take the top 53 bits: `(output >> 11) * 2⁻⁵³`.
//! Unit vectors use the cylinder map `z = 2u₁ − 1`, `φ = 2π·u₂`.
//! Derived streams (one per simulated state, one per random rotation, ...)
//! are seeded with `mix(seed, index)` below, never by consuming the parent
//! stream, so sharding cannot change the results.

use crate::model::BlochVector;

const GAMMA: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform point of the unit sphere.
    pub fn unit_vector(&mut self) -> BlochVector {
        let z = 2.0 * self.next_f64() - 1.0;
        let phi = 2.0 * std::f64::consts::PI * self.next_f64();
        let s = (1.0 - z * z).max(0.0).sqrt();
        BlochVector::new(s * phi.cos(), s * phi.sin(), z)
    }

    /// Uniform index in `0..len` by rejection, so the distribution is exact.
    pub fn next_index(&mut self, len: usize) -> usize {
        assert!(len > 0);
        let len = len as u64;
        let zone = u64::MAX - (u64::MAX % len);
        loop {
            let v = self.next_u64();
            if v < zone {
                return (v % len) as usize;
            }
        }
    }
}

/// Deterministic sub-seed for stream `index` of a run seeded with `seed`.
pub fn mix(seed: u64, index: u64) -> u64 {
    let mut rng = SplitMix64::new(seed ^ index.wrapping_mul(GAMMA).wrapping_add(1));
    rng.next_u64()
}
