//! Seeded random source shared by every generator.
//!
//! The stream comes from ChaCha8 (`rand_chacha`), whose output is fixed by the
//! seed on every platform. Uniform variates are built from the top 53 bits of a
//! `u64` draw; Gaussian variates use Box–Muller.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::Complex64;

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

impl SimRng {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn seed_from_u64(seed: u64) -> Self {
        SimRng { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the half-open interval [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval (lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.open01()
    }

    /// Uniform phase on [0, 2π).
    pub fn phase(&mut self) -> f64 {
        TWO_PI * self.unit()
    }

    /// Circularly-symmetric complex Gaussian with unit variance.
    pub fn complex_normal(&mut self) -> Complex64 {
        // Box–Muller: the radius sqrt(-2 ln u1) is scaled by 1/sqrt(2) per component.
        let radius = (-self.open01().ln()).sqrt();
        Complex64::from_polar(radius, TWO_PI * self.open01())
    }

    /// Standard Cauchy variate.
    pub fn cauchy(&mut self) -> f64 {
        (std::f64::consts::PI * (self.open01() - 0.5)).tan()
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed derivation used by the experiment harness:
/// `splitmix64(seed ^ (size_index · 0x9E3779B97F4A7C15) ^ (trial_index · 0xBF58476D1CE4E5B9))`
/// with wrapping multiplication.
pub fn mix64(seed: u64, size_index: u64, trial_index: u64) -> u64 {
    splitmix64(seed ^ size_index.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial_index.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}
