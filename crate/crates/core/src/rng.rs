//! Deterministic random streams.
//!
//! All randomness in the workbench flows through [`SplitMix64`]: a counter
//! keyed by a 64-bit seed, with one output per counter increment. A trial's
//! stream is derived from `(master_seed, trial_index)` via [`derive_seed`],
//! so trial results are reproducible and independent of execution order.
//! Gaussian variates use the Box–Muller transform from two uniform draws.

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

/// SplitMix64 stream (Steele, Lea, Flood 2014 mixing function).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in the half-open interval [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box–Muller on two uniform draws.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = (1.0 - self.next_f64()).max(f64::MIN_POSITIVE); // avoid ln(0)
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
    }

    /// Complex standard normal (independent real and imaginary parts).
    pub fn gaussian_c64(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    pub fn next_usize(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }
}

/// Per-trial seed derived from a master seed and trial index.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut mix = SplitMix64::new(master_seed ^ trial_index.wrapping_mul(0xd1b54a32d192ed03));
    mix.next_u64()
}
