//! Counter-based deterministic random streams.
//!
//! Every stream is identified by a 64-bit key derived from a key schedule of
//! words (seed, suite tag, dimension, count, trial index, role tag). The
//! `i`-th output of a stream (counting from 0) is
//!
//! ```text
//! out(i) = mix64(key + (i + 1) · 0x9E3779B97F4A7C15)      (wrapping)
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) · 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! so a stream is exactly SplitMix64 started from state `key`. Keys are
//! derived by folding words into `k₀ = 0x6A09E667F3BCC909`:
//! `k ← mix64(k ^ word)`. String tags enter as their 64-bit FNV-1a hash.
//!
//! Conversions:
//! - uniform in `[0, 1)`: `(out >> 11) · 2⁻⁵³`
//! - uniform in `(0, 1]`: `((out >> 11) + 1) · 2⁻⁵³`
//! - Box–Muller: draw `u₁ ∈ (0, 1]` then `u₂ ∈ [0, 1)`;
//!   `ρ = √(−2 ln u₁)`, `z₀ = ρ cos(2πu₂)`, `z₁ = ρ sin(2πu₂)`
//! - standard complex Gaussian: `(z₀ + i z₁)/√2`, so `E|z|² = 1`

use num_complex::Complex64;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_INIT: u64 = 0x6A09_E667_F3BC_C909;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xCBF2_9CE4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

/// Folds key-schedule words into a stream key.
pub fn derive_key(words: &[u64]) -> u64 {
    words.iter().fold(KEY_INIT, |k, &w| mix64(k ^ w))
}

/// One deterministic substream.
#[derive(Clone, Debug)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn from_key(key: u64) -> Self {
        Self { key, counter: 0 }
    }

    /// Stream for `role` within trial `trial` of a grid cell.
    pub fn for_role(seed: u64, suite: &str, dim: usize, count: usize, trial: u64, role: &str) -> Self {
        Self::from_key(derive_key(&[
            seed,
            fnv1a64(suite.as_bytes()),
            dim as u64,
            count as u64,
            trial,
            fnv1a64(role.as_bytes()),
        ]))
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`.
    #[inline]
    pub fn uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let rho = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (rho * theta.cos(), rho * theta.sin())
    }

    /// Standard complex Gaussian with `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let (a, b) = self.normal_pair();
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// `e^{iθ}` with `θ` uniform in `[0, 2π)`.
    pub fn unimodular(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.uniform())
    }
}
