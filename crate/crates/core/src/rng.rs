//! The single documented pseudo-random source used by every experiment.
//!
//! Generator: SplitMix64 (64-bit state, golden-gamma increment
//! `0x9e3779b97f4a7c15`, Stafford "mix13" finaliser), seeded directly with the
//! user seed. Derived draws:
//!
//! * uniform `[0,1)`: `(next_u64() >> 11) * 2^-53`
//! * standard normal: Box–Muller cosine branch,
//!   `sqrt(-2 ln(1 - u1)) * cos(2π u2)` from two consecutive uniforms
//! * integer in `[lo, hi]`: `lo + next_u64() % (hi - lo + 1)`
//!
//! These formulas are simple enough to port bit-exactly to other languages.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::scalar::{ratio, Rational};

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: SplitMix64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: SplitMix64::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    /// Rational `p/q` with `q` in `1..=max_den` and value in `[-range, range]`.
    pub fn rational(&mut self, range: i64, max_den: i64) -> Rational {
        let q = self.int_in(1, max_den);
        let p = self.int_in(-range * q, range * q);
        ratio(p, q)
    }

    pub fn normals<const N: usize>(&mut self) -> [f64; N] {
        std::array::from_fn(|_| self.normal())
    }
}
