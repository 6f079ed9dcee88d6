//! Seeded random source for simulation runs.
//!
//! The generator is xoshiro256++ seeded from a single `u64` through SplitMix64
//! (the reference seeding procedure). Every draw the simulation makes goes
//! through the helpers below, whose derivations from the raw 64-bit output are
//! fixed so that other implementations can replay a run exactly:
//!
//! * `unit()`     → `(next_u64 >> 11) · 2⁻⁵³`, uniform on `[0, 1)`
//! * `below(n)`   → Lemire's multiply-shift with rejection, uniform on `[0, n)`
//! * `coin()`     → `unit() < 0.5`
//! * `chance(p)`  → `unit() < p`
//! * `heading()`  → `360 · unit()`
//! * `shuffle(v)` → Fisher-Yates from the back, `j = below(i + 1)`

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: Xoshiro256PlusPlus,
}

impl SimRng {
    pub fn seed(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be non-zero.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
            }
        }
        (m >> 64) as u64
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.unit() < 0.5
    }

    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    #[inline]
    pub fn heading(&mut self) -> f64 {
        360.0 * self.unit()
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Standard normal deviate (Box-Muller, cosine branch; consumes two `unit()` draws).
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
