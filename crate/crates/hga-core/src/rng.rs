//! Small deterministic generator for witness search and test data.
//!
//! Counter-based splitmix64: output `i` is the splitmix64 finalizer applied to
//! `seed + i * GAMMA`. Same stream as sequential splitmix64 seeded with `seed`,
//! but stateless apart from the counter, so runs are reproducible and cheap to
//! fork.

use crate::math;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
    stash: Option<f64>,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            seed,
            counter: 0,
            stash: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let mut z = self.seed.wrapping_add(self.counter.wrapping_mul(GAMMA));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Log-uniform in `[lo, hi)`; both ends must be positive.
    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        math::exp(self.range(math::ln(lo), math::ln(hi)))
    }

    /// Uniform index in `0..n` (Lemire reduction; `n` must be nonzero).
    pub fn index(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal via the Marsaglia polar method (needs only ln, sqrt).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.stash.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = math::sqrt(-2.0 * math::ln(s) / s);
                self.stash = Some(v * m);
                return u * m;
            }
        }
    }
}
