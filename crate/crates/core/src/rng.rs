//! Seeded random stream shared by every stochastic operator.

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic random stream. Two streams built from the same seed yield
/// identical draw sequences on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Real uniform draw on the closed interval `<a, b>`.
    pub fn uniform(&mut self, a: f64, b: f64) -> f64 {
        if a == b {
            return a;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Uniform::new_inclusive(lo, hi)
            .expect("finite interval")
            .sample(&mut self.rng)
    }

    /// Integer uniform draw on the closed interval `[a, b]`.
    pub fn int_inclusive(&mut self, a: i64, b: i64) -> i64 {
        debug_assert!(a <= b);
        self.rng.random_range(a..=b)
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n)
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        p > 0.0 && self.unit() < p
    }

    /// Draws `k` mutually distinct indices from `0..n`, none of them in `exclude`.
    pub fn distinct_indices(&mut self, n: usize, k: usize, exclude: &[usize]) -> Vec<usize> {
        let available = (0..n).filter(|i| !exclude.contains(i)).count();
        assert!(available >= k, "not enough indices to draw from");
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let i = self.index(n);
            if !exclude.contains(&i) && !out.contains(&i) {
                out.push(i);
            }
        }
        out
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `index` in a campaign started from `base_seed`.
///
/// `mix64` is a bijection, so distinct indices always give distinct seeds.
pub fn run_seed(base_seed: u64, index: u64) -> u64 {
    mix64(base_seed ^ mix64(index))
}
