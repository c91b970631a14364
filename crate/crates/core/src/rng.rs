//! Seeded random number generation.
//!
//! All randomized sampling in this crate goes through [`Xoshiro256`], an
//! xoshiro256** shift-register generator seeded by splitmix64 expansion of
//! a single `u64`. The generator is self-contained so that a given seed
//! produces the same stream on every platform and build.

/// xoshiro256** generator (Blackman & Vigna), seeded via splitmix64.
#[derive(Clone, Debug)]
pub struct Xoshiro256 {
    state: [u64; 4],
}

impl Xoshiro256 {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        Xoshiro256 {
            state: [next(), next(), next(), next()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.state[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.state[1] << 17;
        self.state[2] ^= self.state[0];
        self.state[3] ^= self.state[1];
        self.state[1] ^= self.state[2];
        self.state[0] ^= self.state[3];
        self.state[2] ^= t;
        self.state[3] = self.state[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal deviate via the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Spherically symmetric unit direction in `R^k` (normalized Gaussian).
    pub fn unit_vector(&mut self, k: usize) -> Vec<f64> {
        assert!(k > 0, "dimension must be positive");
        loop {
            let v: Vec<f64> = (0..k).map(|_| self.normal()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return v.iter().map(|x| x / norm).collect();
            }
        }
    }

    /// Dyadic rational in roughly `[-8192, 8192]` with step `2^-10`.
    ///
    /// Sums and differences of a handful of such values are exact in f64,
    /// which lets semigroup-law trials demand zero failures.
    pub fn dyadic(&mut self) -> f64 {
        let i = (self.next_u64() >> 40) as i64 - (1 << 23);
        i as f64 * (1.0 / 1024.0)
    }
}
