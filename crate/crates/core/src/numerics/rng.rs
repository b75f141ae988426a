use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Identifies an independent, reproducible random stream: a root seed plus a stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Derived stream for sub-task `index` of this stream.
    pub fn child(&self, index: u64) -> Self {
        let mixed = self.stream_index.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
            ^ index.wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        Self { seed: self.seed, stream_index: mixed }
    }

    pub fn rng(&self) -> StreamRng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(self.stream_index);
        StreamRng { inner }
    }
}

/// Generator bound to one [`RngStream`].
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    /// Uniform on [-1/2, 1/2).
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>() - 0.5
    }

    /// Standard normal deviate.
    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Complex normal with independent standard normal real and imaginary parts.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    /// Uniform integer in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
