//! Deterministic counter-based pseudo-random numbers.
//!
//! Measurement sampling uses a pure function of (seed, shot index), so
//! results are bit-identical across runs and platforms and independent of
//! how shots are batched. The mixer is SplitMix64 (Steele et al., "Fast
//! splittable pseudorandom number generators").

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The n-th output of the SplitMix64 stream with the given seed.
///
/// Pure in (seed, n): evaluating outputs out of order or in parallel gives
/// the same values as walking the stream sequentially.
#[inline]
pub fn split_mix(seed: u64, n: u64) -> u64 {
    mix(seed.wrapping_add(n.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Uniform f64 in [0, 1) from the n-th stream output.
#[inline]
pub fn unit_f64(seed: u64, n: u64) -> f64 {
    // 53 high bits -> [0, 1)
    (split_mix(seed, n) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential convenience wrapper over the same stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    seed: u64,
    counter: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = split_mix(self.seed, self.counter);
        self.counter += 1;
        v
    }

    pub fn next_f64(&mut self) -> f64 {
        let v = unit_f64(self.seed, self.counter);
        self.counter += 1;
        v
    }
}
