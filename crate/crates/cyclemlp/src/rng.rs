//! Deterministic random number generation.
//!
//! The generator is xoshiro256++ with its state filled by splitmix64 from a
//! 64-bit seed. Normal samples come from the Box-Muller transform, computed
//! in `f64` regardless of the tensor dtype, so the value stream for a given
//! seed is identical across platforms and across f32/f64 runs (up to the
//! final rounding into f32).

/// Splitmix64-seeded xoshiro256++ stream.
#[derive(Clone, Debug)]
pub struct Rng {
    state: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        let state = [
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
        ];
        Rng { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform sample in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). `n` must be positive; the modulo bias is
    /// negligible for the small ranges used here.
    pub fn next_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_below needs a positive upper bound");
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal sample via Box-Muller. Consumes two uniforms per call.
    pub fn normal(&mut self) -> f64 {
        // u1 in (0, 1] keeps the log finite.
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Derives an independent child stream. The parent advances by one draw.
    pub fn split(&mut self) -> Rng {
        Rng::new(self.next_u64())
    }
}
