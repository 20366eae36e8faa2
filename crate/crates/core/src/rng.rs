//! Deterministic, counter-keyed pseudo-random streams.
//!
//! SplitMix64 underneath. A stream is keyed by a tuple of integers
//! (seed, item index, ...), so the values drawn for one item never depend
//! on how many values another item drew, on thread interleaving, or on
//! iteration order. Not cryptographic.

use crate::math;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub(crate) struct DetRng {
    state: u64,
}

impl DetRng {
    /// Derive a stream from a key tuple. Order of the parts matters.
    pub(crate) fn from_key(parts: &[u64]) -> Self {
        let mut state: u64 = 0x243F_6A88_85A3_08D3;
        for &p in parts {
            state ^= p;
            state = mix(state.wrapping_add(GOLDEN));
        }
        DetRng { state }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller. One draw per call.
    pub(crate) fn next_normal(&mut self) -> f64 {
        // u1 in (0, 1] so the log stays finite.
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
    }
}
