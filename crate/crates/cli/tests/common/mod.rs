//! Fixture matrices shared by the golden and acceptance suites.

// Each integration target compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use chromatrace_core::signal::flatten_skeleton;
use chromatrace_core::SignalMatrix;

/// 25 joints x 3 coords of all-zero frames: a 75 x 100 zero matrix with a
/// degenerate value range.
pub fn zero_skeleton() -> SignalMatrix {
    let frames = vec![vec![vec![0.0; 3]; 25]; 100];
    let joint_names: Vec<String> = (0..25).map(|j| format!("joint{j:02}")).collect();
    flatten_skeleton(&frames, &joint_names).unwrap()
}

/// 52 band signals of 120 samples, band j ramping from 0 to j+1.
pub fn csi_ramp() -> SignalMatrix {
    let rows: Vec<Vec<f64>> = (0..52)
        .map(|j| {
            (0..120)
                .map(|t| (j + 1) as f64 * t as f64 / 119.0)
                .collect()
        })
        .collect();
    let names: Vec<String> = (0..52).map(|j| format!("band_{j:02}")).collect();
    SignalMatrix::from_rows(names, rows).unwrap()
}

/// One signal, 256 samples, linear ramp: sample t lands exactly on
/// column t at the default 256-pixel width.
pub fn single_ramp() -> SignalMatrix {
    let row: Vec<f64> = (0..256).map(|t| t as f64).collect();
    SignalMatrix::from_rows(vec!["ramp".to_string()], vec![row]).unwrap()
}

/// Deterministic test-local generator, independent of the library's.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(2685821657736338717).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit_f64()
    }

    pub fn range_usize(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + (self.next_u64() as usize) % (hi_inclusive - lo + 1)
    }
}

/// Random valid matrix with N in [1, max_n], M in [1, max_m].
pub fn random_matrix(rng: &mut TestRng, max_n: usize, max_m: usize) -> SignalMatrix {
    let n = rng.range_usize(1, max_n);
    let m = rng.range_usize(1, max_m);
    let names: Vec<String> = (0..n).map(|j| format!("s{j}")).collect();
    let data: Vec<f64> = (0..n * m).map(|_| rng.range_f64(-100.0, 100.0)).collect();
    SignalMatrix::from_row_major(names, m, data).unwrap()
}
