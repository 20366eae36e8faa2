//! Property tests for the numeric core: resampling, statistics, reduction,
//! fusion, classification and augmentation invariants.

use chromatrace_core::augment::{augment_batch, AugmentSpec};
use chromatrace_core::classify::{featurize, knn_predict, FeatureVector};
use chromatrace_core::fuse::{fuse, FusePolicy};
use chromatrace_core::reduce::{
    apply_reduction, compute_tau, contribution_vector, ReductionConfig,
};
use chromatrace_core::render::{encode_image, EncodedImage, EncodingConfig};
use chromatrace_core::signal::{population_std, resample_linear};
use chromatrace_core::{ClassLabel, SignalMatrix};
use proptest::prelude::*;

fn finite_signal(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0e6..1.0e6f64, 1..max_len)
}

fn matrix_strategy() -> impl Strategy<Value = SignalMatrix> {
    (1usize..8, 1usize..40)
        .prop_flat_map(|(n, m)| {
            prop::collection::vec(-1.0e3..1.0e3f64, n * m).prop_map(move |data| {
                let names = (0..n).map(|j| format!("s{j}")).collect();
                SignalMatrix::from_row_major(names, m, data).unwrap()
            })
        })
}

/// Piecewise-linear interpolation by scanning segments; independent of the
/// index arithmetic in `resample_linear`.
fn brute_force_interp(signal: &[f64], target_len: usize) -> Vec<f64> {
    let m = signal.len();
    if m == 1 {
        return vec![signal[0]; target_len];
    }
    if target_len == 1 {
        return vec![signal[0]];
    }
    (0..target_len)
        .map(|i| {
            let t = i as f64 * (m - 1) as f64 / (target_len - 1) as f64;
            let mut lo = 0usize;
            while lo + 2 < m && (lo + 1) as f64 <= t {
                lo += 1;
            }
            let frac = t - lo as f64;
            signal[lo] + frac * (signal[lo + 1] - signal[lo])
        })
        .collect()
}

proptest! {
    #[test]
    fn resample_equal_length_is_identity(x in finite_signal(64)) {
        let len = x.len();
        prop_assert_eq!(resample_linear(&x, len).unwrap(), x);
    }

    #[test]
    fn resample_stays_within_input_bounds(x in finite_signal(64), len in 1usize..128) {
        let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in resample_linear(&x, len).unwrap() {
            prop_assert!(v >= lo && v <= hi, "{v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn resample_down_up_matches_interpolation_oracle(
        x in finite_signal(48),
        down in 1usize..24,
    ) {
        let down = down.min(x.len());
        let small = resample_linear(&x, down).unwrap();
        let back = resample_linear(&small, x.len()).unwrap();
        let oracle = brute_force_interp(&small, x.len());
        for (a, b) in back.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn std_is_translation_invariant(x in finite_signal(64), c in -1.0e6..1.0e6f64) {
        let base = population_std(&x).unwrap();
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let moved = population_std(&shifted).unwrap();
        prop_assert!((base - moved).abs() <= 1e-12 * base.max(1.0) + 1e-9,
            "{base} vs {moved}");
    }

    #[test]
    fn std_scales_linearly(x in finite_signal(64), a in -100.0..100.0f64) {
        let base = population_std(&x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| a * v).collect();
        let got = population_std(&scaled).unwrap();
        prop_assert!((got - a.abs() * base).abs() <= 1e-12 * got.max(1.0) + 1e-9,
            "{got} vs {}", a.abs() * base);
    }

    #[test]
    fn reduction_preserves_shape_and_is_idempotent(m in matrix_strategy(), tau in 0.0..2.0e3f64) {
        let mask = contribution_vector(&m, tau).unwrap();
        let once = apply_reduction(&m, &mask).unwrap();
        prop_assert_eq!(once.signal_count(), m.signal_count());
        prop_assert_eq!(once.sample_count(), m.sample_count());
        prop_assert_eq!(once.names(), m.names());
        let twice = apply_reduction(&once, &mask).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn tau_scales_and_mask_is_scale_invariant(m in matrix_strategy(), a in 0.01..100.0f64) {
        let cfg = ReductionConfig::default();
        let tau = compute_tau(&m, &cfg).unwrap();
        let mask = contribution_vector(&m, tau).unwrap();
        let scaled = SignalMatrix::from_row_major(
            m.names().to_vec(),
            m.sample_count(),
            m.as_slice().iter().map(|v| a * v).collect(),
        ).unwrap();
        let tau_scaled = compute_tau(&scaled, &cfg).unwrap();
        prop_assert!((tau_scaled - a * tau).abs() <= 1e-9 * tau_scaled.max(1.0));
        let mask_scaled = contribution_vector(&scaled, tau_scaled).unwrap();
        prop_assert_eq!(mask, mask_scaled);
    }

    #[test]
    fn fusion_is_associative_at_equal_lengths(
        a in matrix_strategy(),
    ) {
        let m = a.sample_count();
        let b = SignalMatrix::from_row_major(
            (0..2).map(|j| format!("t{j}")).collect(),
            m,
            (0..2 * m).map(|i| i as f64).collect(),
        ).unwrap();
        let c = SignalMatrix::from_row_major(
            vec!["u0".to_string()],
            m,
            (0..m).map(|i| -(i as f64)).collect(),
        ).unwrap();
        let flat = fuse(&[a.clone(), b.clone(), c.clone()], FusePolicy::InterpolateToMax).unwrap();
        let bc = fuse(&[b, c], FusePolicy::InterpolateToMax).unwrap();
        let nested = fuse(&[a, bc], FusePolicy::InterpolateToMax).unwrap();
        prop_assert_eq!(flat.as_slice(), nested.as_slice());
    }

    #[test]
    fn encoding_dims_and_determinism(m in matrix_strategy()) {
        let cfg = EncodingConfig { height: 24, width: 24, ..Default::default() };
        let a = encode_image(&m, &cfg).unwrap();
        let b = encode_image(&m, &cfg).unwrap();
        prop_assert_eq!(a.width(), 24);
        prop_assert_eq!(a.height(), 24);
        prop_assert_eq!(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn features_are_bounded(m in matrix_strategy(), side in 2usize..12) {
        let cfg = EncodingConfig { height: 24, width: 24, ..Default::default() };
        let img = encode_image(&m, &cfg).unwrap();
        let f = featurize(&img, side).unwrap();
        prop_assert_eq!(f.dims(), side * side);
        prop_assert!(f.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn knn_prediction_is_order_invariant(
        points in prop::collection::vec(
            ((-4i32..4, -4i32..4), 0usize..3),
            3..20,
        ),
        query in (-4i32..4, -4i32..4),
    ) {
        let train: Vec<(FeatureVector, ClassLabel)> = points
            .iter()
            .map(|((x, y), label)| {
                (FeatureVector { values: vec![*x as f64, *y as f64] }, ClassLabel(*label))
            })
            .collect();
        let q = FeatureVector { values: vec![query.0 as f64, query.1 as f64] };
        let baseline = knn_predict(&train, &q, 3).unwrap();
        let mut reversed = train.clone();
        reversed.reverse();
        prop_assert_eq!(knn_predict(&reversed, &q, 3).unwrap(), baseline);
    }

    #[test]
    fn augmentations_preserve_dimensions(
        seed in 0u64..1000,
        w in 8usize..40,
        h in 8usize..40,
    ) {
        let mut img = EncodedImage::filled(w, h, [0, 0, 0]);
        for y in 0..h {
            for x in 0..w {
                img.set_pixel(x, y, [(x % 256) as u8, (y % 256) as u8, 7]);
            }
        }
        let spec = AugmentSpec { count_per_image: 2, seed, ..Default::default() };
        for out in augment_batch(&[img], &spec, [0, 0, 0]).unwrap() {
            prop_assert_eq!(out.width(), w);
            prop_assert_eq!(out.height(), h);
        }
    }
}
