//! Variance-threshold signal reduction.
//!
//! Signals whose standard deviation falls below a threshold tau are zeroed
//! (not removed), so their identity color still shows up as a flat line in
//! the rendered image.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::signal::{population_std, SignalMatrix};

/// What the threshold ratio is taken relative to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TauBasis {
    /// tau = ratio * max over signals of sigma(s_j). Keeps tau in the same
    /// units as the quantity it is compared against.
    #[default]
    MaxSigma,
    /// tau = ratio * max over all samples of |S_ij|.
    MaxAbsValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ReductionConfig {
    pub enabled: bool,
    pub tau_ratio: f64,
    pub tau_basis: TauBasis,
    /// Dataset-global threshold supplied by the caller; bypasses
    /// `compute_tau` when set.
    pub explicit_tau: Option<f64>,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            enabled: true,
            tau_ratio: 0.2,
            tau_basis: TauBasis::MaxSigma,
            explicit_tau: None,
        }
    }
}

impl ReductionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tau_ratio) || !self.tau_ratio.is_finite() {
            return Err(Error::InvalidTauRatio(self.tau_ratio));
        }
        Ok(())
    }
}

/// Per-signal contribution mask: `true` where the signal passes the
/// threshold and is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContributionVector(Vec<bool>);

impl ContributionVector {
    pub fn new(mask: Vec<bool>) -> Self {
        ContributionVector(mask)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contributes(&self, signal: usize) -> bool {
        self.0[signal]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn kept_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Threshold from the configured ratio and basis. All-zero matrices give 0.
pub fn compute_tau(matrix: &SignalMatrix, config: &ReductionConfig) -> Result<f64> {
    config.validate()?;
    let scale = match config.tau_basis {
        TauBasis::MaxSigma => {
            let mut max_sigma = 0.0f64;
            for row in matrix.signals() {
                max_sigma = max_sigma.max(population_std(row)?);
            }
            max_sigma
        }
        TauBasis::MaxAbsValue => matrix
            .as_slice()
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(math::abs(v))),
    };
    Ok(config.tau_ratio * scale)
}

/// Per-signal decision: kept iff sigma(s_j) >= tau (inclusive).
pub fn contribution_vector(matrix: &SignalMatrix, tau: f64) -> Result<ContributionVector> {
    let mut mask = Vec::with_capacity(matrix.signal_count());
    for row in matrix.signals() {
        mask.push(population_std(row)? >= tau);
    }
    Ok(ContributionVector(mask))
}

/// Zero out the signals the mask rejects. Shape and names are unchanged.
pub fn apply_reduction(
    matrix: &SignalMatrix,
    mask: &ContributionVector,
) -> Result<SignalMatrix> {
    if mask.len() != matrix.signal_count() {
        return Err(Error::MaskLengthMismatch {
            mask: mask.len(),
            signals: matrix.signal_count(),
        });
    }
    let m = matrix.sample_count();
    let mut data = matrix.as_slice().to_vec();
    for (j, &keep) in mask.as_slice().iter().enumerate() {
        if !keep {
            data[j * m..(j + 1) * m].fill(0.0);
        }
    }
    SignalMatrix::from_row_major(matrix.names().to_vec(), m, data)
}

/// Threshold, mask and zero in one step, honoring `enabled` and
/// `explicit_tau`. Returns the reduced matrix together with the mask and
/// the threshold that was applied.
pub fn reduce(
    matrix: &SignalMatrix,
    config: &ReductionConfig,
) -> Result<(SignalMatrix, ContributionVector, f64)> {
    config.validate()?;
    if !config.enabled {
        let mask = ContributionVector(alloc::vec![true; matrix.signal_count()]);
        return Ok((matrix.clone(), mask, 0.0));
    }
    let tau = match config.explicit_tau {
        Some(t) => t,
        None => compute_tau(matrix, config)?,
    };
    let mask = contribution_vector(matrix, tau)?;
    let reduced = apply_reduction(matrix, &mask)?;
    Ok((reduced, mask, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;
    use alloc::vec;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("s{i}")).collect()
    }

    fn two_pass_std(signal: &[f64]) -> f64 {
        let m = signal.len() as f64;
        let mean = signal.iter().sum::<f64>() / m;
        math::sqrt(signal.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m)
    }

    #[test]
    fn tau_from_max_sigma() {
        // Row sigmas are 0 and 5 by construction; check with the oracle.
        let rows = vec![vec![3.0, 3.0, 3.0, 3.0], vec![5.0, -5.0, 5.0, -5.0]];
        assert_eq!(two_pass_std(&rows[0]), 0.0);
        assert_eq!(two_pass_std(&rows[1]), 5.0);
        let m = SignalMatrix::from_rows(names(2), rows).unwrap();
        let tau = compute_tau(&m, &ReductionConfig::default()).unwrap();
        assert!((tau - 1.0).abs() < 1e-15, "{tau}");
    }

    #[test]
    fn tau_of_all_zero_matrix_is_zero() {
        let m = SignalMatrix::from_rows(names(3), vec![vec![0.0; 4]; 3]).unwrap();
        for basis in [TauBasis::MaxSigma, TauBasis::MaxAbsValue] {
            let cfg = ReductionConfig { tau_basis: basis, ..Default::default() };
            assert_eq!(compute_tau(&m, &cfg).unwrap(), 0.0);
        }
    }

    #[test]
    fn tau_from_max_abs_value() {
        let m = SignalMatrix::from_rows(
            names(2),
            vec![vec![-3.0, 0.5], vec![2.0, 1.0]],
        )
        .unwrap();
        let cfg = ReductionConfig { tau_basis: TauBasis::MaxAbsValue, ..Default::default() };
        let tau = compute_tau(&m, &cfg).unwrap();
        assert!((tau - 0.6).abs() < 1e-15, "{tau}");
    }

    #[test]
    fn tau_ratio_out_of_range_errors() {
        let m = SignalMatrix::from_rows(names(1), vec![vec![0.0]]).unwrap();
        let cfg = ReductionConfig { tau_ratio: 1.5, ..Default::default() };
        assert_eq!(compute_tau(&m, &cfg), Err(Error::InvalidTauRatio(1.5)));
    }

    #[test]
    fn contribution_compares_sigma_against_tau() {
        // Row sigmas 10, 3, 1 checked against the oracle first.
        let rows = vec![
            vec![10.0, -10.0],
            vec![3.0, -3.0],
            vec![1.0, -1.0],
        ];
        for (row, want) in rows.iter().zip([10.0, 3.0, 1.0]) {
            assert_eq!(two_pass_std(row), want);
        }
        let m = SignalMatrix::from_rows(names(3), rows).unwrap();
        let c = contribution_vector(&m, 2.0).unwrap();
        assert_eq!(c.as_slice(), &[true, true, false]);
    }

    #[test]
    fn zero_tau_keeps_everything() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![0.0; 3], vec![1.0; 3]]).unwrap();
        let c = contribution_vector(&m, 0.0).unwrap();
        assert_eq!(c.kept_count(), 2);
    }

    #[test]
    fn constant_rows_are_dropped_for_positive_tau() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![4.0; 5], vec![-2.0; 5]]).unwrap();
        let c = contribution_vector(&m, 1e-9).unwrap();
        assert_eq!(c.kept_count(), 0);
    }

    #[test]
    fn reduction_masks_rows() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let out = apply_reduction(&m, &ContributionVector::new(vec![true, false])).unwrap();
        assert_eq!(out.signal(0), &[1.0, 2.0]);
        assert_eq!(out.signal(1), &[0.0, 0.0]);
        assert_eq!(out.names(), m.names());
    }

    #[test]
    fn all_ones_mask_is_identity() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let out = apply_reduction(&m, &ContributionVector::new(vec![true, true])).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn all_zeros_mask_keeps_names() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let out = apply_reduction(&m, &ContributionVector::new(vec![false, false])).unwrap();
        assert!(out.as_slice().iter().all(|&v| v == 0.0));
        assert_eq!(out.names(), m.names());
    }

    #[test]
    fn mask_length_mismatch_errors() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(
            apply_reduction(&m, &ContributionVector::new(vec![true])),
            Err(Error::MaskLengthMismatch { mask: 1, signals: 2 })
        );
    }

    #[test]
    fn reduction_is_idempotent() {
        let m = SignalMatrix::from_rows(
            names(3),
            vec![vec![1.0, 5.0, -2.0], vec![0.5; 3], vec![9.0, 0.0, 9.0]],
        )
        .unwrap();
        let mask = ContributionVector::new(vec![true, false, true]);
        let once = apply_reduction(&m, &mask).unwrap();
        let twice = apply_reduction(&once, &mask).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn disabled_reduction_passes_through() {
        let m = SignalMatrix::from_rows(names(2), vec![vec![0.0; 3], vec![1.0, 2.0, 3.0]]).unwrap();
        let cfg = ReductionConfig { enabled: false, ..Default::default() };
        let (out, mask, tau) = reduce(&m, &cfg).unwrap();
        assert_eq!(out, m);
        assert_eq!(mask.kept_count(), 2);
        assert_eq!(tau, 0.0);
    }

    #[test]
    fn explicit_tau_overrides_computed() {
        let m = SignalMatrix::from_rows(
            names(2),
            vec![vec![10.0, -10.0], vec![1.0, -1.0]],
        )
        .unwrap();
        let cfg = ReductionConfig { explicit_tau: Some(0.5), ..Default::default() };
        let (_, mask, tau) = reduce(&m, &cfg).unwrap();
        assert_eq!(tau, 0.5);
        // Computed tau would have been 2.0 and dropped the second row.
        assert_eq!(mask.kept_count(), 2);
    }

    #[test]
    fn max_sigma_mask_is_scale_invariant() {
        let rows = vec![
            vec![0.3, -0.1, 0.25, 0.0],
            vec![0.01, 0.02, 0.015, 0.01],
            vec![1.0, -1.0, 0.5, 0.0],
        ];
        let m = SignalMatrix::from_rows(names(3), rows.clone()).unwrap();
        let scaled = SignalMatrix::from_rows(
            names(3),
            rows.iter()
                .map(|r| r.iter().map(|v| v * 37.5).collect())
                .collect(),
        )
        .unwrap();
        let cfg = ReductionConfig::default();
        let (_, mask_a, tau_a) = reduce(&m, &cfg).unwrap();
        let (_, mask_b, tau_b) = reduce(&scaled, &cfg).unwrap();
        assert_eq!(mask_a, mask_b);
        assert!((tau_b - tau_a * 37.5).abs() < 1e-12 * tau_b.abs().max(1.0));
    }
}
