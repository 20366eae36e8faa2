//! Fusion of multiple signal matrices by row concatenation.
//!
//! Sources are resampled to a common length first, then stacked in order.
//! Works for multiple sensors (skeleton | inertial), multiple performers,
//! or added context channels alike.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::reduce::{reduce, ReductionConfig};
use crate::signal::{resample_linear, SignalMatrix};

/// How source lengths are harmonized before stacking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FusePolicy {
    /// Interpolate every source up to the longest length. Nothing is
    /// discarded.
    #[default]
    InterpolateToMax,
    /// Subsample every source down to the shortest length.
    SubsampleToMin,
}

/// Concatenate sources along the signal axis, tagging names as
/// `<tag>/<name>` to keep them distinct across sources.
pub fn fuse_tagged(sources: &[(&str, &SignalMatrix)], policy: FusePolicy) -> Result<SignalMatrix> {
    if sources.is_empty() {
        return Err(Error::EmptyFusion);
    }
    let lengths = sources.iter().map(|(_, m)| m.sample_count());
    let target = match policy {
        FusePolicy::InterpolateToMax => lengths.max().unwrap(),
        FusePolicy::SubsampleToMin => lengths.min().unwrap(),
    };
    let total_signals: usize = sources.iter().map(|(_, m)| m.signal_count()).sum();
    let mut names: Vec<String> = Vec::with_capacity(total_signals);
    let mut data: Vec<f64> = Vec::with_capacity(total_signals * target);
    for (tag, matrix) in sources {
        for (name, row) in matrix.names().iter().zip(matrix.signals()) {
            names.push(format!("{tag}/{name}"));
            if matrix.sample_count() == target {
                data.extend_from_slice(row);
            } else {
                data.extend_from_slice(&resample_linear(row, target)?);
            }
        }
    }
    SignalMatrix::from_row_major(names, target, data)
}

/// [`fuse_tagged`] with the source's position as its tag.
pub fn fuse(sources: &[SignalMatrix], policy: FusePolicy) -> Result<SignalMatrix> {
    let tags: Vec<String> = (0..sources.len()).map(|i| format!("{i}")).collect();
    let tagged: Vec<(&str, &SignalMatrix)> = tags
        .iter()
        .map(String::as_str)
        .zip(sources.iter())
        .collect();
    fuse_tagged(&tagged, policy)
}

/// Reduce each source on its own scale, then fuse.
///
/// Reduction after fusion would compare every signal against a threshold
/// driven by the largest-scale source, which can wipe out a smaller-scale
/// sensor entirely.
pub fn reduce_then_fuse(
    sources: &[(&str, &SignalMatrix)],
    reduction: &ReductionConfig,
    policy: FusePolicy,
) -> Result<SignalMatrix> {
    let mut reduced = Vec::with_capacity(sources.len());
    for (tag, matrix) in sources {
        let (r, _, _) = reduce(matrix, reduction)?;
        reduced.push((*tag, r));
    }
    let tagged: Vec<(&str, &SignalMatrix)> = reduced.iter().map(|(t, m)| (*t, m)).collect();
    fuse_tagged(&tagged, policy)
}
