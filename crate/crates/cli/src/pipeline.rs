//! The reduce -> fuse -> encode pipeline applied to manifest entries.

use std::path::Path;

use chromatrace_core::fuse::{fuse_tagged, FusePolicy};
use chromatrace_core::manifest::ManifestEntry;
use chromatrace_core::reduce::{reduce, ReductionConfig};
use chromatrace_core::render::{encode_image, EncodedImage, EncodingConfig};
use chromatrace_core::SignalMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ingest::{load_sequence_csv, ManifestLoad};

/// Everything needed to turn raw matrices into images.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub reduction: ReductionConfig,
    pub fuse_policy: FusePolicy,
    pub encoding: EncodingConfig,
}

/// Reduce each source on its own scale, fuse when there are several, and
/// encode. Single-source groups skip fusion.
pub fn encode_matrices(sources: &[SignalMatrix], config: &PipelineConfig) -> Result<EncodedImage> {
    let mut reduced = Vec::with_capacity(sources.len());
    for matrix in sources {
        let (r, _, _) = reduce(matrix, &config.reduction)?;
        reduced.push(r);
    }
    let combined;
    let to_encode = if reduced.len() == 1 {
        &reduced[0]
    } else {
        let tags: Vec<String> = (0..reduced.len()).map(|i| i.to_string()).collect();
        let tagged: Vec<(&str, &SignalMatrix)> = tags
            .iter()
            .map(String::as_str)
            .zip(reduced.iter())
            .collect();
        combined = fuse_tagged(&tagged, config.fuse_policy)?;
        &combined
    };
    Ok(encode_image(to_encode, &config.encoding)?)
}

/// Load every sequence file of one fusion group, checking each file's
/// signal count against its entry's sensor layout.
pub fn load_group(load: &ManifestLoad, group: &[&ManifestEntry]) -> Result<Vec<SignalMatrix>> {
    group
        .iter()
        .map(|entry| {
            load_sequence_csv(
                &load.sequence_path(entry),
                entry.sensor.expected_signals(),
            )
        })
        .collect()
}

/// One sequence CSV straight to an image (the `encode` subcommand path).
pub fn encode_csv_file(path: &Path, config: &PipelineConfig) -> Result<EncodedImage> {
    let matrix = load_sequence_csv(path, None)?;
    encode_matrices(&[matrix], config)
}

/// How a fusion policy reads on the command line.
pub fn fuse_policy_name(policy: FusePolicy) -> &'static str {
    match policy {
        FusePolicy::InterpolateToMax => "interpolate-to-max",
        FusePolicy::SubsampleToMin => "subsample-to-min",
    }
}
