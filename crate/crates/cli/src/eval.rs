//! End-to-end evaluation: ingest -> reduce -> fuse -> encode -> featurize
//! -> classify, reported as accuracy and a confusion matrix.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chromatrace_core::classify::{evaluate_features, featurize, ClassifierKind, FeatureVector};
use chromatrace_core::manifest::Split;
use chromatrace_core::ClassLabel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::with_thread_pool;
use crate::error::{Error, Result};
use crate::ingest::ManifestLoad;
use crate::pipeline::{encode_matrices, load_group, PipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalOptions {
    pub pipeline: PipelineConfig,
    pub classifier: ClassifierKind,
    pub feature_side: usize,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            pipeline: PipelineConfig::default(),
            classifier: ClassifierKind::default(),
            feature_side: 32,
            threads: None,
        }
    }
}

/// The eval report as emitted on stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub label_names: Vec<String>,
    #[serde(flatten)]
    pub report: chromatrace_core::classify::EvalReport,
}

/// Evaluate a manifest's test split against its train split.
///
/// Test sequences are encoded with the same pipeline as train ones and are
/// never augmented; the classifier sees test features only, labels enter
/// when the report is assembled.
pub fn evaluate_manifest(load: &ManifestLoad, options: &EvalOptions) -> Result<EvalOutput> {
    load.manifest.check_has_both_splits()?;
    let groups = load.manifest.fusion_groups();
    let features: Vec<(FeatureVector, ClassLabel, Split)> =
        with_thread_pool(options.threads, || {
            groups
                .par_iter()
                .map(|group| {
                    let matrices = load_group(load, group)?;
                    let image = encode_matrices(&matrices, &options.pipeline)?;
                    let feature = featurize(&image, options.feature_side)?;
                    Ok((feature, group[0].label, group[0].split))
                })
                .collect::<Result<_>>()
        })?;

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (feature, label, split) in features {
        match split {
            Split::Train => train.push((feature, label)),
            Split::Test => test.push((feature, label)),
        }
    }
    let report = evaluate_features(
        &train,
        &test,
        load.manifest.class_count(),
        options.classifier,
    )?;
    Ok(EvalOutput {
        label_names: load.manifest.label_names.clone(),
        report,
    })
}

/// Plain-text table of the report for human eyes.
pub fn render_table(output: &EvalOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "accuracy {:.2}% over {} test / {} train sequences",
        output.report.accuracy * 100.0,
        output.report.n_test,
        output.report.n_train
    );
    let width = output
        .label_names
        .iter()
        .map(|n| n.len())
        .max()
        .unwrap_or(5)
        .max(5);
    for (name, acc) in output.label_names.iter().zip(&output.report.per_class_accuracy) {
        match acc {
            Some(a) => {
                let _ = writeln!(s, "  {name:<width$}  {:6.2}%", a * 100.0);
            }
            None => {
                let _ = writeln!(s, "  {name:<width$}  (no test samples)");
            }
        }
    }
    s
}

/// Confusion matrix as CSV: header row of predicted labels, one row per
/// true label.
pub fn write_confusion_csv(output: &EvalOutput, path: &Path) -> Result<()> {
    let mut text = String::new();
    text.push_str("true\\predicted");
    for name in &output.label_names {
        let _ = write!(text, ",{name}");
    }
    text.push('\n');
    for (name, row) in output.label_names.iter().zip(&output.report.confusion_matrix) {
        let _ = write!(text, "{name}");
        for count in row {
            let _ = write!(text, ",{count}");
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
