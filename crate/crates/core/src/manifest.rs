//! Dataset manifests: which sequence file carries which label, and which
//! split it belongs to.
//!
//! A manifest references sequence files by relative path. Entries sharing a
//! `sequence_id` form a fusion group: their matrices are combined into one
//! sample before encoding (multiple performers or sensor modalities of the
//! same demonstration).

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::signal::{ClassLabel, SensorDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManifestEntry {
    /// Sequence file path, relative to the manifest location.
    pub path: String,
    pub label: ClassLabel,
    pub split: Split,
    pub sensor: SensorDescriptor,
    pub sequence_id: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetManifest {
    pub label_names: Vec<String>,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Structural checks: distinct non-empty label names, distinct paths,
    /// labels within the label set, non-empty sequence ids, and consistent
    /// label/split within each fusion group.
    pub fn validate(&self) -> Result<()> {
        if self.label_names.is_empty() {
            return Err(Error::NoLabelNames);
        }
        let mut seen_names = alloc::collections::BTreeSet::new();
        for name in &self.label_names {
            if !seen_names.insert(name.as_str()) {
                return Err(Error::DuplicateLabelName(name.clone()));
            }
        }
        let mut seen_paths = alloc::collections::BTreeSet::new();
        let mut group_meta = alloc::collections::BTreeMap::new();
        for entry in &self.entries {
            if !seen_paths.insert(entry.path.as_str()) {
                return Err(Error::DuplicateManifestPath(entry.path.clone()));
            }
            if entry.sequence_id.is_empty() {
                return Err(Error::EmptySequenceId);
            }
            if entry.label.index() >= self.label_names.len() {
                return Err(Error::LabelOutOfRange {
                    label: entry.label.index(),
                    classes: self.label_names.len(),
                });
            }
            let meta = (entry.label, entry.split);
            if *group_meta.entry(entry.sequence_id.as_str()).or_insert(meta) != meta {
                return Err(Error::InconsistentFusionGroup(entry.sequence_id.clone()));
            }
        }
        Ok(())
    }

    pub fn class_name(&self, label: ClassLabel) -> &str {
        &self.label_names[label.index()]
    }

    pub fn class_count(&self) -> usize {
        self.label_names.len()
    }

    /// Entries grouped by `sequence_id`, preserving first-appearance order
    /// of groups and manifest order within each group.
    pub fn fusion_groups(&self) -> Vec<Vec<&ManifestEntry>> {
        let mut order: Vec<&str> = Vec::new();
        let mut groups: alloc::collections::BTreeMap<&str, Vec<&ManifestEntry>> =
            alloc::collections::BTreeMap::new();
        for entry in &self.entries {
            let bucket = groups.entry(entry.sequence_id.as_str()).or_default();
            if bucket.is_empty() {
                order.push(entry.sequence_id.as_str());
            }
            bucket.push(entry);
        }
        order.into_iter().map(|id| groups.remove(id).unwrap()).collect()
    }

    pub fn split_entries(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }

    /// Eval workflows need at least one group per split.
    pub fn check_has_both_splits(&self) -> Result<()> {
        if self.split_entries(Split::Test).next().is_none() {
            return Err(Error::EmptyTestSplit);
        }
        if self.split_entries(Split::Train).next().is_none() {
            return Err(Error::EmptyTrainSplit);
        }
        Ok(())
    }
}
