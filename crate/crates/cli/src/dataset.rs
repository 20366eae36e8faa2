//! Image-folder dataset export: `out/<split>/<class>/<sequence_id>.png`,
//! augmented train variants alongside, and an inventory of everything
//! written.
//!
//! The layout matches what image-classification training pipelines expect,
//! so the exported folder can feed any external trainer directly.

use std::fs;
use std::path::Path;

use chromatrace_core::augment::{apply_params, variant_params, AugmentParams, AugmentSpec};
use chromatrace_core::manifest::Split;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::write_png;
use crate::ingest::ManifestLoad;
use crate::pipeline::{encode_matrices, load_group, PipelineConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OutputKind {
    Original,
    Augmented { variant: usize, params: AugmentParams },
}

/// One file the export wrote, with enough provenance to trace it back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InventoryRecord {
    /// Path relative to the dataset root.
    pub path: String,
    pub split: Split,
    pub class_name: String,
    pub sequence_id: String,
    #[serde(flatten)]
    pub kind: OutputKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inventory {
    pub files: Vec<InventoryRecord>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DatasetBuildOptions {
    pub pipeline: PipelineConfig,
    /// Augmentation of train-split images; `count_per_image == 0` disables.
    pub augment: Option<AugmentSpec>,
    pub threads: Option<usize>,
}

fn sanitize_component(name: &str) -> String {
    name.chars()
        .map(|c| if matches!(c, '/' | '\\' | '\0') { '_' } else { c })
        .collect()
}

/// Run a closure inside a rayon pool of the requested size, or the global
/// pool when unspecified.
pub fn with_thread_pool<T: Send>(
    threads: Option<usize>,
    work: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        None => work(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(work),
    }
}

/// Encode every fusion group of the manifest into the image-folder layout
/// under `out_dir` and write `inventory.json`. Only train-split images get
/// augmented variants; group order in the inventory follows the manifest.
pub fn build_dataset(
    load: &ManifestLoad,
    options: &DatasetBuildOptions,
    out_dir: &Path,
) -> Result<Inventory> {
    let groups = load.manifest.fusion_groups();
    let records: Vec<Vec<InventoryRecord>> = with_thread_pool(options.threads, || {
        groups
            .par_iter()
            .enumerate()
            .map(|(group_index, group)| {
                let entry = group[0];
                let class_name = sanitize_component(load.manifest.class_name(entry.label));
                let id = sanitize_component(&entry.sequence_id);
                let rel_dir = format!("{}/{}", entry.split.name(), class_name);
                let matrices = load_group(load, group)?;
                let image = encode_matrices(&matrices, &options.pipeline)?;

                let mut written = Vec::new();
                let rel_path = format!("{rel_dir}/{id}.png");
                write_png(&image, &out_dir.join(&rel_path))?;
                written.push(InventoryRecord {
                    path: rel_path,
                    split: entry.split,
                    class_name: class_name.clone(),
                    sequence_id: entry.sequence_id.clone(),
                    kind: OutputKind::Original,
                });

                if entry.split == Split::Train {
                    if let Some(spec) = &options.augment {
                        for variant in 0..spec.count_per_image {
                            let params = variant_params(
                                spec,
                                image.width(),
                                image.height(),
                                group_index as u64,
                                variant as u64,
                            )?;
                            let augmented = apply_params(
                                &image,
                                &params,
                                options.pipeline.encoding.background,
                            )?;
                            let rel_path = format!("{rel_dir}/{id}.aug{variant}.png");
                            write_png(&augmented, &out_dir.join(&rel_path))?;
                            written.push(InventoryRecord {
                                path: rel_path,
                                split: entry.split,
                                class_name: class_name.clone(),
                                sequence_id: entry.sequence_id.clone(),
                                kind: OutputKind::Augmented { variant, params },
                            });
                        }
                    }
                }
                Ok(written)
            })
            .collect::<Result<_>>()
    })?;

    let inventory = Inventory { files: records.into_iter().flatten().collect() };
    let text = serde_json::to_string_pretty(&inventory)
        .map_err(|e| Error::format(out_dir.join("inventory.json"), e.to_string()))?;
    fs::write(out_dir.join("inventory.json"), text + "\n")
        .map_err(|e| Error::io(out_dir.join("inventory.json"), e))?;
    Ok(inventory)
}
