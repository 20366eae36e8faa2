//! File formats, dataset export, evaluation and the `chromatrace` binary
//! around the `chromatrace-core` encoding pipeline.
//!
//! - [`ingest`]: sequence CSV and manifest JSON reading/writing
//! - [`imageio`]: 8-bit RGB PNG output (atomic) and input
//! - [`pipeline`]: reduce -> fuse -> encode over manifest entries
//! - [`dataset`]: image-folder export with train-only augmentation
//! - [`eval`]: end-to-end accuracy/confusion evaluation

pub mod dataset;
pub mod error;
pub mod eval;
pub mod imageio;
pub mod ingest;
pub mod pipeline;

pub use error::{Error, Result};
