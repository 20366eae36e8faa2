//! Turn multivariate sensor time series into discriminative RGB images.
//!
//! The pipeline: zero out low-variance signals ([`reduce`]), concatenate
//! sources after resampling to a common length ([`fuse`]), then draw every
//! signal as a colored polyline with a white-to-hue temporal gradient
//! ([`render`]). [`augment`] provides deterministic image-space variants
//! for training, [`classify`] a small feature/k-NN stack for measuring how
//! separable the encodings are, and [`synth`] a seeded generator of labeled
//! sequences with known class structure.
//!
//! The crate is `no_std` + `alloc` compatible (disable the default `std`
//! feature); file formats, PNG output and the CLI live in the companion
//! `chromatrace` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod augment;
pub mod classify;
pub mod error;
pub mod fuse;
pub mod manifest;
mod math;
pub mod reduce;
pub mod render;
mod rng;
pub mod signal;
pub mod synth;

pub use error::{Error, Result};
pub use signal::{ClassLabel, RangeMode, SensorDescriptor, SequenceRecord, SignalMatrix};
