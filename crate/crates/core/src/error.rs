//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by the encoding pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty signal")]
    EmptySignal,
    #[error("signal matrix has no signals")]
    NoSignals,
    #[error("signal matrix has no samples")]
    NoSamples,
    #[error("signal {signal} has {got} samples, expected {expected}")]
    RaggedSignal {
        signal: usize,
        expected: usize,
        got: usize,
    },
    #[error("sample buffer holds {got} values, expected {expected}")]
    DataLengthMismatch { expected: usize, got: usize },
    #[error("{names} signal names for {signals} signals")]
    NameCountMismatch { names: usize, signals: usize },
    #[error("duplicate signal name `{0}`")]
    DuplicateName(String),
    #[error("non-finite sample in signal {signal} at index {sample}")]
    NonFiniteSample { signal: usize, sample: usize },
    #[error("resample target length must be at least 1")]
    ZeroTargetLength,
    #[error("fixed range has min {min} > max {max}")]
    InvalidFixedRange { min: f64, max: f64 },
    #[error("empty sequence id")]
    EmptySequenceId,
    #[error("sensor layout expects {expected} signals, matrix has {got}")]
    SensorLayoutMismatch { expected: usize, got: usize },
    #[error("frame {frame} has {got} joints, expected {expected}")]
    InconsistentJointCount {
        frame: usize,
        expected: usize,
        got: usize,
    },
    #[error("frame {frame}, joint {joint} has {got} coordinates, expected {expected}")]
    InconsistentCoordCount {
        frame: usize,
        joint: usize,
        expected: usize,
        got: usize,
    },
    #[error("coordinate count must be 2 or 3, got {0}")]
    UnsupportedCoordCount(usize),
    #[error("contribution vector has {mask} entries for {signals} signals")]
    MaskLengthMismatch { mask: usize, signals: usize },
    #[error("reduction ratio {0} outside [0, 1]")]
    InvalidTauRatio(f64),
    #[error("nothing to fuse")]
    EmptyFusion,
    #[error("palette size {0} outside 1..=4096")]
    InvalidPaletteSize(usize),
    #[error("sample index {index} outside sequence of length {len}")]
    SampleOutOfRange { index: usize, len: usize },
    #[error("image dimensions {width}x{height} too small")]
    ImageTooSmall { width: usize, height: usize },
    #[error("pixel buffer of {got} bytes does not match {width}x{height} rgb image")]
    PixelBufferMismatch {
        width: usize,
        height: usize,
        got: usize,
    },
    #[error("invalid encoding config: {0}")]
    InvalidEncodingConfig(&'static str),
    #[error("stretch factor {0} outside [0.25, 4]")]
    InvalidStretchFactor(f64),
    #[error("perspective corners are degenerate")]
    DegenerateCorners,
    #[error("perspective corners outside the allowed frame margin")]
    CornersOutOfFrame,
    #[error("invalid augmentation spec: {0}")]
    InvalidAugmentSpec(&'static str),
    #[error("feature side must be at least 2, got {0}")]
    InvalidFeatureSide(usize),
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("k must be a positive odd integer no larger than the training set ({n}), got {k}")]
    InvalidK { k: usize, n: usize },
    #[error("training vector has {got} dimensions, expected {expected}")]
    FeatureDimMismatch { expected: usize, got: usize },
    #[error("class {0} has no training vectors")]
    MissingClass(usize),
    #[error("label {label} outside label set of size {classes}")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("empty test split")]
    EmptyTestSplit,
    #[error("empty train split")]
    EmptyTrainSplit,
    #[error("fusion group `{0}` mixes labels or splits")]
    InconsistentFusionGroup(String),
    #[error("manifest has no label names")]
    NoLabelNames,
    #[error("duplicate label name `{0}`")]
    DuplicateLabelName(String),
    #[error("duplicate manifest path `{0}`")]
    DuplicateManifestPath(String),
    #[error("invalid synthesis spec: {0}")]
    InvalidSynthSpec(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
