//! Signal matrices and the numeric primitives shared by the pipeline.
//!
//! A [`SignalMatrix`] holds N named 1-D signals of common length M, stored
//! signals-as-rows. Everything downstream (reduction, fusion, rendering)
//! operates on this one shape.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// N named signals of common length M. Rows are signals, columns are time
/// samples. All samples are finite; names are distinct. Constructors
/// enforce the invariants; sequence CSV is the serialization format.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix {
    names: Vec<String>,
    samples_per_signal: usize,
    data: Vec<f64>,
}

impl SignalMatrix {
    /// Build a matrix from per-signal rows.
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::NoSignals);
        }
        let m = rows[0].len();
        for (j, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::RaggedSignal {
                    signal: j,
                    expected: m,
                    got: row.len(),
                });
            }
        }
        let mut data = Vec::with_capacity(rows.len() * m);
        for row in &rows {
            data.extend_from_slice(row);
        }
        Self::from_row_major(names, m, data)
    }

    /// Build a matrix from a row-major buffer of `names.len() * samples_per_signal` values.
    pub fn from_row_major(
        names: Vec<String>,
        samples_per_signal: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::NoSignals);
        }
        if samples_per_signal == 0 {
            return Err(Error::NoSamples);
        }
        if data.len() != names.len() * samples_per_signal {
            return Err(Error::DataLengthMismatch {
                expected: names.len() * samples_per_signal,
                got: data.len(),
            });
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                signal: idx / samples_per_signal,
                sample: idx % samples_per_signal,
            });
        }
        Ok(SignalMatrix {
            names,
            samples_per_signal,
            data,
        })
    }

    /// Number of signals N.
    pub fn signal_count(&self) -> usize {
        self.names.len()
    }

    /// Samples per signal M.
    pub fn sample_count(&self) -> usize {
        self.samples_per_signal
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Row `j` as a slice of M samples.
    pub fn signal(&self, j: usize) -> &[f64] {
        let m = self.samples_per_signal;
        &self.data[j * m..(j + 1) * m]
    }

    pub fn signals(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.samples_per_signal)
    }

    pub fn value(&self, signal: usize, sample: usize) -> f64 {
        self.data[signal * self.samples_per_signal + sample]
    }

    /// Row-major sample buffer, length N * M.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Which range the renderer maps onto the image height.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "mode"))]
pub enum RangeMode {
    /// Global min/max over all samples of the sequence being encoded.
    PerSequence,
    /// Caller-supplied bounds; values outside are clamped at render time.
    Fixed { min: f64, max: f64 },
}

/// Population standard deviation (divide by M, not M-1).
///
/// Uses Welford's online update; the tests check it against a plain
/// two-pass evaluation.
pub fn population_std(signal: &[f64]) -> Result<f64> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in signal.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    Ok(math::sqrt(m2 / signal.len() as f64))
}

/// Resample to `target_len` samples by evaluating the piecewise-linear
/// interpolant at equally spaced parameters over [0, M-1]. Endpoints are
/// preserved exactly; equal lengths return the input unchanged.
pub fn resample_linear(signal: &[f64], target_len: usize) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    if target_len == 0 {
        return Err(Error::ZeroTargetLength);
    }
    let m = signal.len();
    if m == target_len {
        return Ok(signal.to_vec());
    }
    if m == 1 {
        return Ok(alloc::vec![signal[0]; target_len]);
    }
    let mut out = Vec::with_capacity(target_len);
    if target_len == 1 {
        out.push(signal[0]);
        return Ok(out);
    }
    let step = (m - 1) as f64 / (target_len - 1) as f64;
    for i in 0..target_len {
        if i == target_len - 1 {
            out.push(signal[m - 1]);
            continue;
        }
        let t = i as f64 * step;
        let lo = math::floor(t) as usize;
        let lo = lo.min(m - 2);
        let frac = t - lo as f64;
        out.push(signal[lo] + frac * (signal[lo + 1] - signal[lo]));
    }
    Ok(out)
}

/// Value range the renderer maps to the image height.
///
/// `PerSequence` scans all N*M samples; `Fixed` echoes the configured
/// bounds after checking min <= max.
pub fn matrix_value_range(matrix: &SignalMatrix, mode: RangeMode) -> Result<(f64, f64)> {
    match mode {
        RangeMode::Fixed { min, max } => {
            if min > max {
                Err(Error::InvalidFixedRange { min, max })
            } else {
                Ok((min, max))
            }
        }
        RangeMode::PerSequence => {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &v in matrix.as_slice() {
                min = min.min(v);
                max = max.max(v);
            }
            Ok((min, max))
        }
    }
}

/// Class index into a dataset's label-name table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ClassLabel(pub usize);

impl ClassLabel {
    pub fn index(self) -> usize {
        self.0
    }
}

/// What kind of sensor produced a sequence, plus enough layout metadata to
/// sanity-check the signal count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum SensorDescriptor {
    Skeleton { joints: usize, coords: usize },
    Inertial { channels: usize },
    WifiCsi { bands: usize },
    Mocap { tracks: usize },
    Generic,
}

impl SensorDescriptor {
    /// Signal count implied by the layout, if the layout pins one down.
    pub fn expected_signals(&self) -> Option<usize> {
        match *self {
            SensorDescriptor::Skeleton { joints, coords } => Some(joints * coords),
            SensorDescriptor::Inertial { channels } => Some(channels),
            SensorDescriptor::WifiCsi { bands } => Some(bands),
            SensorDescriptor::Mocap { tracks } => Some(tracks),
            SensorDescriptor::Generic => None,
        }
    }

    /// Errors when the layout disagrees with the matrix's signal count.
    pub fn check_signal_count(&self, n: usize) -> Result<()> {
        match self.expected_signals() {
            Some(expected) if expected != n => {
                Err(Error::SensorLayoutMismatch { expected, got: n })
            }
            _ => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SensorDescriptor::Skeleton { .. } => "skeleton",
            SensorDescriptor::Inertial { .. } => "inertial",
            SensorDescriptor::WifiCsi { .. } => "wifi_csi",
            SensorDescriptor::Mocap { .. } => "mocap",
            SensorDescriptor::Generic => "generic",
        }
    }
}

/// One labeled sequence: a signal matrix plus identity and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRecord {
    pub matrix: SignalMatrix,
    pub label: ClassLabel,
    pub sequence_id: String,
    pub sensor: SensorDescriptor,
    /// None when the source format does not carry a rate.
    pub sample_rate_hz: Option<f64>,
}

impl SequenceRecord {
    pub fn new(
        matrix: SignalMatrix,
        label: ClassLabel,
        sequence_id: String,
        sensor: SensorDescriptor,
        sample_rate_hz: Option<f64>,
    ) -> Result<Self> {
        if sequence_id.is_empty() {
            return Err(Error::EmptySequenceId);
        }
        sensor.check_signal_count(matrix.signal_count())?;
        Ok(SequenceRecord {
            matrix,
            label,
            sequence_id,
            sensor,
            sample_rate_hz,
        })
    }
}

/// Flatten M frames of J joints x C coordinates into a J*C-signal matrix.
///
/// Signals are ordered joint-major, coordinate-minor (`j0.x, j0.y, j0.z,
/// j1.x, ...`) and named `<joint>.<axis>`.
pub fn flatten_skeleton(
    frames: &[Vec<Vec<f64>>],
    joint_names: &[String],
) -> Result<SignalMatrix> {
    if frames.is_empty() {
        return Err(Error::NoSamples);
    }
    let joints = frames[0].len();
    if joints == 0 {
        return Err(Error::NoSignals);
    }
    if joint_names.len() != joints {
        return Err(Error::NameCountMismatch {
            names: joint_names.len(),
            signals: joints,
        });
    }
    let coords = frames[0][0].len();
    if coords != 2 && coords != 3 {
        return Err(Error::UnsupportedCoordCount(coords));
    }
    for (t, frame) in frames.iter().enumerate() {
        if frame.len() != joints {
            return Err(Error::InconsistentJointCount {
                frame: t,
                expected: joints,
                got: frame.len(),
            });
        }
        for (j, joint) in frame.iter().enumerate() {
            if joint.len() != coords {
                return Err(Error::InconsistentCoordCount {
                    frame: t,
                    joint: j,
                    expected: coords,
                    got: joint.len(),
                });
            }
        }
    }

    const AXES: [&str; 3] = ["x", "y", "z"];
    let m = frames.len();
    let mut names = Vec::with_capacity(joints * coords);
    let mut data = alloc::vec![0.0; joints * coords * m];
    for j in 0..joints {
        for c in 0..coords {
            names.push(alloc::format!("{}.{}", joint_names[j], AXES[c]));
            let row = j * coords + c;
            for (t, frame) in frames.iter().enumerate() {
                data[row * m + t] = frame[j][c];
            }
        }
    }
    SignalMatrix::from_row_major(names, m, data)
}
