//! File formats: sequence CSV and manifest JSON.
//!
//! A sequence file is one CSV per sequence: the header row names the
//! signals, every following row is one time sample across all signals
//! (samples-as-rows on disk, transposed to signals-as-rows in memory).
//! A dataset is described by a JSON manifest mapping sequence files to
//! labels and train/test splits.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chromatrace_core::manifest::{DatasetManifest, ManifestEntry, Split};
use chromatrace_core::signal::{ClassLabel, SensorDescriptor};
use chromatrace_core::synth::SynthDataset;
use chromatrace_core::SignalMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Read a sequence CSV into a signal matrix (columns become signal rows).
/// `expected_signals` guards against shape drift when the manifest's sensor
/// layout pins a signal count.
pub fn load_sequence_csv(path: &Path, expected_signals: Option<usize>) -> Result<SignalMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_error(path, e))?;

    let mut records = reader.records();
    let header = match records.next() {
        Some(record) => record.map_err(|e| map_csv_error(path, e))?,
        None => return Err(Error::format(path, "empty file, expected a header row")),
    };
    let names: Vec<String> = header.iter().map(str::to_string).collect();
    let n = names.len();
    if let Some(expected) = expected_signals {
        if n != expected {
            return Err(Error::format(
                path,
                format!("expected {expected} signals, header has {n}"),
            ));
        }
    }

    // Column-major accumulation straight into signals-as-rows layout.
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n];
    for record in records {
        let record = record.map_err(|e| map_csv_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or_default();
        for (i, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("invalid number `{cell}` in column {}", i + 1),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("non-finite value `{cell}` in column {}", i + 1),
                });
            }
            columns[i].push(value);
        }
    }
    if columns.first().is_none_or(|c| c.is_empty()) {
        return Err(Error::format(path, "no sample rows after the header"));
    }
    SignalMatrix::from_rows(names, columns)
        .map_err(|e| Error::format(path, e.to_string()))
}

fn map_csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => Error::Parse {
            path: path.to_path_buf(),
            line: pos.as_ref().map(|p| p.line()).unwrap_or_default(),
            message: format!("row has {len} fields, expected {expected_len}"),
        },
        csv::ErrorKind::Io(_) => Error::format(path, e.to_string()),
        _ => Error::format(path, e.to_string()),
    }
}

/// Write a matrix as a sequence CSV. Floats use the shortest representation
/// that parses back to the same value, so load(write(m)) == m exactly.
pub fn write_sequence_csv(matrix: &SignalMatrix, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut writer = csv::WriterBuilder::new()
        .from_path(path)
        .map_err(|e| Error::format(path, e.to_string()))?;
    writer
        .write_record(matrix.names())
        .map_err(|e| Error::format(path, e.to_string()))?;
    let mut row: Vec<String> = Vec::with_capacity(matrix.signal_count());
    for t in 0..matrix.sample_count() {
        row.clear();
        for j in 0..matrix.signal_count() {
            row.push(matrix.value(j, t).to_string());
        }
        writer
            .write_record(&row)
            .map_err(|e| Error::format(path, e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// A manifest read from disk: the validated manifest, the directory its
/// relative paths resolve against, and warnings for ignored fields.
#[derive(Debug, Clone)]
pub struct ManifestLoad {
    pub manifest: DatasetManifest,
    pub base_dir: PathBuf,
    pub warnings: Vec<String>,
}

impl ManifestLoad {
    /// Absolute-ish path of one entry's sequence file.
    pub fn sequence_path(&self, entry: &ManifestEntry) -> PathBuf {
        self.base_dir.join(&entry.path)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LabelRef {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
struct RawEntry {
    path: String,
    label: LabelRef,
    split: String,
    #[serde(default)]
    sensor: Option<SensorDescriptor>,
    sequence_id: String,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
struct RawManifest {
    label_names: Vec<String>,
    entries: Vec<RawEntry>,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

/// Load and validate a manifest JSON file. Labels may be given as names or
/// indices; relative sequence paths resolve against the manifest directory.
/// Unknown JSON fields are ignored and reported in `warnings`.
pub fn load_manifest(path: &Path) -> Result<ManifestLoad> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: RawManifest =
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;

    let mut warnings = Vec::new();
    for key in raw.extra.keys() {
        warnings.push(format!("ignoring unknown manifest field `{key}`"));
    }

    let mut entries = Vec::with_capacity(raw.entries.len());
    for (i, raw_entry) in raw.entries.into_iter().enumerate() {
        for key in raw_entry.extra.keys() {
            warnings.push(format!("entry {i}: ignoring unknown field `{key}`"));
        }
        let label = match raw_entry.label {
            LabelRef::Index(idx) => ClassLabel(idx),
            LabelRef::Name(name) => match raw.label_names.iter().position(|l| *l == name) {
                Some(idx) => ClassLabel(idx),
                None => {
                    return Err(Error::format(
                        path,
                        format!(
                            "entry {i}: unknown label `{name}` (valid labels: {})",
                            raw.label_names.join(", ")
                        ),
                    ))
                }
            },
        };
        let split = match raw_entry.split.as_str() {
            "train" => Split::Train,
            "test" => Split::Test,
            other => {
                return Err(Error::format(
                    path,
                    format!("entry {i}: unknown split `{other}` (expected `train` or `test`)"),
                ))
            }
        };
        entries.push(ManifestEntry {
            path: raw_entry.path,
            label,
            split,
            sensor: raw_entry.sensor.unwrap_or(SensorDescriptor::Generic),
            sequence_id: raw_entry.sequence_id,
        });
    }

    let manifest = DatasetManifest { label_names: raw.label_names, entries };
    manifest
        .validate()
        .map_err(|e| Error::format(path, e.to_string()))?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
    Ok(ManifestLoad { manifest, base_dir, warnings })
}

/// Serialize a manifest to JSON, labels written as names.
pub fn save_manifest(manifest: &DatasetManifest, path: &Path) -> Result<()> {
    #[derive(serde::Serialize)]
    struct OutEntry<'a> {
        path: &'a str,
        label: &'a str,
        split: &'a str,
        sensor: &'a SensorDescriptor,
        sequence_id: &'a str,
    }
    #[derive(serde::Serialize)]
    struct OutManifest<'a> {
        label_names: &'a [String],
        entries: Vec<OutEntry<'a>>,
    }
    let doc = OutManifest {
        label_names: &manifest.label_names,
        entries: manifest
            .entries
            .iter()
            .map(|e| OutEntry {
                path: &e.path,
                label: manifest.class_name(e.label),
                split: e.split.name(),
                sensor: &e.sensor,
                sequence_id: &e.sequence_id,
            })
            .collect(),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::format(path, e.to_string()))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    file.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Write a generated dataset to `out_dir`: one CSV per sequence under
/// `sequences/` plus `manifest.json`.
pub fn write_synth_dataset(dataset: &SynthDataset, out_dir: &Path) -> Result<()> {
    for (record, entry) in dataset.records.iter().zip(&dataset.manifest.entries) {
        write_sequence_csv(&record.matrix, &out_dir.join(&entry.path))?;
    }
    save_manifest(&dataset.manifest, &out_dir.join("manifest.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_two_by_two() {
        let f = write_temp("a,b\n0,1\n2,3\n");
        let m = load_sequence_csv(f.path(), None).unwrap();
        assert_eq!(m.signal_count(), 2);
        assert_eq!(m.sample_count(), 2);
        assert_eq!(m.signal(0), &[0.0, 2.0]);
        assert_eq!(m.signal(1), &[1.0, 3.0]);
        assert_eq!(m.names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn loads_minimal_file() {
        let f = write_temp("x\n5\n");
        let m = load_sequence_csv(f.path(), None).unwrap();
        assert_eq!((m.signal_count(), m.sample_count()), (1, 1));
        assert_eq!(m.signal(0), &[5.0]);
    }

    #[test]
    fn ragged_row_reports_line_two() {
        let f = write_temp("a,b\n0\n");
        match load_sequence_csv(f.path(), None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_reports_line_and_column() {
        let f = write_temp("a,b\n0,1\n2,oops\n");
        match load_sequence_csv(f.path(), None) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("oops") && message.contains("column 2"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn header_only_file_errors() {
        let f = write_temp("a,b\n");
        assert!(matches!(
            load_sequence_csv(f.path(), None),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn expected_signal_count_is_enforced() {
        let f = write_temp("a,b\n0,1\n");
        assert!(load_sequence_csv(f.path(), Some(2)).is_ok());
        assert!(matches!(
            load_sequence_csv(f.path(), Some(3)),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn crlf_and_missing_trailing_newline_parse() {
        let f = write_temp("a,b\r\n0.5,1.5\r\n-2,3e2");
        let m = load_sequence_csv(f.path(), None).unwrap();
        assert_eq!(m.signal(0), &[0.5, -2.0]);
        assert_eq!(m.signal(1), &[1.5, 300.0]);
    }

    #[test]
    fn infinities_are_rejected_at_parse() {
        let f = write_temp("a\ninf\n");
        assert!(matches!(
            load_sequence_csv(f.path(), None),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let values = vec![
            vec![0.1, -1.0 / 3.0, 2.5e-17, 9007199254740993.0],
            vec![f64::MIN_POSITIVE, 1e300, -0.0, 42.0],
        ];
        let m = SignalMatrix::from_rows(
            vec!["first".to_string(), "second, with comma".to_string()],
            values,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.csv");
        write_sequence_csv(&m, &path).unwrap();
        let back = load_sequence_csv(&path, None).unwrap();
        assert_eq!(back, m);
    }

    fn manifest_json(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn manifest_resolves_label_names() {
        let f = manifest_json(
            r#"{"label_names": ["circle", "up"],
                "entries": [{"path": "a.csv", "label": "up", "split": "train",
                             "sequence_id": "a"}]}"#,
        );
        let load = load_manifest(f.path()).unwrap();
        assert_eq!(load.manifest.entries[0].label, ClassLabel(1));
        assert!(load.warnings.is_empty());
        assert_eq!(
            load.sequence_path(&load.manifest.entries[0]),
            f.path().parent().unwrap().join("a.csv")
        );
    }

    #[test]
    fn unknown_split_is_rejected() {
        let f = manifest_json(
            r#"{"label_names": ["x"],
                "entries": [{"path": "a.csv", "label": 0, "split": "validation",
                             "sequence_id": "a"}]}"#,
        );
        match load_manifest(f.path()) {
            Err(Error::Format { message, .. }) => {
                assert!(message.contains("unknown split `validation`"), "{message}")
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_label_lists_valid_names() {
        let f = manifest_json(
            r#"{"label_names": ["circle", "up"],
                "entries": [{"path": "a.csv", "label": "down", "split": "train",
                             "sequence_id": "a"}]}"#,
        );
        match load_manifest(f.path()) {
            Err(Error::Format { message, .. }) => {
                assert!(message.contains("circle, up"), "{message}")
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_path_is_rejected() {
        let f = manifest_json(
            r#"{"label_names": ["x"],
                "entries": [
                  {"path": "a.csv", "label": 0, "split": "train", "sequence_id": "a"},
                  {"path": "a.csv", "label": 0, "split": "test", "sequence_id": "b"}]}"#,
        );
        match load_manifest(f.path()) {
            Err(Error::Format { message, .. }) => {
                assert!(message.contains("duplicate"), "{message}")
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn empty_entries_are_fine() {
        let f = manifest_json(r#"{"label_names": ["x"], "entries": []}"#);
        let load = load_manifest(f.path()).unwrap();
        assert!(load.manifest.entries.is_empty());
    }

    #[test]
    fn unknown_fields_become_warnings() {
        let f = manifest_json(
            r#"{"label_names": ["x"], "comment": "hello",
                "entries": [{"path": "a.csv", "label": 0, "split": "train",
                             "sequence_id": "a", "note": 3}]}"#,
        );
        let load = load_manifest(f.path()).unwrap();
        assert_eq!(load.warnings.len(), 2);
        assert!(load.warnings[0].contains("comment"));
        assert!(load.warnings[1].contains("note"));
    }

    #[test]
    fn sensor_layout_round_trips() {
        let f = manifest_json(
            r#"{"label_names": ["x"],
                "entries": [{"path": "a.csv", "label": 0, "split": "train",
                             "sensor": {"kind": "skeleton", "joints": 25, "coords": 3},
                             "sequence_id": "a"}]}"#,
        );
        let load = load_manifest(f.path()).unwrap();
        assert_eq!(
            load.manifest.entries[0].sensor,
            SensorDescriptor::Skeleton { joints: 25, coords: 3 }
        );
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("manifest.json");
        save_manifest(&load.manifest, &out).unwrap();
        let back = load_manifest(&out).unwrap();
        assert_eq!(back.manifest, load.manifest);
    }

    #[test]
    fn entry_order_is_preserved() {
        let f = manifest_json(
            r#"{"label_names": ["x"],
                "entries": [
                  {"path": "z.csv", "label": 0, "split": "train", "sequence_id": "z"},
                  {"path": "a.csv", "label": 0, "split": "test", "sequence_id": "a"}]}"#,
        );
        let load = load_manifest(f.path()).unwrap();
        assert_eq!(load.manifest.entries[0].path, "z.csv");
        assert_eq!(load.manifest.entries[1].path, "a.csv");
    }
}
