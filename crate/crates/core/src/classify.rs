//! Small-scale classification over encoded images: grayscale box features,
//! k-NN and nearest-centroid predictors, accuracy/confusion reporting.
//!
//! This is a measurement harness for the encoding itself, not a model: if
//! the rendered images separate classes, even these classifiers should.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::render::EncodedImage;
use crate::signal::ClassLabel;

/// Flattened grayscale thumbnail in [0, 1], row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn dims(&self) -> usize {
        self.values.len()
    }

    pub fn distance(&self, other: &FeatureVector) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::FeatureDimMismatch {
                expected: self.dims(),
                got: other.dims(),
            });
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(math::sqrt(sum))
    }
}

/// Box-filter the image down to `side` x `side`, convert to luminance
/// (0.299 R + 0.587 G + 0.114 B) and scale to [0, 1].
pub fn featurize(image: &EncodedImage, side: usize) -> Result<FeatureVector> {
    if side < 2 {
        return Err(Error::InvalidFeatureSide(side));
    }
    let (w, h) = (image.width(), image.height());
    let mut values = Vec::with_capacity(side * side);
    for r in 0..side {
        // Boxes partition the image; when side exceeds a dimension, cells
        // re-sample the nearest pixel row/column instead.
        let y0 = r * h / side;
        let y1 = ((r + 1) * h / side).max(y0 + 1);
        for c in 0..side {
            let x0 = c * w / side;
            let x1 = ((c + 1) * w / side).max(x0 + 1);
            let mut sum = 0.0;
            for y in y0..y1 {
                for x in x0..x1 {
                    let px = image.pixel(x, y);
                    sum += 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
                }
            }
            values.push(sum / (((y1 - y0) * (x1 - x0)) as f64 * 255.0));
        }
    }
    Ok(FeatureVector { values })
}

/// Majority label among the k nearest training vectors (Euclidean).
///
/// Vote ties break toward the tied label with the smallest summed distance,
/// then the lowest index. Neighbor ordering ties break by label, which makes
/// the prediction independent of training-set order.
pub fn knn_predict(
    train: &[(FeatureVector, ClassLabel)],
    query: &FeatureVector,
    k: usize,
) -> Result<ClassLabel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k == 0 || k.is_multiple_of(2) || k > train.len() {
        return Err(Error::InvalidK { k, n: train.len() });
    }
    let mut neighbors: Vec<(f64, ClassLabel)> = train
        .iter()
        .map(|(f, label)| Ok((query.distance(f)?, *label)))
        .collect::<Result<_>>()?;
    neighbors.sort_unstable_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    });
    neighbors.truncate(k);

    let max_label = neighbors.iter().map(|(_, l)| l.index()).max().unwrap();
    let mut votes = alloc::vec![0usize; max_label + 1];
    let mut summed = alloc::vec![0.0f64; max_label + 1];
    for (d, label) in &neighbors {
        votes[label.index()] += 1;
        summed[label.index()] += d;
    }
    let top = *votes.iter().max().unwrap();
    let mut best: Option<usize> = None;
    for (label, &v) in votes.iter().enumerate() {
        if v == top {
            best = match best {
                None => Some(label),
                Some(cur) if summed[label] < summed[cur] => Some(label),
                Some(cur) => Some(cur),
            };
        }
    }
    Ok(ClassLabel(best.unwrap()))
}

/// Closest per-class mean vector; ties go to the lowest label index.
/// Every class in `0..n_classes` must have at least one training vector.
pub fn nearest_centroid(
    train: &[(FeatureVector, ClassLabel)],
    query: &FeatureVector,
    n_classes: usize,
) -> Result<ClassLabel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let dims = train[0].0.dims();
    let mut sums = alloc::vec![alloc::vec![0.0f64; dims]; n_classes];
    let mut counts = alloc::vec![0usize; n_classes];
    for (f, label) in train {
        if label.index() >= n_classes {
            return Err(Error::LabelOutOfRange {
                label: label.index(),
                classes: n_classes,
            });
        }
        if f.dims() != dims {
            return Err(Error::FeatureDimMismatch { expected: dims, got: f.dims() });
        }
        for (s, v) in sums[label.index()].iter_mut().zip(&f.values) {
            *s += v;
        }
        counts[label.index()] += 1;
    }
    let mut best: Option<(f64, usize)> = None;
    for class in 0..n_classes {
        if counts[class] == 0 {
            return Err(Error::MissingClass(class));
        }
        let centroid = FeatureVector {
            values: sums[class]
                .iter()
                .map(|s| s / counts[class] as f64)
                .collect(),
        };
        let d = query.distance(&centroid)?;
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, class));
        }
    }
    Ok(ClassLabel(best.unwrap().1))
}

/// Which predictor an evaluation run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum ClassifierKind {
    Knn { k: usize },
    NearestCentroid,
}

impl Default for ClassifierKind {
    fn default() -> Self {
        ClassifierKind::Knn { k: 3 }
    }
}

/// Accuracy, per-class accuracy and confusion counts for one evaluation.
/// `confusion[true][predicted]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub accuracy: f64,
    pub per_class_accuracy: Vec<Option<f64>>,
    pub confusion_matrix: Vec<Vec<u64>>,
    pub n_train: usize,
    pub n_test: usize,
}

impl EvalReport {
    pub fn from_predictions(
        truth: &[ClassLabel],
        predictions: &[ClassLabel],
        n_classes: usize,
        n_train: usize,
    ) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::EmptyTestSplit);
        }
        let mut confusion = alloc::vec![alloc::vec![0u64; n_classes]; n_classes];
        for (t, p) in truth.iter().zip(predictions) {
            for label in [t, p] {
                if label.index() >= n_classes {
                    return Err(Error::LabelOutOfRange {
                        label: label.index(),
                        classes: n_classes,
                    });
                }
            }
            confusion[t.index()][p.index()] += 1;
        }
        let trace: u64 = (0..n_classes).map(|i| confusion[i][i]).sum();
        let per_class_accuracy = confusion
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let total: u64 = row.iter().sum();
                (total > 0).then(|| confusion[i][i] as f64 / total as f64)
            })
            .collect();
        Ok(EvalReport {
            accuracy: trace as f64 / truth.len() as f64,
            per_class_accuracy,
            confusion_matrix: confusion,
            n_train,
            n_test: truth.len(),
        })
    }
}

/// Train on labeled features, predict the test features, report. The
/// predictor never sees a test label; truth enters only when the report is
/// assembled from finished predictions.
pub fn evaluate_features(
    train: &[(FeatureVector, ClassLabel)],
    test: &[(FeatureVector, ClassLabel)],
    n_classes: usize,
    classifier: ClassifierKind,
) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyTestSplit);
    }
    let predictions: Vec<ClassLabel> = test
        .iter()
        .map(|(f, _)| match classifier {
            ClassifierKind::Knn { k } => knn_predict(train, f, k),
            ClassifierKind::NearestCentroid => nearest_centroid(train, f, n_classes),
        })
        .collect::<Result<_>>()?;
    let truth: Vec<ClassLabel> = test.iter().map(|(_, l)| *l).collect();
    EvalReport::from_predictions(&truth, &predictions, n_classes, train.len())
}
