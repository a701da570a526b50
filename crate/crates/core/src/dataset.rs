//! CSV ingestion for the UCI-style benchmark files: raw comma-delimited
//! rows, no header, one label column, everything else numeric features.

use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::network::LabeledSet;

/// Where the class label sits in a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    /// Zero-based column index.
    Index(usize),
    Last,
}

/// How label cells are validated. Either way the label token's text is the
/// class name; classes are numbered by first appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    StringClass,
    IntegerClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSchema {
    pub delimiter: u8,
    pub label_column: LabelColumn,
    pub label_kind: LabelKind,
    pub expected_rows: Option<usize>,
    pub expected_features: Option<usize>,
}

/// Schema of one of the bundled benchmark files, by name.
pub fn builtin_schema(name: &str) -> Option<DatasetSchema> {
    match name {
        "iris" => Some(DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::StringClass,
            expected_rows: Some(150),
            expected_features: Some(4),
        }),
        "wine" => Some(DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Index(0),
            label_kind: LabelKind::IntegerClass,
            expected_rows: Some(178),
            expected_features: Some(13),
        }),
        // The raw file carries six numeric fields plus the two-class
        // selector used as the label.
        "liver" => Some(DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::IntegerClass,
            expected_rows: Some(345),
            expected_features: Some(6),
        }),
        _ => None,
    }
}

const IRIS_DATA: &str = include_str!("../data/iris.data");
const WINE_DATA: &str = include_str!("../data/wine.data");

/// Load one of the builtin datasets. Iris and Wine ship with the crate; the
/// liver-disorders file is not redistributed, so it is looked up next to the
/// crate and under `data/bupa.data` in the working directory.
pub fn load_builtin(name: &str) -> Result<Dataset> {
    let schema = builtin_schema(name).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "unknown builtin dataset '{name}' (expected iris, wine, or liver)"
        ))
    })?;
    match name {
        "iris" => parse_str(IRIS_DATA, "iris.data", &schema),
        "wine" => parse_str(WINE_DATA, "wine.data", &schema),
        "liver" => {
            let bundled = concat!(env!("CARGO_MANIFEST_DIR"), "/data/bupa.data");
            for candidate in [bundled, "data/bupa.data"] {
                if Path::new(candidate).exists() {
                    return load_csv(candidate, &schema);
                }
            }
            Err(Error::Data(
                "the liver-disorders file is not bundled; download bupa.data from the UCI \
                 repository and place it at data/bupa.data (or pass --data-file)"
                    .into(),
            ))
        }
        _ => unreachable!(),
    }
}

/// Feature matrix plus class labels. `normalization` holds the per-feature
/// (min, max) pairs once the dataset has been scaled into [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    normalization: Option<Vec<(f64, f64)>>,
}

impl Dataset {
    pub fn rows(&self) -> usize {
        self.features.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn normalization(&self) -> Option<&[(f64, f64)]> {
        self.normalization.as_deref()
    }

    /// Scale every feature by `(x - min) / (max - min)` using this dataset's
    /// own column ranges; constant columns map to 0. The ranges are stored
    /// for reuse on held-out data.
    pub fn min_max_normalize(&self) -> Dataset {
        let dim = self.feature_dim();
        let mut params = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
        for row in &self.features {
            for (p, &v) in params.iter_mut().zip(row) {
                p.0 = p.0.min(v);
                p.1 = p.1.max(v);
            }
        }
        self.normalize_with(&params)
    }

    /// Apply previously computed (min, max) ranges, clamping into [0, 1].
    pub fn normalize_with(&self, params: &[(f64, f64)]) -> Dataset {
        let features = self
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .zip(params)
                    .map(|(&v, &(lo, hi))| {
                        if hi > lo {
                            ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Dataset {
            features,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            normalization: Some(params.to_vec()),
        }
    }

    /// One-hot encode the labels, preserving row order. The dataset must be
    /// normalized first.
    pub fn to_labeled_set(&self) -> Result<LabeledSet> {
        if self.normalization.is_none() {
            return Err(Error::InvalidConfig(
                "normalize the dataset before converting it to a labeled set".into(),
            ));
        }
        let classes = self.class_count();
        let targets = self
            .labels
            .iter()
            .map(|&l| {
                let mut t = vec![0.0; classes];
                t[l] = 1.0;
                t
            })
            .collect();
        LabeledSet::new(self.features.clone(), targets)
    }

    /// Split rows into (train, test) with a seeded shuffle. The test part
    /// holds `ceil(rows * test_fraction)` rows. Neither part is normalized.
    pub fn split(&self, test_fraction: f64, rng: &mut impl Rng) -> Result<(Dataset, Dataset)> {
        if !(0.0..1.0).contains(&test_fraction) {
            return Err(Error::InvalidConfig(format!(
                "test fraction must lie in [0, 1), got {test_fraction}"
            )));
        }
        let n = self.rows();
        let n_test = (n as f64 * test_fraction).ceil() as usize;
        let mut order: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the caller's seeded source.
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let pick = |idx: &[usize]| Dataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            normalization: None,
        };
        let (test_idx, train_idx) = order.split_at(n_test);
        Ok((pick(train_idx), pick(test_idx)))
    }
}

/// Load a raw CSV file under the given schema.
pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text, &path.display().to_string(), schema)
}

/// Parse CSV text under the schema. `origin` names the source in errors.
pub fn parse_str(text: &str, origin: &str, schema: &DatasetSchema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(schema.delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut features: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut class_names: Vec<String> = Vec::new();

    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            path: origin.to_string(),
            line: e.position().map_or(0, csv::Position::line),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        // The csv reader already skips fully blank lines.
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() < 2 {
            return Err(Error::MalformedRow {
                path: origin.to_string(),
                line,
                msg: format!("expected at least 2 fields, found {}", record.len()),
            });
        }
        let label_idx = match schema.label_column {
            LabelColumn::Index(i) => i,
            LabelColumn::Last => record.len() - 1,
        };
        if label_idx >= record.len() {
            return Err(Error::MalformedRow {
                path: origin.to_string(),
                line,
                msg: format!(
                    "label column {label_idx} out of range for a {}-field row",
                    record.len()
                ),
            });
        }

        let label_token = record[label_idx].to_string();
        if schema.label_kind == LabelKind::IntegerClass
            && label_token.parse::<i64>().is_err()
        {
            return Err(Error::MalformedRow {
                path: origin.to_string(),
                line,
                msg: format!("label '{label_token}' is not an integer"),
            });
        }
        if label_token.is_empty() {
            return Err(Error::MalformedRow {
                path: origin.to_string(),
                line,
                msg: "empty label".into(),
            });
        }

        let mut row = Vec::with_capacity(record.len() - 1);
        for (i, cell) in record.iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::MalformedRow {
                path: origin.to_string(),
                line,
                msg: format!("non-numeric feature cell '{cell}' in column {i}"),
            })?;
            row.push(value);
        }
        if let Some(expected) = schema.expected_features {
            if row.len() != expected {
                return Err(Error::MalformedRow {
                    path: origin.to_string(),
                    line,
                    msg: format!("expected {expected} features, found {}", row.len()),
                });
            }
        }
        if let Some(first) = features.first() {
            if row.len() != first.len() {
                return Err(Error::MalformedRow {
                    path: origin.to_string(),
                    line,
                    msg: format!(
                        "inconsistent feature count: {} here, {} earlier",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }

        let class = match class_names.iter().position(|c| *c == label_token) {
            Some(i) => i,
            None => {
                class_names.push(label_token);
                class_names.len() - 1
            }
        };
        features.push(row);
        labels.push(class);
    }

    if let Some(expected) = schema.expected_rows {
        if features.len() != expected {
            return Err(Error::SchemaMismatch {
                path: origin.to_string(),
                what: "rows",
                expected,
                found: features.len(),
            });
        }
    }
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }

    Ok(Dataset {
        features,
        labels,
        class_names,
        normalization: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn raw(features: Vec<Vec<f64>>, labels: Vec<usize>, classes: &[&str]) -> Dataset {
        Dataset {
            features,
            labels,
            class_names: classes.iter().map(|s| s.to_string()).collect(),
            normalization: None,
        }
    }

    #[test]
    fn builtin_iris_shape() {
        let d = load_builtin("iris").unwrap();
        assert_eq!(d.rows(), 150);
        assert_eq!(d.feature_dim(), 4);
        assert_eq!(d.class_count(), 3);
        assert_eq!(
            d.class_names(),
            &["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
        );
    }

    #[test]
    fn builtin_wine_shape() {
        let d = load_builtin("wine").unwrap();
        assert_eq!(d.rows(), 178);
        assert_eq!(d.feature_dim(), 13);
        assert_eq!(d.class_count(), 3);
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(load_builtin("mnist").is_err());
    }

    #[test]
    fn min_max_scales_each_column() {
        let d = raw(
            vec![vec![0.0, 3.0], vec![5.0, 3.0], vec![10.0, 3.0]],
            vec![0, 1, 0],
            &["a", "b"],
        );
        let n = d.min_max_normalize();
        let col0: Vec<f64> = n.features().iter().map(|r| r[0]).collect();
        assert_eq!(col0, vec![0.0, 0.5, 1.0]);
        // Constant column maps to 0.
        let col1: Vec<f64> = n.features().iter().map(|r| r[1]).collect();
        assert_eq!(col1, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn normalize_is_idempotent() {
        // An already-normalized dataset spans [0, 1] per column, so its own
        // ranges are (0, 1) and a second pass changes nothing.
        let d = raw(
            vec![vec![1.0, -2.0, 3.0], vec![4.0, 0.5, 3.0], vec![2.5, 9.0, 3.0]],
            vec![0, 1, 0],
            &["a", "b"],
        );
        let once = d.min_max_normalize();
        let twice = once.min_max_normalize();
        assert_eq!(once.features(), twice.features());
    }

    #[test]
    fn normalize_with_reuses_training_ranges() {
        let train = raw(vec![vec![0.0], vec![10.0]], vec![0, 1], &["a", "b"]);
        let test = raw(vec![vec![5.0], vec![20.0]], vec![0, 1], &["a", "b"]);
        let normalized_train = train.min_max_normalize();
        let t = test.normalize_with(normalized_train.normalization().unwrap());
        assert_eq!(t.features()[0], vec![0.5]);
        // Out-of-range values clamp into [0, 1].
        assert_eq!(t.features()[1], vec![1.0]);
    }

    #[test]
    fn to_labeled_set_one_hot() {
        let d = raw(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![1, 0, 2],
            &["a", "b", "c"],
        );
        let ls = d.min_max_normalize().to_labeled_set().unwrap();
        assert!(ls.is_one_hot());
        assert_eq!(ls.targets()[0], vec![0.0, 1.0, 0.0]);
        for (target, &label) in ls.targets().iter().zip(d.labels()) {
            assert_eq!(crate::network::argmax(target), label);
        }
    }

    #[test]
    fn to_labeled_set_requires_normalization() {
        let d = raw(vec![vec![0.0]], vec![0], &["a"]);
        assert!(d.to_labeled_set().is_err());
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "1.0,2.0,x").unwrap();
        writeln!(f, "1.0,oops,x").unwrap();
        f.flush().unwrap();
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::StringClass,
            expected_rows: None,
            expected_features: None,
        };
        let err = load_csv(f.path(), &schema).unwrap_err();
        match err {
            Error::MalformedRow { line, ref msg, .. } => {
                assert_eq!(line, 2, "wrong line in: {msg}");
                assert!(msg.contains("oops"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn row_count_mismatch_is_reported() {
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::StringClass,
            expected_rows: Some(3),
            expected_features: None,
        };
        let err = parse_str("1,2,a\n3,4,b\n", "test", &schema).unwrap_err();
        assert!(matches!(err, Error::SchemaMismatch { expected: 3, found: 2, .. }));
    }

    #[test]
    fn feature_count_mismatch_is_reported() {
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::StringClass,
            expected_rows: None,
            expected_features: Some(3),
        };
        assert!(parse_str("1,2,a\n", "test", &schema).is_err());
    }

    #[test]
    fn blank_trailing_lines_are_ignored() {
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::StringClass,
            expected_rows: Some(2),
            expected_features: None,
        };
        let d = parse_str("1,2,a\n3,4,b\n\n\n", "test", &schema).unwrap();
        assert_eq!(d.rows(), 2);
    }

    #[test]
    fn labels_numbered_by_first_appearance() {
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Index(0),
            label_kind: LabelKind::IntegerClass,
            expected_rows: None,
            expected_features: None,
        };
        let d = parse_str("3,1.0\n1,2.0\n3,3.0\n", "test", &schema).unwrap();
        assert_eq!(d.class_names(), &["3", "1"]);
        assert_eq!(d.labels(), &[0, 1, 0]);
    }

    #[test]
    fn integer_label_kind_rejects_strings() {
        let schema = DatasetSchema {
            delimiter: b',',
            label_column: LabelColumn::Last,
            label_kind: LabelKind::IntegerClass,
            expected_rows: None,
            expected_features: None,
        };
        assert!(parse_str("1,2,setosa\n", "test", &schema).is_err());
    }

    #[test]
    fn loading_twice_is_identical() {
        let a = load_builtin("iris").unwrap();
        let b = load_builtin("iris").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pipeline_preserves_rows_and_classes() {
        let d = load_builtin("iris").unwrap();
        let ls = d.min_max_normalize().to_labeled_set().unwrap();
        assert_eq!(ls.len(), d.rows());
        let mut counts = vec![0usize; d.class_count()];
        for t in ls.targets() {
            assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            counts[crate::network::argmax(t)] += 1;
        }
        assert_eq!(counts, vec![50, 50, 50]);
    }

    #[test]
    fn normalized_features_stay_in_unit_interval() {
        for name in ["iris", "wine"] {
            let d = load_builtin(name).unwrap().min_max_normalize();
            for row in d.features() {
                for &v in row {
                    assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn split_partitions_rows() {
        use rand::SeedableRng;
        let d = load_builtin("iris").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let (train, test) = d.split(0.3, &mut rng).unwrap();
        assert_eq!(train.rows() + test.rows(), 150);
        assert_eq!(test.rows(), 45);
        assert_eq!(train.class_count(), 3);
    }
}
