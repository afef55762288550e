//! Generator ingestion and report persistence.
//!
//! Generators load from a JSON schema
//! `{"name", "dim", "matrix": [[[re, im], ...], ...], "description"}`
//! or from the Matrix Market `coordinate complex general` subset. Reports
//! and run manifests serialize as JSON with complex numbers as `[re, im]`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::linalg::{Cx, Matrix};
use crate::semigroup::GeneratorSpec;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {context}")]
    Parse { line: usize, context: String },
    #[error("schema error: {context}")]
    Schema { context: String },
}

/// JSON wire format for generators.
#[derive(Debug, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub name: String,
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub description: String,
}

impl GeneratorFile {
    pub fn from_spec(spec: &GeneratorSpec) -> Self {
        let n = spec.dim();
        GeneratorFile {
            name: spec.name.clone(),
            dim: n,
            matrix: (0..n)
                .map(|i| (0..n).map(|j| [spec.a[(i, j)].re, spec.a[(i, j)].im]).collect())
                .collect(),
            description: spec.description.clone(),
        }
    }

    pub fn into_spec(self) -> Result<GeneratorSpec, IoError> {
        if self.matrix.len() != self.dim {
            return Err(IoError::Schema {
                context: format!(
                    "field 'matrix' has {} rows but 'dim' is {}",
                    self.matrix.len(),
                    self.dim
                ),
            });
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.dim {
                return Err(IoError::Schema {
                    context: format!(
                        "field 'matrix' row {i} has {} entries but 'dim' is {}",
                        row.len(),
                        self.dim
                    ),
                });
            }
        }
        let data = Array2::from_shape_fn((self.dim, self.dim), |(i, j)| {
            Cx::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        let a = Matrix::new(data).map_err(|e| IoError::Schema {
            context: e.to_string(),
        })?;
        Ok(GeneratorSpec::new(self.name, a, self.description))
    }
}

/// Write a generator as JSON (floats round-trip bitwise).
pub fn save_generator(path: impl AsRef<Path>, spec: &GeneratorSpec) -> Result<(), IoError> {
    let file = GeneratorFile::from_spec(spec);
    let text = serde_json::to_string_pretty(&file).expect("generator serializes");
    fs::write(path, text)?;
    Ok(())
}

/// Load a generator from JSON or Matrix Market, sniffing the header.
pub fn load_generator(path: impl AsRef<Path>) -> Result<GeneratorSpec, IoError> {
    let path = path.as_ref();
    let head = {
        let f = fs::File::open(path)?;
        let mut reader = BufReader::new(f);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        first
    };
    if head.trim_start().starts_with("%%MatrixMarket") {
        load_matrix_market(path)
    } else {
        let text = fs::read_to_string(path)?;
        let file: GeneratorFile = serde_json::from_str(&text).map_err(|e| IoError::Schema {
            context: e.to_string(),
        })?;
        file.into_spec()
    }
}

/// Matrix Market `matrix coordinate complex general` subset, square only.
fn load_matrix_market(path: &Path) -> Result<GeneratorSpec, IoError> {
    let f = fs::File::open(path)?;
    let reader = BufReader::new(f);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(IoError::Parse {
        line: 1,
        context: "empty file".into(),
    })?;
    let header = header?;
    let fields: Vec<String> = header
        .trim()
        .split_whitespace()
        .map(|s| s.to_lowercase())
        .collect();
    if fields.len() < 5
        || fields[0] != "%%matrixmarket"
        || fields[1] != "matrix"
        || fields[2] != "coordinate"
        || fields[3] != "complex"
        || fields[4] != "general"
    {
        return Err(IoError::Parse {
            line: 1,
            context: format!(
                "unsupported header '{}'; need 'matrix coordinate complex general'",
                header.trim()
            ),
        });
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut data: Option<Array2<Cx>> = None;
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if toks.len() != 3 {
                    return Err(IoError::Parse {
                        line: lineno,
                        context: "size line must be 'rows cols nnz'".into(),
                    });
                }
                let parse = |s: &str| -> Result<usize, IoError> {
                    s.parse().map_err(|e| IoError::Parse {
                        line: lineno,
                        context: format!("bad size field '{s}': {e}"),
                    })
                };
                let (m, n, nnz) = (parse(toks[0])?, parse(toks[1])?, parse(toks[2])?);
                if m != n {
                    return Err(IoError::Schema {
                        context: format!("matrix must be square, got {m}x{n}"),
                    });
                }
                size = Some((m, n, nnz));
                data = Some(Array2::zeros((m, n)));
            }
            Some((m, n, nnz)) => {
                if toks.len() != 4 {
                    return Err(IoError::Parse {
                        line: lineno,
                        context: "entry line must be 'i j re im'".into(),
                    });
                }
                let i: usize = toks[0].parse().map_err(|e| IoError::Parse {
                    line: lineno,
                    context: format!("bad row index '{}': {e}", toks[0]),
                })?;
                let j: usize = toks[1].parse().map_err(|e| IoError::Parse {
                    line: lineno,
                    context: format!("bad column index '{}': {e}", toks[1]),
                })?;
                let re: f64 = toks[2].parse().map_err(|e| IoError::Parse {
                    line: lineno,
                    context: format!("bad real part '{}': {e}", toks[2]),
                })?;
                let im: f64 = toks[3].parse().map_err(|e| IoError::Parse {
                    line: lineno,
                    context: format!("bad imaginary part '{}': {e}", toks[3]),
                })?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(IoError::Parse {
                        line: lineno,
                        context: format!("index ({i}, {j}) out of bounds for {m}x{n}"),
                    });
                }
                data.as_mut().unwrap()[[i - 1, j - 1]] = Cx::new(re, im);
                seen += 1;
                if seen > nnz {
                    return Err(IoError::Parse {
                        line: lineno,
                        context: format!("more than the declared {nnz} entries"),
                    });
                }
            }
        }
    }
    let (_m, _, nnz) = size.ok_or(IoError::Parse {
        line: 1,
        context: "missing size line".into(),
    })?;
    if seen != nnz {
        return Err(IoError::Schema {
            context: format!("declared {nnz} entries but found {seen}"),
        });
    }
    let a = Matrix::new(data.unwrap()).map_err(|e| IoError::Schema {
        context: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "matrix-market".into());
    Ok(GeneratorSpec::new(
        name,
        a,
        format!("loaded from Matrix Market file {}", path.display()),
    ))
}

/// Provenance attached to every report directory: seed, tolerances in
/// effect, and versions, so runs can be reproduced byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub version: String,
    pub rng: String,
    /// Excluded from reproducibility comparisons.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(seed: u64, tolerances: BTreeMap<String, f64>, timestamp: String) -> Self {
        RunManifest {
            seed,
            tolerances,
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "chacha8".into(),
            timestamp,
        }
    }
}

/// Serialize any report as pretty JSON.
pub fn save_report<T: Serialize>(path: impl AsRef<Path>, report: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::canonical_zoo;

    #[test]
    fn json_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        for entry in canonical_zoo() {
            let path = dir.path().join(format!("{}.json", entry.spec.name));
            save_generator(&path, &entry.spec).unwrap();
            let loaded = load_generator(&path).unwrap();
            assert_eq!(
                loaded.a.fro_dist(&entry.spec.a),
                0.0,
                "round trip changed {}",
                entry.spec.name
            );
            assert_eq!(loaded.name, entry.spec.name);
        }
    }

    #[test]
    fn matrix_market_jordan_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("j2.mtx");
        fs::write(
            &path,
            "%%MatrixMarket matrix coordinate complex general\n\
             % hand-written fixture\n\
             2 2 1\n\
             1 2 1.0 0.0\n",
        )
        .unwrap();
        let spec = load_generator(&path).unwrap();
        let j2 = Matrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(spec.a.fro_dist(&j2), 0.0);
    }

    #[test]
    fn missing_matrix_field_names_the_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, r#"{"name": "x", "dim": 2, "description": ""}"#).unwrap();
        match load_generator(&path) {
            Err(IoError::Schema { context }) => {
                assert!(context.contains("matrix"), "message: {context}");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_a_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad_dim.json");
        fs::write(
            &path,
            r#"{"name": "x", "dim": 3, "matrix": [[[0,0],[0,0]],[[0,0],[0,0]]], "description": ""}"#,
        )
        .unwrap();
        match load_generator(&path) {
            Err(IoError::Schema { context }) => {
                assert!(context.contains("dim"), "message: {context}");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_matrix_market_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.mtx");
        fs::write(
            &path,
            "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 oops 1.0 0.0\n",
        )
        .unwrap();
        match load_generator(&path) {
            Err(IoError::Parse { line, context }) => {
                assert_eq!(line, 3);
                assert!(context.contains("column index"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn real_matrix_market_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("real.mtx");
        fs::write(
            &path,
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1.0\n",
        )
        .unwrap();
        assert!(matches!(
            load_generator(&path),
            Err(IoError::Parse { line: 1, .. })
        ));
    }
}
