//! Matrix file formats.
//!
//! Two formats are supported:
//!
//! * a JSON schema ([`MatrixFile`]) that stores entries as strings, so exact
//!   rational matrices round-trip bit-for-bit and float matrices round-trip
//!   to one unit in the last place at their declared precision;
//! * headerless CSV, one row per line, accepted for float matrices.
//!
//! [`load_matrix`] dispatches on the file name (`.csv` versus everything
//! else) and reads standard input when the path is `-`.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{ParseScalarError, Scalar};

/// Which scalar representation a matrix file declares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Float,
}

/// The JSON matrix schema: dimensions, scalar kind, and row-major entries
/// as strings (`"3/4"`, `"-2"`, `"1.25e-3"`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub scalar: ScalarKind,
    pub data: Vec<String>,
}

/// Errors from reading or writing matrix files.
#[derive(Debug)]
pub enum IoError {
    /// The JSON document is malformed.
    Json(serde_json::Error),
    /// `data` length disagrees with `rows * cols`, or a dimension is zero.
    Shape { rows: usize, cols: usize, len: usize },
    /// An entry failed to parse; `index` is the row-major position.
    Entry { index: usize, text: String, source: ParseScalarError },
    /// The underlying read failed.
    Read(std::io::Error),
    /// The parsed entries were rejected by the matrix constructor.
    Matrix(MatrixError),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Json(e) => write!(f, "invalid matrix JSON: {e}"),
            IoError::Shape { rows, cols, len } => {
                write!(f, "data length {len} does not match {rows}x{cols}")
            }
            IoError::Entry { index, text, source } => {
                write!(f, "entry {index} (`{text}`): {source}")
            }
            IoError::Read(e) => write!(f, "read failed: {e}"),
            IoError::Matrix(e) => write!(f, "invalid matrix: {e}"),
        }
    }
}

impl std::error::Error for IoError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            IoError::Json(e) => Some(e),
            IoError::Read(e) => Some(e),
            IoError::Entry { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> IoError {
        IoError::Json(e)
    }
}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> IoError {
        IoError::Read(e)
    }
}

impl From<MatrixError> for IoError {
    fn from(e: MatrixError) -> IoError {
        IoError::Matrix(e)
    }
}

impl MatrixFile {
    /// Snapshot of a matrix; the kind follows the matrix representation.
    pub fn from_matrix(m: &Matrix) -> MatrixFile {
        let kind = if m.is_exact() { ScalarKind::Rational } else { ScalarKind::Float };
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                data.push(m.entry(i, j).to_string());
            }
        }
        MatrixFile { rows: m.rows(), cols: m.cols(), scalar: kind, data }
    }

    /// Reconstructs the matrix. Float entries are rounded to `precision`
    /// bits; rational entries are parsed exactly.
    pub fn to_matrix(&self, precision: usize) -> Result<Matrix, IoError> {
        if self.data.len() != self.rows * self.cols || self.rows == 0 || self.cols == 0 {
            return Err(IoError::Shape { rows: self.rows, cols: self.cols, len: self.data.len() });
        }
        let as_float = self.scalar == ScalarKind::Float;
        let mut entries = Vec::with_capacity(self.data.len());
        for (index, text) in self.data.iter().enumerate() {
            let v = Scalar::parse(text, as_float, precision).map_err(|source| IoError::Entry {
                index,
                text: text.clone(),
                source,
            })?;
            entries.push(v);
        }
        let mut rows = Vec::with_capacity(self.rows);
        for chunk in entries.chunks(self.cols) {
            rows.push(chunk.to_vec());
        }
        Ok(Matrix::from_rows(rows)?)
    }
}

/// Serializes a matrix as the JSON schema.
pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("matrix file serializes")
}

/// Parses the JSON schema into a matrix.
pub fn parse_matrix_json(text: &str, precision: usize) -> Result<Matrix, IoError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.to_matrix(precision)
}

/// Serializes a matrix as headerless CSV (always float text).
pub fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&m.entry(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses headerless CSV into a float matrix at `precision` bits. Rows must
/// have equal lengths; entries may be decimal, scientific, or `p/q`.
pub fn parse_matrix_csv(text: &str, precision: usize) -> Result<Matrix, IoError> {
    let mut rows = Vec::new();
    let mut index = 0usize;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let v = Scalar::parse(cell, true, precision).map_err(|source| IoError::Entry {
                index,
                text: cell.trim().to_string(),
                source,
            })?;
            index += 1;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows)?)
}

/// Reads a matrix from `path`: `-` means standard input, a `.csv` suffix
/// selects the CSV reader, anything else the JSON schema.
pub fn load_matrix(path: &str, precision: usize) -> Result<Matrix, IoError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    if path != "-" && path.to_ascii_lowercase().ends_with(".csv") {
        parse_matrix_csv(&text, precision)
    } else {
        parse_matrix_json(&text, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses;

    #[test]
    fn rational_json_round_trips_bit_exactly() {
        let m = witnesses::matrix_c_rational();
        let json = matrix_to_json(&m);
        let back = parse_matrix_json(&json, 128).unwrap();
        assert_eq!(back, m);
        // And the serialized form is stable under a second pass.
        assert_eq!(matrix_to_json(&back), json);
    }

    #[test]
    fn float_json_round_trips_to_a_ulp() {
        let m = witnesses::matrix_c_rational().to_float(128);
        let back = parse_matrix_json(&matrix_to_json(&m), 128).unwrap();
        assert!(!back.is_exact());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let a = m.entry(i, j);
                let b = back.entry(i, j);
                let diff = (a - b).abs();
                // 1 ulp at 128 bits relative to the entry magnitude.
                let ulp = &a.abs().to_float(128) * &Scalar::from_ratio(1, 1 << 62);
                let ulp = &ulp * &Scalar::from_ratio(1, 1 << 62);
                assert!(diff <= ulp || diff.is_zero(), "entry ({i},{j}) off by {diff}");
            }
        }
    }

    #[test]
    fn csv_round_trips_floats() {
        let m = witnesses::tp_moment_4().to_float(96);
        let text = matrix_to_csv(&m);
        let back = parse_matrix_csv(&text, 96).unwrap();
        assert_eq!(back.rows(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let diff = (m.entry(i, j) - back.entry(i, j)).abs().to_f64();
                assert!(diff <= m.entry(i, j).to_f64() * 1e-27);
            }
        }
    }

    #[test]
    fn shape_and_entry_errors_carry_positions() {
        let bad = MatrixFile {
            rows: 2,
            cols: 2,
            scalar: ScalarKind::Rational,
            data: vec!["1".into(), "2".into(), "3".into()],
        };
        assert!(matches!(bad.to_matrix(128), Err(IoError::Shape { len: 3, .. })));

        let bad = MatrixFile {
            rows: 1,
            cols: 2,
            scalar: ScalarKind::Rational,
            data: vec!["1".into(), "2//3".into()],
        };
        match bad.to_matrix(128) {
            Err(IoError::Entry { index: 1, text, .. }) => assert_eq!(text, "2//3"),
            other => panic!("expected entry error, got {other:?}"),
        }

        assert!(parse_matrix_json("{\"rows\": 1}", 128).is_err());
        // Ragged CSV rows are rejected by the matrix constructor.
        assert!(matches!(
            parse_matrix_csv("1,2\n3\n", 128),
            Err(IoError::Matrix(MatrixError::BadShape { .. }))
        ));
    }

    #[test]
    fn load_matrix_dispatches_on_extension() {
        let dir = std::env::temp_dir();
        let json_path = dir.join("totpos_io_test.json");
        let csv_path = dir.join("totpos_io_test.csv");
        let m = witnesses::sym_rank1(&Scalar::from_int(1), &Scalar::from_int(2));
        std::fs::write(&json_path, matrix_to_json(&m)).unwrap();
        std::fs::write(&csv_path, matrix_to_csv(&m.to_float(128))).unwrap();

        let from_json = load_matrix(json_path.to_str().unwrap(), 128).unwrap();
        assert_eq!(from_json, m);
        let from_csv = load_matrix(csv_path.to_str().unwrap(), 128).unwrap();
        assert!(!from_csv.is_exact());
        assert_eq!(from_csv.rows(), 2);

        std::fs::remove_file(json_path).ok();
        std::fs::remove_file(csv_path).ok();
    }
}
