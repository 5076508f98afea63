//! Dense matrices over [`Scalar`] and minor index bookkeeping.
//!
//! A matrix is representation-uniform: every entry is exact, or every entry
//! is a float. That invariant is established at construction and preserved by
//! all operations here, so the determinant kernels can dispatch once per
//! matrix instead of once per entry.

use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

/// Row-major dense matrix with representation-uniform entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Errors from matrix construction and shape operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// `data.len() != rows * cols`, or a zero dimension.
    BadShape { rows: usize, cols: usize, len: usize },
    /// Exact and float entries mixed in one matrix.
    MixedRepresentations,
    /// An index was out of bounds.
    IndexOutOfBounds { index: usize, bound: usize },
    /// Operation requires a square matrix.
    NotSquare,
    /// Moment list must have odd length `2n - 1`.
    BadMomentCount { len: usize },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::BadShape { rows, cols, len } => {
                write!(f, "{rows}x{cols} matrix cannot hold {len} entries")
            }
            MatrixError::MixedRepresentations => {
                f.write_str("matrix entries must be all exact or all float")
            }
            MatrixError::IndexOutOfBounds { index, bound } => {
                write!(f, "index {index} out of bounds for dimension {bound}")
            }
            MatrixError::NotSquare => f.write_str("matrix must be square"),
            MatrixError::BadMomentCount { len } => {
                write!(f, "a square Hankel matrix needs 2n-1 moments, got {len}")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

impl Matrix {
    /// Build from row-major data. Fails on shape mismatch or mixed
    /// representations.
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, MatrixError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(MatrixError::BadShape { rows, cols, len: data.len() });
        }
        let exact = data[0].is_exact();
        if data.iter().any(|s| s.is_exact() != exact) {
            return Err(MatrixError::MixedRepresentations);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from nested rows.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::BadShape { rows: r, cols: c, len: 0 });
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Build entrywise from a generator function.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Matrix, MatrixError> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data)
    }

    /// Exact matrix from integer entries, row-major.
    pub fn exact_from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Matrix, MatrixError> {
        Matrix::new(rows, cols, entries.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    /// Square Hankel matrix from moments `s_0, ..., s_{2n-2}`:
    /// entry `(i, j) = s_{i+j}`.
    pub fn hankel_from_moments(moments: &[Scalar]) -> Result<Matrix, MatrixError> {
        if moments.is_empty() || moments.len() % 2 == 0 {
            return Err(MatrixError::BadMomentCount { len: moments.len() });
        }
        let n = (moments.len() + 1) / 2;
        Matrix::from_fn(n, n, |i, j| moments[i + j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Short dimension `min(rows, cols)`.
    pub fn min_dim(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "entry index out of bounds");
        &self.data[i * self.cols + j]
    }

    /// Replace one entry; its representation must match the matrix.
    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<(), MatrixError> {
        if i >= self.rows {
            return Err(MatrixError::IndexOutOfBounds { index: i, bound: self.rows });
        }
        if j >= self.cols {
            return Err(MatrixError::IndexOutOfBounds { index: j, bound: self.cols });
        }
        if value.is_exact() != self.is_exact() {
            return Err(MatrixError::MixedRepresentations);
        }
        self.data[i * self.cols + j] = value;
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.data[0].is_exact()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    /// Entrywise map; the image must again be representation-uniform.
    pub fn map(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Result<Matrix, MatrixError> {
        Matrix::new(self.rows, self.cols, self.data.iter().map(|s| f(s)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
            .expect("transpose preserves validity")
    }

    /// Submatrix on the given (strictly increasing) row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        assert!(!rows.is_empty() && !cols.is_empty(), "empty submatrix");
        assert!(rows.windows(2).all(|w| w[0] < w[1]), "row indices must increase");
        assert!(cols.windows(2).all(|w| w[0] < w[1]), "column indices must increase");
        assert!(*rows.last().unwrap() < self.rows && *cols.last().unwrap() < self.cols);
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.entry(rows[i], cols[j]).clone())
            .expect("submatrix preserves validity")
    }

    /// Leading principal `k x k` block.
    pub fn leading_principal(&self, k: usize) -> Matrix {
        assert!(k >= 1 && k <= self.min_dim(), "leading block size out of range");
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx)
    }

    /// Drop the first row and the last column (the companion block in the
    /// Hankel positive-definiteness criterion).
    pub fn drop_first_row_last_col(&self) -> Matrix {
        assert!(self.rows >= 2 && self.cols >= 2, "matrix too small");
        let rows: Vec<usize> = (1..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols - 1).collect();
        self.submatrix(&rows, &cols)
    }

    /// Block-diagonal assembly; off-blocks are zeros in the shared
    /// representation.
    pub fn block_diag(blocks: &[&Matrix]) -> Result<Matrix, MatrixError> {
        assert!(!blocks.is_empty(), "no blocks");
        let exact = blocks[0].is_exact();
        if blocks.iter().any(|b| b.is_exact() != exact) {
            return Err(MatrixError::MixedRepresentations);
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let zero = blocks[0].data[0].zero_like();
        let mut out = vec![zero; rows * cols];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i) * cols + (c0 + j)] = b.entry(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Matrix::new(rows, cols, out)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.entry(i, j) != self.entry(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Entries constant along anti-diagonals (`(i, j)` depends on `i + j`).
    pub fn is_hankel(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i + 1 < self.rows && j >= 1 && self.entry(i, j) != self.entry(i + 1, j - 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise max-norm `max |a_ij|`.
    pub fn max_abs(&self) -> Scalar {
        let mut best = self.data[0].abs();
        for s in &self.data[1..] {
            let a = s.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Convert every entry to a float of `precision` bits.
    pub fn to_float(&self, precision: usize) -> Matrix {
        self.map(|s| s.to_float(precision)).expect("uniform floats")
    }

    /// Matrix product; both operands must share a representation.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::BadShape { rows: self.cols, cols: rhs.rows, len: 0 });
        }
        if self.is_exact() != rhs.is_exact() {
            return Err(MatrixError::MixedRepresentations);
        }
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.entry(0, 0).zero_like();
            for k in 0..self.cols {
                acc = &acc + &(self.entry(i, k) * rhs.entry(k, j));
            }
            acc
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Position of a minor: strictly increasing 0-based row and column indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> MinorIndex {
        assert_eq!(rows.len(), cols.len(), "minor must be square");
        assert!(rows.windows(2).all(|w| w[0] < w[1]), "row indices must increase");
        assert!(cols.windows(2).all(|w| w[0] < w[1]), "column indices must increase");
        MinorIndex { rows, cols }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "rows[{}] x cols[{}]", list(&self.rows), list(&self.cols))
    }
}
