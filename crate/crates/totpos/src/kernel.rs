//! Determinant kernels and minor enumeration.
//!
//! Exact matrices go through fraction-free Bareiss elimination over integers
//! (after clearing row denominators), so every determinant is an exact
//! rational. Float matrices go through partially pivoted LU at the matrix's
//! own precision. [`det_cofactor`] is a slow reference implementation kept
//! for cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::{Matrix, MinorIndex};
use crate::scalar::{Bits, Scalar, MIN_PRECISION};

/// Determinant of a square matrix. Panics if the matrix is not square.
pub fn det(m: &Matrix) -> Scalar {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.is_exact() {
        Scalar::Exact(det_exact(m))
    } else {
        Scalar::Float(det_float(m))
    }
}

fn det_exact(m: &Matrix) -> BigRational {
    let n = m.rows();
    // Clear denominators row by row: det(A) = det(B) / prod(d_i) where row i
    // of B is d_i times row i of A.
    let mut denom_prod = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = BigInt::one();
        for j in 0..n {
            let r = m.entry(i, j).as_exact().expect("exact matrix");
            d = d.lcm(r.denom());
        }
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let r = m.entry(i, j).as_exact().expect("exact matrix");
            row.push(r.numer() * (&d / r.denom()));
        }
        denom_prod *= &d;
        a.push(row);
    }

    // Bareiss fraction-free elimination; every division below is exact.
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d = -d;
    }
    BigRational::new(d, denom_prod)
}

fn det_float(m: &Matrix) -> Bits {
    let n = m.rows();
    let p = m
        .entries()
        .map(|s| s.precision().unwrap_or(MIN_PRECISION))
        .max()
        .unwrap_or(MIN_PRECISION)
        .max(MIN_PRECISION);
    let zero = Bits::ZERO.with_precision(p).value();
    let mut a: Vec<Vec<Bits>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m.entry(i, j) {
                    // Raising precision is exact.
                    Scalar::Float(b) => b.clone().with_precision(p).value(),
                    Scalar::Exact(_) => unreachable!("float matrix"),
                })
                .collect()
        })
        .collect();

    let mut sign = 1i8;
    let mut detv = Bits::ONE.with_precision(p).value();
    for k in 0..n {
        let abs = |b: &Bits| if *b < Bits::ZERO { -b.clone() } else { b.clone() };
        let pivot_row =
            (k..n).max_by(|&i, &j| abs(&a[i][k]).partial_cmp(&abs(&a[j][k])).unwrap());
        let r = pivot_row.expect("nonempty range");
        if a[r][k] == zero {
            return zero;
        }
        if r != k {
            a.swap(k, r);
            sign = -sign;
        }
        detv *= a[k][k].clone();
        for i in (k + 1)..n {
            let f = a[i][k].clone() / a[k][k].clone();
            for j in (k + 1)..n {
                let t = f.clone() * a[k][j].clone();
                a[i][j] -= t;
            }
            a[i][k] = zero.clone();
        }
    }
    if sign < 0 {
        detv = -detv;
    }
    detv
}

/// Reference determinant by cofactor expansion along the first row.
/// Exponential cost; meant for cross-checking the elimination kernels.
pub fn det_cofactor(m: &Matrix) -> Scalar {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 1 {
        return m.entry(0, 0).clone();
    }
    let all_rows: Vec<usize> = (1..n).collect();
    let mut acc = m.entry(0, 0).zero_like();
    for j in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let sub = m.submatrix(&all_rows, &cols);
        let term = m.entry(0, j) * &det_cofactor(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Rank of an exact matrix via rational Gaussian elimination.
/// Panics on float input: float rank is tolerance-relative and the callers
/// that need rank (densification preconditions) require exactness anyway.
pub fn rank_exact(m: &Matrix) -> usize {
    assert!(m.is_exact(), "rank_exact requires an exact matrix");
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.entry(i, j).as_exact().unwrap().clone()).collect())
        .collect();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        match (rank..rows).find(|&r| !a[r][col].is_zero()) {
            None => {
                col += 1;
                continue;
            }
            Some(r) => {
                a.swap(rank, r);
                for i in (rank + 1)..rows {
                    if a[i][col].is_zero() {
                        continue;
                    }
                    let f = &a[i][col] / &a[rank][col];
                    for j in col..cols {
                        let t = &f * &a[rank][j];
                        a[i][j] -= t;
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// Lexicographic k-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    next: Option<Vec<usize>>,
}

/// All `k`-element subsets of `{0, .., n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    assert!(k >= 1, "empty combinations are not enumerated");
    let next = (k <= n).then(|| (0..k).collect());
    Combinations { n, next }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let k = cur.len();
        let mut succ = cur.clone();
        // Rightmost index that can still move right.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] != i + self.n - k {
                succ[i] += 1;
                for j in (i + 1)..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                return Some(cur);
            }
        }
        Some(cur)
    }
}

/// Stream of all order-`k` minors in lexicographic (rows, then cols) order.
pub struct MinorStream<'a> {
    m: &'a Matrix,
    rows_iter: Combinations,
    cur_rows: Option<Vec<usize>>,
    cols_iter: Combinations,
    k: usize,
}

/// Enumerate every order-`k` minor of `m`, deterministically.
pub fn minors_of_size(m: &Matrix, k: usize) -> MinorStream<'_> {
    assert!(k >= 1 && k <= m.min_dim(), "minor order out of range");
    let mut rows_iter = combinations(m.rows(), k);
    let cur_rows = rows_iter.next();
    MinorStream { m, rows_iter, cur_rows, cols_iter: combinations(m.cols(), k), k }
}

impl Iterator for MinorStream<'_> {
    type Item = (MinorIndex, Scalar);

    fn next(&mut self) -> Option<(MinorIndex, Scalar)> {
        loop {
            let rows = self.cur_rows.as_ref()?;
            if let Some(cols) = self.cols_iter.next() {
                let idx = MinorIndex::new(rows.clone(), cols);
                let v = det(&self.m.submatrix(&idx.rows, &idx.cols));
                return Some((idx, v));
            }
            self.cur_rows = self.rows_iter.next();
            self.cols_iter = combinations(self.m.cols(), self.k);
        }
    }
}

/// Order-`k` minors on contiguous index windows, row-window major.
pub fn contiguous_minors_of_size(
    m: &Matrix,
    k: usize,
) -> impl Iterator<Item = (MinorIndex, Scalar)> + '_ {
    assert!(k >= 1 && k <= m.min_dim(), "minor order out of range");
    let row_starts = 0..=(m.rows() - k);
    row_starts.flat_map(move |r0| {
        (0..=(m.cols() - k)).map(move |c0| {
            let idx = MinorIndex::new((r0..r0 + k).collect(), (c0..c0 + k).collect());
            let v = det(&m.submatrix(&idx.rows, &idx.cols));
            (idx, v)
        })
    })
}

/// Order-`k` principal minors (rows = cols), lexicographic.
pub fn principal_minors_of_size(
    m: &Matrix,
    k: usize,
) -> impl Iterator<Item = (MinorIndex, Scalar)> + '_ {
    assert!(m.is_square(), "principal minors need a square matrix");
    assert!(k >= 1 && k <= m.rows(), "minor order out of range");
    combinations(m.rows(), k).map(move |s| {
        let idx = MinorIndex::new(s.clone(), s);
        let v = det(&m.submatrix(&idx.rows, &idx.cols));
        (idx, v)
    })
}

/// Leading principal minors of orders `1..=n`.
pub fn leading_principal_minors(m: &Matrix) -> Vec<(usize, Scalar)> {
    assert!(m.is_square(), "leading principal minors need a square matrix");
    (1..=m.rows()).map(|k| (k, det(&m.leading_principal(k)))).collect()
}
