//! Positivity checks with explicit certificates.
//!
//! Every check returns a [`Certificate`] naming the verdict, the first
//! offending (or undecidable) minor in a deterministic scan order, and the
//! tolerance that was in force. Scan orders are fixed — ascending minor
//! order, then lexicographic row and column sets — so witnesses are
//! reproducible run to run.
//!
//! # Verdict semantics
//!
//! Exact matrices are decided exactly; `Inconclusive` never occurs. Float
//! matrices compare each minor against a scale-aware threshold
//! `tau = tol_base * prod_i max_j |s_ij|`, the product of row maxima of the
//! submatrix behind the minor. That product is a Hadamard-style bound on the
//! determinant's magnitude, so it tracks the roundoff of the minor itself and
//! stays meaningful for matrices whose entries span many orders of magnitude:
//!
//! * **Weak properties** (nonnegativity of minors) treat `|minor| <= tau` as
//!   zero — the matrix passes, and the certificate counts how many minors
//!   were accepted that way. A weak check only fails on evidence
//!   (`minor < -tau`), so it never returns `Inconclusive`.
//! * **Strict properties** (positivity of minors) hold only on `minor > tau`,
//!   fail on `minor < -tau`, and return `Inconclusive` when some minor lands
//!   inside the band and nothing refutes outright.

use serde::Serialize;

use crate::kernel;
use crate::matrix::{Matrix, MinorIndex};
use crate::scalar::Scalar;

/// Which positivity property to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// All minors nonnegative.
    TotallyNonneg,
    /// All minors positive (decided through contiguous minors).
    TotallyPositive,
    /// All minors of order at most `r` nonnegative.
    TotallyNonnegOrder(usize),
    /// All minors of order at most `r` positive.
    TotallyPositiveOrder(usize),
    /// Symmetric with positive leading principal minors.
    PositiveDefinite,
    /// Symmetric with nonnegative principal minors.
    PositiveSemidefinite,
    /// Square Hankel matrix that is totally positive, decided through the
    /// positive-definiteness of the matrix and its shifted block.
    HankelTotallyPositive,
}

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A minor pinned by the scan, with the threshold it was compared against.
#[derive(Clone, Debug, Serialize)]
pub struct MinorWitness {
    pub index: MinorIndex,
    pub value: Scalar,
    pub threshold: Scalar,
}

/// Outcome plus the evidence trail of one check.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub property: Property,
    pub verdict: Verdict,
    /// Offending minor for `Fails`; first in-band minor for `Inconclusive`.
    pub witness: Option<MinorWitness>,
    /// Total minors evaluated before the scan stopped.
    pub minors_checked: usize,
    /// Weak checks: minors with `|value| <= tau` accepted as zero.
    pub zeros_accepted: usize,
    /// Whether the decision used exact arithmetic.
    pub exact: bool,
    pub tol_base: f64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Tuning for the checks.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Base tolerance for float comparisons; scaled per minor by the product
    /// of row maxima of the submatrix.
    pub tol_base: f64,
    /// Largest `min(rows, cols)` for which exhaustive minor enumeration
    /// (full nonnegativity / semidefiniteness) is attempted.
    pub max_enumeration_dim: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions { tol_base: 1e-9, max_enumeration_dim: 10 }
    }
}

/// Errors before any minor is evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    /// Exhaustive enumeration refused; `dim` exceeds the configured cap.
    TooLarge { dim: usize, max: usize },
    NotSquare,
    NotSymmetric,
    NotHankel,
    /// Order-bounded property with order zero.
    ZeroOrder,
    /// Tolerance must be a finite nonnegative number.
    BadTolerance,
}

impl std::fmt::Display for CheckError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckError::TooLarge { dim, max } => write!(
                f,
                "exhaustive minor enumeration refused for dimension {dim} (cap {max})"
            ),
            CheckError::NotSquare => f.write_str("property requires a square matrix"),
            CheckError::NotSymmetric => f.write_str("property requires a symmetric matrix"),
            CheckError::NotHankel => f.write_str("property requires a Hankel matrix"),
            CheckError::ZeroOrder => f.write_str("minor order must be at least 1"),
            CheckError::BadTolerance => f.write_str("tolerance must be finite and nonnegative"),
        }
    }
}

impl std::error::Error for CheckError {}

/// Per-minor threshold `tol_base * prod_i max_j |s_ij|` over the submatrix
/// rows; zero for exact matrices.
fn threshold_for(sub: &Matrix, tol_base: f64) -> Scalar {
    if sub.is_exact() {
        return Scalar::zero();
    }
    let precision = sub
        .entries()
        .filter_map(|s| s.precision())
        .max()
        .unwrap_or(crate::scalar::MIN_PRECISION);
    let tol = Scalar::float_from_f64(tol_base, precision).expect("finite tolerance");
    let mut scale = Scalar::one().to_float(precision);
    for i in 0..sub.rows() {
        let mut row_max = Scalar::zero();
        for j in 0..sub.cols() {
            let a = sub.entry(i, j).abs();
            if a > row_max {
                row_max = a;
            }
        }
        scale = &scale * &row_max.to_float(precision);
    }
    &tol * &scale
}

enum ScanKind {
    Weak,
    Strict,
}

struct Scan {
    kind: ScanKind,
    exact: bool,
    minors_checked: usize,
    zeros_accepted: usize,
    first_in_band: Option<MinorWitness>,
    refutation: Option<MinorWitness>,
}

impl Scan {
    fn new(kind: ScanKind, exact: bool) -> Scan {
        Scan {
            kind,
            exact,
            minors_checked: 0,
            zeros_accepted: 0,
            first_in_band: None,
            refutation: None,
        }
    }

    /// Feed one minor; returns `true` when the scan can stop early.
    fn feed(&mut self, index: MinorIndex, value: Scalar, tau: &Scalar) -> bool {
        self.minors_checked += 1;
        let neg_tau = -tau.clone();
        if value < neg_tau {
            self.refutation = Some(MinorWitness { index, value, threshold: tau.clone() });
            return true;
        }
        let in_band = value <= *tau;
        match self.kind {
            ScanKind::Weak => {
                if in_band {
                    self.zeros_accepted += 1;
                }
            }
            ScanKind::Strict if in_band => {
                if self.exact {
                    // An exactly-zero minor definitively refutes strictness.
                    self.refutation =
                        Some(MinorWitness { index, value, threshold: tau.clone() });
                    return true;
                }
                if self.first_in_band.is_none() {
                    self.first_in_band = Some(MinorWitness { index, value, threshold: tau.clone() });
                }
            }
            ScanKind::Strict => {}
        }
        false
    }

    fn conclude(self, property: Property, tol_base: f64) -> Certificate {
        let (verdict, witness) = if let Some(w) = self.refutation {
            (Verdict::Fails, Some(w))
        } else if let Some(w) = self.first_in_band {
            (Verdict::Inconclusive, Some(w))
        } else {
            (Verdict::Holds, None)
        };
        Certificate {
            property,
            verdict,
            witness,
            minors_checked: self.minors_checked,
            zeros_accepted: self.zeros_accepted,
            exact: self.exact,
            tol_base,
        }
    }
}

/// Run `property` on `m` under `opts`.
pub fn check(m: &Matrix, property: Property, opts: &CheckOptions) -> Result<Certificate, CheckError> {
    if !opts.tol_base.is_finite() || opts.tol_base < 0.0 {
        return Err(CheckError::BadTolerance);
    }
    match property {
        Property::TotallyNonneg => full_nonneg_scan(m, property, m.min_dim(), true, opts),
        Property::TotallyNonnegOrder(r) => {
            if r == 0 {
                return Err(CheckError::ZeroOrder);
            }
            full_nonneg_scan(m, property, r.min(m.min_dim()), false, opts)
        }
        Property::TotallyPositive => contiguous_positive_scan(m, property, m.min_dim(), opts),
        Property::TotallyPositiveOrder(r) => {
            if r == 0 {
                return Err(CheckError::ZeroOrder);
            }
            contiguous_positive_scan(m, property, r.min(m.min_dim()), opts)
        }
        Property::PositiveDefinite => {
            require_symmetric(m)?;
            let mut scan = Scan::new(ScanKind::Strict, m.is_exact());
            for k in 1..=m.rows() {
                let sub = m.leading_principal(k);
                let tau = threshold_for(&sub, opts.tol_base);
                let value = kernel::det(&sub);
                let idx = MinorIndex::new((0..k).collect(), (0..k).collect());
                if scan.feed(idx, value, &tau) {
                    break;
                }
            }
            Ok(scan.conclude(property, opts.tol_base))
        }
        Property::PositiveSemidefinite => {
            require_symmetric(m)?;
            if m.rows() > opts.max_enumeration_dim {
                return Err(CheckError::TooLarge { dim: m.rows(), max: opts.max_enumeration_dim });
            }
            let mut scan = Scan::new(ScanKind::Weak, m.is_exact());
            'outer: for k in 1..=m.rows() {
                for sets in kernel::combinations(m.rows(), k) {
                    let sub = m.submatrix(&sets, &sets);
                    let tau = threshold_for(&sub, opts.tol_base);
                    let value = kernel::det(&sub);
                    if scan.feed(MinorIndex::new(sets.clone(), sets), value, &tau) {
                        break 'outer;
                    }
                }
            }
            Ok(scan.conclude(property, opts.tol_base))
        }
        Property::HankelTotallyPositive => hankel_tp(m, opts),
    }
}

fn require_symmetric(m: &Matrix) -> Result<(), CheckError> {
    if !m.is_square() {
        return Err(CheckError::NotSquare);
    }
    if !m.is_symmetric() {
        return Err(CheckError::NotSymmetric);
    }
    Ok(())
}

fn full_nonneg_scan(
    m: &Matrix,
    property: Property,
    max_order: usize,
    unbounded: bool,
    opts: &CheckOptions,
) -> Result<Certificate, CheckError> {
    if unbounded && m.min_dim() > opts.max_enumeration_dim {
        return Err(CheckError::TooLarge { dim: m.min_dim(), max: opts.max_enumeration_dim });
    }
    let mut scan = Scan::new(ScanKind::Weak, m.is_exact());
    'outer: for k in 1..=max_order {
        for rows in kernel::combinations(m.rows(), k) {
            for cols in kernel::combinations(m.cols(), k) {
                let sub = m.submatrix(&rows, &cols);
                let tau = threshold_for(&sub, opts.tol_base);
                let value = kernel::det(&sub);
                if scan.feed(MinorIndex::new(rows.clone(), cols), value, &tau) {
                    break 'outer;
                }
            }
        }
    }
    Ok(scan.conclude(property, opts.tol_base))
}

/// Contiguous-minor criterion: a matrix whose contiguous minors of orders
/// `1..=max_order` are all positive has all its minors of those orders
/// positive, so scanning windows decides strict total positivity.
fn contiguous_positive_scan(
    m: &Matrix,
    property: Property,
    max_order: usize,
    opts: &CheckOptions,
) -> Result<Certificate, CheckError> {
    let mut scan = Scan::new(ScanKind::Strict, m.is_exact());
    'outer: for k in 1..=max_order {
        for r0 in 0..=(m.rows() - k) {
            for c0 in 0..=(m.cols() - k) {
                let rows: Vec<usize> = (r0..r0 + k).collect();
                let cols: Vec<usize> = (c0..c0 + k).collect();
                let sub = m.submatrix(&rows, &cols);
                let tau = threshold_for(&sub, opts.tol_base);
                let value = kernel::det(&sub);
                if scan.feed(MinorIndex::new(rows.clone(), cols), value, &tau) {
                    break 'outer;
                }
            }
        }
    }
    Ok(scan.conclude(property, opts.tol_base))
}

/// A square Hankel matrix is totally positive exactly when the matrix and
/// its first-row-dropped/last-column-dropped block are positive definite.
fn hankel_tp(m: &Matrix, opts: &CheckOptions) -> Result<Certificate, CheckError> {
    if !m.is_square() {
        return Err(CheckError::NotSquare);
    }
    if !m.is_hankel() {
        return Err(CheckError::NotHankel);
    }
    let first = check(m, Property::PositiveDefinite, opts)?;
    let mut minors = first.minors_checked;
    let combine = |mut cert: Certificate, minors: usize| {
        cert.property = Property::HankelTotallyPositive;
        cert.minors_checked = minors;
        cert
    };
    if first.verdict == Verdict::Fails {
        return Ok(combine(first, minors));
    }
    if m.rows() < 2 {
        return Ok(combine(first, minors));
    }
    let shifted = m.drop_first_row_last_col();
    let second = check(&shifted, Property::PositiveDefinite, opts)?;
    minors += second.minors_checked;
    // Map the shifted block's witness back into the original coordinates.
    let relabel = |w: MinorWitness| MinorWitness {
        index: MinorIndex::new(w.index.rows.iter().map(|r| r + 1).collect(), w.index.cols),
        value: w.value,
        threshold: w.threshold,
    };
    let cert = match (first.verdict, second.verdict) {
        (_, Verdict::Fails) => Certificate { witness: second.witness.map(relabel), ..second },
        (Verdict::Inconclusive, _) => first,
        (_, Verdict::Inconclusive) => Certificate { witness: second.witness.map(relabel), ..second },
        _ => first,
    };
    Ok(combine(cert, minors))
}

/// All minors nonnegative, default options.
pub fn is_tn(m: &Matrix) -> Result<Certificate, CheckError> {
    check(m, Property::TotallyNonneg, &CheckOptions::default())
}

/// All minors positive, default options.
pub fn is_tp(m: &Matrix) -> Result<Certificate, CheckError> {
    check(m, Property::TotallyPositive, &CheckOptions::default())
}

/// Symmetric positive definite, default options.
pub fn is_pos_def(m: &Matrix) -> Result<Certificate, CheckError> {
    check(m, Property::PositiveDefinite, &CheckOptions::default())
}

/// Symmetric positive semidefinite, default options.
pub fn is_pos_semidef(m: &Matrix) -> Result<Certificate, CheckError> {
    check(m, Property::PositiveSemidefinite, &CheckOptions::default())
}

/// Hankel total positivity through the two-block definiteness criterion.
pub fn is_tp_hankel(m: &Matrix) -> Result<Certificate, CheckError> {
    check(m, Property::HankelTotallyPositive, &CheckOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::Scalar;

    fn exact(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::exact_from_i64(rows, cols, e).unwrap()
    }

    #[test]
    fn tn_accepts_zero_minors_and_counts_them() {
        let ones = exact(2, 2, &[1, 1, 1, 1]);
        let cert = is_tn(&ones).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        assert!(cert.exact);
        assert_eq!(cert.zeros_accepted, 1);
        assert_eq!(cert.minors_checked, 5);
    }

    #[test]
    fn tn_fails_with_deterministic_witness() {
        let m = exact(2, 2, &[1, 2, 2, 1]);
        let cert = is_tn(&m).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        let w = cert.witness.unwrap();
        assert_eq!(w.index, MinorIndex::new(vec![0, 1], vec![0, 1]));
        assert_eq!(w.value, Scalar::from_int(-3));
    }

    #[test]
    fn tp_strict_vs_exact_zero() {
        // Exact: a zero minor refutes strict positivity outright.
        let ones = exact(2, 2, &[1, 1, 1, 1]);
        let cert = is_tp(&ones).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        // Float: the same value sits inside the tolerance band.
        let cert = is_tp(&ones.to_float(96)).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(cert.witness.is_some());
    }

    #[test]
    fn tp_holds_and_fails() {
        let good = exact(2, 2, &[2, 1, 1, 2]);
        assert_eq!(is_tp(&good).unwrap().verdict, Verdict::Holds);
        let bad = exact(2, 2, &[1, 2, 2, 1]);
        assert_eq!(is_tp(&bad).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn order_bounded_checks() {
        // 3x3 with a negative 3x3 determinant but nonnegative smaller minors.
        let m = exact(3, 3, &[1, 1, 0, 1, 1, 1, 0, 1, 1]);
        assert_eq!(kernel_det_sign(&m), -1);
        let opts = CheckOptions::default();
        let c2 = check(&m, Property::TotallyNonnegOrder(2), &opts).unwrap();
        assert_eq!(c2.verdict, Verdict::Holds);
        let c3 = check(&m, Property::TotallyNonnegOrder(3), &opts).unwrap();
        assert_eq!(c3.verdict, Verdict::Fails);
        assert!(matches!(
            check(&m, Property::TotallyNonnegOrder(0), &opts),
            Err(CheckError::ZeroOrder)
        ));
    }

    fn kernel_det_sign(m: &Matrix) -> i8 {
        match crate::kernel::det(m).sign() {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    #[test]
    fn positive_definite_checks() {
        let pd = exact(2, 2, &[2, 1, 1, 2]);
        assert_eq!(is_pos_def(&pd).unwrap().verdict, Verdict::Holds);
        let not_pd = exact(2, 2, &[1, 2, 2, 1]);
        let cert = is_pos_def(&not_pd).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        assert_eq!(cert.witness.unwrap().index.order(), 2);
        let asym = exact(2, 2, &[1, 2, 3, 4]);
        assert!(matches!(is_pos_def(&asym), Err(CheckError::NotSymmetric)));
    }

    #[test]
    fn positive_semidefinite_weak() {
        let psd = exact(2, 2, &[1, 1, 1, 1]);
        let cert = is_pos_semidef(&psd).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        assert_eq!(cert.zeros_accepted, 1);
        let not_psd = exact(2, 2, &[0, 0, 0, -1]);
        assert_eq!(is_pos_semidef(&not_psd).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn hankel_criterion() {
        let moments: Vec<Scalar> =
            [1, 2, 5, 14, 42].iter().map(|&n| Scalar::from_int(n)).collect();
        let h = Matrix::hankel_from_moments(&moments).unwrap();
        assert_eq!(is_tp_hankel(&h).unwrap().verdict, Verdict::Holds);

        let flat: Vec<Scalar> = vec![Scalar::one(); 5];
        let ones = Matrix::hankel_from_moments(&flat).unwrap();
        let cert = is_tp_hankel(&ones).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);

        let not_hankel = exact(2, 2, &[1, 2, 3, 4]);
        assert!(matches!(is_tp_hankel(&not_hankel), Err(CheckError::NotHankel)));
    }

    #[test]
    fn hankel_witness_maps_back_to_original_indices() {
        // Matrix PD, shifted block not: moments 1,1,2,1,9 give
        // shifted block [[1,2],[2,1]] with determinant -3.
        let moments: Vec<Scalar> =
            [1, 1, 2, 1, 9].iter().map(|&n| Scalar::from_int(n)).collect();
        let h = Matrix::hankel_from_moments(&moments).unwrap();
        let first = is_pos_def(&h).unwrap();
        assert_eq!(first.verdict, Verdict::Holds);
        let cert = is_tp_hankel(&h).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        let w = cert.witness.unwrap();
        assert_eq!(w.index, MinorIndex::new(vec![1, 2], vec![0, 1]));
    }

    #[test]
    fn tolerance_band_scales_with_entry_size() {
        // Rows peak at 100: tau = 1e-9 * (100 * 100) = 1e-5 swallows 1e-7.
        let m = Matrix::from_rows(vec![
            vec![Scalar::from_int(100), Scalar::from_int(100)],
            vec![
                Scalar::from_int(100),
                &Scalar::from_int(100) + &Scalar::from_ratio(1, 1_000_000_000),
            ],
        ])
        .unwrap()
        .to_float(128);
        let cert = is_tp(&m).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        // A tighter base tolerance resolves it.
        let opts = CheckOptions { tol_base: 1e-15, ..Default::default() };
        let cert = check(&m, Property::TotallyPositive, &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
    }

    #[test]
    fn tolerance_is_per_minor_not_global() {
        // Vandermonde-style matrix with entries spanning 4096 to 1/4096: the
        // small-row minors are tiny against the global norm but large against
        // their own rows, so the per-minor scale keeps the scan conclusive.
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), Scalar::from_ratio(1, 64), Scalar::from_ratio(1, 4096)],
            vec![Scalar::one(), Scalar::one(), Scalar::one()],
            vec![Scalar::one(), Scalar::from_int(64), Scalar::from_int(4096)],
        ])
        .unwrap()
        .to_float(128);
        let cert = is_tp(&m).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
    }

    #[test]
    fn enumeration_guard() {
        let big = Matrix::from_fn(11, 11, |_, _| Scalar::one()).unwrap();
        assert!(matches!(is_tn(&big), Err(CheckError::TooLarge { dim: 11, max: 10 })));
        // Order-bounded scans are still allowed on wide matrices.
        let cert = check(&big, Property::TotallyNonnegOrder(2), &CheckOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
    }
}
