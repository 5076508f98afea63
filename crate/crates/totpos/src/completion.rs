//! Constructive embeddings and completions of small positive data.
//!
//! Four constructions are provided:
//!
//! * Embedding a totally positive 2×2 matrix into a larger generalized
//!   Vandermonde matrix `(u_i^{α_j})` — at the leading position or at an
//!   arbitrary pair of rows and columns. The scaled copy `μ·A` appears
//!   verbatim as the selected minor.
//! * Completing symmetric 2×2 data `[[a,b],[b,c]]` (with `ac > b²`) to a
//!   totally positive Hankel moment matrix of any size, via a closed-form
//!   moment sequence.
//! * Extending a totally positive Hankel matrix backwards by two moments,
//!   choosing each new moment past the largest root of the affine leading
//!   minors plus a safety margin.
//! * Densifying a full-rank totally nonnegative matrix to a nearby totally
//!   positive one by sandwiching it between Gaussian kernels.
//!
//! Every construction re-checks its output with [`crate::checker`] before
//! returning; a construction whose certificate does not come back `Holds` is
//! reported as [`CompletionError::VerificationFailed`] rather than returned.
//! Float verification uses a tolerance suited to 128-bit arithmetic rather
//! than the checker's looser default.

use std::fmt;

use serde::Serialize;

use crate::checker::{check, Certificate, CheckOptions, Property, Verdict};
use crate::kernel;
use crate::matrix::Matrix;
use crate::scalar::{NumericError, Scalar, MIN_PRECISION};

/// Verification tolerance for float-mode completions.
///
/// The checker scales this by the product of row maxima of each minor's
/// submatrix. At 128-bit precision a `k × k` determinant carries roundoff
/// below `k³ · 2⁻¹²⁸ ≈ 2e-36` on that same scale (`k ≤ 8` here), so `1e-33`
/// still dominates roundoff by three orders while sitting far below the
/// genuinely small minors of extended Hankel moment matrices.
pub const COMPLETION_TOL: f64 = 1e-33;

fn verify_opts() -> CheckOptions {
    CheckOptions { tol_base: COMPLETION_TOL, ..CheckOptions::default() }
}

/// Certifies a realized node/exponent grid totally positive, escalating
/// precision when the verdict is indeterminate.
///
/// A generalized Vandermonde grid spanning a wide exponent range has minors
/// that are strictly positive yet tiny relative to its row scales; deciding
/// them needs an indeterminacy band narrower than [`COMPLETION_TOL`], which
/// is only sound with correspondingly finer arithmetic. Each escalation
/// doubles the precision and shrinks the band by the same binary factor,
/// keeping it a constant ~2^17 above the roundoff floor.
fn verify_grid_tp(
    nodes: &[Scalar],
    exponents: &[Scalar],
    precision: usize,
) -> Result<Certificate, CompletionError> {
    let base = precision.max(MIN_PRECISION);
    let mut p = base;
    loop {
        let realized = realize_grid(nodes, exponents, p)?;
        let tol = COMPLETION_TOL * (2f64).powi(base as i32 - p as i32);
        let opts = CheckOptions { tol_base: tol, ..CheckOptions::default() };
        let cert = check(&realized, Property::TotallyPositive, &opts)
            .map_err(|_| CompletionError::BadParameters("verification setup failed".to_string()))?;
        // Stop on a decision, or once the band would leave f64 range.
        if cert.verdict != Verdict::Inconclusive || p >= 8 * base || tol < 1e-290 {
            if !cert.holds() {
                return Err(CompletionError::VerificationFailed(Box::new(cert)));
            }
            return Ok(cert);
        }
        p *= 2;
    }
}

/// Errors from the completion constructions.
#[derive(Debug, Clone)]
pub enum CompletionError {
    /// Input data fails its positivity precondition.
    NotTotallyPositive,
    /// Parameter constraint violated; the message names it.
    BadParameters(String),
    /// Densification requires a full-rank input; the rank-deficient case is
    /// unsupported.
    RankDeficient,
    /// Densification requires exact (rational) input, since rank is decided
    /// exactly.
    InexactInput,
    /// Arithmetic domain error while solving.
    Numeric(NumericError),
    /// The construction finished but its output failed the final check.
    VerificationFailed(Box<Certificate>),
    /// Densification could not meet the distance bound within its budget.
    ToleranceNotReached { iterations: usize },
}

impl fmt::Display for CompletionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionError::NotTotallyPositive => {
                f.write_str("input does not satisfy the required positivity")
            }
            CompletionError::BadParameters(msg) => write!(f, "bad parameters: {msg}"),
            CompletionError::RankDeficient => f.write_str(
                "unsupported: densification is implemented only for full-rank inputs",
            ),
            CompletionError::InexactInput => {
                f.write_str("densification requires exact (rational) input")
            }
            CompletionError::Numeric(e) => write!(f, "arithmetic error: {e}"),
            CompletionError::VerificationFailed(cert) => {
                write!(f, "construction failed verification ({:?})", cert.verdict)
            }
            CompletionError::ToleranceNotReached { iterations } => {
                write!(f, "distance bound not reached within {iterations} iterations")
            }
        }
    }
}

impl std::error::Error for CompletionError {}

impl From<NumericError> for CompletionError {
    fn from(e: NumericError) -> CompletionError {
        CompletionError::Numeric(e)
    }
}

/// Which structural branch solved the 2×2 system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedCase {
    /// Three entries equal, top-left entry differs.
    TopLeftDiffers,
    /// Three entries equal, top-right entry differs.
    TopRightDiffers,
    /// Three entries equal, bottom-left entry differs.
    BottomLeftDiffers,
    /// Three entries equal, bottom-right entry differs.
    BottomRightDiffers,
    /// First row has two equal entries.
    FirstRowEqual,
    /// Second row has two equal entries.
    SecondRowEqual,
    /// First column has two equal entries.
    FirstColumnEqual,
    /// Second column has two equal entries.
    SecondColumnEqual,
    /// No row or column carries equal entries; the logarithmic solve.
    Generic,
}

/// A generalized Vandermonde embedding of a 2×2 totally positive matrix.
///
/// The realized matrix is `(nodes[i] ^ exponents[j])`; it contains `mu`
/// times the input at rows `rows` and columns `cols`. Nodes and exponents
/// are strictly monotone in the same direction.
#[derive(Clone, Debug)]
pub struct VandermondeEmbedding {
    pub mu: Scalar,
    pub nodes: Vec<Scalar>,
    pub exponents: Vec<Scalar>,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub case: EmbedCase,
    /// Verification of the realized matrix (always `Holds` when returned).
    pub certificate: Certificate,
}

impl VandermondeEmbedding {
    /// Evaluates `(nodes[i] ^ exponents[j])` at the given float precision.
    /// Stays exact when every node and exponent is exact and the exponents
    /// are integers.
    pub fn realize(&self, precision: usize) -> Result<Matrix, NumericError> {
        realize_grid(&self.nodes, &self.exponents, precision)
    }
}

fn realize_grid(
    nodes: &[Scalar],
    exponents: &[Scalar],
    precision: usize,
) -> Result<Matrix, NumericError> {
    let mut rows = Vec::with_capacity(nodes.len());
    let mut any_float = false;
    for u in nodes {
        let mut row = Vec::with_capacity(exponents.len());
        for alpha in exponents {
            let e = u.pow(alpha, precision)?;
            any_float = any_float || e.as_exact().is_none();
            row.push(e);
        }
        rows.push(row);
    }
    if any_float {
        for row in &mut rows {
            for e in row.iter_mut() {
                *e = e.to_float(precision);
            }
        }
    }
    Ok(Matrix::from_rows(rows).expect("uniform embedding entries"))
}

// Solves `mu * A = (u_i^{alpha_j})` for a TP 2x2 matrix A, returning
// (mu, [u1, u2], [alpha1, alpha2], case). The branches mirror the equality
// structure of A; every branch yields node and exponent pairs that are
// strictly monotone in the same direction.
fn solve_2x2(
    m2: &Matrix,
    precision: usize,
) -> Result<(Scalar, [Scalar; 2], [Scalar; 2], EmbedCase), CompletionError> {
    let a = m2.entry(0, 0).clone();
    let b = m2.entry(0, 1).clone();
    let c = m2.entry(1, 0).clone();
    let d = m2.entry(1, 1).clone();
    let one = Scalar::one();
    let inv = |x: &Scalar| Scalar::one().checked_div(x);

    let (mu, u, alpha, case) = if b == c && c == d {
        // Three equal off the top-left corner: mu*A = [[a/v, 1], [1, 1]].
        (inv(&b)?, [a.checked_div(&b)?, one.clone()], [one.clone(), Scalar::zero()], EmbedCase::TopLeftDiffers)
    } else if a == c && c == d {
        (inv(&a)?, [b.checked_div(&a)?, one.clone()], [Scalar::zero(), one.clone()], EmbedCase::TopRightDiffers)
    } else if a == b && b == d {
        (inv(&a)?, [one.clone(), c.checked_div(&a)?], [one.clone(), Scalar::zero()], EmbedCase::BottomLeftDiffers)
    } else if a == b && b == c {
        (inv(&a)?, [one.clone(), d.checked_div(&a)?], [Scalar::zero(), one.clone()], EmbedCase::BottomRightDiffers)
    } else if a == b {
        // Row (1, 1) against (gamma, delta): exponent log(delta)/log(gamma).
        let gamma = c.checked_div(&a)?;
        let delta = d.checked_div(&a)?;
        let alpha2 = delta.ln(precision)?.checked_div(&gamma.ln(precision)?)?;
        (inv(&a)?, [one.clone(), gamma], [one.clone(), alpha2], EmbedCase::FirstRowEqual)
    } else if c == d {
        let gamma = b.checked_div(&c)?;
        let delta = a.checked_div(&c)?;
        let alpha2 = gamma.ln(precision)?.checked_div(&delta.ln(precision)?)?;
        (inv(&c)?, [delta, one.clone()], [one.clone(), alpha2], EmbedCase::SecondRowEqual)
    } else if b == d {
        (inv(&b)?, [a.checked_div(&b)?, c.checked_div(&b)?], [one.clone(), Scalar::zero()], EmbedCase::SecondColumnEqual)
    } else if a == c {
        (inv(&a)?, [b.checked_div(&a)?, d.checked_div(&a)?], [Scalar::zero(), one.clone()], EmbedCase::FirstColumnEqual)
    } else {
        // Generic: log-linear solve for the scale, then the exponent.
        let la = a.ln(precision)?;
        let lb = b.ln(precision)?;
        let lc = c.ln(precision)?;
        let ld = d.ln(precision)?;
        let log_ratio = (&(&a * &d)).checked_div(&(&b * &c))?.ln(precision)?;
        let mu = (&(&lb * &lc) - &(&la * &ld)).checked_div(&log_ratio)?.exp(precision);
        let alpha2 = b.checked_div(&d)?.ln(precision)?.checked_div(&a.checked_div(&c)?.ln(precision)?)?;
        let u = [&mu * &a, &mu * &c];
        (mu, u, [one.clone(), alpha2], EmbedCase::Generic)
    };

    // Monotone-direction invariant: nodes and exponents run the same way.
    let node_dir = u[0].partial_cmp(&u[1]);
    let expo_dir = alpha[0].partial_cmp(&alpha[1]);
    if node_dir != expo_dir || node_dir == Some(std::cmp::Ordering::Equal) || node_dir.is_none() {
        return Err(CompletionError::BadParameters(
            "internal: node/exponent directions disagree".to_string(),
        ));
    }
    Ok((mu, u, alpha, case))
}

enum Outward {
    /// New values double (or halve) the neighbour: node grids.
    Geometric,
    /// New values step by one: exponent grids.
    Unit,
}

// Places `first` at index p and `second` at index p2 of a strictly monotone
// grid of the given length: linear interpolation between them, and
// geometric or unit steps outward.
fn build_grid(
    first: &Scalar,
    second: &Scalar,
    p: usize,
    p2: usize,
    len: usize,
    outward: Outward,
) -> Vec<Scalar> {
    let asc = first < second;
    let mut g = vec![Scalar::zero(); len];
    g[p] = first.clone();
    g[p2] = second.clone();
    let gap = p2 - p;
    let diff = second - first;
    for t in 1..gap {
        g[p + t] = first + &(&diff * &Scalar::from_ratio(t as i64, gap as i64));
    }
    let two = Scalar::from_int(2);
    let half = Scalar::from_ratio(1, 2);
    let one = Scalar::one();
    for t in 0..p {
        let i = p - 1 - t;
        g[i] = match outward {
            Outward::Geometric => {
                if asc {
                    &g[i + 1] * &half
                } else {
                    &g[i + 1] * &two
                }
            }
            Outward::Unit => {
                if asc {
                    &g[i + 1] - &one
                } else {
                    &g[i + 1] + &one
                }
            }
        };
    }
    for i in (p2 + 1)..len {
        g[i] = match outward {
            Outward::Geometric => {
                if asc {
                    &g[i - 1] * &two
                } else {
                    &g[i - 1] * &half
                }
            }
            Outward::Unit => {
                if asc {
                    &g[i - 1] + &one
                } else {
                    &g[i - 1] - &one
                }
            }
        };
    }
    g
}

fn require_tp_2x2(m2: &Matrix) -> Result<(), CompletionError> {
    if m2.rows() != 2 || m2.cols() != 2 {
        return Err(CompletionError::BadParameters("expected a 2x2 matrix".to_string()));
    }
    match check(m2, Property::TotallyPositive, &verify_opts()) {
        Ok(cert) if cert.holds() => Ok(()),
        _ => Err(CompletionError::NotTotallyPositive),
    }
}

/// Embeds a totally positive 2×2 matrix at the leading position of an
/// `m × n` generalized Vandermonde matrix.
pub fn embed_2x2_vandermonde(
    m2: &Matrix,
    m: usize,
    n: usize,
    precision: usize,
) -> Result<VandermondeEmbedding, CompletionError> {
    embed_2x2_at_position(m2, m, n, (0, 1), (0, 1), precision)
}

/// Embeds a totally positive 2×2 matrix so that `μ·A` appears at rows
/// `(p, p′)` and columns `(q, q′)` of an `m × n` generalized Vandermonde
/// matrix (indices zero-based, `p < p′ < m`, `q < q′ < n`).
pub fn embed_2x2_at_position(
    m2: &Matrix,
    m: usize,
    n: usize,
    rows: (usize, usize),
    cols: (usize, usize),
    precision: usize,
) -> Result<VandermondeEmbedding, CompletionError> {
    require_tp_2x2(m2)?;
    let (p, p2) = rows;
    let (q, q2) = cols;
    if !(p < p2 && p2 < m && q < q2 && q2 < n) {
        return Err(CompletionError::BadParameters(
            "positions must satisfy p < p' < m and q < q' < n".to_string(),
        ));
    }
    let (mu, u, alpha, case) = solve_2x2(m2, precision)?;
    let nodes = build_grid(&u[0], &u[1], p, p2, m, Outward::Geometric);
    let exponents = build_grid(&alpha[0], &alpha[1], q, q2, n, Outward::Unit);
    let cert = verify_grid_tp(&nodes, &exponents, precision)?;
    Ok(VandermondeEmbedding { mu, nodes, exponents, rows, cols, case, certificate: cert })
}

/// A Hankel moment-matrix completion of symmetric 2×2 data, or the stretched
/// variant placing the data at prescribed positions.
#[derive(Clone, Debug)]
pub struct HankelCompletion {
    /// Solved growth exponent.
    pub s: Scalar,
    /// The normalizing first moment (input `a`).
    pub scale: Scalar,
    /// The target ratio `ac / b²`.
    pub rho: Scalar,
    /// Moment sequence realized by the matrix (`matrix[i][j] = moments[i+j]`).
    pub moments: Vec<Scalar>,
    pub matrix: Matrix,
    /// Verification of the matrix (always `Holds` when returned).
    pub certificate: Certificate,
    /// `(n, k, N)` for stretched embeddings; `None` for plain completions.
    pub params: Option<(usize, usize, usize)>,
}

impl HankelCompletion {
    /// Residual `|(s+1)²/(2s+1) − ρ|` of the solved exponent — zero up to
    /// roundoff by construction.
    pub fn ratio_residual(&self, precision: usize) -> Scalar {
        let one = Scalar::one();
        let sp1 = &self.s + &one;
        let num = &sp1 * &sp1;
        let den = &(&self.s + &self.s) + &one;
        let h = num.checked_div(&den).expect("2s+1 > 0");
        (&h - &self.rho.to_float(precision)).abs()
    }
}

fn check_sym_2x2_target(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Scalar, CompletionError> {
    if !a.is_positive() || !b.is_positive() || !c.is_positive() {
        return Err(CompletionError::NotTotallyPositive);
    }
    let rho = (&(a * c)).checked_div(&(b * b))?;
    if rho <= Scalar::one() {
        return Err(CompletionError::NotTotallyPositive);
    }
    Ok(rho)
}

// Positive root of (s+1)^2 / (2s+1) = rho.
fn solve_growth(rho: &Scalar, precision: usize) -> Result<Scalar, CompletionError> {
    let rm1 = rho - &Scalar::one();
    Ok(&rm1 + &(&rho.clone() * &rm1).sqrt(precision)?)
}

/// Completes symmetric 2×2 data `[[a,b],[b,c]]` (`a,b,c > 0`, `ac > b²`) to
/// a `delta × delta` totally positive Hankel matrix.
///
/// The moment sequence is `s_k = a · (b/a)^k (s+1)^k / (ks+1)` with the
/// solved growth exponent `s`; the first three moments are the inputs
/// themselves, so the leading 2×2 block reproduces the data verbatim.
pub fn complete_hankel_sym(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    delta: usize,
    precision: usize,
) -> Result<HankelCompletion, CompletionError> {
    if delta == 0 {
        return Err(CompletionError::BadParameters("size must be at least 1".to_string()));
    }
    let rho = check_sym_2x2_target(a, b, c)?;
    let s = solve_growth(&rho, precision)?;
    let ratio = b.checked_div(a)?;
    let sp1 = &s + &Scalar::one();
    let need = 2 * delta - 1;
    let mut moments = Vec::with_capacity(need);
    for prescribed in [a, b, c].into_iter().take(need) {
        moments.push(prescribed.clone());
    }
    for k in moments.len()..need {
        let kk = Scalar::from_int(k as i64);
        let growth = &ratio.pow(&kk, precision)? * &sp1.pow(&kk, precision)?;
        let denom = &(&s * &kk) + &Scalar::one();
        moments.push((&(a * &growth)).checked_div(&denom)?);
    }
    let float_moments: Vec<Scalar> = moments.iter().map(|x| x.to_float(precision)).collect();
    let matrix = Matrix::hankel_from_moments(&float_moments)
        .map_err(|_| CompletionError::BadParameters("moment count".to_string()))?;
    let cert = check(&matrix, Property::HankelTotallyPositive, &verify_opts())
        .map_err(|_| CompletionError::BadParameters("verification setup failed".to_string()))?;
    if !cert.holds() {
        return Err(CompletionError::VerificationFailed(Box::new(cert)));
    }
    Ok(HankelCompletion {
        s,
        scale: a.clone(),
        rho,
        moments: float_moments,
        matrix,
        certificate: cert,
        params: None,
    })
}

/// Two backward moments prepended to a totally positive Hankel matrix.
#[derive(Clone, Debug)]
pub struct BackwardsExtension {
    pub s_minus_1: Scalar,
    pub s_minus_2: Scalar,
    /// Margin added past the critical root (shared by both steps).
    pub margin: Scalar,
    /// Extended moment sequence, new entries first.
    pub moments: Vec<Scalar>,
    pub matrix: Matrix,
    /// Verification of the extended matrix (always `Holds` when returned).
    pub certificate: Certificate,
}

// Largest root over the leading minors of the matrix obtained by prepending
// a variable moment: each leading minor is affine in the new moment with a
// positive cofactor, so any value past every root keeps them all positive.
// The order-1 minor contributes root zero, so the result is nonnegative.
fn prepend_root(list: &[Scalar]) -> Result<Scalar, CompletionError> {
    let ext_len = list.len() + 1;
    let kmax = (ext_len + 1) / 2;
    let zero = list[0].zero_like();
    let one = list[0].one_like();
    let det_with = |t: &Scalar, k: usize| {
        let mut mom = Vec::with_capacity(2 * k - 1);
        mom.push(t.clone());
        mom.extend_from_slice(&list[..2 * k - 2]);
        let h = Matrix::hankel_from_moments(&mom).expect("odd moment count");
        kernel::det(&h)
    };
    let mut best: Option<Scalar> = None;
    for k in 1..=kmax {
        let d0 = det_with(&zero, k);
        let d1 = det_with(&one, k);
        let cofactor = &d1 - &d0;
        if cofactor.sign() != std::cmp::Ordering::Greater {
            // Degenerate cofactor; the final verification decides the run.
            continue;
        }
        let root = (-&d0).checked_div(&cofactor)?;
        best = Some(match best {
            Some(prev) if prev >= root => prev,
            _ => root,
        });
    }
    best.ok_or_else(|| CompletionError::BadParameters("no positive cofactor found".to_string()))
}

/// Prepends two moments to a totally positive Hankel moment sequence
/// (odd length, as produced by a square Hankel matrix), keeping the
/// extended matrix totally positive.
///
/// Each new moment is placed at the largest root of the affine leading
/// minors plus `margin` (default `max(1, |root|)`). With `margin = 0` the
/// critical minor vanishes, so verification rejects the result.
pub fn extend_backwards(
    moments: &[Scalar],
    margin: Option<&Scalar>,
    precision: usize,
) -> Result<BackwardsExtension, CompletionError> {
    if moments.len() < 3 || moments.len() % 2 == 0 {
        return Err(CompletionError::BadParameters(
            "expected an odd number of moments, at least 3".to_string(),
        ));
    }
    if let Some(mg) = margin {
        if mg.is_negative() {
            return Err(CompletionError::BadParameters("margin must be nonnegative".to_string()));
        }
    }
    let any_float = moments.iter().any(|x| x.as_exact().is_none());
    let list: Vec<Scalar> = if any_float {
        moments.iter().map(|x| x.to_float(precision)).collect()
    } else {
        moments.to_vec()
    };
    let input = Matrix::hankel_from_moments(&list)
        .map_err(|_| CompletionError::BadParameters("moment count".to_string()))?;
    match check(&input, Property::HankelTotallyPositive, &verify_opts()) {
        Ok(cert) if cert.holds() => {}
        _ => return Err(CompletionError::NotTotallyPositive),
    }

    let root1 = prepend_root(&list)?;
    let margin = match margin {
        Some(mg) => mg.clone(),
        None => {
            let abs = root1.abs();
            if abs >= Scalar::one() {
                abs
            } else {
                root1.one_like()
            }
        }
    };
    let s_minus_1 = &root1 + &margin;
    let mut extended = Vec::with_capacity(list.len() + 2);
    extended.push(s_minus_1.clone());
    extended.extend_from_slice(&list);

    let root2 = prepend_root(&extended)?;
    let s_minus_2 = &root2 + &margin;
    extended.insert(0, s_minus_2.clone());

    let matrix = Matrix::hankel_from_moments(&extended).expect("odd moment count");
    let cert = check(&matrix, Property::HankelTotallyPositive, &verify_opts())
        .map_err(|_| CompletionError::BadParameters("verification setup failed".to_string()))?;
    if !cert.holds() {
        return Err(CompletionError::VerificationFailed(Box::new(cert)));
    }
    Ok(BackwardsExtension {
        s_minus_1,
        s_minus_2,
        margin,
        moments: extended,
        matrix,
        certificate: cert,
    })
}

/// Completes symmetric 2×2 data to an `(N+1) × (N+1)` totally positive
/// Hankel matrix whose moments satisfy `s_n = a`, `s_{n+k} = b`, and
/// `s_{n+2k} = c` (zero-based moment indices; requires `n + 2k ≤ 2N`).
///
/// The moment law is the completion law stretched by `1/k`
/// (`t_m = a·λ^{m/k} / (1 + ms/k)` with `λ = (b/a)(s+1)`), shifted to start
/// at index `n` by backward extensions; an odd `n` is reached by dropping
/// the first row and last column of the extended matrix.
pub fn embed_equally_spaced(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    n: usize,
    k: usize,
    big_n: usize,
    precision: usize,
) -> Result<HankelCompletion, CompletionError> {
    if k == 0 {
        return Err(CompletionError::BadParameters("spacing k must be at least 1".to_string()));
    }
    if n + 2 * k > 2 * big_n {
        return Err(CompletionError::BadParameters(
            "prescribed indices must fit: n + 2k <= 2N".to_string(),
        ));
    }
    let rho = check_sym_2x2_target(a, b, c)?;
    let s = solve_growth(&rho, precision)?;
    let one = Scalar::one();
    let lambda = &b.checked_div(a)? * &(&s + &one);
    let s_over_k = s.checked_div(&Scalar::from_int(k as i64))?;

    let mut stretched = Vec::with_capacity(2 * big_n + 1);
    for m in 0..=(2 * big_n) {
        // The three prescribed moments are copied verbatim.
        let value = if m == 0 {
            a.to_float(precision)
        } else if m == k {
            b.to_float(precision)
        } else if m == 2 * k {
            c.to_float(precision)
        } else {
            let lam_pow = lambda.pow(&Scalar::from_ratio(m as i64, k as i64), precision)?;
            let denom = &one + &(&s_over_k * &Scalar::from_int(m as i64));
            (&(&a.to_float(precision) * &lam_pow)).checked_div(&denom)?
        };
        stretched.push(value);
    }

    let mut list = stretched;
    for _ in 0..n.div_ceil(2) {
        let ext = extend_backwards(&list, None, precision)?;
        list = ext.moments;
    }
    let final_moments: Vec<Scalar> = if n % 2 == 0 {
        list[..2 * big_n + 1].to_vec()
    } else {
        list[1..2 * big_n + 2].to_vec()
    };
    let matrix = Matrix::hankel_from_moments(&final_moments).expect("odd moment count");
    let cert = check(&matrix, Property::HankelTotallyPositive, &verify_opts())
        .map_err(|_| CompletionError::BadParameters("verification setup failed".to_string()))?;
    if !cert.holds() {
        return Err(CompletionError::VerificationFailed(Box::new(cert)));
    }
    Ok(HankelCompletion {
        s,
        scale: a.clone(),
        rho,
        moments: final_moments,
        matrix,
        certificate: cert,
        params: Some((n, k, big_n)),
    })
}

/// A totally positive approximation of a totally nonnegative matrix.
#[derive(Clone, Debug)]
pub struct Densification {
    pub matrix: Matrix,
    /// Gaussian kernel parameter that met the distance bound.
    pub delta: Scalar,
    /// Achieved distance `‖B − M‖∞`.
    pub distance: Scalar,
    /// Verification of the output (always `Holds` when returned).
    pub certificate: Certificate,
}

fn gauss_kernel(size: usize, delta: &Scalar) -> Matrix {
    Matrix::from_fn(size, size, |i, j| {
        let d = i as i64 - j as i64;
        delta
            .pow(&Scalar::from_int(d * d), 64)
            .expect("positive base, integer exponent")
    })
    .expect("uniform kernel")
}

/// Replaces a full-rank totally nonnegative matrix by a nearby totally
/// positive one: `B = G_δ · M · H_δ` with Gaussian kernels `G, H`, shrinking
/// `δ` until `‖B − M‖∞ ≤ tol`. Exact input only; every minor of `B` is a
/// positive combination of minors of `M`, which is certified post-hoc.
pub fn densify_to_tp(m: &Matrix, tol: &Scalar) -> Result<Densification, CompletionError> {
    if !m.is_exact() {
        return Err(CompletionError::InexactInput);
    }
    if !tol.is_positive() {
        return Err(CompletionError::BadParameters("tolerance must be positive".to_string()));
    }
    match check(m, Property::TotallyNonneg, &CheckOptions::default()) {
        Ok(cert) if cert.holds() => {}
        _ => return Err(CompletionError::NotTotallyPositive),
    }
    if kernel::rank_exact(m) < m.min_dim() {
        return Err(CompletionError::RankDeficient);
    }
    let half = Scalar::from_ratio(1, 2);
    let mut delta = half.clone();
    const BUDGET: usize = 64;
    for _ in 0..BUDGET {
        let g = gauss_kernel(m.rows(), &delta);
        let h = gauss_kernel(m.cols(), &delta);
        let b = g.matmul(m).expect("shape").matmul(&h).expect("shape");
        let mut distance = Scalar::zero();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let d = (b.entry(i, j) - m.entry(i, j)).abs();
                if d > distance {
                    distance = d;
                }
            }
        }
        if distance <= *tol {
            let cert = check(&b, Property::TotallyPositive, &verify_opts())
                .map_err(|_| CompletionError::BadParameters("verification setup failed".to_string()))?;
            if !cert.holds() {
                return Err(CompletionError::VerificationFailed(Box::new(cert)));
            }
            return Ok(Densification { matrix: b, delta, distance, certificate: cert });
        }
        delta = &delta * &half;
    }
    Err(CompletionError::ToleranceNotReached { iterations: BUDGET })
}
