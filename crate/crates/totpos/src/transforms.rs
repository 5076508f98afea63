//! Entrywise transforms and the preserver classification.
//!
//! An entrywise map `F[A] = (F(a_ij))` may or may not preserve a positivity
//! class. This module provides:
//!
//! * [`apply_entrywise`] and [`hadamard_power`] — evaluate `F[A]`, staying
//!   exact whenever the inputs and the function allow it;
//! * [`classify`] — the exact family of preservers for each mode and
//!   dimension threshold `Δ`, and [`is_power_preserver`] for membership of
//!   `c·x^α` in that family;
//! * [`falsify`] — a budgeted hunt for a counterexample to a candidate
//!   preserver, scanning a fixed schedule of structured witness families
//!   followed by seeded random samples, and returning a certificate pair
//!   (source verified to have the property, image verified to lack it).
//!
//! Power transforms use the convention `0^α := 0` for every `α ≥ 0`
//! (see [`crate::scalar::Scalar::pow`]), which makes `α = 0` act as the
//! indicator of the support rather than the constant-one map.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checker::{check, Certificate, CheckOptions, Property};
use crate::completion;
use crate::expr::Expr;
use crate::matrix::Matrix;
use crate::scalar::{NumericError, Scalar};
use crate::witnesses;

/// Which positivity class (and matrix shape) a preserver question concerns.
///
/// `Δ` is the dimension threshold: the classification for rectangular
/// matrices depends only on `min(rows, cols)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Totally nonnegative matrices.
    Tn,
    /// Totally positive matrices.
    Tp,
    /// Symmetric totally nonnegative matrices.
    TnSym,
    /// Symmetric totally positive matrices.
    TpSym,
    /// Positive-semidefinite Hankel matrices of a fixed size `Δ`.
    HankelFixed,
    /// Positive-semidefinite Hankel matrices of every size at once.
    HankelAllSizes,
}

impl Mode {
    /// Checker property used both for sources and for images in this mode.
    pub fn property(self) -> Property {
        match self {
            Mode::Tn | Mode::TnSym => Property::TotallyNonneg,
            Mode::Tp | Mode::TpSym => Property::TotallyPositive,
            Mode::HankelFixed | Mode::HankelAllSizes => Property::PositiveSemidefinite,
        }
    }

    fn wants_symmetric(self) -> bool {
        matches!(self, Mode::TnSym | Mode::TpSym | Mode::HankelFixed | Mode::HankelAllSizes)
    }

    fn wants_hankel(self) -> bool {
        matches!(self, Mode::HankelFixed | Mode::HankelAllSizes)
    }

    fn is_strict(self) -> bool {
        matches!(self, Mode::Tp | Mode::TpSym)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tn => "tn",
            Mode::Tp => "tp",
            Mode::TnSym => "tn-sym",
            Mode::TpSym => "tp-sym",
            Mode::HankelFixed => "hankel-fixed",
            Mode::HankelAllSizes => "hankel-all",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "tn" => Ok(Mode::Tn),
            "tp" => Ok(Mode::Tp),
            "tn-sym" => Ok(Mode::TnSym),
            "tp-sym" => Ok(Mode::TpSym),
            "hankel-fixed" => Ok(Mode::HankelFixed),
            "hankel-all" => Ok(Mode::HankelAllSizes),
            other => Err(format!(
                "unknown mode `{other}` (expected tn, tp, tn-sym, tp-sym, hankel-fixed, hankel-all)"
            )),
        }
    }
}

/// Errors from transform operations.
#[derive(Debug, Clone)]
pub enum TransformError {
    /// The dimension threshold must be at least 1.
    InvalidDelta,
    /// Power descriptors require a positive leading constant.
    NonpositiveConstant,
    /// Power membership is decided on exact exponents only.
    InexactExponent,
    /// Entrywise evaluation failed at the given position.
    Eval { row: usize, col: usize, source: NumericError },
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::InvalidDelta => f.write_str("dimension threshold must be at least 1"),
            TransformError::NonpositiveConstant => {
                f.write_str("power descriptors require a constant c > 0")
            }
            TransformError::InexactExponent => {
                f.write_str("membership tests require an exact (rational) exponent")
            }
            TransformError::Eval { row, col, source } => {
                write!(f, "evaluation failed at entry ({row}, {col}): {source}")
            }
        }
    }
}

impl std::error::Error for TransformError {}

/// A scalar function to apply entrywise.
#[derive(Clone, Debug)]
pub enum FunctionDescriptor {
    /// The constant map `x ↦ c`.
    Constant(Scalar),
    /// `x ↦ c · x^α` with the convention `0^α := 0`.
    Power { c: Scalar, alpha: Scalar },
    /// An arbitrary parsed expression in one variable.
    Expression(Expr),
}

impl FunctionDescriptor {
    /// Evaluates the function at `x`, using `precision` bits where the
    /// computation leaves the rationals.
    pub fn eval(&self, x: &Scalar, precision: usize) -> Result<Scalar, NumericError> {
        match self {
            FunctionDescriptor::Constant(c) => Ok(c.clone()),
            FunctionDescriptor::Power { c, alpha } => Ok(c * &x.pow(alpha, precision)?),
            FunctionDescriptor::Expression(e) => e.eval(x, precision),
        }
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionDescriptor::Constant(c) => write!(f, "{c}"),
            FunctionDescriptor::Power { c, alpha } => write!(f, "{c} * x^({alpha})"),
            FunctionDescriptor::Expression(e) => write!(f, "{e}"),
        }
    }
}

/// One piece of an exponent constraint; boundaries in the classification
/// are always integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerComponent {
    /// Exactly this exponent.
    Point(i64),
    /// All exponents `>=` the boundary.
    ClosedRay(i64),
    /// All exponents `>` the boundary.
    OpenRay(i64),
    /// The nonnegative integers.
    NonnegativeIntegers,
}

/// A union of exponent constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSet {
    pub components: Vec<PowerComponent>,
}

impl PowerSet {
    fn point(n: i64) -> PowerSet {
        PowerSet { components: vec![PowerComponent::Point(n)] }
    }

    fn closed_ray(n: i64) -> PowerSet {
        PowerSet { components: vec![PowerComponent::ClosedRay(n)] }
    }

    fn open_ray(n: i64) -> PowerSet {
        PowerSet { components: vec![PowerComponent::OpenRay(n)] }
    }

    fn point_and_closed_ray(p: i64, n: i64) -> PowerSet {
        PowerSet { components: vec![PowerComponent::Point(p), PowerComponent::ClosedRay(n)] }
    }

    fn integers_and_open_ray(n: i64) -> PowerSet {
        PowerSet {
            components: vec![PowerComponent::NonnegativeIntegers, PowerComponent::OpenRay(n)],
        }
    }

    /// Whether the exponent belongs to the set.
    pub fn contains(&self, alpha: &BigRational) -> bool {
        self.components.iter().any(|c| match c {
            PowerComponent::Point(n) => *alpha == BigRational::from_integer((*n).into()),
            PowerComponent::ClosedRay(n) => *alpha >= BigRational::from_integer((*n).into()),
            PowerComponent::OpenRay(n) => *alpha > BigRational::from_integer((*n).into()),
            PowerComponent::NonnegativeIntegers => alpha.is_integer() && !alpha.is_negative(),
        })
    }
}

impl fmt::Display for PowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            match c {
                PowerComponent::Point(n) => write!(f, "{{{n}}}")?,
                PowerComponent::ClosedRay(n) => write!(f, "[{n}, ∞)")?,
                PowerComponent::OpenRay(n) => write!(f, "({n}, ∞)")?,
                PowerComponent::NonnegativeIntegers => f.write_str("ℤ≥0")?,
            }
        }
        Ok(())
    }
}

/// The family of entrywise preservers for one mode and threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PreserverClass {
    /// Every function with nonnegative values (domain includes 0).
    AnyNonnegativeFunction,
    /// Every function with positive values on positive arguments.
    AnyPositiveFunction,
    /// Nonnegative constants, plus `c x^α` with `c > 0` and `α` constrained.
    ConstantsAndPowers { exponents: PowerSet },
    /// Only `c x^α` with `c > 0` and `α` constrained — constants fail
    /// because constant matrices have vanishing minors.
    PowersOnly { exponents: PowerSet },
    /// The non-parametric class: nonnegative, nondecreasing, and
    /// multiplicatively mid-convex (`F(√(xy))² ≤ F(x)F(y)`); `strict`
    /// replaces every inequality by its strict form.
    MidConvexClass { strict: bool },
    /// Power series with nonnegative coefficients; powers qualify exactly
    /// for nonnegative integer exponents.
    AbsolutelyMonotonic,
}

impl PreserverClass {
    /// Whether `c·x^α` (any `c > 0`) belongs to the class.
    pub fn power_qualifies(&self, alpha: &BigRational) -> bool {
        match self {
            PreserverClass::AnyNonnegativeFunction => !alpha.is_negative(),
            PreserverClass::AnyPositiveFunction => true,
            PreserverClass::ConstantsAndPowers { exponents }
            | PreserverClass::PowersOnly { exponents } => exponents.contains(alpha),
            PreserverClass::MidConvexClass { strict: false } => !alpha.is_negative(),
            PreserverClass::MidConvexClass { strict: true } => alpha.is_positive(),
            PreserverClass::AbsolutelyMonotonic => alpha.is_integer() && !alpha.is_negative(),
        }
    }

    /// Whether the constant map `x ↦ c` (with `c ≥ 0`) belongs to the class.
    pub fn constant_qualifies(&self, c: &Scalar) -> bool {
        match self {
            PreserverClass::AnyNonnegativeFunction
            | PreserverClass::ConstantsAndPowers { .. }
            | PreserverClass::AbsolutelyMonotonic
            | PreserverClass::MidConvexClass { strict: false } => !c.is_negative(),
            PreserverClass::AnyPositiveFunction => c.is_positive(),
            PreserverClass::PowersOnly { .. } | PreserverClass::MidConvexClass { strict: true } => {
                false
            }
        }
    }

    /// Human-readable statement of the class.
    pub fn description(&self) -> String {
        match self {
            PreserverClass::AnyNonnegativeFunction => {
                "any function with nonnegative values".to_string()
            }
            PreserverClass::AnyPositiveFunction => {
                "any function with positive values".to_string()
            }
            PreserverClass::ConstantsAndPowers { exponents } => format!(
                "constants c ≥ 0, or F(x) = c x^α with c > 0 and α ∈ {exponents}"
            ),
            PreserverClass::PowersOnly { exponents } => {
                format!("F(x) = c x^α with c > 0 and α ∈ {exponents}")
            }
            PreserverClass::MidConvexClass { strict: false } => {
                "nonnegative, nondecreasing, multiplicatively mid-convex functions".to_string()
            }
            PreserverClass::MidConvexClass { strict: true } => {
                "positive, increasing, strictly multiplicatively mid-convex functions".to_string()
            }
            PreserverClass::AbsolutelyMonotonic => {
                "absolutely monotonic entire functions (power series with nonnegative \
                 coefficients); powers require α ∈ ℤ≥0"
                    .to_string()
            }
        }
    }
}

/// The exact preserver family for the given mode and threshold `Δ ≥ 1`.
pub fn classify(mode: Mode, delta: usize) -> Result<PreserverClass, TransformError> {
    if delta == 0 {
        return Err(TransformError::InvalidDelta);
    }
    use PreserverClass::*;
    Ok(match mode {
        Mode::Tn => match delta {
            1 => AnyNonnegativeFunction,
            2 => ConstantsAndPowers { exponents: PowerSet::closed_ray(0) },
            3 => ConstantsAndPowers { exponents: PowerSet::closed_ray(1) },
            _ => ConstantsAndPowers { exponents: PowerSet::point(1) },
        },
        Mode::Tp => match delta {
            1 => AnyPositiveFunction,
            2 => PowersOnly { exponents: PowerSet::open_ray(0) },
            3 => PowersOnly { exponents: PowerSet::closed_ray(1) },
            _ => PowersOnly { exponents: PowerSet::point(1) },
        },
        Mode::TnSym => match delta {
            1 => AnyNonnegativeFunction,
            2 => MidConvexClass { strict: false },
            3 => ConstantsAndPowers { exponents: PowerSet::closed_ray(1) },
            4 => ConstantsAndPowers { exponents: PowerSet::point_and_closed_ray(1, 2) },
            _ => ConstantsAndPowers { exponents: PowerSet::point(1) },
        },
        Mode::TpSym => match delta {
            1 => AnyPositiveFunction,
            2 => MidConvexClass { strict: true },
            3 => PowersOnly { exponents: PowerSet::closed_ray(1) },
            4 => PowersOnly { exponents: PowerSet::point_and_closed_ray(1, 2) },
            _ => PowersOnly { exponents: PowerSet::point(1) },
        },
        Mode::HankelFixed => {
            if delta <= 2 {
                ConstantsAndPowers { exponents: PowerSet::closed_ray(0) }
            } else {
                ConstantsAndPowers {
                    exponents: PowerSet::integers_and_open_ray(delta as i64 - 2),
                }
            }
        }
        Mode::HankelAllSizes => AbsolutelyMonotonic,
    })
}

/// Whether `c·x^α` preserves the class of the given mode at threshold `Δ`.
///
/// Requires `c > 0` and an exact exponent; the answer is independent of the
/// particular positive `c`.
pub fn is_power_preserver(
    mode: Mode,
    delta: usize,
    c: &Scalar,
    alpha: &Scalar,
) -> Result<bool, TransformError> {
    if !c.is_positive() {
        return Err(TransformError::NonpositiveConstant);
    }
    let a = alpha.as_exact().ok_or(TransformError::InexactExponent)?;
    Ok(classify(mode, delta)?.power_qualifies(a))
}

/// Applies the function to every entry. The result stays exact when every
/// evaluation does (rational entries, integer powers, constants); otherwise
/// all entries are uniformized to floats at `precision` bits.
pub fn apply_entrywise(
    m: &Matrix,
    f: &FunctionDescriptor,
    precision: usize,
) -> Result<Matrix, TransformError> {
    let mut rows = Vec::with_capacity(m.rows());
    let mut any_float = false;
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let v = f
                .eval(m.entry(i, j), precision)
                .map_err(|source| TransformError::Eval { row: i, col: j, source })?;
            any_float = any_float || v.as_exact().is_none();
            row.push(v);
        }
        rows.push(row);
    }
    if any_float {
        for row in &mut rows {
            for v in row.iter_mut() {
                *v = v.to_float(precision);
            }
        }
    }
    Ok(Matrix::from_rows(rows).expect("uniform transformed entries"))
}

/// The Hadamard (entrywise) power `M^∘α`, with `0^α := 0`.
pub fn hadamard_power(
    m: &Matrix,
    alpha: &Scalar,
    precision: usize,
) -> Result<Matrix, TransformError> {
    apply_entrywise(
        m,
        &FunctionDescriptor::Power { c: Scalar::one(), alpha: alpha.clone() },
        precision,
    )
}

/// Tuning for [`falsify`].
#[derive(Clone, Debug)]
pub struct FalsifyOptions {
    /// Maximum number of source matrices examined.
    pub budget: usize,
    /// Seed for the random tail of the schedule.
    pub seed: u64,
    /// Float precision for images that leave the rationals.
    pub precision: usize,
    /// Checker tolerance for float image verdicts. Source checks are exact.
    pub tol_base: f64,
}

impl Default for FalsifyOptions {
    fn default() -> FalsifyOptions {
        FalsifyOptions { budget: 512, seed: 0x00beef, precision: 128, tol_base: 1e-30 }
    }
}

/// A verified counterexample: the source has the mode's property, its
/// image does not.
#[derive(Clone, Debug)]
pub struct Counterexample {
    /// Name of the witness family that produced the source.
    pub family: String,
    pub matrix: Matrix,
    pub transformed: Matrix,
    /// Verification that the source has the property (always `Holds`).
    pub source: Certificate,
    /// Verification that the image lacks it (always `Fails`).
    pub violation: Certificate,
}

/// Result of a falsification run.
#[derive(Clone, Debug)]
pub enum FalsifyOutcome {
    Counterexample(Box<Counterexample>),
    /// No verified counterexample within budget. `sources_rejected` counts
    /// candidates whose own property check did not hold; `evaluations_failed`
    /// counts domain errors while applying the function.
    BudgetExhausted { tried: usize, sources_rejected: usize, evaluations_failed: usize },
}

struct Candidate {
    family: &'static str,
    matrix: Matrix,
}

fn r(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

// Log-spaced probe grid spanning 1e-2 .. 1e2.
fn positive_grid() -> Vec<Scalar> {
    vec![r(1, 100), r(1, 20), r(1, 5), r(1, 1), r(2, 1), r(5, 1), r(20, 1), r(100, 1)]
}

fn grid_with_zero() -> Vec<Scalar> {
    let mut g = vec![Scalar::zero()];
    g.extend(positive_grid());
    g
}

// Totally positive Gaussian smears of the N family, shared across calls.
// The smear distance 1e-14 is far below the family's negative image minors
// (1e-9 and larger), so the counterexamples survive exactly.
fn densified_n() -> &'static Vec<Matrix> {
    static CACHE: OnceLock<Vec<Matrix>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let tol = r(1, 100_000_000_000_000);
        [(1, 20, 1, 100), (1, 20, 1, 10_000), (1, 2, 1, 100)]
            .iter()
            .filter_map(|&(en, ed, xn, xd)| {
                let n = witnesses::matrix_n(&r(en, ed), &r(xn, xd));
                completion::densify_to_tp(&n, &tol).ok().map(|d| d.matrix)
            })
            .collect()
    })
}

// Totally positive lifts of the T family, shared across calls.
fn sandwich_pair() -> &'static Vec<Matrix> {
    static CACHE: OnceLock<Vec<Matrix>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let dg = r(1, 1_000_000);
        let theta = r(1, 1_000_000_000_000);
        vec![
            witnesses::t_sandwich(&r(1, 10_000), &dg, &theta),
            witnesses::t_sandwich(&r(1, 100_000), &dg, &theta),
        ]
    })
}

fn push(cands: &mut Vec<Candidate>, family: &'static str, m: Matrix) {
    cands.push(Candidate { family, matrix: m });
}

// The deterministic head of the schedule: structured families of every size
// up to `delta`, ordered so that the class-specific refuters come after the
// generic 2x2 probes.
fn deterministic_schedule(mode: Mode, delta: usize) -> Vec<Candidate> {
    let mut c = Vec::new();
    let p = positive_grid();
    let p0 = grid_with_zero();

    if delta == 1 {
        let grid = if mode.is_strict() { &p } else { &p0 };
        for x in grid {
            push(&mut c, "scalar", Matrix::from_rows(vec![vec![x.clone()]]).expect("1x1"));
        }
        return c;
    }

    match mode {
        Mode::Tn => {
            for x in &p0 {
                for y in &p0 {
                    push(&mut c, "pair-a", witnesses::family_a(x, y));
                }
            }
            for x in &p0 {
                for y in &p0 {
                    push(&mut c, "pair-b", witnesses::family_b(x, y));
                }
            }
            for (i, s) in p0.iter().enumerate() {
                for t in &p0[i..] {
                    push(&mut c, "sym-rank1", witnesses::sym_rank1(s, t));
                }
            }
            for (i, x) in p.iter().enumerate() {
                for y in &p[i + 1..] {
                    push(&mut c, "monotone-pair", witnesses::mono_pair(x, y));
                }
            }
        }
        Mode::TnSym => {
            for (i, s) in p0.iter().enumerate() {
                for t in &p0[i..] {
                    push(&mut c, "sym-rank1", witnesses::sym_rank1(s, t));
                }
            }
            for (i, s) in p.iter().enumerate() {
                for t in &p[i + 1..] {
                    push(&mut c, "sym-rank1-shifted", witnesses::sym_rank1_shifted(s, t, &r(1, 10)));
                }
            }
            for (i, x) in p.iter().enumerate() {
                for y in &p[i + 1..] {
                    push(&mut c, "monotone-pair", witnesses::mono_pair(x, y));
                }
            }
            if delta >= 3 {
                for x in [r(1, 5), r(1, 1), r(5, 1)] {
                    for y in [r(1, 5), r(1, 1), r(5, 1)] {
                        push(&mut c, "rank1-sym3", witnesses::rank1_sym3(&x, &y));
                    }
                }
            }
        }
        Mode::Tp => {
            let eps = r(1, 10);
            for x in &p {
                for y in &p {
                    push(&mut c, "pair-a", witnesses::family_a_tp(x, y, &eps));
                }
            }
            for x in &p {
                for y in &p {
                    push(&mut c, "pair-b", witnesses::family_b_tp(x, y, &eps));
                }
            }
            for (i, s) in p.iter().enumerate() {
                for t in &p[i..] {
                    push(&mut c, "sym-rank1-tp", witnesses::sym_rank1_tp(s, t, &eps));
                }
            }
            for (i, s) in p.iter().enumerate() {
                for t in &p[i + 1..] {
                    push(&mut c, "sym-rank1-shifted", witnesses::sym_rank1_shifted(s, t, &eps));
                }
            }
            for (i, x) in p.iter().enumerate() {
                for y in &p[i + 1..] {
                    push(&mut c, "monotone-pair", witnesses::mono_pair(x, y));
                }
            }
        }
        Mode::TpSym => {
            let eps = r(1, 10);
            for (i, s) in p.iter().enumerate() {
                for t in &p[i..] {
                    push(&mut c, "sym-rank1-tp", witnesses::sym_rank1_tp(s, t, &eps));
                }
            }
            for (i, s) in p.iter().enumerate() {
                for t in &p[i + 1..] {
                    push(&mut c, "sym-rank1-shifted", witnesses::sym_rank1_shifted(s, t, &eps));
                }
            }
            for (i, x) in p.iter().enumerate() {
                for y in &p[i + 1..] {
                    push(&mut c, "monotone-pair", witnesses::mono_pair(x, y));
                }
            }
        }
        Mode::HankelFixed | Mode::HankelAllSizes => {
            for (i, s) in p.iter().enumerate() {
                for t in &p[i..] {
                    push(&mut c, "sym-rank1", witnesses::sym_rank1(s, t));
                }
            }
            for (i, s) in p.iter().enumerate() {
                for t in &p[i + 1..] {
                    push(&mut c, "sym-rank1-shifted", witnesses::sym_rank1_shifted(s, t, &r(1, 10)));
                }
            }
            for (i, x) in p.iter().enumerate() {
                for y in &p[i + 1..] {
                    push(&mut c, "monotone-pair", witnesses::mono_pair(x, y));
                }
            }
        }
    }

    // Boundary 3x3 matrix and its scalings, the dimension-specific refuter
    // for exponents below 1.
    if delta >= 3 && !mode.wants_hankel() {
        let (base, family) = if mode.is_strict() {
            (witnesses::matrix_c_perturbed(&r(1, 50)), "c-perturbed")
        } else {
            (witnesses::matrix_c_rational(), "c-boundary")
        };
        for scale in [r(1, 5), r(1, 1), r(5, 1)] {
            push(&mut c, family, base.map(|e| e * &scale).expect("uniform scaling"));
        }
    }

    // The asymmetric 4x4 family (and its totally positive smear), the
    // refuter for powers above 1 in the non-symmetric modes.
    if delta >= 4 {
        match mode {
            Mode::Tn => {
                for en_ed in [(1i64, 20i64), (1, 10), (3, 10), (1, 2), (9, 10)] {
                    for xn_xd in [(1i64, 10_000i64), (1, 1000), (1, 100), (1, 10), (1, 1)] {
                        push(
                            &mut c,
                            "n-family",
                            witnesses::matrix_n(&r(en_ed.0, en_ed.1), &r(xn_xd.0, xn_xd.1)),
                        );
                    }
                }
            }
            Mode::Tp => {
                for m in densified_n() {
                    push(&mut c, "n-densified", m.clone());
                }
            }
            _ => {}
        }
    }

    // The symmetric 5x5 family (and its totally positive lift), the refuter
    // for integer powers at least 2 in the symmetric modes.
    if delta >= 5 {
        match mode {
            Mode::Tn | Mode::TnSym => {
                for xd in [1000i64, 10_000, 100_000] {
                    push(&mut c, "t-family", witnesses::matrix_t(&r(1, xd)));
                }
            }
            Mode::Tp | Mode::TpSym => {
                for m in sandwich_pair() {
                    push(&mut c, "t-sandwich", m.clone());
                }
            }
            _ => {}
        }
    }

    // Two-atom moment matrices (or their totally positive approximants),
    // the refuter for fractional powers between the integers.
    match mode {
        Mode::Tn | Mode::TnSym | Mode::HankelFixed => {
            for xn_xd in [(1i64, 4i64), (1, 2), (3, 4)] {
                push(&mut c, "d-moment", witnesses::matrix_d(&r(xn_xd.0, xn_xd.1), delta));
            }
        }
        Mode::HankelAllSizes => {
            for size in 2..=8usize {
                for xn_xd in [(1i64, 4i64), (1, 2), (3, 4)] {
                    push(&mut c, "d-moment", witnesses::matrix_d(&r(xn_xd.0, xn_xd.1), size));
                }
            }
        }
        Mode::Tp | Mode::TpSym => {
            if delta >= 4 {
                push(&mut c, "d-moment-tp", witnesses::tp_moment_4());
            }
            if delta >= 5 {
                push(&mut c, "d-moment-tp", witnesses::tp_moment_5());
            }
        }
    }

    c
}

// One random candidate; `i` cycles through the mode's generator variants.
fn random_candidate(mode: Mode, delta: usize, i: usize, rng: &mut ChaCha8Rng) -> Candidate {
    if delta == 1 {
        let x = Scalar::from_ratio(rng.gen_range(1..1000), rng.gen_range(1..1000));
        return Candidate {
            family: "scalar",
            matrix: Matrix::from_rows(vec![vec![x]]).expect("1x1"),
        };
    }
    match mode {
        Mode::Tn => Candidate { family: "random-tn", matrix: witnesses::random_tn(delta, delta, rng) },
        Mode::TnSym => {
            Candidate { family: "random-tn-sym", matrix: witnesses::random_tn_sym(delta, rng) }
        }
        Mode::Tp | Mode::TpSym => {
            if mode == Mode::Tp && i % 2 == 0 {
                Candidate { family: "random-tp2", matrix: witnesses::random_tp2(rng) }
            } else {
                let size = 2 + i % (delta - 1).max(1);
                Candidate {
                    family: "random-moment",
                    matrix: witnesses::random_hankel_moment(size.min(delta), rng),
                }
            }
        }
        Mode::HankelFixed => Candidate {
            family: "random-moment",
            matrix: witnesses::random_hankel_moment(delta, rng),
        },
        Mode::HankelAllSizes => Candidate {
            family: "random-moment",
            matrix: witnesses::random_hankel_moment(2 + i % 7, rng),
        },
    }
}

/// Hunts for a matrix with the mode's property whose entrywise image lacks
/// it.
///
/// The scan walks a deterministic schedule of structured families (all of
/// size at most `Δ`, so every hit refutes preservation at threshold `Δ`),
/// then seeded random samples, up to `opts.budget` candidates. Every source
/// is re-verified before use — sources are exact rational matrices, so the
/// source verdicts are definitive — and a candidate only counts as a
/// counterexample if the image check *fails*; an inconclusive float verdict
/// is skipped. Evaluation errors (for example a negative power at a zero
/// entry) are tallied and skipped, never fatal.
pub fn falsify(
    mode: Mode,
    delta: usize,
    f: &FunctionDescriptor,
    opts: &FalsifyOptions,
) -> Result<FalsifyOutcome, TransformError> {
    if delta == 0 {
        return Err(TransformError::InvalidDelta);
    }
    let property = mode.property();
    let check_opts = CheckOptions { tol_base: opts.tol_base, ..CheckOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tried = 0usize;
    let mut sources_rejected = 0usize;
    let mut evaluations_failed = 0usize;

    let mut iter = deterministic_schedule(mode, delta).into_iter();
    let mut random_index = 0usize;

    while tried < opts.budget {
        let cand = match iter.next() {
            Some(c) => c,
            None => {
                let c = random_candidate(mode, delta, random_index, &mut rng);
                random_index += 1;
                c
            }
        };
        tried += 1;

        if mode.wants_symmetric() && !cand.matrix.is_symmetric() {
            sources_rejected += 1;
            continue;
        }
        if mode.wants_hankel() && !cand.matrix.is_hankel() {
            sources_rejected += 1;
            continue;
        }
        let source_cert = match check(&cand.matrix, property, &check_opts) {
            Ok(cert) if cert.holds() => cert,
            _ => {
                sources_rejected += 1;
                continue;
            }
        };
        let image = match apply_entrywise(&cand.matrix, f, opts.precision) {
            Ok(m) => m,
            Err(TransformError::Eval { .. }) => {
                evaluations_failed += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        match check(&image, property, &check_opts) {
            Ok(cert) if cert.verdict == crate::checker::Verdict::Fails => {
                return Ok(FalsifyOutcome::Counterexample(Box::new(Counterexample {
                    family: cand.family.to_string(),
                    matrix: cand.matrix,
                    transformed: image,
                    source: source_cert,
                    violation: cert,
                })));
            }
            _ => {}
        }
    }

    Ok(FalsifyOutcome::BudgetExhausted { tried, sources_rejected, evaluations_failed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::Verdict;
    use crate::expr::parse_expr;
    use crate::kernel;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn power(alpha: Scalar) -> FunctionDescriptor {
        FunctionDescriptor::Power { c: Scalar::one(), alpha }
    }

    #[test]
    fn classification_table() {
        use PreserverClass::*;
        assert_eq!(classify(Mode::Tn, 1).unwrap(), AnyNonnegativeFunction);
        assert_eq!(
            classify(Mode::Tn, 2).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::closed_ray(0) }
        );
        assert_eq!(
            classify(Mode::Tn, 3).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::closed_ray(1) }
        );
        for d in 4..7 {
            assert_eq!(
                classify(Mode::Tn, d).unwrap(),
                ConstantsAndPowers { exponents: PowerSet::point(1) }
            );
        }
        assert_eq!(classify(Mode::Tp, 1).unwrap(), AnyPositiveFunction);
        assert_eq!(
            classify(Mode::Tp, 2).unwrap(),
            PowersOnly { exponents: PowerSet::open_ray(0) }
        );
        assert_eq!(
            classify(Mode::Tp, 3).unwrap(),
            PowersOnly { exponents: PowerSet::closed_ray(1) }
        );
        assert_eq!(classify(Mode::Tp, 4).unwrap(), PowersOnly { exponents: PowerSet::point(1) });
        assert_eq!(classify(Mode::TnSym, 2).unwrap(), MidConvexClass { strict: false });
        assert_eq!(classify(Mode::TpSym, 2).unwrap(), MidConvexClass { strict: true });
        assert_eq!(
            classify(Mode::TnSym, 4).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::point_and_closed_ray(1, 2) }
        );
        assert_eq!(
            classify(Mode::TpSym, 4).unwrap(),
            PowersOnly { exponents: PowerSet::point_and_closed_ray(1, 2) }
        );
        assert_eq!(
            classify(Mode::TnSym, 5).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::point(1) }
        );
        assert_eq!(
            classify(Mode::HankelFixed, 2).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::closed_ray(0) }
        );
        assert_eq!(
            classify(Mode::HankelFixed, 5).unwrap(),
            ConstantsAndPowers { exponents: PowerSet::integers_and_open_ray(3) }
        );
        assert_eq!(classify(Mode::HankelAllSizes, 3).unwrap(), AbsolutelyMonotonic);
        assert!(matches!(classify(Mode::Tn, 0), Err(TransformError::InvalidDelta)));
    }

    #[test]
    fn power_membership_spot_checks() {
        let one = Scalar::one();
        let check = |mode, delta, num: i64, den: i64| {
            is_power_preserver(mode, delta, &one, &rat(num, den)).unwrap()
        };
        // Fractional powers below 1 stop preserving at three rows.
        assert!(check(Mode::Tn, 2, 9, 10));
        assert!(!check(Mode::Tn, 3, 9, 10));
        assert!(check(Mode::Tn, 3, 3, 2));
        assert!(!check(Mode::Tn, 4, 3, 2));
        assert!(check(Mode::Tn, 4, 1, 1));
        // Weak modes accept alpha = 0, strict modes do not.
        assert!(check(Mode::Tn, 2, 0, 1));
        assert!(!check(Mode::Tp, 2, 0, 1));
        assert!(check(Mode::Tp, 2, 1, 100));
        // Dimension 1 is unconstrained for strict modes only.
        assert!(check(Mode::Tp, 1, -3, 1));
        assert!(!check(Mode::Tn, 1, -3, 1));
        // The symmetric gap between 1 and 2 at delta = 4.
        assert!(!check(Mode::TnSym, 4, 3, 2));
        assert!(check(Mode::TnSym, 4, 5, 2));
        assert!(check(Mode::TpSym, 4, 2, 1));
        assert!(!check(Mode::TpSym, 5, 2, 1));
        // Hankel: integers always, fractional only past delta - 2.
        assert!(check(Mode::HankelFixed, 5, 2, 1));
        assert!(!check(Mode::HankelFixed, 5, 5, 2));
        assert!(check(Mode::HankelFixed, 5, 7, 2));
        assert!(check(Mode::HankelAllSizes, 9, 3, 1));
        assert!(!check(Mode::HankelAllSizes, 9, 5, 2));

        assert!(matches!(
            is_power_preserver(Mode::Tn, 2, &Scalar::zero(), &one),
            Err(TransformError::NonpositiveConstant)
        ));
        assert!(matches!(
            is_power_preserver(Mode::Tn, 2, &one, &one.to_float(64)),
            Err(TransformError::InexactExponent)
        ));
    }

    #[test]
    fn entrywise_power_conventions() {
        let m = Matrix::exact_from_i64(2, 2, &[0, 1, 2, 3]).unwrap();
        // alpha = 0 maps the support to ones and keeps zeros.
        let ind = apply_entrywise(&m, &power(Scalar::zero()), 128).unwrap();
        assert_eq!(ind.entry(0, 0), &Scalar::zero());
        assert_eq!(ind.entry(0, 1), &Scalar::one());
        assert_eq!(ind.entry(1, 0), &Scalar::one());
        // c * x^1 is exact scaling.
        let doubled = apply_entrywise(
            &m,
            &FunctionDescriptor::Power { c: Scalar::from_int(2), alpha: Scalar::one() },
            128,
        )
        .unwrap();
        assert!(doubled.is_exact());
        assert_eq!(doubled.entry(1, 1), &Scalar::from_int(6));
        // Negative powers fail on zero entries with a position.
        match apply_entrywise(&m, &power(Scalar::from_int(-1)), 128) {
            Err(TransformError::Eval { row: 0, col: 0, .. }) => {}
            other => panic!("expected eval error at (0,0), got {other:?}"),
        }
    }

    #[test]
    fn expression_images_match_reference_determinant() {
        let f = FunctionDescriptor::Expression(parse_expr("exp(x) - 1").unwrap());
        let m = Matrix::exact_from_i64(2, 2, &[2, 4, 1, 2]).unwrap();
        let image = apply_entrywise(&m, &f, 128).unwrap();
        let det = kernel::det(&image).to_f64();
        assert!((det - (-51.2759)).abs() < 1e-3, "det = {det}");
    }

    #[test]
    fn hadamard_power_composes() {
        let m = witnesses::matrix_c_rational();
        let a = rat(3, 2);
        let b = rat(4, 5);
        let ab = rat(6, 5);
        let lhs = hadamard_power(&hadamard_power(&m, &a, 128).unwrap(), &b, 128).unwrap();
        let rhs = hadamard_power(&m, &ab, 128).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = (lhs.entry(i, j) - rhs.entry(i, j)).abs();
                assert!(d.to_f64() < 1e-30, "entry ({i},{j})");
            }
        }
        // Identity power returns the matrix exactly.
        let same = hadamard_power(&m, &Scalar::one(), 128).unwrap();
        assert_eq!(&same, &m);
        // Negative entries are rejected with a position.
        let neg = Matrix::exact_from_i64(1, 2, &[1, -1]).unwrap();
        assert!(matches!(
            hadamard_power(&neg, &rat(1, 2), 128),
            Err(TransformError::Eval { row: 0, col: 1, .. })
        ));
    }

    fn expect_counterexample(mode: Mode, delta: usize, f: &FunctionDescriptor) -> Counterexample {
        match falsify(mode, delta, f, &FalsifyOptions::default()).unwrap() {
            FalsifyOutcome::Counterexample(c) => *c,
            FalsifyOutcome::BudgetExhausted { .. } => {
                panic!("expected a counterexample for {mode} delta={delta}")
            }
        }
    }

    fn expect_none(mode: Mode, delta: usize, f: &FunctionDescriptor) {
        match falsify(mode, delta, f, &FalsifyOptions::default()).unwrap() {
            FalsifyOutcome::Counterexample(c) => {
                panic!(
                    "unexpected counterexample for {mode} delta={delta} in family {}",
                    c.family
                )
            }
            FalsifyOutcome::BudgetExhausted { .. } => {}
        }
    }

    #[test]
    fn falsifier_finds_multiplicativity_failure_in_pair_family() {
        let f = FunctionDescriptor::Expression(parse_expr("exp(x) - 1").unwrap());
        let cex = expect_counterexample(Mode::Tn, 2, &f);
        assert_eq!(cex.family, "pair-a");
        assert!(cex.source.holds());
        assert_eq!(cex.violation.verdict, Verdict::Fails);
    }

    #[test]
    fn falsifier_finds_square_failure_in_n_family() {
        let cex = expect_counterexample(Mode::Tn, 4, &power(Scalar::from_int(2)));
        assert_eq!(cex.family, "n-family");
        // The refutation is exact: integer power of a rational matrix.
        assert!(cex.violation.exact);
        // Re-verify both halves of the certificate from scratch.
        let src = check(&cex.matrix, Property::TotallyNonneg, &CheckOptions::default()).unwrap();
        assert!(src.holds());
        let img = check(&cex.transformed, Property::TotallyNonneg, &CheckOptions::default()).unwrap();
        assert_eq!(img.verdict, Verdict::Fails);
    }

    #[test]
    fn falsifier_respects_preserving_powers() {
        expect_none(Mode::Tn, 4, &FunctionDescriptor::Power {
            c: Scalar::from_int(3),
            alpha: Scalar::one(),
        });
        expect_none(Mode::Tn, 2, &power(rat(1, 2)));
        expect_none(Mode::TnSym, 4, &power(rat(5, 2)));
        expect_none(Mode::Tp, 3, &power(rat(3, 2)));
        expect_none(Mode::HankelFixed, 4, &power(rat(5, 2)));
    }

    #[test]
    fn falsifier_covers_dimension_specific_families() {
        // Fractional power below 1 at delta = 3: the boundary matrix.
        let cex = expect_counterexample(Mode::Tn, 3, &power(rat(9, 10)));
        assert_eq!(cex.family, "c-boundary");
        // Strict mode variant.
        let cex = expect_counterexample(Mode::Tp, 3, &power(rat(1, 2)));
        assert_eq!(cex.family, "c-perturbed");
        // Integer power at symmetric delta = 5: the T family.
        let cex = expect_counterexample(Mode::TnSym, 5, &power(Scalar::from_int(2)));
        assert_eq!(cex.family, "t-family");
        assert!(cex.violation.exact);
        // Fractional power between integers on Hankel matrices.
        let cex = expect_counterexample(Mode::HankelFixed, 4, &power(rat(3, 2)));
        assert_eq!(cex.family, "d-moment");
        // Totally positive smears carry the asymmetric refutation.
        let cex = expect_counterexample(Mode::Tp, 4, &power(Scalar::from_int(2)));
        assert_eq!(cex.family, "n-densified");
        assert!(cex.violation.exact);
        // And the sandwich carries the symmetric one.
        let cex = expect_counterexample(Mode::TpSym, 5, &power(Scalar::from_int(3)));
        assert_eq!(cex.family, "t-sandwich");
    }

    #[test]
    fn falsifier_reports_evaluation_failures() {
        // log is undefined at the zero entries of the weak families but a
        // negative-entry image refutes first on positive sources.
        let f = FunctionDescriptor::Expression(parse_expr("log(x)").unwrap());
        let cex = expect_counterexample(Mode::Tn, 2, &f);
        assert!(cex.source.holds());
        // A function undefined on every source: budget exhausts, failures
        // are tallied rather than fatal.
        let g = FunctionDescriptor::Expression(parse_expr("sqrt(0 - 1 - x)").unwrap());
        match falsify(Mode::Tn, 2, &g, &FalsifyOptions { budget: 40, ..Default::default() })
            .unwrap()
        {
            FalsifyOutcome::BudgetExhausted { evaluations_failed, .. } => {
                assert!(evaluations_failed > 0)
            }
            FalsifyOutcome::Counterexample(_) => panic!("nothing to falsify"),
        }
    }

    #[test]
    fn falsifier_rejects_constants_in_strict_modes() {
        let f = FunctionDescriptor::Constant(Scalar::from_int(3));
        let cex = expect_counterexample(Mode::Tp, 2, &f);
        assert_eq!(cex.violation.verdict, Verdict::Fails);
        expect_none(Mode::Tn, 3, &f);
    }

    #[test]
    fn power_set_display_reads_naturally() {
        assert_eq!(PowerSet::point(1).to_string(), "{1}");
        assert_eq!(PowerSet::point_and_closed_ray(1, 2).to_string(), "{1} ∪ [2, ∞)");
        assert_eq!(PowerSet::integers_and_open_ray(3).to_string(), "ℤ≥0 ∪ (3, ∞)");
        assert!(classify(Mode::Tn, 4).unwrap().description().contains("{1}"));
    }

    #[test]
    fn functional_equation_holds_for_class_powers() {
        // Members of the weak 2x2 class satisfy F(xy)F(1) = F(x)F(y).
        let f = power(rat(7, 5));
        let one = Scalar::one();
        let f1 = f.eval(&one, 128).unwrap();
        for x in positive_grid() {
            for y in positive_grid() {
                let lhs = &f.eval(&(&x * &y), 128).unwrap() * &f1;
                let rhs = &f.eval(&x, 128).unwrap() * &f.eval(&y, 128).unwrap();
                assert!((&lhs - &rhs).abs().to_f64() < 1e-25);
            }
        }
    }

    #[test]
    fn mode_strings_round_trip() {
        for mode in [Mode::Tn, Mode::Tp, Mode::TnSym, Mode::TpSym, Mode::HankelFixed, Mode::HankelAllSizes]
        {
            assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
        }
        assert!("tpn".parse::<Mode>().is_err());
    }
}
