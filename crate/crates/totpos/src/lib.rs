//! A toolkit for total positivity: checking it, transforming it, and
//! repairing it.
//!
//! A matrix is *totally positive* (TP) when every minor — the determinant of
//! every square submatrix — is positive, and *totally nonnegative* (TN) when
//! every minor is at least zero. These classes are central to approximation
//! theory, spline interpolation, statistics, and combinatorics, and they
//! interact with entrywise operations in surprisingly rigid ways. This crate
//! provides the computational side of that story:
//!
//! * [`scalar`] and [`matrix`] — a two-representation scalar (exact
//!   `BigRational` or arbitrary-precision binary float) and a dense matrix
//!   over it. Exactness is contagious and never silently lost: results stay
//!   rational until an operation genuinely leaves the rationals.
//! * [`kernel`] — fraction-free Bareiss determinants, exact rank, and minor
//!   enumeration (all square submatrices, contiguous ones, principal ones).
//! * [`checker`] — decision procedures for TN, TP, their order-`r`
//!   relaxations, positive (semi)definiteness, and the Hankel-specialized
//!   shortcut. Every answer is a [`checker::Certificate`] carrying the
//!   pinned minor, the threshold it was compared against, and whether the
//!   run was exact. Float verdicts use a per-minor threshold scaled by the
//!   submatrix's row maxima, and report `Inconclusive` instead of guessing
//!   when a minor lands inside the noise band.
//! * [`transforms`] — entrywise maps `F[A] = (F(a_ij))`. The full
//!   classification of which powers, constants, and general functions
//!   preserve each class at each dimension threshold ([`transforms::classify`],
//!   [`transforms::is_power_preserver`]), plus a budgeted counterexample
//!   search ([`transforms::falsify`]) that scans structured witness families
//!   and returns verified source/violation certificate pairs.
//! * [`witnesses`] — the structured families the falsifier draws from:
//!   boundary matrices whose images fail exactly when the theory says they
//!   must, rank-one and moment-matrix constructions, and seeded random TN,
//!   TP, and Hankel generators.
//! * [`completion`] — constructive embeddings: every TP `2×2` sits inside a
//!   generalized Vandermonde matrix of any larger size, TP Hankel matrices
//!   extend in both directions, and full-rank TN matrices densify to TP by a
//!   Gaussian sandwich. All constructions are re-verified by the checker
//!   before being returned.
//! * [`expr`] — a tiny expression language (`+ - * / ^`, `exp`, `log`,
//!   `sqrt`, variable `x`) used to describe candidate functions on the
//!   command line.
//! * [`io`] — a JSON matrix schema that round-trips exact rationals
//!   bit-for-bit, plus headerless CSV for float data.
//!
//! # Example
//!
//! ```
//! use totpos::{check, CheckOptions, Property, Scalar};
//! use totpos::transforms::{classify, falsify, FalsifyOptions, FunctionDescriptor, Mode};
//! use totpos::witnesses;
//!
//! // The boundary 3x3 matrix is totally nonnegative...
//! let c = witnesses::matrix_c_rational();
//! let cert = check(&c, Property::TotallyNonneg, &CheckOptions::default()).unwrap();
//! assert!(cert.holds());
//!
//! // ...but x^0.9 does not preserve that: the falsifier exhibits a witness.
//! let f = FunctionDescriptor::Power { c: Scalar::one(), alpha: Scalar::from_ratio(9, 10) };
//! let outcome = falsify(Mode::Tn, 3, &f, &FalsifyOptions::default()).unwrap();
//! assert!(matches!(outcome, totpos::transforms::FalsifyOutcome::Counterexample(_)));
//!
//! // Which matches the classification: at threshold 3 only powers >= 1 work.
//! let class = classify(Mode::Tn, 3).unwrap();
//! assert!(!class.power_qualifies(&num_rational::BigRational::new(9.into(), 10.into())));
//! ```

pub mod checker;
pub mod completion;
pub mod expr;
pub mod io;
pub mod kernel;
pub mod matrix;
pub mod scalar;
pub mod transforms;
pub mod witnesses;

pub use checker::{check, Certificate, CheckOptions, Property, Verdict};
pub use matrix::{Matrix, MatrixError, MinorIndex};
pub use scalar::{NumericError, Scalar};
