//! Structural witness families.
//!
//! These matrices are the workhorses behind the counterexample search and
//! the test suite: small parametric families whose minors have known closed
//! forms, so a failure of an entrywise transform shows up in a predictable
//! place. Everything here is constructed exactly (rational entries) unless a
//! function says otherwise, which lets callers verify source properties with
//! zero-tolerance arithmetic.

use std::cmp::Ordering;

use rand::Rng;

use crate::kernel;
use crate::matrix::Matrix;
use crate::scalar::{Scalar, DEFAULT_PRECISION};

/// `[[x, xy], [1, y]]` — singular, totally nonnegative for `x, y >= 0`.
///
/// Entrywise maps `f` send this to a matrix whose determinant is
/// `f(x)f(y) - f(xy)f(1)`, so the family probes multiplicativity.
pub fn family_a(x: &Scalar, y: &Scalar) -> Matrix {
    Matrix::from_rows(vec![
        vec![x.clone(), x * y],
        vec![x.one_like(), y.clone()],
    ])
    .expect("uniform family")
}

/// `[[xy, x], [y, 1]]` — the column-swapped companion of [`family_a`].
pub fn family_b(x: &Scalar, y: &Scalar) -> Matrix {
    Matrix::from_rows(vec![
        vec![x * y, x.clone()],
        vec![y.clone(), x.one_like()],
    ])
    .expect("uniform family")
}

/// `[[x, xy], [1 - eps, y]]` — totally positive for `0 < eps < 1`,
/// `x, y > 0`, with determinant exactly `eps * x * y`.
pub fn family_a_tp(x: &Scalar, y: &Scalar, eps: &Scalar) -> Matrix {
    Matrix::from_rows(vec![
        vec![x.clone(), x * y],
        vec![&x.one_like() - eps, y.clone()],
    ])
    .expect("uniform family")
}

/// `[[xy, x], [y, 1 + eps]]` — totally positive for `eps, x, y > 0`,
/// with determinant exactly `eps * x * y`.
pub fn family_b_tp(x: &Scalar, y: &Scalar, eps: &Scalar) -> Matrix {
    Matrix::from_rows(vec![
        vec![x * y, x.clone()],
        vec![y.clone(), &x.one_like() + eps],
    ])
    .expect("uniform family")
}

/// `[[y, x], [x, y]]` — symmetric; totally positive iff `y > x > 0`.
///
/// An entrywise map preserves its positivity iff it preserves strict order,
/// so the family probes monotonicity.
pub fn mono_pair(x: &Scalar, y: &Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![y.clone(), x.clone()], vec![x.clone(), y.clone()]])
        .expect("uniform family")
}

/// `[[s^2, st], [st, t^2]]` — symmetric rank-one, totally nonnegative.
pub fn sym_rank1(s: &Scalar, t: &Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![s * s, s * t], vec![s * t, t * t]]).expect("uniform family")
}

/// `[[s^2 + eps, st], [st, t^2 + eps]]` — symmetric totally positive for
/// `s, t, eps > 0` (determinant `eps(s^2 + t^2) + eps^2`).
pub fn sym_rank1_tp(s: &Scalar, t: &Scalar, eps: &Scalar) -> Matrix {
    Matrix::from_rows(vec![
        vec![&(s * s) + eps, s * t],
        vec![s * t, &(t * t) + eps],
    ])
    .expect("uniform family")
}

/// `[[s^2 + eps, st + eps], [st + eps, t^2 + eps]]` — the matrix of
/// [`sym_rank1`] shifted by `eps` in every entry; symmetric totally positive
/// for `s != t >= 0`, `eps > 0`, with determinant exactly `eps (s - t)^2`.
pub fn sym_rank1_shifted(s: &Scalar, t: &Scalar, eps: &Scalar) -> Matrix {
    sym_rank1(s, t).map(|e| e + eps).expect("uniform family")
}

/// Rank-one symmetric 3x3 `v v^T` with `v = (x, 1, y)` — totally nonnegative
/// for `x, y >= 0`.
pub fn rank1_sym3(x: &Scalar, y: &Scalar) -> Matrix {
    let one = x.one_like();
    let v = [x.clone(), one, y.clone()];
    Matrix::from_fn(3, 3, |i, j| &v[i] * &v[j]).expect("uniform family")
}

/// The 3x3 totally nonnegative boundary matrix with unit diagonal,
/// `1/sqrt(2)` off the diagonal, and zero corners. Float entries at
/// `precision` bits.
///
/// Its entrywise powers have determinant `1 - 2^(1 - alpha)`, so the sign
/// flips exactly at `alpha = 1`; see [`verify_det_c_formula`].
pub fn matrix_c(precision: usize) -> Matrix {
    let a = Scalar::from_ratio(1, 2).sqrt(precision).expect("sqrt of 1/2");
    let one = Scalar::one().to_float(precision);
    let zero = Scalar::zero().to_float(precision);
    Matrix::from_rows(vec![
        vec![one.clone(), a.clone(), zero.clone()],
        vec![a.clone(), one.clone(), a.clone()],
        vec![zero, a, one],
    ])
    .expect("uniform family")
}

/// Rational stand-in for [`matrix_c`] using `408/577 < 1/sqrt(2)` off the
/// diagonal: exactly totally nonnegative, full rank
/// (determinant `1/332929`), and zero-cornered.
pub fn matrix_c_rational() -> Matrix {
    let a = Scalar::from_ratio(408, 577);
    let one = Scalar::one();
    let zero = Scalar::zero();
    Matrix::from_rows(vec![
        vec![one.clone(), a.clone(), zero.clone()],
        vec![a.clone(), one.clone(), a.clone()],
        vec![zero, a, one],
    ])
    .expect("uniform family")
}

/// [`matrix_c_rational`] plus `delta` in every entry: exactly totally
/// positive for small `delta > 0` (e.g. `delta = 1/50`).
pub fn matrix_c_perturbed(delta: &Scalar) -> Matrix {
    matrix_c_rational().map(|s| s + delta).expect("uniform family")
}

/// 4x4 family `N(eps, x)`: the all-ones matrix plus `x` times a fixed
/// pattern with two `eps` bumps. Totally nonnegative for small `x, eps >= 0`
/// and singular-free structure: `det N = eps^2 x^3` exactly, with no higher
/// terms.
pub fn matrix_n(eps: &Scalar, x: &Scalar) -> Matrix {
    let e = |n: i64, d: i64| Scalar::from_ratio(n, d);
    let half5 = &e(5, 2) * eps;
    let pattern = [
        [e(0, 1), e(0, 1), e(0, 1), e(0, 1)],
        [e(0, 1), e(1, 1), e(2, 1), e(3, 1)],
        [e(0, 1), e(2, 1), &e(4, 1) + eps, &e(6, 1) + &half5],
        [e(0, 1), e(3, 1), e(8, 1), &e(14, 1) + eps],
    ];
    Matrix::from_fn(4, 4, |i, j| &Scalar::one() + &(x * &pattern[i][j])).expect("uniform family")
}

/// 5x5 family `T(x)`: all-ones plus `x` times a fixed Hankel-with-one-bump
/// pattern. Totally nonnegative for `0 <= x <= 1/1000`, rank 4 in the
/// pattern (so `T(x)` is never totally positive), and its entrywise square
/// has a negative upper-right 4x4 minor for small `x > 0`.
pub fn matrix_t(x: &Scalar) -> Matrix {
    let s: [i64; 9] = [2, 3, 6, 14, 36, 98, 276, 842, 2604];
    Matrix::from_fn(5, 5, |i, j| {
        let mut base = s[i + j];
        if i == 3 && j == 3 {
            base += 8;
        }
        &Scalar::one() + &(x * &Scalar::from_int(base))
    })
    .expect("uniform family")
}

/// `n x n` two-atom moment matrix `D(x)`: entries `1 + x^(i+j)`.
///
/// A Hankel positive-semidefinite matrix of rank 2 whose entrywise powers
/// `alpha` stay semidefinite iff `alpha` is a nonnegative integer or
/// `alpha >= n - 2`.
pub fn matrix_d(x: &Scalar, n: usize) -> Matrix {
    moment_matrix(&[x.one_like(), x.clone()], &[x.one_like(), x.one_like()], n)
}

/// `n x n` moment matrix of the discrete measure `sum_k w_k delta_{a_k}`:
/// entries `sum_k w_k a_k^(i+j)`.
///
/// Positive semidefinite Hankel for positive weights; totally positive when
/// the atoms are distinct, positive, and at least `n` of them carry positive
/// weight.
pub fn moment_matrix(atoms: &[Scalar], weights: &[Scalar], n: usize) -> Matrix {
    assert_eq!(atoms.len(), weights.len(), "one weight per atom");
    assert!(!atoms.is_empty(), "at least one atom");
    Matrix::from_fn(n, n, |i, j| {
        let k = Scalar::from_int((i + j) as i64);
        let mut acc = atoms[0].zero_like();
        for (a, w) in atoms.iter().zip(weights) {
            let p = a.pow(&k, DEFAULT_PRECISION).expect("integer power");
            acc = &acc + &(w * &p);
        }
        acc
    })
    .expect("uniform family")
}

/// Four-atom totally positive Hankel approximant of `D(1/2)` (4x4): atoms
/// `{1, 1/2, 9/10, 2/5}` with weights `{1, 1, 1e-6, 1e-6}`. Exactly totally
/// positive, and its entrywise `3/2` power has a negative leading 4x4 minor.
pub fn tp_moment_4() -> Matrix {
    let atoms = [
        Scalar::one(),
        Scalar::from_ratio(1, 2),
        Scalar::from_ratio(9, 10),
        Scalar::from_ratio(2, 5),
    ];
    let w = Scalar::from_ratio(1, 1_000_000);
    let weights = [Scalar::one(), Scalar::one(), w.clone(), w];
    moment_matrix(&atoms, &weights, 4)
}

/// Five-atom totally positive Hankel approximant of `D(1/2)` (5x5): the
/// atoms of [`tp_moment_4`] plus `1/5`. Its entrywise `5/2` power has a
/// negative leading 5x5 minor.
pub fn tp_moment_5() -> Matrix {
    let atoms = [
        Scalar::one(),
        Scalar::from_ratio(1, 2),
        Scalar::from_ratio(9, 10),
        Scalar::from_ratio(2, 5),
        Scalar::from_ratio(1, 5),
    ];
    let w = Scalar::from_ratio(1, 1_000_000);
    let weights = [Scalar::one(), Scalar::one(), w.clone(), w.clone(), w];
    moment_matrix(&atoms, &weights, 5)
}

/// Totally positive lift of [`matrix_t`]: `G T(x) G + theta J` with `G` the
/// 5x5 Gaussian kernel matrix `delta_g^((i-j)^2)`.
///
/// Minors of order at most 4 of `G T G` are positive (the sandwich has the
/// pattern's full rank and `G` is totally positive), and the `theta` bump
/// lifts the lone zero determinant, so the result is exactly totally
/// positive for small rational `delta_g, theta > 0` — while the negative
/// entrywise-power minor of `T` survives the perturbation.
pub fn t_sandwich(x: &Scalar, delta_g: &Scalar, theta: &Scalar) -> Matrix {
    let g = Matrix::from_fn(5, 5, |i, j| {
        let d = (i as i64 - j as i64) * (i as i64 - j as i64);
        delta_g
            .pow(&Scalar::from_int(d), DEFAULT_PRECISION)
            .expect("integer power")
    })
    .expect("uniform family");
    let t = matrix_t(x);
    let core = g.matmul(&t).expect("5x5 product").matmul(&g).expect("5x5 product");
    core.map(|s| s + theta).expect("uniform family")
}

/// Comparison of `det F[C]` for `F = c x^alpha` against its closed form
/// `c^3 (1 - 2^(1 - alpha))`.
#[derive(Clone, Debug)]
pub struct DetCReport {
    pub computed: Scalar,
    pub closed_form: Scalar,
    pub abs_diff: Scalar,
}

/// Apply `F = c x^alpha` entrywise to the boundary matrix `C` and compare
/// the determinant with `c^3 (1 - 2^(1 - alpha))`.
pub fn verify_det_c_formula(alpha: &Scalar, c: &Scalar, precision: usize) -> DetCReport {
    let m = matrix_c(precision);
    let image = m
        .map(|s| {
            let p = s.pow(alpha, precision).expect("positive entries");
            &p.to_float(precision) * c
        })
        .expect("uniform image");
    let computed = kernel::det(&image);
    // closed form: c^3 * (1 - 2^(1 - alpha))
    let two = Scalar::from_int(2).to_float(precision);
    let exponent = &Scalar::one().to_float(precision) - alpha;
    let pow = two.pow(&exponent, precision).expect("positive base");
    let c3 = &(c * c) * c;
    let closed_form = &c3.to_float(precision) * &(&Scalar::one().to_float(precision) - &pow);
    let abs_diff = (&computed - &closed_form).abs();
    DetCReport { computed, closed_form, abs_diff }
}

/// Report from [`verify_n_expansion`].
#[derive(Clone, Debug)]
pub struct NExpansionReport {
    /// Whether `det N(eps, x) == eps^2 x^3` held bit-for-bit at every
    /// sample. Only checked for exact inputs with `alpha = 1`, where the
    /// identity is an exact rational one; `None` otherwise.
    pub exact_cubic_identity: Option<bool>,
    /// Coefficients of `x^3` and `x^4` in `det (N(eps, x)^{.^alpha})`,
    /// interpolated from the determinant samples.
    pub cubic: f64,
    pub quartic: f64,
    /// Closed forms for the same coefficients: `eps^2 alpha^3` and
    /// `(8 - 70 eps - 59 eps^2 - 4 eps^3)(alpha^3 - alpha^4) / 4`.
    pub cubic_predicted: f64,
    pub quartic_predicted: f64,
}

/// Expand `det (N(eps, x)^{.^alpha})` around `x = 0`.
///
/// Samples the determinant at each `x`, divides out `x^3`, and interpolates
/// the quotient as a polynomial in `x`: its constant and linear terms are
/// the cubic and quartic coefficients of the determinant itself. The report
/// pairs both with their closed forms. Samples must be distinct, positive,
/// and small enough that the truncated tail is negligible (`x <= 1/100` is
/// comfortable).
pub fn verify_n_expansion(
    eps: &Scalar,
    alpha: &Scalar,
    xs: &[Scalar],
    precision: usize,
) -> NExpansionReport {
    assert!(xs.len() >= 2, "need two samples to separate the cubic and quartic terms");
    let exact_inputs =
        eps.is_exact() && alpha.is_exact() && xs.iter().all(Scalar::is_exact);
    let mut exact_cubic_identity =
        (exact_inputs && *alpha == Scalar::from_int(1)).then_some(true);

    let mut ys = Vec::with_capacity(xs.len());
    for x in xs {
        let m = matrix_n(eps, x);
        let mut entries = Vec::with_capacity(16);
        let mut saw_float = false;
        for i in 0..4 {
            for j in 0..4 {
                let p = m.entry(i, j).pow(alpha, precision).expect("positive entries");
                saw_float |= !p.is_exact();
                entries.push(p);
            }
        }
        if saw_float {
            for e in &mut entries {
                *e = e.to_float(precision);
            }
        }
        let image =
            Matrix::from_fn(4, 4, |i, j| entries[4 * i + j].clone()).expect("uniform image");
        let d = kernel::det(&image);
        if let Some(ok) = exact_cubic_identity.as_mut() {
            *ok &= d == &(eps * eps) * &(&(x * x) * x);
        }
        ys.push(&d / &(&(x * x) * x));
    }
    let coeffs = interpolate(xs, &ys);

    let a3 = &(alpha * alpha) * alpha;
    let cubic_predicted = &(eps * eps) * &a3;
    let poly = &(&(&Scalar::from_int(8) - &(&Scalar::from_int(70) * eps))
        - &(&Scalar::from_int(59) * &(eps * eps)))
        - &(&Scalar::from_int(4) * &(&(eps * eps) * eps));
    let quartic_predicted =
        &(&poly * &(&a3 - &(&a3 * alpha))) / &Scalar::from_int(4);

    NExpansionReport {
        exact_cubic_identity,
        cubic: coeffs[0].to_f64(),
        quartic: coeffs[1].to_f64(),
        cubic_predicted: cubic_predicted.to_f64(),
        quartic_predicted: quartic_predicted.to_f64(),
    }
}

// Coefficients of the polynomial through (x_i, y_i), lowest degree first:
// Gaussian elimination on the Vandermonde system. The handful of sample
// points are distinct and the arithmetic is exact or high-precision, so
// conditioning is not a concern at this size.
fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> Vec<Scalar> {
    let k = xs.len();
    let mut a: Vec<Vec<Scalar>> = xs
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(k);
            let mut p = x.one_like();
            for _ in 0..k {
                row.push(p.clone());
                p = &p * x;
            }
            row
        })
        .collect();
    let mut y = ys.to_vec();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .expect("distinct sample points");
        a.swap(col, pivot);
        y.swap(col, pivot);
        for r in col + 1..k {
            let factor = &a[r][col] / &a[col][col];
            for c in col..k {
                a[r][c] = &a[r][c] - &(&factor * &a[col][c]);
            }
            y[r] = &y[r] - &(&factor * &y[col]);
        }
    }
    let mut coeffs = vec![Scalar::from_int(0); k];
    for row in (0..k).rev() {
        let mut acc = y[row].clone();
        for c in row + 1..k {
            acc = &acc - &(&a[row][c] * &coeffs[c]);
        }
        coeffs[row] = &acc / &a[row][row];
    }
    coeffs
}

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Random totally nonnegative matrix: a product of nonnegative elementary
/// bidiagonal factors and a nonnegative diagonal, which is always totally
/// nonnegative. Entries are small rationals; deterministic under a seeded
/// generator.
pub fn random_tn(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    assert!(rows >= 1 && cols >= 1);
    let grid = [
        Scalar::zero(),
        Scalar::from_ratio(1, 3),
        Scalar::from_ratio(1, 2),
        Scalar::one(),
        Scalar::from_ratio(3, 2),
        Scalar::from_int(2),
    ];
    let diag_grid = [
        Scalar::from_ratio(1, 2),
        Scalar::one(),
        Scalar::from_int(2),
        Scalar::from_int(3),
    ];
    // Lower factors act on rows, upper factors on columns.
    let lower = |n: usize, i: usize, c: &Scalar| {
        Matrix::from_fn(n, n, |r, s| {
            if r == s {
                Scalar::one()
            } else if r == i && s == i - 1 {
                c.clone()
            } else {
                Scalar::zero()
            }
        })
        .expect("uniform factor")
    };
    let mut left = Matrix::from_fn(rows, rows, |i, j| {
        if i == j {
            pick(rng, &diag_grid).clone()
        } else {
            Scalar::zero()
        }
    })
    .expect("uniform diag");
    if rows >= 2 {
        for _ in 0..(2 * rows) {
            let i = rng.gen_range(1..rows);
            left = left.matmul(&lower(rows, i, pick(rng, &grid))).expect("square product");
        }
    }
    let mut right = Matrix::from_fn(cols, cols, |i, j| {
        if i == j {
            pick(rng, &diag_grid).clone()
        } else {
            Scalar::zero()
        }
    })
    .expect("uniform diag");
    if cols >= 2 {
        for _ in 0..(2 * cols) {
            let i = rng.gen_range(1..cols);
            // Upper factor = transpose of a lower factor.
            right = lower(cols, i, pick(rng, &grid)).transpose().matmul(&right).expect("square product");
        }
    }
    let embed = Matrix::from_fn(rows, cols, |i, j| {
        if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
    .expect("uniform embed");
    left.matmul(&embed).expect("shapes").matmul(&right).expect("shapes")
}

/// Random symmetric totally nonnegative matrix `B B^T` with `B` from
/// [`random_tn`].
pub fn random_tn_sym(n: usize, rng: &mut impl Rng) -> Matrix {
    let b = random_tn(n, n, rng);
    b.matmul(&b.transpose()).expect("square product")
}

/// Random positive-semidefinite Hankel moment matrix with `n + 1` distinct
/// positive rational atoms (hence totally positive as well).
pub fn random_hankel_moment(n: usize, rng: &mut impl Rng) -> Matrix {
    // Distinct atoms: a fixed ladder scaled by a random rational.
    let scale_num = rng.gen_range(1..=4i64);
    let scale_den = rng.gen_range(1..=3i64);
    let scale = Scalar::from_ratio(scale_num, scale_den);
    let atoms: Vec<Scalar> = (0..=n)
        .map(|k| &scale * &Scalar::from_ratio(2 + k as i64, 2 + 2 * k as i64 + k as i64 % 3))
        .collect();
    let weights: Vec<Scalar> = (0..=n)
        .map(|_| Scalar::from_ratio(rng.gen_range(1..=5i64), rng.gen_range(1..=3i64)))
        .collect();
    moment_matrix(&atoms, &weights, n)
}

/// Seeded samples from the two rational 2x2 test sets for symmetric
/// positivity: constant-diagonal matrices `[[a, b], [b, a]]` with
/// `a > b > 0`, and matrices `[[a, b], [b, c]]` with `ac > b^2`. Every
/// sample is exactly totally positive (hence positive definite).
pub fn rational_test_pairs(count: usize, rng: &mut impl Rng) -> (Vec<Matrix>, Vec<Matrix>) {
    let mut constant_diag = Vec::with_capacity(count);
    let mut general = Vec::with_capacity(count);
    for _ in 0..count {
        let b = Scalar::from_ratio(rng.gen_range(1..=12i64), rng.gen_range(1..=4i64));
        let a = &b + &Scalar::from_ratio(rng.gen_range(1..=8i64), rng.gen_range(1..=4i64));
        constant_diag.push(
            Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![b, a]]).expect("uniform"),
        );
        // ac > b^2 by construction: c = (b^2 + bump) / a.
        let a2 = Scalar::from_ratio(rng.gen_range(1..=9i64), rng.gen_range(1..=3i64));
        let b2 = Scalar::from_ratio(rng.gen_range(1..=9i64), rng.gen_range(1..=3i64));
        let bump = Scalar::from_ratio(rng.gen_range(1..=5i64), rng.gen_range(1..=5i64));
        let c2 = (&(&b2 * &b2) + &bump).checked_div(&a2).expect("positive divisor");
        general.push(
            Matrix::from_rows(vec![vec![a2.clone(), b2.clone()], vec![b2, c2]]).expect("uniform"),
        );
    }
    (constant_diag, general)
}

/// Random exactly totally positive 2x2 matrix with entries in `[1/9, 9]`,
/// a determinant margin `ad >= (21/20) bc`, and node ratios bounded away
/// from 1 so downstream embeddings stay well conditioned.
pub fn random_tp2(rng: &mut impl Rng) -> Matrix {
    let ratio_ok = |p: &Scalar, q: &Scalar| {
        // p/q == 1, or p/q outside (5/6, 6/5).
        match p.partial_cmp(q) {
            Some(Ordering::Equal) => true,
            _ => {
                let five_sixth = &(p * &Scalar::from_int(6)) - &(q * &Scalar::from_int(5));
                let six_fifth = &(p * &Scalar::from_int(5)) - &(q * &Scalar::from_int(6));
                five_sixth.is_negative() || !six_fifth.is_negative()
            }
        }
    };
    loop {
        let draw = |rng: &mut dyn rand::RngCore| {
            Scalar::from_ratio(rng.gen_range(1..=9i64), rng.gen_range(1..=9i64))
        };
        let a = draw(rng);
        let b = draw(rng);
        let c = draw(rng);
        let d = draw(rng);
        // det margin: 20ad - 21bc >= 0 keeps ad/bc >= 21/20.
        let margin = &(&(&a * &d) * &Scalar::from_int(20)) - &(&(&b * &c) * &Scalar::from_int(21));
        if margin.is_negative() {
            continue;
        }
        // Row-node ratio a:c and, when equal, column ratio b:d.
        if !ratio_ok(&a, &c) {
            continue;
        }
        if a == c && !ratio_ok(&b, &d) {
            continue;
        }
        if a == c && b == d {
            continue;
        }
        return Matrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("uniform family");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{is_tn, is_tp, is_tp_hankel, Verdict};
    use crate::matrix::MinorIndex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn pair_families_are_singular_tn() {
        let x = r(3, 2);
        let y = r(5, 3);
        for m in [family_a(&x, &y), family_b(&x, &y)] {
            assert!(kernel::det(&m).is_zero());
            assert_eq!(is_tn(&m).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn perturbed_pair_families_are_tp_with_known_det() {
        let x = r(3, 2);
        let y = r(5, 3);
        let eps = r(1, 10);
        let expected = &(&x * &y) * &eps;
        for m in [family_a_tp(&x, &y, &eps), family_b_tp(&x, &y, &eps)] {
            assert_eq!(kernel::det(&m), expected);
            assert_eq!(is_tp(&m).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn mono_pair_positivity() {
        assert_eq!(is_tp(&mono_pair(&r(1, 2), &r(2, 1))).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_tp(&mono_pair(&r(2, 1), &r(1, 2))).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn rank_one_families() {
        let m = sym_rank1(&r(2, 3), &r(7, 5));
        assert!(m.is_symmetric());
        assert!(kernel::det(&m).is_zero());
        let m = rank1_sym3(&r(1, 2), &r(3, 1));
        assert!(m.is_symmetric());
        assert_eq!(kernel::rank_exact(&m), 1);
        assert_eq!(is_tn(&m).unwrap().verdict, Verdict::Holds);
        let tp = sym_rank1_tp(&r(2, 3), &r(7, 5), &r(1, 100));
        assert_eq!(is_tp(&tp).unwrap().verdict, Verdict::Holds);
        // The shifted family reproduces [[2,3],[3,5]] at s=1, t=2, eps=1.
        let sh = sym_rank1_shifted(&r(1, 1), &r(2, 1), &r(1, 1));
        assert_eq!(sh.entry(0, 1), &Scalar::from_int(3));
        assert_eq!(sh.entry(1, 1), &Scalar::from_int(5));
        assert_eq!(kernel::det(&sh), Scalar::one());
        assert_eq!(is_tp(&sh).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn rational_test_pairs_are_positive_definite() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let (constant_diag, general) = rational_test_pairs(25, &mut rng);
        assert_eq!(constant_diag.len(), 25);
        assert_eq!(general.len(), 25);
        for m in constant_diag.iter().chain(&general) {
            assert!(m.is_symmetric());
            assert!(m.is_exact());
            assert_eq!(is_tp(m).unwrap().verdict, Verdict::Holds);
        }
        for m in &constant_diag {
            assert_eq!(m.entry(0, 0), m.entry(1, 1));
            assert!(m.entry(0, 0) > m.entry(0, 1));
        }
    }

    #[test]
    fn c_matrices() {
        let c = matrix_c(128);
        assert!(c.is_symmetric());
        assert_eq!(is_tn(&c).unwrap().verdict, Verdict::Holds);
        // det C = 0 up to roundoff; the checker treats it as a zero minor.
        assert!(kernel::det(&c).abs().to_f64() < 1e-30);

        let ct = matrix_c_rational();
        assert_eq!(kernel::det(&ct), r(1, 332_929));
        assert_eq!(is_tn(&ct).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_tp(&ct).unwrap().verdict, Verdict::Fails);
        assert_eq!(kernel::rank_exact(&ct), 3);

        let tp = matrix_c_perturbed(&r(1, 50));
        assert_eq!(is_tp(&tp).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn n_family_det_is_exactly_eps2_x3() {
        let eps = r(1, 2);
        let x = Scalar::one();
        let n = matrix_n(&eps, &x);
        assert_eq!(kernel::det(&n), r(1, 4));
        // Frozen interior minor: rows {1,2} x cols {1,2} at eps=1/2, x=1.
        let sub = n.submatrix(&[1, 2], &[1, 2]);
        assert_eq!(kernel::det(&sub), Scalar::from_int(2));
        let one = Scalar::from_int(1);
        let grid = [r(1, 10), r(1, 100), r(1, 1000)];
        let report = verify_n_expansion(&r(1, 20), &one, &grid, 128);
        assert_eq!(report.exact_cubic_identity, Some(true));
        // At alpha = 1 the expansion terminates: det is exactly eps^2 x^3.
        assert!((report.cubic - 0.0025).abs() < 1e-15);
        assert!(report.quartic.abs() < 1e-15);
        assert_eq!(report.quartic_predicted, 0.0);

        // Entrywise square at eps = 1/2: coefficients 2 and 84.5.
        let grid = [r(1, 1000), r(2, 1000), r(4, 1000)];
        let report = verify_n_expansion(&r(1, 2), &Scalar::from_int(2), &grid, 128);
        assert_eq!(report.exact_cubic_identity, None);
        assert_eq!(report.cubic_predicted, 2.0);
        assert_eq!(report.quartic_predicted, 84.5);
        assert!((report.cubic - 2.0).abs() / 2.0 < 1e-3, "{}", report.cubic);
        assert!((report.quartic - 84.5).abs() / 84.5 < 1e-2, "{}", report.quartic);
    }

    #[test]
    fn n_family_is_tn_for_small_parameters() {
        let n = matrix_n(&r(1, 20), &r(1, 100));
        assert_eq!(is_tn(&n).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn t_family_structure() {
        // The pattern itself is rank 4: the lone 5x5 determinant vanishes.
        let x = r(1, 1000);
        let t = matrix_t(&x);
        assert!(t.is_symmetric());
        assert!(kernel::det(&t).is_zero());
        assert_eq!(is_tn(&t).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_tn(&matrix_t(&r(1, 100_000))).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn d_family_is_rank_two_psd_hankel() {
        let d = matrix_d(&r(1, 2), 4);
        assert!(d.is_hankel());
        assert_eq!(kernel::rank_exact(&d), 2);
        assert_eq!(
            crate::checker::is_pos_semidef(&d).unwrap().verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn moment_approximants_are_tp() {
        assert_eq!(is_tp(&tp_moment_4()).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_tp(&tp_moment_5()).unwrap().verdict, Verdict::Holds);
        assert_eq!(is_tp_hankel(&tp_moment_4()).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn sandwich_is_exactly_tp() {
        let w = t_sandwich(&r(1, 10_000), &r(1, 1_000_000), &r(1, 1_000_000_000_000));
        assert!(w.is_exact());
        assert_eq!(is_tp(&w).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn det_c_closed_form_spot_values() {
        // (c, alpha) -> c^3 (1 - 2^(1-alpha)): (1,1) -> 0, (1,2) -> 1/2,
        // (2,3) -> 6.
        let cases = [
            (Scalar::one(), Scalar::one(), 0.0),
            (Scalar::one(), Scalar::from_int(2), 0.5),
            (Scalar::from_int(2), Scalar::from_int(3), 6.0),
        ];
        for (c, alpha, expect) in cases {
            let rep = verify_det_c_formula(&alpha, &c, 128);
            assert!(rep.abs_diff.to_f64() < 1e-30, "alpha={alpha} c={c}");
            assert!((rep.closed_form.to_f64() - expect).abs() < 1e-12);
        }
        // Fractional exponent: negative determinant below the threshold.
        let rep = verify_det_c_formula(&r(1, 2), &Scalar::one(), 128);
        assert!((rep.closed_form.to_f64() - (1.0 - 2.0f64.sqrt())).abs() < 1e-12);
        assert!(rep.abs_diff.to_f64() < 1e-30);
    }

    #[test]
    fn random_tn_outputs_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_tn(3, 3, &mut rng);
            assert_eq!(is_tn(&m).unwrap().verdict, Verdict::Holds);
        }
        for _ in 0..5 {
            let m = random_tn(2, 4, &mut rng);
            assert_eq!(is_tn(&m).unwrap().verdict, Verdict::Holds);
        }
        let s = random_tn_sym(4, &mut rng);
        assert!(s.is_symmetric());
        assert_eq!(is_tn(&s).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn random_hankel_moment_outputs_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 4] {
            let m = random_hankel_moment(n, &mut rng);
            assert!(m.is_hankel());
            assert_eq!(is_tp_hankel(&m).unwrap().verdict, Verdict::Holds, "n={n}");
        }
    }

    #[test]
    fn random_tp2_outputs_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..25 {
            let m = random_tp2(&mut rng);
            assert_eq!(is_tp(&m).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn frozen_interior_minor_location() {
        // Deterministic witness location inside N's minor stream.
        let n = matrix_n(&r(1, 2), &Scalar::one());
        let hit = kernel::minors_of_size(&n, 2)
            .find(|(idx, _)| *idx == MinorIndex::new(vec![1, 2], vec![1, 2]))
            .unwrap();
        assert_eq!(hit.1, Scalar::from_int(2));
    }
}
