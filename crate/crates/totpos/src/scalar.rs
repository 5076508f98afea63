//! Scalar arithmetic shared by every kernel in the crate.
//!
//! Two representations live behind one enum:
//!
//! * [`Scalar::Exact`] — arbitrary-precision rationals. Everything the
//!   determinant kernels conclude from exact scalars is a proof, not an
//!   approximation.
//! * [`Scalar::Float`] — arbitrary-precision binary floats with a per-value
//!   precision (bits of mantissa, at least [`MIN_PRECISION`]). Results are
//!   correctly rounded per operation, so a `p`-bit pipeline carries relative
//!   errors of order `2^-p` per step.
//!
//! Mixed-variant arithmetic promotes the exact operand to the float operand's
//! precision; the tower is deliberately one-way (floats never silently become
//! "exact"). Entrywise power maps use the convention `0^alpha = 0` for all
//! `alpha >= 0`, including `alpha = 0`; see [`Scalar::pow`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision binary float with round-half-to-even.
pub type Bits = FBig<HalfEven, 2>;

/// Default mantissa precision (bits) for float construction and promotion.
pub const DEFAULT_PRECISION: usize = 128;

/// Smallest precision any API will produce; matches IEEE-754 double mantissa.
pub const MIN_PRECISION: usize = 53;

/// A number that is either an exact rational or a tracked-precision float.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(Bits),
}

/// Errors from scalar parsing; `offset` is a byte index into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid number at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseScalarError {}

/// Domain errors from scalar transcendental and power operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// `0^alpha` with `alpha < 0`.
    ZeroToNegativePower,
    /// Fractional power of a negative base.
    NegativeBase,
    /// Logarithm of a non-positive value.
    LogDomain,
    /// Square root of a negative value.
    SqrtDomain,
    /// Division by zero in a user-facing evaluation.
    DivisionByZero,
    /// Float input was NaN or infinite.
    NotFinite,
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            NumericError::ZeroToNegativePower => "zero raised to a negative power",
            NumericError::NegativeBase => "fractional power of a negative base",
            NumericError::LogDomain => "logarithm of a non-positive value",
            NumericError::SqrtDomain => "square root of a negative value",
            NumericError::DivisionByZero => "division by zero",
            NumericError::NotFinite => "input is not a finite number",
        };
        f.write_str(msg)
    }
}

impl std::error::Error for NumericError {}

fn clamp_precision(p: usize) -> usize {
    p.max(MIN_PRECISION)
}

/// Exact conversion of a `BigInt` into a `Bits` value.
fn bigint_to_bits(n: &BigInt) -> Bits {
    let (sign, limbs) = n.to_u64_digits();
    // Enough precision that every accumulation step below is exact.
    let total = 64 * limbs.len().max(1) + 64;
    let two64 = (Bits::from(1u64 << 32) * Bits::from(1u64 << 32))
        .with_precision(total)
        .value();
    let mut acc = Bits::ZERO.with_precision(total).value();
    for limb in limbs.iter().rev() {
        acc = acc * two64.clone() + Bits::from(*limb).with_precision(total).value();
    }
    if sign == Sign::Minus {
        acc = -acc;
    }
    acc
}

/// Correctly-rounded (to within 1 ulp) conversion of a rational to `p` bits.
fn rational_to_bits(r: &BigRational, p: usize) -> Bits {
    let p = clamp_precision(p);
    let num = bigint_to_bits(r.numer());
    let den = bigint_to_bits(r.denom());
    let work = num.precision().max(den.precision()).max(p + 64);
    let q = num.with_precision(work).value() / den.with_precision(work).value();
    q.with_precision(p).value()
}

impl Scalar {
    /// Exact integer.
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact ratio `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big_ratio(r: BigRational) -> Scalar {
        Scalar::Exact(r)
    }

    /// Float at `precision` bits from an `f64`. Rejects NaN and infinities.
    pub fn float_from_f64(x: f64, precision: usize) -> Result<Scalar, NumericError> {
        if !x.is_finite() {
            return Err(NumericError::NotFinite);
        }
        let b = Bits::try_from(x).map_err(|_| NumericError::NotFinite)?;
        Ok(Scalar::Float(b.with_precision(clamp_precision(precision)).value()))
    }

    /// Exact zero.
    pub fn zero() -> Scalar {
        Scalar::from_int(0)
    }

    /// Exact one.
    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    /// Zero in the same representation (and precision) as `self`.
    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Exact(_) => Scalar::zero(),
            Scalar::Float(b) => {
                Scalar::Float(Bits::ZERO.with_precision(b.precision().max(MIN_PRECISION)).value())
            }
        }
    }

    /// One in the same representation (and precision) as `self`.
    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Exact(_) => Scalar::one(),
            Scalar::Float(b) => {
                Scalar::Float(Bits::ONE.with_precision(b.precision().max(MIN_PRECISION)).value())
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Mantissa precision in bits for floats, `None` for exact values.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(b) => Some(b.precision()),
        }
    }

    /// Parse either representation from text.
    ///
    /// Accepted forms: `123`, `-4`, `p/q`, `3.25`, `-1.5e-3`, `2e6`. The text
    /// is interpreted exactly (decimals are exact rationals); `precision`
    /// picks the rounding target when `as_float` is set.
    pub fn parse(text: &str, as_float: bool, precision: usize) -> Result<Scalar, ParseScalarError> {
        let r = parse_rational_text(text)?;
        if as_float {
            Ok(Scalar::Float(rational_to_bits(&r, precision)))
        } else {
            Ok(Scalar::Exact(r))
        }
    }

    /// The exact rational value, if this scalar is exact.
    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Convert to a float of `precision` bits (floats are re-rounded).
    pub fn to_float(&self, precision: usize) -> Scalar {
        let p = clamp_precision(precision);
        match self {
            Scalar::Exact(r) => Scalar::Float(rational_to_bits(r, p)),
            Scalar::Float(b) => Scalar::Float(b.clone().with_precision(p).value()),
        }
    }

    /// Borrow the underlying float, promoting exact values at `precision`.
    fn to_bits(&self, precision: usize) -> Bits {
        match self {
            Scalar::Exact(r) => rational_to_bits(r, clamp_precision(precision)),
            Scalar::Float(b) => b.clone(),
        }
    }

    /// Nearest `f64` (for reporting; not used in decision procedures).
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_bits(r, 64).to_f64().value(),
            Scalar::Float(b) => b.to_f64().value(),
        }
    }

    /// Sign of the value: `Less` for negative, `Equal` for zero, `Greater`
    /// for positive. Exact for both representations.
    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => r.numer().sign().partial_cmp(&Sign::NoSign).map_or(Ordering::Equal, |o| o),
            Scalar::Float(b) => b.partial_cmp(&Bits::ZERO).unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// The value as an integer, when it is one.
    ///
    /// Floats qualify only when they are integral and at most 2^53 in
    /// magnitude, so the answer is exact.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Exact(r) => r.is_integer().then(|| r.numer().clone()),
            Scalar::Float(_) => {
                let x = self.to_f64();
                if x.fract() == 0.0 && x.abs() <= 9.007_199_254_740_992e15 {
                    Some(BigInt::from(x as i64))
                } else {
                    None
                }
            }
        }
    }

    fn promote_pair(&self, rhs: &Scalar) -> (Scalar, Scalar) {
        match (self, rhs) {
            (Scalar::Exact(_), Scalar::Exact(_)) => (self.clone(), rhs.clone()),
            (Scalar::Float(b), Scalar::Exact(_)) => {
                let p = b.precision().max(MIN_PRECISION);
                (self.clone(), rhs.to_float(p))
            }
            (Scalar::Exact(_), Scalar::Float(b)) => {
                let p = b.precision().max(MIN_PRECISION);
                (self.to_float(p), rhs.clone())
            }
            (Scalar::Float(_), Scalar::Float(_)) => (self.clone(), rhs.clone()),
        }
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, NumericError> {
        if rhs.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    /// `self^alpha` under the entrywise-map convention `0^alpha = 0` for all
    /// `alpha >= 0` (including `alpha = 0`).
    ///
    /// Integer exponents of exact bases stay exact; everything else is
    /// evaluated in floats at `precision` bits.
    pub fn pow(&self, alpha: &Scalar, precision: usize) -> Result<Scalar, NumericError> {
        let p = clamp_precision(precision);
        match self.sign() {
            Ordering::Equal => {
                if alpha.is_negative() {
                    Err(NumericError::ZeroToNegativePower)
                } else {
                    Ok(self.zero_like())
                }
            }
            Ordering::Less => match alpha.as_integer() {
                Some(n) => Ok(self.powi(&n, p)),
                None => Err(NumericError::NegativeBase),
            },
            Ordering::Greater => {
                if let Some(n) = alpha.as_integer() {
                    return Ok(self.powi(&n, p));
                }
                let base = self.to_bits(p);
                let a = alpha.to_bits(p);
                Ok(Scalar::Float(base.powf(&a)))
            }
        }
    }

    /// Integer power; exact on exact scalars, works for negative exponents.
    fn powi(&self, n: &BigInt, precision: usize) -> Scalar {
        let mag = n.magnitude().to_u32().unwrap_or(u32::MAX);
        match self {
            Scalar::Exact(r) => {
                let pos = r.pow(mag as i32);
                if n.is_negative() {
                    Scalar::Exact(pos.recip())
                } else {
                    Scalar::Exact(pos)
                }
            }
            Scalar::Float(b) => {
                let p = b.precision().max(precision).max(MIN_PRECISION);
                let mut acc = Bits::ONE.with_precision(p).value();
                let base = b.clone().with_precision(p).value();
                for _ in 0..mag {
                    acc = acc * base.clone();
                }
                if n.is_negative() {
                    acc = Bits::ONE.with_precision(p).value() / acc;
                }
                Scalar::Float(acc)
            }
        }
    }

    /// Natural exponential, always a float at `precision` bits.
    pub fn exp(&self, precision: usize) -> Scalar {
        Scalar::Float(self.to_bits(clamp_precision(precision)).exp())
    }

    /// Natural logarithm; errors on non-positive input.
    pub fn ln(&self, precision: usize) -> Result<Scalar, NumericError> {
        if !self.is_positive() {
            return Err(NumericError::LogDomain);
        }
        Ok(Scalar::Float(self.to_bits(clamp_precision(precision)).ln()))
    }

    /// Square root; exact zero stays exact, otherwise a float.
    pub fn sqrt(&self, precision: usize) -> Result<Scalar, NumericError> {
        match self.sign() {
            Ordering::Less => Err(NumericError::SqrtDomain),
            Ordering::Equal => Ok(self.zero_like()),
            Ordering::Greater => Ok(Scalar::Float(self.to_bits(clamp_precision(precision)).sqrt())),
        }
    }
}

fn binop(lhs: &Scalar, rhs: &Scalar, f_exact: fn(&BigRational, &BigRational) -> BigRational, f_float: fn(Bits, Bits) -> Bits) -> Scalar {
    let (a, b) = lhs.promote_pair(rhs);
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(f_exact(&x, &y)),
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(f_float(x, y)),
        _ => unreachable!("promote_pair yields matching variants"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on a zero divisor; use [`Scalar::checked_div`] on user input.
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        binop(self, rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(b) => Scalar::Float(-b),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    /// Mixed-variant comparison promotes the exact side to the float side's
    /// precision first, so it is approximate near ties.
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        let (a, b) = self.promote_pair(other);
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x.partial_cmp(&y),
            (Scalar::Float(x), Scalar::Float(y)) => x.partial_cmp(&y),
            _ => unreachable!(),
        }
    }
}

impl serde::Serialize for Scalar {
    /// Serializes as the display string (`"3/4"`, `"1.25"`), which every
    /// reader in this crate parses back.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(b) => write!(f, "{}", b.to_decimal().value()),
        }
    }
}

/// Parse `sign? digits ( / digits | . digits? (e sign? digits)? | e sign? digits )?`
/// into an exact rational. Shared by scalar parsing and the matrix readers.
pub fn parse_rational_text(text: &str) -> Result<BigRational, ParseScalarError> {
    let s = text.trim();
    let base = text.len() - text.trim_start().len();
    let err = |offset: usize, message: &str| ParseScalarError {
        offset: base + offset,
        message: message.to_string(),
    };
    if s.is_empty() {
        return Err(err(0, "empty input"));
    }
    let bytes = s.as_bytes();
    let mut i = 0;
    let neg = match bytes[0] {
        b'-' => {
            i += 1;
            true
        }
        b'+' => {
            i += 1;
            false
        }
        _ => false,
    };
    let digits_from = |bytes: &[u8], mut j: usize| {
        let start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        (start, j)
    };
    let (int_start, int_end) = digits_from(bytes, i);
    if int_start == int_end {
        return Err(err(i, "expected a digit"));
    }
    i = int_end;
    let int_part = &s[int_start..int_end];

    if i < bytes.len() && bytes[i] == b'/' {
        let (dstart, dend) = digits_from(bytes, i + 1);
        if dstart == dend {
            return Err(err(i + 1, "expected denominator digits"));
        }
        if dend != bytes.len() {
            return Err(err(dend, "trailing characters after denominator"));
        }
        let num: BigInt = int_part.parse().unwrap();
        let den: BigInt = s[dstart..dend].parse().unwrap();
        if den.is_zero() {
            return Err(err(dstart, "zero denominator"));
        }
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }

    let mut numer: BigInt = int_part.parse().unwrap();
    let mut scale10: i64 = 0;
    if i < bytes.len() && bytes[i] == b'.' {
        let (fstart, fend) = digits_from(bytes, i + 1);
        if fstart == fend {
            return Err(err(i + 1, "expected fractional digits"));
        }
        for d in s[fstart..fend].bytes() {
            numer = numer * 10 + BigInt::from((d - b'0') as i64);
        }
        scale10 -= (fend - fstart) as i64;
        i = fend;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        let mut exp_neg = false;
        if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
            exp_neg = bytes[j] == b'-';
            j += 1;
        }
        let (estart, eend) = digits_from(bytes, j);
        if estart == eend {
            return Err(err(j, "expected exponent digits"));
        }
        let e: i64 = s[estart..eend]
            .parse()
            .map_err(|_| err(estart, "exponent out of range"))?;
        scale10 += if exp_neg { -e } else { e };
        i = eend;
    }
    if i != bytes.len() {
        return Err(err(i, "trailing characters"));
    }
    let mut r = BigRational::from_integer(numer);
    let ten = BigInt::from(10);
    if scale10 >= 0 {
        r *= BigRational::from_integer(ten.pow(scale10 as u32));
    } else {
        r /= BigRational::from_integer(ten.pow((-scale10) as u32));
    }
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn parse_forms() {
        for (text, num, den) in [
            ("5", 5, 1),
            ("-12", -12, 1),
            ("3/4", 3, 4),
            ("-3/4", -3, 4),
            ("2.5", 5, 2),
            ("-0.125", -1, 8),
            ("1e3", 1000, 1),
            ("2.5e-1", 1, 4),
            ("+7", 7, 1),
        ] {
            let got = Scalar::parse(text, false, 64).unwrap();
            assert_eq!(got, ex(num, den), "{text}");
        }
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = Scalar::parse("1.x", false, 64).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = Scalar::parse("3/0", false, 64).unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(Scalar::parse("", false, 64).is_err());
        assert!(Scalar::parse("1/ 2", false, 64).is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let a = ex(1, 3);
        let b = ex(1, 6);
        assert_eq!(&a + &b, ex(1, 2));
        assert_eq!(&a - &b, ex(1, 6));
        assert_eq!(&a * &b, ex(1, 18));
        assert_eq!(&a / &b, ex(2, 1));
        assert_eq!((-&a).sign(), Ordering::Less);
    }

    #[test]
    fn float_promotion_tracks_precision() {
        let a = ex(1, 3).to_float(100);
        assert_eq!(a.precision(), Some(100));
        let b = &a + &ex(1, 6);
        assert_eq!(b.precision(), Some(100));
        let half = ex(1, 2);
        let diff = &b - &half;
        assert!(diff.abs() < ex(1, 1_000_000_000).to_float(100));
    }

    #[test]
    fn float_conversion_is_correctly_rounded() {
        // 1/3 at 60 bits: |x - 1/3| <= 2^-60 relative.
        let x = ex(1, 3).to_float(60);
        let back = x.to_f64();
        assert!((back - 1.0 / 3.0).abs() < 1e-15);
        // Large integers convert exactly.
        let big = Scalar::Exact(BigRational::from_integer(BigInt::from(u64::MAX)));
        let f = big.to_float(128);
        assert_eq!(f.to_f64(), u64::MAX as f64);
    }

    #[test]
    fn pow_conventions() {
        let zero = Scalar::zero();
        // 0^alpha = 0 for alpha >= 0, including alpha = 0.
        for alpha in [Scalar::zero(), ex(1, 2), Scalar::from_int(3)] {
            assert_eq!(zero.pow(&alpha, 64).unwrap(), Scalar::zero());
        }
        assert_eq!(
            zero.pow(&ex(-1, 2), 64),
            Err(NumericError::ZeroToNegativePower)
        );
        // Integer powers of exact bases stay exact.
        let p = ex(2, 3).pow(&Scalar::from_int(3), 64).unwrap();
        assert_eq!(p, ex(8, 27));
        assert!(p.is_exact());
        let p = ex(2, 3).pow(&Scalar::from_int(-2), 64).unwrap();
        assert_eq!(p, ex(9, 4));
        // Negative bases take integer exponents only.
        assert_eq!(ex(-2, 1).pow(&Scalar::from_int(2), 64).unwrap(), ex(4, 1));
        assert_eq!(
            ex(-2, 1).pow(&ex(1, 2), 64),
            Err(NumericError::NegativeBase)
        );
        // Fractional powers are floats: 4^(1/2) = 2.
        let r = ex(4, 1).pow(&ex(1, 2), 96).unwrap();
        assert!(!r.is_exact());
        assert!((&r - &ex(2, 1)).abs() < ex(1, 1_000_000_000).to_float(96));
    }

    #[test]
    fn transcendentals() {
        let e1 = Scalar::one().exp(96);
        assert!((e1.to_f64() - std::f64::consts::E).abs() < 1e-14);
        let l = ex(2, 1).ln(96).unwrap();
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-14);
        assert_eq!(ex(-1, 1).ln(96), Err(NumericError::LogDomain));
        let s = ex(2, 1).sqrt(96).unwrap();
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(ex(-1, 1).sqrt(96), Err(NumericError::SqrtDomain));
        assert_eq!(Scalar::zero().sqrt(96).unwrap(), Scalar::zero());
    }

    #[test]
    fn display_round_trips_exact() {
        for s in ["5", "-7/3", "0", "123456789123456788/7"] {
            let v = Scalar::parse(s, false, 64).unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn display_round_trips_float() {
        let x = ex(1, 7).to_float(128);
        let text = x.to_string();
        let y = Scalar::parse(&text, true, 128).unwrap();
        let diff = (&x - &y).abs();
        assert!(diff < ex(1, i64::MAX).to_float(128));
    }

    #[test]
    fn as_integer_detection() {
        assert_eq!(ex(6, 2).as_integer(), Some(BigInt::from(3)));
        assert_eq!(ex(1, 2).as_integer(), None);
        assert_eq!(ex(5, 1).to_float(64).as_integer(), Some(BigInt::from(5)));
        assert_eq!(ex(1, 2).to_float(64).as_integer(), None);
    }

    #[test]
    fn checked_div_reports_zero() {
        assert_eq!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(NumericError::DivisionByZero)
        );
    }
}
