//! Single-variable formulas: parsing, printing, and evaluation.
//!
//! The grammar is deliberately small. `x` is the only variable, numeric
//! literals are exact rationals (decimal and scientific forms included), and
//! the operators are `+ - * / ^` with the usual precedence, `^` binding
//! tightest and associating to the right. `exp`, `log`, and `sqrt` are the
//! only functions. Unary minus is accepted only as part of a numeric literal,
//! so `x ^ -2` parses while `-x` does not (write `0 - x`).
//!
//! Evaluation stays exact as long as the input value is exact and only
//! rational operations (including integer powers) occur; anything involving
//! `exp`, `log`, `sqrt`, or a fractional power produces a float at the
//! requested precision. In formulas `0 ^ 0` evaluates to `1` (the IEEE
//! convention); this differs on purpose from the entrywise-power convention
//! in [`Scalar::pow`], which sends `0` to `0` for every exponent.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::{parse_rational_text, NumericError, Scalar};

/// Parsed formula in one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Exact rational literal. A quotient of literals like `3/2` is folded
    /// into a single `Number` during parsing.
    Number(BigRational),
    /// The variable `x`.
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sqrt(Box<Expr>),
}

/// Errors from formula parsing; `offset` is a byte index into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExprError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseExprError {}

/// Parses a formula such as `x^2 - 1` or `exp(x) - 1`.
pub fn parse_expr(text: &str) -> Result<Expr, ParseExprError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseExprError {
        ParseExprError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr, ParseExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' {
                Expr::Add(Box::new(acc), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseExprError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                Expr::Mul(Box::new(acc), Box::new(rhs))
            } else {
                fold_div(acc, rhs)
            };
        }
        Ok(acc)
    }

    // `^` is right-associative: the right operand is a whole factor.
    fn factor(&mut self) -> Result<Expr, ParseExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let expo = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(expo)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected closing parenthesis"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                if self.bytes.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
                    self.number()
                } else {
                    Err(self.error("unary minus is only allowed before a numeric literal"))
                }
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_lowercase() => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseExprError> {
        let start = self.pos;
        if self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        // Consume an exponent marker only when digits actually follow it, so
        // that `2e3` is one literal while `2ex` leaves `ex` for the parser.
        if let Some(b'e' | b'E') = self.bytes.get(self.pos) {
            let mut probe = self.pos + 1;
            if let Some(b'+' | b'-') = self.bytes.get(probe) {
                probe += 1;
            }
            if self.bytes.get(probe).is_some_and(u8::is_ascii_digit) {
                self.pos = probe;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        match parse_rational_text(text) {
            Ok(r) => Ok(Expr::Number(r)),
            Err(e) => Err(ParseExprError { offset: start + e.offset, message: e.message }),
        }
    }

    fn ident(&mut self) -> Result<Expr, ParseExprError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        if name == "x" {
            return Ok(Expr::Var);
        }
        let wrap: fn(Box<Expr>) -> Expr = match name {
            "exp" => Expr::Exp,
            "log" => Expr::Log,
            "sqrt" => Expr::Sqrt,
            _ => {
                self.pos = start;
                return Err(self.error("unknown identifier"));
            }
        };
        if self.peek() != Some(b'(') {
            return Err(self.error("expected opening parenthesis after function name"));
        }
        self.pos += 1;
        let arg = self.sum()?;
        if self.peek() != Some(b')') {
            return Err(self.error("expected closing parenthesis"));
        }
        self.pos += 1;
        Ok(wrap(Box::new(arg)))
    }
}

// Collapse a quotient of two literals into one exact literal, so that `3/2`
// parses to the same tree its printed form parses to. A zero denominator is
// left as a division node and surfaces as an evaluation error.
fn fold_div(lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Number(a), Expr::Number(b)) = (&lhs, &rhs) {
        if !b.is_zero() {
            return Expr::Number(a / b);
        }
    }
    Expr::Div(Box::new(lhs), Box::new(rhs))
}

impl Expr {
    /// Evaluates at `x`, carrying exactness where the operations allow it.
    pub fn eval(&self, x: &Scalar, precision: usize) -> Result<Scalar, NumericError> {
        match self {
            Expr::Number(r) => Ok(Scalar::Exact(r.clone())),
            Expr::Var => Ok(x.clone()),
            Expr::Add(a, b) => Ok(&a.eval(x, precision)? + &b.eval(x, precision)?),
            Expr::Sub(a, b) => Ok(&a.eval(x, precision)? - &b.eval(x, precision)?),
            Expr::Mul(a, b) => Ok(&a.eval(x, precision)? * &b.eval(x, precision)?),
            Expr::Div(a, b) => a.eval(x, precision)?.checked_div(&b.eval(x, precision)?),
            Expr::Pow(a, b) => {
                let base = a.eval(x, precision)?;
                let expo = b.eval(x, precision)?;
                if base.is_zero() && expo.is_zero() {
                    // IEEE convention for formulas; see the module docs.
                    return Ok(base.one_like());
                }
                base.pow(&expo, precision)
            }
            Expr::Exp(a) => Ok(a.eval(x, precision)?.exp(precision)),
            Expr::Log(a) => a.eval(x, precision)?.ln(precision),
            Expr::Sqrt(a) => a.eval(x, precision)?.sqrt(precision),
        }
    }

    // Printing precedence. Non-integer literals print as `p/q`, which reads
    // back as a division, so they take the precedence of `/`.
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Number(r) if !r.is_integer() => 2,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Number(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())?;
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())?;
                }
            }
            Expr::Var => f.write_str("x")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" / ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, b) => {
                a.fmt_prec(f, 4)?;
                f.write_str(" ^ ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Exp(a) => {
                f.write_str("exp(")?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
            Expr::Log(a) => {
                f.write_str("log(")?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
            Expr::Sqrt(a) => {
                f.write_str("sqrt(")?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
