//! Exact coefficient arithmetic: Laurent polynomials in `r = q^(1/2)` with
//! arbitrary-precision rational coefficients.
//!
//! Every scalar produced by the algebra (relation rewrites, enveloping-algebra
//! actions, q-numbers) is a finite rational combination of half-integer powers
//! of `q`, so this ring is closed under everything the toolkit computes.
//! Exponents are stored as powers of `r`; `q^k` is `r^(2k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("evaluation point r = {0} outside the open interval (0, 1)")]
    Domain(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// An exact Laurent polynomial in `r = q^(1/2)` over the rationals.
///
/// Canonical form: zero coefficients are never stored, so structural equality
/// is semantic equality. The ring is commutative and conjugation is the
/// identity (`q` is a real deformation parameter).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QScalar {
    terms: BTreeMap<i64, BigRational>,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(x: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !x.is_zero() {
            terms.insert(0, x);
        }
        QScalar { terms }
    }

    /// `num/den` as a constant scalar.
    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The monomial `r^k`, i.e. `q^(k/2)`.
    pub fn r_power(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigRational::one());
        QScalar { terms }
    }

    /// The monomial `q^k`.
    pub fn q_power(k: i64) -> Self {
        Self::r_power(2 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// True when the scalar is a plain rational (no `r` dependence).
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&0))
    }

    /// Coefficient of `r^k`.
    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.terms.iter()
    }

    /// Complex conjugation. `q` is real, so this is the identity.
    pub fn conj(&self) -> Self {
        self.clone()
    }

    pub fn scale(&self, by: &BigRational) -> Self {
        if by.is_zero() {
            return Self::zero();
        }
        QScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, c * by)).collect(),
        }
    }

    /// Multiply by `r^k` (shift all exponents).
    pub fn mul_r_power(&self, k: i64) -> Self {
        QScalar {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    fn insert(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Exact evaluation at a rational `r` in `(0, 1)`.
    pub fn eval_rational(&self, r: &BigRational) -> Result<BigRational, ScalarError> {
        check_domain_rational(r)?;
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            acc += c * rational_pow(r, *k);
        }
        Ok(acc)
    }

    /// Floating evaluation at `r` in `(0, 1)`.
    pub fn eval_f64(&self, r: f64) -> Result<NumericValue, ScalarError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(ScalarError::Domain(format!("{r}")));
        }
        let mut acc = 0.0f64;
        for (k, c) in &self.terms {
            acc += rational_to_f64(c) * r.powi(*k as i32);
        }
        Ok(NumericValue { value: acc, provenance: Provenance::FloatingComputed })
    }

    /// Exact evaluation followed by conversion to `f64`.
    pub fn eval_exact(&self, r: &BigRational) -> Result<NumericValue, ScalarError> {
        let exact = self.eval_rational(r)?;
        Ok(NumericValue { value: rational_to_f64(&exact), provenance: Provenance::ExactEvaluated })
    }

    /// Floating evaluation with the sign dropped, for norm bookkeeping.
    pub fn abs_at(&self, r: f64) -> f64 {
        self.eval_f64(r).map(|v| v.value.abs()).unwrap_or(f64::NAN)
    }
}

fn check_domain_rational(r: &BigRational) -> Result<(), ScalarError> {
    if r.is_positive() && r < &BigRational::one() {
        Ok(())
    } else {
        Err(ScalarError::Domain(format!("{r}")))
    }
}

fn rational_pow(r: &BigRational, k: i64) -> BigRational {
    let p = r.pow(k.unsigned_abs() as u32 as i32);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back through a quotient of big floats for extreme heights.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// The q-number `[s] = (q^-s - q^s)/(q^-1 - q)`, expanded in closed form as
/// `q^(-s+1) + q^(-s+3) + ... + q^(s-1)`. `[0] = 0`.
pub fn qint(s: u32) -> QScalar {
    let mut out = QScalar::zero();
    for t in 0..s as i64 {
        out += QScalar::q_power(-(s as i64) + 1 + 2 * t);
    }
    out
}

/// A double-precision value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NumericValue {
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    ExactEvaluated,
    FloatingComputed,
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, c.clone());
        }
        out
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, -c.clone());
        }
        out
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        let mut out = QScalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.insert(ka + kb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                (&self).$method(&rhs)
            }
        }
        impl $assign_trait for QScalar {
            fn $assign_method(&mut self, rhs: QScalar) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Rendering and parsing: "3/2*q^(-1/2) + q"
// ---------------------------------------------------------------------------

fn fmt_q_exponent(f: &mut fmt::Formatter<'_>, r_exp: i64) -> fmt::Result {
    debug_assert!(r_exp != 0);
    if r_exp == 2 {
        write!(f, "q")
    } else if r_exp % 2 == 0 {
        let e = r_exp / 2;
        if e > 0 {
            write!(f, "q^{e}")
        } else {
            write!(f, "q^({e})")
        }
    } else {
        write!(f, "q^({r_exp}/2)")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                fmt_q_exponent(f, *k)?;
            } else {
                write!(f, "{mag}*")?;
                fmt_q_exponent(f, *k)?;
            }
        }
        Ok(())
    }
}

impl FromStr for QScalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScalarParser { input: s.as_bytes(), pos: 0 }.parse()
    }
}

struct ScalarParser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn parse(mut self) -> Result<QScalar, ScalarError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.input.len() {
            return Err(self.err("trailing input"));
        }
        Ok(v)
    }

    fn err(&self, message: &str) -> ScalarError {
        ScalarError::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc *= self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QScalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'q') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let (num, den) = self.exponent()?;
                    match den {
                        1 => Ok(QScalar::r_power(2 * num)),
                        2 => Ok(QScalar::r_power(num)),
                        _ => Err(self.err("only integer or half-integer exponents of q")),
                    }
                } else {
                    Ok(QScalar::q_power(1))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let x = self.number()?;
                Ok(QScalar::from_rational(x))
            }
            _ => Err(self.err("expected scalar factor")),
        }
    }

    /// Exponent: `2`, `-1`, `(3)`, `(-1/2)`.
    fn exponent(&mut self) -> Result<(i64, i64), ScalarError> {
        let parenthesized = self.peek() == Some(b'(');
        if parenthesized {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let num = self.integer()? as i64;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.integer()? as i64
        } else {
            1
        };
        if parenthesized {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok((if neg { -num } else { num }, den))
    }

    /// Number literal: integer, rational `a/b`, or decimal `0.25` (read as an
    /// exact base-10 rational).
    fn number(&mut self) -> Result<BigRational, ScalarError> {
        let int = self.integer()?;
        let mut value = BigRational::from_integer(BigInt::from(int));
        if self.pos < self.input.len() && self.input[self.pos] == b'.' {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.err("expected digits after decimal point"));
            }
            let digits = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
            let frac_num: BigInt = digits.parse().unwrap();
            let frac_den = BigInt::from(10u32).pow((self.pos - start) as u32);
            value += BigRational::new(frac_num, frac_den);
        } else if self.pos < self.input.len() && self.input[self.pos] == b'/' {
            self.pos += 1;
            self.skip_ws();
            let den = self.integer()?;
            if den == 0 {
                return Err(self.err("zero denominator"));
            }
            value /= BigRational::from_integer(BigInt::from(den));
        }
        Ok(value)
    }

    fn integer(&mut self) -> Result<u64, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer overflow"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QScalar {
        QScalar::q_power(1)
    }

    #[test]
    fn qint_small_values() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(1), QScalar::one());
        assert_eq!(qint(2), &QScalar::q_power(-1) + &q());
    }

    #[test]
    fn qint_satisfies_defining_identity() {
        // (q^-1 - q) * [s] = q^-s - q^s, symbolically for a range of s.
        let lhs_factor = &QScalar::q_power(-1) - &q();
        for s in 0..=12u32 {
            let lhs = &lhs_factor * &qint(s);
            let rhs = &QScalar::q_power(-(s as i64)) - &QScalar::q_power(s as i64);
            assert_eq!(lhs, rhs, "s = {s}");
        }
    }

    #[test]
    fn qint_matches_float_formula_on_grid() {
        for s in 1..=6u32 {
            for qv in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
                let r = qv.sqrt();
                let got = qint(s).eval_f64(r).unwrap().value;
                let want = (qv.powi(-(s as i32)) - qv.powi(s as i32)) / (1.0 / qv - qv);
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "s={s} q={qv}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        // [2] at q = 1/2 (r = 1/sqrt(2)): q^-1 + q = 2.5.
        let v = qint(2).eval_f64(0.5f64.sqrt()).unwrap();
        assert!((v.value - 2.5).abs() < 1e-12);
        assert_eq!(v.provenance, Provenance::FloatingComputed);

        let one = QScalar::one().eval_f64(0.37).unwrap();
        assert_eq!(one.value, 1.0);

        assert!(matches!(QScalar::one().eval_f64(1.5), Err(ScalarError::Domain(_))));
        assert!(matches!(QScalar::one().eval_f64(0.0), Err(ScalarError::Domain(_))));
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let x = &(&qint(3) * &QScalar::r_power(-3)) + &QScalar::rational(7, 3);
        let r = BigRational::new(BigInt::from(1), BigInt::from(2));
        let exact = x.eval_exact(&r).unwrap();
        let float = x.eval_f64(0.5).unwrap();
        assert_eq!(exact.provenance, Provenance::ExactEvaluated);
        let rel = (exact.value - float.value).abs() / exact.value.abs().max(1.0);
        assert!(rel <= 1e-12);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let cases = [
            QScalar::zero(),
            QScalar::one(),
            -QScalar::one(),
            QScalar::rational(3, 2) * QScalar::r_power(-1) + q(),
            QScalar::q_power(-2) - QScalar::rational(1, 7) * QScalar::r_power(5),
        ];
        for x in cases {
            let s = x.to_string();
            let back: QScalar = s.parse().unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(back, x, "round trip through {s:?}");
        }
        // The documented rendering.
        let x = QScalar::rational(3, 2) * QScalar::r_power(-1) + q();
        assert_eq!(x.to_string(), "3/2*q^(-1/2) + q");
    }

    #[test]
    fn parse_accepts_decimals_exactly() {
        let x: QScalar = "0.01".parse().unwrap();
        assert_eq!(x, QScalar::rational(1, 100));
        let y: QScalar = "2.5*q^(-1)".parse().unwrap();
        assert_eq!(y, QScalar::rational(5, 2) * QScalar::q_power(-1));
    }

    #[test]
    fn parse_reports_position() {
        let err = "1 + %".parse::<QScalar>().unwrap_err();
        match err {
            ScalarError::Parse { position, .. } => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
