//! Textual grammar for algebra elements.
//!
//! Terms look like `2*a^2*c*cs^3` or `3/2*q^(-1/2)*as*c`; `as`/`cs` are the
//! starred generators, `q` may carry integer or half-integer exponents, and
//! the quantum-sphere generator names `B0`, `Bp`, `Bm` expand in place.
//! Whitespace is insignificant and parse/print round-trips are stable.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::scalar::{QScalar, ScalarError};

use super::element::AlgebraElement;
use super::monomial::Generator;

/// Parses the element grammar.
pub fn parse_element(input: &str) -> Result<AlgebraElement, ScalarError> {
    Parser { input: input.as_bytes(), pos: 0 }.parse()
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<AlgebraElement, ScalarError> {
        self.skip_ws();
        if self.pos == self.input.len() {
            return Err(self.err("empty input"));
        }
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

    fn expr(&mut self) -> Result<AlgebraElement, ScalarError> {
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

    fn term(&mut self) -> Result<AlgebraElement, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc *= self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgebraElement, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match base {
                Atom::Q => {
                    let (num, den) = self.exponent()?;
                    let scalar = match den {
                        1 => QScalar::r_power(2 * num),
                        2 => QScalar::r_power(num),
                        _ => return Err(self.err("only integer or half-integer exponents of q")),
                    };
                    return Ok(AlgebraElement::scalar(scalar));
                }
                Atom::Element(e) => {
                    let (num, den) = self.exponent()?;
                    if den != 1 || num < 0 {
                        return Err(self.err("element exponents must be nonnegative integers"));
                    }
                    let mut acc = AlgebraElement::one();
                    for _ in 0..num {
                        acc *= e.clone();
                    }
                    return Ok(acc);
                }
            }
        }
        Ok(match base {
            Atom::Q => AlgebraElement::scalar(QScalar::q_power(1)),
            Atom::Element(e) => e,
        })
    }

    fn atom(&mut self) -> Result<Atom, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(Atom::Element(inner))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                match name {
                    "q" => Ok(Atom::Q),
                    "a" => Ok(Atom::Element(AlgebraElement::generator(Generator::A))),
                    "as" => Ok(Atom::Element(AlgebraElement::generator(Generator::AStar))),
                    "c" => Ok(Atom::Element(AlgebraElement::generator(Generator::C))),
                    "cs" => Ok(Atom::Element(AlgebraElement::generator(Generator::CStar))),
                    "B0" => Ok(Atom::Element(
                        &AlgebraElement::generator(Generator::C)
                            * &AlgebraElement::generator(Generator::CStar),
                    )),
                    "Bm" => Ok(Atom::Element(
                        &AlgebraElement::generator(Generator::A)
                            * &AlgebraElement::generator(Generator::CStar),
                    )),
                    "Bp" => Ok(Atom::Element(
                        &AlgebraElement::generator(Generator::C)
                            * &AlgebraElement::generator(Generator::AStar),
                    )),
                    other => {
                        self.pos = start;
                        Err(self.err(&format!("unknown symbol '{other}'")))
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let x = self.number()?;
                Ok(Atom::Element(AlgebraElement::scalar(QScalar::from_rational(x))))
            }
            _ => Err(self.err("expected factor")),
        }
    }

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

    /// Integer, rational `a/b`, decimal (exact base-10), with an optional
    /// `e`-exponent on decimals.
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
        if self.pos < self.input.len() && (self.input[self.pos] | 0x20) == b'e' {
            self.pos += 1;
            let neg = match self.input.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e = self.integer()? as u32;
            let p = BigRational::from_integer(BigInt::from(10u32).pow(e));
            if neg {
                value /= p;
            } else {
                value *= p;
            }
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

enum Atom {
    Q,
    Element(AlgebraElement),
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// True when the scalar is a single signed Laurent term, returning
/// (is_negative, magnitude-as-scalar).
fn single_term_parts(c: &QScalar) -> Option<(bool, BigRational, i64)> {
    let mut it = c.iter();
    let (k, rat) = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some((rat.is_negative(), rat.abs(), *k))
}

pub(super) fn fmt_element(e: &AlgebraElement, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    for (idx, (m, c)) in e.iter().enumerate() {
        match single_term_parts(c) {
            Some((neg, mag, k)) => {
                if idx == 0 {
                    if neg {
                        write!(f, "-")?;
                    }
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let mut factors: Vec<String> = Vec::new();
                if !mag.is_one() || (k == 0 && m.is_unit()) {
                    factors.push(mag.to_string());
                }
                if k != 0 {
                    factors.push(q_power_string(k));
                }
                if !m.is_unit() {
                    factors.push(m.to_string());
                }
                if factors.is_empty() {
                    factors.push("1".into());
                }
                write!(f, "{}", factors.join("*"))?;
            }
            None => {
                if idx > 0 {
                    write!(f, " + ")?;
                }
                if m.is_unit() {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "({c})*{m}")?;
                }
            }
        }
    }
    Ok(())
}

fn q_power_string(r_exp: i64) -> String {
    if r_exp == 2 {
        "q".into()
    } else if r_exp % 2 == 0 {
        let e = r_exp / 2;
        if e > 0 {
            format!("q^{e}")
        } else {
            format!("q^({e})")
        }
    } else {
        format!("q^({r_exp}/2)")
    }
}
