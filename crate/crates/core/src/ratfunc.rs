//! Fraction field over the Laurent coefficient ring, for exact linear solves.
//!
//! Only the integral solver and exact kernel computations need division;
//! results are converted back to Laurent form at the end (a reduced fraction
//! whose denominator is a single term), and anything that fails to reduce
//! signals that the target was outside the polynomial image.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::QScalar;

/// Dense polynomial in `r` with rational coefficients, plus the exponent
/// shift that turns it back into a Laurent polynomial.
fn to_poly(x: &QScalar) -> (i64, Vec<BigRational>) {
    if x.is_zero() {
        return (0, vec![]);
    }
    let min = *x.iter().next().unwrap().0;
    let max = *x.iter().next_back().unwrap().0;
    let mut coeffs = vec![BigRational::zero(); (max - min + 1) as usize];
    for (k, c) in x.iter() {
        coeffs[(k - min) as usize] = c.clone();
    }
    (min, coeffs)
}

fn from_poly(shift: i64, coeffs: &[BigRational]) -> QScalar {
    let mut out = QScalar::zero();
    for (d, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out += QScalar::from_rational(c.clone()).mul_r_power(shift + d as i64);
        }
    }
    out
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem: Vec<BigRational> = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let factor = &rem[da] / lead;
        quot[da - db] = factor.clone();
        for t in 0..=db {
            let v = &b[t] * &factor;
            rem[da - db + t] -= v;
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x: Vec<BigRational> = a.to_vec();
    let mut y: Vec<BigRational> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
        // Keep coefficients small by making the remainder monic.
        if let Some(lead) = y.last().cloned() {
            for c in &mut y {
                *c /= lead.clone();
            }
        }
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= lead.clone();
        }
    }
    x
}

/// A reduced fraction of Laurent polynomials in `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RatScalar {
    num: QScalar,
    /// Ordinary polynomial with nonzero constant coefficient, monic.
    den: QScalar,
}

impl RatScalar {
    pub fn zero() -> Self {
        RatScalar { num: QScalar::zero(), den: QScalar::one() }
    }

    pub fn one() -> Self {
        RatScalar { num: QScalar::one(), den: QScalar::one() }
    }

    pub fn from_laurent(x: QScalar) -> Self {
        RatScalar { num: x, den: QScalar::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(num: QScalar, den: QScalar) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (sn, pn) = to_poly(&num);
        let (sd, pd) = to_poly(&den);
        let g = poly_gcd(&pn, &pd);
        let (qn, rn) = poly_divmod(&pn, &g);
        let (qd, rd) = poly_divmod(&pd, &g);
        debug_assert!(rn.is_empty() && rd.is_empty());
        // Normalize: denominator monic with constant term at r^0; the whole
        // exponent shift moves to the numerator.
        let lead = qd.last().cloned().unwrap();
        let qn: Vec<BigRational> = qn.iter().map(|c| c / &lead).collect();
        let qd: Vec<BigRational> = qd.iter().map(|c| c / &lead).collect();
        RatScalar {
            num: from_poly(sn - sd, &qn),
            den: from_poly(0, &qd),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::reduce(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn neg(&self) -> Self {
        RatScalar { num: -&self.num, den: self.den.clone() }
    }

    /// Back to Laurent form; `None` when the reduced denominator still has
    /// more than one term.
    pub fn into_laurent(self) -> Option<QScalar> {
        if self.num.is_zero() {
            return Some(QScalar::zero());
        }
        let mut it = self.den.iter();
        let (k, c) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        let inv = QScalar::from_rational(c.recip()).mul_r_power(-k);
        Some(&self.num * &inv)
    }
}

/// Exact row reduction of `[a | b]`; returns the unique solution when the
/// system is consistent with full column rank, `Inconsistent` or
/// `Underdetermined` otherwise.
pub(crate) enum ExactSolve {
    Unique(Vec<RatScalar>),
    Inconsistent,
    Underdetermined,
}

pub(crate) fn solve_exact(a: &[Vec<QScalar>], b: &[QScalar]) -> ExactSolve {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<RatScalar>> = a
        .iter()
        .map(|row| row.iter().map(|x| RatScalar::from_laurent(x.clone())).collect())
        .collect();
    let mut rhs: Vec<RatScalar> = b.iter().map(|x| RatScalar::from_laurent(x.clone())).collect();
    assert_eq!(rows, rhs.len());

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(found) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        rhs.swap(pivot_row, found);
        let inv = m[pivot_row][col].clone();
        for c in col..cols {
            m[pivot_row][c] = m[pivot_row][c].div(&inv);
        }
        rhs[pivot_row] = rhs[pivot_row].div(&inv);
        for r in 0..rows {
            if r == pivot_row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let delta = m[pivot_row][c].mul(&factor);
                m[r][c] = m[r][c].sub(&delta);
            }
            let delta = rhs[pivot_row].mul(&factor);
            rhs[r] = rhs[r].sub(&delta);
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // Residual rows must vanish.
    for r in pivot_row..rows {
        if !rhs[r].is_zero() {
            return ExactSolve::Inconsistent;
        }
    }
    if pivot_of_col.iter().any(|p| p.is_none()) {
        return ExactSolve::Underdetermined;
    }
    let mut x = vec![RatScalar::zero(); cols];
    for (col, p) in pivot_of_col.iter().enumerate() {
        x[col] = rhs[p.unwrap()].clone();
    }
    ExactSolve::Unique(x)
}
