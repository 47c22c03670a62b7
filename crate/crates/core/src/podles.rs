//! The quantum-sphere subalgebra sitting inside the coordinate algebra:
//! grade-zero elements, the line-bundle components, and the character that
//! kills the compact part.
//!
//! The character `psi_infty` is computed as constant-term extraction: every
//! non-constant grade-zero normal monomial contains `c` or `cs`, hence acts
//! as a compact operator in the faithful shift representation, and the
//! quotient by the compacts reads off the unit coefficient. The acceptance
//! suite cross-checks this against the representation's diagonal tail.

use thiserror::Error;

use crate::algebra::{AlgebraElement, Generator};
use crate::scalar::QScalar;

#[derive(Debug, Error, PartialEq)]
pub enum PodlesError {
    #[error("element is not homogeneous of grade {expected}; found grades {found:?}")]
    WrongGrade { expected: i64, found: Vec<i64> },
}

/// A homogeneous element of the grade-`n` line-bundle component.
///
/// The grade is validated once at construction; zero belongs to every grade.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBundleElement {
    element: AlgebraElement,
    grade: i64,
}

impl LineBundleElement {
    pub fn new(element: AlgebraElement, grade: i64) -> Result<Self, PodlesError> {
        let grades: Vec<i64> = element.grade_decompose().keys().copied().collect();
        if grades.is_empty() || grades == [grade] {
            Ok(LineBundleElement { element, grade })
        } else {
            Err(PodlesError::WrongGrade { expected: grade, found: grades })
        }
    }

    pub fn zero(grade: i64) -> Self {
        LineBundleElement { element: AlgebraElement::zero(), grade }
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    pub fn into_element(self) -> AlgebraElement {
        self.element
    }

    pub fn grade(&self) -> i64 {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        LineBundleElement { element: self.element.scale(c), grade: self.grade }
    }
}

impl std::ops::Add for &LineBundleElement {
    type Output = LineBundleElement;
    fn add(self, rhs: &LineBundleElement) -> LineBundleElement {
        assert_eq!(self.grade, rhs.grade, "grade mismatch");
        LineBundleElement { element: &self.element + &rhs.element, grade: self.grade }
    }
}

impl std::ops::Sub for &LineBundleElement {
    type Output = LineBundleElement;
    fn sub(self, rhs: &LineBundleElement) -> LineBundleElement {
        assert_eq!(self.grade, rhs.grade, "grade mismatch");
        LineBundleElement { element: &self.element - &rhs.element, grade: self.grade }
    }
}

impl std::ops::Mul for &LineBundleElement {
    type Output = LineBundleElement;
    fn mul(self, rhs: &LineBundleElement) -> LineBundleElement {
        LineBundleElement {
            element: &self.element * &rhs.element,
            grade: self.grade + rhs.grade,
        }
    }
}

/// A polynomial function on the quantum sphere: a grade-zero element.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PodlesElement {
    element: AlgebraElement,
}

impl PodlesElement {
    pub fn new(element: AlgebraElement) -> Result<Self, PodlesError> {
        let grades: Vec<i64> = element.grade_decompose().keys().copied().collect();
        if grades.is_empty() || grades == [0] {
            Ok(PodlesElement { element })
        } else {
            Err(PodlesError::WrongGrade { expected: 0, found: grades })
        }
    }

    pub fn zero() -> Self {
        PodlesElement { element: AlgebraElement::zero() }
    }

    pub fn one() -> Self {
        PodlesElement { element: AlgebraElement::one() }
    }

    pub fn scalar(c: QScalar) -> Self {
        PodlesElement { element: AlgebraElement::scalar(c) }
    }

    /// The generator `B0 = c cs`.
    pub fn b0() -> Self {
        PodlesElement {
            element: &AlgebraElement::generator(Generator::C)
                * &AlgebraElement::generator(Generator::CStar),
        }
    }

    /// The generator `Bm = a cs`.
    pub fn b_minus() -> Self {
        PodlesElement {
            element: &AlgebraElement::generator(Generator::A)
                * &AlgebraElement::generator(Generator::CStar),
        }
    }

    /// The generator `Bp = c as`.
    pub fn b_plus() -> Self {
        PodlesElement {
            element: &AlgebraElement::generator(Generator::C)
                * &AlgebraElement::generator(Generator::AStar),
        }
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    pub fn into_element(self) -> AlgebraElement {
        self.element
    }

    pub fn as_line_bundle(&self) -> LineBundleElement {
        LineBundleElement { element: self.element.clone(), grade: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.element.is_scalar()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        PodlesElement { element: self.element.scale(c) }
    }

    pub fn star(&self) -> Self {
        // Grade-zero elements are closed under star.
        PodlesElement { element: self.element.star() }
    }

    pub fn max_word_length(&self) -> u32 {
        self.element.max_word_length()
    }
}

impl std::ops::Add for &PodlesElement {
    type Output = PodlesElement;
    fn add(self, rhs: &PodlesElement) -> PodlesElement {
        PodlesElement { element: &self.element + &rhs.element }
    }
}

impl std::ops::Sub for &PodlesElement {
    type Output = PodlesElement;
    fn sub(self, rhs: &PodlesElement) -> PodlesElement {
        PodlesElement { element: &self.element - &rhs.element }
    }
}

impl std::ops::Mul for &PodlesElement {
    type Output = PodlesElement;
    fn mul(self, rhs: &PodlesElement) -> PodlesElement {
        PodlesElement { element: &self.element * &rhs.element }
    }
}

impl std::ops::Neg for &PodlesElement {
    type Output = PodlesElement;
    fn neg(self) -> PodlesElement {
        PodlesElement { element: -&self.element }
    }
}

impl std::fmt::Display for PodlesElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.element.fmt(f)
    }
}

/// A formal polynomial in the sphere generators, for building inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum BPolynomial {
    Zero,
    One,
    B0,
    BPlus,
    BMinus,
    Scale(QScalar, Box<BPolynomial>),
    Sum(Box<BPolynomial>, Box<BPolynomial>),
    Product(Box<BPolynomial>, Box<BPolynomial>),
}

/// Substitutes `B0 = c cs`, `Bm = a cs`, `Bp = c as` and normalizes.
pub fn from_b_polynomial(p: &BPolynomial) -> PodlesElement {
    match p {
        BPolynomial::Zero => PodlesElement::zero(),
        BPolynomial::One => PodlesElement::one(),
        BPolynomial::B0 => PodlesElement::b0(),
        BPolynomial::BPlus => PodlesElement::b_plus(),
        BPolynomial::BMinus => PodlesElement::b_minus(),
        BPolynomial::Scale(c, inner) => from_b_polynomial(inner).scale(c),
        BPolynomial::Sum(x, y) => &from_b_polynomial(x) + &from_b_polynomial(y),
        BPolynomial::Product(x, y) => &from_b_polynomial(x) * &from_b_polynomial(y),
    }
}

/// The character of the sphere algebra that kills the compact part,
/// evaluated on polynomials as the coefficient of the unit monomial.
pub fn psi_infty(x: &PodlesElement) -> QScalar {
    x.element.constant_term()
}

/// True iff the element is a scalar multiple of the unit (or zero).
pub fn is_scalar(x: &AlgebraElement) -> bool {
    x.is_scalar()
}

/// Projection onto the kernel of `psi_infty`: subtracts the constant term.
pub fn project_h(x: &PodlesElement) -> PodlesElement {
    let c = psi_infty(x);
    x - &PodlesElement::scalar(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b0() -> PodlesElement {
        PodlesElement::b0()
    }

    #[test]
    fn b_substitution_fixtures() {
        assert_eq!(
            from_b_polynomial(&BPolynomial::B0).element(),
            &crate::algebra::parse_element("c*cs").unwrap()
        );
        assert_eq!(from_b_polynomial(&BPolynomial::One), PodlesElement::one());
    }

    #[test]
    fn displayed_sphere_relations() {
        let b0 = b0();
        let bp = PodlesElement::b_plus();
        let bm = PodlesElement::b_minus();
        let one = PodlesElement::one();
        let q2 = QScalar::q_power(2);

        // Bm B0 = q^2 B0 Bm
        assert_eq!(&bm * &b0, (&b0 * &bm).scale(&q2));
        // Bp Bm = B0 (1 - B0)
        assert_eq!(&bp * &bm, &b0 * &(&one - &b0));
        // Bm Bp = q^2 B0 (1 - q^2 B0)
        assert_eq!(&bm * &bp, (&b0 * &(&one - &b0.scale(&q2))).scale(&q2));
    }

    #[test]
    fn psi_infty_fixtures() {
        assert_eq!(psi_infty(&PodlesElement::one()), QScalar::one());
        assert!(psi_infty(&b0()).is_zero());
        // 3 + Bp Bm has constant term 3: Bp Bm = B0 - B0^2 has none.
        let x = &(&PodlesElement::b_plus() * &PodlesElement::b_minus())
            + &PodlesElement::scalar(QScalar::from_int(3));
        assert_eq!(psi_infty(&x), QScalar::from_int(3));
    }

    #[test]
    fn psi_infty_is_multiplicative_on_samples() {
        let xs = [
            PodlesElement::one(),
            b0(),
            &PodlesElement::b_plus() + &PodlesElement::scalar(QScalar::rational(1, 2)),
            &b0() * &PodlesElement::b_minus(),
        ];
        for x in &xs {
            for y in &xs {
                assert_eq!(psi_infty(&(x * y)), &psi_infty(x) * &psi_infty(y));
            }
        }
    }

    #[test]
    fn project_h_examples() {
        assert!(project_h(&PodlesElement::one()).is_zero());
        let x = &b0() + &PodlesElement::scalar(QScalar::from_int(2));
        assert_eq!(project_h(&x), b0());
        assert_eq!(project_h(&PodlesElement::b_minus()), PodlesElement::b_minus());
        // Idempotent, and psi of the projection vanishes.
        assert_eq!(project_h(&project_h(&x)), project_h(&x));
        assert!(psi_infty(&project_h(&x)).is_zero());
    }

    #[test]
    fn is_scalar_examples() {
        assert!(is_scalar(&AlgebraElement::scalar(QScalar::from_int(5))));
        assert!(!is_scalar(b0().element()));
        assert!(is_scalar(&(b0().element() - b0().element())));
    }

    #[test]
    fn grade_validation() {
        let a = AlgebraElement::generator(crate::algebra::Generator::A);
        assert!(PodlesElement::new(a.clone()).is_err());
        assert!(LineBundleElement::new(a.clone(), -1).is_ok());
        assert!(LineBundleElement::new(a, 0).is_err());
        assert!(PodlesElement::new(AlgebraElement::zero()).is_ok());
    }
}
