//! Ordered monomial bases and coefficient-space vectors.
//!
//! The coefficient inner product used by the solvers and the admissibility
//! module is the plain Euclidean one on these ordered bases (declared proxy:
//! monomials are treated as orthonormal, which is not the operator-norm
//! geometry; every consumer states which of the two it certifies in).

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Family, NormalMonomial};

/// An ordered basis of normal monomials with O(1) index lookup.
#[derive(Debug, Clone)]
pub struct MonoBasis {
    monos: Vec<NormalMonomial>,
    index: HashMap<NormalMonomial, usize>,
}

impl MonoBasis {
    pub fn new(mut monos: Vec<NormalMonomial>) -> Self {
        monos.sort();
        monos.dedup();
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonoBasis { monos, index }
    }

    /// All normal monomials of the given U(1) grade with word length at most
    /// `max_len`; the unit is included only on request.
    pub fn of_grade(grade: i64, max_len: u32, include_unit: bool) -> Self {
        let mut monos = Vec::new();
        for m in enumerate_monomials(max_len) {
            if m.grade() != grade {
                continue;
            }
            if m.is_unit() && !include_unit {
                continue;
            }
            monos.push(m);
        }
        Self::new(monos)
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[NormalMonomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &NormalMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coefficient vector of an exact element at `r = sqrt(q)`; `None` if a
    /// monomial of the element lies outside the basis.
    pub fn vector_of(&self, x: &AlgebraElement, r: f64) -> Option<DVector<Complex64>> {
        let mut v = DVector::zeros(self.monos.len());
        for (m, c) in x.iter() {
            let i = self.index_of(m)?;
            v[i] = Complex64::new(c.eval_f64(r).ok()?.value, 0.0);
        }
        Some(v)
    }

    /// Terms `(coefficient, monomial)` of a coefficient vector, dropping
    /// exact zeros.
    pub fn terms_of_vector(&self, v: &DVector<Complex64>) -> Vec<(Complex64, NormalMonomial)> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, c)| (*c, self.monos[i]))
            .collect()
    }
}

/// Every normal monomial of word length at most `max_len`.
pub fn enumerate_monomials(max_len: u32) -> Vec<NormalMonomial> {
    let mut out = Vec::new();
    for i in 0..=max_len {
        for j in 0..=max_len - i {
            for k in 0..=max_len - i - j {
                out.push(NormalMonomial::new(Family::A, i, j, k));
                if i >= 1 {
                    out.push(NormalMonomial::new(Family::AStar, i, j, k));
                }
            }
        }
    }
    out
}

/// Float terms of an exact element at `r = sqrt(q)`.
pub fn float_terms(x: &AlgebraElement, r: f64) -> Vec<(Complex64, NormalMonomial)> {
    x.iter()
        .map(|(m, c)| (Complex64::new(c.eval_f64(r).map(|v| v.value).unwrap_or(f64::NAN), 0.0), *m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grade_zero_basis_counts() {
        // Grade-0 monomials of length 2L split into L+1 in the a-family and
        // L in the a*-family.
        for (max_len, want) in [(2u32, 3usize), (4, 3 + 5), (6, 3 + 5 + 7)] {
            let b = MonoBasis::of_grade(0, max_len, false);
            assert_eq!(b.len(), want, "max_len = {max_len}");
        }
        let with_unit = MonoBasis::of_grade(0, 2, true);
        assert_eq!(with_unit.len(), 4);
    }

    #[test]
    fn vector_round_trip() {
        let b = MonoBasis::of_grade(0, 4, true);
        let x = crate::algebra::parse_element("1 - q^2*c*cs").unwrap();
        let v = b.vector_of(&x, 0.5).unwrap();
        let terms = b.terms_of_vector(&v);
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn out_of_basis_vectorization_fails() {
        let b = MonoBasis::of_grade(0, 2, false);
        let x = crate::algebra::parse_element("a").unwrap();
        assert!(b.vector_of(&x, 0.5).is_none());
    }
}
