//! Linear combinations of normal monomials and the product normal-former.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::scalar::QScalar;

use super::monomial::{Family, Generator, NormalMonomial};

/// A finite linear combination of normal monomials with exact coefficients.
///
/// Canonical: zero coefficients are never stored, so `==` is equality in the
/// algebra. Values are immutable in spirit; every operation returns a fresh
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<NormalMonomial, QScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(NormalMonomial::unit())
    }

    pub fn scalar(c: QScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(NormalMonomial::unit(), c);
        out
    }

    pub fn monomial(m: NormalMonomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, QScalar::one());
        out
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(NormalMonomial::generator(g))
    }

    pub fn term(m: NormalMonomial, c: QScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the element is a scalar multiple of the unit (or zero).
    pub fn is_scalar(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_unit(),
            _ => false,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> QScalar {
        self.terms
            .get(&NormalMonomial::unit())
            .cloned()
            .unwrap_or_else(QScalar::zero)
    }

    pub fn coeff(&self, m: &NormalMonomial) -> QScalar {
        self.terms.get(m).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NormalMonomial, &QScalar)> {
        self.terms.iter()
    }

    pub fn max_word_length(&self) -> u32 {
        self.terms.keys().map(|m| m.word_length()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: NormalMonomial, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    /// Split off all terms of word length above `cap`. Returns the kept part
    /// and the dropped terms.
    pub fn truncate_word_length(&self, cap: u32) -> (Self, Vec<(NormalMonomial, QScalar)>) {
        let mut kept = Self::zero();
        let mut dropped = Vec::new();
        for (m, c) in &self.terms {
            if m.word_length() <= cap {
                kept.add_term(*m, c.clone());
            } else {
                dropped.push((*m, c.clone()));
            }
        }
        (kept, dropped)
    }

    /// Star: conjugate-linear anti-multiplicative involution.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (sm, sc) = star_monomial(m);
            out.add_term(sm, &c.conj() * &sc);
        }
        out
    }

    /// Antipode: the linear anti-homomorphism with `S(a) = a*`, `S(a*) = a`,
    /// `S(c) = -q c`, `S(c*) = -q^(-1) c*`.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (sm, sc) = antipode_monomial(m);
            out.add_term(sm, c * &sc);
        }
        out
    }

    /// Split into U(1)-homogeneous components, keyed by grade.
    pub fn grade_decompose(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.grade()).or_default().add_term(*m, c.clone());
        }
        out
    }

    /// Split into homogeneous components of the left-action grading.
    pub fn m_grade_decompose(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.m_grade()).or_default().add_term(*m, c.clone());
        }
        out
    }

    /// Grade when homogeneous; `None` for zero or mixed elements.
    pub fn homogeneous_grade(&self) -> Option<i64> {
        let mut grades = self.terms.keys().map(|m| m.grade());
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }
}

fn star_monomial(m: &NormalMonomial) -> (NormalMonomial, QScalar) {
    // Reversing the word and starring each letter leaves the c-powers swapped
    // and the block starred; the q-power comes from commuting the block back
    // to the front.
    let i = m.block_exp() as i64;
    let jk = (m.c_exp() + m.cstar_exp()) as i64;
    match m.family() {
        Family::A => (
            NormalMonomial::new(Family::AStar, m.block_exp(), m.cstar_exp(), m.c_exp()),
            QScalar::q_power(i * jk),
        ),
        Family::AStar => (
            NormalMonomial::new(Family::A, m.block_exp(), m.cstar_exp(), m.c_exp()),
            QScalar::q_power(-i * jk),
        ),
    }
}

fn antipode_monomial(m: &NormalMonomial) -> (NormalMonomial, QScalar) {
    let i = m.block_exp() as i64;
    let j = m.c_exp() as i64;
    let k = m.cstar_exp() as i64;
    let sign = if (j + k) % 2 == 0 { QScalar::one() } else { -QScalar::one() };
    let scale = &sign * &QScalar::q_power(j - k);
    match m.family() {
        Family::A => (
            NormalMonomial::new(Family::AStar, m.block_exp(), m.c_exp(), m.cstar_exp()),
            &scale * &QScalar::q_power(i * (j + k)),
        ),
        Family::AStar => (
            NormalMonomial::new(Family::A, m.block_exp(), m.c_exp(), m.cstar_exp()),
            &scale * &QScalar::q_power(-i * (j + k)),
        ),
    }
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Normal form of `a^p (a*)^s`, resp. `(a*)^p a^s`, as elements. Memoized;
/// these are the only places the length-reducing relations fire.
fn mixed_block(p: u32, s: u32, a_first: bool) -> AlgebraElement {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, bool), AlgebraElement>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(p, s, a_first)) {
        return hit.clone();
    }
    let result = if p == 0 || s == 0 {
        let fam = if a_first == (p > 0) { Family::A } else { Family::AStar };
        AlgebraElement::monomial(NormalMonomial::new(fam, p + s, 0, 0))
    } else {
        // a   a* = 1 - q^2 c c*      and      a* a = 1 - c c*.
        // Peeling one pair: the surviving c c* commutes to the right of the
        // remaining inner block, picking up q^(+-2(s-1)).
        let inner = mixed_block(p - 1, s - 1, a_first);
        let (pair_coeff, comm) = if a_first {
            (QScalar::q_power(2), QScalar::q_power(2 * (s as i64 - 1)))
        } else {
            (QScalar::one(), QScalar::q_power(-2 * (s as i64 - 1)))
        };
        let mut out = inner.clone();
        let shift = -&(&pair_coeff * &comm);
        for (m, c) in inner.iter() {
            out.add_term(m.append_c_cstar(1, 1), c * &shift);
        }
        out
    };
    cache
        .lock()
        .unwrap()
        .entry((p, s, a_first))
        .or_insert(result)
        .clone()
}

/// Normal form of the product of two normal monomials.
fn mul_monomials(x: &NormalMonomial, y: &NormalMonomial) -> AlgebraElement {
    // Word: [block_x] c^jx cs^kx [block_y] c^jy cs^ky.
    // Step 1: commute the middle c/cs powers across block_y.
    let mid = (x.c_exp() + x.cstar_exp()) as i64;
    let iy = y.block_exp() as i64;
    let comm = match y.family() {
        Family::A => QScalar::q_power(-mid * iy),
        Family::AStar => QScalar::q_power(mid * iy),
    };
    // Step 2: combine the blocks.
    let blocks = if x.block_exp() == 0 || y.block_exp() == 0 || x.family() == y.family() {
        let fam = if x.block_exp() > 0 { x.family() } else { y.family() };
        AlgebraElement::monomial(NormalMonomial::new(fam, x.block_exp() + y.block_exp(), 0, 0))
    } else {
        mixed_block(x.block_exp(), y.block_exp(), x.family() == Family::A)
    };
    // Step 3: append the accumulated c/cs powers on the right.
    let dj = x.c_exp() + y.c_exp();
    let dk = x.cstar_exp() + y.cstar_exp();
    let mut out = AlgebraElement::zero();
    for (m, c) in blocks.iter() {
        out.add_term(m.append_c_cstar(dj, dk), c * &comm);
    }
    out
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (mx, cx) in &self.terms {
            for (my, cy) in &rhs.terms {
                let c = cx * cy;
                for (m, k) in mul_monomials(mx, my).terms {
                    out.add_term(m, &k * &c);
                }
            }
        }
        out
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                (&self).$method(rhs)
            }
        }
        impl $assign_trait for AlgebraElement {
            fn $assign_method(&mut self, rhs: AlgebraElement) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::grammar::fmt_element(self, f)
    }
}
