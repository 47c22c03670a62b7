//! The holomorphic differential, its anti-holomorphic partner, and the
//! quantum integral as an exact graded linear solve.
//!
//! Conventions: `dbar(x) = q^(-1/2) (F |> x)` lowers the grade by 2 and
//! `del(x) = q^(1/2) (E |> x)` raises it by 2. (0,1)-forms are identified
//! with their grade `n-2` coefficients; the frame form is dropped, which
//! scales norm constants but none of the exact identities. The integral is
//! pinned by `integral(dbar(x)) = x - psi_infty(x)` and computed by exact
//! inversion of the word-length-preserving blocks of the `dbar` matrix.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::algebra::{act_left, AlgebraElement, NormalMonomial, UqGenerator, UqWord};
use crate::basis::MonoBasis;
use crate::podles::{psi_infty, LineBundleElement, PodlesElement};
use crate::ratfunc::{solve_exact, ExactSolve, RatScalar};
use crate::rep::{self, NormEstimate, TruncationParams};
use crate::scalar::QScalar;

#[derive(Debug, Error, PartialEq)]
pub enum CalculusError {
    #[error("form has grade {found}, expected {expected}")]
    NotHomogeneous { expected: i64, found: i64 },
    #[error("no polynomial preimage under dbar at word-length cap {cap} (escalated {attempts} times)")]
    NoPreimage { cap: u32, attempts: u32 },
}

/// The coefficient of a (0,1)-form: a homogeneous element of grade two less
/// than its source.
#[derive(Debug, Clone, PartialEq)]
pub struct FormElement {
    inner: LineBundleElement,
}

impl FormElement {
    pub fn new(inner: LineBundleElement) -> Self {
        FormElement { inner }
    }

    pub fn zero(grade: i64) -> Self {
        FormElement { inner: LineBundleElement::zero(grade) }
    }

    pub fn element(&self) -> &AlgebraElement {
        self.inner.element()
    }

    pub fn grade(&self) -> i64 {
        self.inner.grade()
    }

    pub fn source_grade(&self) -> i64 {
        self.inner.grade() + 2
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        FormElement { inner: self.inner.scale(c) }
    }
}

impl std::ops::Add for &FormElement {
    type Output = FormElement;
    fn add(self, rhs: &FormElement) -> FormElement {
        FormElement { inner: &self.inner + &rhs.inner }
    }
}

impl std::ops::Sub for &FormElement {
    type Output = FormElement;
    fn sub(self, rhs: &FormElement) -> FormElement {
        FormElement { inner: &self.inner - &rhs.inner }
    }
}

/// The holomorphic differential on a grade-`n` element.
pub fn dbar(x: &LineBundleElement) -> FormElement {
    let acted = act_left(&UqWord::single(UqGenerator::F), x.element());
    let element = acted.scale(&QScalar::r_power(-1));
    FormElement {
        inner: LineBundleElement::new(element, x.grade() - 2)
            .expect("F action is homogeneous of degree -2"),
    }
}

/// `dbar` on a sphere element (grade 0), yielding a grade -2 form.
pub fn dbar_sphere(x: &PodlesElement) -> FormElement {
    dbar(&x.as_line_bundle())
}

/// The anti-holomorphic differential on a grade-`n` element.
pub fn del(x: &LineBundleElement) -> LineBundleElement {
    let acted = act_left(&UqWord::single(UqGenerator::E), x.element());
    LineBundleElement::new(acted.scale(&QScalar::r_power(1)), x.grade() + 2)
        .expect("E action is homogeneous of degree +2")
}

// ---------------------------------------------------------------------------
// The quantum integral
// ---------------------------------------------------------------------------

/// The word-length-preserving block of `dbar` at length `len`: sources are
/// the grade-0 monomials of that length, targets the grade -2 ones. The
/// blocks are square and have been nonsingular everywhere we have looked;
/// the inverse is cached.
struct DbarBlock {
    sources: MonoBasis,
    targets: MonoBasis,
    inverse: Option<Vec<Vec<RatScalar>>>,
}

fn dbar_block(len: u32) -> Arc<DbarBlock> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<DbarBlock>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&len) {
        return hit.clone();
    }
    let block = Arc::new(build_dbar_block(len));
    cache.lock().unwrap().entry(len).or_insert(block).clone()
}

fn build_dbar_block(len: u32) -> DbarBlock {
    let sources = MonoBasis::new(
        MonoBasis::of_grade(0, len, false)
            .monomials()
            .iter()
            .copied()
            .filter(|m| m.word_length() == len)
            .collect(),
    );
    let targets = MonoBasis::new(
        MonoBasis::of_grade(-2, len, true)
            .monomials()
            .iter()
            .copied()
            .filter(|m| m.word_length() == len)
            .collect(),
    );
    let n = sources.len();
    debug_assert_eq!(n, targets.len(), "length-preserving blocks are square");
    // Columns: image of each source, projected to the same word length.
    let mut matrix = vec![vec![QScalar::zero(); n]; targets.len()];
    for (col, m) in sources.monomials().iter().enumerate() {
        let image = dbar(&LineBundleElement::new(AlgebraElement::monomial(*m), 0).unwrap());
        for (im, c) in image.element().iter() {
            if im.word_length() == len {
                let row = targets.index_of(im).expect("image monomial has grade -2");
                matrix[row][col] = c.clone();
            }
        }
    }
    // Invert by solving against the identity.
    let inverse = invert(&matrix);
    DbarBlock { sources, targets, inverse }
}

fn invert(matrix: &[Vec<QScalar>]) -> Option<Vec<Vec<RatScalar>>> {
    let n = matrix.len();
    let mut cols: Vec<Vec<RatScalar>> = Vec::with_capacity(n);
    for col in 0..n {
        let mut e = vec![QScalar::zero(); n];
        e[col] = QScalar::one();
        match solve_exact(matrix, &e) {
            ExactSolve::Unique(x) => cols.push(x),
            _ => return None,
        }
    }
    // Transpose to row-major inverse.
    let mut inv = vec![vec![RatScalar::zero(); n]; n];
    for (c, colv) in cols.iter().enumerate() {
        for (r, x) in colv.iter().enumerate() {
            inv[r][c] = x.clone();
        }
    }
    Some(inv)
}

/// The unique `x` with `dbar(x) = omega` and `psi_infty(x) = 0`, when
/// `omega` is a grade -2 polynomial in the image of `dbar`.
///
/// Solved exactly, top word length first: the length-preserving block is
/// inverted, the full image of the recovered slice is subtracted, and the
/// sweep descends by 2. The cap escalates by +2 at most 3 times before a
/// `NoPreimage` error is surfaced.
pub fn integral(omega: &FormElement, degree_cap: u32) -> Result<PodlesElement, CalculusError> {
    if omega.grade() != -2 {
        return Err(CalculusError::NotHomogeneous { expected: -2, found: omega.grade() });
    }
    if omega.is_zero() {
        return Ok(PodlesElement::zero());
    }
    let needed = omega.element().max_word_length();
    let mut attempts = 0u32;
    let mut cap = degree_cap.max(needed);
    loop {
        match try_integral(omega, cap) {
            Some(x) => return Ok(x),
            None if attempts < 3 => {
                attempts += 1;
                cap += 2;
            }
            None => return Err(CalculusError::NoPreimage { cap, attempts }),
        }
    }
}

fn try_integral(omega: &FormElement, cap: u32) -> Option<PodlesElement> {
    let mut remaining = omega.element().clone();
    let mut solution = AlgebraElement::zero();
    let mut len = cap - cap % 2;
    while len >= 2 {
        let part: Vec<(NormalMonomial, QScalar)> = remaining
            .iter()
            .filter(|(m, _)| m.word_length() == len)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        if !part.is_empty() {
            let block = dbar_block(len);
            let inverse = block.inverse.as_ref()?;
            let n = block.targets.len();
            let mut rhs = vec![RatScalar::zero(); n];
            for (m, c) in &part {
                rhs[block.targets.index_of(m)?] = RatScalar::from_laurent(c.clone());
            }
            let mut slice = AlgebraElement::zero();
            for (row, source) in block.sources.monomials().iter().enumerate() {
                let mut acc = RatScalar::zero();
                for (col, b) in rhs.iter().enumerate() {
                    if !b.is_zero() {
                        acc = acc.add(&inverse[row][col].mul(b));
                    }
                }
                // A non-Laurent coefficient would mean the preimage is not a
                // polynomial; surface it as a missing preimage.
                slice.add_term(*source, acc.into_laurent()?);
            }
            if !slice.is_zero() {
                let image = dbar(&LineBundleElement::new(slice.clone(), 0).ok()?);
                remaining = &remaining - image.element();
                solution += slice;
            }
        }
        debug_assert!(
            remaining.iter().all(|(m, _)| m.word_length() < len),
            "length-{len} residue must be cleared"
        );
        len -= 2;
    }
    if remaining.is_zero() {
        Some(PodlesElement::new(solution).expect("integral output has grade 0"))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Graph norm
// ---------------------------------------------------------------------------

/// Certified bounds for the graph norm `|x| + |dbar x|` of a sphere element.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GraphNormed {
    pub norm_s: NormEstimate,
    pub norm_dbar: NormEstimate,
    pub norm_gr: NormEstimate,
}

pub fn graph_norm(x: &PodlesElement, q: f64, trunc: &TruncationParams) -> GraphNormed {
    let norm_s = rep::op_norm(x.element(), q, trunc);
    let form = dbar_sphere(x);
    let norm_dbar = rep::graded_op_norm(&form, q, trunc);
    let norm_gr = norm_s.add_intervals(&norm_dbar);
    GraphNormed { norm_s, norm_dbar, norm_gr }
}

/// Sound upper bound for the graph norm of an exact element, used for
/// iteration deltas and truncation debt.
pub fn graph_norm_upper(x: &PodlesElement, q: f64, trunc: &TruncationParams) -> f64 {
    graph_norm(x, q, trunc).norm_gr.upper
}

/// Convenience: `integral` of `dbar` with the projection identity available
/// for tests.
pub fn project_via_integral(
    x: &PodlesElement,
    degree_cap: u32,
) -> Result<PodlesElement, CalculusError> {
    let _ = psi_infty(x);
    integral(&dbar_sphere(x), degree_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_element;

    fn sphere(s: &str) -> PodlesElement {
        PodlesElement::new(parse_element(s).unwrap()).unwrap()
    }

    #[test]
    fn dbar_fixtures() {
        // dbar(1) = 0.
        assert!(dbar_sphere(&PodlesElement::one()).is_zero());
        // dbar(B0) = -q^(-2) a c.
        let got = dbar_sphere(&PodlesElement::b0());
        let want = parse_element("-q^(-2)*a*c").unwrap();
        assert_eq!(got.element(), &want);
        assert_eq!(got.grade(), -2);
        // dbar(Bm) = -q^(-1) a^2.
        let got = dbar_sphere(&PodlesElement::b_minus());
        assert_eq!(got.element(), &parse_element("-q^(-1)*a^2").unwrap());
    }

    #[test]
    fn del_fixture_and_grades() {
        assert!(del(&PodlesElement::one().as_line_bundle()).is_zero());
        // del(B0) = q * as * cs (from E |> (c cs) = q^(1/2) as cs).
        let got = del(&PodlesElement::b0().as_line_bundle());
        assert_eq!(got.element(), &parse_element("q*as*cs").unwrap());
        assert_eq!(got.grade(), 2);
    }

    #[test]
    fn dbar_and_del_shift_grades_by_two() {
        let x = LineBundleElement::new(parse_element("a*c*cs").unwrap(), -1).unwrap();
        assert_eq!(dbar(&x).grade(), -3);
        assert_eq!(del(&x).grade(), 1);
    }

    #[test]
    fn star_intertwines_differentials_up_to_frame_factor() {
        // With the frame forms dropped, (del f)^* and dbar(f^*) agree up to
        // the factor -q^(-2) coming from the frame star.
        for s in ["B0", "Bp", "B0*Bm - 2*Bp", "1 + q*B0^2"] {
            let f = sphere(s);
            let lhs = dbar_sphere(&f.star());
            let rhs = del(&f.as_line_bundle())
                .element()
                .star()
                .scale(&-QScalar::q_power(-2));
            assert_eq!(lhs.element(), &rhs, "f = {s}");
        }
    }

    #[test]
    fn leibniz_on_sphere_elements() {
        let xs = ["B0", "Bp", "Bm*B0", "1 - B0"];
        for sx in xs {
            for sy in xs {
                let x = sphere(sx);
                let y = sphere(sy);
                let lhs = dbar_sphere(&(&x * &y));
                let rhs = &FormElement::new(LineBundleElement::new(
                    dbar_sphere(&x).element() * y.element(),
                    -2,
                ).unwrap())
                    + &FormElement::new(LineBundleElement::new(
                        x.element() * dbar_sphere(&y).element(),
                        -2,
                    ).unwrap());
                assert_eq!(lhs, rhs, "x = {sx}, y = {sy}");
            }
        }
    }

    #[test]
    fn integral_fixtures() {
        // integral(0) = 0.
        assert!(integral(&FormElement::zero(-2), 6).unwrap().is_zero());
        // integral(dbar(B0)) = B0 (psi of B0 vanishes).
        let got = integral(&dbar_sphere(&PodlesElement::b0()), 6).unwrap();
        assert_eq!(got, PodlesElement::b0());
        // And on the explicit fixture form.
        let omega = FormElement::new(
            LineBundleElement::new(parse_element("-q^(-2)*a*c").unwrap(), -2).unwrap(),
        );
        assert_eq!(integral(&omega, 6).unwrap(), PodlesElement::b0());
    }

    #[test]
    fn integral_inverts_dbar_modulo_constants() {
        let samples = ["B0", "Bp*Bm", "2 + B0 - q*Bp", "B0^2 - Bm", "(1-B0)*(1-q^2*B0)"];
        for s in samples {
            let x = sphere(s);
            let got = integral(&dbar_sphere(&x), 8).unwrap();
            assert_eq!(got, crate::podles::project_h(&x), "x = {s}");
            // Applying dbar again reproduces the form exactly.
            assert_eq!(dbar_sphere(&got), dbar_sphere(&x));
        }
    }

    #[test]
    fn integral_rejects_wrong_grade() {
        let not_form = FormElement::new(
            LineBundleElement::new(parse_element("B0").unwrap(), 0).unwrap(),
        );
        assert!(matches!(
            integral(&not_form, 4),
            Err(CalculusError::NotHomogeneous { expected: -2, found: 0 })
        ));
    }

    #[test]
    fn integral_reports_missing_preimage_when_capped() {
        // A length-6 target needs length-6 sources; cap 2 escalates to 8 and
        // succeeds, while an impossible request is surfaced as NoPreimage.
        let x = sphere("B0^3");
        let omega = dbar_sphere(&x);
        assert_eq!(integral(&omega, 2).unwrap(), crate::podles::project_h(&x));
        // Escalation is capped: starting far below and asking for a form
        // whose preimage requires longer words than cap+6 cannot happen for
        // polynomial images, so exercise the error through grade instead.
        let bad = FormElement::new(LineBundleElement::new(parse_element("a").unwrap(), -1).unwrap());
        assert!(matches!(
            integral(&bad, 4),
            Err(CalculusError::NotHomogeneous { expected: -2, found: -1 })
        ));
    }

    #[test]
    fn dbar_blocks_are_invertible_through_length_24() {
        for len in (2..=24u32).step_by(2) {
            let block = super::dbar_block(len);
            assert_eq!(block.sources.len(), block.targets.len(), "len = {len}");
            assert!(block.inverse.is_some(), "singular block at len = {len}");
        }
    }

    #[test]
    fn dbar_kernel_on_polynomials_is_scalars() {
        // Exact check per word length: the length-preserving blocks are
        // invertible (previous test), so any grade-0 polynomial with
        // vanishing dbar has all non-constant slices zero.
        for cap in [2u32, 4, 6, 8] {
            let basis = MonoBasis::of_grade(0, cap, false);
            for m in basis.monomials() {
                let img = dbar(&LineBundleElement::new(AlgebraElement::monomial(*m), 0).unwrap());
                assert!(!img.is_zero(), "dbar kills non-scalar monomial {m}");
            }
        }
    }

    #[test]
    fn integral_composition_is_idempotent() {
        let x = sphere("B0*Bp - 3*Bm");
        let omega = dbar_sphere(&x);
        let once = integral(&omega, 8).unwrap();
        let twice = integral(&dbar_sphere(&once), 8).unwrap();
        assert_eq!(once, twice);
    }
}
