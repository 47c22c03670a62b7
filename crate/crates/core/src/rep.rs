//! Truncated weighted-shift representations and certified operator norms.
//!
//! Generators act on the Fock basis `e_0..e_N` as
//! `a e_n = sqrt(1-q^(2n)) e_(n-1)`, `a* e_n = sqrt(1-q^(2n+2)) e_(n+1)`,
//! `c e_n = exp(i theta) q^n e_n`, `c* e_n = exp(-i theta) q^n e_n`;
//! the C*-norm of a polynomial is the supremum over the phase `theta`.
//!
//! Norm intervals are certified as follows. Lower bounds come from largest
//! singular values of truncations (compressions never exceed the norm, and
//! grow with the cutoff). Upper bounds take the smaller of two sound bounds:
//! the triangle inequality over monomials, whose individual norms are exact
//! suprema of explicit weight sequences, and a Schur row-sum bound on the
//! exactly computed `x* x`, whose entries are again explicit weights. Both
//! are phase-uniform, so no grid correction is needed on the upper side.
//!
//! For homogeneous grade -2 coefficients of (0,1)-forms the same interval is
//! reported: the square of that operator norm is the sphere-algebra norm of
//! `w* w`, computed in the same faithful shift model, so the restriction to
//! the graded subspaces does not change it. Bounds are nevertheless kept as
//! intervals and every theorem check uses the sound side.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Family, NormalMonomial};
use crate::calculus::FormElement;

/// Truncation and sampling parameters for all numeric estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncationParams {
    /// Fock cutoff: basis `e_0..e_N`.
    pub n: usize,
    /// Number of equispaced phase samples.
    pub theta_grid: usize,
    /// Symbolic word-length cap used by solvers.
    pub degree_cap: u32,
    /// Numeric tolerance for evidence thresholds.
    pub tol: f64,
}

impl TruncationParams {
    pub fn new(n: usize, theta_grid: usize, degree_cap: u32, tol: f64) -> Self {
        assert!(n >= 8, "Fock cutoff below 8 is meaningless here");
        assert!(theta_grid >= 1, "need at least one phase sample");
        assert!(tol > 0.0, "tolerance must be positive");
        TruncationParams { n, theta_grid, degree_cap, tol }
    }

    fn thetas(&self) -> Vec<f64> {
        (0..self.theta_grid)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / self.theta_grid as f64)
            .collect()
    }
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams { n: 64, theta_grid: 16, degree_cap: 8, tol: 1e-9 }
    }
}

/// Upper bound for the operator norm of the quantum integral:
/// `2 sqrt(1-q^2) / (1-q)^2`. Every theorem threshold uses this in place of
/// the unknown exact norm, which keeps all checks conservative.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuantumIntegralBound {
    pub m_bound: f64,
}

impl QuantumIntegralBound {
    pub fn new(q: f64) -> Self {
        assert!(q > 0.0 && q < 1.0);
        QuantumIntegralBound { m_bound: 2.0 * (1.0 - q * q).sqrt() / ((1.0 - q) * (1.0 - q)) }
    }
}

/// How a bound was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    /// Truncated SVD below, min(triangle, Schur) above.
    Certified,
    /// Same arithmetic on a homogeneous form coefficient.
    GradedCompression,
    /// Smallest singular value of a truncation: evidence, not proof.
    MarginEvidence,
    /// Interval arithmetic on other intervals.
    Derived,
}

/// Certified lower/upper bounds for an operator norm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub grid: usize,
    pub method: NormMethod,
}

/// Absolute slack added around floating-point linear algebra.
const FLOAT_SLOP: f64 = 1e-12;

impl NormEstimate {
    pub fn new(lower: f64, upper: f64, n: usize, grid: usize, method: NormMethod) -> Self {
        let lower = lower.max(0.0);
        let upper = upper.max(lower);
        NormEstimate { lower, upper, n, grid, method }
    }

    pub fn exact_zero(trunc: &TruncationParams) -> Self {
        NormEstimate::new(0.0, 0.0, trunc.n, trunc.theta_grid, NormMethod::Certified)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Interval sum, for graph norms.
    pub fn add_intervals(&self, other: &NormEstimate) -> NormEstimate {
        NormEstimate::new(
            self.lower + other.lower,
            self.upper + other.upper,
            self.n.min(other.n),
            self.grid.min(other.grid),
            NormMethod::Derived,
        )
    }

    /// Scaling by `|lambda|`; operator norms are absolutely homogeneous.
    pub fn scale_abs(&self, t: f64) -> NormEstimate {
        let t = t.abs();
        NormEstimate::new(self.lower * t, self.upper * t, self.n, self.grid, NormMethod::Derived)
    }
}

/// A truncated representation matrix with its band structure.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub mat: DMatrix<Complex64>,
    pub theta: f64,
    pub band: usize,
}

impl OperatorMatrix {
    /// CSV rendering for debugging: one cell per entry, `re(+/-)im i`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for r in 0..self.mat.nrows() {
            let row: Vec<String> = (0..self.mat.ncols())
                .map(|c| {
                    let z = self.mat[(r, c)];
                    format!("{}{}{}i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Row index and weight of the single nonzero entry monomial `m` produces in
/// column `col` of the shift model (phase excluded).
fn monomial_entry(m: &NormalMonomial, q: f64, col: usize) -> Option<(usize, f64)> {
    let i = m.block_exp() as usize;
    let jk = (m.c_exp() + m.cstar_exp()) as i32;
    let mut w = q.powi(col as i32 * jk);
    match m.family() {
        Family::A => {
            if col < i {
                return None;
            }
            for t in 0..i {
                w *= (1.0 - q.powi(2 * (col - t) as i32)).sqrt();
            }
            Some((col - i, w))
        }
        Family::AStar => {
            for t in 1..=i {
                w *= (1.0 - q.powi(2 * (col + t) as i32)).sqrt();
            }
            Some((col + i, w))
        }
    }
}

fn monomial_phase(m: &NormalMonomial, theta: f64) -> Complex64 {
    let p = (m.c_exp() as f64 - m.cstar_exp() as f64) * theta;
    Complex64::new(p.cos(), p.sin())
}

/// Exact supremum over columns of the weight sequence of one monomial,
/// reported as a (lower, upper) pair around floating error.
fn monomial_norm(m: &NormalMonomial, q: f64) -> (f64, f64) {
    if m.is_unit() {
        return (1.0, 1.0);
    }
    let jk = m.c_exp() + m.cstar_exp();
    let scan = scan_length(q);
    let mut best: f64 = 0.0;
    for col in 0..=scan {
        if let Some((_, w)) = monomial_entry(m, q, col) {
            best = best.max(w);
        }
    }
    let tail = if jk >= 1 { q.powi(((scan + 1) * jk as usize) as i32) } else { 1.0 };
    (best * (1.0 - FLOAT_SLOP), best.max(tail) + FLOAT_SLOP)
}

fn scan_length(q: f64) -> usize {
    // Far enough that q^(scan) is negligible against FLOAT_SLOP.
    let by_decay = (FLOAT_SLOP.ln() / q.ln()).ceil() as usize;
    by_decay.clamp(256, 16_384)
}

fn build_matrix(
    terms: &[(Complex64, NormalMonomial)],
    q: f64,
    theta: f64,
    n: usize,
) -> OperatorMatrix {
    let dim = n + 1;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    let mut band = 0usize;
    for (c, m) in terms {
        let phase = monomial_phase(m, theta) * c;
        band = band.max(m.word_length() as usize);
        for col in 0..dim {
            if let Some((row, w)) = monomial_entry(m, q, col) {
                if row < dim {
                    mat[(row, col)] += phase * w;
                }
            }
        }
    }
    OperatorMatrix { mat, theta, band }
}

/// The truncated representation matrix of an exact element.
pub fn rep_matrix(x: &AlgebraElement, q: f64, theta: f64, trunc: &TruncationParams) -> OperatorMatrix {
    rep_matrix_terms(&crate::basis::float_terms(x, q.sqrt()), q, theta, trunc)
}

/// The truncated representation matrix of float terms.
pub fn rep_matrix_terms(
    terms: &[(Complex64, NormalMonomial)],
    q: f64,
    theta: f64,
    trunc: &TruncationParams,
) -> OperatorMatrix {
    build_matrix(terms, q, theta, trunc.n)
}

fn sigma_extremes(mat: &DMatrix<Complex64>) -> (f64, f64) {
    let svd = mat.clone().svd(false, false);
    let sv: &DVector<f64> = &svd.singular_values;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for s in sv.iter() {
        lo = lo.min(*s);
        hi = hi.max(*s);
    }
    if sv.is_empty() {
        (0.0, 0.0)
    } else {
        (lo, hi)
    }
}

fn grid_sigma_max(terms: &[(Complex64, NormalMonomial)], q: f64, trunc: &TruncationParams) -> f64 {
    trunc
        .thetas()
        .par_iter()
        .map(|theta| sigma_extremes(&build_matrix(terms, q, *theta, trunc.n).mat).1)
        .reduce(|| 0.0, f64::max)
}

fn triangle_upper(terms: &[(Complex64, NormalMonomial)], q: f64) -> f64 {
    terms.iter().map(|(c, m)| c.norm() * monomial_norm(m, q).1).sum()
}

/// Schur row-sum bound on the exactly computed `x* x`:
/// `|x|^2 <= sup_row sum_col |(x* x)[row, col]|`.
fn schur_upper(x: &AlgebraElement, q: f64) -> f64 {
    let xstar_x = &x.star() * x;
    let r = q.sqrt();
    let terms: Vec<(f64, NormalMonomial)> =
        xstar_x.iter().map(|(m, c)| (c.abs_at(r), *m)).collect();
    let scan = scan_length(q);
    let mut best: f64 = 0.0;
    for row in 0..=scan {
        let mut sum = 0.0;
        for (a, m) in &terms {
            // The entry of `m` in this row sits in column row + i (a-block)
            // or row - i (a*-block).
            let i = m.block_exp() as usize;
            let col = match m.family() {
                Family::A => row + i,
                Family::AStar => {
                    if row < i {
                        continue;
                    }
                    row - i
                }
            };
            if let Some((entry_row, w)) = monomial_entry(m, q, col) {
                debug_assert_eq!(entry_row, row);
                sum += a * w;
            }
        }
        best = best.max(sum);
    }
    let tail: f64 = terms
        .iter()
        .map(|(a, m)| {
            let jk = (m.c_exp() + m.cstar_exp()) as i32;
            if jk >= 1 {
                let margin = (scan + 1).saturating_sub(m.block_exp() as usize);
                a * q.powi(margin as i32 * jk)
            } else {
                *a
            }
        })
        .sum();
    best.max(tail).sqrt()
}

/// Certified norm interval for an exact element of the coordinate algebra.
pub fn op_norm(x: &AlgebraElement, q: f64, trunc: &TruncationParams) -> NormEstimate {
    if x.is_zero() {
        return NormEstimate::exact_zero(trunc);
    }
    let terms = crate::basis::float_terms(x, q.sqrt());
    let lower = grid_sigma_max(&terms, q, trunc);
    let upper = triangle_upper(&terms, q).min(schur_upper(x, q));
    NormEstimate::new(
        lower - FLOAT_SLOP * (1.0 + lower),
        upper + FLOAT_SLOP * (1.0 + upper),
        trunc.n,
        trunc.theta_grid,
        NormMethod::Certified,
    )
}

/// Norm interval for float terms (solver outputs). The upper bound is
/// triangle-only since no exact product is available.
pub fn op_norm_terms(
    terms: &[(Complex64, NormalMonomial)],
    q: f64,
    trunc: &TruncationParams,
) -> NormEstimate {
    if terms.is_empty() {
        return NormEstimate::exact_zero(trunc);
    }
    let lower = grid_sigma_max(terms, q, trunc);
    let upper = triangle_upper(terms, q);
    NormEstimate::new(
        lower - FLOAT_SLOP * (1.0 + lower),
        upper + FLOAT_SLOP * (1.0 + upper),
        trunc.n,
        trunc.theta_grid,
        NormMethod::Certified,
    )
}

/// Norm interval for the grade -2 coefficient of a (0,1)-form, as an
/// operator between the graded completions.
pub fn graded_op_norm(omega: &FormElement, q: f64, trunc: &TruncationParams) -> NormEstimate {
    let mut est = op_norm(omega.element(), q, trunc);
    est.method = NormMethod::GradedCompression;
    est
}

/// Smallest singular value of the truncations across the phase grid.
/// Evidence for invertibility, never a certificate: truncation can only
/// raise the smallest singular value.
pub fn invertibility_margin(
    terms: &[(Complex64, NormalMonomial)],
    q: f64,
    trunc: &TruncationParams,
) -> NormEstimate {
    let margin = trunc
        .thetas()
        .par_iter()
        .map(|theta| sigma_extremes(&build_matrix(terms, q, *theta, trunc.n).mat).0)
        .reduce(|| f64::INFINITY, f64::min);
    let margin = if margin.is_finite() { margin } else { 0.0 };
    NormEstimate::new(
        margin - FLOAT_SLOP * (1.0 + margin),
        margin + FLOAT_SLOP * (1.0 + margin),
        trunc.n,
        trunc.theta_grid,
        NormMethod::MarginEvidence,
    )
}

/// `invertibility_margin` for an exact element.
pub fn invertibility_margin_exact(
    x: &AlgebraElement,
    q: f64,
    trunc: &TruncationParams,
) -> NormEstimate {
    invertibility_margin(&crate::basis::float_terms(x, q.sqrt()), q, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_element;

    fn trunc(n: usize, grid: usize) -> TruncationParams {
        TruncationParams::new(n, grid, 8, 1e-9)
    }

    fn elem(s: &str) -> AlgebraElement {
        parse_element(s).unwrap()
    }

    /// Independent oracle: max over a long scan of `q^n sqrt(1-q^(2n))`.
    fn ac_norm_oracle(q: f64) -> f64 {
        (0..10_000)
            .map(|n| q.powi(n) * (1.0 - q.powi(2 * n)).sqrt())
            .fold(0.0, f64::max)
    }

    #[test]
    fn relations_hold_in_matrix_model() {
        let q = 0.5;
        let t = trunc(32, 5);
        let pairs = [
            ("a*c", "q*c*a"),
            ("a*cs", "q*cs*a"),
            ("c*cs", "cs*c"),
            ("as*a + cs*c", "1"),
            ("a*as + q^2*c*cs", "1"),
        ];
        for theta in t.thetas() {
            for (lhs, rhs) in pairs {
                let l = rep_matrix(&elem(lhs), q, theta, &t);
                let r = rep_matrix(&elem(rhs), q, theta, &t);
                let diff = (&l.mat - &r.mat).norm();
                assert!(diff <= 1e-12, "{lhs} = {rhs} failed at theta={theta}: {diff}");
            }
        }
    }

    #[test]
    fn matrix_products_match_algebra_products_on_interior() {
        // Multiplying truncations only agrees with the truncation of the
        // product away from the boundary rows.
        let q = 0.5;
        let t = trunc(24, 3);
        let x = elem("a*c + cs");
        let y = elem("as - q*c");
        let xy = &x * &y;
        for theta in t.thetas() {
            let mx = rep_matrix(&x, q, theta, &t).mat;
            let my = rep_matrix(&y, q, theta, &t).mat;
            let mxy = rep_matrix(&xy, q, theta, &t).mat;
            let prod = &mx * &my;
            let interior = t.n - 4;
            for r in 0..interior {
                for c in 0..interior {
                    let d = (prod[(r, c)] - mxy[(r, c)]).norm();
                    assert!(d <= 1e-12, "entry ({r},{c}) differs by {d}");
                }
            }
        }
    }

    #[test]
    fn norm_of_generator_a_brackets_one() {
        let q = 0.5;
        let est = op_norm(&elem("a"), q, &trunc(64, 4));
        assert!(est.lower <= 1.0 && 1.0 <= est.upper);
        assert!(est.lower > 0.999999999);
        assert!(est.upper < 1.0 + 1e-9);
    }

    #[test]
    fn norm_of_b0_brackets_one_tightly() {
        let q = 0.5;
        let est = op_norm(&elem("B0"), q, &trunc(64, 32));
        assert!(est.contains(1.0), "{est:?}");
        assert!(est.width() <= 1e-6, "width = {}", est.width());
    }

    #[test]
    fn norm_of_ac_matches_closed_form() {
        let q = 0.5;
        let est = op_norm(&elem("a*c"), q, &trunc(64, 32));
        let want = ac_norm_oracle(q);
        assert!((want - 0.4330127018922193).abs() < 1e-12);
        assert!(est.contains(want), "{est:?} vs {want}");
        assert!(est.width() <= 1e-6, "width = {}", est.width());
    }

    #[test]
    fn schur_handles_identity_minus_b0() {
        // Triangle alone would report 2; the Schur bound on x*x gives 1.
        let q = 0.5;
        let est = op_norm(&elem("1 - B0"), q, &trunc(64, 4));
        assert!(est.upper <= 1.0 + 1e-9, "{est:?}");
        assert!(est.lower >= 1.0 - 1e-9);
    }

    #[test]
    fn lower_bound_monotone_in_cutoff_and_grid() {
        let q = 0.7;
        let x = elem("a*c + q*as*cs^2 - B0");
        let mut prev = 0.0;
        for n in [16usize, 32, 64] {
            let est = op_norm(&x, q, &trunc(n, 8));
            assert!(est.lower >= prev - 1e-12, "n = {n}");
            prev = est.lower;
        }
        let coarse = op_norm(&x, q, &trunc(32, 4));
        let fine = op_norm(&x, q, &trunc(32, 8));
        assert!(fine.lower >= coarse.lower - 1e-12);
    }

    #[test]
    fn graded_norm_of_dbar_b0() {
        let q = 0.5;
        let omega = crate::calculus::dbar_sphere(&crate::podles::PodlesElement::b0());
        let est = graded_op_norm(&omega, q, &trunc(64, 16));
        // q^(-2) * |ac| = 4 * 0.43301... = 1.7320508...
        assert!(est.upper <= 1.7321);
        assert!(est.contains(4.0 * ac_norm_oracle(q)));
        assert_eq!(est.method, NormMethod::GradedCompression);

        let zero = graded_op_norm(&FormElement::zero(-2), q, &trunc(16, 2));
        assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
    }

    #[test]
    fn graded_norm_lower_below_upper_on_random_forms() {
        let q = 0.4;
        let t = trunc(32, 6);
        for s in ["a*c", "a^2*c^2", "q*a*c - as*c^3", "a*c*cs^2 + a^2*c"] {
            let omega = FormElement::new(
                crate::podles::LineBundleElement::new(elem(s), -2).unwrap(),
            );
            let est = graded_op_norm(&omega, q, &t);
            assert!(est.lower <= est.upper, "{s}");
        }
    }

    #[test]
    fn margin_examples() {
        let q = 0.5;
        let t = trunc(48, 8);
        let one = invertibility_margin_exact(&AlgebraElement::one(), q, &t);
        assert!((one.lower - 1.0).abs() < 1e-9);

        // sigma_min of the truncated B0 is q^(2N), tending to zero.
        let m32 = invertibility_margin_exact(&elem("B0"), q, &trunc(16, 2));
        let m64 = invertibility_margin_exact(&elem("B0"), q, &trunc(32, 2));
        assert!(m64.lower < m32.lower);
        assert!(m64.lower < 1e-9);

        // Neumann consistency: margin of 1 - v at least 1 - |v| - tol.
        let v = elem("0.4*B0");
        let v_upper = op_norm(&v, q, &t).upper;
        let margin = invertibility_margin_exact(&(AlgebraElement::one() - v), q, &t);
        assert!(margin.lower >= 1.0 - v_upper - 1e-9);
    }

    #[test]
    fn truncated_b0_spectrum_is_q_powers() {
        let q = 0.5;
        let t = trunc(16, 1);
        let m = rep_matrix(&elem("B0"), q, 0.0, &t);
        for col in 0..=t.n {
            for row in 0..=t.n {
                let z = m.mat[(row, col)];
                if row == col {
                    assert!((z.re - q.powi(2 * col as i32)).abs() < 1e-15);
                    assert!(z.im.abs() < 1e-15);
                } else {
                    assert_eq!(z.norm_sqr(), 0.0);
                }
            }
        }
    }

    #[test]
    fn csv_export_shape() {
        let t = trunc(8, 1);
        let m = rep_matrix(&elem("a"), 0.5, 0.0, &t);
        let csv = m.to_csv_string();
        assert_eq!(csv.lines().count(), t.n + 1);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), t.n + 1);
    }

    #[test]
    fn bandwidth_bounded_by_word_length() {
        let t = trunc(16, 1);
        let m = rep_matrix(&elem("a^2*c + as^3"), 0.5, 0.0, &t);
        assert!(m.band <= 3);
    }
}
