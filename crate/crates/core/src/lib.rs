//! Exact symbolic computation and certified numerics for holomorphic
//! structures on line bundles over the quantum projective line.
//!
//! The crate is layered bottom-up:
//!
//! - [`scalar`]: exact Laurent-polynomial coefficients in `r = q^(1/2)`.
//! - [`algebra`]: the coordinate algebra of quantum SU(2) in a normal-ordered
//!   basis, with star, antipode, gradings and the quantum enveloping actions.
//! - [`podles`]: the quantum-sphere subalgebra, line-bundle components and
//!   the character at infinity.
//! - [`calculus`]: the holomorphic/anti-holomorphic differentials and the
//!   quantum integral as an exact graded linear solve.
//! - [`rep`]: truncated weighted-shift representations and certified
//!   operator-norm intervals.
//! - [`solver`]: gauge and mixed-gauge equations via contraction iteration
//!   and least-squares solves, with decision reports.
//! - [`admissibility`]: finite-truncation range models, separating
//!   functionals and scaled non-equivalence evidence.
//! - [`acceptance`]: the self-test suite run by the CLI and CI.

pub mod acceptance;
pub mod admissibility;
pub mod algebra;
pub mod basis;
pub mod calculus;
pub mod podles;
pub mod rep;
pub mod sampling;
pub mod scalar;
pub mod solver;

mod ratfunc;

pub use algebra::{AlgebraElement, Generator, NormalMonomial, UqGenerator, UqWord};
pub use podles::{LineBundleElement, PodlesElement};
pub use rep::{NormEstimate, TruncationParams};
pub use scalar::QScalar;
