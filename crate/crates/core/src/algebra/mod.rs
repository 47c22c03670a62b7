//! The coordinate algebra of quantum SU(2) as a free module over normal
//! monomials, with the relation rewriting, star, antipode, U(1) gradings and
//! the quantum enveloping-algebra actions.
//!
//! Conventions (all verified against the weighted-shift representation in
//! `rep`): `ac = q ca`, `ac* = q c*a`, `cc* = c*c`, `a*a + c*c = 1`,
//! `aa* + q^2 cc* = 1`. Normal order puts the `a`/`a*` block leftmost, then
//! `c`, then `c*`.

mod actions;
mod element;
mod grammar;
mod monomial;

pub use actions::{act_left, act_partial, UqGenerator, UqWord};
pub use element::AlgebraElement;
pub use grammar::parse_element;
pub use monomial::{Family, Generator, NormalMonomial};
