//! Left actions of the quantum enveloping algebra: the canonical action
//! `h |> x` and the twisted action `d_g(x) = x <| S^(-1)(g)`.
//!
//! Products are handled through the coproduct:
//! `E |> (xy) = (E |> x)(K |> y) + (K^(-1) |> x)(E |> y)`, same shape for `F`,
//! with `K` grouplike. The `d`-action uses the analogous twist with the
//! right-action eigenvalues of `K`.

use crate::scalar::QScalar;

use super::element::AlgebraElement;
use super::monomial::{Generator, NormalMonomial};

/// Generator symbols of the quantum enveloping algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UqGenerator {
    K,
    KInv,
    E,
    F,
}

/// A formal word in `K, K^(-1), E, F`, applied rightmost symbol first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UqWord {
    gens: Vec<UqGenerator>,
}

impl UqWord {
    /// Builds a word, cancelling adjacent `K K^(-1)` and `K^(-1) K` pairs.
    pub fn new(gens: impl IntoIterator<Item = UqGenerator>) -> Self {
        let mut out: Vec<UqGenerator> = Vec::new();
        for g in gens {
            match (out.last(), g) {
                (Some(UqGenerator::K), UqGenerator::KInv)
                | (Some(UqGenerator::KInv), UqGenerator::K) => {
                    out.pop();
                }
                _ => out.push(g),
            }
        }
        UqWord { gens: out }
    }

    pub fn single(g: UqGenerator) -> Self {
        UqWord { gens: vec![g] }
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn symbols(&self) -> &[UqGenerator] {
        &self.gens
    }
}

impl From<UqGenerator> for UqWord {
    fn from(g: UqGenerator) -> Self {
        UqWord::single(g)
    }
}

/// `E |> g` on single generators; zero entries omitted.
fn e_on_generator(g: Generator) -> Option<(Generator, QScalar)> {
    match g {
        Generator::A => Some((Generator::CStar, -QScalar::q_power(1))),
        Generator::C => Some((Generator::AStar, QScalar::one())),
        Generator::AStar | Generator::CStar => None,
    }
}

/// `F |> g` on single generators.
fn f_on_generator(g: Generator) -> Option<(Generator, QScalar)> {
    match g {
        Generator::AStar => Some((Generator::C, QScalar::one())),
        Generator::CStar => Some((Generator::A, -QScalar::q_power(-1))),
        Generator::A | Generator::C => None,
    }
}

/// `d_E` on single generators.
fn de_on_generator(g: Generator) -> Option<(Generator, QScalar)> {
    match g {
        Generator::AStar => Some((Generator::CStar, QScalar::one())),
        Generator::C => Some((Generator::A, -QScalar::q_power(-1))),
        Generator::A | Generator::CStar => None,
    }
}

/// `d_F` on single generators.
fn df_on_generator(g: Generator) -> Option<(Generator, QScalar)> {
    match g {
        Generator::A => Some((Generator::C, -QScalar::q_power(1))),
        Generator::CStar => Some((Generator::AStar, QScalar::one())),
        Generator::C | Generator::AStar => None,
    }
}

/// Splits the letters of `m` at each position where `base` acts nontrivially
/// and sums `weight(prefix, suffix) * prefix * image(letter) * suffix`.
fn act_positionwise(
    m: &NormalMonomial,
    base: impl Fn(Generator) -> Option<(Generator, QScalar)>,
    twist: impl Fn(&NormalMonomial, &NormalMonomial) -> QScalar,
) -> AlgebraElement {
    let letters: Vec<Generator> = m.letters().collect();
    let mut out = AlgebraElement::zero();
    for t in 0..letters.len() {
        let Some((image, coeff)) = base(letters[t]) else { continue };
        let prefix = monomial_from_prefix(&letters[..t]);
        let suffix = monomial_from_prefix(&letters[t + 1..]);
        let scale = &coeff * &twist(&prefix, &suffix);
        let product = &(&AlgebraElement::monomial(prefix)
            * &AlgebraElement::generator(image))
            * &AlgebraElement::monomial(suffix);
        out += product.scale(&scale);
    }
    out
}

/// A contiguous slice of a normal word is itself normal.
fn monomial_from_prefix(letters: &[Generator]) -> NormalMonomial {
    let mut block = 0u32;
    let mut j = 0u32;
    let mut k = 0u32;
    let mut family = super::monomial::Family::A;
    for g in letters {
        match g {
            Generator::A => block += 1,
            Generator::AStar => {
                family = super::monomial::Family::AStar;
                block += 1;
            }
            Generator::C => j += 1,
            Generator::CStar => k += 1,
        }
    }
    NormalMonomial::new(family, block, j, k)
}

fn act_single_left(g: UqGenerator, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in x.iter() {
        match g {
            UqGenerator::K => out.add_term(*m, c * &QScalar::r_power(m.grade())),
            UqGenerator::KInv => out.add_term(*m, c * &QScalar::r_power(-m.grade())),
            UqGenerator::E => {
                let acted = act_positionwise(
                    m,
                    e_on_generator,
                    |pre, suf| QScalar::r_power(suf.grade() - pre.grade()),
                );
                out += acted.scale(c);
            }
            UqGenerator::F => {
                let acted = act_positionwise(
                    m,
                    f_on_generator,
                    |pre, suf| QScalar::r_power(suf.grade() - pre.grade()),
                );
                out += acted.scale(c);
            }
        }
    }
    out
}

fn act_single_partial(g: UqGenerator, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in x.iter() {
        match g {
            UqGenerator::K => out.add_term(*m, c * &QScalar::r_power(-m.m_grade())),
            UqGenerator::KInv => out.add_term(*m, c * &QScalar::r_power(m.m_grade())),
            UqGenerator::E => {
                let acted = act_positionwise(
                    m,
                    de_on_generator,
                    |pre, suf| QScalar::r_power(suf.m_grade() - pre.m_grade()),
                );
                out += acted.scale(c);
            }
            UqGenerator::F => {
                let acted = act_positionwise(
                    m,
                    df_on_generator,
                    |pre, suf| QScalar::r_power(suf.m_grade() - pre.m_grade()),
                );
                out += acted.scale(c);
            }
        }
    }
    out
}

/// The canonical left module-algebra action `h |> x`.
pub fn act_left(h: &UqWord, x: &AlgebraElement) -> AlgebraElement {
    if x.is_zero() {
        return AlgebraElement::zero();
    }
    let mut acc = x.clone();
    for g in h.symbols().iter().rev() {
        acc = act_single_left(*g, &acc);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// The twisted left action `d_g(x) = x <| S^(-1)(g)`, implemented from its
/// generator table.
pub fn act_partial(g: &UqWord, x: &AlgebraElement) -> AlgebraElement {
    if x.is_zero() {
        return AlgebraElement::zero();
    }
    let mut acc = x.clone();
    for g in g.symbols().iter().rev() {
        acc = act_single_partial(*g, &acc);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Family, Generator::*};

    fn gen(g: Generator) -> AlgebraElement {
        AlgebraElement::generator(g)
    }

    fn word(g: UqGenerator) -> UqWord {
        UqWord::single(g)
    }

    #[test]
    fn word_simplification() {
        let w = UqWord::new([UqGenerator::K, UqGenerator::KInv]);
        assert!(w.is_empty());
        let w = UqWord::new([UqGenerator::E, UqGenerator::KInv, UqGenerator::K]);
        assert_eq!(w.symbols(), &[UqGenerator::E]);
    }

    #[test]
    fn k_action_on_generators() {
        for (g, e) in [(A, -1), (C, -1), (AStar, 1), (CStar, 1)] {
            let acted = act_left(&word(UqGenerator::K), &gen(g));
            assert_eq!(acted, gen(g).scale(&QScalar::r_power(e)), "{g:?}");
        }
    }

    #[test]
    fn e_f_base_cases() {
        assert_eq!(act_left(&word(UqGenerator::E), &gen(A)), gen(CStar).scale(&-QScalar::q_power(1)));
        assert_eq!(act_left(&word(UqGenerator::E), &gen(C)), gen(AStar));
        assert!(act_left(&word(UqGenerator::E), &gen(AStar)).is_zero());
        assert!(act_left(&word(UqGenerator::E), &gen(CStar)).is_zero());
        assert_eq!(act_left(&word(UqGenerator::F), &gen(AStar)), gen(C));
        assert_eq!(
            act_left(&word(UqGenerator::F), &gen(CStar)),
            gen(A).scale(&-QScalar::q_power(-1))
        );
        assert!(act_left(&word(UqGenerator::F), &gen(A)).is_zero());
        assert!(act_left(&word(UqGenerator::F), &gen(C)).is_zero());
    }

    #[test]
    fn e_action_matches_power_formula() {
        // E |> c^s = q^((1-s)/2) [s] c^(s-1) a*.
        use crate::scalar::qint;
        for s in 1..=5u32 {
            let cs = AlgebraElement::monomial(NormalMonomial::new(Family::A, 0, s, 0));
            let acted = act_left(&word(UqGenerator::E), &cs);
            // Normal form of c^(s-1) a* is q^(s-1) as * c^(s-1).
            let mono = NormalMonomial::new(Family::AStar, 1, s - 1, 0);
            let coeff = &(&QScalar::r_power(1 - s as i64) * &qint(s))
                * &QScalar::q_power(s as i64 - 1);
            assert_eq!(acted, AlgebraElement::term(mono, coeff), "s = {s}");
        }
    }

    #[test]
    fn f_action_on_b0_word() {
        // F |> (c cs) = -q^(-3/2) a c.
        let ccs = &gen(C) * &gen(CStar);
        let acted = act_left(&word(UqGenerator::F), &ccs);
        let want = AlgebraElement::term(
            NormalMonomial::new(Family::A, 1, 1, 0),
            -QScalar::r_power(-3),
        );
        assert_eq!(acted, want);
    }

    #[test]
    fn partial_base_cases() {
        assert_eq!(act_partial(&word(UqGenerator::F), &gen(A)), gen(C).scale(&-QScalar::q_power(1)));
        assert_eq!(act_partial(&word(UqGenerator::F), &gen(CStar)), gen(AStar));
        assert!(act_partial(&word(UqGenerator::F), &gen(C)).is_zero());
        assert!(act_partial(&word(UqGenerator::F), &gen(AStar)).is_zero());
        assert!(act_partial(&word(UqGenerator::E), &gen(A)).is_zero());
        assert!(act_partial(&word(UqGenerator::E), &gen(CStar)).is_zero());
        assert_eq!(act_partial(&word(UqGenerator::E), &gen(AStar)), gen(CStar));
        assert_eq!(act_partial(&word(UqGenerator::E), &gen(C)), gen(A).scale(&-QScalar::q_power(-1)));
        assert_eq!(act_partial(&word(UqGenerator::K), &gen(C)), gen(C).scale(&QScalar::r_power(-1)));
        assert_eq!(act_partial(&word(UqGenerator::K), &gen(A)), gen(A).scale(&QScalar::r_power(1)));
    }

    #[test]
    fn zero_input_short_circuits() {
        assert!(act_left(&word(UqGenerator::E), &AlgebraElement::zero()).is_zero());
        assert!(act_partial(&word(UqGenerator::F), &AlgebraElement::zero()).is_zero());
    }

    #[test]
    fn module_algebra_law_on_products() {
        // E |> (xy) = (E|>x)(K|>y) + (K^-1|>x)(E|>y), after `xy` has been
        // normal-ordered; this exercises compatibility of the action with the
        // relations.
        let xs = [
            gen(A),
            &gen(C) * &gen(CStar),
            &gen(A) * &gen(AStar),
            &gen(AStar) * &(&gen(C) + &gen(A)),
        ];
        let e = word(UqGenerator::E);
        let f = word(UqGenerator::F);
        let k = word(UqGenerator::K);
        let kinv = word(UqGenerator::KInv);
        for x in &xs {
            for y in &xs {
                let xy = x * y;
                for h in [&e, &f] {
                    let lhs = act_left(h, &xy);
                    let rhs = &(&act_left(h, x) * &act_left(&k, y))
                        + &(&act_left(&kinv, x) * &act_left(h, y));
                    assert_eq!(lhs, rhs);
                }
                assert_eq!(
                    act_left(&k, &xy),
                    &act_left(&k, x) * &act_left(&k, y),
                );
            }
        }
    }

    #[test]
    fn grading_matches_k_eigenvalue() {
        let x = &(&gen(A) * &gen(C)) + &gen(CStar);
        for (grade, part) in x.grade_decompose() {
            let acted = act_left(&word(UqGenerator::K), &part);
            assert_eq!(acted, part.scale(&QScalar::r_power(grade)));
        }
    }

    #[test]
    fn m_grading_matches_partial_k_eigenvalue() {
        let x = &(&gen(A) * &gen(C)) + &(&gen(CStar) * &gen(CStar));
        for (grade, part) in x.m_grade_decompose() {
            let acted = act_partial(&word(UqGenerator::K), &part);
            assert_eq!(acted, part.scale(&QScalar::r_power(-grade)));
        }
    }
}
