//! Normal-ordered monomials of the quantum SU(2) coordinate algebra.
//!
//! The normal form puts the `a`-block (or `a*`-block) leftmost, then powers
//! of `c`, then powers of `c*`. Since `a` and `a*` annihilate against each
//! other under the sphere relations, a normal word never contains both; the
//! basis splits into the two families below.

use std::fmt;

/// One of the four algebra generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    AStar,
    C,
    CStar,
}

impl Generator {
    /// The star involution on generators: `a <-> a*`, `c <-> c*`.
    pub fn star(self) -> Generator {
        match self {
            Generator::A => Generator::AStar,
            Generator::AStar => Generator::A,
            Generator::C => Generator::CStar,
            Generator::CStar => Generator::C,
        }
    }

    /// Eigenvalue exponent of the right U(1) grading: `K |> g = q^(n/2) g`.
    pub fn grade(self) -> i64 {
        match self {
            Generator::A | Generator::C => -1,
            Generator::AStar | Generator::CStar => 1,
        }
    }

    /// Eigenvalue exponent of the left U(1) grading: `d_K(g) = q^(-m/2) g`.
    pub fn m_grade(self) -> i64 {
        match self {
            Generator::A | Generator::CStar => -1,
            Generator::AStar | Generator::C => 1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A => write!(f, "a"),
            Generator::AStar => write!(f, "as"),
            Generator::C => write!(f, "c"),
            Generator::CStar => write!(f, "cs"),
        }
    }
}

/// Which annihilation block heads the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `a^i c^j cs^k`, any `i >= 0`.
    A,
    /// `as^i c^j cs^k`, `i >= 1`.
    AStar,
}

/// A basis monomial `a^i c^j cs^k` or `as^i c^j cs^k` in normal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NormalMonomial {
    family: Family,
    i: u32,
    j: u32,
    k: u32,
}

impl NormalMonomial {
    pub fn new(family: Family, i: u32, j: u32, k: u32) -> Self {
        // An empty a*-block is the same monomial as an empty a-block.
        let family = if i == 0 { Family::A } else { family };
        NormalMonomial { family, i, j, k }
    }

    pub fn unit() -> Self {
        Self::new(Family::A, 0, 0, 0)
    }

    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::A => Self::new(Family::A, 1, 0, 0),
            Generator::AStar => Self::new(Family::AStar, 1, 0, 0),
            Generator::C => Self::new(Family::A, 0, 1, 0),
            Generator::CStar => Self::new(Family::A, 0, 0, 1),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Exponent of the leading `a`/`as` block.
    pub fn block_exp(&self) -> u32 {
        self.i
    }

    pub fn c_exp(&self) -> u32 {
        self.j
    }

    pub fn cstar_exp(&self) -> u32 {
        self.k
    }

    pub fn is_unit(&self) -> bool {
        self.i == 0 && self.j == 0 && self.k == 0
    }

    pub fn word_length(&self) -> u32 {
        self.i + self.j + self.k
    }

    /// Right U(1) grade: starred letters count +1, unstarred -1.
    pub fn grade(&self) -> i64 {
        let block = match self.family {
            Family::A => -(self.i as i64),
            Family::AStar => self.i as i64,
        };
        block - self.j as i64 + self.k as i64
    }

    /// Left U(1) grade, read off through `d_K`.
    pub fn m_grade(&self) -> i64 {
        let block = match self.family {
            Family::A => -(self.i as i64),
            Family::AStar => self.i as i64,
        };
        block + self.j as i64 - self.k as i64
    }

    /// The letters of the word, leftmost first.
    pub fn letters(&self) -> impl Iterator<Item = Generator> + '_ {
        let block = match self.family {
            Family::A => Generator::A,
            Family::AStar => Generator::AStar,
        };
        std::iter::repeat(block)
            .take(self.i as usize)
            .chain(std::iter::repeat(Generator::C).take(self.j as usize))
            .chain(std::iter::repeat(Generator::CStar).take(self.k as usize))
    }

    /// Append `c^dj cs^dk` on the right. Stays normal: `c` and `cs` commute
    /// with each other and already sit rightmost.
    pub fn append_c_cstar(&self, dj: u32, dk: u32) -> Self {
        Self::new(self.family, self.i, self.j + dj, self.k + dk)
    }
}

impl Ord for NormalMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word_length(), self.family, self.i, self.j, self.k).cmp(&(
            other.word_length(),
            other.family,
            other.i,
            other.j,
            other.k,
        ))
    }
}

impl PartialOrd for NormalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: &str, e: u32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")
            } else {
                write!(f, "{name}^{e}")
            }
        };
        let block = match self.family {
            Family::A => "a",
            Family::AStar => "as",
        };
        put(f, block, self.i)?;
        put(f, "c", self.j)?;
        put(f, "cs", self.k)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_of_generators() {
        assert_eq!(NormalMonomial::generator(Generator::A).grade(), -1);
        assert_eq!(NormalMonomial::generator(Generator::C).grade(), -1);
        assert_eq!(NormalMonomial::generator(Generator::AStar).grade(), 1);
        assert_eq!(NormalMonomial::generator(Generator::CStar).grade(), 1);
        assert_eq!(NormalMonomial::generator(Generator::A).m_grade(), -1);
        assert_eq!(NormalMonomial::generator(Generator::C).m_grade(), 1);
    }

    #[test]
    fn astar_family_with_empty_block_collapses() {
        let m = NormalMonomial::new(Family::AStar, 0, 2, 1);
        assert_eq!(m.family(), Family::A);
        assert_eq!(m, NormalMonomial::new(Family::A, 0, 2, 1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(NormalMonomial::unit().to_string(), "1");
        assert_eq!(NormalMonomial::new(Family::A, 2, 0, 3).to_string(), "a^2*cs^3");
        assert_eq!(NormalMonomial::new(Family::AStar, 1, 1, 0).to_string(), "as*c");
    }
}
