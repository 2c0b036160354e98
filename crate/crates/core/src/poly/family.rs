use num_rational::BigRational;

use super::IntPolynomial;
use crate::error::{Error, Result};
use crate::linalg::rank_of_vectors;

/// Ordered list of integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyFamily {
    members: Vec<IntPolynomial>,
}

impl PolyFamily {
    pub fn new(members: Vec<IntPolynomial>) -> Self {
        PolyFamily { members }
    }

    /// Parses each expression with [`super::parse_polynomial`].
    pub fn parse<S: AsRef<str>>(exprs: &[S]) -> Result<Self> {
        exprs
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn members(&self) -> &[IntPolynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with constant terms removed.
    pub fn tilde_members(&self) -> Vec<IntPolynomial> {
        self.members.iter().map(IntPolynomial::strip_constant).collect()
    }

    pub fn essentially_distinct(&self) -> bool {
        self.first_degeneracy().is_none()
    }

    /// Errors with a description of the first constant member or constant
    /// pairwise difference.
    pub fn require_essentially_distinct(&self) -> Result<()> {
        match self.first_degeneracy() {
            None => Ok(()),
            Some(msg) => Err(Error::NotEssentiallyDistinct(msg)),
        }
    }

    fn first_degeneracy(&self) -> Option<String> {
        for (i, p) in self.members.iter().enumerate() {
            if p.is_constant() {
                return Some(format!("member {} ({p}) is constant", i + 1));
            }
        }
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                if (&self.members[i] - &self.members[j]).is_constant() {
                    return Some(format!(
                        "members {} and {} differ by a constant",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        None
    }

    /// Dimension over Q of the span of the constant-free members.
    pub fn linear_rank(&self) -> usize {
        let tildes = self.tilde_members();
        let dim = tildes.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        let vectors: Vec<Vec<BigRational>> = tildes
            .iter()
            .map(|p| (0..dim).map(|j| BigRational::from_integer(p.coeff(j))).collect())
            .collect();
        rank_of_vectors(&vectors, dim)
    }

    pub fn max_degree(&self) -> usize {
        self.members.iter().filter_map(IntPolynomial::degree).max().unwrap_or(0)
    }

    pub fn all_constant_terms_zero(&self) -> bool {
        self.members.iter().all(|p| p.coeff(0) == 0.into())
    }
}

impl std::fmt::Display for PolyFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
