//! Rational spans of the irrational coefficient vectors of a vector
//! polynomial, deciding density of `{u(n)}` in `T^m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::HashSet;

use super::phase::{chunks, PhaseStepper, SymPoly};
use super::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::IntPolynomial;

/// `u(n) = (u_1(n), ..., u_m(n))` with `SymbolicReal` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorPoly {
    pub components: Vec<SymPoly>,
}

impl VectorPoly {
    pub fn new(components: Vec<SymPoly>) -> Self {
        VectorPoly { components }
    }

    /// `(q_1(n), ..., q_m(n)) * c`.
    pub fn from_int(polys: &[IntPolynomial], c: &SymbolicReal) -> Self {
        VectorPoly { components: polys.iter().map(|p| SymPoly::from_int_poly(p, c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn compose(&self, p: &IntPolynomial) -> VectorPoly {
        VectorPoly { components: self.components.iter().map(|c| c.compose(p)).collect() }
    }

    /// One vector per (degree >= 1, irrational basis index).
    pub fn coefficient_vectors(&self) -> Vec<Vec<BigRational>> {
        let deg = self.components.iter().filter_map(SymPoly::degree).max().unwrap_or(0);
        let idx: Vec<usize> = self
            .components
            .iter()
            .flat_map(|c| c.coeffs().iter().flat_map(|s| s.irr_coeffs().keys().copied()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = Vec::new();
        for j in 1..=deg {
            for &a in &idx {
                let v: Vec<BigRational> = self.components.iter().map(|c| c.coeff(j).irr_coeff(a)).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanDescriptor {
    pub ambient: usize,
    /// Reduced row-echelon basis.
    pub basis: Vec<Vec<BigRational>>,
}

impl SpanDescriptor {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dense(&self) -> bool {
        self.ambient > 0 && self.rank() == self.ambient
    }
}

pub fn span_closure(u: &VectorPoly) -> SpanDescriptor {
    let rows = u.coefficient_vectors();
    let basis = if rows.is_empty() { Vec::new() } else { QMatrix::from_rows(rows, u.dim()).row_space_basis() };
    SpanDescriptor { ambient: u.dim(), basis }
}

pub fn substitution_invariance(u: &VectorPoly, p: &IntPolynomial) -> Result<bool> {
    if p.is_constant() {
        return Err(Error::InvalidArgument(format!("substituted polynomial {p} is constant")));
    }
    let a = span_closure(u);
    let b = span_closure(&u.compose(p));
    Ok(a.basis == b.basis)
}

pub fn product_density(beta: &SymbolicReal, u: &VectorPoly, p: &IntPolynomial) -> Result<bool> {
    if !beta.is_irrational() {
        return Err(Error::InvalidArgument("beta must be irrational".into()));
    }
    Ok(p.degree() > Some(1) && span_closure(&u.compose(p)).dense())
}

/// Number of cells of the uniform `bins^m` grid visited by
/// `({u_1(n)}, ..., {u_m(n)})` for `0 <= n < count`.
pub fn box_count(u: &VectorPoly, count: u64, bins: u64, basis: &Basis) -> Result<u64> {
    let m = u.dim() as u32;
    let cells = bins.checked_pow(m).filter(|&c| c <= 1 << 32).ok_or_else(|| {
        Error::Budget(format!("{bins}^{m} cells"))
    })?;
    let seen = chunks(0, count)
        .into_par_iter()
        .map(|(a, b)| {
            let start = BigInt::from(a);
            let mut st = u
                .components
                .iter()
                .map(|c| PhaseStepper::new(c, &start, b - a, basis))
                .collect::<Result<Vec<_>>>()?;
            let mut hit = HashSet::new();
            for _ in a..b {
                let cell = st.iter().fold(0u64, |acc, s| {
                    acc * bins + ((s.phase_u64() as u128 * bins as u128) >> 64) as u64
                });
                hit.insert(cell);
                st.iter_mut().for_each(PhaseStepper::advance);
            }
            Ok(hit)
        })
        .collect::<Result<Vec<_>>>()?;
    let all: HashSet<u64> = seen.into_iter().flatten().collect();
    debug_assert!(all.len() as u64 <= cells);
    Ok(all.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> SymbolicReal {
        SymbolicReal::basis(0)
    }

    fn vp(polys: &[&str]) -> VectorPoly {
        let ps: Vec<IntPolynomial> = polys.iter().map(|s| s.parse().unwrap()).collect();
        VectorPoly::from_int(&ps, &sqrt2())
    }

    #[test]
    fn spans() {
        assert!(span_closure(&vp(&["n", "n^2"])).dense());
        let line = span_closure(&vp(&["n", "2n"]));
        assert_eq!(line.rank(), 1);
        assert!(!line.dense());
        let zero = span_closure(&VectorPoly::new(vec![SymPoly::zero()]));
        assert_eq!(zero.rank(), 0);
        assert!(!zero.dense());
    }

    #[test]
    fn substitution() {
        let n2: IntPolynomial = "n^2".parse().unwrap();
        let n7: IntPolynomial = "n+7".parse().unwrap();
        let n3: IntPolynomial = "n^3".parse().unwrap();
        assert!(substitution_invariance(&vp(&["n", "n^2"]), &n2).unwrap());
        assert!(substitution_invariance(&vp(&["n", "n^2"]), &n7).unwrap());
        assert!(substitution_invariance(&vp(&["n", "2n"]), &n3).unwrap());
        assert!(substitution_invariance(&vp(&["n"]), &IntPolynomial::from_i64(&[3])).is_err());
    }

    #[test]
    fn products() {
        let u = vp(&["n"]);
        let b = sqrt2();
        assert!(product_density(&b, &u, &"n^2".parse().unwrap()).unwrap());
        assert!(!product_density(&b, &u, &"n".parse().unwrap()).unwrap());
        assert!(product_density(&b, &u, &"n^3".parse().unwrap()).unwrap());
        assert!(product_density(&SymbolicReal::ratio(1, 2), &u, &IntPolynomial::var()).is_err());
    }

    #[test]
    fn box_counts_follow_verdicts() {
        let basis = Basis::default();
        assert_eq!(box_count(&vp(&["n", "n^2"]), 100_000, 16, &basis).unwrap(), 256);
        assert!(box_count(&vp(&["n", "2n"]), 100_000, 16, &basis).unwrap() < 64);
    }
}
