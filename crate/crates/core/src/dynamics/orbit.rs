//! Unipotent affine maps `x -> (I + N) x + b` on `T^d` and their orbits
//! in closed form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::phase::SymPoly;
use super::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, RatPolynomial};

/// `sum_j x[j] * x_j + c`, an affine function of the initial point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    pub x: Vec<BigRational>,
    pub c: SymbolicReal,
}

impl AffineExpr {
    pub fn zero(dim: usize) -> Self {
        AffineExpr { x: vec![BigRational::zero(); dim], c: SymbolicReal::zero() }
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.x[i] = BigRational::one();
        e
    }

    pub fn add(&self, rhs: &AffineExpr) -> AffineExpr {
        AffineExpr {
            x: self.x.iter().zip(&rhs.x).map(|(a, b)| a + b).collect(),
            c: &self.c + &rhs.c,
        }
    }

    pub fn scale(&self, k: &BigRational) -> AffineExpr {
        AffineExpr { x: self.x.iter().map(|a| a * k).collect(), c: self.c.scale(k) }
    }

    pub fn eval(&self, point: &[SymbolicReal]) -> SymbolicReal {
        self.x
            .iter()
            .zip(point)
            .map(|(a, p)| p.scale(a))
            .fold(self.c.clone(), |acc, t| &acc + &t)
    }
}

/// Image of the generic point: one affine expression per coordinate.
pub type AffineImage = Vec<AffineExpr>;

pub fn identity_image(dim: usize) -> AffineImage {
    (0..dim).map(|i| AffineExpr::coordinate(dim, i)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentAffineMap {
    nilpotent: Vec<Vec<i64>>,
    translation: Vec<SymbolicReal>,
}

impl UnipotentAffineMap {
    /// `nilpotent` must be square and strictly lower triangular.
    pub fn new(nilpotent: Vec<Vec<i64>>, translation: Vec<SymbolicReal>) -> Result<Self> {
        let d = translation.len();
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if nilpotent.len() != d || nilpotent.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument(format!("matrix must be {d}x{d}")));
        }
        for (i, row) in nilpotent.iter().enumerate() {
            if row[i..].iter().any(|&v| v != 0) {
                return Err(Error::InvalidArgument(
                    "matrix must be strictly lower triangular".into(),
                ));
            }
        }
        Ok(UnipotentAffineMap { nilpotent, translation })
    }

    /// `x -> x + b`.
    pub fn rotation(translation: Vec<SymbolicReal>) -> Result<Self> {
        let d = translation.len();
        Self::new(vec![vec![0; d]; d], translation)
    }

    /// `(t, s) -> (t + alpha, s + c t + beta)`.
    pub fn skew(alpha: SymbolicReal, coupling: i64, beta: SymbolicReal) -> Self {
        Self::new(vec![vec![0, 0], vec![coupling, 0]], vec![alpha, beta]).expect("valid shape")
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn nilpotent(&self) -> &[Vec<i64>] {
        &self.nilpotent
    }

    pub fn translation(&self) -> &[SymbolicReal] {
        &self.translation
    }

    pub fn is_rotation(&self) -> bool {
        self.nilpotent.iter().flatten().all(|&v| v == 0)
    }

    /// Irrational first rotation and nonzero subdiagonal.
    pub fn is_quasi_standard(&self) -> bool {
        self.translation[0].is_irrational() && (1..self.dim()).all(|i| self.nilpotent[i][i - 1] != 0)
    }

    /// One application to an affine image.
    pub fn apply(&self, img: &AffineImage) -> AffineImage {
        let d = self.dim();
        (0..d)
            .map(|r| {
                let mut out = img[r].clone();
                for j in 0..r {
                    let k = self.nilpotent[r][j];
                    if k != 0 {
                        out = out.add(&img[j].scale(&BigRational::from_integer(k.into())));
                    }
                }
                out.c = &out.c + &self.translation[r];
                out
            })
            .collect()
    }

    /// `n`-fold application starting from the generic point.
    pub fn iterate(&self, n: u64) -> AffineImage {
        let mut img = identity_image(self.dim());
        for _ in 0..n {
            img = self.apply(&img);
        }
        img
    }

    fn nilpotent_powers(&self) -> Vec<Vec<Vec<BigInt>>> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d);
        let mut cur: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        for _ in 0..d {
            out.push(cur.clone());
            cur = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| BigInt::from(self.nilpotent[i][k]) * &cur[k][j]).sum())
                        .collect()
                })
                .collect();
        }
        out
    }

    /// `T^n x = sum_i C(n,i) N^i x + sum_{i >= 1} C(n,i) N^(i-1) b`.
    pub fn orbit_closed_form(&self) -> OrbitPolynomial {
        let d = self.dim();
        let powers = self.nilpotent_powers();
        let terms = (0..d)
            .map(|r| {
                (0..=d)
                    .map(|i| {
                        let x = if i < d {
                            powers[i][r].iter().map(|v| BigRational::from_integer(v.clone())).collect()
                        } else {
                            vec![BigRational::zero(); d]
                        };
                        let c = if i == 0 {
                            SymbolicReal::zero()
                        } else {
                            (0..d)
                                .map(|j| self.translation[j].scale_int(&powers[i - 1][r][j]))
                                .sum()
                        };
                        AffineExpr { x, c }
                    })
                    .collect()
            })
            .collect();
        OrbitPolynomial { dim: d, terms }
    }
}

/// Generalized binomial coefficient, valid for negative `n`.
pub fn binomial(n: &BigInt, i: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i {
        num *= n - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Orbit coordinates in the binomial basis: coordinate `r` of `T^n x` is
/// `sum_i C(n, i) * terms[r][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPolynomial {
    dim: usize,
    terms: Vec<Vec<AffineExpr>>,
}

impl OrbitPolynomial {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Vec<AffineExpr>] {
        &self.terms
    }

    pub fn evaluate(&self, n: &BigInt) -> AffineImage {
        let b: Vec<BigRational> = (0..=self.dim)
            .map(|i| BigRational::from_integer(binomial(n, i)))
            .collect();
        self.terms
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&b)
                    .fold(AffineExpr::zero(self.dim), |acc, (t, c)| acc.add(&t.scale(c)))
            })
            .collect()
    }

    /// Same data in the monomial basis: `[r][j]` is the coefficient of `n^j`.
    pub fn monomial_form(&self) -> Vec<Vec<AffineExpr>> {
        let n = IntPolynomial::var();
        let basis: Vec<RatPolynomial> = (0..=self.dim).map(|i| RatPolynomial::binomial_of(&n, i)).collect();
        self.terms
            .iter()
            .map(|row| {
                (0..=self.dim)
                    .map(|j| {
                        row.iter()
                            .zip(&basis)
                            .fold(AffineExpr::zero(self.dim), |acc, (t, bp)| acc.add(&t.scale(&bp.coeff(j))))
                    })
                    .collect()
            })
            .collect()
    }

    /// `T^m 0`.
    pub fn translation_at(&self, m: &BigInt) -> Vec<SymbolicReal> {
        self.evaluate(m).into_iter().map(|e| e.c).collect()
    }

    /// Integer matrix of `T^m`'s linear part, `sum_i C(m, i) N^i`.
    pub fn matrix_at(&self, m: &BigInt) -> Vec<Vec<BigInt>> {
        self.evaluate(m)
            .into_iter()
            .map(|e| e.x.into_iter().map(|v| v.to_integer()).collect())
            .collect()
    }

    /// `freq . T^(p(n)) x` as a polynomial in `n`.
    pub fn character_phase(&self, p: &IntPolynomial, freq: &[i64], x: &[SymbolicReal]) -> SymPoly {
        let mut acc = SymPoly::zero();
        for i in 0..=self.dim {
            let weight: SymbolicReal = (0..self.dim)
                .filter(|&r| freq[r] != 0)
                .map(|r| self.terms[r][i].eval(x).scale_int(&BigInt::from(freq[r])))
                .sum();
            if weight.is_zero() {
                continue;
            }
            acc = acc.add(&SymPoly::from_rat_poly(&RatPolynomial::binomial_of(p, i), &weight));
        }
        acc
    }

    /// Human-readable monomial form, one string per coordinate.
    pub fn display(&self, basis: &Basis, names: &[&str]) -> Vec<String> {
        self.monomial_form()
            .iter()
            .map(|row| {
                let mut parts = Vec::new();
                for (j, t) in row.iter().enumerate() {
                    let mut pieces: Vec<(bool, String)> = Vec::new();
                    for (k, a) in t.x.iter().enumerate() {
                        if !a.is_zero() {
                            let name = names.get(k).copied().unwrap_or("x");
                            let mag = a.abs();
                            let body = if mag.is_one() { name.to_string() } else { format!("{mag}*{name}") };
                            pieces.push((a.is_negative(), body));
                        }
                    }
                    if !t.c.is_zero() {
                        let c = t.c.display(basis);
                        pieces.push(match c.strip_prefix('-') {
                            Some(rest) => (true, rest.to_string()),
                            None => (false, c),
                        });
                    }
                    if pieces.is_empty() {
                        continue;
                    }
                    let mut inner = String::new();
                    for (i, (neg, body)) in pieces.iter().enumerate() {
                        inner.push_str(match (i, neg) {
                            (0, true) => "-",
                            (0, false) => "",
                            (_, true) => " - ",
                            (_, false) => " + ",
                        });
                        inner.push_str(body);
                    }
                    parts.push(match j {
                        0 => inner,
                        1 => format!("({inner})*n"),
                        _ => format!("({inner})*n^{j}"),
                    });
                }
                if parts.is_empty() { "0".into() } else { parts.join(" + ") }
            })
            .collect()
    }
}
