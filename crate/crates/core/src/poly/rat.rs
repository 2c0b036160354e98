use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntPolynomial;

/// Dense polynomial over Q, same conventions as [`IntPolynomial`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPolynomial) -> (RatPolynomial, RatPolynomial) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Clears denominators and returns the primitive integer multiple with
    /// positive leading coefficient; `None` for the zero polynomial.
    pub fn primitive_integer(&self) -> Option<IntPolynomial> {
        if self.is_zero() {
            return None;
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        IntPolynomial::new(ints).primitive_part().ok()
    }

    /// Integer polynomial if every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// `binom(p(n), i)` as a polynomial in `n`.
    pub fn binomial_of(p: &IntPolynomial, i: usize) -> Self {
        let base = Self::from_int(p);
        let mut acc = Self::constant(BigRational::one());
        for j in 0..i {
            let shifted = &base - &Self::constant(BigRational::from_integer(BigInt::from(j)));
            acc = &acc * &shifted;
        }
        let mut fact = BigInt::one();
        for j in 2..=i {
            fact *= BigInt::from(j);
        }
        acc.scale(&BigRational::new(BigInt::one(), fact))
    }
}

impl Add for &RatPolynomial {
    type Output = RatPolynomial;
    fn add(self, rhs: &RatPolynomial) -> RatPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPolynomial::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &RatPolynomial {
    type Output = RatPolynomial;
    fn sub(self, rhs: &RatPolynomial) -> RatPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPolynomial::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &RatPolynomial {
    type Output = RatPolynomial;
    fn mul(self, rhs: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RatPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_of_matches_direct() {
        let p: IntPolynomial = "2n^2+n".parse().unwrap();
        for i in 0..5 {
            let b = RatPolynomial::binomial_of(&p, i);
            for n in 0..8i64 {
                let m = p.eval_i64(n);
                let mut direct = BigRational::one();
                for j in 0..i {
                    direct = direct * BigRational::from_integer(&m - BigInt::from(j))
                        / BigRational::from_integer(BigInt::from(j + 1));
                }
                assert_eq!(b.eval(&BigRational::from_integer(n.into())), direct);
            }
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = RatPolynomial::from_int(&"n^5 - 3n^2 + 7".parse().unwrap());
        let d = RatPolynomial::from_int(&"2n^2 + 1".parse().unwrap());
        let (q, r) = a.div_rem(&d);
        assert!(r.degree().is_none_or(|k| k < 2));
        assert_eq!(&(&q * &d) + &r, a);
    }
}
