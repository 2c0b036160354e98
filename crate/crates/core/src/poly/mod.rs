//! Exact integer and rational polynomials in one variable `n`.

mod family;
mod gcd;
mod parse;
mod rat;

pub use family::PolyFamily;
pub use gcd::{gcd_over_q, squarefree_part};
pub use parse::parse_polynomial;
pub use rat::RatPolynomial;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficient of `n^j` at index `j`.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c * n^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Constant polynomials, including zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Value modulo `m`, in `[0, m)`.
    pub fn eval_mod(&self, n: &BigInt, m: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * n + c).mod_floor(m);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigInt::from(j))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(q(n))`.
    pub fn compose(&self, q: &IntPolynomial) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    /// `self(r n + s)` for `r >= 1`, `0 <= s < r`.
    pub fn compose_affine(&self, r: u64, s: u64) -> Result<Self> {
        if r == 0 || s >= r {
            return Err(Error::InvalidArgument(format!(
                "compose_affine needs r >= 1 and 0 <= s < r, got r={r}, s={s}"
            )));
        }
        Ok(self.compose(&Self::from_i64(&[s as i64, r as i64])))
    }

    /// Coefficients with the constant term removed.
    pub fn strip_constant(&self) -> Self {
        let mut c = self.coeffs.clone();
        if let Some(c0) = c.first_mut() {
            *c0 = BigInt::zero();
        }
        Self::new(c)
    }

    /// Nonnegative gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `(sign, content, primitive)` with `self = sign * content * primitive`
    /// and the primitive part having positive leading coefficient.
    pub fn primitive_decompose(&self) -> Result<(i8, BigInt, IntPolynomial)> {
        let lead = self.leading().ok_or(Error::NoPrimitivePart)?;
        let sign: i8 = if lead.is_negative() { -1 } else { 1 };
        let content = self.content();
        let div = &content * BigInt::from(sign);
        let prim = Self::new(self.coeffs.iter().map(|c| c / &div).collect());
        Ok((sign, content, prim))
    }

    pub fn primitive_part(&self) -> Result<IntPolynomial> {
        Ok(self.primitive_decompose()?.2)
    }

    /// Rational `c` with `self = c * other`, if one exists.
    pub fn ratio_to(&self, other: &IntPolynomial) -> Option<num_rational::BigRational> {
        use num_rational::BigRational;
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.degree() != other.degree() {
            return None;
        }
        let c = BigRational::new(self.leading()?.clone(), other.leading()?.clone());
        let ok = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| BigRational::from_integer(a.clone()) == &c * b);
        ok.then_some(c)
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::from_int(self)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl fmt::Display for IntPolynomial {
    /// Highest degree first, in the syntax accepted by [`parse_polynomial`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "n")?,
                (1, false) => write!(f, "{mag}*n")?,
                (_, true) => write!(f, "n^{j}")?,
                (_, false) => write!(f, "{mag}*n^{j}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}
