//! Polynomials with symbolic real coefficients, their exact Cesàro limits
//! `lim (1/N) sum e(P(n))`, and exact-mod-1 stepping of `P(n)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::fixed::Fixed;
use super::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, RatPolynomial};

/// Largest prime-power period averaged by enumeration in [`phase_limit`].
pub const MAX_PERIOD: u64 = 100_000_000;
/// Chunk length for parallel empirical sums.
pub const CHUNK: u64 = 1 << 15;

/// `e(x) = exp(2 pi i x)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymPoly {
    coeffs: Vec<SymbolicReal>,
}

impl SymPoly {
    pub fn new(mut coeffs: Vec<SymbolicReal>) -> Self {
        while coeffs.last().is_some_and(SymbolicReal::is_zero) {
            coeffs.pop();
        }
        SymPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: SymbolicReal) -> Self {
        Self::new(vec![c])
    }

    /// `c * n^k`.
    pub fn monomial(c: SymbolicReal, k: usize) -> Self {
        let mut v = vec![SymbolicReal::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `q(n) * c` for a rational polynomial `q`.
    pub fn from_rat_poly(q: &RatPolynomial, c: &SymbolicReal) -> Self {
        Self::new(q.coeffs().iter().map(|a| c.scale(a)).collect())
    }

    /// `p(n) * c` for an integer polynomial `p`.
    pub fn from_int_poly(p: &IntPolynomial, c: &SymbolicReal) -> Self {
        Self::from_rat_poly(&p.to_rational(), c)
    }

    pub fn coeffs(&self) -> &[SymbolicReal] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> SymbolicReal {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &SymPoly) -> SymPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        SymPoly::new((0..len).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }

    pub fn scale(&self, k: &BigRational) -> SymPoly {
        SymPoly::new(self.coeffs.iter().map(|c| c.scale(k)).collect())
    }

    pub fn eval(&self, n: &BigInt) -> SymbolicReal {
        let nr = BigRational::from_integer(n.clone());
        let mut acc = SymbolicReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(&nr) + c;
        }
        acc
    }

    /// `self(p(n))`.
    pub fn compose(&self, p: &IntPolynomial) -> SymPoly {
        let rp = p.to_rational();
        let mut acc = SymPoly::zero();
        let mut power = RatPolynomial::constant(BigRational::one());
        for c in &self.coeffs {
            acc = acc.add(&SymPoly::from_rat_poly(&power, c));
            power = &power * &rp;
        }
        acc
    }

    /// Some coefficient of positive degree is irrational.
    pub fn has_irrational_nonconstant(&self) -> bool {
        self.coeffs.iter().skip(1).any(SymbolicReal::is_irrational)
    }

    pub fn display(&self, basis: &Basis) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = c.display(basis);
            parts.push(match j {
                0 => body,
                1 => format!("({body})*n"),
                _ => format!("({body})*n^{j}"),
            });
        }
        parts.join(" + ")
    }
}

/// `lim_{N-M -> inf} (1/(N-M)) sum_{M <= n < N} e(P(n))`, exactly: zero if
/// some nonconstant coefficient is irrational, otherwise the average over a
/// period, split into prime-power periods by the Chinese remainder theorem.
pub fn phase_limit(p: &SymPoly, basis: &Basis) -> Result<Complex64> {
    let constant = e(p.coeff(0).frac_f64(basis)?);
    if p.has_irrational_nonconstant() {
        return Ok(Complex64::zero());
    }
    let rat: Vec<BigRational> = p.coeffs().iter().skip(1).map(|c| c.rational_part().clone()).collect();
    let d = rat.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    if d.is_one() {
        return Ok(constant);
    }
    // P(n) - P(0) = (sum_j a_j n^j) / d with integers a_j.
    let ints: Vec<BigInt> = rat
        .iter()
        .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
        .collect();
    let mut total = constant;
    for (q, k) in factor_bigint(&d)? {
        let qe = BigInt::from(q).pow(k);
        let rest = &d / &qe;
        // 1/d = u/q^e mod 1 where u = (d/q^e)^{-1} mod q^e.
        let u = rest.extended_gcd(&qe).x.mod_floor(&qe);
        total *= period_average(&ints, &u, &qe)?;
    }
    Ok(total)
}

fn factor_bigint(d: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = d.clone();
    let mut out = Vec::new();
    let mut q = 2u64;
    while BigInt::from(q) * BigInt::from(q) <= n {
        if q > MAX_PERIOD {
            return Err(Error::Budget(format!("period {d} has a prime factor above {MAX_PERIOD}")));
        }
        let qb = BigInt::from(q);
        let mut k = 0;
        while (&n % &qb).is_zero() {
            n /= &qb;
            k += 1;
        }
        if k > 0 {
            out.push((q, k));
        }
        q += 1;
    }
    if !n.is_one() {
        let q = n
            .to_u64()
            .filter(|&q| q <= MAX_PERIOD)
            .ok_or_else(|| Error::Budget(format!("period {d} has a prime factor above {MAX_PERIOD}")))?;
        out.push((q, 1));
    }
    Ok(out)
}

/// `(1/m) sum_{n mod m} e(u * sum_j a_j n^(j+1) / m)`.
fn period_average(a: &[BigInt], u: &BigInt, m: &BigInt) -> Result<Complex64> {
    let mm = m
        .to_u64()
        .filter(|&v| v <= MAX_PERIOD)
        .ok_or_else(|| Error::Budget(format!("prime-power period {m} exceeds {MAX_PERIOD}")))?;
    let red: Vec<u128> = a
        .iter()
        .map(|c| (c * u).mod_floor(m).to_u128().unwrap())
        .collect();
    let m128 = mm as u128;
    let mut counts = vec![0u64; mm as usize];
    for n in 0..m128 {
        let mut acc = 0u128;
        for c in red.iter().rev() {
            acc = (acc + c) * n % m128;
        }
        counts[acc as usize] += 1;
    }
    let mut sum = Complex64::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c > 0 {
            sum += e(k as f64 / mm as f64) * c as f64;
        }
    }
    Ok(sum / mm as f64)
}

/// Forward-difference table for `P(n)` mod 1 in `64 L`-bit fixed point.
#[derive(Clone, Debug)]
struct Table<const L: usize> {
    d: Vec<Fixed<L>>,
}

impl<const L: usize> Table<L> {
    fn new(values: &[SymbolicReal], basis: &Basis) -> Result<Self> {
        let d = values
            .iter()
            .map(|v| Ok(Fixed::<L>::from_biguint(&v.frac_bits(basis, Fixed::<L>::BITS)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Table { d })
    }

    #[inline]
    fn advance(&mut self) {
        for j in 0..self.d.len().saturating_sub(1) {
            let next = self.d[j + 1];
            self.d[j].add_assign(&next);
        }
    }
}

#[derive(Clone, Debug)]
enum Width {
    W2(Table<2>),
    W4(Table<4>),
    W8(Table<8>),
    W16(Table<16>),
}

/// Steps `P(start), P(start+1), ...` mod 1 with additions only.
///
/// Rounding of the initial table is the only error source; the width is
/// chosen so that after `steps` advances the phase is still good to about
/// 60 bits.
#[derive(Clone, Debug)]
pub struct PhaseStepper {
    width: Width,
}

macro_rules! with_table {
    ($w:expr, $t:ident => $body:expr) => {
        match $w {
            Width::W2($t) => $body,
            Width::W4($t) => $body,
            Width::W8($t) => $body,
            Width::W16($t) => $body,
        }
    };
}

impl PhaseStepper {
    pub fn new(p: &SymPoly, start: &BigInt, steps: u64, basis: &Basis) -> Result<Self> {
        let deg = p.degree().unwrap_or(0);
        let growth = deg as f64 * ((steps as f64) + 1.0).log2();
        let need = 64.0 + growth + 8.0;
        // Exact forward differences at `start`.
        let mut vals: Vec<SymbolicReal> = (0..=deg)
            .map(|i| p.eval(&(start + BigInt::from(i))))
            .collect();
        for j in 1..=deg {
            for i in (j..=deg).rev() {
                vals[i] = &vals[i] - &vals[i - 1];
            }
        }
        let width = if need <= 128.0 {
            Width::W2(Table::new(&vals, basis)?)
        } else if need <= 256.0 {
            Width::W4(Table::new(&vals, basis)?)
        } else if need <= 512.0 {
            Width::W8(Table::new(&vals, basis)?)
        } else if need <= 1024.0 {
            Width::W16(Table::new(&vals, basis)?)
        } else {
            return Err(Error::Precision(format!(
                "degree {deg} over {steps} steps needs {need:.0} bits of phase"
            )));
        };
        Ok(PhaseStepper { width })
    }

    /// Current phase in `[0, 1)`.
    #[inline]
    pub fn phase(&self) -> f64 {
        with_table!(&self.width, t => t.d.first().map_or(0.0, Fixed::to_f64))
    }

    /// Current phase as a 64-bit fraction.
    #[inline]
    pub fn phase_u64(&self) -> u64 {
        with_table!(&self.width, t => t.d.first().map_or(0, Fixed::top))
    }

    #[inline]
    pub fn advance(&mut self) {
        with_table!(&mut self.width, t => t.advance())
    }
}

/// Splits `[m, n)` into `CHUNK`-sized ranges.
pub(crate) fn chunks(m: u64, n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = m;
    while a < n {
        let b = (a + CHUNK).min(n);
        out.push((a, b));
        a = b;
    }
    out
}

/// `(1/(n-m)) sum_{m <= k < n} e(P(k))` by stepping; chunks run in
/// parallel and partial sums are added in chunk order.
pub fn empirical_phase_average(p: &SymPoly, m: u64, n: u64, basis: &Basis) -> Result<Complex64> {
    if n <= m {
        return Err(Error::InvalidArgument(format!("empty range [{m}, {n})")));
    }
    let parts = chunks(m, n)
        .into_par_iter()
        .map(|(a, b)| {
            let mut st = PhaseStepper::new(p, &BigInt::from(a), b - a, basis)?;
            let mut s = Complex64::zero();
            for _ in a..b {
                s += e(st.phase());
                st.advance();
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: Complex64 = parts.into_iter().fold(Complex64::zero(), |a, b| a + b);
    Ok(total / (n - m) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> SymbolicReal {
        SymbolicReal::ratio(n, d)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn limit_examples() {
        let b = Basis::default();
        let sqrt2 = SymbolicReal::basis(0);
        assert_eq!(phase_limit(&SymPoly::monomial(sqrt2.clone(), 2), &b).unwrap(), Complex64::zero());
        assert!(close(phase_limit(&SymPoly::monomial(q(1, 2), 1), &b).unwrap(), Complex64::zero(), 1e-15));
        let c = SymPoly::constant(q(1, 8));
        assert!(close(phase_limit(&c, &b).unwrap(), e(0.125), 1e-15));
    }

    #[test]
    fn limit_matches_brute_period() {
        let b = Basis::default();
        // (n^3 + 5n)/12 + n^2/9 + 1/7: period 36, split as 4 * 9.
        let p = SymPoly::new(vec![q(1, 7), q(5, 12), q(1, 9), q(1, 12)]);
        let mut brute = Complex64::zero();
        for n in 0..36 {
            brute += e(p.eval(&BigInt::from(n)).frac_f64(&b).unwrap());
        }
        brute /= 36.0;
        assert!(close(phase_limit(&p, &b).unwrap(), brute, 1e-12));
    }

    #[test]
    fn stepper_matches_direct_evaluation() {
        let b = Basis::default();
        let s2 = SymbolicReal::basis(0);
        let s3 = SymbolicReal::basis(1);
        let p = SymPoly::new(vec![
            q(1, 3),
            s3.clone(),
            q(2, 7),
            (&s2 + &q(1, 5)),
            SymbolicReal::zero(),
            s3.scale(&BigRational::new(3.into(), 11.into())),
            s2.scale(&BigRational::new((-7).into(), 3.into())),
        ]);
        let start = 999_000u64;
        let steps = 1_000u64;
        let mut st = PhaseStepper::new(&p, &BigInt::from(start), steps, &b).unwrap();
        for k in 0..=steps {
            if k % 97 == 0 || k == steps {
                let exact = p.eval(&BigInt::from(start + k)).frac_f64(&b).unwrap();
                let got = st.phase();
                let diff = (exact - got).abs().min(1.0 - (exact - got).abs());
                assert!(diff < 1e-12, "k={k}: {exact} vs {got}");
            }
            st.advance();
        }
    }

    #[test]
    fn trivial_phase_gives_exactly_one() {
        let b = Basis::default();
        assert_eq!(empirical_phase_average(&SymPoly::zero(), 0, 100_000, &b).unwrap(), Complex64::new(1.0, 0.0));
    }
}
