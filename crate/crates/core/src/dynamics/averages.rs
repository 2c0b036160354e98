//! Character-level multiple averages: exact limits, stepped empirical sums
//! and averages weighted by a step function of `n beta`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use super::fixed::u64_to_unit;
use super::orbit::UnipotentAffineMap;
use super::phase::{chunks, e, empirical_phase_average, phase_limit, PhaseStepper, SymPoly};
use super::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, PolyFamily};

/// `x -> e(frequency . x)` on `T^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub frequency: Vec<i64>,
}

impl Character {
    pub fn new(frequency: Vec<i64>) -> Self {
        Character { frequency }
    }

    pub fn trivial(dim: usize) -> Self {
        Character { frequency: vec![0; dim] }
    }

    pub fn is_trivial(&self) -> bool {
        self.frequency.iter().all(|&k| k == 0)
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        e(self.frequency.iter().zip(x).map(|(&k, &v)| k as f64 * v).sum())
    }
}

fn check_shapes(t: &UnipotentAffineMap, f: &PolyFamily, chars: &[Character]) -> Result<()> {
    if chars.len() != f.len() {
        return Err(Error::InvalidArgument(format!(
            "{} characters for {} polynomials",
            chars.len(),
            f.len()
        )));
    }
    if let Some(c) = chars.iter().find(|c| c.frequency.len() != t.dim()) {
        return Err(Error::InvalidArgument(format!(
            "frequency {:?} has length {}, map has dimension {}",
            c.frequency,
            c.frequency.len(),
            t.dim()
        )));
    }
    Ok(())
}

/// `sum_i freq_i . T^(p_i(n)) x` as a polynomial in `n`.
pub fn total_phase(
    t: &UnipotentAffineMap,
    f: &PolyFamily,
    chars: &[Character],
    x: &[SymbolicReal],
) -> Result<SymPoly> {
    check_shapes(t, f, chars)?;
    if x.len() != t.dim() {
        return Err(Error::InvalidArgument(format!(
            "initial point has length {}, map has dimension {}",
            x.len(),
            t.dim()
        )));
    }
    let orbit = t.orbit_closed_form();
    Ok(f.members()
        .iter()
        .zip(chars)
        .filter(|(_, c)| !c.is_trivial())
        .fold(SymPoly::zero(), |acc, (p, c)| acc.add(&orbit.character_phase(p, &c.frequency, x))))
}

pub fn analytic_multiple_limit(
    t: &UnipotentAffineMap,
    f: &PolyFamily,
    chars: &[Character],
    x: &[SymbolicReal],
    basis: &Basis,
) -> Result<Complex64> {
    if !t.is_rotation() && !t.is_quasi_standard() {
        return Err(Error::InvalidArgument(
            "limit formula needs a rotation or a quasi-standard map".into(),
        ));
    }
    phase_limit(&total_phase(t, f, chars, x)?, basis)
}

fn exact_point(x0: &[f64]) -> Result<Vec<SymbolicReal>> {
    x0.iter().map(|&v| SymbolicReal::from_f64(v)).collect()
}

/// `(1/(n-m)) sum_{m <= k < n} prod_i chi_i(T^(p_i(k)) x0)`.
pub fn empirical_multiple_average(
    t: &UnipotentAffineMap,
    f: &PolyFamily,
    chars: &[Character],
    x0: &[f64],
    m: u64,
    n: u64,
    basis: &Basis,
) -> Result<Complex64> {
    let phase = total_phase(t, f, chars, &exact_point(x0)?)?;
    empirical_phase_average(&phase, m, n, basis)
}

/// Finite step function on `[0, 1)`: value `values[i]` on
/// `[breaks[i], breaks[i+1])` with `breaks[0] = 0` and an implicit final 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<Complex64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() || breaks[0] != 0.0 {
            return Err(Error::InvalidArgument("step function needs breaks starting at 0".into()));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|&b| !(0.0..1.0).contains(&b)) {
            return Err(Error::InvalidArgument("breaks must increase inside [0, 1)".into()));
        }
        Ok(StepFunction { breaks, values })
    }

    pub fn constant(c: Complex64) -> Self {
        StepFunction { breaks: vec![0.0], values: vec![c] }
    }

    /// `1_[a, b)` for `0 <= a < b <= 1`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidArgument(format!("bad interval [{a}, {b})")));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut breaks = vec![0.0];
        let mut values = vec![if a == 0.0 { one } else { Complex64::zero() }];
        if a > 0.0 {
            breaks.push(a);
            values.push(one);
        }
        if b < 1.0 {
            breaks.push(b);
            values.push(Complex64::zero());
        }
        Ok(StepFunction { breaks, values })
    }

    /// `e(k x)` sampled at bin midpoints.
    pub fn character(k: i64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidArgument("need at least one bin".into()));
        }
        let w = 1.0 / bins as f64;
        Ok(StepFunction {
            breaks: (0..bins).map(|i| i as f64 * w).collect(),
            values: (0..bins).map(|i| e(k as f64 * (i as f64 + 0.5) * w)).collect(),
        })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        let i = self.breaks.partition_point(|&b| b <= x);
        self.values[i.max(1) - 1]
    }

    pub fn integral(&self) -> Complex64 {
        let mut ends = self.breaks[1..].to_vec();
        ends.push(1.0);
        self.breaks
            .iter()
            .zip(&ends)
            .zip(&self.values)
            .map(|((a, b), v)| v * (b - a))
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(1.0, 0.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedResult {
    pub weighted: Complex64,
    pub unweighted: Complex64,
    pub integral_h: Complex64,
    /// `integral_h * unweighted`.
    pub predicted: Complex64,
    pub warnings: Vec<String>,
}

/// `Some(p)` when the family is `{p, 2p, ..., kp}`.
pub fn progression_base(f: &PolyFamily) -> Option<IntPolynomial> {
    let p = f.members().first()?.clone();
    if p.is_constant() {
        return None;
    }
    f.members()
        .iter()
        .enumerate()
        .all(|(i, q)| *q == p.scale(&BigInt::from(i + 1)))
        .then_some(p)
}

/// `(1/n) sum_{k < n} h({k beta}) prod_i chi_i(T^(p_i(k)) x0)` next to the
/// plain average.
#[allow(clippy::too_many_arguments)]
pub fn weighted_average(
    t: &UnipotentAffineMap,
    f: &PolyFamily,
    chars: &[Character],
    x0: &[f64],
    h: &StepFunction,
    beta: &SymbolicReal,
    n: u64,
    basis: &Basis,
) -> Result<WeightedResult> {
    if !beta.is_irrational() {
        return Err(Error::InvalidArgument("beta must be irrational".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty range".into()));
    }
    let mut warnings = Vec::new();
    match progression_base(f) {
        None => warnings.push(format!("family {f} is not of the form {{p, 2p, ..., kp}}")),
        Some(p) if p.degree() <= Some(1) => {
            warnings.push(format!("base polynomial {p} has degree <= 1; factorization not expected"))
        }
        Some(_) => {}
    }
    let phase = total_phase(t, f, chars, &exact_point(x0)?)?;
    let rot = SymPoly::monomial(beta.clone(), 1);
    let parts = chunks(0, n)
        .into_par_iter()
        .map(|(a, b)| {
            let start = BigInt::from(a);
            let mut st = PhaseStepper::new(&phase, &start, b - a, basis)?;
            let mut sb = PhaseStepper::new(&rot, &start, b - a, basis)?;
            let (mut w, mut u) = (Complex64::zero(), Complex64::zero());
            for _ in a..b {
                let z = e(st.phase());
                u += z;
                w += h.eval(u64_to_unit(sb.phase_u64())) * z;
                st.advance();
                sb.advance();
            }
            Ok((w, u))
        })
        .collect::<Result<Vec<_>>>()?;
    let (w, u) = parts
        .into_iter()
        .fold((Complex64::zero(), Complex64::zero()), |(a, b), (c, d)| (a + c, b + d));
    let (weighted, unweighted) = (w / n as f64, u / n as f64);
    let integral_h = h.integral();
    Ok(WeightedResult { weighted, unweighted, integral_h, predicted: integral_h * unweighted, warnings })
}
