//! Finite-N bound chains for the two skew-product constructions built from
//! solution-free sets, and the transfer of orbit visits to integer sets.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::equation::LinearEquation;
use super::search::SolutionFreeSet;
use crate::dynamics::boxes::{box_correlation, AxisBox, BoxSet, SamplingConfig};
use crate::dynamics::fixed::u64_to_unit;
use crate::dynamics::orbit::UnipotentAffineMap;
use crate::dynamics::phase::{chunks, PhaseStepper};
use crate::dynamics::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, PolyFamily};

/// Slack for floating-point rounding in the slice integrals.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// `A = T × B`, shifts `2n, 3n, 4n`.
    First,
    /// `A = B × B`, shifts `n, 2n, n^2`.
    Second,
}

impl Construction {
    pub fn equation(self) -> LinearEquation {
        match self {
            Construction::First => LinearEquation::new(vec![1, 8, -6, -3]).expect("zero sum"),
            Construction::Second => LinearEquation::new(vec![2, 1, 1, -2, -2]).expect("zero sum"),
        }
    }

    pub fn required_equations(self) -> Vec<LinearEquation> {
        match self {
            Construction::First => vec![self.equation()],
            Construction::Second => vec![self.equation(), LinearEquation::three_ap()],
        }
    }

    pub fn family(self) -> PolyFamily {
        let s: &[&str] = match self {
            Construction::First => &["2n", "3n", "4n"],
            Construction::Second => &["n", "2n", "n^2"],
        };
        PolyFamily::parse(s).expect("fixed family")
    }

    /// `(spacing, width)`: `B = ∪_j [j/spacing, j/spacing + width)`.
    fn grid(self, n: u64) -> (f64, f64) {
        let n = n as f64;
        match self {
            Construction::First => (9.0 * n, 1.0 / (81.0 * n)),
            Construction::Second => (4.0 * n, 1.0 / (16.0 * n)),
        }
    }

    /// `c = (2 - δ)/(1 - δ)` or `d = c / 2`.
    pub fn exponent(self, delta: f64) -> Option<f64> {
        if !(0.0..1.0).contains(&delta) {
            return None;
        }
        let c = (2.0 - delta) / (1.0 - delta);
        Some(match self {
            Construction::First => c,
            Construction::Second => c / 2.0,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftRow {
    pub n: u64,
    pub correlation: f64,
    pub within_bound: bool,
    pub below_mu_power: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub construction: Construction,
    pub equations: Vec<String>,
    pub lambda: Vec<u64>,
    pub big_n: u64,
    pub mu_a: f64,
    /// `|Λ| / N^2`.
    pub bound: f64,
    pub delta: f64,
    pub delta_source: &'static str,
    pub exponent: Option<f64>,
    pub mu_a_power: Option<f64>,
    pub rows: Vec<ShiftRow>,
    pub bound_satisfied: bool,
}

/// The set `B` on the circle.
pub fn interval_union(construction: Construction, lambda: &SolutionFreeSet) -> Result<BoxSet> {
    let (spacing, width) = construction.grid(lambda.n);
    let intervals: Vec<(f64, f64)> = lambda
        .elements
        .iter()
        .map(|&j| (j as f64 / spacing, j as f64 / spacing + width))
        .collect();
    BoxSet::from_intervals(&intervals)
}

pub fn construction_set(construction: Construction, lambda: &SolutionFreeSet) -> Result<BoxSet> {
    let b = interval_union(construction, lambda)?;
    Ok(match construction {
        Construction::First => BoxSet::new(1, vec![AxisBox::new(vec![0.0], vec![1.0])?])?.product(&b),
        Construction::Second => b.product(&b),
    })
}

/// `(t, s) -> (t + α, s + 2t + α)`.
pub fn skew_map(alpha: &SymbolicReal) -> UnipotentAffineMap {
    UnipotentAffineMap::skew(alpha.clone(), 2, alpha.clone())
}

pub fn run_counterexample(
    construction: Construction,
    lambda: &SolutionFreeSet,
    alpha: &SymbolicReal,
    delta: Option<f64>,
    shifts: std::ops::RangeInclusive<u64>,
    basis: &Basis,
) -> Result<CounterexampleReport> {
    if !lambda.verified {
        return Err(Error::InvalidArgument("Λ has not been verified solution-free".into()));
    }
    for eq in construction.required_equations() {
        if !lambda.satisfies(&eq) {
            return Err(Error::InvalidArgument(format!("Λ is not certified free of solutions to {eq}")));
        }
    }
    if lambda.is_empty() {
        return Err(Error::InvalidArgument("Λ is empty".into()));
    }
    if !alpha.is_irrational() {
        return Err(Error::InvalidArgument("alpha must be irrational".into()));
    }
    let big_n = lambda.n;
    let size = lambda.len() as f64;
    let a = construction_set(construction, lambda)?;
    let mu_a = a.measure();
    let bound = size / (big_n as f64 * big_n as f64);
    let (delta, delta_source) = match delta {
        Some(d) => (d, "user"),
        None if big_n > 1 => (size.ln() / (big_n as f64).ln(), "fitted"),
        None => (0.0, "fitted"),
    };
    let exponent = construction.exponent(delta);
    let mu_a_power = exponent.map(|c| mu_a.powf(c));
    let t = skew_map(alpha);
    let family = construction.family();
    let rows = shifts
        .collect::<Vec<u64>>()
        .into_par_iter()
        .map(|n| {
            let c = box_correlation(&t, &a, &family, &BigInt::from(n), SamplingConfig::default(), basis)?;
            Ok(ShiftRow {
                n,
                correlation: c.value,
                within_bound: c.value <= bound + BOUND_SLACK,
                below_mu_power: mu_a_power.is_some_and(|p| c.value < p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleReport {
        construction,
        equations: lambda.equations.iter().map(ToString::to_string).collect(),
        lambda: lambda.elements.clone(),
        big_n,
        mu_a,
        bound,
        delta,
        delta_source,
        exponent,
        mu_a_power,
        bound_satisfied: rows.iter().all(|r| r.within_bound),
        rows,
    })
}

/// `{1 <= m <= n : T^m x0 ∈ A}`.
pub fn orbit_transfer(t: &UnipotentAffineMap, a: &BoxSet, x0: &[f64], n: u64, basis: &Basis) -> Result<Vec<u64>> {
    if x0.len() != t.dim() || a.dim() != t.dim() {
        return Err(Error::InvalidArgument("point, set and map dimensions differ".into()));
    }
    let x = x0.iter().map(|&v| SymbolicReal::from_f64(v)).collect::<Result<Vec<_>>>()?;
    let orbit = t.orbit_closed_form();
    let id = IntPolynomial::var();
    let coords: Vec<_> = (0..t.dim())
        .map(|r| {
            let mut e = vec![0; t.dim()];
            e[r] = 1;
            orbit.character_phase(&id, &e, &x)
        })
        .collect();
    let parts = chunks(1, n + 1)
        .into_par_iter()
        .map(|(lo, hi)| {
            let start = BigInt::from(lo);
            let mut st = coords
                .iter()
                .map(|p| PhaseStepper::new(p, &start, hi - lo, basis))
                .collect::<Result<Vec<_>>>()?;
            let mut y = vec![0.0; coords.len()];
            let mut hits = Vec::new();
            for m in lo..hi {
                for (yi, s) in y.iter_mut().zip(&st) {
                    *yi = u64_to_unit(s.phase_u64());
                }
                if a.contains(&y) {
                    hits.push(m);
                }
                st.iter_mut().for_each(PhaseStepper::advance);
            }
            Ok(hits)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Density of `{m : m, m + s_1, ..., m + s_k ∈ Λ}` among `1 <= m <= n - max s`.
pub fn pattern_density(lambda: &[u64], n: u64, shifts: &[u64]) -> Option<f64> {
    let span = shifts.iter().copied().max().unwrap_or(0);
    if span >= n {
        return None;
    }
    let mut member = vec![false; n as usize + 1];
    for &m in lambda {
        if m <= n {
            member[m as usize] = true;
        }
    }
    let window = n - span;
    let count = (1..=window)
        .filter(|&m| member[m as usize] && shifts.iter().all(|&s| member[(m + s) as usize]))
        .count();
    Some(count as f64 / window as f64)
}
