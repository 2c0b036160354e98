//! Behrend's digit construction of progression-free sets, and least-squares
//! estimates of equation types.

use std::collections::BTreeMap;

use serde::Serialize;

use super::equation::LinearEquation;
use super::search::{max_solution_free, SearchMode, SolutionFreeSet, EXACT_LIMIT};
use crate::error::{Error, Result};

/// Values in `[0, n)` whose base-`(2d-1)` digits are all `< d`.
fn small_digit_values(n: u64, d: u64) -> Vec<(u64, u64)> {
    let base = 2 * d - 1;
    let mut out = vec![(0u64, 0u64)];
    let mut place = 1u64;
    while place < n {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for &(v, norm) in &out {
            for digit in 0..d {
                let x = v + digit * place;
                if x < n {
                    next.push((x, norm + digit * digit));
                }
            }
        }
        out = next;
        place = match place.checked_mul(base) {
            Some(p) => p,
            None => break,
        };
    }
    out
}

/// Largest fixed-norm class of small-digit values in `[0, n)`; for `d = 2`
/// all values at once.
pub fn sphere(n: u64, d: u64) -> Vec<u64> {
    let vals = small_digit_values(n, d);
    if d == 2 {
        return vals.iter().map(|&(v, _)| v).collect();
    }
    let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (v, norm) in vals {
        groups.entry(norm).or_default().push(v);
    }
    groups.into_values().max_by_key(Vec::len).unwrap_or_default()
}

/// Best set over the digit bound `d` and the squared norm, shifted into
/// `{1..n}`. For `d = 2` every norm can be taken at once.
pub fn behrend_elements(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut best: Vec<u64> = vec![1];
    let mut d = 2;
    loop {
        let candidate = sphere(n, d);
        if candidate.len() > best.len() {
            best = candidate.iter().map(|v| v + 1).collect();
        }
        // One-digit spheres are single points.
        if (2 * d + 1) * (2 * d + 1) > n {
            break;
        }
        d += 1;
    }
    best.sort_unstable();
    best
}

pub fn behrend_set(n: u64) -> Result<SolutionFreeSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    SolutionFreeSet::new(n, behrend_elements(n), vec![LinearEquation::three_ap()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMode {
    /// Exact up to the search budget, greedy beyond.
    Exact,
    Greedy,
    /// Behrend sets; only for `x + y = 2z`.
    Behrend,
}

impl std::str::FromStr for EstimateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EstimateMode::Exact),
            "greedy" => Ok(EstimateMode::Greedy),
            "behrend" => Ok(EstimateMode::Behrend),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}; use exact, greedy or behrend"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeSample {
    pub n: u64,
    pub size: usize,
    pub exact: bool,
}

/// Empirical lower estimate of the type.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeEstimate {
    pub samples: Vec<TypeSample>,
    /// Slope of `log size` against `log N`, clamped to `[0, 1]`; absent with
    /// fewer than two distinct `N`.
    pub fitted_exponent: Option<f64>,
}

pub fn fit_exponent(points: &[(u64, usize)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, s)| *n >= 1 && *s >= 1)
        .map(|&(n, s)| ((n as f64).ln(), (s as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some((sxy / sxx).clamp(0.0, 1.0))
}

pub fn type_estimate(eq: &LinearEquation, ns: &[u64], mode: EstimateMode) -> Result<TypeEstimate> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N list must be strictly ascending".into()));
    }
    if mode == EstimateMode::Behrend && !eq.equivalent(&LinearEquation::three_ap()) {
        return Err(Error::InvalidArgument("Behrend mode only applies to x + y = 2z".into()));
    }
    let eqs = [eq.clone()];
    let samples = ns
        .iter()
        .map(|&n| {
            Ok(match mode {
                EstimateMode::Behrend => TypeSample { n, size: behrend_set(n)?.len(), exact: false },
                EstimateMode::Exact if n <= EXACT_LIMIT => {
                    TypeSample { n, size: max_solution_free(&eqs, n, SearchMode::Exact)?.len(), exact: true }
                }
                _ => TypeSample { n, size: max_solution_free(&eqs, n, SearchMode::Greedy)?.len(), exact: false },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(u64, usize)> = samples.iter().map(|s| (s.n, s.size)).collect();
    Ok(TypeEstimate { fitted_exponent: fit_exponent(&pts), samples })
}
