//! Largest subsets of `{1..N}` with no distinct-entry solution of a family
//! of zero-sum equations.

use rayon::prelude::*;
use serde::Serialize;

use super::equation::LinearEquation;
use crate::error::{Error, Result};

pub const EXACT_LIMIT: u64 = 40;
pub const GREEDY_LIMIT: u64 = 100_000;
/// Tuple budget for the exhaustive recheck.
pub const VERIFY_BUDGET: f64 = 2e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Greedy,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SearchMode::Exact),
            "greedy" => Ok(SearchMode::Greedy),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}; use exact or greedy"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFreeSet {
    pub n: u64,
    pub elements: Vec<u64>,
    pub equations: Vec<LinearEquation>,
    /// An exhaustive recheck found no solution.
    pub verified: bool,
    /// Certified maximum size.
    pub maximum: bool,
}

impl SolutionFreeSet {
    /// Checks the invariants and runs the exhaustive recheck.
    pub fn new(n: u64, mut elements: Vec<u64>, equations: Vec<LinearEquation>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) || elements.last().is_some_and(|&e| e > n) {
            return Err(Error::InvalidArgument(format!("elements must lie in 1..={n}")));
        }
        let mut s = SolutionFreeSet { n, elements, equations, verified: false, maximum: false };
        s.verified = s.recheck().is_some_and(|w| w.is_none());
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `None` when over budget, `Some(None)` when clean, otherwise a solution.
    pub fn recheck(&self) -> Option<Option<(usize, Vec<u64>)>> {
        let cost: f64 = self
            .equations
            .iter()
            .map(|e| (self.len() as f64).powi(e.len() as i32 - 1))
            .sum();
        if cost > VERIFY_BUDGET {
            return None;
        }
        Some(
            self.equations
                .iter()
                .enumerate()
                .find_map(|(i, e)| e.find_distinct_solution(&self.elements).map(|s| (i, s))),
        )
    }

    pub fn satisfies(&self, eq: &LinearEquation) -> bool {
        self.equations.iter().any(|e| e.equivalent(eq))
    }
}

/// Bitmasks (bit `x - 1` for element `x`) of all distinct-entry solutions
/// inside `{1..n}`, `n <= 64`.
pub fn solution_masks(eqs: &[LinearEquation], n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for eq in eqs {
        let c = eq.coeffs();
        let k = c.len();
        let last = c[k - 1];
        let mut xs = vec![0u64; k];
        fn rec(c: &[i64], last: i64, n: u64, xs: &mut [u64], depth: usize, acc: i64, out: &mut Vec<u64>) {
            let k = c.len();
            if depth == k - 1 {
                if (-acc) % last != 0 {
                    return;
                }
                let x = -acc / last;
                if x < 1 || x as u64 > n {
                    return;
                }
                xs[k - 1] = x as u64;
                let mut mask = 0u64;
                for &v in xs.iter() {
                    let b = 1u64 << (v - 1);
                    if mask & b != 0 {
                        return;
                    }
                    mask |= b;
                }
                out.push(mask);
                return;
            }
            for v in 1..=n {
                if xs[..depth].contains(&v) {
                    continue;
                }
                xs[depth] = v;
                rec(c, last, n, xs, depth + 1, acc + c[depth] * v as i64, out);
            }
        }
        rec(c, last, n, &mut xs, 0, 0, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

struct Level<'a> {
    l: u64,
    target: usize,
    best: &'a [usize],
    /// `by_key[v]`: masks whose largest element other than `l` is `v`.
    by_key: Vec<Vec<u64>>,
}

impl Level<'_> {
    fn conflicts(&self, set: u64, v: u64) -> bool {
        let with = set | 1 << (v - 1);
        self.by_key[v as usize].iter().any(|&m| m & !with == 0)
    }

    /// Adds elements from `v..l` to `set` (which holds `1`, `l` and
    /// `size - 1` elements below `v`) until `target` is reached.
    fn dfs(&self, set: u64, size: usize, v: u64) -> Option<u64> {
        if size == self.target {
            return Some(set);
        }
        if v >= self.l || size - 1 + self.best[(self.l - v + 1) as usize] < self.target {
            return None;
        }
        if !self.conflicts(set, v) {
            if let Some(s) = self.dfs(set | 1 << (v - 1), size + 1, v + 1) {
                return Some(s);
            }
        }
        self.dfs(set, size, v + 1)
    }
}

fn mask_elements(mask: u64) -> Vec<u64> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Exact maximum by levels: `best[l]` is the maximum inside `{1..l}`, and a
/// set beating `best[l-1]` must contain both `1` and `l`.
fn exact(eqs: &[LinearEquation], n: u64) -> Vec<u64> {
    let masks = solution_masks(eqs, n);
    let mut best = vec![0usize; n as usize + 1];
    let mut witness = 0u64;
    for l in 1..=n {
        if l == 1 {
            best[1] = 1;
            witness = 1;
            continue;
        }
        let mut by_key = vec![Vec::new(); l as usize + 1];
        let top = 1u64 << (l - 1);
        for &m in &masks {
            if m >> l != 0 {
                continue;
            }
            let rest = m & !top;
            let key = 64 - rest.leading_zeros() as u64;
            by_key[key as usize].push(m);
        }
        let level = Level { l, target: best[l as usize - 1] + 1, best: &best, by_key };
        let base = 1u64 | top;
        let found = if level.target == 2 {
            Some(base)
        } else {
            (2..l).into_par_iter().find_map_first(|v| {
                if level.conflicts(base, v) {
                    return None;
                }
                let set = base | 1 << (v - 1);
                level.dfs(set, 3, v + 1)
            })
        };
        match found {
            Some(s) => {
                best[l as usize] = level.target;
                witness = s;
            }
            None => best[l as usize] = best[l as usize - 1],
        }
    }
    mask_elements(witness)
}

/// Ascending scan; each accepted element forbids every later value that
/// would complete a solution.
fn greedy(eqs: &[LinearEquation], n: u64) -> Vec<u64> {
    let mut forbidden = vec![false; n as usize + 1];
    let mut set: Vec<u64> = Vec::new();
    for v in 1..=n {
        if forbidden[v as usize] {
            continue;
        }
        for eq in eqs {
            let c = eq.coeffs();
            let k = c.len();
            for i in 0..k {
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    let others: Vec<i64> = (0..k).filter(|&p| p != i && p != j).map(|p| c[p]).collect();
                    mark(&others, &set, c[i] as i128 * v as i128, c[j] as i128, v, n, &mut Vec::new(), &mut forbidden);
                }
            }
        }
        set.push(v);
    }
    set
}

#[allow(clippy::too_many_arguments)]
fn mark(others: &[i64], set: &[u64], acc: i128, cj: i128, v: u64, n: u64, used: &mut Vec<u64>, forbidden: &mut [bool]) {
    if used.len() == others.len() {
        if (-acc) % cj != 0 {
            return;
        }
        let w = -acc / cj;
        if w > v as i128 && w <= n as i128 {
            forbidden[w as usize] = true;
        }
        return;
    }
    let a = others[used.len()] as i128;
    for &x in set {
        if used.contains(&x) {
            continue;
        }
        used.push(x);
        mark(others, set, acc + a * x as i128, cj, v, n, used, forbidden);
        used.pop();
    }
}

pub fn max_solution_free(eqs: &[LinearEquation], n: u64, mode: SearchMode) -> Result<SolutionFreeSet> {
    if eqs.is_empty() {
        return Err(Error::InvalidArgument("no equation given".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let (elements, maximum) = match mode {
        SearchMode::Exact => {
            if n > EXACT_LIMIT {
                return Err(Error::Budget(format!(
                    "exact search is limited to N <= {EXACT_LIMIT}; use --mode greedy for a lower bound"
                )));
            }
            (exact(eqs, n), true)
        }
        SearchMode::Greedy => {
            if n > GREEDY_LIMIT {
                return Err(Error::Budget(format!("greedy search is limited to N <= {GREEDY_LIMIT}")));
            }
            (greedy(eqs, n), false)
        }
    };
    let mut s = SolutionFreeSet::new(n, elements, eqs.to_vec())?;
    s.maximum = maximum;
    if s.recheck().is_some_and(|w| w.is_some()) {
        return Err(Error::Internal("search returned a set containing a solution".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> LinearEquation {
        LinearEquation::parse(s).unwrap()
    }

    #[test]
    fn three_ap_small() {
        let ap = [LinearEquation::three_ap()];
        let s = max_solution_free(&ap, 9, SearchMode::Exact).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.verified && s.maximum);
        // r_3(N) for N = 1..20.
        let known = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9];
        for (i, &r) in known.iter().enumerate() {
            assert_eq!(max_solution_free(&ap, i as u64 + 1, SearchMode::Exact).unwrap().len(), r, "N={}", i + 1);
        }
    }

    #[test]
    fn greedy_is_stanley_sequence() {
        let s = max_solution_free(&[LinearEquation::three_ap()], 30, SearchMode::Greedy).unwrap();
        assert_eq!(s.elements, vec![1, 2, 4, 5, 10, 11, 13, 14, 28, 29]);
        assert!(s.verified && !s.maximum);
    }

    #[test]
    fn exact_dominates_greedy() {
        for e in ["1,8,-6,-3", "1,2,-1,-2", "2,1,1,-2,-2"] {
            let e = [eq(e)];
            for n in [6, 10, 14] {
                let x = max_solution_free(&e, n, SearchMode::Exact).unwrap();
                let g = max_solution_free(&e, n, SearchMode::Greedy).unwrap();
                assert!(x.len() >= g.len());
            }
        }
    }

    #[test]
    fn exact_budget() {
        assert!(matches!(max_solution_free(&[LinearEquation::three_ap()], 41, SearchMode::Exact), Err(Error::Budget(_))));
    }

    #[test]
    fn bad_sets_are_not_verified() {
        let s = SolutionFreeSet::new(10, vec![1, 2, 3], vec![LinearEquation::three_ap()]).unwrap();
        assert!(!s.verified);
        assert!(SolutionFreeSet::new(10, vec![0, 2], vec![LinearEquation::three_ap()]).is_err());
    }
}
