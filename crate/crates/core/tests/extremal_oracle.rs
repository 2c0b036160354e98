use polyerg::dynamics::{Basis, BoxSet, SymbolicReal, UnipotentAffineMap};
use polyerg::extremal::{behrend_set, max_solution_free, orbit_transfer, pattern_density, LinearEquation, SearchMode};
use proptest::prelude::*;

/// Largest 3AP-free subset of `{1..n}`, `n = 0..=20`.
const R3: [usize; 21] = [0, 1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9];

/// Masks of distinct-entry solutions inside `{1..n}`.
fn masks(coeffs: &[i64], n: u64) -> Vec<u32> {
    let k = coeffs.len();
    let mut out = Vec::new();
    let mut xs = vec![1u64; k];
    loop {
        let distinct = (0..k).all(|i| (i + 1..k).all(|j| xs[i] != xs[j]));
        let sum: i64 = coeffs.iter().zip(&xs).map(|(&a, &x)| a * x as i64).sum();
        if distinct && sum == 0 {
            out.push(xs.iter().fold(0u32, |m, &x| m | 1 << (x - 1)));
        }
        let mut i = 0;
        while i < k && xs[i] == n {
            xs[i] = 1;
            i += 1;
        }
        if i == k {
            break;
        }
        xs[i] += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn brute_max(eqs: &[&[i64]], n: u64) -> usize {
    let ms: Vec<u32> = eqs.iter().flat_map(|c| masks(c, n)).collect();
    (0u32..1 << n)
        .filter(|s| ms.iter().all(|&m| s & m != m))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

fn has_3ap(set: &[u64]) -> bool {
    let max = set.iter().copied().max().unwrap_or(0) as usize;
    let mut member = vec![false; max + 1];
    for &x in set {
        member[x as usize] = true;
    }
    set.iter().enumerate().any(|(i, &x)| {
        set[i + 1..].iter().any(|&z| (x + z) % 2 == 0 && member[((x + z) / 2) as usize])
    })
}

fn eqs(cs: &[&[i64]]) -> Vec<LinearEquation> {
    cs.iter().map(|c| LinearEquation::new(c.to_vec()).unwrap()).collect()
}

#[test]
fn exact_search_matches_known_r3() {
    for (n, &r) in R3.iter().enumerate().skip(1) {
        let s = max_solution_free(&[LinearEquation::three_ap()], n as u64, SearchMode::Exact).unwrap();
        assert_eq!(s.len(), r, "N = {n}");
        assert!(s.verified && s.maximum);
        assert!(!has_3ap(&s.elements));
    }
}

#[test]
fn exact_search_matches_subset_enumeration() {
    let systems: [&[&[i64]]; 5] = [
        &[&[1, 1, -2]],
        &[&[1, 2, -3]],
        &[&[1, 1, -2], &[1, 2, -3]],
        &[&[2, 3, -5]],
        &[&[1, 1, 1, -3]],
    ];
    for sys in systems {
        let top = if sys.iter().any(|c| c.len() > 3) { 10 } else { 15 };
        for n in 3..=top {
            let s = max_solution_free(&eqs(sys), n, SearchMode::Exact).unwrap();
            assert_eq!(s.len(), brute_max(sys, n), "{sys:?}, N = {n}");
            let ms: Vec<u32> = sys.iter().flat_map(|c| masks(c, n)).collect();
            let bits = s.elements.iter().fold(0u32, |m, &x| m | 1 << (x - 1));
            assert!(ms.iter().all(|&m| bits & m != m), "{sys:?}, N = {n}: {:?}", s.elements);
        }
    }
}

#[test]
fn behrend_sets_are_progression_free() {
    for n in [1u64, 10, 100, 729, 1000, 5000, 10_000] {
        let s = behrend_set(n).unwrap();
        assert!(s.verified, "N = {n}");
        assert!(s.elements.iter().all(|&x| (1..=n).contains(&x)));
        assert!(!has_3ap(&s.elements), "N = {n}");
    }
    assert_eq!(behrend_set(729).unwrap().len(), 64);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn exact_dominates_greedy(n in 3u64..=40, which in 0usize..3) {
        let eq = [&[1i64, 1, -2][..], &[1, 2, -3], &[1, 3, -4]][which];
        let e = eqs(&[eq]);
        let exact = max_solution_free(&e, n, SearchMode::Exact).unwrap();
        let greedy = max_solution_free(&e, n, SearchMode::Greedy).unwrap();
        prop_assert!(greedy.verified);
        prop_assert!(exact.len() >= greedy.len());
        prop_assert!(e[0].find_distinct_solution(&greedy.elements).is_none());
    }

    #[test]
    fn pattern_density_counts_patterns(
        lambda in prop::collection::btree_set(1u64..=60, 0..30),
        shifts in prop::collection::vec(0u64..8, 1..=3),
    ) {
        let lambda: Vec<u64> = lambda.into_iter().collect();
        let n = 60u64;
        let span = *shifts.iter().max().unwrap();
        let hits = (1..=n - span)
            .filter(|m| lambda.contains(m) && shifts.iter().all(|s| lambda.contains(&(m + s))))
            .count();
        let d = pattern_density(&lambda, n, &shifts).unwrap();
        prop_assert!((d - hits as f64 / (n - span) as f64).abs() < 1e-12);
    }
}

#[test]
fn orbit_visits_match_measure() {
    let basis = Basis::default();
    let n = 100_000;
    let rot = UnipotentAffineMap::rotation(vec![SymbolicReal::basis(0)]).unwrap();
    let a = BoxSet::from_intervals(&[(0.1, 0.25), (0.5, 0.7)]).unwrap();
    let hits = orbit_transfer(&rot, &a, &[0.0], n, &basis).unwrap();
    assert!((hits.len() as f64 / n as f64 - a.measure()).abs() < 0.01);
    assert!(hits.windows(2).all(|w| w[0] < w[1]) && hits.iter().all(|&m| (1..=n).contains(&m)));

    let skew = UnipotentAffineMap::skew(SymbolicReal::basis(0), 2, SymbolicReal::basis(0));
    let b = BoxSet::from_intervals(&[(0.0, 0.5)]).unwrap().product(&BoxSet::from_intervals(&[(0.2, 0.6)]).unwrap());
    let hits = orbit_transfer(&skew, &b, &[0.3, 0.1], n, &basis).unwrap();
    assert!((hits.len() as f64 / n as f64 - b.measure()).abs() < 0.01);
}
