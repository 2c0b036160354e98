use polyerg::dynamics::{
    analytic_multiple_limit, empirical_multiple_average, Basis, Character, SymbolicReal, UnipotentAffineMap,
};
use polyerg::PolyFamily;

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    let sqrt2 = SymbolicReal::basis(0);
    let t = UnipotentAffineMap::skew(sqrt2.clone(), 2, sqrt2);
    let f = PolyFamily::parse(&["n", "2n", "2n^2+n"])?;
    let x0 = [0.3, 0.7];
    let x: Vec<SymbolicReal> = x0.iter().map(|&v| SymbolicReal::from_f64(v)).collect::<Result<_, _>>()?;
    for freqs in [[[1, -2], [0, 1], [-1, 0]], [[0, 1], [0, 1], [0, -1]]] {
        let chars: Vec<Character> = freqs.iter().map(|f| Character::new(f.to_vec())).collect();
        let limit = analytic_multiple_limit(&t, &f, &chars, &x, &basis)?;
        println!("characters {freqs:?}: limit {limit:.6}");
        for n in [1_000u64, 100_000, 1_000_000] {
            let emp = empirical_multiple_average(&t, &f, &chars, &x0, 0, n, &basis)?;
            println!("  N = {n:>7}: {emp:.6}  |error| {:.2e}", (emp - limit).norm());
        }
    }
    Ok(())
}
