use polyerg::dynamics::{Basis, SymbolicReal};
use polyerg::extremal::{max_solution_free, run_counterexample, Construction, SearchMode};

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    for (c, n) in [(Construction::First, 32), (Construction::Second, 24)] {
        let lambda = max_solution_free(&c.required_equations(), n, SearchMode::Exact)?;
        let r = run_counterexample(c, &lambda, &SymbolicReal::basis(0), None, 1..=100, &basis)?;
        let worst = r.rows.iter().map(|row| row.correlation).fold(0.0, f64::max);
        println!(
            "{:?}: Λ = {:?}, mu(A) = {:.3e}, bound {:.3e}, max correlation {:.3e}, holds {}",
            c, r.lambda, r.mu_a, r.bound, worst, r.bound_satisfied
        );
    }
    Ok(())
}
