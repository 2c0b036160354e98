use polyerg::dynamics::{restricted_average, Basis, BoxSet, RestrictedOutcome, SymbolicReal, UnipotentAffineMap};
use polyerg::{IntPolynomial, PolyFamily};

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    let t = UnipotentAffineMap::rotation(vec![SymbolicReal::basis(0)])?;
    let a = BoxSet::from_intervals(&[(0.0, 0.2)])?;
    let f = PolyFamily::parse(&["n", "2n"])?;
    let q = IntPolynomial::var();
    for delta in [0.1, 0.03, 0.01] {
        match restricted_average(&t, &a, &f, &q, &q, delta, 10_000_000, &basis)? {
            RestrictedOutcome::Average { value, samples, .. } => {
                println!("delta = {delta}: {value:.6} over {samples} times; mu(A)^3 = {:.6}", a.measure().powi(3))
            }
            RestrictedOutcome::NoSamples { range } => println!("delta = {delta}: no times below {range}"),
        }
    }
    Ok(())
}
