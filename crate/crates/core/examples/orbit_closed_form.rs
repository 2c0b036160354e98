use num_bigint::BigInt;
use polyerg::dynamics::{Basis, SymbolicReal, UnipotentAffineMap};

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    let t = UnipotentAffineMap::new(
        vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 3, 0]],
        vec![SymbolicReal::basis(0), SymbolicReal::ratio(1, 2), SymbolicReal::basis(2)],
    )?;
    let orbit = t.orbit_closed_form();
    for (i, line) in orbit.display(&basis, &["x", "y", "z"]).iter().enumerate() {
        println!("coordinate {i} of T^n: {line}");
    }
    for n in [0u64, 1, 7, 20] {
        assert_eq!(orbit.evaluate(&BigInt::from(n)), t.iterate(n));
    }
    println!("closed form agrees with iteration at n = 0, 1, 7, 20");
    let back = orbit.evaluate(&BigInt::from(-1));
    println!("T^-1 translation: {:?}", back.iter().map(|e| e.c.display(&basis)).collect::<Vec<_>>());
    Ok(())
}
