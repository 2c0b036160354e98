use polyerg::dynamics::{weighted_average, Basis, Character, StepFunction, SymbolicReal, UnipotentAffineMap};
use polyerg::PolyFamily;

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    let t = UnipotentAffineMap::rotation(vec![SymbolicReal::basis(0)])?;
    let f = PolyFamily::parse(&["n^2", "2n^2"])?;
    let chars = vec![Character::new(vec![2]), Character::new(vec![-1])];
    let beta = SymbolicReal::basis(1);
    for (name, h) in [
        ("1_[1/4,3/4)", StepFunction::indicator(0.25, 0.75)?),
        ("e(2x) on 64 bins", StepFunction::character(2, 64)?),
    ] {
        let w = weighted_average(&t, &f, &chars, &[0.1], &h, &beta, 1_000_000, &basis)?;
        println!(
            "h = {name}: weighted {:.6}, predicted {:.6}, gap {:.2e}",
            w.weighted,
            w.predicted,
            (w.weighted - w.predicted).norm()
        );
    }
    Ok(())
}
