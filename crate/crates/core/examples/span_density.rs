use polyerg::dynamics::span::box_count;
use polyerg::dynamics::{product_density, span_closure, substitution_invariance, Basis, SymPoly, SymbolicReal, VectorPoly};
use polyerg::IntPolynomial;

fn main() -> polyerg::Result<()> {
    let basis = Basis::default();
    let sqrt2 = SymbolicReal::basis(0);
    let n = IntPolynomial::var();
    let n2: IntPolynomial = "n^2".parse()?;
    let u = VectorPoly::from_int(&[n.clone(), n2.clone()], &sqrt2);
    let s = span_closure(&u);
    println!("u(n) = (n sqrt2, n^2 sqrt2): rank {} in T^{}", s.rank(), s.ambient);
    for p in ["n^2", "n^3+n", "2n"] {
        let p: IntPolynomial = p.parse()?;
        println!("  span unchanged under n -> {p}: {}", substitution_invariance(&u, &p)?);
    }
    // Orbit of (n beta, u(p(n))) with beta = sqrt2 and u(n) = n sqrt2.
    let u1 = VectorPoly::from_int(std::slice::from_ref(&n), &sqrt2);
    for p in [n2.clone(), "n^3".parse()?, n.clone()] {
        let dense = product_density(&sqrt2, &u1, &p)?;
        let pair = VectorPoly::new(vec![SymPoly::monomial(sqrt2.clone(), 1), u1.compose(&p).components[0].clone()]);
        let hit = box_count(&pair, 100_000, 16, &basis)?;
        println!("  p = {p}: dense {dense}, {hit}/256 cells hit by N = 1e5");
    }
    Ok(())
}
