use polyerg::congruence::{intersective_verdict, DEFAULT_EXPONENT_CAP};
use polyerg::IntPolynomial;

fn main() -> polyerg::Result<()> {
    for src in ["(n^2-13)*(n^2-17)*(n^2-221)", "(n^3-19)*(n^2+n+1)", "n^2-2", "n^2+1"] {
        let p: IntPolynomial = src.parse()?;
        let v = intersective_verdict(&p, 100, DEFAULT_EXPONENT_CAP)?;
        print!("{src}: {}", v.status.label());
        if let Some(m) = &v.witness_modulus {
            print!(" (no root mod {m})");
        }
        println!();
        for c in v.certificates.values().take(4) {
            println!(
                "  q = {:>2}: root {} found mod q^{}, v(f) = {:?}, v(f') = {:?}",
                c.prime, c.base_root, c.found_at_exponent, c.valuation_f, c.valuation_df
            );
        }
    }
    Ok(())
}
