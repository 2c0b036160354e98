use polyerg::extremal::{
    behrend_set, max_solution_free, type_estimate, EstimateMode, LinearEquation, SearchMode,
};

fn main() -> polyerg::Result<()> {
    let ap = LinearEquation::three_ap();
    let exact = max_solution_free(std::slice::from_ref(&ap), 9, SearchMode::Exact)?;
    println!("largest 3-AP-free subset of 1..9: {:?}", exact.elements);
    let b = behrend_set(729)?;
    println!("Behrend set at N = 729: {} elements, verified {}", b.len(), b.verified);
    let eq = LinearEquation::parse("1,8,-6,-3")?;
    for n in [16, 24, 32] {
        let s = max_solution_free(std::slice::from_ref(&eq), n, SearchMode::Exact)?;
        println!("{eq}, N = {n}: max {} via {:?}", s.len(), s.elements);
    }
    let est = type_estimate(&eq, &[10, 20, 40, 1000, 10_000], EstimateMode::Exact)?;
    println!("fitted exponent for {eq}: {:?}", est.fitted_exponent);
    Ok(())
}
