mod common;

use polyerg::classification::{
    classify, detect_family_type, shift_reduce, smallest_factor, solve_e12_system, weyl_complexity_3,
};
use proptest::prelude::*;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 600, ..ProptestConfig::default() })]

    #[test]
    fn matches_bareiss_oracle(f in triple()) {
        let fam = family(&f);
        let sol = solve_e12_system(&fam).unwrap();
        prop_assert_eq!(sol.is_some(), oracle_e12(&f));
        if let Some(s) = &sol {
            prop_assert!(substitutes(&s.coeffs, &f));
        }
        let w = weyl_complexity_3(&fam).unwrap().value();
        prop_assert_eq!(w, oracle_weyl(&f));
        prop_assert_eq!(fam.linear_rank(), oracle_rank(&f));
        prop_assert_eq!(w == 1, fam.linear_rank() == 3);
        let ty = detect_family_type(&fam).unwrap();
        prop_assert_eq!(w == 3, ty.is_special());
    }

    #[test]
    fn shift_identity(f in triple()) {
        let fam = family(&f);
        let w = weyl_complexity_3(&fam).unwrap();
        prop_assert_eq!(w, weyl_complexity_3(&shift_reduce(&fam).unwrap()).unwrap());
    }

    #[test]
    fn permutation_and_scaling(f in triple(), c in 1i64..=5) {
        let fam = family(&f);
        let w = weyl_complexity_3(&fam).unwrap();
        let factor = smallest_factor(&fam).unwrap();
        for perm in PERMS {
            let g: Vec<Coeffs> = perm.iter().map(|&i| f[i].clone()).collect();
            prop_assert_eq!(weyl_complexity_3(&family(&g)).unwrap(), w);
            prop_assert_eq!(smallest_factor(&family(&g)).unwrap(), factor);
        }
        let scaled: Vec<Coeffs> = f.iter().map(|p| p.iter().map(|x| c * x).collect()).collect();
        prop_assert_eq!(weyl_complexity_3(&family(&scaled)).unwrap(), w);
    }

    #[test]
    fn witnesses_reconstruct(f in triple()) {
        let fam = family(&f);
        let ty = classify(&fam).unwrap().family_type;
        if let (Some(w), Some(rebuilt)) = (ty.witness(), ty.reconstruct()) {
            let tildes = fam.tilde_members();
            for (slot, &i) in w.permutation.iter().enumerate() {
                prop_assert_eq!(&rebuilt[slot], &tildes[i].to_rational());
            }
        }
    }
}

#[test]
fn corpus_reaches_every_type() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..600 {
        let f = triple().new_tree(&mut runner).unwrap().current();
        seen.insert(detect_family_type(&family(&f)).unwrap().tag());
    }
    for tag in ["LinearlyIndependent", "E1", "E2", "E3", "Generic"] {
        assert!(seen.contains(tag), "{tag} missing from {seen:?}");
    }
}
