use num_bigint::BigInt;
use polyerg::{IntPolynomial, PolyFamily};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-9i64..=9, 1..=7).prop_map(|c| IntPolynomial::from_i64(&c))
}

fn nonzero_poly() -> impl Strategy<Value = IntPolynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn compose_affine_chains(p in poly(), r1 in 1u64..=5, r2 in 1u64..=5, s1 in 0u64..5, s2 in 0u64..5) {
        let (s1, s2) = (s1 % r1, s2 % r2);
        let lhs = p.compose_affine(r1, s1).unwrap().compose_affine(r2, s2).unwrap();
        // r1 s2 + s1 may reach r1 r2, outside the canonical range.
        let rhs = p.compose(&IntPolynomial::from_i64(&[(r1 * s2 + s1) as i64, (r1 * r2) as i64]));
        prop_assert_eq!(&lhs, &rhs);
        for n in -3i64..=3 {
            let inner = (r1 * r2) as i64 * n + (r1 * s2 + s1) as i64;
            prop_assert_eq!(lhs.eval_i64(n), p.eval_i64(inner));
        }
    }

    #[test]
    fn primitive_round_trip(p in nonzero_poly()) {
        let (sign, content, prim) = p.primitive_decompose().unwrap();
        let back = prim.scale(&(content.clone() * BigInt::from(sign)));
        prop_assert_eq!(back, p);
        prop_assert_eq!(prim.content(), BigInt::from(1));
        prop_assert!(*prim.leading().unwrap() > BigInt::from(0));
    }

    #[test]
    fn display_parses_back(p in poly()) {
        let q: IntPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn linear_rank_invariances(ps in prop::collection::vec(nonzero_poly(), 1..=4), k in prop_oneof![-5i64..=-1, 1i64..=5], idx in 0usize..4) {
        let f = PolyFamily::new(ps.clone());
        let r = f.linear_rank();
        let mut rev = ps.clone();
        rev.reverse();
        prop_assert_eq!(PolyFamily::new(rev).linear_rank(), r);
        let mut scaled = ps.clone();
        let i = idx % scaled.len();
        scaled[i] = scaled[i].scale(&BigInt::from(k));
        prop_assert_eq!(PolyFamily::new(scaled).linear_rank(), r);
    }
}
