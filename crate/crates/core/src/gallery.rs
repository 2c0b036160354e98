//! Worked examples re-run against embedded goldens.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::classification::classify;
use crate::congruence::{intersective_verdict, VerdictStatus};
use crate::dynamics::{analytic_multiple_limit, empirical_multiple_average, Basis, Character, SymbolicReal, UnipotentAffineMap};
use crate::error::Result;
use crate::report::{complex, Provenance};
use crate::PolyFamily;

pub const LIMIT_N: u64 = 1_000_000;
pub const LIMIT_TOLERANCE: f64 = 0.02;
pub const CONGRUENCE_PRIME_BOUND: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryRow {
    pub section: &'static str,
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl GalleryRow {
    pub fn to_json(&self) -> Value {
        json!({
            "section": self.section,
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.pass,
        })
    }
}

/// `(label, family, weyl complexity, family type, smallest factor)`.
pub const CLASSIFICATION_GOLDENS: [(&str, [&str; 3], u8, &str, &str); 6] = [
    ("a", ["n", "n^2", "n^3"], 1, "LinearlyIndependent", "KRat"),
    ("b", ["n", "n^2", "n^2+n"], 2, "Generic", "Kronecker"),
    ("c", ["n", "2n", "n^3"], 2, "Generic", "Kronecker"),
    ("d", ["n", "2n", "n^2"], 3, "E2", "Affine2"),
    ("e", ["n", "2n", "3n"], 3, "E1", "Nil2"),
    ("e", ["n^2", "2n^2", "3n^2"], 3, "E1", "Nil2"),
];

pub const EXCEPTIONAL_GOLDENS: [([&str; 3], bool); 3] = [
    (["2n", "3n", "4n"], true),
    (["n", "2n", "3n"], false),
    (["n", "2n", "n^2"], true),
];

/// `(polynomial, status, witness modulus)`.
pub const CONGRUENCE_GOLDENS: [(&str, &str, Option<u64>); 3] = [
    ("(n^2-13)*(n^2-17)*(n^2-221)", "CertifiedSolvable", None),
    ("(n^3-19)*(n^2+n+1)", "CertifiedSolvable", None),
    ("n^2-2", "UnsolvableWitness", Some(4)),
];

fn classification_rows() -> Result<Vec<GalleryRow>> {
    let mut rows = Vec::new();
    for (label, fam, w, ty, factor) in CLASSIFICATION_GOLDENS {
        let c = classify(&PolyFamily::parse(&fam)?)?;
        let expected = json!({ "weyl_complexity": w, "family_type": ty, "smallest_factor": factor });
        let actual = json!({
            "weyl_complexity": c.weyl_complexity.value(),
            "family_type": c.family_type.tag(),
            "smallest_factor": c.smallest_factor.to_string(),
        });
        rows.push(GalleryRow {
            section: "classification",
            name: format!("({label}) {{{}}}", fam.join(", ")),
            pass: expected == actual,
            expected,
            actual,
        });
    }
    for (fam, exceptional) in EXCEPTIONAL_GOLDENS {
        let c = classify(&PolyFamily::parse(&fam)?)?;
        let expected = json!(exceptional);
        let actual = json!(c.lower_bound_exceptional);
        rows.push(GalleryRow {
            section: "exceptional",
            name: format!("{{{}}}", fam.join(", ")),
            pass: expected == actual,
            expected,
            actual,
        });
    }
    Ok(rows)
}

fn congruence_rows() -> Result<Vec<GalleryRow>> {
    CONGRUENCE_GOLDENS
        .iter()
        .map(|&(p, status, modulus)| {
            let v = intersective_verdict(&p.parse()?, CONGRUENCE_PRIME_BOUND, crate::congruence::DEFAULT_EXPONENT_CAP)?;
            let certified = v.status != VerdictStatus::CertifiedSolvable || v.certificates.values().all(|c| c.check());
            let expected = json!({ "status": status, "witness_modulus": modulus.map(|m| m.to_string()) });
            let actual = json!({
                "status": v.status.label(),
                "witness_modulus": v.witness_modulus.as_ref().map(ToString::to_string),
            });
            Ok(GalleryRow { section: "congruence", name: p.to_string(), pass: expected == actual && certified, expected, actual })
        })
        .collect()
}

fn limit_row(seed: u64) -> Result<GalleryRow> {
    let basis = Basis::default();
    let t = UnipotentAffineMap::rotation(vec![SymbolicReal::basis(0)])?;
    let f = PolyFamily::parse(&["n", "n^2", "n^3"])?;
    let chars = vec![Character::new(vec![1]); 3];
    let analytic = analytic_multiple_limit(&t, &f, &chars, &[SymbolicReal::zero()], &basis)?;
    let emp = empirical_multiple_average(&t, &f, &chars, &[0.0], 0, LIMIT_N, &basis)?;
    let err = (emp - analytic).norm();
    Ok(GalleryRow {
        section: "verify-limit",
        name: "rotation by sqrt2, {n, n^2, n^3}, characters (1, 1, 1)".into(),
        expected: json!({ "analytic": complex(Complex64::new(0.0, 0.0), Provenance::Analytic), "tolerance": LIMIT_TOLERANCE }),
        actual: json!({
            "analytic": complex(analytic, Provenance::Analytic),
            "empirical": complex(emp, Provenance::Empirical { n: LIMIT_N, seed }),
            "abs_error": err,
        }),
        pass: analytic == Complex64::new(0.0, 0.0) && err < LIMIT_TOLERANCE,
    })
}

pub fn gallery(seed: u64) -> Result<Vec<GalleryRow>> {
    let mut rows = classification_rows()?;
    rows.extend(congruence_rows()?);
    rows.push(limit_row(seed)?);
    Ok(rows)
}
