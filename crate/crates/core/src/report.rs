//! JSON reports with a provenance block, and CSV time series.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::classification::{ClassificationResult, TypeWitness};
use crate::congruence::{CongruenceVerdict, HenselCertificate};
use crate::extremal::SolutionFreeSet;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "n_or_N,empirical_re,empirical_im,analytic_re,analytic_im,abs_error";

/// Where a number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Analytic,
    Empirical { n: u64, seed: u64 },
}

impl Provenance {
    pub fn label(self) -> String {
        match self {
            Provenance::Exact => "exact".into(),
            Provenance::Analytic => "analytic".into(),
            Provenance::Empirical { n, seed } => format!("empirical({n}, {seed})"),
        }
    }
}

pub fn real(v: f64, p: Provenance) -> Value {
    json!({ "value": v, "provenance": p.label() })
}

pub fn complex(z: Complex64, p: Provenance) -> Value {
    json!({ "re": z.re, "im": z.im, "abs": z.norm(), "provenance": p.label() })
}

pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("json values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Assembles `{schema_version, command, config, <body>, provenance}`.
pub fn envelope(command: &str, config: Value, body: Map<String, Value>, wall_time: Option<f64>) -> Value {
    let mut prov = Map::new();
    prov.insert("tool".into(), json!("polyerg"));
    prov.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    prov.insert("config_sha256".into(), json!(config_hash(&config)));
    if let Some(t) = wall_time {
        prov.insert("wall_time_s".into(), json!(t));
    }
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out.insert("config".into(), config);
    out.extend(body);
    out.insert("provenance".into(), Value::Object(prov));
    Value::Object(out)
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Twelve significant digits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub n: u64,
    pub empirical: Complex64,
    pub analytic: Option<Complex64>,
}

impl SeriesRow {
    pub fn abs_error(&self) -> Option<f64> {
        self.analytic.map(|a| (self.empirical - a).norm())
    }
}

pub fn csv(rows: &[SeriesRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(fmt12).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            fmt12(r.empirical.re),
            fmt12(r.empirical.im),
            opt(r.analytic.map(|a| a.re)),
            opt(r.analytic.map(|a| a.im)),
            opt(r.abs_error()),
        ));
    }
    out
}

fn witness_json(w: &TypeWitness) -> Value {
    json!({
        "p": w.p.to_string(),
        "k": w.k.to_string(),
        "l": w.l.to_string(),
        "m": w.m.to_string(),
        "r": w.r.to_string(),
        "integral": w.integral,
        "permutation": w.permutation,
    })
}

pub fn classification_json(c: &ClassificationResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("weyl_complexity".into(), json!(c.weyl_complexity.value()));
    m.insert("family_type".into(), json!(c.family_type.tag()));
    m.insert("witness".into(), c.family_type.witness().map(witness_json).unwrap_or(Value::Null));
    m.insert("smallest_factor".into(), json!(c.smallest_factor.to_string()));
    m.insert("lower_bound_exceptional".into(), json!(c.lower_bound_exceptional));
    m.insert(
        "e12_solution".into(),
        c.e12_solution
            .as_ref()
            .map(|s| json!(s.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .unwrap_or(Value::Null),
    );
    m.insert("linear_rank".into(), json!(c.linear_rank));
    m
}

fn certificate_json(c: &HenselCertificate) -> Value {
    json!({
        "prime": c.prime,
        "kernel": c.kernel.to_string(),
        "base_root": c.base_root.to_string(),
        "found_at_exponent": c.found_at_exponent,
        "valuation_f": c.valuation_f,
        "valuation_df": c.valuation_df,
        "lifts_forever": c.lifts_forever,
    })
}

pub fn verdict_json(v: &CongruenceVerdict) -> Value {
    json!({
        "status": v.status.label(),
        "witness_modulus": v.witness_modulus.as_ref().map(ToString::to_string),
        "certificates": v.certificates.values().map(certificate_json).collect::<Vec<_>>(),
        "inconclusive_primes": v.inconclusive_primes,
        "checked_prime_bound": v.checked_prime_bound,
        "checked_exponent_cap": v.checked_exponent_cap,
    })
}

pub fn set_json(s: &SolutionFreeSet) -> Value {
    json!({
        "equations": s.equations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "N": s.n,
        "elements": s.elements,
        "size": s.len(),
        "verified": s.verified,
        "maximum": s.maximum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.1), "1.00000000000e-1");
        assert_eq!(fmt12(-2.0 / 3.0), "-6.66666666667e-1");
        assert_eq!(fmt12(0.0), "0.00000000000e0");
    }

    #[test]
    fn csv_rows() {
        let rows = [
            SeriesRow { n: 10, empirical: Complex64::new(0.5, -0.25), analytic: Some(Complex64::new(0.5, 0.0)) },
            SeriesRow { n: 20, empirical: Complex64::new(1.0, 0.0), analytic: None },
        ];
        let text = csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "10,5.00000000000e-1,-2.50000000000e-1,5.00000000000e-1,0.00000000000e0,2.50000000000e-1");
        assert_eq!(lines[2], "20,1.00000000000e0,0.00000000000e0,,,");
    }

    #[test]
    fn envelope_hashes_config() {
        let a = envelope("x", json!({"n": 1}), Map::new(), None);
        let b = envelope("x", json!({"n": 2}), Map::new(), None);
        assert_ne!(a["provenance"]["config_sha256"], b["provenance"]["config_sha256"]);
        assert_eq!(a["provenance"].get("wall_time_s"), None);
        assert_eq!(Provenance::Empirical { n: 5, seed: 9 }.label(), "empirical(5, 9)");
    }
}
