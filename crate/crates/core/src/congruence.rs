//! Solvability of `p(n) = 0 mod m` for every `m`, one prime at a time.
//!
//! For each prime `q` the roots modulo `q^e` are lifted for growing `e`.
//! Either some level has no roots (an explicit unsolvable modulus), or some
//! root `n0` meets the Hensel condition `v(f(n0)) > 2 v(f'(n0))` for the
//! squarefree kernel `f`, which proves a `q`-adic root and hence roots
//! modulo every power of `q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{gcd_over_q, squarefree_part, IntPolynomial, PolyFamily};

pub const DEFAULT_PRIME_BOUND: u64 = 100;
pub const DEFAULT_EXPONENT_CAP: u32 = 12;
/// Root sets larger than this stop the lifting and yield an inconclusive
/// outcome.
pub const MAX_TRACKED_ROOTS: usize = 1 << 16;
const MAX_BRUTE_PRIME: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselCertificate {
    pub prime: u64,
    /// The polynomial the condition was checked on (squarefree kernel).
    pub kernel: IntPolynomial,
    pub base_root: BigInt,
    /// Exponent `e` at which `base_root` was found as a root mod `q^e`.
    pub found_at_exponent: u32,
    /// `None` encodes an exact root (infinite valuation).
    pub valuation_f: Option<u32>,
    pub valuation_df: Option<u32>,
    pub lifts_forever: bool,
}

impl HenselCertificate {
    /// Recomputes the valuations and the Hensel inequality.
    pub fn check(&self) -> bool {
        let q = BigInt::from(self.prime);
        let vf = valuation(&self.kernel.eval(&self.base_root), &q);
        let vdf = valuation(&self.kernel.derivative().eval(&self.base_root), &q);
        vf == self.valuation_f
            && vdf == self.valuation_df
            && self.lifts_forever == hensel_holds(vf, vdf)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeOutcome {
    Certified(HenselCertificate),
    Witness { prime: u64, exponent: u32, modulus: BigInt },
    Inconclusive { prime: u64, exponent_reached: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    CertifiedSolvable,
    UnsolvableWitness,
    InconclusiveUpTo,
}

impl VerdictStatus {
    pub fn label(self) -> &'static str {
        match self {
            VerdictStatus::CertifiedSolvable => "CertifiedSolvable",
            VerdictStatus::UnsolvableWitness => "UnsolvableWitness",
            VerdictStatus::InconclusiveUpTo => "InconclusiveUpTo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub status: VerdictStatus,
    pub witness_modulus: Option<BigInt>,
    pub certificates: BTreeMap<u64, HenselCertificate>,
    pub inconclusive_primes: Vec<u64>,
    pub checked_prime_bound: u64,
    pub checked_exponent_cap: u32,
}

/// `v_q(x)`, with `None` for `x = 0`.
pub fn valuation(x: &BigInt, q: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (d, r) = y.div_rem(q);
        if !r.is_zero() {
            return Some(v);
        }
        y = d;
        v += 1;
    }
}

fn hensel_holds(vf: Option<u32>, vdf: Option<u32>) -> bool {
    match (vf, vdf) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a > 2 * b,
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

fn joint_root(polys: &[IntPolynomial], n: &BigInt, m: &BigInt) -> bool {
    polys.iter().all(|p| p.eval_mod(n, m).is_zero())
}

/// Joint roots modulo `q`, by exhaustion.
fn roots_mod_prime(polys: &[IntPolynomial], q: u64) -> Result<Vec<BigInt>> {
    if q > MAX_BRUTE_PRIME {
        return Err(Error::InvalidArgument(format!(
            "prime factor {q} exceeds the exhaustive search limit {MAX_BRUTE_PRIME}"
        )));
    }
    let m = BigInt::from(q);
    Ok((0..q)
        .map(BigInt::from)
        .filter(|n| joint_root(polys, n, &m))
        .collect())
}

/// Lifts joint roots mod `q^e` (given as `modulus`) to mod `q^(e+1)`.
fn lift_roots(polys: &[IntPolynomial], roots: &[BigInt], q: u64, modulus: &BigInt) -> Vec<BigInt> {
    let next = modulus * BigInt::from(q);
    let mut out = Vec::new();
    for r in roots {
        for t in 0..q {
            let cand = r + modulus * BigInt::from(t);
            if joint_root(polys, &cand, &next) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

fn roots_mod_prime_power(polys: &[IntPolynomial], q: u64, e: u32) -> Result<Vec<BigInt>> {
    let mut roots = roots_mod_prime(polys, q)?;
    let mut modulus = BigInt::from(q);
    for _ in 1..e {
        if roots.is_empty() {
            break;
        }
        roots = lift_roots(polys, &roots, q, &modulus);
        modulus *= BigInt::from(q);
    }
    Ok(roots)
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Every residue `n` in `[0, m)` with `p(n) = 0 mod m`, ascending.
pub fn roots_mod(p: &IntPolynomial, m: u64) -> Result<Vec<u64>> {
    joint_roots_mod(std::slice::from_ref(p), m)
}

/// Residues that are roots of every polynomial modulo `m`, ascending.
pub fn joint_roots_mod(polys: &[IntPolynomial], m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    // CRT accumulation over the prime-power factors.
    let mut acc: Vec<u128> = vec![0];
    let mut acc_mod: u128 = 1;
    for (q, e) in factorize(m) {
        let qe = (q as u128).pow(e);
        let local: Vec<u128> = roots_mod_prime_power(polys, q, e)?
            .iter()
            .map(|r| r.to_u128().expect("residue below modulus"))
            .collect();
        let inv = mod_inverse(acc_mod % qe, qe);
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for &a in &acc {
            for &b in &local {
                // x = a + acc_mod * t,  t = (b - a) * acc_mod^{-1} mod qe
                let diff = (b + qe - a % qe) % qe;
                let t = diff * inv % qe;
                next.push(a + acc_mod * t);
            }
        }
        acc = next;
        acc_mod *= qe;
    }
    let mut out: Vec<u64> = acc.into_iter().map(|x| x as u64).collect();
    out.sort_unstable();
    Ok(out)
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(&BigInt::from(m)).to_u128().unwrap()
}

/// Single-polynomial per-prime certification.
pub fn certify_prime(p: &IntPolynomial, q: u64, exponent_cap: u32) -> Result<PrimeOutcome> {
    certify_prime_joint(std::slice::from_ref(p), q, exponent_cap)
}

/// Per-prime certification for simultaneous roots. The Hensel condition is
/// checked on the squarefree part of the gcd of the polynomials, whose
/// `q`-adic roots are common roots of all of them.
pub fn certify_prime_joint(polys: &[IntPolynomial], q: u64, exponent_cap: u32) -> Result<PrimeOutcome> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if exponent_cap == 0 {
        return Err(Error::InvalidArgument("exponent cap must be at least 1".into()));
    }
    if polys.is_empty() || polys.iter().any(IntPolynomial::is_zero) {
        return Err(Error::InvalidArgument("polynomials must be nonzero".into()));
    }
    let kernel = gcd_over_q(polys).and_then(|g| squarefree_part(&g));
    let qb = BigInt::from(q);
    let mut roots = roots_mod_prime(polys, q)?;
    let mut modulus = qb.clone();
    for e in 1..=exponent_cap {
        if roots.is_empty() {
            return Ok(PrimeOutcome::Witness { prime: q, exponent: e, modulus });
        }
        if let Some(f) = &kernel {
            let df = f.derivative();
            for r in &roots {
                let vf = valuation(&f.eval(r), &qb);
                let vdf = valuation(&df.eval(r), &qb);
                if hensel_holds(vf, vdf) {
                    return Ok(PrimeOutcome::Certified(HenselCertificate {
                        prime: q,
                        kernel: f.clone(),
                        base_root: r.clone(),
                        found_at_exponent: e,
                        valuation_f: vf,
                        valuation_df: vdf,
                        lifts_forever: true,
                    }));
                }
            }
        }
        if e == exponent_cap || roots.len() > MAX_TRACKED_ROOTS {
            return Ok(PrimeOutcome::Inconclusive { prime: q, exponent_reached: e });
        }
        roots = lift_roots(polys, &roots, q, &modulus);
        modulus *= &qb;
    }
    unreachable!("loop returns at the cap")
}

fn merge(outcomes: Vec<PrimeOutcome>, prime_bound: u64, exponent_cap: u32) -> CongruenceVerdict {
    let mut v = CongruenceVerdict {
        status: VerdictStatus::CertifiedSolvable,
        witness_modulus: None,
        certificates: BTreeMap::new(),
        inconclusive_primes: Vec::new(),
        checked_prime_bound: prime_bound,
        checked_exponent_cap: exponent_cap,
    };
    for o in outcomes {
        match o {
            PrimeOutcome::Certified(c) => {
                v.certificates.insert(c.prime, c);
            }
            PrimeOutcome::Inconclusive { prime, .. } => v.inconclusive_primes.push(prime),
            PrimeOutcome::Witness { modulus, .. } => {
                v.status = VerdictStatus::UnsolvableWitness;
                v.witness_modulus = Some(modulus);
                return v;
            }
        }
    }
    if !v.inconclusive_primes.is_empty() {
        v.status = VerdictStatus::InconclusiveUpTo;
    }
    v
}

fn verdict_for(polys: &[IntPolynomial], prime_bound: u64, exponent_cap: u32) -> Result<CongruenceVerdict> {
    if polys.is_empty() || polys.iter().any(IntPolynomial::is_constant) {
        return Err(Error::InvalidArgument("polynomials must be nonconstant".into()));
    }
    let outcomes = primes_up_to(prime_bound)
        .par_iter()
        .map(|&q| certify_prime_joint(polys, q, exponent_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(outcomes, prime_bound, exponent_cap))
}

/// Whether `p(n) = 0 mod m` is solvable for every `m`, checked over the
/// primes up to `prime_bound`.
pub fn intersective_verdict(p: &IntPolynomial, prime_bound: u64, exponent_cap: u32) -> Result<CongruenceVerdict> {
    verdict_for(std::slice::from_ref(p), prime_bound, exponent_cap)
}

/// Same question for simultaneous roots of all members.
pub fn joint_verdict(f: &PolyFamily, prime_bound: u64, exponent_cap: u32) -> Result<CongruenceVerdict> {
    verdict_for(f.members(), prime_bound, exponent_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn brute(polys: &[IntPolynomial], m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        (0..m).filter(|&n| joint_root(polys, &BigInt::from(n), &mb)).collect()
    }

    #[test]
    fn roots_mod_examples() {
        assert_eq!(roots_mod(&p("n^2-17"), 4).unwrap(), vec![1, 3]);
        assert_eq!(roots_mod(&p("n^2-2"), 4).unwrap(), Vec::<u64>::new());
        assert_eq!(roots_mod(&p("n"), 5).unwrap(), vec![0]);
        assert!(roots_mod(&p("n"), 0).is_err());
    }

    #[test]
    fn roots_mod_matches_brute_force() {
        let polys = [p("n^2-17"), p("n^3-19"), p("(n^2+n+1)(n-3)"), p("6n^2+5n+1"), p("n^4")];
        for f in &polys {
            for m in 1..=360u64 {
                assert_eq!(roots_mod(f, m).unwrap(), brute(std::slice::from_ref(f), m), "{f} mod {m}");
            }
        }
    }

    #[test]
    fn certify_examples() {
        let PrimeOutcome::Certified(c) = certify_prime(&p("n^2-17"), 2, 12).unwrap() else {
            panic!()
        };
        assert_eq!(c.base_root, BigInt::one());
        assert_eq!((c.valuation_f, c.valuation_df), (Some(4), Some(1)));
        assert!(c.check());

        assert_eq!(
            certify_prime(&p("n^2-2"), 2, 12).unwrap(),
            PrimeOutcome::Witness { prime: 2, exponent: 2, modulus: BigInt::from(4) }
        );
        for q in [2, 3, 5, 97] {
            let PrimeOutcome::Certified(c) = certify_prime(&p("n"), q, 3).unwrap() else {
                panic!()
            };
            assert_eq!(c.valuation_f, None);
            assert_eq!(c.base_root, BigInt::zero());
        }
        assert!(certify_prime(&p("n"), 4, 3).is_err());
    }

    #[test]
    fn repeated_root_is_certified_via_kernel() {
        // n^2 has derivative vanishing at its root; the kernel n does not.
        let PrimeOutcome::Certified(c) = certify_prime(&p("(n-3)^2"), 5, 4).unwrap() else {
            panic!()
        };
        assert_eq!(c.kernel, p("n-3"));
    }

    #[test]
    fn verdicts() {
        let v = intersective_verdict(&p("n^2-2"), 100, 12).unwrap();
        assert_eq!(v.status, VerdictStatus::UnsolvableWitness);
        assert_eq!(v.witness_modulus, Some(BigInt::from(4)));

        let v = joint_verdict(&PolyFamily::parse(&["n^2", "n^3", "n^5"]).unwrap(), 100, 12).unwrap();
        assert_eq!(v.status, VerdictStatus::CertifiedSolvable);
        assert_eq!(v.certificates.len(), 25);

        // Each polynomial alone is intersective, but they share no root mod 2.
        let v = joint_verdict(&PolyFamily::parse(&["2n", "3n", "n+1"]).unwrap(), 100, 12).unwrap();
        assert_eq!(v.witness_modulus, Some(BigInt::from(2)));
        let v = joint_verdict(&PolyFamily::parse(&["n", "2n+2", "3n+3"]).unwrap(), 100, 12).unwrap();
        assert_eq!(v.witness_modulus, Some(BigInt::from(2)));
    }

    #[test]
    fn separate_certificates_do_not_make_a_joint_one() {
        // n and n-1 each have simple roots everywhere but no common root.
        let f = [p("n"), p("n-1")];
        assert!(matches!(
            certify_prime_joint(&f, 3, 6).unwrap(),
            PrimeOutcome::Witness { exponent: 1, .. }
        ));
        // n(n-1) and n(n-2): common kernel n.
        let f = [p("n(n-1)"), p("n(n-2)")];
        let PrimeOutcome::Certified(c) = certify_prime_joint(&f, 2, 6).unwrap() else { panic!() };
        assert_eq!(c.kernel, p("n"));
    }

    #[test]
    fn inconclusive_when_cap_is_low() {
        // The 2-adic root of n^2 - 17 is only visible from 2^5 onwards.
        let f = p("(n^2-13)(n^2-17)(n^2-221)");
        let out = certify_prime(&f, 2, 1).unwrap();
        assert_eq!(out, PrimeOutcome::Inconclusive { prime: 2, exponent_reached: 1 });
        let v = intersective_verdict(&f, 3, 1).unwrap();
        assert_eq!(v.status, VerdictStatus::InconclusiveUpTo);
        assert!(v.inconclusive_primes.contains(&2));
    }
}
