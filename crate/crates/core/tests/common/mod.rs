#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polyerg::dynamics::{SymbolicReal, UnipotentAffineMap};
use polyerg::{IntPolynomial, PolyFamily};
use proptest::prelude::*;

pub type Coeffs = Vec<i64>;

pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

pub fn lin(a: i64, p: &[i64], b: i64, q: &[i64]) -> Vec<i64> {
    let n = p.len().max(q.len());
    trim((0..n).map(|i| a * p.get(i).copied().unwrap_or(0) + b * q.get(i).copied().unwrap_or(0)).collect())
}

pub fn nonconstant(p: &[i64]) -> bool {
    p.iter().skip(1).any(|&c| c != 0)
}

pub fn essentially_distinct(f: &[Coeffs]) -> bool {
    f.iter().all(|p| nonconstant(p))
        && (0..3).all(|i| (i + 1..3).all(|j| nonconstant(&lin(1, &f[i], -1, &f[j]))))
}

pub fn family(f: &[Coeffs]) -> PolyFamily {
    PolyFamily::new(f.iter().map(|c| IntPolynomial::from_i64(c)).collect())
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k];
                m[r][k] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Coefficient rows for `k1 q1 + l1 q2 + m1 q3 = 0` and
/// `k1 q1^2 + l1 q2^2 + m1 q3^2 + k2 q1 + l2 q2 + m2 q3 = 0`.
pub fn system(t: &[Coeffs]) -> Vec<Vec<BigInt>> {
    let sq: Vec<Vec<i64>> = t.iter().map(|p| mul(p, p)).collect();
    let at = |p: &[i64], j: usize| BigInt::from(p.get(j).copied().unwrap_or(0));
    let deg = t.iter().map(Vec::len).max().unwrap() - 1;
    let mut rows = Vec::new();
    for j in 0..=deg {
        let mut r: Vec<BigInt> = t.iter().map(|p| at(p, j)).collect();
        r.extend([BigInt::zero(), BigInt::zero(), BigInt::zero()]);
        rows.push(r);
    }
    for j in 0..=2 * deg {
        let mut r: Vec<BigInt> = sq.iter().map(|p| at(p, j)).collect();
        r.extend(t.iter().map(|p| at(p, j)));
        rows.push(r);
    }
    rows
}

/// Some null vector has a nonzero `(k1, l1, m1)` part.
pub fn oracle_e12(f: &[Coeffs]) -> bool {
    let t: Vec<Coeffs> = f.iter().map(|p| { let mut q = p.clone(); q[0] = 0; q }).collect();
    let full = system(&t);
    let tail: Vec<Vec<BigInt>> = full.iter().map(|r| r[3..].to_vec()).collect();
    let nullity_full = 6 - bareiss_rank(full);
    let nullity_tail = 3 - bareiss_rank(tail);
    nullity_full > nullity_tail
}

pub fn oracle_rank(f: &[Coeffs]) -> usize {
    let deg = f.iter().map(Vec::len).max().unwrap();
    let rows = (1..deg)
        .map(|j| f.iter().map(|p| BigInt::from(p.get(j).copied().unwrap_or(0))).collect())
        .collect();
    bareiss_rank(rows)
}

pub fn oracle_weyl(f: &[Coeffs]) -> u8 {
    if oracle_rank(f) == 3 {
        1
    } else if oracle_e12(f) {
        3
    } else {
        2
    }
}

pub fn substitutes(sol: &[BigInt], f: &[Coeffs]) -> bool {
    let t: Vec<Coeffs> = f.iter().map(|p| { let mut q = p.clone(); q[0] = 0; q }).collect();
    let rows = system(&t);
    rows.iter().all(|r| r.iter().zip(sol).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Coeffs> {
    (1..=max_deg).prop_flat_map(|d| {
        (prop::collection::vec(-9i64..=9, d), 1i64..=9, any::<bool>()).prop_map(|(mut v, lead, neg)| {
            v.push(if neg { -lead } else { lead });
            v
        })
    })
}

pub fn small() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

/// Mixes generic triples with planted dependent and special shapes.
pub fn triple() -> impl Strategy<Value = Vec<Coeffs>> {
    let c = -9i64..=9;
    prop_oneof![
        prop::collection::vec(poly(6), 3),
        (poly(6), poly(6), small(), small(), c.clone())
            .prop_map(|(p, q, a, b, k)| { let mut r = lin(a, &p, b, &q); r[0] += k; vec![p, q, r] }),
        (poly(3), small(), small(), small(), c.clone(), c.clone())
            .prop_map(|(p, l, m, r, s, t)| {
                let mut a = lin(l, &p, 0, &p);
                a[0] += s;
                let mut b = lin(m, &p, 0, &p);
                b[0] += t;
                vec![a, b, lin(r, &p, 0, &p)]
            }),
        (poly(3), small(), small(), small(), small())
            .prop_map(|(p, l, m, k, r)| vec![lin(l, &p, 0, &p), lin(m, &p, 0, &p), lin(k, &mul(&p, &p), r, &p)]),
        (poly(3), small(), small(), small(), small())
            .prop_map(|(p, k, l, m, r)| {
                let sq = mul(&p, &p);
                vec![lin(k, &sq, l, &p), lin(k, &sq, m, &p), lin(k, &sq, r, &p)]
            }),
    ]
    .prop_filter("essentially distinct, bounded coefficients", |f| {
        essentially_distinct(f) && f.iter().all(|p| p.len() <= 7 && p.iter().all(|c| c.abs() <= 9))
    })
}

pub const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn eval_mod(c: &[i128], x: u64, m: u64) -> u64 {
    let m = m as i128;
    c.iter().rev().fold(0i128, |acc, &a| (acc * x as i128 + a).rem_euclid(m)) as u64
}

pub fn coeffs(p: &IntPolynomial) -> Vec<i128> {
    p.coeffs().iter().map(|c| i128::try_from(c).unwrap()).collect()
}

pub fn has_root(c: &[i128], m: u64) -> bool {
    (0..m).any(|x| eval_mod(c, x, m) == 0)
}

pub fn valuation(x: &BigInt, q: &BigInt) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let mut v = 0;
    let mut y = x.clone();
    while (&y % q).is_zero() {
        y /= q;
        v += 1;
    }
    v
}

/// Newton iteration in `Z_q`, returning `x` with `p(x) = 0 mod q^target`.
pub fn newton_lift(p: &IntPolynomial, start: &BigInt, q: u64, target: u32) -> Option<BigInt> {
    let qb = BigInt::from(q);
    let work = qb.pow(2 * target + 8);
    let goal = qb.pow(target);
    let dp = p.derivative();
    let mut x = start.mod_floor(&work);
    for _ in 0..64 {
        let fx = p.eval(&x);
        if fx.mod_floor(&goal).is_zero() {
            return Some(x);
        }
        let dfx = dp.eval(&x);
        let v = valuation(&dfx, &qb);
        if v == u32::MAX || valuation(&fx, &qb) <= 2 * v {
            return None;
        }
        let scale = qb.pow(v);
        let unit = (&dfx / &scale).mod_floor(&work);
        let inv = unit.extended_gcd(&work).x.mod_floor(&work);
        let step = (&fx / &scale * inv).mod_floor(&work);
        x = (x - step).mod_floor(&work);
    }
    None
}

pub fn primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

pub const ROOTS: [u64; 3] = [2, 3, 5];
pub const BITS: u32 = 400;

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `(rational numerator, denominator, [(basis index, numerator, denominator)])` per coefficient.
pub type Coef = ((i64, i64), Vec<(usize, i64, i64)>);

pub fn coef() -> impl Strategy<Value = Coef> {
    (
        (-20i64..=20, 1i64..=12),
        prop::collection::vec((0usize..3, -9i64..=9, 1i64..=7), 0..=2),
    )
}

pub fn to_symbolic(c: &Coef) -> SymbolicReal {
    let ((a, b), irr) = c;
    irr.iter().fold(SymbolicReal::from_rational(rat(*a, *b)), |acc, &(i, s, t)| {
        &acc + &SymbolicReal::basis_multiple(i, rat(s, t))
    })
}

pub fn nilpotent(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-3i64..=3, d * d).prop_map(move |v| {
        (0..d).map(|i| (0..d).map(|j| if j < i { v[i * d + j] } else { 0 }).collect()).collect()
    })
}

pub fn unipotent() -> impl Strategy<Value = UnipotentAffineMap> {
    (1usize..=4).prop_flat_map(|d| {
        (nilpotent(d), prop::collection::vec(coef(), d)).prop_map(|(n, t)| {
            UnipotentAffineMap::new(n, t.iter().map(to_symbolic).collect()).unwrap()
        })
    })
}

