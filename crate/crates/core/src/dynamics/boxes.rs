//! Finite unions of boxes in `[0,1)^d` and the measure of
//! `A ∩ T^(-m_1) A ∩ ... ∩ T^(-m_k) A`.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fixed::u64_to_unit;
use super::orbit::{OrbitPolynomial, UnipotentAffineMap};
use super::phase::{chunks, PhaseStepper, SymPoly};
use super::symbolic::Basis;
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, PolyFamily};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Largest shear the slice integrator accepts.
pub const MAX_SHEAR: f64 = (1u64 << 40) as f64;

#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidArgument("box corners must have equal positive length".into()));
        }
        if lo.iter().zip(&hi).any(|(&a, &b)| !(0.0 <= a && a < b && b <= 1.0)) {
            return Err(Error::InvalidArgument(format!("box {lo:?}..{hi:?} not inside [0,1)^d")));
        }
        Ok(AxisBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        self.lo.iter().zip(&self.hi).zip(x).all(|((a, b), v)| *a <= *v && *v < *b)
    }

    pub fn intersect(&self, other: &AxisBox) -> Option<AxisBox> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        lo.iter().zip(&hi).all(|(a, b)| a < b).then_some(AxisBox { lo, hi })
    }

    fn overlaps(&self, other: &AxisBox) -> bool {
        self.lo.iter().zip(&self.hi).zip(other.lo.iter().zip(&other.hi)).all(|((a, b), (c, d))| a < d && c < b)
    }

    /// `{x : x + c ∈ self}` cut into boxes of `[0,1)^d`.
    pub fn preimage_of_translation(&self, c: &[f64]) -> Vec<AxisBox> {
        let mut out = vec![AxisBox { lo: vec![], hi: vec![] }];
        for ((&a, &b), &s) in self.lo.iter().zip(&self.hi).zip(c) {
            let pieces = arc_preimage(a, b, s);
            out = out
                .into_iter()
                .flat_map(|bx| {
                    pieces.iter().map(move |&(l, h)| {
                        let mut nb = bx.clone();
                        nb.lo.push(l);
                        nb.hi.push(h);
                        nb
                    })
                })
                .collect();
        }
        out
    }
}

/// `{t in [0,1) : t + s mod 1 in [a, b)}` as at most two intervals.
fn arc_preimage(a: f64, b: f64, s: f64) -> Vec<(f64, f64)> {
    let s = s.rem_euclid(1.0);
    if b - a >= 1.0 {
        return vec![(0.0, 1.0)];
    }
    let (l, h) = ((a - s).rem_euclid(1.0), (b - s).rem_euclid(1.0));
    let h = if h == 0.0 { 1.0 } else { h };
    if l < h {
        vec![(l, h)]
    } else {
        let mut v = Vec::new();
        if h > 0.0 {
            v.push((0.0, h));
        }
        if l < 1.0 {
            v.push((l, 1.0));
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    dim: usize,
    boxes: Vec<AxisBox>,
}

impl BoxSet {
    /// Overlapping input is cut along the grid of all box faces and merged.
    pub fn new(dim: usize, boxes: Vec<AxisBox>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::InvalidArgument(format!("box of dimension {} in a {dim}-dimensional set", b.dim())));
        }
        let overlapping = boxes
            .iter()
            .enumerate()
            .any(|(i, b)| boxes[i + 1..].iter().any(|c| b.overlaps(c)));
        let boxes = if overlapping { normalize(dim, &boxes) } else { boxes };
        Ok(BoxSet { dim, boxes })
    }

    pub fn from_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        let boxes = intervals
            .iter()
            .map(|&(a, b)| AxisBox::new(vec![a], vec![b]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(1, boxes)
    }

    /// `X × Y` for unions of boxes.
    pub fn product(&self, other: &BoxSet) -> BoxSet {
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| {
                other.boxes.iter().map(move |b| AxisBox {
                    lo: a.lo.iter().chain(&b.lo).copied().collect(),
                    hi: a.hi.iter().chain(&b.hi).copied().collect(),
                })
            })
            .collect();
        BoxSet { dim: self.dim + other.dim, boxes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn measure(&self) -> f64 {
        self.boxes.iter().map(AxisBox::volume).sum()
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }
}

fn normalize(dim: usize, boxes: &[AxisBox]) -> Vec<AxisBox> {
    let grid: Vec<Vec<f64>> = (0..dim)
        .map(|k| {
            let mut g: Vec<f64> = boxes.iter().flat_map(|b| [b.lo[k], b.hi[k]]).collect();
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();
    let mut idx = vec![0usize; dim];
    let mut out: Vec<AxisBox> = Vec::new();
    'cells: loop {
        let lo: Vec<f64> = (0..dim).map(|k| grid[k][idx[k]]).collect();
        let hi: Vec<f64> = (0..dim).map(|k| grid[k][idx[k] + 1]).collect();
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        if boxes.iter().any(|b| b.contains(&mid)) {
            // Extend the previous cell along the first axis when possible.
            match out.last_mut() {
                Some(prev) if idx[0] > 0 && prev.hi[0] == lo[0] && prev.lo[1..] == lo[1..] && prev.hi[1..] == hi[1..] => {
                    prev.hi[0] = hi[0];
                }
                _ => out.push(AxisBox { lo, hi }),
            }
        }
        for k in 0..dim {
            idx[k] += 1;
            if idx[k] + 1 < grid[k].len() {
                continue 'cells;
            }
            idx[k] = 0;
        }
        break;
    }
    out
}

/// `x -> M x + c` on `T^d`; `c` is kept as 64-bit fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineShift {
    pub matrix: Vec<Vec<BigInt>>,
    pub offset: Vec<u64>,
}

impl AffineShift {
    pub fn identity(dim: usize) -> Self {
        AffineShift {
            matrix: (0..dim).map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect()).collect(),
            offset: vec![0; dim],
        }
    }

    /// `T^m` read off the closed-form orbit.
    pub fn power(orbit: &OrbitPolynomial, m: &BigInt, basis: &Basis) -> Result<Self> {
        let offset = orbit
            .translation_at(m)
            .iter()
            .map(|c| c.frac_bits(basis, 64).map(|v| v.to_u64().unwrap_or(0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineShift { matrix: orbit.matrix_at(m), offset })
    }

    pub fn is_translation(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| if i == j { *v == BigInt::from(1) } else { v.is_zero() })
        })
    }

    fn offset_f64(&self) -> Vec<f64> {
        self.offset.iter().map(|&v| u64_to_unit(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Translation,
    Slice,
    MonteCarlo { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    pub value: f64,
    /// Zero for the exact methods.
    pub std_error: f64,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

/// `mu(A ∩ T^(-p_1(n)) A ∩ ... ∩ T^(-p_k(n)) A)`.
pub fn box_correlation(
    t: &UnipotentAffineMap,
    a: &BoxSet,
    f: &PolyFamily,
    n: &BigInt,
    sampling: SamplingConfig,
    basis: &Basis,
) -> Result<Correlation> {
    if a.dim() != t.dim() {
        return Err(Error::InvalidArgument(format!("set of dimension {} for a map of dimension {}", a.dim(), t.dim())));
    }
    let orbit = t.orbit_closed_form();
    let mut shifts = vec![AffineShift::identity(t.dim())];
    for p in f.members() {
        shifts.push(AffineShift::power(&orbit, &p.eval(n), basis)?);
    }
    if t.dim() == 2 && !t.is_rotation() {
        return Ok(Correlation { value: slice_measure(a, &shifts)?, std_error: 0.0, method: Method::Slice });
    }
    correlation_of_shifts(a, &shifts, sampling)
}

/// `mu{x : S_i x ∈ A for all i}`.
pub fn correlation_of_shifts(a: &BoxSet, shifts: &[AffineShift], sampling: SamplingConfig) -> Result<Correlation> {
    if sampling.samples == 0 {
        return Err(Error::InvalidArgument("resolution must be at least 1".into()));
    }
    if shifts.is_empty() {
        return Ok(Correlation { value: 1.0, std_error: 0.0, method: Method::Translation });
    }
    if shifts.iter().all(AffineShift::is_translation) {
        let offs: Vec<Vec<f64>> = shifts.iter().map(AffineShift::offset_f64).collect();
        return Ok(Correlation { value: translation_measure(a, &offs), std_error: 0.0, method: Method::Translation });
    }
    if a.dim() == 2 {
        return Ok(Correlation { value: slice_measure(a, shifts)?, std_error: 0.0, method: Method::Slice });
    }
    Ok(monte_carlo(a, shifts, sampling))
}

/// Exact measure of `∩_i (A - c_i)`.
pub fn translation_measure(a: &BoxSet, offsets: &[Vec<f64>]) -> f64 {
    let mut cur: Vec<AxisBox> = a.boxes.iter().flat_map(|b| b.preimage_of_translation(&offsets[0])).collect();
    for c in &offsets[1..] {
        let next: Vec<AxisBox> = a.boxes.iter().flat_map(|b| b.preimage_of_translation(c)).collect();
        cur = cur
            .iter()
            .flat_map(|x| next.iter().filter_map(move |y| x.intersect(y)))
            .collect();
        if cur.is_empty() {
            return 0.0;
        }
    }
    cur.iter().map(AxisBox::volume).sum()
}

/// `p + q t`.
#[derive(Clone, Copy, Debug)]
struct Line {
    p: f64,
    q: f64,
}

impl Line {
    fn at(&self, t: f64) -> f64 {
        self.p + self.q * t
    }
}

/// One band of one shift: for `t` in `[t0, t1)` the admissible `u` are
/// `[lo(t), hi(t))`.
#[derive(Clone, Copy, Debug)]
struct Band {
    t0: f64,
    t1: f64,
    lo: Line,
    hi: Line,
}

/// Integral over `[t0, t1]` of `max(0, min_i hi_i - max_i lo_i)`.
fn integrate_window(t0: f64, t1: f64, los: &[Line], his: &[Line]) -> f64 {
    let mut pts = vec![t0, t1];
    for group in [los, his] {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if a.q != b.q {
                    let t = (b.p - a.p) / (a.q - b.q);
                    if t > t0 && t < t1 {
                        pts.push(t);
                    }
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    let gap = |t: f64| {
        his.iter().map(|l| l.at(t)).fold(f64::INFINITY, f64::min)
            - los.iter().map(|l| l.at(t)).fold(f64::NEG_INFINITY, f64::max)
    };
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (ga, gb) = (gap(a), gap(b));
        total += if ga >= 0.0 && gb >= 0.0 {
            0.5 * (ga + gb) * (b - a)
        } else if ga > 0.0 {
            0.5 * ga * (b - a) * ga / (ga - gb)
        } else if gb > 0.0 {
            0.5 * gb * (b - a) * gb / (gb - ga)
        } else {
            0.0
        };
    }
    total
}

fn small_int(v: &BigInt) -> Result<f64> {
    let x = v.to_f64().unwrap_or(f64::INFINITY);
    if x.abs() > MAX_SHEAR {
        return Err(Error::Budget(format!("shear coefficient {v} too large for slice integration")));
    }
    Ok(x)
}

/// Exact slice integration on `T^2` for shifts `(t, s) -> (t + tau, s + sigma t + kappa)`.
fn slice_measure(a: &BoxSet, shifts: &[AffineShift]) -> Result<f64> {
    let params = shifts
        .iter()
        .map(|s| {
            let off = s.offset_f64();
            Ok((small_int(&s.matrix[1][0])?, off[0], off[1]))
        })
        .collect::<Result<Vec<(f64, f64, f64)>>>()?;
    // Shear by the anchor: u = s + sigma_0 t + kappa_0.
    let (sa, ta, ka) = params[0];
    let others: Vec<(f64, f64, f64)> = params[1..].iter().map(|&(s, t, k)| (s - sa, t, k - ka)).collect();
    let mut total = 0.0;
    for anchor in &a.boxes {
        let (c0, c1) = (anchor.lo[1], anchor.hi[1]);
        for (j0, j1) in arc_preimage(anchor.lo[0], anchor.hi[0], ta) {
            let lists: Vec<Vec<Band>> = others
                .iter()
                .map(|&(ds, tau, dk)| {
                    let mut v = bands(a, j0, j1, c0, c1, ds, tau, dk);
                    v.sort_by(|x, y| x.t0.total_cmp(&y.t0));
                    v
                })
                .collect();
            let widths: Vec<f64> = lists
                .iter()
                .map(|l| l.iter().map(|b| b.t1 - b.t0).fold(0.0, f64::max))
                .collect();
            let flat = Line { p: c0, q: 0.0 };
            let top = Line { p: c1, q: 0.0 };
            total += descend(&lists, &widths, 0, j0, j1, &mut vec![flat], &mut vec![top]);
        }
    }
    Ok(total)
}

fn descend(lists: &[Vec<Band>], widths: &[f64], depth: usize, t0: f64, t1: f64, los: &mut Vec<Line>, his: &mut Vec<Line>) -> f64 {
    if depth == lists.len() {
        return integrate_window(t0, t1, los, his);
    }
    let list = &lists[depth];
    let start = list.partition_point(|b| b.t0 <= t0 - widths[depth]);
    let mut acc = 0.0;
    for b in &list[start..] {
        if b.t0 >= t1 {
            break;
        }
        let (u0, u1) = (t0.max(b.t0), t1.min(b.t1));
        if u0 >= u1 {
            continue;
        }
        los.push(b.lo);
        his.push(b.hi);
        acc += descend(lists, widths, depth + 1, u0, u1, los, his);
        los.pop();
        his.pop();
    }
    acc
}

/// Bands of one shift meeting the anchor strip `[j0, j1) × [c0, c1)`.
#[allow(clippy::too_many_arguments)]
fn bands(a: &BoxSet, j0: f64, j1: f64, c0: f64, c1: f64, ds: f64, tau: f64, dk: f64) -> Vec<Band> {
    let mut out = Vec::new();
    for bx in &a.boxes {
        let (d0, d1) = (bx.lo[1], bx.hi[1]);
        for (r0, r1) in arc_preimage(bx.lo[0], bx.hi[0], tau) {
            let (t0, t1) = (j0.max(r0), j1.min(r1));
            if t0 >= t1 {
                continue;
            }
            // u in [d0 + w - ds t - dk, d1 + w - ds t - dk).
            let ext = [ds * t0, ds * t1];
            let (emin, emax) = (ext[0].min(ext[1]), ext[0].max(ext[1]));
            let wlo = (c0 - d1 + dk + emin).floor() as i64 - 1;
            let whi = (c1 - d0 + dk + emax).ceil() as i64 + 1;
            for w in wlo..=whi {
                let base = w as f64 - dk;
                let lo = Line { p: d0 + base, q: -ds };
                let hi = Line { p: d1 + base, q: -ds };
                // Need lo(t) < c1 and hi(t) > c0.
                let (s0, s1) = if ds == 0.0 {
                    if lo.p < c1 && hi.p > c0 { (t0, t1) } else { continue }
                } else {
                    let x = (lo.p - c1) / ds;
                    let y = (hi.p - c0) / ds;
                    let (p, q) = if ds > 0.0 { (x, y) } else { (y, x) };
                    (t0.max(p), t1.min(q))
                };
                if s0 < s1 {
                    out.push(Band { t0: s0, t1: s1, lo, hi });
                }
            }
        }
    }
    out
}

fn wrap_u64(v: &BigInt) -> u64 {
    let m: BigInt = v.clone() & BigInt::from(u64::MAX);
    let (sign, digits) = m.to_u64_digits();
    debug_assert!(sign != Sign::Minus);
    digits.first().copied().unwrap_or(0)
}

fn monte_carlo(a: &BoxSet, shifts: &[AffineShift], sampling: SamplingConfig) -> Correlation {
    let d = a.dim();
    let mats: Vec<Vec<Vec<u64>>> = shifts
        .iter()
        .map(|s| s.matrix.iter().map(|row| row.iter().map(wrap_u64).collect()).collect())
        .collect();
    let total = sampling.samples;
    let hits: u64 = chunks(0, total)
        .into_par_iter()
        .enumerate()
        .map(|(ci, (lo, hi))| {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            rng.set_stream(ci as u64);
            let mut x = vec![0u64; d];
            let mut y = vec![0f64; d];
            let mut count = 0u64;
            for k in lo..hi {
                let r: u64 = rng.gen();
                x[0] = ((((k as u128) << 64) | r as u128) / total as u128) as u64;
                for v in x.iter_mut().skip(1) {
                    *v = rng.gen();
                }
                let inside = mats.iter().zip(shifts).all(|(m, s)| {
                    for (i, yi) in y.iter_mut().enumerate() {
                        let mut acc = s.offset[i];
                        for (j, xj) in x.iter().enumerate() {
                            acc = acc.wrapping_add(m[i][j].wrapping_mul(*xj));
                        }
                        *yi = u64_to_unit(acc);
                    }
                    a.contains(&y)
                });
                count += inside as u64;
            }
            count
        })
        .sum();
    let p = hits as f64 / total as f64;
    Correlation {
        value: p,
        std_error: (p * (1.0 - p) / total as f64).sqrt(),
        method: Method::MonteCarlo { seed: sampling.seed, samples: total },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RestrictedOutcome {
    Average { value: f64, samples: u64, range: u64 },
    NoSamples { range: u64 },
}

/// Averages the correlation over `S_delta ∩ [0, n)`, where `S_delta` holds the
/// `k` with `q_1(k) b` and `q_2(k) b` within `delta` of 0 in the max metric.
#[allow(clippy::too_many_arguments)]
pub fn restricted_average(
    t: &UnipotentAffineMap,
    a: &BoxSet,
    f: &PolyFamily,
    q1: &IntPolynomial,
    q2: &IntPolynomial,
    delta: f64,
    n: u64,
    basis: &Basis,
) -> Result<RestrictedOutcome> {
    if !t.is_rotation() {
        return Err(Error::InvalidArgument("restricted averages need a rotation".into()));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside (0, 1/2]")));
    }
    if a.dim() != t.dim() {
        return Err(Error::InvalidArgument("set and map dimensions differ".into()));
    }
    let d = t.dim();
    let polys = |p: &IntPolynomial| -> Vec<SymPoly> {
        t.translation().iter().map(|b| SymPoly::from_int_poly(p, b)).collect()
    };
    let shift_polys: Vec<SymPoly> = f.members().iter().flat_map(polys).collect();
    let gate_polys: Vec<SymPoly> = [q1, q2].into_iter().flat_map(polys).collect();
    let parts = chunks(0, n)
        .into_par_iter()
        .map(|(lo, hi)| {
            let start = BigInt::from(lo);
            let mk = |ps: &[SymPoly]| {
                ps.iter().map(|p| PhaseStepper::new(p, &start, hi - lo, basis)).collect::<Result<Vec<_>>>()
            };
            let mut shift_st = mk(&shift_polys)?;
            let mut gate_st = mk(&gate_polys)?;
            let mut offsets = vec![vec![0.0; d]; f.len() + 1];
            let (mut sum, mut count) = (0.0, 0u64);
            for _ in lo..hi {
                let inside = gate_st.iter().all(|s| {
                    let x = s.phase();
                    x.min(1.0 - x) <= delta
                });
                if inside {
                    for (i, s) in shift_st.iter().enumerate() {
                        offsets[1 + i / d][i % d] = s.phase();
                    }
                    sum += translation_measure(a, &offsets);
                    count += 1;
                }
                shift_st.iter_mut().chain(gate_st.iter_mut()).for_each(PhaseStepper::advance);
            }
            Ok((sum, count))
        })
        .collect::<Result<Vec<_>>>()?;
    let (sum, samples) = parts.into_iter().fold((0.0, 0u64), |(a, b), (c, d)| (a + c, b + d));
    Ok(if samples == 0 {
        RestrictedOutcome::NoSamples { range: n }
    } else {
        RestrictedOutcome::Average { value: sum / samples as f64, samples, range: n }
    })
}
