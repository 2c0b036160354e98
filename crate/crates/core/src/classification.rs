//! Weyl complexity, family types and smallest characteristic factors for
//! three-member polynomial families.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{oriented_negative_first, primitive_integer_vector, QMatrix};
use crate::poly::{IntPolynomial, PolyFamily, RatPolynomial};

/// Weyl complexity, always 1, 2 or 3 for the families handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylComplexity(u8);

impl WeylComplexity {
    pub fn new(value: u8) -> Result<Self> {
        match value {
            1..=3 => Ok(WeylComplexity(value)),
            _ => Err(Error::InvalidArgument(format!("Weyl complexity {value} out of range"))),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for WeylComplexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Primitive integer solution `(k1, l1, m1, k2, l2, m2)` of
///
/// ```text
/// k1 p1 + l1 p2 + m1 p3 = 0
/// k1 p1^2 + l1 p2^2 + m1 p3^2 + k2 p1 + l2 p2 + m2 p3 = 0
/// ```
///
/// with `(k1, l1, m1) != 0`, for the constant-free members `p_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct E12Solution {
    pub coeffs: [BigInt; 6],
}

impl E12Solution {
    /// Substitutes into both equations for the given (constant-free) triple.
    pub fn verify(&self, tildes: &[IntPolynomial]) -> bool {
        if tildes.len() != 3 {
            return false;
        }
        let c = &self.coeffs;
        if c[..3].iter().all(Zero::is_zero) {
            return false;
        }
        let mut e1 = IntPolynomial::zero();
        let mut e2 = IntPolynomial::zero();
        for i in 0..3 {
            e1 = &e1 + &tildes[i].scale(&c[i]);
            e2 = &e2 + &(&tildes[i] * &tildes[i]).scale(&c[i]);
            e2 = &e2 + &tildes[i].scale(&c[i + 3]);
        }
        e1.is_zero() && e2.is_zero()
    }

    pub fn as_i64(&self) -> Option<[i64; 6]> {
        let mut out = [0i64; 6];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = i64::try_from(c).ok()?;
        }
        Some(out)
    }
}

/// Data exhibiting one of the three special forms, in permuted order
/// `tilde[permutation[0..3]]`:
///
/// * E1: `l p, m p, r p` (here `k = 0`)
/// * E2: `l p, m p, k p^2 + r p`
/// * E3: `k p^2 + l p, k p^2 + m p, k p^2 + r p`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeWitness {
    pub p: IntPolynomial,
    pub k: BigRational,
    pub l: BigRational,
    pub m: BigRational,
    pub r: BigRational,
    /// Every witness coefficient is an integer.
    pub integral: bool,
    pub permutation: [usize; 3],
}

impl TypeWitness {
    fn new(
        p: IntPolynomial,
        [k, l, m, r]: [BigRational; 4],
        permutation: [usize; 3],
    ) -> Self {
        let integral = [&k, &l, &m, &r].iter().all(|c| c.is_integer());
        TypeWitness { p, k, l, m, r, integral, permutation }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyType {
    LinearlyIndependent,
    E1(TypeWitness),
    E2(TypeWitness),
    E3(TypeWitness),
    Generic,
}

impl FamilyType {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyType::LinearlyIndependent => "LinearlyIndependent",
            FamilyType::E1(_) => "E1",
            FamilyType::E2(_) => "E2",
            FamilyType::E3(_) => "E3",
            FamilyType::Generic => "Generic",
        }
    }

    pub fn witness(&self) -> Option<&TypeWitness> {
        match self {
            FamilyType::E1(w) | FamilyType::E2(w) | FamilyType::E3(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_special(&self) -> bool {
        self.witness().is_some()
    }

    /// The permuted constant-free members rebuilt from the witness.
    pub fn reconstruct(&self) -> Option<[RatPolynomial; 3]> {
        let w = self.witness()?;
        let p = w.p.to_rational();
        let p2 = &p * &p;
        let lin = |c: &BigRational| p.scale(c);
        let quad = |c: &BigRational| &p2.scale(&w.k) + &p.scale(c);
        Some(match self {
            FamilyType::E1(_) => [lin(&w.l), lin(&w.m), lin(&w.r)],
            FamilyType::E2(_) => [lin(&w.l), lin(&w.m), quad(&w.r)],
            _ => [quad(&w.l), quad(&w.m), quad(&w.r)],
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorClass {
    KRat,
    Kronecker,
    Affine2,
    Nil2,
    /// `(k)`-step nilfactor.
    NilK(usize),
}

impl fmt::Display for FactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorClass::KRat => write!(f, "KRat"),
            FactorClass::Kronecker => write!(f, "Kronecker"),
            FactorClass::Affine2 => write!(f, "Affine2"),
            FactorClass::Nil2 => write!(f, "Nil2"),
            FactorClass::NilK(k) => write!(f, "NilK({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub weyl_complexity: WeylComplexity,
    pub family_type: FamilyType,
    pub smallest_factor: FactorClass,
    /// `None` when some member has a nonzero constant term.
    pub lower_bound_exceptional: Option<bool>,
    pub e12_solution: Option<E12Solution>,
    pub linear_rank: usize,
}

fn require_triple(f: &PolyFamily) -> Result<()> {
    if f.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected a family of 3 polynomials, got {}",
            f.len()
        )));
    }
    f.require_essentially_distinct()
}

fn rat(c: &BigInt) -> BigRational {
    BigRational::from_integer(c.clone())
}

/// Coefficient-matching matrix of the two equations; columns are
/// `k1, l1, m1, k2, l2, m2`.
pub fn e12_matrix(tildes: &[IntPolynomial]) -> QMatrix {
    let d = tildes.iter().filter_map(IntPolynomial::degree).max().unwrap_or(0);
    let squares: Vec<IntPolynomial> = tildes.iter().map(|p| p * p).collect();
    let mut rows = Vec::new();
    for j in 1..=d {
        let mut row: Vec<BigRational> = tildes.iter().map(|p| rat(&p.coeff(j))).collect();
        row.extend((0..3).map(|_| BigRational::zero()));
        rows.push(row);
    }
    for j in 1..=2 * d {
        let mut row: Vec<BigRational> = squares.iter().map(|p| rat(&p.coeff(j))).collect();
        row.extend(tildes.iter().map(|p| rat(&p.coeff(j))));
        rows.push(row);
    }
    QMatrix::from_rows(rows, 6)
}

pub fn solve_e12_system(f: &PolyFamily) -> Result<Option<E12Solution>> {
    require_triple(f)?;
    let tildes = f.tilde_members();
    let null = e12_matrix(&tildes).nullspace();
    let Some(v) = null.iter().find(|v| v[..3].iter().any(|c| !c.is_zero())) else {
        return Ok(None);
    };
    let ints = oriented_negative_first(primitive_integer_vector(v));
    let sol = E12Solution { coeffs: ints.try_into().expect("six unknowns") };
    if !sol.verify(&tildes) {
        return Err(Error::Internal("nullspace vector fails substitution".into()));
    }
    Ok(Some(sol))
}

pub fn weyl_complexity_3(f: &PolyFamily) -> Result<WeylComplexity> {
    require_triple(f)?;
    if f.linear_rank() == 3 {
        return Ok(WeylComplexity(1));
    }
    Ok(WeylComplexity(if solve_e12_system(f)?.is_some() { 3 } else { 2 }))
}

pub fn weyl_complexity_2(f: &PolyFamily) -> Result<WeylComplexity> {
    if f.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a family of 2 polynomials, got {}",
            f.len()
        )));
    }
    f.require_essentially_distinct()?;
    Ok(WeylComplexity(if f.linear_rank() == 2 { 1 } else { 2 }))
}

const PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// `(k, c)` with `q = k p^2 + c p`, if `q` lies in that span.
fn in_quadratic_span(q: &IntPolynomial, p: &IntPolynomial) -> Option<(BigRational, BigRational)> {
    let rq = q.to_rational();
    let rp = p.to_rational();
    let (quot, rem) = rq.div_rem(&rp);
    if !rem.is_zero() {
        return None;
    }
    // q / p must be k p + c.
    let (k, c) = quot.div_rem(&rp);
    let k = match k.degree() {
        None => BigRational::zero(),
        Some(0) => k.coeff(0),
        _ => return None,
    };
    match c.degree() {
        None => Some((k, BigRational::zero())),
        Some(0) => Some((k, c.coeff(0))),
        _ => None,
    }
}

pub fn detect_family_type(f: &PolyFamily) -> Result<FamilyType> {
    require_triple(f)?;
    let t = f.tilde_members();
    match f.linear_rank() {
        3 => return Ok(FamilyType::LinearlyIndependent),
        1 => {
            let p = t[0].primitive_part()?;
            let c: Vec<BigRational> = t
                .iter()
                .map(|q| q.ratio_to(&p).ok_or_else(|| Error::Internal("rank 1 but not proportional".into())))
                .collect::<Result<_>>()?;
            let [l, m, r]: [BigRational; 3] = c.try_into().unwrap();
            return Ok(FamilyType::E1(TypeWitness::new(
                p,
                [BigRational::zero(), l, m, r],
                [0, 1, 2],
            )));
        }
        _ => {}
    }
    for perm in PERMUTATIONS {
        let [a, b, c] = perm.map(|i| &t[i]);
        let p = a.primitive_part()?;
        let (Some(l), Some(m)) = (a.ratio_to(&p), b.ratio_to(&p)) else {
            continue;
        };
        if let Some((k, r)) = in_quadratic_span(c, &p) {
            if !k.is_zero() {
                return Ok(FamilyType::E2(TypeWitness::new(p, [k, l, m, r], perm)));
            }
        }
    }
    for perm in PERMUTATIONS {
        let [a, b, c] = perm.map(|i| &t[i]);
        let p = (a - b).primitive_part()?;
        let spans: Option<Vec<_>> = [a, b, c].iter().map(|q| in_quadratic_span(q, &p)).collect();
        let Some(spans) = spans else { continue };
        let k = spans[0].0.clone();
        if k.is_zero() || spans.iter().any(|(ki, _)| *ki != k) {
            continue;
        }
        let [l, m, r] = [spans[0].1.clone(), spans[1].1.clone(), spans[2].1.clone()];
        return Ok(FamilyType::E3(TypeWitness::new(p, [k, l, m, r], perm)));
    }
    Ok(FamilyType::Generic)
}

fn factor_for_type(ty: &FamilyType) -> FactorClass {
    match ty {
        FamilyType::LinearlyIndependent => FactorClass::KRat,
        FamilyType::E1(_) => FactorClass::Nil2,
        FamilyType::E2(_) | FamilyType::E3(_) => FactorClass::Affine2,
        FamilyType::Generic => FactorClass::Kronecker,
    }
}

fn check_consistency(ty: &FamilyType, w: WeylComplexity) -> Result<()> {
    if ty.is_special() != (w.value() == 3) {
        return Err(Error::Internal(format!(
            "type detector says {} but Weyl complexity is {w}",
            ty.tag()
        )));
    }
    Ok(())
}

pub fn smallest_factor(f: &PolyFamily) -> Result<FactorClass> {
    let ty = detect_family_type(f)?;
    check_consistency(&ty, weyl_complexity_3(f)?)?;
    Ok(factor_for_type(&ty))
}

/// Smallest characteristic factor for `{l_1 p, ..., l_k p}`.
pub fn smallest_factor_multiple(l: &[i64], p: &IntPolynomial) -> Result<FactorClass> {
    if l.is_empty() {
        return Err(Error::InvalidArgument("empty multiplier list".into()));
    }
    if l.contains(&0) {
        return Err(Error::InvalidArgument("zero multiplier".into()));
    }
    let mut sorted = l.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("repeated multiplier".into()));
    }
    if p.is_constant() {
        return Err(Error::InvalidArgument("p must be nonconstant".into()));
    }
    Ok(match l.len() {
        1 => FactorClass::KRat,
        k => FactorClass::NilK(k - 1),
    })
}

/// `{p1 - p3, p2 - p3, -p3}`.
pub fn shift_reduce(f: &PolyFamily) -> Result<PolyFamily> {
    require_triple(f)?;
    let m = f.members();
    Ok(PolyFamily::new(vec![&m[0] - &m[2], &m[1] - &m[2], -&m[2]]))
}

/// Whether the family falls outside the cases where the lower bound for
/// multiple recurrence holds. An E1 family `{c1 p, c2 p, c3 p}` is
/// exceptional exactly when no `c_i` equals the sum of the other two.
pub fn lower_bound_exceptional(f: &PolyFamily) -> Result<bool> {
    if !f.all_constant_terms_zero() {
        return Err(Error::InvalidArgument(
            "lower bound exceptionality needs p_i(0) = 0 for every member".into(),
        ));
    }
    let ty = detect_family_type(f)?;
    Ok(match &ty {
        FamilyType::E2(_) | FamilyType::E3(_) => true,
        FamilyType::E1(w) => {
            let c = [&w.l, &w.m, &w.r];
            !(0..3).any(|i| *c[i] == c[(i + 1) % 3] + c[(i + 2) % 3])
        }
        _ => false,
    })
}

/// All classification data for a three-member family.
pub fn classify(f: &PolyFamily) -> Result<ClassificationResult> {
    require_triple(f)?;
    let weyl_complexity = weyl_complexity_3(f)?;
    let family_type = detect_family_type(f)?;
    check_consistency(&family_type, weyl_complexity)?;
    let smallest_factor = factor_for_type(&family_type);
    let lower_bound_exceptional = if f.all_constant_terms_zero() {
        Some(lower_bound_exceptional(f)?)
    } else {
        None
    };
    let e12_solution = solve_e12_system(f)?;
    Ok(ClassificationResult {
        weyl_complexity,
        family_type,
        smallest_factor,
        lower_bound_exceptional,
        e12_solution,
        linear_rank: f.linear_rank(),
    })
}

/// Two-member counterpart: Kronecker is characteristic for proportional
/// pairs, the rational Kronecker factor otherwise.
pub fn smallest_factor_2(f: &PolyFamily) -> Result<FactorClass> {
    Ok(match weyl_complexity_2(f)?.value() {
        1 => FactorClass::KRat,
        _ => FactorClass::Kronecker,
    })
}

impl TypeWitness {
    /// Least common denominator of `k, l, m, r`; rescaling the family by it
    /// makes the witness integral.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        [&self.k, &self.l, &self.m, &self.r]
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: &[&str]) -> PolyFamily {
        PolyFamily::parse(s).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn e12_examples() {
        let s = solve_e12_system(&fam(&["n", "2n", "n^2"])).unwrap().unwrap();
        assert_eq!(s.as_i64(), Some([-2, 1, 0, 0, 0, -2]));
        assert_eq!(solve_e12_system(&fam(&["n", "n^2", "n^3"])).unwrap(), None);
        assert_eq!(solve_e12_system(&fam(&["n", "n^2", "n^2+n"])).unwrap(), None);
        assert!(solve_e12_system(&fam(&["n", "n^2"])).is_err());
    }

    #[test]
    fn complexity_examples() {
        let w = |s: &[&str]| weyl_complexity_3(&fam(s)).unwrap().value();
        assert_eq!(w(&["n", "n^2", "n^3"]), 1);
        assert_eq!(w(&["n", "n^2", "n^2+n"]), 2);
        assert_eq!(w(&["n", "2n", "n^2"]), 3);
        let w2 = |s: &[&str]| weyl_complexity_2(&fam(s)).unwrap().value();
        assert_eq!(w2(&["n", "n^2"]), 1);
        assert_eq!(w2(&["n", "2n"]), 2);
        assert_eq!(w2(&["n^2", "3n^2"]), 2);
        assert!(matches!(
            weyl_complexity_3(&fam(&["n", "n+1", "n^2"])),
            Err(Error::NotEssentiallyDistinct(_))
        ));
    }

    #[test]
    fn type_examples() {
        let t = detect_family_type(&fam(&["n^2", "2n^2", "3n^2"])).unwrap();
        let FamilyType::E1(w) = &t else { panic!("{t:?}") };
        assert_eq!(w.p, "n^2".parse().unwrap());
        assert_eq!((w.l.clone(), w.m.clone(), w.r.clone()), (q(1), q(2), q(3)));

        let t = detect_family_type(&fam(&["n", "2n", "n^2"])).unwrap();
        let FamilyType::E2(w) = &t else { panic!("{t:?}") };
        assert_eq!(w.p, "n".parse().unwrap());
        assert_eq!([&w.k, &w.l, &w.m, &w.r], [&q(1), &q(1), &q(2), &q(0)]);
        assert!(w.integral);

        let t = detect_family_type(&fam(&["n^2+n", "n^2+2n", "n^2+3n"])).unwrap();
        let FamilyType::E3(w) = &t else { panic!("{t:?}") };
        assert_eq!(w.p, "n".parse().unwrap());
        assert_eq!([&w.k, &w.l, &w.m, &w.r], [&q(1), &q(1), &q(2), &q(3)]);

        assert_eq!(
            detect_family_type(&fam(&["n", "n^2", "n^3"])).unwrap(),
            FamilyType::LinearlyIndependent
        );
        assert_eq!(detect_family_type(&fam(&["n", "2n", "n^3"])).unwrap(), FamilyType::Generic);
    }

    #[test]
    fn witnesses_reconstruct() {
        for s in [
            ["n^2", "2n^2", "-3n^2"],
            ["n^2", "3n", "6n"],
            ["2n^2+n", "2n^2+3n+5", "2n^2-n"],
            ["n^4+2n^3+2n^2+n", "n^4+2n^3+3n^2+2n", "n^4+2n^3-n"],
        ] {
            let f = fam(&s);
            let ty = detect_family_type(&f).unwrap();
            let rebuilt = ty.reconstruct().unwrap_or_else(|| panic!("{s:?} -> {ty:?}"));
            let w = ty.witness().unwrap();
            let tildes = f.tilde_members();
            for (slot, &i) in w.permutation.iter().enumerate() {
                assert_eq!(rebuilt[slot], tildes[i].to_rational(), "{s:?}");
            }
        }
    }

    #[test]
    fn factor_examples() {
        let sf = |s: &[&str]| smallest_factor(&fam(s)).unwrap();
        assert_eq!(sf(&["n", "2n", "n^3"]), FactorClass::Kronecker);
        assert_eq!(sf(&["n", "2n", "3n"]), FactorClass::Nil2);
        assert_eq!(sf(&["n", "2n", "n^2"]), FactorClass::Affine2);
        let n2: IntPolynomial = "n^2".parse().unwrap();
        assert_eq!(smallest_factor_multiple(&[1, 2, 3], &n2).unwrap(), FactorClass::NilK(2));
        assert_eq!(
            smallest_factor_multiple(&[1, 2], &"n^3".parse().unwrap()).unwrap(),
            FactorClass::NilK(1)
        );
        assert_eq!(smallest_factor_multiple(&[5], &"n".parse().unwrap()).unwrap(), FactorClass::KRat);
        assert!(smallest_factor_multiple(&[1, 1], &n2).is_err());
        assert!(smallest_factor_multiple(&[0, 1], &n2).is_err());
    }

    #[test]
    fn shift_reduce_examples() {
        assert_eq!(
            shift_reduce(&fam(&["n^2+n", "n^2+2n", "n^2+3n"])).unwrap(),
            fam(&["-2n", "-n", "-n^2-3n"])
        );
        assert_eq!(shift_reduce(&fam(&["n", "2n", "3n"])).unwrap(), fam(&["-2n", "-n", "-3n"]));
        assert_eq!(
            shift_reduce(&fam(&["n", "n^2", "n^3"])).unwrap(),
            fam(&["n-n^3", "n^2-n^3", "-n^3"])
        );
    }

    #[test]
    fn exceptional_examples() {
        let ex = |s: &[&str]| lower_bound_exceptional(&fam(s)).unwrap();
        assert!(ex(&["2n", "3n", "4n"]));
        assert!(!ex(&["n", "2n", "3n"]));
        assert!(ex(&["n", "2n", "n^2"]));
        assert!(!ex(&["n", "3n", "4n"]));
        assert!(!ex(&["n", "-n", "2n"]));
        assert!(!ex(&["n", "n^2", "n^3"]));
        assert!(lower_bound_exceptional(&fam(&["n+1", "2n", "3n"])).is_err());
    }
}
