//! Exact reals of the form `r + c_1 a_1 + ... + c_k a_k` over a declared
//! basis of irrationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Fixed-point precision of stored basis values.
pub const BASIS_BITS: u32 = 2048;
/// Minimum number of significant digits for user-declared constants.
pub const MIN_DECIMAL_DIGITS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    /// `floor(value * 2^BASIS_BITS)`.
    scaled: BigInt,
    /// Bits of the stored value that are correct.
    pub precision_bits: u32,
}

/// Declared irrationals, assumed linearly independent over Q together
/// with 1. Independence is the caller's assertion and is not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    elements: Vec<BasisElement>,
}

impl Default for Basis {
    fn default() -> Self {
        let mut b = Basis::empty();
        for k in [2, 3, 5] {
            b.push_sqrt(k).expect("non-square");
        }
        b
    }
}

impl Basis {
    pub fn empty() -> Self {
        Basis { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    fn push(&mut self, e: BasisElement) -> Result<usize> {
        if self.index_of(&e.name).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate basis name {}", e.name)));
        }
        self.elements.push(e);
        Ok(self.elements.len() - 1)
    }

    /// Adds `sqrt(k)` under the name `sqrtK`.
    pub fn push_sqrt(&mut self, k: u64) -> Result<usize> {
        let r = k.sqrt();
        if r * r == k {
            return Err(Error::InvalidArgument(format!("sqrt({k}) is rational")));
        }
        let scaled = (BigInt::from(k) << (2 * BASIS_BITS)).sqrt();
        self.push(BasisElement { name: format!("sqrt{k}"), scaled, precision_bits: BASIS_BITS })
    }

    /// Adds a constant given by a decimal expansion with at least
    /// [`MIN_DECIMAL_DIGITS`] significant digits.
    pub fn push_decimal(&mut self, name: &str, decimal: &str) -> Result<usize> {
        if !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(Error::InvalidArgument(format!("bad basis name {name:?}")));
        }
        let value = parse_decimal(decimal)
            .ok_or_else(|| Error::InvalidArgument(format!("bad decimal {decimal:?}")))?;
        let digits = decimal
            .chars()
            .filter(char::is_ascii_digit)
            .skip_while(|&c| c == '0')
            .count();
        if digits < MIN_DECIMAL_DIGITS {
            return Err(Error::InvalidArgument(format!(
                "basis constant {name} needs at least {MIN_DECIMAL_DIGITS} significant digits, got {digits}"
            )));
        }
        let scaled = floor_scaled(&value, BASIS_BITS);
        let int_bits = value.abs().to_integer().bits() as u32;
        // Relative precision of the decimal, as absolute bits after the point.
        let precision_bits = ((digits as f64 - 1.0) * std::f64::consts::LOG2_10) as u32;
        let precision_bits = precision_bits.saturating_sub(int_bits);
        self.push(BasisElement { name: name.to_string(), scaled, precision_bits: precision_bits.min(BASIS_BITS) })
    }

    pub fn value_f64(&self, i: usize) -> f64 {
        scaled_to_f64(&self.elements[i].scaled, BASIS_BITS)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = BigInt::from(10).pow(fp.len() as u32);
    let v = BigRational::new(num, den);
    Some(if neg { -v } else { v })
}

fn floor_scaled(x: &BigRational, bits: u32) -> BigInt {
    (x.numer() << bits).div_floor(x.denom())
}

fn scaled_to_f64(x: &BigInt, bits: u32) -> f64 {
    let shift = (x.bits() as i64 - 60).max(0) as u32;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top * 2f64.powi(shift as i32 - bits as i32)
}

/// Exact element of `Q + Q a_1 + ... + Q a_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicReal {
    rational: BigRational,
    irr: BTreeMap<usize, BigRational>,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(r: BigRational) -> Self {
        SymbolicReal { rational: r, irr: BTreeMap::new() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// Exact value of a finite float.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Self::from_rational)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
    }

    /// `c * a_index`.
    pub fn basis_multiple(index: usize, c: BigRational) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.irr.insert(index, c);
        }
        s
    }

    pub fn basis(index: usize) -> Self {
        Self::basis_multiple(index, BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irr_coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.irr
    }

    pub fn irr_coeff(&self, index: usize) -> BigRational {
        self.irr.get(&index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_irrational(&self) -> bool {
        !self.irr.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irr.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.irr.keys().next_back().copied()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SymbolicReal {
            rational: &self.rational * k,
            irr: self.irr.iter().map(|(&i, c)| (i, c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    fn check_basis(&self, basis: &Basis) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= basis.len() => Err(Error::InvalidArgument(format!(
                "basis index {i} not declared (basis has {} elements)",
                basis.len()
            ))),
            _ => Ok(()),
        }
    }

    /// `floor(frac(self) * 2^bits)`, guaranteed correct up to one unit in
    /// the last place given the stored basis precision.
    pub fn frac_bits(&self, basis: &Basis, bits: u32) -> Result<BigUint> {
        self.check_basis(basis)?;
        let mut acc = floor_scaled(&self.rational, BASIS_BITS);
        for (&i, c) in &self.irr {
            let e = &basis.elements[i];
            let mag_bits = (c.numer().bits() as i64 - c.denom().bits() as i64 + 1).max(0) as u32;
            if bits + mag_bits + 8 > e.precision_bits {
                return Err(Error::Precision(format!(
                    "coefficient of {} has {mag_bits} integer bits; {bits} fractional bits need more than the {} available",
                    e.name, e.precision_bits
                )));
            }
            acc += (c.numer() * &e.scaled).div_floor(c.denom());
        }
        let modulus = BigInt::one() << BASIS_BITS;
        let reduced = acc.mod_floor(&modulus);
        let (_, mag) = (reduced >> (BASIS_BITS - bits)).into_parts();
        Ok(mag)
    }

    /// Fractional part as an `f64` in `[0, 1)`.
    pub fn frac_f64(&self, basis: &Basis) -> Result<f64> {
        let v = self.frac_bits(basis, 64)?;
        Ok(v.to_u64().unwrap_or(0) as f64 / 2f64.powi(64))
    }

    /// Approximate value.
    pub fn to_f64(&self, basis: &Basis) -> Result<f64> {
        self.check_basis(basis)?;
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (&i, c) in &self.irr {
            v += c.to_f64().unwrap_or(f64::NAN) * basis.value_f64(i);
        }
        Ok(v)
    }

    /// Parses e.g. `1/3 + 2*sqrt2 - sqrt5/4` or `0.25`.
    pub fn parse(src: &str, basis: &Basis) -> Result<Self> {
        parse_symbolic(src, basis)
    }

    pub fn display(&self, basis: &Basis) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.rational.is_zero() || self.irr.is_empty() {
            parts.push((self.rational.is_negative(), fmt_rat(&self.rational.abs())));
        }
        for (&i, c) in &self.irr {
            let name = if i < basis.len() { basis.name(i).to_string() } else { format!("a{i}") };
            let mag = c.abs();
            let body = if mag.is_one() { name } else { format!("{}*{name}", fmt_rat(&mag)) };
            parts.push((c.is_negative(), body));
        }
        let mut out = String::new();
        for (k, (neg, body)) in parts.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&Basis::default()))
    }
}

impl Add for &SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (&i, c) in &rhs.irr {
            let e = out.irr.entry(i).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.irr.remove(&i);
            }
        }
        out
    }
}

impl Sub for &SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: &SymbolicReal) -> SymbolicReal {
        self + &(-rhs)
    }
}

impl Neg for &SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        self.scale(&-BigRational::one())
    }
}

impl Add for SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: SymbolicReal) -> SymbolicReal {
        &self + &rhs
    }
}

impl Sub for SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: SymbolicReal) -> SymbolicReal {
        &self - &rhs
    }
}

impl std::iter::Sum for SymbolicReal {
    fn sum<I: Iterator<Item = SymbolicReal>>(iter: I) -> Self {
        iter.fold(SymbolicReal::zero(), |a, b| &a + &b)
    }
}

fn parse_symbolic(src: &str, basis: &Basis) -> Result<SymbolicReal> {
    let bytes = src.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let skip = |pos: &mut usize| {
        while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Option<BigRational> {
        let start = *pos;
        while bytes.get(*pos).is_some_and(|c| c.is_ascii_digit() || *c == b'.') {
            *pos += 1;
        }
        parse_decimal(std::str::from_utf8(&bytes[start..*pos]).ok()?)
    };
    let ident = |pos: &mut usize| -> Option<String> {
        let start = *pos;
        if !bytes.get(*pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == b'_') {
            return None;
        }
        while bytes.get(*pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            *pos += 1;
        }
        Some(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    let mut acc = SymbolicReal::zero();
    let mut first = true;
    loop {
        skip(&mut pos);
        let mut sign = BigRational::one();
        match bytes.get(pos) {
            Some(b'+') => pos += 1,
            Some(b'-') => {
                sign = -sign;
                pos += 1;
            }
            None if !first => break,
            None => return Err(err(pos, "empty expression")),
            _ if !first => return Err(err(pos, "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        skip(&mut pos);
        let mut coeff = BigRational::one();
        let mut have_number = false;
        if bytes.get(pos).is_some_and(|c| c.is_ascii_digit() || *c == b'.') {
            coeff = number(&mut pos).ok_or_else(|| err(pos, "bad number"))?;
            have_number = true;
            skip(&mut pos);
            if bytes.get(pos) == Some(&b'/') {
                pos += 1;
                skip(&mut pos);
                let d = number(&mut pos).ok_or_else(|| err(pos, "bad denominator"))?;
                if d.is_zero() {
                    return Err(err(pos, "zero denominator"));
                }
                coeff /= d;
                skip(&mut pos);
            }
            if bytes.get(pos) == Some(&b'*') {
                pos += 1;
                skip(&mut pos);
            }
        }
        let name_pos = pos;
        let term = match ident(&mut pos) {
            Some(name) => {
                let i = basis
                    .index_of(&name)
                    .ok_or_else(|| err(name_pos, &format!("unknown basis element {name:?}")))?;
                skip(&mut pos);
                if bytes.get(pos) == Some(&b'/') {
                    pos += 1;
                    skip(&mut pos);
                    let d = number(&mut pos).ok_or_else(|| err(pos, "bad denominator"))?;
                    if d.is_zero() {
                        return Err(err(pos, "zero denominator"));
                    }
                    coeff /= d;
                }
                SymbolicReal::basis_multiple(i, coeff * &sign)
            }
            None if have_number => SymbolicReal::from_rational(coeff * &sign),
            None => return Err(err(pos, "expected number or basis name")),
        };
        acc = &acc + &term;
    }
    Ok(acc)
}
