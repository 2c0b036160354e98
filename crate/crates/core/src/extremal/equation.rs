use std::fmt;

use crate::error::{Error, Result};

/// `a_1 x_1 + ... + a_k x_k = 0` with nonzero coefficients summing to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearEquation {
    coeffs: Vec<i64>,
}

impl LinearEquation {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.contains(&0) {
            return Err(Error::InvalidArgument("coefficients must be nonzero".into()));
        }
        let s: i128 = coeffs.iter().map(|&c| c as i128).sum();
        if s != 0 {
            return Err(Error::InvalidArgument(format!("coefficients sum to {s}, not 0")));
        }
        Ok(LinearEquation { coeffs })
    }

    /// `"1,8,-6,-3"`.
    pub fn parse(src: &str) -> Result<Self> {
        let coeffs = src
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    /// `x + y = 2z`.
    pub fn three_ap() -> Self {
        LinearEquation { coeffs: vec![1, 1, -2] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same solution set: equal up to sign and order of coefficients.
    pub fn equivalent(&self, other: &LinearEquation) -> bool {
        let sorted = |v: &[i64], s: i64| {
            let mut w: Vec<i64> = v.iter().map(|c| c * s).collect();
            w.sort_unstable();
            w
        };
        let a = sorted(&self.coeffs, 1);
        a == sorted(&other.coeffs, 1) || a == sorted(&other.coeffs, -1)
    }

    pub fn is_solution(&self, xs: &[u64]) -> bool {
        xs.len() == self.len()
            && self.coeffs.iter().zip(xs).map(|(&a, &x)| a as i128 * x as i128).sum::<i128>() == 0
    }

    /// Some solution with pairwise distinct entries taken from the sorted
    /// slice `elems`.
    pub fn find_distinct_solution(&self, elems: &[u64]) -> Option<Vec<u64>> {
        let k = self.len();
        let max = *elems.last()?;
        let mut member = vec![false; max as usize + 1];
        for &e in elems {
            member[e as usize] = true;
        }
        let last = self.coeffs[k - 1] as i128;
        let mut tuple = Vec::with_capacity(k);
        fn rec(
            eq: &LinearEquation,
            elems: &[u64],
            member: &[bool],
            last: i128,
            acc: i128,
            tuple: &mut Vec<u64>,
        ) -> bool {
            let k = eq.len();
            if tuple.len() == k - 1 {
                if (-acc) % last != 0 {
                    return false;
                }
                let x = -acc / last;
                if x < 1 || x as usize >= member.len() || !member[x as usize] || tuple.contains(&(x as u64)) {
                    return false;
                }
                tuple.push(x as u64);
                return true;
            }
            let a = eq.coeffs[tuple.len()] as i128;
            for &e in elems {
                if tuple.contains(&e) {
                    continue;
                }
                tuple.push(e);
                if rec(eq, elems, member, last, acc + a * e as i128, tuple) {
                    return true;
                }
                tuple.pop();
            }
            false
        }
        rec(self, elems, &member, last, 0, &mut tuple).then_some(tuple)
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.coeffs.iter().enumerate() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if abs != 1 {
                write!(f, "{abs}*")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        write!(f, " = 0")
    }
}
