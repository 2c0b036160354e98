//! Wrapping fixed-point fractions: `Fixed<L>` holds `x / 2^(64 L)` for an
//! integer `x` modulo `2^(64 L)`, so addition is exact arithmetic mod 1.

use num_bigint::BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixed<const L: usize>(pub [u64; L]);

impl<const L: usize> Fixed<L> {
    pub const BITS: u32 = 64 * L as u32;

    pub fn zero() -> Self {
        Fixed([0; L])
    }

    /// Takes the low `64 L` bits of `x`.
    pub fn from_biguint(x: &BigUint) -> Self {
        let mut limbs = [0u64; L];
        for (l, d) in limbs.iter_mut().zip(x.iter_u64_digits()) {
            *l = d;
        }
        Fixed(limbs)
    }

    #[inline]
    pub fn add_assign(&mut self, rhs: &Self) {
        let mut carry = false;
        for i in 0..L {
            let (s1, c1) = self.0[i].overflowing_add(rhs.0[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            self.0[i] = s2;
            carry = c1 | c2;
        }
    }

    /// Top 64 bits.
    #[inline]
    pub fn top(&self) -> u64 {
        self.0[L - 1]
    }

    /// Value in `[0, 1)`.
    #[inline]
    pub fn to_f64(&self) -> f64 {
        u64_to_unit(self.top())
    }
}

/// `x / 2^64` rounded down to a double in `[0, 1)`.
#[inline]
pub fn u64_to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `x / 2^128` as a double in `[0, 1)`.
#[inline]
pub fn u128_to_unit(x: u128) -> f64 {
    u64_to_unit((x >> 64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_mod_one() {
        let half = Fixed::<2>([0, 1 << 63]);
        let mut x = half;
        x.add_assign(&half);
        assert_eq!(x, Fixed::zero());
        let mut y = Fixed::<2>([u64::MAX, 0]);
        y.add_assign(&Fixed([1, 0]));
        assert_eq!(y, Fixed([0, 1]));
        assert_eq!(Fixed::<4>([0, 0, 0, 1 << 62]).to_f64(), 0.25);
    }
}
