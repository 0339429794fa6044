//! Exact dyadic rationals `num / 2^shift`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

/// A rational number whose denominator is a power of two, kept in lowest
/// terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i128,
    shift: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, shift: 0 };

    pub fn new(num: i128, shift: u32) -> Dyadic {
        Dyadic { num, shift }.reduced()
    }

    pub fn from_int(v: i128) -> Dyadic {
        Dyadic { num: v, shift: 0 }
    }

    /// `±2^-k`.
    pub fn signed_inverse_power(sign: i8, k: u32) -> Dyadic {
        Dyadic::new(sign as i128, k)
    }

    fn reduced(mut self) -> Dyadic {
        if self.num == 0 {
            self.shift = 0;
        }
        while self.shift > 0 && self.num & 1 == 0 {
            self.num >>= 1;
            self.shift -= 1;
        }
        self
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    /// Exponent `k` of the denominator `2^k`.
    pub fn shift(self) -> u32 {
        self.shift
    }

    pub fn denominator(self) -> u128 {
        1u128 << self.shift
    }

    pub fn is_integer(self) -> bool {
        self.shift == 0
    }

    pub fn to_integer(self) -> Option<i128> {
        self.is_integer().then_some(self.num)
    }

    /// Division by `2^k`.
    pub fn halve(self, k: u32) -> Dyadic {
        Dyadic::new(self.num, self.shift + k)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (self.shift as f64).exp2()
    }

    pub fn checked_add(self, rhs: Dyadic) -> Option<Dyadic> {
        let shift = self.shift.max(rhs.shift);
        let a = self.num.checked_mul(1i128.checked_shl(shift - self.shift)?)?;
        let b = rhs.num.checked_mul(1i128.checked_shl(shift - rhs.shift)?)?;
        Some(Dyadic::new(a.checked_add(b)?, shift))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        self.checked_add(rhs).expect("dyadic overflow")
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            shift: self.shift,
        }
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        (*self - *other).num.cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let quarter = Dyadic::new(1, 2);
        let sum: Dyadic = std::iter::repeat_n(quarter, 4).sum();
        assert_eq!(sum, Dyadic::from_int(1));
        assert!(sum.is_integer());
        assert_eq!(Dyadic::new(6, 3), Dyadic::new(3, 2));
        assert_eq!(Dyadic::new(3, 2).to_string(), "3/4");
        assert_eq!((Dyadic::new(1, 1) - Dyadic::new(3, 2)).to_string(), "-1/4");
        assert!(Dyadic::new(1, 1) > Dyadic::new(3, 3));
        assert_eq!(Dyadic::from_int(6).halve(1), Dyadic::from_int(3));
        assert_eq!(Dyadic::new(0, 9), Dyadic::ZERO);
    }
}
