//! Exact arithmetic in the Gaussian integers `Z[i]`.
//!
//! Components are 64-bit signed integers restricted to `|re|, |im| < 2^62`;
//! products and norms are formed in 128-bit arithmetic so that a product of
//! two in-range values never overflows before the range check.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exclusive bound on the absolute value of each component.
pub const COMPONENT_LIMIT: i64 = 1 << 62;

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

/// One of the four units `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Unit {
    k: u8,
}

/// Residue class of a Gaussian integer modulo `4Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod4Class {
    pub re4: u8,
    pub im4: u8,
}

fn in_range(v: i128) -> bool {
    v > -(COMPONENT_LIMIT as i128) && v < COMPONENT_LIMIT as i128
}

impl Unit {
    pub const ONE: Unit = Unit { k: 0 };
    pub const I: Unit = Unit { k: 1 };
    pub const MINUS_ONE: Unit = Unit { k: 2 };
    pub const MINUS_I: Unit = Unit { k: 3 };

    /// All four units in the order `1, i, -1, -i`.
    pub const ALL: [Unit; 4] = [Unit::ONE, Unit::I, Unit::MINUS_ONE, Unit::MINUS_I];

    /// The unit `i^k`, with `k` taken mod 4.
    pub const fn pow_i(k: u32) -> Unit {
        Unit { k: (k % 4) as u8 }
    }

    /// Exponent `k` in `{0, 1, 2, 3}` with `self = i^k`.
    pub const fn exponent(self) -> u32 {
        self.k as u32
    }

    pub const fn inverse(self) -> Unit {
        Unit { k: (4 - self.k) % 4 }
    }

    pub const fn value(self) -> GaussInt {
        match self.k {
            0 => GaussInt::ONE,
            1 => GaussInt::I,
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        Unit { k: (self.k + rhs.k) % 4 }
    }
}

impl Mul<GaussInt> for Unit {
    type Output = GaussInt;
    fn mul(self, z: GaussInt) -> GaussInt {
        z.rotate(self)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Mod4Class {
    pub fn new(re: i64, im: i64) -> Mod4Class {
        Mod4Class {
            re4: re.rem_euclid(4) as u8,
            im4: im.rem_euclid(4) as u8,
        }
    }

    /// True for the classes of `1` and `-1`.
    pub fn is_pm1(self) -> bool {
        self.im4 == 0 && (self.re4 == 1 || self.re4 == 3)
    }
}

impl Mul for Mod4Class {
    type Output = Mod4Class;
    fn mul(self, rhs: Mod4Class) -> Mod4Class {
        let (a, b) = (self.re4 as i64, self.im4 as i64);
        let (c, d) = (rhs.re4 as i64, rhs.im4 as i64);
        Mod4Class::new(a * c - b * d, a * d + b * c)
    }
}

impl From<Unit> for Mod4Class {
    fn from(u: Unit) -> Mod4Class {
        u.value().mod4()
    }
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt::new(0, 0);
    pub const ONE: GaussInt = GaussInt::new(1, 0);
    pub const I: GaussInt = GaussInt::new(0, 1);
    /// `1 + i`, the prime above 2.
    pub const ONE_PLUS_I: GaussInt = GaussInt::new(1, 1);

    pub const fn new(re: i64, im: i64) -> GaussInt {
        GaussInt { re, im }
    }

    /// Builds a value from wide components, rejecting anything outside the
    /// component bound.
    pub fn try_from_wide(re: i128, im: i128) -> Result<GaussInt> {
        if in_range(re) && in_range(im) {
            Ok(GaussInt::new(re as i64, im as i64))
        } else {
            Err(Error::Range(format!("({re}, {im})")))
        }
    }

    /// Checks that both components lie inside the supported bound.
    pub fn checked(self) -> Result<GaussInt> {
        GaussInt::try_from_wide(self.re as i128, self.im as i128)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// `re² + im²`.
    pub fn norm(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    pub fn conj(self) -> GaussInt {
        GaussInt::new(self.re, -self.im)
    }

    /// Multiplies by the unit `u`.
    pub fn rotate(self, u: Unit) -> GaussInt {
        match u.k {
            0 => self,
            1 => GaussInt::new(-self.im, self.re),
            2 => GaussInt::new(-self.re, -self.im),
            _ => GaussInt::new(self.im, -self.re),
        }
    }

    pub fn checked_add(self, rhs: GaussInt) -> Result<GaussInt> {
        GaussInt::try_from_wide(
            self.re as i128 + rhs.re as i128,
            self.im as i128 + rhs.im as i128,
        )
    }

    pub fn checked_sub(self, rhs: GaussInt) -> Result<GaussInt> {
        GaussInt::try_from_wide(
            self.re as i128 - rhs.re as i128,
            self.im as i128 - rhs.im as i128,
        )
    }

    pub fn checked_mul(self, rhs: GaussInt) -> Result<GaussInt> {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (rhs.re as i128, rhs.im as i128);
        GaussInt::try_from_wide(a * c - b * d, a * d + b * c)
    }

    pub fn checked_pow(self, mut e: u32) -> Result<GaussInt> {
        let mut base = self;
        let mut acc = GaussInt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(base)?;
            }
        }
        Ok(acc)
    }

    /// Division with remainder: `self = q·b + r` with `norm(r) <= norm(b)/2`.
    ///
    /// Each coordinate of `self / b` is rounded to a nearest integer; exact
    /// half-way values round toward negative infinity.
    pub fn divrem(self, b: GaussInt) -> Result<(GaussInt, GaussInt)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = b.norm() as i128;
        let (a0, a1) = (self.re as i128, self.im as i128);
        let (b0, b1) = (b.re as i128, b.im as i128);
        // self * conj(b)
        let num_re = a0 * b0 + a1 * b1;
        let num_im = a1 * b0 - a0 * b1;
        let round = |num: i128| -> i128 { -(n - 2 * num).div_euclid(2 * n) };
        let (q0, q1) = (round(num_re), round(num_im));
        let r0 = a0 - (q0 * b0 - q1 * b1);
        let r1 = a1 - (q0 * b1 + q1 * b0);
        Ok((
            GaussInt::try_from_wide(q0, q1)?,
            GaussInt::try_from_wide(r0, r1)?,
        ))
    }

    /// Remainder of [`GaussInt::divrem`].
    pub fn reduce(self, m: GaussInt) -> Result<GaussInt> {
        Ok(self.divrem(m)?.1)
    }

    /// `self / b` when the division is exact.
    pub fn div_exact(self, b: GaussInt) -> Option<GaussInt> {
        match self.divrem(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// True if `self` divides `other` (zero divides only zero).
    pub fn divides(self, other: GaussInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    /// `Some(u)` when `self` is the unit `u`.
    pub fn as_unit(self) -> Option<Unit> {
        Unit::ALL.into_iter().find(|u| u.value() == self)
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Odd means the norm is odd, i.e. `1 + i` does not divide `self`.
    pub fn is_odd(self) -> bool {
        (self.re ^ self.im) & 1 == 1
    }

    /// `self ≡ 1 mod 2(1 + i)`: `im` even and `re + im ≡ 1 mod 4`.
    pub fn is_primary(self) -> bool {
        self.im & 1 == 0 && (self.re as i128 + self.im as i128).rem_euclid(4) == 1
    }

    /// The unique primary associate `p = u·self`.
    pub fn primary_associate(self) -> Result<(Unit, GaussInt)> {
        if !self.is_odd() {
            return Err(Error::NotOdd(self.to_string()));
        }
        for u in Unit::ALL {
            let p = self.rotate(u);
            if p.is_primary() {
                return Ok((u, p));
            }
        }
        unreachable!("every odd Gaussian integer has a primary associate")
    }

    /// Rational gcd of the two components is 1.
    pub fn is_primitive(self) -> bool {
        gcd_i64(self.re, self.im) == 1
    }

    pub fn mod4(self) -> Mod4Class {
        Mod4Class::new(self.re, self.im)
    }

    pub fn is_pm1_mod4(self) -> bool {
        self.mod4().is_pm1()
    }

    /// Largest positive rational integer dividing `self` (0 for zero).
    pub fn content(self) -> u64 {
        gcd_i64(self.re, self.im)
    }

    /// The associate with `re > 0` and `im >= 0`.
    pub fn first_quadrant(self) -> GaussInt {
        if self.is_zero() {
            return self;
        }
        Unit::ALL
            .into_iter()
            .map(|u| self.rotate(u))
            .find(|z| z.re > 0 && z.im >= 0)
            .expect("a nonzero Gaussian integer has one associate in the first quadrant")
    }
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor by Euclidean division.
///
/// Odd results are returned as their primary associate, even ones rotated
/// into `re > 0, im >= 0`.
pub fn gcd(a: GaussInt, b: GaussInt) -> Result<GaussInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut a, mut b) = (a, b);
    while !b.is_zero() {
        let r = a.reduce(b)?;
        a = b;
        b = r;
    }
    Ok(normalize(a))
}

/// Canonical associate used by [`gcd`].
pub fn normalize(z: GaussInt) -> GaussInt {
    if z.is_odd() {
        z.primary_associate().map(|(_, p)| p).unwrap_or(z)
    } else {
        z.first_quadrant()
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        self.checked_add(rhs).expect("Gaussian addition out of range")
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        self.checked_sub(rhs).expect("Gaussian subtraction out of range")
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        self.checked_mul(rhs).expect("Gaussian multiplication out of range")
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussInt {
    fn from(n: i64) -> GaussInt {
        GaussInt::new(n, 0)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, v: i64| match v {
            1 => write!(f, "i"),
            -1 => write!(f, "-i"),
            v => write!(f, "{v}i"),
        };
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => imag(f, im),
            (re, im) => {
                write!(f, "{re}")?;
                if im > 0 {
                    write!(f, "+")?;
                }
                imag(f, im)
            }
        }
    }
}

impl FromStr for GaussInt {
    type Err = Error;

    /// Accepts `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` with an optional leading
    /// sign and no whitespace.
    fn from_str(s: &str) -> Result<GaussInt> {
        let bad = || Error::Parse(s.to_string());
        let int = |t: &str| -> Result<i64> {
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(bad());
            }
            t.parse::<i64>().map_err(|_| bad())
        };
        let coeff = |t: &str| -> Result<i64> {
            match t {
                "" | "+" => Ok(1),
                "-" => Ok(-1),
                t => int(t),
            }
        };
        if s.is_empty() {
            return Err(bad());
        }
        let z = match s.strip_suffix('i') {
            None => GaussInt::new(int(s)?, 0),
            Some(body) => {
                let split = body
                    .char_indices()
                    .skip(1)
                    .filter(|&(_, c)| c == '+' || c == '-')
                    .map(|(i, _)| i)
                    .last();
                match split {
                    Some(idx) => GaussInt::new(int(&body[..idx])?, coeff(&body[idx..])?),
                    None => GaussInt::new(0, coeff(body)?),
                }
            }
        };
        z.checked().map_err(|_| bad())
    }
}
