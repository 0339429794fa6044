//! The quadratic residue symbol `[α/β]` on odd Gaussian moduli and the tame
//! Hilbert symbol at odd places of `Q(i)`.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::gaussint::{gcd, GaussInt, Unit};
use crate::gfactor::{factor_gaussian, is_gauss_prime, PrimeEntry, PrimeKind};
use crate::modular::{inv_mod, jacobi};

/// Value of a residue symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    One,
}

impl SymbolValue {
    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::One => 1,
        }
    }

    pub fn from_i8(v: i8) -> SymbolValue {
        match v.signum() {
            -1 => SymbolValue::MinusOne,
            0 => SymbolValue::Zero,
            _ => SymbolValue::One,
        }
    }

    pub fn pow(self, e: u32) -> SymbolValue {
        match (self, e) {
            (_, 0) => SymbolValue::One,
            (SymbolValue::MinusOne, e) if e % 2 == 0 => SymbolValue::One,
            (v, _) => v,
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_i8(self.as_i8() * rhs.as_i8())
    }
}

impl std::iter::Product for SymbolValue {
    fn product<I: Iterator<Item = SymbolValue>>(iter: I) -> SymbolValue {
        iter.fold(SymbolValue::One, |a, b| a * b)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// An odd modulus together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredModulus {
    pub unit: Unit,
    /// Primary primes with their exponents, pairwise non-associate.
    pub primes: Vec<(GaussInt, u32)>,
}

impl FactoredModulus {
    /// The empty modulus `1`.
    pub fn one() -> FactoredModulus {
        FactoredModulus {
            unit: Unit::ONE,
            primes: Vec::new(),
        }
    }

    /// Squarefree modulus `unit · Π primes`.
    pub fn from_primes(unit: Unit, primes: &[GaussInt]) -> Result<FactoredModulus> {
        let mut out: Vec<(GaussInt, u32)> = Vec::with_capacity(primes.len());
        for &p in primes {
            if !p.is_odd() || !is_gauss_prime(p) {
                return Err(Error::NotPrime(p.to_string()));
            }
            let (_, primary) = p.primary_associate()?;
            match out.iter_mut().find(|(q, _)| *q == primary) {
                Some((_, e)) => *e += 1,
                None => out.push((primary, 1)),
            }
        }
        // Unit bookkeeping: absorb the units stripped by primary_associate.
        let mut u = unit;
        for &p in primes {
            let (v, _) = p.primary_associate()?;
            u = u * v.inverse();
        }
        Ok(FactoredModulus { unit: u, primes: out })
    }

    /// Factors an odd modulus.
    pub fn factor(beta: GaussInt) -> Result<FactoredModulus> {
        if !beta.is_odd() {
            return Err(Error::NotOdd(beta.to_string()));
        }
        let (unit, primes) = factor_gaussian(beta)?;
        Ok(FactoredModulus { unit, primes })
    }

    pub fn value(&self) -> GaussInt {
        self.primes.iter().fold(self.unit.value(), |acc, &(p, e)| {
            acc * p.checked_pow(e).expect("modulus in range")
        })
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega_tilde(&self) -> u32 {
        self.primes.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().all(|&(_, e)| e == 1)
    }
}

/// `base^exp mod m` by left-to-right square-and-multiply, reducing after
/// every product.
pub fn pow_mod_gauss(base: GaussInt, exp: u128, m: GaussInt) -> Result<GaussInt> {
    let base = base.reduce(m)?;
    let mut acc = GaussInt::ONE.reduce(m)?;
    for bit in (0..128 - exp.leading_zeros()).rev() {
        acc = acc.checked_mul(acc)?.reduce(m)?;
        if (exp >> bit) & 1 == 1 {
            acc = acc.checked_mul(base)?.reduce(m)?;
        }
    }
    Ok(acc)
}

/// `[α/π]` for an odd Gaussian prime `π`, by Euler's criterion
/// `α^((N(π)-1)/2) mod π`.
pub fn symbol_prime(alpha: GaussInt, pi: GaussInt) -> SymbolValue {
    debug_assert!(pi.is_odd() && is_gauss_prime(pi), "{pi} is not an odd prime");
    let e = (pi.norm() - 1) / 2;
    let r = pow_mod_gauss(alpha, e, pi).expect("reduced operands stay in range");
    if r.is_zero() {
        SymbolValue::Zero
    } else if pi.divides(r - GaussInt::ONE) {
        SymbolValue::One
    } else if pi.divides(r + GaussInt::ONE) {
        SymbolValue::MinusOne
    } else {
        panic!("Euler criterion gave {r} mod {pi}: modulus is not prime")
    }
}

/// `[α/β]`, multiplicative over the prime factors of `β`; the unit part of
/// `β` is ignored.
pub fn symbol(alpha: GaussInt, beta: &FactoredModulus) -> SymbolValue {
    beta.primes
        .iter()
        .map(|&(p, e)| symbol_prime(alpha, p).pow(e))
        .product()
}

/// `[i/β]` from `N(β) mod 8`, for odd `β`.
pub fn symbol_of_i(norm: u128) -> SymbolValue {
    if norm % 8 == 1 {
        SymbolValue::One
    } else {
        SymbolValue::MinusOne
    }
}

/// Exponent of `π` in `z`, and the cofactor.
fn strip_prime(mut z: GaussInt, pi: GaussInt) -> (u32, GaussInt) {
    let mut v = 0;
    while let Some(q) = z.div_exact(pi) {
        z = q;
        v += 1;
    }
    (v, z)
}

/// Tame Hilbert symbol `(a, b)_π` at the odd place `π`.
///
/// With `m = v_π(a)` and `k = v_π(b)`, this is the residue symbol of the
/// `π`-unit `(-1)^(mk) a^k / b^m`.
pub fn tame_hilbert(a: GaussInt, b: GaussInt, pi: GaussInt) -> Result<SymbolValue> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Invalid("Hilbert symbol of zero".into()));
    }
    if !pi.is_odd() {
        return Err(Error::NotOdd(pi.to_string()));
    }
    let (m, a_unit) = strip_prime(a, pi);
    let (k, b_unit) = strip_prime(b, pi);
    let sign = if (m * k) % 2 == 1 {
        symbol_prime(GaussInt::new(-1, 0), pi)
    } else {
        SymbolValue::One
    };
    // The residue symbol of b^-m equals that of b^m.
    let v = sign * symbol_prime(a_unit, pi).pow(k) * symbol_prime(b_unit, pi).pow(m);
    debug_assert_ne!(v, SymbolValue::Zero);
    Ok(v)
}

/// Checks `[α/β] = [β/α]` for coprime primary `α`, `β`.
pub fn verify_reciprocity(alpha: GaussInt, beta: GaussInt) -> Result<bool> {
    for z in [alpha, beta] {
        if !z.is_primary() {
            return Err(Error::Invalid(format!("{z} is not primary")));
        }
    }
    if !gcd(alpha, beta)?.is_unit() {
        return Err(Error::Invalid(format!("{alpha} and {beta} are not coprime")));
    }
    let lhs = symbol(alpha, &FactoredModulus::factor(beta)?);
    let rhs = symbol(beta, &FactoredModulus::factor(alpha)?);
    Ok(lhs == rhs)
}

/// The quadratic character of the residue field at one odd prime, evaluated
/// through a rational Legendre symbol.
///
/// For a split prime of norm `p` the residue field is `F_p` with `i` mapped
/// to a fixed root of `-1`; for an inert prime `q` the character is
/// `α ↦ (N(α) | q)` because Frobenius acts as conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueCharacter {
    Split { p: u64, root: u64 },
    Inert { q: u64 },
}

impl ResidueCharacter {
    pub fn new(pi: GaussInt) -> Result<ResidueCharacter> {
        if !pi.is_odd() || !is_gauss_prime(pi) {
            return Err(Error::NotPrime(pi.to_string()));
        }
        if pi.re == 0 || pi.im == 0 {
            return Ok(ResidueCharacter::Inert { q: pi.content() });
        }
        let p = pi.norm() as u64;
        // a + b·i ≡ 0 (mod π) gives i ≡ -a / b (mod p).
        let a = pi.re.rem_euclid(p as i64) as u64;
        let b = pi.im.rem_euclid(p as i64) as u64;
        let b_inv = inv_mod(b, p).expect("0 < |b| < p");
        let root = crate::modular::mul_mod((p - a) % p, b_inv, p);
        Ok(ResidueCharacter::Split { p, root })
    }

    /// Character for a prime already known to divide a factored `n`; skips
    /// the primality check.
    pub fn from_entry(e: &PrimeEntry) -> ResidueCharacter {
        match e.kind {
            PrimeKind::Inert => ResidueCharacter::Inert { q: e.rational_p },
            _ => {
                let p = e.rational_p;
                let a = e.primary.re.rem_euclid(p as i64) as u64;
                let b = e.primary.im.rem_euclid(p as i64) as u64;
                let b_inv = inv_mod(b, p).expect("0 < |b| < p");
                ResidueCharacter::Split {
                    p,
                    root: crate::modular::mul_mod((p - a) % p, b_inv, p),
                }
            }
        }
    }

    pub fn eval(&self, alpha: GaussInt) -> SymbolValue {
        let v = match *self {
            ResidueCharacter::Split { p, root } => {
                let x = alpha.re.rem_euclid(p as i64) as u64;
                let y = alpha.im.rem_euclid(p as i64) as u64;
                let r = (x as u128 + y as u128 * root as u128) % p as u128;
                jacobi(r as i64, p)
            }
            ResidueCharacter::Inert { q } => {
                let x = alpha.re.rem_euclid(q as i64) as u128;
                let y = alpha.im.rem_euclid(q as i64) as u128;
                jacobi(((x * x + y * y) % q as u128) as i64, q)
            }
        };
        SymbolValue::from_i8(v)
    }

    /// Norm of the underlying prime.
    pub fn norm(&self) -> u128 {
        match *self {
            ResidueCharacter::Split { p, .. } => p as u128,
            ResidueCharacter::Inert { q } => q as u128 * q as u128,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn symbol_prime_examples() {
        assert_eq!(symbol_prime(GaussInt::I, g(-3, 0)), SymbolValue::One);
        assert_eq!(symbol_prime(GaussInt::I, g(-1, -2)), SymbolValue::MinusOne);
        assert_eq!(symbol_prime(g(-1, -2), g(-3, 0)), SymbolValue::MinusOne);
        assert_eq!(symbol_prime(g(6, 3), g(-3, 0)), SymbolValue::Zero);
    }

    #[test]
    fn euler_by_hand_for_minus_one_minus_two_i_mod_three() {
        // (-1-2i)^4 reduced mod 3 by direct expansion.
        let z = g(-1, -2);
        let fourth = z * z * z * z;
        assert_eq!(g(fourth.re.rem_euclid(3), fourth.im.rem_euclid(3)), g(2, 0));
    }

    #[test]
    fn composite_symbol_examples() {
        let three = FactoredModulus::factor(g(3, 0)).unwrap();
        assert_eq!(three.unit, Unit::MINUS_ONE);
        assert_eq!(symbol(g(2, 0), &three), SymbolValue::One);
        let m = FactoredModulus::factor(g(-1, -2)).unwrap();
        assert_eq!(symbol(g(7, 0), &m), SymbolValue::MinusOne);
        assert_eq!(symbol(g(123, -7), &FactoredModulus::one()), SymbolValue::One);
    }

    #[test]
    fn factored_modulus_from_primes() {
        let m = FactoredModulus::from_primes(Unit::ONE, &[g(1, 2), g(3, 0)]).unwrap();
        assert_eq!(m.value(), g(3, 6));
        assert!(m.is_squarefree());
        assert!(FactoredModulus::from_primes(Unit::ONE, &[g(5, 0)]).is_err());
        assert!(FactoredModulus::factor(g(2, 0)).is_err());
    }

    #[test]
    fn tame_hilbert_examples() {
        let pi = g(-1, -2);
        assert_eq!(tame_hilbert(g(3, 0), g(7, 0), pi).unwrap(), SymbolValue::One);
        assert_eq!(tame_hilbert(pi, pi, pi).unwrap(), SymbolValue::One);
        assert_eq!(
            tame_hilbert(pi, pi, pi).unwrap(),
            symbol_prime(g(-1, 0), pi)
        );
        assert!(tame_hilbert(GaussInt::ZERO, pi, pi).is_err());
    }

    #[test]
    fn tame_hilbert_on_n_five_matches_residue_condition() {
        // n = 5 = (-1-2i)(-1+2i), α = -1-2i.
        let pi = g(-1, -2);
        let alpha = pi;
        let rest = g(5, 0).div_exact(alpha).unwrap();
        // At π | α the condition is [n/α / π]; at π̄ | n/α it is [α / π̄].
        assert_eq!(tame_hilbert(alpha, rest, pi).unwrap(), symbol_prime(rest, pi));
        assert_eq!(
            tame_hilbert(alpha, rest, pi.conj()).unwrap(),
            symbol_prime(alpha, pi.conj())
        );
    }

    #[test]
    fn reciprocity_examples() {
        assert!(verify_reciprocity(g(-3, 0), g(-1, -2)).unwrap());
        assert_eq!(symbol(g(-3, 0), &FactoredModulus::factor(g(-1, -2)).unwrap()), SymbolValue::MinusOne);
        assert_eq!(symbol(g(-1, -2), &FactoredModulus::factor(g(-3, 0)).unwrap()), SymbolValue::MinusOne);
        assert!(verify_reciprocity(g(-3, 0), g(-7, 0)).unwrap());
        assert_eq!(symbol(g(-3, 0), &FactoredModulus::factor(g(-7, 0)).unwrap()), SymbolValue::One);
        assert!(verify_reciprocity(g(-1, -2), g(-1, -2)).is_err());
        assert!(verify_reciprocity(g(1, 2), g(-3, 0)).is_err());
    }

    #[test]
    fn residue_character_matches_euler() {
        let primes = [g(-3, 0), g(-7, 0), g(-1, -2), g(-1, 2), g(3, 2), g(-3, 2), g(5, 4), g(-19, 0)];
        for pi in primes {
            let chi = ResidueCharacter::new(pi).unwrap();
            for re in -30..30 {
                for im in -30..30 {
                    let a = g(re, im);
                    assert_eq!(chi.eval(a), symbol_prime(a, pi), "[{a}/{pi}]");
                }
            }
        }
    }

    #[test]
    fn unit_symbol_from_norm() {
        assert_eq!(symbol_of_i(9), SymbolValue::One);
        assert_eq!(symbol_of_i(5), SymbolValue::MinusOne);
    }
}
