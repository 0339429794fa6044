//! Rational and Gaussian factorization of odd squarefree integers.
//!
//! Rational factorization uses a smallest-prime-factor table when one is
//! supplied and trial division otherwise. Split primes `p ≡ 1 mod 4` are
//! resolved into `π·π̄` once and memoized process-wide.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::gaussint::{gcd, GaussInt, Unit};
use crate::modular::{is_prime, sqrt_mod};

/// Largest input accepted by trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 50;

/// Smallest-prime-factor table for `1..=bound`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    bound: u64,
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(bound: u64) -> SpfSieve {
        assert!(bound < u32::MAX as u64, "sieve bound too large");
        let len = bound as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for m in 2..len {
            if spf[m] == 0 {
                spf[m] = m as u32;
                primes.push(m as u32);
            }
            let limit = spf[m];
            for &p in &primes {
                let multiple = m * p as usize;
                if p > limit || multiple >= len {
                    break;
                }
                spf[multiple] = p;
            }
        }
        if len > 1 {
            spf[1] = 1;
        }
        SpfSieve { bound, spf }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Smallest prime factor of `m` (1 for `m = 1`).
    pub fn spf(&self, m: u64) -> u64 {
        self.spf[m as usize] as u64
    }

    pub fn is_prime(&self, m: u64) -> bool {
        m >= 2 && self.spf(m) == m
    }

    /// Prime factorization of `m <= bound`, ascending.
    pub fn factor(&self, mut m: u64) -> Vec<(u64, u32)> {
        debug_assert!(m >= 1 && m <= self.bound);
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf(m);
            m /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Complete prime factorization of `n >= 1` as ascending `(p, e)` pairs.
pub fn factor_rational(n: u64, sieve: Option<&SpfSieve>) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    if let Some(s) = sieve {
        if n <= s.bound() {
            return Ok(s.factor(n));
        }
    }
    if n > TRIAL_DIVISION_LIMIT {
        return Err(Error::OutOfRange(n));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    let mut d = 3;
    while d * d <= m {
        push(d, &mut m);
        d += 2;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of an odd squarefree `n`, rejecting anything else.
pub fn odd_squarefree_primes(n: u64, sieve: Option<&SpfSieve>) -> Result<Vec<u64>> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::NotOddSquarefree(n));
    }
    let f = factor_rational(n, sieve)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotOddSquarefree(n));
    }
    Ok(f.into_iter().map(|(p, _)| p).collect())
}

static SPLIT_CACHE: LazyLock<RwLock<HashMap<u64, GaussInt>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// The associate of `z` or `z̄` with `re ≡ 1 mod 4`, `im` even and `im >= 0`.
///
/// Defined for odd `z` whose associates include such an element (split
/// primes and, more generally, odd non-real values).
pub fn split_normal(z: GaussInt) -> Option<GaussInt> {
    [z, z.conj()]
        .into_iter()
        .flat_map(|w| Unit::ALL.map(|u| w.rotate(u)))
        .filter(|w| w.re.rem_euclid(4) == 1 && w.im % 2 == 0 && w.im >= 0)
        .min_by_key(|w| w.im == 0)
}

fn compute_split_prime(p: u64) -> GaussInt {
    let s = sqrt_mod(p - 1, p).expect("-1 is a square modulo p ≡ 1 mod 4");
    let g = gcd(GaussInt::new(p as i64, 0), GaussInt::new(s as i64, 1))
        .expect("p is nonzero");
    let pi = split_normal(g).expect("split primes admit the normalization");
    assert_eq!(pi.norm(), p as u128, "gcd(p, s + i) must have norm p");
    pi
}

/// `π = a + bi` with `a² + b² = p`, `a ≡ 1 mod 4`, `b` even and positive.
///
/// Found from a square root of `-1` modulo `p` (Tonelli–Shanks with the
/// smallest non-residue) followed by `gcd(p, s + i)`. Results are memoized.
pub fn split_prime(p: u64) -> Result<GaussInt> {
    if p % 4 != 1 || p > TRIAL_DIVISION_LIMIT {
        return Err(Error::NotOneModFour(p));
    }
    if let Some(&pi) = SPLIT_CACHE.read().expect("split cache poisoned").get(&p) {
        return Ok(pi);
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let pi = compute_split_prime(p);
    // Concurrent inserts write the same canonical value.
    SPLIT_CACHE
        .write()
        .expect("split cache poisoned")
        .insert(p, pi);
    Ok(pi)
}

/// Role of a Gaussian prime dividing a rational `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeKind {
    /// Primary associate of `split_prime(p)`.
    SplitFirst,
    /// Primary associate of the conjugate of `split_prime(p)`.
    SplitConjugate,
    /// Primary associate of a rational prime `q ≡ 3 mod 4`.
    Inert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeEntry {
    pub primary: GaussInt,
    pub kind: PrimeKind,
    pub rational_p: u64,
}

impl PrimeEntry {
    /// The same prime in the `a ≡ 1 mod 4`, `b` even normalization
    /// (`q` itself for inert primes).
    pub fn split_normalized(&self) -> GaussInt {
        match self.kind {
            PrimeKind::Inert => GaussInt::new(self.rational_p as i64, 0),
            PrimeKind::SplitFirst => split_prime(self.rational_p).expect("cached"),
            PrimeKind::SplitConjugate => split_prime(self.rational_p).expect("cached").conj(),
        }
    }
}

/// Factorization of an odd squarefree `n` into primary Gaussian primes.
///
/// Entries are ordered by ascending rational prime, with the split-first
/// prime before its conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussFactorization {
    pub n: u64,
    pub parts: Vec<PrimeEntry>,
    /// `n = unit · Π primary`.
    pub unit: Unit,
}

impl GaussFactorization {
    pub fn omega_tilde(&self) -> usize {
        self.parts.len()
    }

    pub fn primaries(&self) -> impl Iterator<Item = GaussInt> + '_ {
        self.parts.iter().map(|e| e.primary)
    }

    pub fn omega1(&self) -> u32 {
        self.parts
            .iter()
            .filter(|e| e.kind == PrimeKind::SplitFirst)
            .count() as u32
    }

    pub fn omega3(&self) -> u32 {
        self.parts
            .iter()
            .filter(|e| e.kind == PrimeKind::Inert)
            .count() as u32
    }

    /// Distinct rational primes, ascending.
    pub fn rational_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.parts.iter().map(|e| e.rational_p).collect();
        ps.dedup();
        ps
    }

    pub fn generic(&self) -> bool {
        self.parts.iter().any(|e| e.rational_p % 8 == 5)
    }
}

/// Gaussian factorization of an odd squarefree positive `n`.
pub fn gauss_factorize(n: u64) -> Result<GaussFactorization> {
    gauss_factorize_with(n, None)
}

pub fn gauss_factorize_with(n: u64, sieve: Option<&SpfSieve>) -> Result<GaussFactorization> {
    let primes = odd_squarefree_primes(n, sieve)?;
    Ok(factorization_from_primes(n, &primes))
}

/// Builds the factorization from the (ascending, distinct, odd) rational
/// primes of `n`.
pub fn factorization_from_primes(n: u64, primes: &[u64]) -> GaussFactorization {
    let mut parts = Vec::with_capacity(2 * primes.len());
    for &p in primes {
        if p % 4 == 3 {
            parts.push(PrimeEntry {
                primary: GaussInt::new(-(p as i64), 0),
                kind: PrimeKind::Inert,
                rational_p: p,
            });
        } else {
            let pi = split_prime(p).expect("odd prime divisor ≡ 1 mod 4");
            let first = pi.primary_associate().expect("odd").1;
            parts.push(PrimeEntry {
                primary: first,
                kind: PrimeKind::SplitFirst,
                rational_p: p,
            });
            parts.push(PrimeEntry {
                primary: first.conj(),
                kind: PrimeKind::SplitConjugate,
                rational_p: p,
            });
        }
    }
    // The product of primaries is primary, so n and the product differ by ±1.
    let unit = if n % 4 == 1 { Unit::ONE } else { Unit::MINUS_ONE };
    GaussFactorization { n, parts, unit }
}

/// Factorization of an arbitrary nonzero Gaussian integer:
/// `z = unit · Π prime^e`, odd primes primary and `1 + i` for the even prime.
pub fn factor_gaussian(z: GaussInt) -> Result<(Unit, Vec<(GaussInt, u32)>)> {
    if z.is_zero() {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    let norm = z.norm();
    if norm > TRIAL_DIVISION_LIMIT as u128 {
        return Err(Error::Range(z.to_string()));
    }
    let mut rest = z;
    let mut out = Vec::new();
    let mut strip = |pi: GaussInt, rest: &mut GaussInt| {
        let mut e = 0;
        while let Some(q) = rest.div_exact(pi) {
            *rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((pi, e));
        }
    };
    for (p, _) in factor_rational(norm as u64, None)? {
        match p % 4 {
            2 => strip(GaussInt::ONE_PLUS_I, &mut rest),
            3 => strip(GaussInt::new(-(p as i64), 0), &mut rest),
            _ => {
                let pi = split_prime(p)?.primary_associate()?.1;
                strip(pi, &mut rest);
                strip(pi.conj(), &mut rest);
            }
        }
    }
    let unit = rest
        .as_unit()
        .ok_or_else(|| Error::Internal(format!("cofactor {rest} of {z} is not a unit")))?;
    Ok((unit, out))
}

/// True when `z` is an irreducible element of `Z[i]` (any associate).
pub fn is_gauss_prime(z: GaussInt) -> bool {
    let norm = z.norm();
    if norm > u64::MAX as u128 {
        return false;
    }
    let norm = norm as u64;
    if is_prime(norm) {
        return true;
    }
    // Inert primes: associates of a rational prime q ≡ 3 mod 4.
    let q = z.content();
    (z.re == 0 || z.im == 0) && q % 4 == 3 && is_prime(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn rational_examples() {
        assert_eq!(factor_rational(1443, None).unwrap(), vec![(3, 1), (13, 1), (37, 1)]);
        assert_eq!(factor_rational(1, None).unwrap(), vec![]);
        assert_eq!(factor_rational(4895, None).unwrap(), vec![(5, 1), (11, 1), (89, 1)]);
        let sieve = SpfSieve::new(5000);
        assert_eq!(factor_rational(4895, Some(&sieve)).unwrap(), vec![(5, 1), (11, 1), (89, 1)]);
        assert_eq!(factor_rational(4608, Some(&sieve)).unwrap(), vec![(2, 9), (3, 2)]);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let sieve = SpfSieve::new(20_000);
        for m in 1..=20_000 {
            assert_eq!(sieve.factor(m), factor_rational(m, None).unwrap());
        }
    }

    #[test]
    fn split_prime_examples() {
        assert_eq!(split_prime(5).unwrap(), g(1, 2));
        assert_eq!(split_prime(13).unwrap(), g(-3, 2));
        assert_eq!(split_prime(3), Err(Error::NotOneModFour(3)));
        assert!(split_prime(21).is_err());
    }

    #[test]
    fn split_prime_normalization() {
        for p in (5..100_000u64).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let pi = split_prime(p).unwrap();
            assert_eq!(pi.norm(), p as u128);
            assert_eq!(pi.re.rem_euclid(4), 1);
            assert!(pi.im > 0 && pi.im % 2 == 0);
            assert_eq!(split_prime(p).unwrap(), pi);
        }
    }

    #[test]
    fn normalizations_convert() {
        for p in [5u64, 13, 17, 29, 37, 41, 97, 101, 1009] {
            let pi = split_prime(p).unwrap();
            let primary = pi.primary_associate().unwrap().1;
            assert!(primary.is_primary());
            assert_eq!(split_normal(primary), Some(pi));
            assert_eq!(split_normal(primary.conj()), Some(pi));
        }
    }

    #[test]
    fn gauss_factorize_examples() {
        let f = gauss_factorize(15).unwrap();
        let got: Vec<(GaussInt, PrimeKind)> = f.parts.iter().map(|e| (e.primary, e.kind)).collect();
        assert_eq!(
            got,
            vec![
                (g(-3, 0), PrimeKind::Inert),
                (g(-1, -2), PrimeKind::SplitFirst),
                (g(-1, 2), PrimeKind::SplitConjugate),
            ]
        );
        assert_eq!(gauss_factorize(3).unwrap().parts[0].primary, g(-3, 0));
        assert!(gauss_factorize(1).unwrap().parts.is_empty());
        assert!(gauss_factorize(9).is_err());
        assert!(gauss_factorize(10).is_err());
    }

    #[test]
    fn reconstruction_and_omega_tilde() {
        let sieve = SpfSieve::new(100_000);
        for n in (1..100_000u64).step_by(2) {
            let Ok(f) = gauss_factorize_with(n, Some(&sieve)) else {
                continue;
            };
            let prod = f.primaries().fold(GaussInt::ONE, |acc, p| acc * p);
            assert_eq!(f.unit * prod, g(n as i64, 0), "n = {n}");
            assert_eq!(f.omega_tilde() as u32, 2 * f.omega1() + f.omega3());
            for e in &f.parts {
                assert!(e.primary.is_primary());
                match e.kind {
                    PrimeKind::Inert => assert_eq!(e.rational_p % 4, 3),
                    _ => assert_eq!(e.primary.norm(), e.rational_p as u128),
                }
            }
        }
    }

    #[test]
    fn factor_gaussian_reassembles() {
        for re in -40..40 {
            for im in -40..40 {
                let z = g(re, im);
                if z.is_zero() {
                    continue;
                }
                let (u, ps) = factor_gaussian(z).unwrap();
                let prod = ps
                    .iter()
                    .fold(GaussInt::ONE, |acc, &(p, e)| acc * p.checked_pow(e).unwrap());
                assert_eq!(u * prod, z);
                for &(p, _) in &ps {
                    assert!(is_gauss_prime(p));
                    assert!(p == GaussInt::ONE_PLUS_I || p.is_primary());
                }
            }
        }
    }

    #[test]
    fn gauss_primes() {
        assert!(is_gauss_prime(g(-3, 0)));
        assert!(is_gauss_prime(g(0, 7)));
        assert!(is_gauss_prime(g(1, 2)));
        assert!(is_gauss_prime(g(1, 1)));
        assert!(!is_gauss_prime(g(5, 0)));
        assert!(!is_gauss_prime(g(3, 3)));
        assert!(!is_gauss_prime(GaussInt::ONE));
    }
}
