//! The divisor-counting function `f(n)`, the 4-rank of `Cl(Q(i, √n))` for
//! generic `n`, and the combinatorial identities around it.
//!
//! `f(n)` is a quarter of the number of divisors `β | n` in `Z[i]` with
//! `β ≡ ±1 mod 4` such that `n/β` is a square modulo every prime of `β` and
//! `β` is a square modulo every prime of `n/β`. For generic `n` it equals
//! `2^rk₄`.
//!
//! Three independent evaluations are provided:
//!
//! * [`f_direct`]: the production path. Residue symbols between the primes
//!   of `n` are tabulated once as sign bitmasks; each candidate divisor is
//!   then tested with popcounts.
//! * [`f_char`]: the fourfold character sum over `n = β₀β₁β₂β₃`, evaluated
//!   with Euler-criterion symbols and exact dyadic arithmetic.
//! * [`criterion_hilbert`]: tame Hilbert symbols `(α, n/α)_π` over the genus
//!   group.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gaussint::{GaussInt, Mod4Class, Unit};
use crate::genus::SquarefreeProfile;
use crate::gfactor::{
    gauss_factorize, odd_squarefree_primes, GaussFactorization, PrimeKind,
};
use crate::gsymbol::{
    symbol_of_i, symbol_prime, tame_hilbert, FactoredModulus, ResidueCharacter, SymbolValue,
};

/// Largest `ω̃(n)` handled by the bitmask enumeration.
pub const MAX_OMEGA_TILDE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourRankRecord {
    pub n: u64,
    pub profile: SquarefreeProfile,
    pub f: u64,
    /// `log₂ f`, present only for generic `n`.
    pub rk4: Option<u32>,
    /// `ω₃(n) > 0` and `f ≥ 2^ω₃(n)`; for `ω₃ = 0` the inequality holds
    /// for every `n` and carries no information.
    pub exceptional: bool,
}

impl FourRankRecord {
    pub fn from_factorization(fact: &GaussFactorization) -> FourRankRecord {
        let profile = SquarefreeProfile::from_factorization(fact);
        let f = f_from_factorization(fact);
        FourRankRecord::new(profile, f)
    }

    pub fn new(profile: SquarefreeProfile, f: u64) -> FourRankRecord {
        debug_assert!(f.is_power_of_two());
        FourRankRecord {
            n: profile.n,
            profile,
            f,
            rk4: profile.generic.then(|| f.trailing_zeros()),
            exceptional: profile.omega3 > 0 && f >= 1 << profile.omega3,
        }
    }

    /// `f / 2^(ω₃ - 1)`, the summand of the averaged sum.
    pub fn normalized(&self) -> Dyadic {
        Dyadic::from_int(2 * self.f as i128).halve(self.profile.omega3)
    }

    /// Row in the `n,omega1,omega3,generic,f,rk4,exceptional` schema.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.profile.omega1,
            self.profile.omega3,
            u8::from(self.profile.generic),
            self.f,
            self.rk4.map(|r| r.to_string()).unwrap_or_default(),
            u8::from(self.exceptional)
        )
    }
}

pub const RECORD_CSV_HEADER: &str = "n,omega1,omega3,generic,f,rk4,exceptional";

impl Serialize for FourRankRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FourRankRecord", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("omega1", &self.profile.omega1)?;
        st.serialize_field("omega3", &self.profile.omega3)?;
        st.serialize_field("generic", &self.profile.generic)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("rk4", &self.rk4)?;
        st.serialize_field("exceptional", &self.exceptional)?;
        st.end()
    }
}

fn require_at_least_three(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::NotOddSquarefree(n));
    }
    Ok(())
}

/// Symbol data for the primes of `n`, as sign bitmasks.
struct SignTable {
    /// Bit `j` of `minus[i]` is set when `[π_j / π_i] = -1`.
    minus: Vec<u32>,
    /// Bit `i` set when `[i / π_i] = -1`, i.e. `N(π_i) ≡ 5 mod 8`.
    i_minus: u32,
    classes: Vec<Mod4Class>,
}

impl SignTable {
    fn new(fact: &GaussFactorization) -> SignTable {
        let primes: Vec<GaussInt> = fact.primaries().collect();
        let chars: Vec<ResidueCharacter> =
            fact.parts.iter().map(ResidueCharacter::from_entry).collect();
        let mut minus = vec![0u32; primes.len()];
        let mut i_minus = 0u32;
        for (i, chi) in chars.iter().enumerate() {
            if symbol_of_i(chi.norm()) == SymbolValue::MinusOne {
                i_minus |= 1 << i;
            }
            for (j, &pj) in primes.iter().enumerate() {
                if i != j && chi.eval(pj) == SymbolValue::MinusOne {
                    minus[i] |= 1 << j;
                }
            }
        }
        SignTable {
            minus,
            i_minus,
            classes: primes.iter().map(|p| p.mod4()).collect(),
        }
    }
}

/// `f(n)` from a precomputed factorization (`f(1) = 1`).
pub fn f_from_factorization(fact: &GaussFactorization) -> u64 {
    let w = fact.omega_tilde();
    assert!(w <= MAX_OMEGA_TILDE, "too many prime factors");
    if w == 0 {
        return 1;
    }
    let table = SignTable::new(fact);
    let full = (1u32 << w) - 1;
    let unit_exp = fact.unit.exponent();

    // class of Π_{j ∈ S} π_j for every subset S
    let mut subset_class = vec![Mod4Class::new(1, 0); 1 << w];
    for s in 1..=full as usize {
        let low = s.trailing_zeros() as usize;
        subset_class[s] = subset_class[s & (s - 1)] * table.classes[low];
    }

    let mut count = 0u64;
    for s in 0..=full {
        let base_class = subset_class[s as usize];
        for k in 0..4u32 {
            // β = i^k Π_{j ∈ S} π_j
            if !(Mod4Class::from(Unit::pow_i(k)) * base_class).is_pm1() {
                continue;
            }
            // n/β = i^(e - k) Π_{j ∉ S} π_j
            let cofactor_odd = (unit_exp + 4 - k) % 2 == 1;
            let beta_odd = k % 2 == 1;
            let ok = (0..w).all(|i| {
                let bit = 1u32 << i;
                let flips = if s & bit != 0 {
                    (table.minus[i] & !s & full).count_ones()
                        + u32::from(cofactor_odd && table.i_minus & bit != 0)
                } else {
                    (table.minus[i] & s).count_ones()
                        + u32::from(beta_odd && table.i_minus & bit != 0)
                };
                flips % 2 == 0
            });
            if ok {
                count += 1;
            }
        }
    }
    assert!(count.is_multiple_of(4), "divisor count {count} not divisible by 4");
    count / 4
}

/// `f(n)` by enumeration of the divisors `β ≡ ±1 mod 4`.
pub fn f_direct(n: u64) -> Result<u64> {
    require_at_least_three(n)?;
    Ok(f_from_factorization(&gauss_factorize(n)?))
}

/// The residue condition on one divisor `β` of `n`, evaluated with
/// Euler-criterion symbols: `[n/β / π] = 1` for every `π | β` and
/// `[β / π] = 1` for every `π | n/β`.
pub fn residue_condition(fact: &GaussFactorization, beta: GaussInt) -> Result<bool> {
    let n = GaussInt::new(fact.n as i64, 0);
    let rest = n
        .div_exact(beta)
        .ok_or_else(|| Error::Invalid(format!("{beta} does not divide {}", fact.n)))?;
    Ok(fact.primaries().all(|pi| {
        let arg = if pi.divides(beta) { rest } else { beta };
        symbol_prime(arg, pi) == SymbolValue::One
    }))
}

/// All divisors `β = i^k Π_{S} π` of `n` with `β ≡ ±1 mod 4`.
pub fn pm1_divisors(fact: &GaussFactorization) -> Vec<GaussInt> {
    let primes: Vec<GaussInt> = fact.primaries().collect();
    let mut out = Vec::new();
    for s in 0u32..1 << primes.len() {
        let prod = subset_product(&primes, s);
        for u in Unit::ALL {
            let beta = prod.rotate(u);
            if beta.is_pm1_mod4() {
                out.push(beta);
            }
        }
    }
    out
}

fn subset_product(primes: &[GaussInt], mask: u32) -> GaussInt {
    primes
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(GaussInt::ONE, |acc, (_, &p)| acc * p)
}

/// `f(n)` through the fourfold character sum
/// `¼ Σ 2^-Σω̃(β_i) [β₀β₁/β₃]·[β₂β₃/β₁]` over `n = β₀β₁β₂β₃` with
/// `β₀β₁ ≡ ±1 mod 4` and `β₁`, `β₃` primary.
pub fn f_char(n: u64) -> Result<u64> {
    require_at_least_three(n)?;
    let fact = gauss_factorize(n)?;
    let total = char_sum(&fact)?;
    let quarter = total.halve(2);
    let v = quarter
        .to_integer()
        .ok_or_else(|| Error::Internal(format!("character sum for {n} is {quarter}")))?;
    u64::try_from(v).map_err(|_| Error::Internal(format!("character sum for {n} is {v}")))
}

/// The un-normalized sum `Σ 2^-Σω̃(β_i) [β₀β₁/β₃]·[β₂β₃/β₁]` (equal to `4 f(n)`).
pub fn char_sum(fact: &GaussFactorization) -> Result<Dyadic> {
    let primes: Vec<GaussInt> = fact.primaries().collect();
    let w = primes.len();
    let n = GaussInt::new(fact.n as i64, 0);
    let mut acc = Dyadic::ZERO;
    for code in 0u64..1 << (2 * w) {
        let mut slots = [0u32; 4];
        for (i, _) in primes.iter().enumerate() {
            slots[(code >> (2 * i) & 3) as usize] |= 1 << i;
        }
        let beta1 = subset_product(&primes, slots[1]);
        let beta3 = subset_product(&primes, slots[3]);
        let core0 = subset_product(&primes, slots[0]);
        for u in Unit::ALL {
            let beta0 = core0.rotate(u);
            let b01 = beta0 * beta1;
            if !b01.is_pm1_mod4() {
                continue;
            }
            let beta2 = n
                .div_exact(b01 * beta3)
                .ok_or_else(|| Error::Internal("non-exact cofactor".into()))?;
            let b23 = beta2 * beta3;
            let sign: SymbolValue = primes
                .iter()
                .enumerate()
                .filter_map(|(i, &p)| {
                    if slots[3] >> i & 1 == 1 {
                        Some(symbol_prime(b01, p))
                    } else if slots[1] >> i & 1 == 1 {
                        Some(symbol_prime(b23, p))
                    } else {
                        None
                    }
                })
                .product();
            let weight: u32 = slots.iter().map(|s| s.count_ones()).sum();
            acc = acc
                .checked_add(Dyadic::signed_inverse_power(sign.as_i8(), weight))
                .ok_or_else(|| Error::Internal("dyadic overflow".into()))?;
        }
    }
    Ok(acc)
}

/// `2^-ω̃(β) Σ_{β₁ | β primary} [m/β₁]`: 1 when `m` is a square modulo every
/// prime of the squarefree odd `β`, else 0.
pub fn detect_indicator(beta: &FactoredModulus, m: GaussInt) -> Result<u8> {
    if !beta.is_squarefree() {
        return Err(Error::Invalid("modulus must be squarefree".into()));
    }
    let primes: Vec<GaussInt> = beta.primes.iter().map(|&(p, _)| p).collect();
    let mut acc = Dyadic::ZERO;
    for s in 0u32..1 << primes.len() {
        let v: SymbolValue = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .map(|(_, &p)| symbol_prime(m, p))
            .product();
        acc += Dyadic::from_int(v.as_i8() as i128);
    }
    match acc.halve(primes.len() as u32).to_integer() {
        Some(0) => Ok(0),
        Some(1) => Ok(1),
        _ => Err(Error::Internal(format!("indicator evaluated to {acc}"))),
    }
}

/// 4-rank record for odd squarefree `n ≥ 3`; `rk4` is set only for generic `n`.
pub fn rank4_generic(n: u64) -> Result<FourRankRecord> {
    require_at_least_three(n)?;
    Ok(FourRankRecord::from_factorization(&gauss_factorize(n)?))
}

/// Whether `(α, n/α)_π = 1` at every prime `π | n`.
pub fn criterion_hilbert(n: u64, alpha: GaussInt) -> Result<bool> {
    let fact = gauss_factorize(n)?;
    criterion_hilbert_with(&fact, alpha)
}

pub fn criterion_hilbert_with(fact: &GaussFactorization, alpha: GaussInt) -> Result<bool> {
    let n = GaussInt::new(fact.n as i64, 0);
    if alpha.is_zero() {
        return Err(Error::Invalid("α must be nonzero".into()));
    }
    let rest = n
        .div_exact(alpha)
        .ok_or_else(|| Error::Invalid(format!("{alpha} does not divide {}", fact.n)))?;
    for pi in fact.primaries() {
        if tame_hilbert(alpha, rest, pi)? != SymbolValue::One {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of rational quadruples `β₀β₁β₂β₃ = n` with `β₁ ≡ β₃ ≡ 1 mod 4`,
/// by direct enumeration.
pub fn nu(n: u64) -> Result<u64> {
    let primes = odd_squarefree_primes(n, None)?;
    let mut divisors: Vec<i64> = vec![1];
    for p in primes {
        let more: Vec<i64> = divisors.iter().map(|d| d * p as i64).collect();
        divisors.extend(more);
    }
    let signed: Vec<i64> = divisors.iter().flat_map(|&d| [d, -d]).collect();
    let n = n as i64;
    let mut count = 0;
    for &b0 in &signed {
        for &b1 in &signed {
            if b1.rem_euclid(4) != 1 || n % (b0 * b1) != 0 {
                continue;
            }
            for &b2 in &signed {
                let head = b0 * b1 * b2;
                if n % head != 0 {
                    continue;
                }
                if (n / head).rem_euclid(4) == 1 {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// The data `(η_k, b_k, z_kℓ)` attached to a factorization
/// `n = β₀β₁β₂β₃` in `Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionSet {
    pub eta: [Unit; 4],
    pub b: [u64; 4],
    /// `z[k][ℓ]` for `k ≠ ℓ`; the diagonal holds `1`.
    pub z: [[GaussInt; 4]; 4],
}

impl DecompositionSet {
    /// `η_k b_k Π_{ℓ≠k} z_kℓ` for each `k`.
    pub fn reassemble(&self) -> [GaussInt; 4] {
        std::array::from_fn(|k| {
            let mut v = self.eta[k].value() * GaussInt::new(self.b[k] as i64, 0);
            for l in (0..4).filter(|&l| l != k) {
                v = v * self.z[k][l];
            }
            v
        })
    }

    /// Checks the defining properties against the factors `betas`.
    pub fn satisfies(&self, betas: &[GaussInt; 4]) -> bool {
        let primitive_parts = (0..4).all(|k| {
            betas[k]
                .div_exact(GaussInt::new(self.b[k] as i64, 0))
                .is_some_and(|q| q.is_primitive())
        });
        let off_diagonal = (0..4).all(|k| {
            (0..4).filter(|&l| l != k).all(|l| {
                let z = self.z[k][l];
                z.is_primary() && z.is_primitive() && self.z[l][k] == z.conj()
            })
        });
        let units = self.eta.iter().fold(Unit::ONE, |a, &e| a * e) == Unit::ONE;
        primitive_parts && off_diagonal && units && self.reassemble() == *betas
    }
}

/// Splits each factor of `n = β₀β₁β₂β₃` into a unit, its rational content
/// and primary primitive pieces shared with the other factors.
pub fn decompose(betas: [GaussInt; 4]) -> Result<DecompositionSet> {
    let mut prod = GaussInt::ONE;
    for b in betas {
        prod = prod.checked_mul(b)?;
    }
    if prod.im != 0 || prod.re <= 0 {
        return Err(Error::Invalid(format!("product {prod} is not a positive integer")));
    }
    let fact = gauss_factorize(prod.re as u64)?;
    let b: [u64; 4] = std::array::from_fn(|k| betas[k].content());
    let mut z = [[GaussInt::ONE; 4]; 4];
    for e in fact.parts.iter().filter(|e| e.kind == PrimeKind::SplitFirst) {
        let pi = e.primary;
        let home = |q: GaussInt| (0..4).find(|&k| q.divides(betas[k])).expect("prime of n");
        let (k, l) = (home(pi), home(pi.conj()));
        if k != l {
            z[k][l] = z[k][l] * pi;
            z[l][k] = z[l][k] * pi.conj();
        }
    }
    let mut eta = [Unit::ONE; 4];
    for k in 0..4 {
        let mut core = GaussInt::new(b[k] as i64, 0);
        for l in (0..4).filter(|&l| l != k) {
            core = core * z[k][l];
        }
        eta[k] = betas[k]
            .div_exact(core)
            .and_then(|u| u.as_unit())
            .ok_or_else(|| Error::Internal(format!("β_{k} = {} has no unit cofactor", betas[k])))?;
    }
    Ok(DecompositionSet { eta, b, z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfactor::gauss_factorize;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    /// Counts divisors literally: every unit times every subset, filtered by
    /// the congruence and the Euler-criterion residue condition.
    fn f_literal(n: u64) -> u64 {
        let fact = gauss_factorize(n).unwrap();
        let hits = pm1_divisors(&fact)
            .into_iter()
            .filter(|&b| residue_condition(&fact, b).unwrap())
            .count() as u64;
        assert_eq!(hits % 4, 0);
        hits / 4
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_direct(3).unwrap(), 1);
        assert_eq!(f_direct(5).unwrap(), 1);
        assert_eq!(f_direct(39).unwrap(), 2);
        assert!(f_direct(1).is_err());
        assert!(f_direct(9).is_err());
        assert_eq!(f_from_factorization(&gauss_factorize(1).unwrap()), 1);
    }

    #[test]
    fn divisors_of_three_and_five() {
        let d3 = pm1_divisors(&gauss_factorize(3).unwrap());
        let mut d3s = d3.clone();
        d3s.sort();
        assert_eq!(d3s, vec![g(-3, 0), g(-1, 0), g(1, 0), g(3, 0)]);
        let d5 = pm1_divisors(&gauss_factorize(5).unwrap());
        assert_eq!(d5.len(), 4);
        assert!(d5.iter().all(|b| b.im == 0));
    }

    #[test]
    fn fast_path_matches_literal_enumeration() {
        for n in (3..=1500u64).step_by(2) {
            if gauss_factorize(n).is_err() {
                continue;
            }
            assert_eq!(f_direct(n).unwrap(), f_literal(n), "n = {n}");
        }
    }

    #[test]
    fn f_char_examples() {
        assert_eq!(f_char(3).unwrap(), 1);
        assert_eq!(f_char(5).unwrap(), 1);
        assert_eq!(f_char(39).unwrap(), 2);
        assert_eq!(f_char(1443).unwrap(), f_direct(1443).unwrap());
    }

    #[test]
    fn detect_indicator_examples() {
        assert_eq!(detect_indicator(&FactoredModulus::one(), g(5, 7)).unwrap(), 1);
        let m3 = FactoredModulus::factor(g(-3, 0)).unwrap();
        assert_eq!(detect_indicator(&m3, g(2, 0)).unwrap(), 1);
        let m5 = FactoredModulus::factor(g(-1, -2)).unwrap();
        assert_eq!(detect_indicator(&m5, g(7, 0)).unwrap(), 0);
        let m15 = FactoredModulus::factor(g(-3, -6)).unwrap();
        assert_eq!(detect_indicator(&m15, g(2, 0)).unwrap(), 0);
        assert!(detect_indicator(&FactoredModulus::factor(g(9, 0)).unwrap(), g(2, 0)).is_err());
    }

    #[test]
    fn rank4_examples() {
        let r = rank4_generic(39).unwrap();
        assert_eq!((r.f, r.rk4, r.exceptional), (2, Some(1), true));
        let r = rank4_generic(5).unwrap();
        assert_eq!((r.f, r.rk4, r.exceptional), (1, Some(0), false));
        let r = rank4_generic(21).unwrap();
        assert_eq!(r.rk4, None);
        assert!(r.f >= 1);
        assert_eq!(r.csv_row(), format!("21,0,2,0,{},,{}", r.f, u8::from(r.exceptional)));
    }

    #[test]
    fn criterion_examples() {
        assert!(criterion_hilbert(39, GaussInt::ONE).unwrap());
        assert!(criterion_hilbert(39, g(39, 0)).unwrap());
        let fact = gauss_factorize(39).unwrap();
        for el in crate::genus::gn_from_factorization(&fact) {
            assert_eq!(
                criterion_hilbert_with(&fact, el.value).unwrap(),
                residue_condition(&fact, el.value).unwrap(),
                "α = {}",
                el.value
            );
        }
        assert!(criterion_hilbert(39, g(7, 0)).is_err());
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1).unwrap(), 2);
        assert_eq!(nu(15).unwrap(), 32);
        assert_eq!(nu(3).unwrap(), 8);
        assert!(nu(9).is_err());
    }

    #[test]
    fn decompose_examples() {
        let one = GaussInt::ONE;
        let d = decompose([g(1, 2), g(1, -2), one, one]).unwrap();
        assert_eq!(d.eta, [Unit::MINUS_ONE, Unit::MINUS_ONE, Unit::ONE, Unit::ONE]);
        assert_eq!(d.b, [1, 1, 1, 1]);
        assert_eq!(d.z[0][1], g(-1, -2));
        assert_eq!(d.z[1][0], g(-1, 2));
        assert_eq!(d.z[2][3], one);

        let d = decompose([g(105, 0), one, one, one]).unwrap();
        assert_eq!(d.b, [105, 1, 1, 1]);
        assert_eq!(d.eta, [Unit::ONE; 4]);
        assert!(d.z.iter().flatten().all(|&z| z == one));

        let betas = [g(-3, -6), g(-1, 2), one, one];
        let d = decompose(betas).unwrap();
        assert_eq!(d.b[0], 3);
        assert_eq!(d.z[0][1], g(-1, -2));
        // β₀ = 3·(-1-2i) with z₀₁ = -1-2i primary leaves η₀ = 1.
        assert_eq!(d.eta[0], Unit::ONE);
        assert!(d.satisfies(&betas));

        assert!(decompose([g(1, 2), one, one, one]).is_err());
        assert!(decompose([g(9, 0), one, one, one]).is_err());
    }
}
