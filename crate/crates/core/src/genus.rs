//! Squarefree profiles, the genus group `Gn(K_n)` and the 2-rank.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussint::GaussInt;
use crate::gfactor::{gauss_factorize, GaussFactorization, PrimeKind};

/// Prime-divisor counts of an odd squarefree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SquarefreeProfile {
    pub n: u64,
    pub omega1: u32,
    pub omega3: u32,
    pub omega_tilde: u32,
    /// Some prime divisor is `≡ 5 mod 8`.
    pub generic: bool,
}

impl SquarefreeProfile {
    pub fn from_factorization(f: &GaussFactorization) -> SquarefreeProfile {
        let omega1 = f.omega1();
        let omega3 = f.omega3();
        SquarefreeProfile {
            n: f.n,
            omega1,
            omega3,
            omega_tilde: 2 * omega1 + omega3,
            generic: f.generic(),
        }
    }

    pub fn omega(&self) -> u32 {
        self.omega1 + self.omega3
    }
}

pub fn profile(n: u64) -> Result<SquarefreeProfile> {
    Ok(SquarefreeProfile::from_factorization(&gauss_factorize(n)?))
}

/// An element `Π π_h^ε₁(h) π̄_h^ε₂(h) Π q_k^α(k)` of the genus group.
///
/// Bit `h` of `eps1`/`eps2` refers to the `h`-th split prime and bit `k` of
/// `alpha` to the `k`-th inert prime, both in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenusElement {
    pub eps1: u32,
    pub eps2: u32,
    pub alpha: u32,
    pub value: GaussInt,
}

fn require_at_least_three(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::NotOddSquarefree(n));
    }
    Ok(())
}

/// One generator of the genus group, in canonical prime order.
#[derive(Clone, Copy, Debug)]
struct Generator {
    value: GaussInt,
    kind: PrimeKind,
    index: u32,
    five_mod_eight: bool,
}

fn generators(f: &GaussFactorization) -> Vec<Generator> {
    let mut split_index = 0;
    let mut inert_index = 0;
    f.parts
        .iter()
        .map(|e| {
            let index = match e.kind {
                PrimeKind::SplitFirst => split_index,
                PrimeKind::SplitConjugate => {
                    split_index += 1;
                    split_index - 1
                }
                PrimeKind::Inert => {
                    inert_index += 1;
                    inert_index - 1
                }
            };
            Generator {
                value: e.split_normalized(),
                kind: e.kind,
                index,
                five_mod_eight: e.rational_p % 8 == 5,
            }
        })
        .collect()
}

/// All elements of `Gn(K_n)` satisfying the parity constraint on primes
/// `≡ 5 mod 8`, in a deterministic order.
pub fn gn_enumerate(n: u64) -> Result<Vec<GenusElement>> {
    require_at_least_three(n)?;
    Ok(gn_from_factorization(&gauss_factorize(n)?))
}

pub fn gn_from_factorization(f: &GaussFactorization) -> Vec<GenusElement> {
    let gens = generators(f);
    let parity_mask: u32 = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| g.five_mod_eight)
        .fold(0, |m, (i, _)| m | 1 << i);
    let mut out = Vec::new();
    for mask in 0u32..1 << gens.len() {
        if (mask & parity_mask).count_ones() % 2 == 1 {
            continue;
        }
        let mut el = GenusElement {
            eps1: 0,
            eps2: 0,
            alpha: 0,
            value: GaussInt::ONE,
        };
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            el.value = el.value * g.value;
            match g.kind {
                PrimeKind::SplitFirst => el.eps1 |= 1 << g.index,
                PrimeKind::SplitConjugate => el.eps2 |= 1 << g.index,
                PrimeKind::Inert => el.alpha |= 1 << g.index,
            }
        }
        out.push(el);
    }
    out
}

/// `dim Cl(K_n)[2]`, read off as `log₂|Gn(K_n)| - 1`.
///
/// This gives `2ω₁ + ω₃ - 2` for generic `n` and `2ω₁ + ω₃ - 1` otherwise.
/// The often-quoted closed form with the two cases swapped disagrees with
/// the genus count (it would make `rk₂ = 0` impossible for `n = 5`, whose
/// only candidates 1 and 5 are both trivial).
pub fn rk2(n: u64) -> Result<u32> {
    require_at_least_three(n)?;
    let f = gauss_factorize(n)?;
    Ok(rk2_from_profile(&SquarefreeProfile::from_factorization(&f)))
}

pub fn rk2_from_profile(p: &SquarefreeProfile) -> u32 {
    let log_gn = p.omega_tilde - u32::from(p.generic);
    log_gn - 1
}
