//! Seeded law suites and exhaustive identity checks, shared by the CLI
//! `verify` command and the integration tests.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::fourrank::{
    char_sum, criterion_hilbert_with, decompose, f_from_factorization, nu, residue_condition,
    DecompositionSet,
};
use crate::gaussint::{gcd, GaussInt, Unit};
use crate::genus::{gn_from_factorization, SquarefreeProfile};
use crate::gfactor::{
    gauss_factorize, gauss_factorize_with, split_prime, GaussFactorization, SpfSieve,
};
use crate::gsymbol::{
    symbol, symbol_prime, tame_hilbert, verify_reciprocity, FactoredModulus, ResidueCharacter,
    SymbolValue,
};
use crate::modular::{is_prime, jacobi};
use crate::sweep::{
    exceptional_scan, mt_asymptotic_check, record_minima, run_sweep, run_sweep_checkpoints,
    SweepConfig,
};

pub const DEFAULT_SEED: u64 = 0x4b5f_2c1d;

/// Generic `3 ≤ n ≤ 1000` with `ω₃ = 1` and `rk₄ ≥ ω₃`.
pub const REFERENCE_EXCEPTIONAL_OMEGA3_1: [u64; 31] = [
    39, 55, 95, 111, 155, 183, 203, 259, 295, 299, 327, 355, 371, 395, 407, 471, 543, 559, 583,
    655, 663, 667, 687, 695, 755, 763, 831, 895, 915, 955, 995,
];

/// Generic `3 ≤ n ≤ 1000` with `ω₃ = 2` and `rk₄ ≥ ω₃`.
pub const REFERENCE_EXCEPTIONAL_OMEGA3_2: [u64; 2] = [777, 897];

/// Generic `3 ≤ n ≤ 1000` with `ω₃ > 0`: total, `ω₃ = 1`, `ω₃ = 2`.
pub const REFERENCE_GENERIC_COUNTS: (u64, u64, u64) = (96, 78, 18);

/// Least generic `n` with `ω₃ > 0` and `rk₄ ≥ ω₃ + 1`, resp. `ω₃ + 2`.
pub const REFERENCE_RECORDS: (u64, u64) = (1443, 4895);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Symbols,
    Identities,
    Table,
    Asymptotics,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Suite, String> {
        match s {
            "symbols" => Ok(Suite::Symbols),
            "identities" => Ok(Suite::Identities),
            "table" => Ok(Suite::Table),
            "asymptotics" => Ok(Suite::Asymptotics),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: u64,
    pub total: u64,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}/{}", self.name, self.passed, self.total)?;
        if let Some(d) = &self.detail {
            write!(f, " (first failure: {d})")?;
        }
        Ok(())
    }
}

/// Tally of a check over many instances.
struct Tally {
    name: String,
    passed: u64,
    total: u64,
    detail: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally {
            name: name.to_string(),
            passed: 0,
            total: 0,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.detail.is_none() {
            self.detail = Some(what());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.passed,
            total: self.total,
            detail: self.detail,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max: u64,
    pub seed: u64,
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<Vec<CheckResult>> {
    Ok(match suite {
        Suite::Symbols => symbol_laws(opts.max, opts.seed),
        Suite::Identities => identities(opts.max)?,
        Suite::Table => table()?,
        Suite::Asymptotics => asymptotics(opts.max)?,
        Suite::All => {
            let mut v = symbol_laws(opts.max, opts.seed);
            v.extend(identities(opts.max)?);
            v.extend(table()?);
            v.extend(asymptotics(opts.max)?);
            v
        }
    })
}

const SAMPLE_RADIUS: i64 = 300;

fn random_gauss(rng: &mut ChaCha8Rng) -> GaussInt {
    GaussInt::new(
        rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS),
        rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS),
    )
}

fn random_odd(rng: &mut ChaCha8Rng) -> GaussInt {
    loop {
        let z = random_gauss(rng);
        if z.is_odd() {
            return z;
        }
    }
}

fn random_primary(rng: &mut ChaCha8Rng) -> GaussInt {
    random_odd(rng).primary_associate().expect("odd").1
}

fn random_odd_prime(rng: &mut ChaCha8Rng) -> GaussInt {
    loop {
        let z = random_odd(rng);
        if crate::gfactor::is_gauss_prime(z) {
            return z;
        }
    }
}

/// The residue-symbol laws, each on `samples` seeded random instances.
pub fn symbol_laws(samples: u64, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mult = Tally::new("symbols/multiplicativity");
    let mut shift = Tally::new("symbols/shift invariance");
    let mut units = Tally::new("symbols/unit laws");
    let mut conj = Tally::new("symbols/conjugation");
    let mut recip = Tally::new("symbols/reciprocity");
    let mut legendre = Tally::new("symbols/Legendre reduction");
    let mut positive = Tally::new("symbols/positive integers");
    let mut fast = Tally::new("symbols/residue character vs Euler");
    let mut hilbert = Tally::new("symbols/tame Hilbert bilinearity and symmetry");
    let mut hilbert_rational = Tally::new("symbols/tame Hilbert at inert primes");

    for _ in 0..samples {
        let beta = random_odd(&mut rng);
        let fm = FactoredModulus::factor(beta).expect("in range");
        let (a1, a2) = (random_gauss(&mut rng), random_gauss(&mut rng));

        let lhs = symbol(a1 * a2, &fm);
        let rhs = symbol(a1, &fm) * symbol(a2, &fm);
        mult.record(lhs == rhs, || format!("α₁={a1}, α₂={a2}, β={beta}"));

        shift.record(symbol(a1 + beta, &fm) == symbol(a1, &fm), || {
            format!("α={a1}, β={beta}")
        });

        let i_expected = if beta.norm() % 8 == 1 {
            SymbolValue::One
        } else {
            SymbolValue::MinusOne
        };
        let unit_ok = symbol(GaussInt::ONE, &fm) == SymbolValue::One
            && symbol(GaussInt::new(-1, 0), &fm) == SymbolValue::One
            && symbol(GaussInt::I, &fm) == i_expected
            && symbol(-GaussInt::I, &fm) == i_expected;
        units.record(unit_ok, || format!("β={beta}"));

        let fm_bar = FactoredModulus::factor(beta.conj()).expect("in range");
        conj.record(symbol(a1.conj(), &fm_bar) == symbol(a1, &fm), || {
            format!("α={a1}, β={beta}")
        });

        let (alpha, gamma) = loop {
            let (x, y) = (random_primary(&mut rng), random_primary(&mut rng));
            if gcd(x, y).expect("nonzero").is_unit() {
                break (x, y);
            }
        };
        recip.record(verify_reciprocity(alpha, gamma).unwrap_or(false), || {
            format!("α={alpha}, β={gamma}")
        });

        let p = loop {
            let p = rng.gen_range(5..100_000u64);
            if p % 4 == 1 && is_prime(p) {
                break p;
            }
        };
        let pi = split_prime(p).expect("p ≡ 1 mod 4").primary_associate().expect("odd").1;
        let m: i64 = rng.gen_range(-1_000_000..1_000_000);
        legendre.record(
            symbol_prime(GaussInt::new(m, 0), pi).as_i8() == jacobi(m, p),
            || format!("n={m}, p={p}"),
        );

        let (a, b) = loop {
            let a = rng.gen_range(1..100_000i64);
            let b = 2 * rng.gen_range(0..50_000i64) + 1;
            if crate::gaussint::gcd_i64(a, b) == 1 {
                break (a, b);
            }
        };
        let fb = FactoredModulus::factor(GaussInt::new(b, 0)).expect("odd");
        positive.record(symbol(GaussInt::new(a, 0), &fb) == SymbolValue::One, || {
            format!("a={a}, b={b}")
        });

        let q = random_odd_prime(&mut rng);
        let chi = ResidueCharacter::new(q).expect("prime");
        fast.record(chi.eval(a1) == symbol_prime(a1, q), || format!("α={a1}, π={q}"));

        let qp = q.primary_associate().expect("odd").1;
        let nz = |z: GaussInt| if z.is_zero() { GaussInt::ONE } else { z };
        let (x1, x2, y) = (nz(a1), nz(a2), nz(random_gauss(&mut rng)));
        let h = |a: GaussInt, b: GaussInt| tame_hilbert(a, b, qp).expect("nonzero");
        let bilinear = h(x1 * x2, y) == h(x1, y) * h(x2, y);
        let symmetric = h(x1, y) == h(y, x1);
        hilbert.record(bilinear && symmetric, || format!("a₁={x1}, a₂={x2}, b={y}, π={qp}"));
    }

    // (α, n/α)_p = 1 at inert p | n for rational α | n.
    for n in (3..=2000u64).step_by(2) {
        let Ok(fact) = gauss_factorize(n) else { continue };
        let primes = fact.rational_primes();
        for mask in 0u32..1 << primes.len() {
            let alpha: u64 = primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .product();
            for &q in primes.iter().filter(|&&q| q % 4 == 3) {
                let v = tame_hilbert(
                    GaussInt::new(alpha as i64, 0),
                    GaussInt::new((n / alpha) as i64, 0),
                    GaussInt::new(-(q as i64), 0),
                )
                .expect("nonzero");
                hilbert_rational.record(v == SymbolValue::One, || {
                    format!("n={n}, α={alpha}, p={q}")
                });
            }
        }
    }

    vec![
        mult.finish(),
        shift.finish(),
        units.finish(),
        conj.finish(),
        recip.finish(),
        legendre.finish(),
        positive.finish(),
        fast.finish(),
        hilbert.finish(),
        hilbert_rational.finish(),
    ]
}

/// Exhaustive search for every `(η, b, z)` satisfying the decomposition
/// properties for `betas`. Uniqueness means exactly one result.
pub fn decomposition_candidates(betas: &[GaussInt; 4]) -> Vec<DecompositionSet> {
    let n = betas.iter().fold(GaussInt::ONE, |a, &b| a * b);
    let Ok(fact) = gauss_factorize(n.re as u64) else {
        return Vec::new();
    };
    // Primary primitive divisors of n: for every split prime take nothing,
    // π or π̄.
    let mut pool = vec![GaussInt::ONE];
    for e in fact
        .parts
        .iter()
        .filter(|e| e.kind == crate::gfactor::PrimeKind::SplitFirst)
    {
        let mut next = Vec::with_capacity(pool.len() * 3);
        for &d in &pool {
            next.extend([d, d * e.primary, d * e.primary.conj()]);
        }
        pool = next;
    }
    let b: [u64; 4] = std::array::from_fn(|k| betas[k].content());
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let options: Vec<Vec<GaussInt>> = pairs
        .iter()
        .map(|&(k, l)| {
            pool.iter()
                .copied()
                .filter(|d| d.divides(betas[k]) && d.conj().divides(betas[l]))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = [0usize; 6];
    'outer: loop {
        let mut z = [[GaussInt::ONE; 4]; 4];
        for (slot, &(k, l)) in pairs.iter().enumerate() {
            let v = options[slot][choice[slot]];
            z[k][l] = v;
            z[l][k] = v.conj();
        }
        let eta: Option<Vec<Unit>> = (0..4)
            .map(|k| {
                let core = (0..4)
                    .filter(|&l| l != k)
                    .fold(GaussInt::new(b[k] as i64, 0), |acc, l| acc * z[k][l]);
                betas[k].div_exact(core).and_then(|u| u.as_unit())
            })
            .collect();
        if let Some(eta) = eta {
            let cand = DecompositionSet {
                eta: [eta[0], eta[1], eta[2], eta[3]],
                b,
                z,
            };
            if cand.satisfies(betas) {
                out.push(cand);
            }
        }
        for slot in 0..6 {
            choice[slot] += 1;
            if choice[slot] < options[slot].len() {
                continue 'outer;
            }
            choice[slot] = 0;
        }
        break;
    }
    out
}

/// All ordered factorizations `n = β₀β₁β₂β₃` into Gaussian divisors, up to
/// the placement of units (each `β_k` for `k < 3` carries any unit, `β₃`
/// absorbs the rest).
pub fn four_factorizations(n: u64) -> Result<Vec<[GaussInt; 4]>> {
    let fact = gauss_factorize(n)?;
    let primes: Vec<GaussInt> = fact.primaries().collect();
    let w = primes.len();
    let mut out = Vec::new();
    for code in 0u64..1 << (2 * w) {
        let mut parts = [GaussInt::ONE; 4];
        for (i, &p) in primes.iter().enumerate() {
            let k = (code >> (2 * i) & 3) as usize;
            parts[k] = parts[k] * p;
        }
        for u0 in Unit::ALL {
            for u1 in Unit::ALL {
                for u2 in Unit::ALL {
                    let u3 = fact.unit * (u0 * u1 * u2).inverse();
                    out.push([
                        parts[0].rotate(u0),
                        parts[1].rotate(u1),
                        parts[2].rotate(u2),
                        parts[3].rotate(u3),
                    ]);
                }
            }
        }
    }
    Ok(out)
}

/// Odd squarefree `n ≤ max` with their factorizations.
fn odd_squarefree(max: u64) -> impl Iterator<Item = GaussFactorization> {
    let sieve = SpfSieve::new(max.max(3));
    (1..=max)
        .step_by(2)
        .filter_map(move |n| gauss_factorize_with(n, Some(&sieve)).ok())
}

/// `2^(ω₃-1) ≤ f(n) ≤ 2^(2ω₁+ω₃-1)` for odd squarefree `3 ≤ n ≤ max`.
pub fn check_bounds(max: u64) -> CheckResult {
    let mut t = Tally::new("identities/2^(ω₃-1) ≤ f ≤ 2^(2ω₁+ω₃-1)");
    for fact in odd_squarefree(max).filter(|f| f.n >= 3) {
        let p = SquarefreeProfile::from_factorization(&fact);
        let f = f_from_factorization(&fact);
        let lower = Dyadic::from_int(1i128 << p.omega3).halve(1);
        let upper = 1u64 << (2 * p.omega1 + p.omega3 - 1);
        t.record(Dyadic::from_int(f as i128) >= lower && f <= upper, || {
            format!("n={}: f={f}", fact.n)
        });
    }
    t.finish()
}

/// The character sum equals the direct count for odd squarefree `3 ≤ n ≤ max`.
pub fn check_oracle(max: u64) -> Result<CheckResult> {
    let mut t = Tally::new("identities/f_char = f_direct");
    for fact in odd_squarefree(max).filter(|f| f.n >= 3) {
        let f = f_from_factorization(&fact);
        let cs = char_sum(&fact)?.halve(2);
        t.record(cs == Dyadic::from_int(f as i128), || {
            format!("n={}: f_direct={f}, f_char={cs}", fact.n)
        });
    }
    Ok(t.finish())
}

/// For generic `n ≤ max`: the Hilbert criterion agrees with the residue
/// condition on all of `Gn`, and `f` is half the passing count.
pub fn check_criterion(max: u64) -> Result<[CheckResult; 2]> {
    let mut criterion = Tally::new("identities/Hilbert criterion = residue condition");
    let mut bridge = Tally::new("identities/f = #passing genus elements / 2");
    for fact in odd_squarefree(max).filter(|f| f.n >= 3 && f.generic()) {
        let n = fact.n;
        let mut passing = 0u64;
        for el in gn_from_factorization(&fact) {
            let by_hilbert = criterion_hilbert_with(&fact, el.value)?;
            let by_residue = residue_condition(&fact, el.value)?;
            criterion.record(by_hilbert == by_residue, || format!("n={n}, α={}", el.value));
            passing += u64::from(by_hilbert);
        }
        let f = f_from_factorization(&fact);
        bridge.record(passing == 2 * f, || format!("n={n}: f={f}, passing={passing}"));
    }
    Ok([criterion.finish(), bridge.finish()])
}

/// `ν(n) = 2·4^ω(n)` by enumeration for odd squarefree `n ≤ max`.
pub fn check_nu(max: u64) -> Result<CheckResult> {
    let mut t = Tally::new("identities/ν(n) = 2·4^ω(n)");
    for fact in odd_squarefree(max) {
        let w = fact.rational_primes().len() as u32;
        let v = nu(fact.n)?;
        t.record(v == 2 * 4u64.pow(w), || format!("n={}: ν={v}", fact.n));
    }
    Ok(t.finish())
}

/// Every ordered 4-factorization of odd squarefree `n ≤ max` decomposes,
/// reassembles, and no other data satisfies the decomposition properties.
pub fn check_decomposition(max: u64) -> Result<CheckResult> {
    let mut t = Tally::new("identities/decomposition roundtrip and uniqueness");
    for fact in odd_squarefree(max) {
        for betas in four_factorizations(fact.n)? {
            let found = decomposition_candidates(&betas);
            let ok = match decompose(betas) {
                Ok(d) => {
                    d.reassemble() == betas
                        && d.satisfies(&betas)
                        && found.len() == 1
                        && found[0] == d
                }
                Err(_) => false,
            };
            t.record(ok, || format!("n={}, β={betas:?}: {} candidates", fact.n, found.len()));
        }
    }
    Ok(t.finish())
}

/// Largest `n` for which the decomposition search runs inside `identities`.
pub const DECOMPOSITION_LIMIT: u64 = 105;

/// All exhaustive identity checks for odd squarefree `n ≤ max`.
pub fn identities(max: u64) -> Result<Vec<CheckResult>> {
    let [criterion, bridge] = check_criterion(max)?;
    Ok(vec![
        check_oracle(max)?,
        check_bounds(max),
        criterion,
        bridge,
        check_nu(max)?,
        check_decomposition(max.min(DECOMPOSITION_LIMIT))?,
    ])
}

/// The exceptional table up to 1000, the generic counts and the record minima.
pub fn table() -> Result<Vec<CheckResult>> {
    let scan = exceptional_scan(1000)?;
    let mut expected: Vec<(u64, u32)> = REFERENCE_EXCEPTIONAL_OMEGA3_1
        .iter()
        .map(|&n| (n, 1))
        .chain(REFERENCE_EXCEPTIONAL_OMEGA3_2.iter().map(|&n| (n, 2)))
        .collect();
    expected.sort_unstable();
    let got: Vec<(u64, u32)> = scan.iter().map(|e| (e.n, e.omega3)).collect();

    let mut tab = Tally::new("table/exceptional n ≤ 1000");
    for &(n, w) in &expected {
        tab.record(got.contains(&(n, w)), || format!("missing n={n}"));
    }
    for &(n, w) in &got {
        if !expected.contains(&(n, w)) {
            tab.record(false, || format!("unexpected n={n}"));
        }
    }

    let rep = run_sweep(&SweepConfig::new(1000))?;
    let g1 = rep.generic_by_omega3.get(&1).copied().unwrap_or(0);
    let g2 = rep.generic_by_omega3.get(&2).copied().unwrap_or(0);
    let total: u64 = rep
        .generic_by_omega3
        .iter()
        .filter(|(&k, _)| k > 0)
        .map(|(_, &v)| v)
        .sum();
    let mut counts = Tally::new("table/generic counts with ω₃ > 0");
    counts.record((total, g1, g2) == REFERENCE_GENERIC_COUNTS, || {
        format!("got ({total}, {g1}, {g2})")
    });

    let mut records = Tally::new("table/record minima up to 5000");
    let minima = record_minima(5000)?;
    let want = (Some(REFERENCE_RECORDS.0), Some(REFERENCE_RECORDS.1));
    records.record(minima == want, || format!("got {minima:?}"));

    Ok(vec![tab.finish(), counts.finish(), records.finish()])
}

/// Checkpoints `10^4, 10^5, ...` not exceeding `max`.
pub fn decade_checkpoints(max: u64) -> Vec<u64> {
    std::iter::successors(Some(10_000u64), |&x| x.checked_mul(10))
        .take_while(|&x| x <= max)
        .collect()
}

/// Main-term asymptotics and the behaviour of `(S - MT)/x` at decades.
pub fn asymptotics(max: u64) -> Result<Vec<CheckResult>> {
    let points = decade_checkpoints(max);
    let mut mt = Tally::new("asymptotics/|MT(x) - 4x/π²| ≤ 5√x");
    for &x in &points {
        let c = mt_asymptotic_check(x);
        mt.record(c.pass, || format!("x={x}: deviation {} > {}", c.deviation, c.bound));
    }
    let mut dom = Tally::new("asymptotics/S(x) ≥ MT(x)");
    let mut decay = Tally::new("asymptotics/(S - MT)/x strictly decreasing");
    if let Some(&last) = points.last() {
        let mut cfg = SweepConfig::new(last);
        cfg.checkpoints = points.clone();
        let reps = run_sweep_checkpoints(&cfg)?;
        for r in &reps {
            dom.record(r.s >= Dyadic::from_int(r.mt as i128), || format!("x={}", r.x));
            if r.mt != mt_asymptotic_check(r.x).count {
                mt.record(false, || format!("x={}: sweep and direct counts differ", r.x));
            }
        }
        for w in reps.windows(2) {
            let (a, b) = (w[0].deviation(), w[1].deviation());
            decay.record(b < a, || format!("d({})={a} vs d({})={b}", w[0].x, w[1].x));
        }
    }
    Ok(vec![mt.finish(), dom.finish(), decay.finish()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_factorizations_multiply_back() {
        for n in [1u64, 3, 5, 15] {
            let all = four_factorizations(n).unwrap();
            let w = gauss_factorize(n).unwrap().omega_tilde() as u32;
            assert_eq!(all.len() as u64, 4u64.pow(w) * 64);
            for b in all {
                assert_eq!(b[0] * b[1] * b[2] * b[3], GaussInt::new(n as i64, 0));
            }
        }
    }

    #[test]
    fn small_suites_pass() {
        for r in symbol_laws(300, DEFAULT_SEED) {
            assert!(r.ok(), "{r}");
        }
        for r in identities(200).unwrap() {
            assert!(r.ok(), "{r}");
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
