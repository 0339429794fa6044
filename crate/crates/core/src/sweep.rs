//! Bulk statistics over odd squarefree `n ≤ x`.
//!
//! The range is cut into chunks (also cut at every requested checkpoint),
//! chunks are processed in parallel against a shared smallest-prime-factor
//! table, and the per-chunk partials are merged in range order. Every field
//! of the merge is an exact integer or dyadic sum, so reports do not depend
//! on chunking or on the number of workers.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fourrank::{FourRankRecord, RECORD_CSV_HEADER};
use crate::gfactor::{factorization_from_primes, SpfSieve};

pub const REPORT_CSV_HEADER: &str = "x,mt,s_num,s_den,deviation";

/// Largest supported sweep bound (sieve memory).
pub const MAX_SWEEP_BOUND: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub x_max: u64,
    pub chunk_size: u64,
    /// 0 selects the rayon default.
    pub worker_count: usize,
    pub emit_records: bool,
    /// Destination for the per-`n` records CSV, if any.
    pub output_path: Option<PathBuf>,
    /// Additional bounds at which cumulative reports are taken.
    pub checkpoints: Vec<u64>,
}

impl SweepConfig {
    pub fn new(x_max: u64) -> SweepConfig {
        SweepConfig {
            x_max,
            chunk_size: 1 << 16,
            worker_count: 0,
            emit_records: false,
            output_path: None,
            checkpoints: Vec::new(),
        }
    }

    pub fn with_records(mut self) -> SweepConfig {
        self.emit_records = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub x: u64,
    /// Number of odd squarefree `n ≤ x`.
    pub mt: u64,
    /// `Σ f(n) / 2^(ω₃(n) - 1)` over odd squarefree `n ≤ x`.
    pub s: Dyadic,
    /// Generic `n` with `f(n) ≥ 2^ω₃(n)`, by `ω₃`.
    pub exceptional_by_omega3: BTreeMap<u32, u64>,
    /// All generic `n`, by `ω₃`.
    pub generic_by_omega3: BTreeMap<u32, u64>,
    pub records: Option<Vec<FourRankRecord>>,
}

impl SweepReport {
    /// `(S(x) - MT(x)) / x`.
    pub fn deviation(&self) -> f64 {
        (self.s - Dyadic::from_int(self.mt as i128)).to_f64() / self.x as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.x,
            self.mt,
            self.s.numerator(),
            self.s.denominator(),
            self.deviation()
        )
    }
}

#[derive(Clone, Debug, Default)]
struct Partial {
    mt: u64,
    s: Dyadic,
    exceptional: BTreeMap<u32, u64>,
    generic: BTreeMap<u32, u64>,
    records: Vec<FourRankRecord>,
}

impl Partial {
    fn absorb(&mut self, other: &Partial, keep_records: bool) {
        self.mt += other.mt;
        self.s += other.s;
        for (&k, &v) in &other.exceptional {
            *self.exceptional.entry(k).or_default() += v;
        }
        for (&k, &v) in &other.generic {
            *self.generic.entry(k).or_default() += v;
        }
        if keep_records {
            self.records.extend_from_slice(&other.records);
        }
    }
}

fn process_chunk(lo: u64, hi: u64, sieve: &SpfSieve, keep_records: bool) -> Partial {
    let mut part = Partial::default();
    let mut primes = Vec::with_capacity(16);
    let start = if lo.is_multiple_of(2) { lo + 1 } else { lo };
    for n in (start..=hi).step_by(2) {
        primes.clear();
        let mut m = n;
        let mut squarefree = true;
        while m > 1 {
            let p = sieve.spf(m);
            m /= p;
            if primes.last() == Some(&p) {
                squarefree = false;
                break;
            }
            primes.push(p);
        }
        if !squarefree {
            continue;
        }
        let fact = factorization_from_primes(n, &primes);
        let rec = FourRankRecord::from_factorization(&fact);
        part.mt += 1;
        part.s += rec.normalized();
        if rec.profile.generic {
            *part.generic.entry(rec.profile.omega3).or_default() += 1;
            if rec.exceptional {
                *part.exceptional.entry(rec.profile.omega3).or_default() += 1;
            }
        }
        if keep_records {
            part.records.push(rec);
        }
    }
    part
}

/// Chunk boundaries `[lo, hi]` covering `1..=x_max`, split at checkpoints.
fn chunk_ranges(x_max: u64, chunk: u64, cuts: &[u64]) -> Vec<(u64, u64)> {
    let mut ends: Vec<u64> = (1..)
        .map(|k| k * chunk)
        .take_while(|&e| e < x_max)
        .chain(cuts.iter().copied().filter(|&c| c >= 1 && c < x_max))
        .chain(std::iter::once(x_max))
        .collect();
    ends.sort_unstable();
    ends.dedup();
    let mut lo = 1;
    ends.into_iter()
        .map(|hi| {
            let r = (lo, hi);
            lo = hi + 1;
            r
        })
        .collect()
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.x_max < 1 || cfg.x_max > MAX_SWEEP_BOUND {
        return Err(Error::OutOfRange(cfg.x_max));
    }
    if cfg.chunk_size < 1 {
        return Err(Error::Invalid("chunk size must be at least 1".into()));
    }
    if let Some(&c) = cfg.checkpoints.iter().find(|&&c| c < 1 || c > cfg.x_max) {
        return Err(Error::Invalid(format!("checkpoint {c} outside 1..={}", cfg.x_max)));
    }
    Ok(())
}

/// Cumulative reports at every checkpoint and at `x_max`, ascending.
///
/// Only the final report carries records (when requested); if
/// `output_path` is set the records are also written there as CSV.
pub fn run_sweep_checkpoints(cfg: &SweepConfig) -> Result<Vec<SweepReport>> {
    validate(cfg)?;
    let sieve = SpfSieve::new(cfg.x_max);
    let ranges = chunk_ranges(cfg.x_max, cfg.chunk_size, &cfg.checkpoints);
    let keep = cfg.emit_records;
    let work = || -> Vec<Partial> {
        ranges
            .par_iter()
            .map(|&(lo, hi)| process_chunk(lo, hi, &sieve, keep))
            .collect()
    };
    let partials = if cfg.worker_count == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.worker_count)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?
            .install(work)
    };

    let mut cuts: Vec<u64> = cfg.checkpoints.clone();
    cuts.push(cfg.x_max);
    cuts.sort_unstable();
    cuts.dedup();

    let mut acc = Partial::default();
    let mut reports = Vec::with_capacity(cuts.len());
    let mut next_cut = cuts.iter().peekable();
    for (&(_, hi), part) in ranges.iter().zip(&partials) {
        acc.absorb(part, keep);
        if next_cut.peek() == Some(&&hi) {
            next_cut.next();
            let last = hi == cfg.x_max;
            reports.push(SweepReport {
                x: hi,
                mt: acc.mt,
                s: acc.s,
                exceptional_by_omega3: acc.exceptional.clone(),
                generic_by_omega3: acc.generic.clone(),
                records: (keep && last).then(|| std::mem::take(&mut acc.records)),
            });
        }
    }

    if let (Some(path), Some(recs)) = (&cfg.output_path, reports.last().and_then(|r| r.records.as_ref())) {
        write_records_csv(path, recs)?;
    }
    Ok(reports)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    Ok(run_sweep_checkpoints(cfg)?
        .pop()
        .expect("the final bound is always reported"))
}

pub fn write_records_csv(path: &Path, records: &[FourRankRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{RECORD_CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_csv(path: &Path, reports: &[SweepReport]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{REPORT_CSV_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn all_records(x: u64) -> Result<Vec<FourRankRecord>> {
    Ok(run_sweep(&SweepConfig::new(x).with_records())?
        .records
        .unwrap_or_default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExceptionalEntry {
    pub n: u64,
    pub omega3: u32,
    pub rk4: u32,
}

/// Generic odd squarefree `n ≤ x` with `ω₃(n) ≥ 1` and `f(n) ≥ 2^ω₃(n)`,
/// ascending.
pub fn exceptional_scan(x: u64) -> Result<Vec<ExceptionalEntry>> {
    Ok(all_records(x)?
        .into_iter()
        .filter(|r| r.profile.generic && r.profile.omega3 >= 1 && r.exceptional)
        .map(|r| ExceptionalEntry {
            n: r.n,
            omega3: r.profile.omega3,
            rk4: r.rk4.expect("generic"),
        })
        .collect())
}

/// Least generic `n ≤ x` with `ω₃ > 0` and `rk₄ ≥ ω₃ + 1`, and likewise with
/// `rk₄ ≥ ω₃ + 2`.
pub fn record_minima(x: u64) -> Result<(Option<u64>, Option<u64>)> {
    let recs = all_records(x)?;
    let first = |excess: u32| {
        recs.iter()
            .find(|r| {
                r.profile.generic
                    && r.profile.omega3 > 0
                    && r.rk4.is_some_and(|k| k >= r.profile.omega3 + excess)
            })
            .map(|r| r.n)
    };
    Ok((first(1), first(2)))
}

/// Counts odd squarefree `n ≤ x` by crossing out multiples of odd prime
/// squares; independent of the factorization machinery.
pub fn count_odd_squarefree(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut squarefree = vec![true; x as usize + 1];
    let mut d = 3u64;
    while d * d <= x {
        let sq = d * d;
        let mut m = sq;
        while m <= x {
            squarefree[m as usize] = false;
            m += sq;
        }
        d += 2;
    }
    (1..=x).step_by(2).filter(|&n| squarefree[n as usize]).count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MtCheck {
    pub count: u64,
    /// `|count - 4x/π²|`.
    pub deviation: f64,
    /// `5 √x`.
    pub bound: f64,
    pub pass: bool,
}

/// Tolerance constant in `|MT(x) - 4x/π²| ≤ C √x`.
pub const MT_TOLERANCE_CONSTANT: f64 = 5.0;

pub fn mt_asymptotic_check(x: u64) -> MtCheck {
    let count = count_odd_squarefree(x);
    let main = 4.0 * x as f64 / (std::f64::consts::PI * std::f64::consts::PI);
    let deviation = (count as f64 - main).abs();
    let bound = MT_TOLERANCE_CONSTANT * (x as f64).sqrt();
    MtCheck {
        count,
        deviation,
        bound,
        pass: deviation <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mt_small() {
        let r = run_sweep(&SweepConfig::new(10)).unwrap();
        assert_eq!(r.mt, 4);
        assert_eq!(count_odd_squarefree(10), 4);
        assert_eq!(mt_asymptotic_check(2).count, 1);
    }

    #[test]
    fn chunk_ranges_cover_once() {
        let r = chunk_ranges(100, 30, &[45, 100, 7]);
        assert_eq!(r, vec![(1, 7), (8, 30), (31, 45), (46, 60), (61, 90), (91, 100)]);
        assert_eq!(chunk_ranges(5, 100, &[]), vec![(1, 5)]);
    }

    #[test]
    fn deterministic_across_chunking_and_workers() {
        let base = run_sweep(&SweepConfig::new(10_000).with_records()).unwrap();
        for (chunk, workers) in [(1, 1), (17, 3), (999, 2), (10_000, 4), (1 << 20, 1)] {
            let mut cfg = SweepConfig::new(10_000).with_records();
            cfg.chunk_size = chunk;
            cfg.worker_count = workers;
            assert_eq!(run_sweep(&cfg).unwrap(), base, "chunk {chunk}, workers {workers}");
        }
    }

    #[test]
    fn checkpoints_match_independent_runs() {
        let mut cfg = SweepConfig::new(3000);
        cfg.checkpoints = vec![1000, 2000];
        cfg.chunk_size = 256;
        let reps = run_sweep_checkpoints(&cfg).unwrap();
        assert_eq!(reps.iter().map(|r| r.x).collect::<Vec<_>>(), vec![1000, 2000, 3000]);
        for r in &reps {
            assert_eq!(*r, run_sweep(&SweepConfig::new(r.x)).unwrap());
        }
    }

    #[test]
    fn s_dominates_mt() {
        let r = run_sweep(&SweepConfig::new(20_000)).unwrap();
        assert!(r.s >= Dyadic::from_int(r.mt as i128));
        assert!(r.mt <= r.x);
        assert_eq!(r.mt, count_odd_squarefree(20_000));
    }

    #[test]
    fn small_scans() {
        assert!(exceptional_scan(38).unwrap().is_empty());
        assert_eq!(exceptional_scan(39).unwrap()[0].n, 39);
        assert_eq!(record_minima(1400).unwrap(), (None, None));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = SweepConfig::new(100);
        cfg.chunk_size = 0;
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = SweepConfig::new(100);
        cfg.checkpoints = vec![101];
        assert!(run_sweep(&cfg).is_err());
        assert!(run_sweep(&SweepConfig::new(0)).is_err());
    }

    #[test]
    fn csv_files() {
        let dir = tempfile::tempdir().unwrap();
        let rec_path = dir.path().join("records.csv");
        let mut cfg = SweepConfig::new(40).with_records();
        cfg.output_path = Some(rec_path.clone());
        let rep = run_sweep(&cfg).unwrap();
        let text = std::fs::read_to_string(&rec_path).unwrap();
        let mut lines = text.split('\n');
        assert_eq!(lines.next(), Some(RECORD_CSV_HEADER));
        assert_eq!(lines.next(), Some("1,0,0,0,1,,0"));
        assert_eq!(lines.next(), Some("3,0,1,0,1,,0"));
        assert!(text.contains("\n39,1,1,1,2,1,1\n"));
        assert!(!text.contains('\r'));

        let rep_path = dir.path().join("report.csv");
        write_report_csv(&rep_path, std::slice::from_ref(&rep)).unwrap();
        let text = std::fs::read_to_string(&rep_path).unwrap();
        assert!(text.starts_with("x,mt,s_num,s_den,deviation\n40,"));
    }
}
