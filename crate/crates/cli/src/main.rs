use std::path::PathBuf;
use std::process::ExitCode;

use biquad_core::fourrank::f_from_factorization;
use biquad_core::gfactor::factor_gaussian;
use biquad_core::sweep::{write_report_csv, REPORT_CSV_HEADER};
use biquad_core::verify::{self, Suite, VerifyOptions, DEFAULT_SEED};
use biquad_core::{
    decompose, factor_rational, gauss_factorize, gn_enumerate, nu, rank4_generic, rk2,
    run_sweep_checkpoints, symbol, Error, FactoredModulus, FourRankRecord, GaussInt,
    GaussFactorization, SquarefreeProfile, SweepConfig, Unit,
};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "biquad", version, about = "4-ranks of class groups of Q(i, √n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic residue symbol [α/β]; β is factored automatically unless
    /// given as a '*'-separated product of primes.
    Symbol {
        #[arg(allow_hyphen_values = true)]
        alpha: GaussInt,
        #[arg(allow_hyphen_values = true)]
        beta: String,
    },
    /// Rational and primary Gaussian factorization of n.
    Factor { n: u64 },
    /// Prime-divisor profile of an odd squarefree n.
    Profile {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Elements of the genus group Gn.
    Gn { n: u64 },
    /// 2-rank of the class group.
    Rk2 { n: u64 },
    /// The counting function f(n).
    F {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// 4-rank of the class group (generic n only).
    Rk4 {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Number of rational quadruples n = b0·b1·b2·b3 with b1 ≡ b3 ≡ 1 mod 4.
    Nu { n: u64 },
    /// Decomposition data (η, b, z) of a factorization n = β0·β1·β2·β3.
    Decompose {
        #[arg(allow_hyphen_values = true, num_args = 4, value_names = ["B0", "B1", "B2", "B3"])]
        betas: Vec<GaussInt>,
    },
    /// Generic n with ω₃(n) ≥ 1 and f(n) ≥ 2^ω₃(n), plus summary counts.
    Table {
        #[arg(long, default_value_t = 1000)]
        max: u64,
    },
    /// Bulk statistics S(x) and MT(x).
    Sweep {
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 1 << 16)]
        chunk: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Per-n records CSV.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Checkpoint report CSV.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Extra report bounds, comma separated.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<u64>,
    },
    /// Run the law and identity suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Sample count for symbols, bound for identities and asymptotics.
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Outcome of a command: what to print, and whether it counts as success.
enum Failure {
    Domain(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn odd_squarefree(n: u64) -> Result<GaussFactorization, Failure> {
    gauss_factorize(n).map_err(|e| match e {
        Error::NotOddSquarefree(_) => {
            Failure::Domain(format!("{n} must be an odd squarefree positive integer"))
        }
        other => other.into(),
    })
}

fn at_least_three(n: u64) -> Result<GaussFactorization, Failure> {
    let fact = odd_squarefree(n)?;
    if n < 3 {
        return Err(Failure::Domain(format!("{n} must be at least 3")));
    }
    Ok(fact)
}

fn parse_modulus(text: &str) -> Result<FactoredModulus, Failure> {
    if !text.contains('*') {
        let beta: GaussInt = text.parse()?;
        return Ok(FactoredModulus::factor(beta)?);
    }
    let mut unit = Unit::ONE;
    let mut primes = Vec::new();
    for piece in text.split('*') {
        let z: GaussInt = piece.trim().parse()?;
        match z.as_unit() {
            Some(u) => unit = unit * u,
            None => primes.push(z),
        }
    }
    Ok(FactoredModulus::from_primes(unit, &primes)?)
}

fn profile_json(p: &SquarefreeProfile) -> serde_json::Value {
    json!({ "n": p.n, "omega1": p.omega1, "omega3": p.omega3, "generic": p.generic })
}

fn record_json(r: &FourRankRecord) -> String {
    serde_json::to_string(r).expect("records serialize")
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Symbol { alpha, beta } => {
            let m = parse_modulus(&beta)?;
            println!("{}", symbol(alpha, &m));
        }
        Command::Factor { n } => {
            if n == 0 || n > i64::MAX as u64 {
                return Err(Failure::Domain(format!("{n} is out of range")));
            }
            let rational: Vec<String> = factor_rational(n, None)?
                .into_iter()
                .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
                .collect();
            let rational = if rational.is_empty() { "1".to_string() } else { rational.join(" * ") };
            println!("{n} = {rational}");
            let (unit, primes) = factor_gaussian(GaussInt::new(n as i64, 0))?;
            println!("unit {}", unit.value());
            for (p, e) in primes {
                if e == 1 {
                    println!("{p}");
                } else {
                    println!("{p}^{e}");
                }
            }
        }
        Command::Profile { n, json } => {
            let p = SquarefreeProfile::from_factorization(&odd_squarefree(n)?);
            if json {
                println!("{}", profile_json(&p));
            } else {
                println!("n: {}", p.n);
                println!("omega1: {}", p.omega1);
                println!("omega3: {}", p.omega3);
                println!("omega_tilde: {}", p.omega_tilde);
                println!("generic: {}", p.generic);
            }
        }
        Command::Gn { n } => {
            at_least_three(n)?;
            for el in gn_enumerate(n)? {
                println!("{}", el.value);
            }
        }
        Command::Rk2 { n } => {
            at_least_three(n)?;
            println!("{}", rk2(n)?);
        }
        Command::F { n, json } => {
            let fact = odd_squarefree(n)?;
            if json {
                println!("{}", record_json(&FourRankRecord::from_factorization(&fact)));
            } else {
                println!("{}", f_from_factorization(&fact));
            }
        }
        Command::Rk4 { n, json } => {
            at_least_three(n)?;
            let r = rank4_generic(n)?;
            if json {
                println!("{}", record_json(&r));
            } else {
                match r.rk4 {
                    Some(k) => println!("{k}"),
                    None => {
                        println!("f = {}", r.f);
                        println!("non-generic: rank not determined");
                    }
                }
            }
        }
        Command::Nu { n } => {
            odd_squarefree(n)?;
            println!("{}", nu(n)?);
        }
        Command::Decompose { betas } => {
            let betas: [GaussInt; 4] = betas.try_into().expect("clap enforces four values");
            let d = decompose(betas)?;
            for k in 0..4 {
                println!("eta{k} {}", d.eta[k].value());
            }
            for k in 0..4 {
                println!("b{k} {}", d.b[k]);
            }
            for k in 0..4 {
                for l in k + 1..4 {
                    println!("z{k}{l} {}", d.z[k][l]);
                }
            }
        }
        Command::Table { max } => {
            if max < 3 {
                return Err(Failure::Domain("--max must be at least 3".into()));
            }
            let rep = run_sweep_checkpoints(&SweepConfig::new(max).with_records())?
                .pop()
                .expect("one report");
            let records = rep.records.as_deref().unwrap_or_default();
            println!("n,omega3,rk4");
            for r in records {
                if r.profile.generic && r.profile.omega3 > 0 && r.exceptional {
                    println!("{},{},{}", r.n, r.profile.omega3, r.rk4.expect("generic"));
                }
            }
            for (w, c) in &rep.generic_by_omega3 {
                if *w > 0 {
                    let e = rep.exceptional_by_omega3.get(w).copied().unwrap_or(0);
                    println!("# omega3={w}: {c} generic, {e} exceptional");
                }
            }
        }
        Command::Sweep {
            max,
            chunk,
            workers,
            records,
            report,
            checkpoints,
        } => {
            let mut cfg = SweepConfig::new(max);
            cfg.chunk_size = chunk;
            cfg.worker_count = workers;
            cfg.emit_records = records.is_some();
            cfg.output_path = records;
            cfg.checkpoints = checkpoints;
            let reps = run_sweep_checkpoints(&cfg)?;
            if let Some(path) = report {
                write_report_csv(&path, &reps)?;
            }
            println!("{REPORT_CSV_HEADER}");
            for r in &reps {
                println!("{}", r.csv_row());
            }
        }
        Command::Verify { suite, max, seed } => {
            let run_one = |s: Suite, default: u64| {
                let max = max.unwrap_or(default);
                if max < 3 {
                    return Err(Failure::Domain("--max must be at least 3".into()));
                }
                Ok(verify::run_suite(s, VerifyOptions { max, seed })?)
            };
            let results = match suite {
                Suite::All => {
                    let mut v = run_one(Suite::Symbols, 10_000)?;
                    v.extend(run_one(Suite::Identities, 2000)?);
                    v.extend(run_one(Suite::Table, 1000)?);
                    v.extend(run_one(Suite::Asymptotics, 1_000_000)?);
                    v
                }
                Suite::Symbols => run_one(suite, 10_000)?,
                Suite::Identities => run_one(suite, 2000)?,
                Suite::Table => run_one(suite, 1000)?,
                Suite::Asymptotics => run_one(suite, 1_000_000)?,
            };
            let mut all_ok = true;
            for r in &results {
                println!("{r}");
                all_ok &= r.ok();
            }
            if !all_ok {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
