//! Class-group 4-ranks of the biquadratic fields `K_n = Q(i, √n)` for odd
//! squarefree `n`, computed through Gaussian-integer residue symbols.
//!
//! Module map:
//!
//! * [`gaussint`]: exact arithmetic in `Z[i]`.
//! * [`gsymbol`]: the quadratic residue symbol `[α/β]` and tame Hilbert symbols.
//! * [`gfactor`]: rational and Gaussian factorization, split-prime cache.
//! * [`genus`]: profiles `(ω₁, ω₃, genericity)`, the genus group and the 2-rank.
//! * [`fourrank`]: the counting function `f(n)` and its identities.
//! * [`sweep`]: bulk statistics and CSV reports.
//! * [`verify`]: seeded law and identity suites.

pub mod dyadic;
pub mod error;
pub mod fourrank;
pub mod gaussint;
pub mod genus;
pub mod gfactor;
pub mod gsymbol;
pub mod modular;
pub mod sweep;
pub mod verify;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use fourrank::{
    criterion_hilbert, decompose, detect_indicator, f_char, f_direct, nu, rank4_generic,
    DecompositionSet, FourRankRecord,
};
pub use gaussint::{gcd, GaussInt, Mod4Class, Unit};
pub use genus::{gn_enumerate, profile, rk2, GenusElement, SquarefreeProfile};
pub use gfactor::{
    factor_rational, gauss_factorize, split_prime, GaussFactorization, PrimeEntry, PrimeKind,
    SpfSieve,
};
pub use gsymbol::{
    symbol, symbol_prime, tame_hilbert, verify_reciprocity, FactoredModulus, SymbolValue,
};
pub use sweep::{
    exceptional_scan, mt_asymptotic_check, record_minima, run_sweep, run_sweep_checkpoints,
    SweepConfig, SweepReport,
};
