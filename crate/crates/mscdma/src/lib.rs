//! Large-system analysis of linear multistage multiuser detectors for
//! asynchronous CDMA with random spreading.
//!
//! The crate computes asymptotic (K, N → ∞ at fixed load β = K/N) moments of
//! the correlation matrix of a randomly spread, chip-asynchronous CDMA
//! system, designs universal Wiener / polynomial-expansion weight vectors
//! from them, and predicts the output SINR of rank-L multistage detectors.
//! Every asymptotic quantity can be cross-checked against a finite-(N, K)
//! Monte Carlo oracle built from the exact block-circulant system model.
//!
//! Module map:
//! * [`pulse`]: chip-pulse spectra, folded (aliased) discrete-time
//!   transforms, Δ-vectors, Q-kernels, and the ℰ_s energy coefficients.
//! * [`moments`]: the asymptotic moment engines (full matrix recursion,
//!   two scalar specializations, and the polynomial substitution algorithm)
//!   plus closed-form and Marchenko–Pastur oracles.
//! * [`detector`]: Ξ/ξ moment matrices, Wiener-Hopf weights, SINR formulas.
//! * [`finite`]: finite-dimensional system builder and signal-level
//!   Monte Carlo estimators.
//! * [`cli`]: experiment configs, sweep drivers and CSV emission shared by
//!   the `mscdma` binary and the examples.
//!
//! ```
//! use mscdma::detector::wiener_design;
//! use mscdma::moments::{uniform_delay_recursion, SystemEnsemble};
//! use mscdma::pulse::{ChipPulse, FrontEnd};
//!
//! // chip-asynchronous system, sinc pulse with 50% excess bandwidth,
//! // load 0.5, input SNR 10 dB
//! let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 })?;
//! let ensemble = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1)?;
//! let table = uniform_delay_recursion(&ensemble, &pulse, 8)?;
//! let design = wiener_design(&table, 0, ensemble.noise_variance, 4)?;
//! assert!((design.sinr_db() - 8.39).abs() < 0.01);
//! # Ok::<(), mscdma::Error>(())
//! ```

pub mod cli;
pub mod detector;
pub mod finite;
pub mod linalg;
pub mod moments;
pub mod pulse;
pub mod quad;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("non-finite value at recursion depth {depth} (class {class}): {detail}")]
    NonFinite {
        depth: usize,
        class: usize,
        detail: String,
    },
    #[error("moment table depth {have} insufficient: rank {rank} requires depth {need}")]
    TableDepth {
        have: usize,
        need: usize,
        rank: usize,
    },
    #[error("ill-conditioned moment matrix (cond ≈ {cond:.3e} > {limit:.1e}); reduce the rank or enable the ridge option")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("degenerate SINR denominator: {0}")]
    DegenerateSinr(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("memory cap exceeded: system needs {need} bytes, cap is {cap}")]
    MemoryCap { need: usize, cap: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Linear power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Decibels to linear power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
