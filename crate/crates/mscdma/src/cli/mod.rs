//! Experiment configuration, sweep drivers and CSV emission.
//!
//! The `mscdma` binary is a thin wrapper over this module; the runnable
//! examples call the same entry points.

pub mod config;
pub mod csv;
pub mod run;
pub mod scenarios;

pub use config::ExperimentConfig;
pub use csv::Csv;
pub use run::{cmd_moments, cmd_montecarlo, cmd_sinr_sweep, Engine, MonteCarloOutcome};
