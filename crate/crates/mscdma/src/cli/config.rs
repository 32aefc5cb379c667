//! TOML experiment configuration.
//!
//! One structured file drives all three subcommands; each block is
//! validated with field-named diagnostics. The schema is documented in the
//! repository README.

use crate::moments::{PowerDelayAtom, SystemEnsemble};
use crate::pulse::{ChipPulse, FrontEnd};
use crate::{from_db, Error, Result};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pulse: PulseConfig,
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default)]
    pub moments: MomentsConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub montecarlo: Option<MonteCarloConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.pulse.build()?;
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        if let Some(mc) = &self.montecarlo {
            mc.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    /// "sinc" | "rrc" | "tabulated"
    pub kind: String,
    pub gamma: Option<f64>,
    pub rolloff: Option<f64>,
    /// Path to a two-column spectrum file for tabulated pulses.
    pub file: Option<String>,
    #[serde(default = "default_chip_interval")]
    pub chip_interval: f64,
    /// "a" | "b"
    #[serde(default = "default_front_end")]
    pub front_end: String,
    #[serde(default = "default_oversampling")]
    pub oversampling: u32,
    /// Resampling grid for tabulated pulses.
    pub grid_len: Option<usize>,
}

fn default_chip_interval() -> f64 {
    1.0
}
fn default_front_end() -> String {
    "a".into()
}
fn default_oversampling() -> u32 {
    1
}

impl PulseConfig {
    pub fn front_end(&self) -> Result<FrontEnd> {
        match self.front_end.as_str() {
            "a" | "A" => Ok(FrontEnd::TypeA {
                oversampling: self.oversampling,
            }),
            "b" | "B" => Ok(FrontEnd::TypeB),
            other => Err(Error::Config(format!(
                "pulse.front_end must be \"a\" or \"b\", got \"{other}\""
            ))),
        }
    }

    pub fn build(&self) -> Result<ChipPulse> {
        let fe = self.front_end()?;
        match self.kind.as_str() {
            "sinc" => {
                let gamma = self.gamma.ok_or_else(|| {
                    Error::Config("pulse.gamma required for kind = \"sinc\"".into())
                })?;
                ChipPulse::sinc(gamma, self.chip_interval, fe)
            }
            "rrc" => {
                let rolloff = self.rolloff.ok_or_else(|| {
                    Error::Config("pulse.rolloff required for kind = \"rrc\"".into())
                })?;
                ChipPulse::root_raised_cosine(rolloff, self.chip_interval, fe)
            }
            "tabulated" => {
                let file = self.file.as_ref().ok_or_else(|| {
                    Error::Config("pulse.file required for kind = \"tabulated\"".into())
                })?;
                let f = std::fs::File::open(file)
                    .map_err(|e| Error::Config(format!("pulse.file {file}: {e}")))?;
                ChipPulse::tabulated_from_reader(
                    std::io::BufReader::new(f),
                    self.chip_interval,
                    fe,
                    self.grid_len,
                )
            }
            other => Err(Error::Config(format!(
                "pulse.kind must be sinc|rrc|tabulated, got \"{other}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub load: f64,
    /// Input SNR in dB (1/N₀ with unit received power); alternative to n0.
    pub snr_db: Option<f64>,
    pub n0: Option<f64>,
    #[serde(default = "default_true")]
    pub uniform_delay: bool,
    /// [power, probability] pairs when delays are uniform.
    #[serde(default)]
    pub power_atoms: Option<Vec<[f64; 2]>>,
    /// [power, delay, probability] triples when delays are atoms.
    #[serde(default)]
    pub delay_atoms: Option<Vec<[f64; 3]>>,
}

fn default_true() -> bool {
    true
}

impl EnsembleConfig {
    pub fn n0(&self) -> Result<f64> {
        match (self.n0, self.snr_db) {
            (Some(n0), None) => Ok(n0),
            (None, Some(snr)) => Ok(1.0 / from_db(snr)),
            (None, None) => Err(Error::Config("ensemble needs either n0 or snr_db".into())),
            (Some(_), Some(_)) => Err(Error::Config(
                "ensemble.n0 and ensemble.snr_db are mutually exclusive".into(),
            )),
        }
    }

    pub fn atoms(&self) -> Result<Vec<PowerDelayAtom>> {
        match (&self.power_atoms, &self.delay_atoms, self.uniform_delay) {
            (Some(p), None, _) => Ok(p
                .iter()
                .map(|&[power, prob]| PowerDelayAtom {
                    power,
                    delay: 0.0,
                    prob,
                })
                .collect()),
            (None, Some(d), false) => Ok(d
                .iter()
                .map(|&[power, delay, prob]| PowerDelayAtom { power, delay, prob })
                .collect()),
            (None, Some(_), true) => Err(Error::Config(
                "ensemble.delay_atoms conflicts with uniform_delay = true".into(),
            )),
            (Some(_), Some(_), _) => Err(Error::Config(
                "ensemble.power_atoms and ensemble.delay_atoms are mutually exclusive".into(),
            )),
            (None, None, _) => Ok(vec![PowerDelayAtom {
                power: 1.0,
                delay: 0.0,
                prob: 1.0,
            }]),
        }
    }

    pub fn build(&self, pulse: &ChipPulse) -> Result<SystemEnsemble> {
        SystemEnsemble::new(
            self.load,
            pulse,
            self.n0()?,
            self.atoms()?,
            self.uniform_delay,
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    #[serde(default = "default_ranks")]
    pub ranks: Vec<usize>,
}

fn default_ranks() -> Vec<usize> {
    vec![4]
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            ranks: default_ranks(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    #[serde(default = "default_engines")]
    pub engines: Vec<String>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_engines() -> Vec<String> {
    vec!["polynomial".into()]
}
fn default_depth() -> usize {
    8
}
fn default_grid() -> usize {
    1024
}

impl Default for MomentsConfig {
    fn default() -> Self {
        Self {
            engines: default_engines(),
            depth: default_depth(),
            grid: default_grid(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// "bandwidth" | "load" | "rolloff" | "snr"
    pub axis: String,
    pub grid: Vec<f64>,
    /// SNR curve parameters (dB); defaults to the ensemble's SNR.
    #[serde(default)]
    pub snr_db: Option<Vec<f64>>,
    #[serde(default)]
    pub scenarios: Option<Vec<String>>,
    /// Bandwidths (B·T_c) for load sweeps, one curve set per value.
    #[serde(default)]
    pub bandwidths: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        match self.axis.as_str() {
            "bandwidth" | "load" | "rolloff" | "snr" => {}
            other => {
                return Err(Error::Config(format!(
                    "sweep.axis must be bandwidth|load|rolloff|snr, got \"{other}\""
                )))
            }
        }
        if self.grid.is_empty() {
            return Err(Error::Config("sweep.grid must not be empty".into()));
        }
        for pair in self.grid.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Config(
                    "sweep.grid must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub spreading_factor: usize,
    pub users: usize,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_probe_users")]
    pub probe_users: usize,
    #[serde(default = "default_max_ell")]
    pub max_ell: usize,
    /// "diag-moments" | "sinr"
    #[serde(default = "default_quantity")]
    pub quantity: String,
    #[serde(default = "default_gate")]
    pub gate_pct: f64,
    /// Memory guard in bytes for the windowed system.
    #[serde(default = "default_cap")]
    pub memory_cap: usize,
}

fn default_seeds() -> usize {
    20
}
fn default_base_seed() -> u64 {
    1
}
fn default_window() -> usize {
    9
}
fn default_trials() -> usize {
    2000
}
fn default_probe_users() -> usize {
    24
}
fn default_max_ell() -> usize {
    4
}
fn default_quantity() -> String {
    "diag-moments".into()
}
fn default_gate() -> f64 {
    3.0
}
fn default_cap() -> usize {
    crate::finite::DEFAULT_MEMORY_CAP
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.quantity != "diag-moments" && self.quantity != "sinr" {
            return Err(Error::Config(format!(
                "montecarlo.quantity must be diag-moments|sinr, got \"{}\"",
                self.quantity
            )));
        }
        if self.seeds == 0 {
            return Err(Error::Config("montecarlo.seeds must be ≥ 1".into()));
        }
        if self.probe_users == 0 {
            return Err(Error::Config("montecarlo.probe_users must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let cfg = ExperimentConfig::from_str(
            r#"
            [pulse]
            kind = "sinc"
            gamma = 1.0

            [ensemble]
            load = 0.5
            snr_db = 10.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.moments.depth, 8);
        let pulse = cfg.pulse.build().unwrap();
        let n0 = cfg.ensemble.n0().unwrap();
        assert!((n0 - 0.1).abs() < 1e-12);
        let ens = cfg.ensemble.build(&pulse).unwrap();
        assert!((ens.noise_variance - 0.1).abs() < 1e-12);
    }

    #[test]
    fn empty_sweep_grid_is_named() {
        let err = ExperimentConfig::from_str(
            r#"
            [pulse]
            kind = "sinc"
            gamma = 1.0

            [ensemble]
            load = 0.5
            snr_db = 10.0

            [sweep]
            axis = "load"
            grid = []
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("sweep.grid"));
    }

    #[test]
    fn invalid_pulse_rejected_at_parse() {
        let err = ExperimentConfig::from_str(
            r#"
            [pulse]
            kind = "sinc"
            gamma = 1.5
            oversampling = 1

            [ensemble]
            load = 0.5
            n0 = 0.1
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bandwidth"));
    }
}
