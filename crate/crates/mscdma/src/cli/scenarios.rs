//! Named system scenarios for the SINR sweeps.
//!
//! Each scenario maps (load, bandwidth) to a moment table and a noise
//! scaling; the detector stage then turns (table, SNR, rank) into an
//! output SINR. Bandwidth is carried as B·T_c, so 0.5 is the Nyquist
//! minimum and 1.0 a full excess-bandwidth chip pulse.

use crate::detector::wiener_design;
use crate::moments::{
    matrix_recursion_with, uniform_delay_recursion, MatrixRecursionOptions, MomentTable,
    SystemEnsemble,
};
use crate::pulse::{ChipPulse, FrontEnd};
use crate::{to_db, Error, Result};

/// The comparison curves of the bandwidth / load / roll-off sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Chip-synchronous system with a root-Nyquist pulse (the reference
    /// curve; independent of bandwidth).
    Sync,
    /// Chip-asynchronous, oversampling front-end, sinc pulse of the given
    /// bandwidth.
    AsyncASinc,
    /// Chip-asynchronous, oversampling front-end, root-raised-cosine pulse.
    AsyncARrc,
    /// Chip-asynchronous, chip-rate sampling of a root-raised-cosine pulse,
    /// sampling instants aligned with the user of interest.
    AsyncB,
}

impl Scenario {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sync" => Ok(Scenario::Sync),
            "async-a-sinc" => Ok(Scenario::AsyncASinc),
            "async-a-rrc" => Ok(Scenario::AsyncARrc),
            "async-b" => Ok(Scenario::AsyncB),
            other => Err(Error::Config(format!(
                "unknown scenario \"{other}\" (expected sync|async-a-sinc|async-a-rrc|async-b)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Scenario::Sync => "sync",
            Scenario::AsyncASinc => "async-a-sinc",
            Scenario::AsyncARrc => "async-a-rrc",
            Scenario::AsyncB => "async-b",
        }
    }
}

/// A scenario evaluated at one (load, bandwidth) operating point.
pub struct ScenarioPoint {
    pub table: MomentTable,
    /// Index of the class whose SINR is reported.
    pub class: usize,
    /// σ² = noise_scale · N₀ at this front-end.
    pub noise_scale: f64,
}

/// Build the moment table for a scenario with equal received powers.
///
/// `bandwidth_tc` is B·T_c ∈ [0.5, 1]; the sync reference ignores it.
pub fn scenario_point(
    scenario: Scenario,
    load: f64,
    bandwidth_tc: f64,
    chip_interval: f64,
    depth: usize,
    grid: usize,
) -> Result<ScenarioPoint> {
    match scenario {
        Scenario::Sync => {
            let pulse = ChipPulse::sinc(1.0, chip_interval, FrontEnd::TypeA { oversampling: 1 })?;
            let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 1.0)?;
            let table = uniform_delay_recursion(&ens, &pulse, depth)?;
            Ok(ScenarioPoint {
                table,
                class: 0,
                noise_scale: pulse.noise_variance(1.0),
            })
        }
        Scenario::AsyncASinc => {
            let gamma = 2.0 * bandwidth_tc;
            if !(0.0..=2.0).contains(&gamma) {
                return Err(Error::Config(format!(
                    "sinc scenario needs B·T_c ≤ 1 (got {bandwidth_tc})"
                )));
            }
            let r = if gamma <= 1.0 { 1 } else { 2 };
            let pulse = ChipPulse::sinc(gamma, chip_interval, FrontEnd::TypeA { oversampling: r })?;
            let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 1.0)?;
            let table = uniform_delay_recursion(&ens, &pulse, depth)?;
            Ok(ScenarioPoint {
                table,
                class: 0,
                noise_scale: pulse.noise_variance(1.0),
            })
        }
        Scenario::AsyncARrc => {
            let rolloff = 2.0 * bandwidth_tc - 1.0;
            if !(0.0..=1.0).contains(&rolloff) {
                return Err(Error::Config(format!(
                    "root-raised-cosine scenario needs B·T_c in [0.5, 1] (got {bandwidth_tc})"
                )));
            }
            let pulse = ChipPulse::root_raised_cosine(
                rolloff,
                chip_interval,
                FrontEnd::TypeA { oversampling: 2 },
            )?;
            let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 1.0)?;
            let table = uniform_delay_recursion(&ens, &pulse, depth)?;
            Ok(ScenarioPoint {
                table,
                class: 0,
                noise_scale: pulse.noise_variance(1.0),
            })
        }
        Scenario::AsyncB => {
            let rolloff = 2.0 * bandwidth_tc - 1.0;
            if !(0.0..=1.0).contains(&rolloff) {
                return Err(Error::Config(format!(
                    "chip-rate scenario needs B·T_c in [0.5, 1] (got {bandwidth_tc})"
                )));
            }
            let pulse = ChipPulse::root_raised_cosine(rolloff, chip_interval, FrontEnd::TypeB)?;
            let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 1.0)?;
            // The user of interest is sampled in perfect alignment: a
            // zero-weight probe class at τ̃ = 0 rides the recursion while the
            // interferer delays stay uniform.
            let opts = MatrixRecursionOptions {
                grid_size: grid,
                probes: vec![(1.0, 0.0)],
                ..MatrixRecursionOptions::default()
            };
            let table = matrix_recursion_with(&ens, &pulse, depth, &opts)?;
            let class = table
                .find_class(1.0, Some(0.0), 1e-12)
                .ok_or_else(|| Error::Config("probe class missing from moment table".into()))?;
            Ok(ScenarioPoint {
                table,
                class,
                noise_scale: pulse.noise_variance(1.0),
            })
        }
    }
}

impl ScenarioPoint {
    /// Wiener SINR in dB at the given input SNR (dB) and detector rank.
    ///
    /// High ranks at low load push the Krylov moment matrix past the
    /// conditioning guard; the sweep then falls back to the ridged solve,
    /// whose SINR perturbation is far below plotting resolution.
    pub fn wiener_sinr_db(&self, snr_db: f64, rank: usize) -> Result<f64> {
        let n0 = 1.0 / crate::from_db(snr_db);
        let sigma2 = self.noise_scale * n0;
        match wiener_design(&self.table, self.class, sigma2, rank) {
            Ok(design) => Ok(to_db(design.sinr)),
            Err(Error::IllConditioned { .. }) => {
                let (xi, xiv) =
                    crate::detector::build_moment_inputs(&self.table, self.class, sigma2, rank)?;
                let w = crate::detector::mmse_weights_ridged(&xi, &xiv)?;
                Ok(to_db(crate::detector::sinr_general(&w, &xi, &xiv)?))
            }
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nyquist_point_equals_sync() {
        let sync = scenario_point(Scenario::Sync, 0.5, 0.5, 1.0, 8, 256).unwrap();
        let asinc = scenario_point(Scenario::AsyncASinc, 0.5, 0.5, 1.0, 8, 256).unwrap();
        let arrc = scenario_point(Scenario::AsyncARrc, 0.5, 0.5, 1.0, 8, 256).unwrap();
        let a = sync.wiener_sinr_db(10.0, 4).unwrap();
        let b = asinc.wiener_sinr_db(10.0, 4).unwrap();
        let c = arrc.wiener_sinr_db(10.0, 4).unwrap();
        assert!((a - b).abs() < 1e-8);
        assert!((a - c).abs() < 1e-6);
    }

    #[test]
    fn async_orderings_hold_at_full_excess_bandwidth() {
        let sync = scenario_point(Scenario::Sync, 0.5, 1.0, 1.0, 8, 256).unwrap();
        let asinc = scenario_point(Scenario::AsyncASinc, 0.5, 1.0, 1.0, 8, 256).unwrap();
        let arrc = scenario_point(Scenario::AsyncARrc, 0.5, 1.0, 1.0, 8, 256).unwrap();
        let s = sync.wiener_sinr_db(10.0, 4).unwrap();
        let si = asinc.wiener_sinr_db(10.0, 4).unwrap();
        let rc = arrc.wiener_sinr_db(10.0, 4).unwrap();
        assert!(si > rc && rc > s, "sinc {si} dB, rrc {rc} dB, sync {s} dB");
    }
}
