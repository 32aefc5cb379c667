//! Subcommand drivers shared by the binary and the examples.

use super::config::ExperimentConfig;
use super::csv::{num, Csv};
use super::scenarios::{scenario_point, Scenario};
use crate::detector::wiener_design;
use crate::finite::{build_system, DelaySpec, FiniteSystemConfig, PowerSpec};
use crate::moments::{
    matrix_recursion, polynomial_recursion, small_bandwidth_recursion, uniform_delay_recursion,
    MomentTable,
};
use crate::{Error, Result};
use rayon::prelude::*;

/// Selectable moment engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    MatrixRecursion,
    UniformDelay,
    SmallBandwidth,
    Polynomial,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Engine> {
        match s {
            "matrix" => Ok(Engine::MatrixRecursion),
            "uniform-delay" => Ok(Engine::UniformDelay),
            "small-bandwidth" => Ok(Engine::SmallBandwidth),
            "polynomial" => Ok(Engine::Polynomial),
            other => Err(Error::Config(format!(
                "unknown engine \"{other}\" (expected matrix|uniform-delay|small-bandwidth|polynomial|all)"
            ))),
        }
    }

    /// Comma-separated list; "all" expands to every engine.
    pub fn parse_list(s: &str) -> Result<Vec<Engine>> {
        if s == "all" {
            return Ok(vec![
                Engine::MatrixRecursion,
                Engine::UniformDelay,
                Engine::SmallBandwidth,
                Engine::Polynomial,
            ]);
        }
        s.split(',').map(|p| Engine::parse(p.trim())).collect()
    }

    pub fn label(&self) -> &'static str {
        match self {
            Engine::MatrixRecursion => "matrix",
            Engine::UniformDelay => "uniform-delay",
            Engine::SmallBandwidth => "small-bandwidth",
            Engine::Polynomial => "polynomial",
        }
    }
}

/// Configure the worker pool size (once per process; later calls are
/// ignored by rayon).
pub fn set_jobs(jobs: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global();
}

/// `moments` subcommand: asymptotic R_ℓ and m^{(ℓ)} per engine.
/// Columns: engine,ell,class,power,delay,r_value,eig_moment.
pub fn cmd_moments(cfg: &ExperimentConfig, engines: Option<&[Engine]>) -> Result<Csv> {
    let pulse = cfg.pulse.build()?;
    let ensemble = cfg.ensemble.build(&pulse)?;
    let depth = cfg.moments.depth;
    let from_cfg: Result<Vec<Engine>> = cfg
        .moments
        .engines
        .iter()
        .map(|s| Engine::parse(s))
        .collect();
    let engines: Vec<Engine> = match engines {
        Some(list) => list.to_vec(),
        None => from_cfg?,
    };
    let mut csv = Csv::new(&[
        "engine",
        "ell",
        "class",
        "power",
        "delay",
        "r_value",
        "eig_moment",
    ]);
    let several = engines.len() > 1;
    for engine in engines {
        let table: Result<MomentTable> = match engine {
            Engine::MatrixRecursion => matrix_recursion(&ensemble, &pulse, depth, cfg.moments.grid),
            Engine::UniformDelay => uniform_delay_recursion(&ensemble, &pulse, depth),
            Engine::SmallBandwidth => small_bandwidth_recursion(&ensemble, &pulse, depth),
            Engine::Polynomial => polynomial_recursion(&ensemble, &pulse, depth).map(|r| r.1),
        };
        let table = match table {
            Ok(t) => t,
            // side-by-side requests skip engines whose regime preconditions
            // do not apply to this ensemble
            Err(Error::Precondition(_)) if several => continue,
            Err(e) => return Err(e),
        };
        for ell in 1..=depth {
            for (ci, class) in table.classes.iter().enumerate() {
                csv.push(vec![
                    engine.label().to_string(),
                    ell.to_string(),
                    ci.to_string(),
                    num(class.power),
                    class.delay.map(num).unwrap_or_default(),
                    num(table.r_value(ci, ell)),
                    num(table.eig_moment(ell)),
                ]);
            }
        }
    }
    Ok(csv)
}

/// `sinr-sweep` subcommand: scenario SINR curves along one axis.
/// Columns: axis,scenario,rank,snr_db,sinr_db.
pub fn cmd_sinr_sweep(cfg: &ExperimentConfig) -> Result<Csv> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sinr-sweep needs a [sweep] block".into()))?;
    sweep.validate()?;
    let pulse = cfg.pulse.build()?;
    let base_bandwidth_tc = pulse.bandwidth() * pulse.chip_interval;
    let tc = pulse.chip_interval;
    let base_snr = match (cfg.ensemble.snr_db, cfg.ensemble.n0) {
        (Some(snr), _) => snr,
        (None, Some(n0)) => crate::to_db(1.0 / n0),
        (None, None) => 10.0,
    };
    let snr_list: Vec<f64> = match (&sweep.snr_db, sweep.axis.as_str()) {
        (_, "snr") => vec![],
        (Some(list), _) => list.clone(),
        (None, _) => vec![base_snr],
    };
    let default_scenarios = match sweep.axis.as_str() {
        "rolloff" => vec!["sync", "async-a-rrc", "async-b"],
        _ => vec!["sync", "async-a-sinc", "async-a-rrc"],
    };
    let scenarios: Vec<(String, Scenario)> = match &sweep.scenarios {
        Some(list) => list
            .iter()
            .map(|s| Scenario::parse(s).map(|sc| (s.clone(), sc)))
            .collect::<Result<_>>()?,
        None => default_scenarios
            .into_iter()
            .map(|s| (s.to_string(), Scenario::parse(s).unwrap()))
            .collect(),
    };
    let bandwidths: Vec<f64> = sweep
        .bandwidths
        .clone()
        .unwrap_or_else(|| vec![base_bandwidth_tc]);
    let ranks = cfg.detector.ranks.clone();
    let depth = 2 * ranks.iter().copied().max().unwrap_or(1);
    let grid = cfg.moments.grid;
    let load = cfg.ensemble.load;

    // One work item per (axis value, labeled scenario); SNR and rank vary
    // within an item so the moment table is built once.
    struct Item {
        axis: f64,
        label: String,
        scenario: Scenario,
        load: f64,
        bandwidth_tc: f64,
        snrs: Vec<f64>,
    }
    let mut items: Vec<Item> = Vec::new();
    for &axis in &sweep.grid {
        let point_snrs = if sweep.axis.as_str() == "snr" {
            vec![axis]
        } else {
            snr_list.clone()
        };
        match sweep.axis.as_str() {
            "bandwidth" => {
                for (label, scenario) in &scenarios {
                    items.push(Item {
                        axis,
                        label: label.clone(),
                        scenario: *scenario,
                        load,
                        bandwidth_tc: axis,
                        snrs: point_snrs.clone(),
                    });
                }
            }
            "rolloff" => {
                for (label, scenario) in &scenarios {
                    items.push(Item {
                        axis,
                        label: label.clone(),
                        scenario: *scenario,
                        load,
                        bandwidth_tc: (1.0 + axis) / 2.0,
                        snrs: point_snrs.clone(),
                    });
                }
            }
            "load" => {
                for &b in &bandwidths {
                    for (label, scenario) in &scenarios {
                        let label = if bandwidths.len() > 1 {
                            format!("{label}-b{b}")
                        } else {
                            label.clone()
                        };
                        items.push(Item {
                            axis,
                            label,
                            scenario: *scenario,
                            load: axis,
                            bandwidth_tc: b,
                            snrs: point_snrs.clone(),
                        });
                    }
                }
            }
            "snr" => {
                for (label, scenario) in &scenarios {
                    items.push(Item {
                        axis,
                        label: label.clone(),
                        scenario: *scenario,
                        load,
                        bandwidth_tc: base_bandwidth_tc,
                        snrs: point_snrs.clone(),
                    });
                }
            }
            _ => unreachable!("validated"),
        }
    }

    // Evaluate in parallel, emit in item order.
    let results: Result<Vec<Vec<Vec<String>>>> = items
        .par_iter()
        .map(|item| {
            let point =
                scenario_point(item.scenario, item.load, item.bandwidth_tc, tc, depth, grid)?;
            let mut rows = Vec::new();
            for &snr in &item.snrs {
                for &rank in &ranks {
                    let sinr_db = point.wiener_sinr_db(snr, rank)?;
                    rows.push(vec![
                        num(item.axis),
                        item.label.clone(),
                        rank.to_string(),
                        num(snr),
                        num(sinr_db),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect();

    let mut csv = Csv::new(&["axis", "scenario", "rank", "snr_db", "sinr_db"]);
    for rows in results? {
        for row in rows {
            csv.push(row);
        }
    }
    Ok(csv)
}

/// Result of the `montecarlo` subcommand.
#[derive(Debug)]
pub struct MonteCarloOutcome {
    pub csv: Csv,
    /// Largest aggregate relative error, in percent.
    pub worst_rel_error_pct: f64,
    /// Whether every aggregate relative error passed the gate.
    pub gate_ok: bool,
}

/// `montecarlo` subcommand: empirical moments (or signal-level SINR)
/// against the asymptotic prediction.
/// Columns: seed,quantity,empirical,asymptotic,rel_error. Per-seed rows
/// come first; `seed = all` rows carry the across-seed means, and the gate
/// applies to those.
pub fn cmd_montecarlo(
    cfg: &ExperimentConfig,
    gate_override: Option<f64>,
) -> Result<MonteCarloOutcome> {
    let mc = cfg
        .montecarlo
        .as_ref()
        .ok_or_else(|| Error::Config("montecarlo needs a [montecarlo] block".into()))?;
    mc.validate()?;
    let pulse = cfg.pulse.build()?;
    let ensemble = cfg.ensemble.build(&pulse)?;
    let gate_pct = gate_override.unwrap_or(mc.gate_pct);

    // Asymptotic reference: the scalar engine that matches the delay model.
    let depth = match mc.quantity.as_str() {
        "diag-moments" => mc.max_ell,
        _ => 2 * cfg.detector.ranks.first().copied().unwrap_or(1),
    };
    let table = if ensemble.uniform_delay {
        uniform_delay_recursion(&ensemble, &pulse, depth)?
    } else if ensemble.atoms.iter().all(|a| a.delay == 0.0) {
        small_bandwidth_recursion(&ensemble, &pulse, depth)?
    } else {
        return Err(Error::Config(
            "montecarlo supports uniform or synchronous delays; use the library API for explicit delay atoms".into(),
        ));
    };

    // Deterministic power-class layout over the K users.
    let k = mc.users;
    if ensemble.atoms.iter().any(|a| a.power <= 0.0) {
        return Err(Error::Config(
            "montecarlo needs strictly positive powers in every class".into(),
        ));
    }
    let mut boundaries = vec![0usize];
    let mut acc = 0.0;
    for (ci, atom) in ensemble.atoms.iter().enumerate() {
        acc += atom.prob;
        let end = ((k as f64 * acc).round() as usize).min(k);
        if end <= boundaries[ci] {
            return Err(Error::Config(format!(
                "power class {ci} receives no users at K = {k}; increase montecarlo.users"
            )));
        }
        boundaries.push(end);
    }
    let amplitudes: Vec<f64> = (0..k)
        .map(|u| {
            let class = boundaries[1..].iter().position(|&b| u < b).unwrap_or(0);
            ensemble.atoms[class].power.sqrt()
        })
        .collect();
    let powers_spec = if ensemble.atoms.len() == 1 && ensemble.atoms[0].power == 1.0 {
        PowerSpec::Equal
    } else {
        PowerSpec::Fixed(amplitudes)
    };
    // Probe users: spread across each class proportionally to its mass.
    let mut probes_per_class: Vec<Vec<usize>> = Vec::new();
    for (ci, atom) in ensemble.atoms.iter().enumerate() {
        let (start, end) = (boundaries[ci], boundaries[ci + 1]);
        let span = end - start;
        let want = ((mc.probe_users as f64 * atom.prob).round() as usize)
            .clamp(1, span);
        let probes = (0..want).map(|i| start + i * span / want).collect();
        probes_per_class.push(probes);
    }
    let delay_spec = if ensemble.uniform_delay {
        DelaySpec::Uniform
    } else {
        DelaySpec::Synchronous
    };

    let seeds: Vec<u64> = (0..mc.seeds as u64).map(|i| mc.base_seed + i).collect();
    let mut csv = Csv::new(&["seed", "quantity", "empirical", "asymptotic", "rel_error"]);
    let mut worst = 0.0f64;

    match mc.quantity.as_str() {
        "diag-moments" => {
            let per_seed: Result<Vec<Vec<Vec<f64>>>> = seeds
                .par_iter()
                .map(|&seed| {
                    let sys_cfg = FiniteSystemConfig {
                        memory_cap: mc.memory_cap,
                        ..FiniteSystemConfig::new(
                            mc.spreading_factor,
                            k,
                            pulse.clone(),
                            mc.window,
                            delay_spec.clone(),
                            powers_spec.clone(),
                            ensemble.n0,
                            seed,
                        )
                    };
                    let sys = build_system(&sys_cfg)?;
                    let symbol = sys.central_symbol();
                    // class-major, then ℓ-major means over the class probes
                    let mut rows = Vec::new();
                    for probes in &probes_per_class {
                        let batch = sys.empirical_diag_moments_batch(mc.max_ell, probes, symbol)?;
                        let means: Vec<f64> = batch
                            .iter()
                            .map(|vals| vals.iter().sum::<f64>() / vals.len() as f64)
                            .collect();
                        rows.push(means);
                    }
                    Ok(rows)
                })
                .collect();
            let per_seed = per_seed?;
            for (si, seed_rows) in per_seed.iter().enumerate() {
                for (ci, means) in seed_rows.iter().enumerate() {
                    for (li, &emp) in means.iter().enumerate() {
                        let asym = table.r_value(ci, li + 1);
                        csv.push(vec![
                            seeds[si].to_string(),
                            format!("R{}[class{}]", li + 1, ci),
                            num(emp),
                            num(asym),
                            num((emp - asym) / asym),
                        ]);
                    }
                }
            }
            for ci in 0..probes_per_class.len() {
                for li in 0..mc.max_ell {
                    let mean: f64 =
                        per_seed.iter().map(|s| s[ci][li]).sum::<f64>() / per_seed.len() as f64;
                    let asym = table.r_value(ci, li + 1);
                    let rel = (mean - asym) / asym;
                    worst = worst.max(rel.abs() * 100.0);
                    csv.push(vec![
                        "all".into(),
                        format!("R{}[class{}]", li + 1, ci),
                        num(mean),
                        num(asym),
                        num(rel),
                    ]);
                }
            }
        }
        "sinr" => {
            let rank = cfg.detector.ranks.first().copied().unwrap_or(1);
            let design = wiener_design(&table, 0, ensemble.noise_variance, rank)?;
            let probe_user = probes_per_class[0][0];
            // trials split across seeds; the aggregate is the pooled ratio
            let trials_per_seed = (mc.trials / mc.seeds).max(1);
            let per_seed: Result<Vec<(f64, f64)>> = seeds
                .par_iter()
                .map(|&seed| {
                    let sys_cfg = FiniteSystemConfig {
                        memory_cap: mc.memory_cap,
                        ..FiniteSystemConfig::new(
                            mc.spreading_factor,
                            k,
                            pulse.clone(),
                            mc.window,
                            delay_spec.clone(),
                            powers_spec.clone(),
                            ensemble.n0,
                            seed,
                        )
                    };
                    let sys = build_system(&sys_cfg)?;
                    sys.signal_level_components(
                        &design.weights,
                        probe_user,
                        ensemble.n0,
                        trials_per_seed,
                        &pulse,
                    )
                })
                .collect();
            let per_seed = per_seed?;
            for (si, &(sig, res)) in per_seed.iter().enumerate() {
                let emp = if res > 0.0 { sig / res } else { f64::INFINITY };
                csv.push(vec![
                    seeds[si].to_string(),
                    format!("sinr[L{rank}]"),
                    num(emp),
                    num(design.sinr),
                    num((emp - design.sinr) / design.sinr),
                ]);
            }
            let pooled = per_seed.iter().map(|p| p.0).sum::<f64>()
                / per_seed.iter().map(|p| p.1).sum::<f64>();
            let rel = (pooled - design.sinr) / design.sinr;
            worst = worst.max(rel.abs() * 100.0);
            csv.push(vec![
                "all".into(),
                format!("sinr[L{rank}]"),
                num(pooled),
                num(design.sinr),
                num(rel),
            ]);
        }
        other => {
            return Err(Error::Config(format!(
                "montecarlo.quantity must be diag-moments|sinr, got \"{other}\""
            )))
        }
    }

    Ok(MonteCarloOutcome {
        csv,
        worst_rel_error_pct: worst,
        gate_ok: worst <= gate_pct,
    })
}
