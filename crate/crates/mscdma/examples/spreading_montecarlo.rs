//! Finite-system Monte Carlo check of the asymptotic diagonal moments:
//! random block-circulant spreading, banded-window estimator, and the
//! scalar recursion prediction side by side.

use mscdma::finite::{build_system, DelaySpec, FiniteSystemConfig, PowerSpec};
use mscdma::moments::{uniform_delay_recursion, SystemEnsemble};
use mscdma::pulse::{ChipPulse, FrontEnd};

fn main() -> mscdma::Result<()> {
    let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 })?;
    let ensemble = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1)?;
    let table = uniform_delay_recursion(&ensemble, &pulse, 4)?;

    let n = 256;
    let k = 128;
    let seeds = 8u64;
    let probes: Vec<usize> = (0..32).map(|i| i * k / 32).collect();
    let mut means = [0.0; 4];
    for seed in 0..seeds {
        let cfg = FiniteSystemConfig::new(
            n,
            k,
            pulse.clone(),
            9,
            DelaySpec::Uniform,
            PowerSpec::Equal,
            0.1,
            1 + seed,
        );
        let sys = build_system(&cfg)?;
        let batch = sys.empirical_diag_moments_batch(4, &probes, sys.central_symbol())?;
        for (l, vals) in batch.iter().enumerate() {
            means[l] += vals.iter().sum::<f64>() / vals.len() as f64 / seeds as f64;
        }
    }

    println!("N = {n}, K = {k}, {seeds} seeds, uniform delays, 50% excess bandwidth\n");
    println!(
        "{:>3} {:>14} {:>14} {:>10}",
        "l", "empirical", "asymptotic", "rel. err"
    );
    for ell in 1..=4usize {
        let asym = table.r_value(0, ell);
        println!(
            "{ell:>3} {:>14.6} {asym:>14.6} {:>9.2}%",
            means[ell - 1],
            (means[ell - 1] / asym - 1.0) * 100.0
        );
    }
    Ok(())
}
