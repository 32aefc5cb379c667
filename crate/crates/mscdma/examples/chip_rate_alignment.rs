//! Chip-rate sampling is phase-sensitive: sweeping the sampling phase of a
//! Type-B front-end shows the matched-filter energy of a user peaking when
//! the sampling instants hit that user's delay.

use mscdma::finite::{frontend_b_system, DelaySpec, FiniteSystemConfig, PowerSpec};
use mscdma::pulse::{ChipPulse, FrontEnd};

fn main() -> mscdma::Result<()> {
    let pulse = ChipPulse::root_raised_cosine(0.5, 1.0, FrontEnd::TypeB)?;
    let n = 256;
    let k = 128;
    let target = 3.0 / 8.0; // the observed user's chip delay
    let mut delays = vec![0.0, target];
    delays.extend((0..k - 2).map(|i| (i as f64 + 0.7) * n as f64 / (k as f64 - 2.0)));
    delays.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let user = delays.iter().position(|&d| d == target).unwrap();

    let cfg = FiniteSystemConfig::new(
        n,
        k,
        pulse,
        3,
        DelaySpec::Fixed(delays),
        PowerSpec::Equal,
        0.1,
        42,
    );
    println!("user delay {target} T_c; matched-filter energy vs sampling phase\n");
    println!("{:>10} {:>12}", "phase/T_c", "||h||^2");
    for p in 0..8 {
        let phase = p as f64 / 8.0;
        let sys = frontend_b_system(&cfg, phase)?;
        let energy = sys.empirical_diag_moment(1, user, 1)?;
        let marker = if (phase - target).abs() < 1e-12 {
            "  <- aligned"
        } else {
            ""
        };
        println!("{phase:>10.3} {energy:>12.5}{marker}");
    }
    Ok(())
}
