//! Asymptotic eigenvalue moments of the correlation matrix, computed by
//! all four engines side by side.
//!
//! For the Nyquist sinc pulse at chip-rate sampling the moments reduce to
//! the Marchenko–Pastur family, printed in the last column as a reference.

use mscdma::moments::{
    matrix_recursion, mp_moment_oracle, polynomial_recursion, small_bandwidth_recursion,
    uniform_delay_recursion, SystemEnsemble,
};
use mscdma::pulse::{ChipPulse, FrontEnd};

fn main() -> mscdma::Result<()> {
    let load = 0.5;
    let depth = 6;
    let pulse = ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeA { oversampling: 1 })?;
    let ensemble = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 0.1)?;

    let t1 = matrix_recursion(&ensemble, &pulse, depth, 1024)?;
    let c1 = uniform_delay_recursion(&ensemble, &pulse, depth)?;
    let t2 = small_bandwidth_recursion(&ensemble, &pulse, depth)?;
    let (_, a1) = polynomial_recursion(&ensemble, &pulse, depth)?;

    println!("eigenvalue moments m^(l), load β = {load}, Nyquist sinc pulse\n");
    println!(
        "{:>3} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "l", "matrix rec.", "uniform rec.", "small-B rec.", "polynomial", "Marchenko-P."
    );
    for ell in 1..=depth {
        println!(
            "{ell:>3} {:>14.10} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            t1.eig_moment(ell),
            c1.eig_moment(ell),
            t2.eig_moment(ell),
            a1.eig_moment(ell),
            mp_moment_oracle(load, ell as u32),
        );
    }

    // the table serializes to a plain text format
    println!("\nserialized table:\n");
    let mut buf = Vec::new();
    c1.write_text(&mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    Ok(())
}
