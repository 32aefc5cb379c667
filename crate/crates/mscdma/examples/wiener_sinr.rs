//! Universal Wiener weights and output SINR versus detector rank for a
//! chip-asynchronous system, including the per-class view of the common
//! polynomial-expansion weights.

use mscdma::detector::{
    build_moment_inputs, polynomial_expansion_design, sinr_general, wiener_design,
};
use mscdma::moments::{uniform_delay_recursion, PowerDelayAtom, SystemEnsemble};
use mscdma::pulse::{ChipPulse, FrontEnd};
use mscdma::to_db;

fn main() -> mscdma::Result<()> {
    let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 })?;
    let atoms = vec![
        PowerDelayAtom {
            power: 0.5,
            delay: 0.0,
            prob: 0.5,
        },
        PowerDelayAtom {
            power: 1.5,
            delay: 0.0,
            prob: 0.5,
        },
    ];
    let ensemble = SystemEnsemble::new(0.5, &pulse, 0.1, atoms, true)?;
    let sigma2 = ensemble.noise_variance;
    let table = uniform_delay_recursion(&ensemble, &pulse, 16)?;

    println!("async sinc pulse (50% excess bandwidth), two power classes, 10 dB SNR\n");
    println!("per-class Wiener designs:");
    for rank in [1usize, 2, 4, 8] {
        for class in 0..2 {
            let design = wiener_design(&table, class, sigma2, rank)?;
            println!(
                "  L = {rank}, power {:.1}: SINR {:6.3} dB, w = {:?}",
                table.classes[class].power,
                design.sinr_db(),
                design
                    .weights
                    .iter()
                    .map(|w| (w * 1e4).round() / 1e4)
                    .collect::<Vec<_>>()
            );
        }
    }

    println!("\ncommon polynomial-expansion weights (rank 4), evaluated per class:");
    let pe = polynomial_expansion_design(&table, sigma2, 4)?;
    for class in 0..2 {
        let (xi, xiv) = build_moment_inputs(&table, class, sigma2, 4)?;
        let sinr = sinr_general(&pe.weights, &xi, &xiv)?;
        let wiener = wiener_design(&table, class, sigma2, 4)?.sinr;
        println!(
            "  power {:.1}: common {:6.3} dB vs per-class Wiener {:6.3} dB",
            table.classes[class].power,
            to_db(sinr),
            to_db(wiener)
        );
    }
    Ok(())
}
