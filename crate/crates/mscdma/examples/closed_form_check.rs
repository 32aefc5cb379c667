//! The first five eigenvalue moments in closed form against the
//! polynomial recursion, for an unequal-power ensemble with an
//! excess-bandwidth sinc pulse.

use mscdma::moments::{closed_form_moments, polynomial_recursion, PowerDelayAtom, SystemEnsemble};
use mscdma::pulse::{ChipPulse, FrontEnd};

fn main() -> mscdma::Result<()> {
    let pulse = ChipPulse::sinc(1.6, 1.0, FrontEnd::TypeA { oversampling: 2 })?;
    let atoms = vec![
        PowerDelayAtom {
            power: 0.4,
            delay: 0.0,
            prob: 0.3,
        },
        PowerDelayAtom {
            power: 1.0,
            delay: 0.0,
            prob: 0.5,
        },
        PowerDelayAtom {
            power: 2.2,
            delay: 0.0,
            prob: 0.2,
        },
    ];
    let ensemble = SystemEnsemble::new(0.75, &pulse, 0.1, atoms, true)?;

    let closed = closed_form_moments(&ensemble, &pulse)?;
    let (_, table) = polynomial_recursion(&ensemble, &pulse, 5)?;

    println!("three power classes, β = 0.75, sinc pulse with 60% excess bandwidth\n");
    println!(
        "{:>3} {:>18} {:>18} {:>12}",
        "l", "closed form", "polynomial", "rel. gap"
    );
    for ell in 1..=5usize {
        let a = closed[ell - 1];
        let b = table.eig_moment(ell);
        println!(
            "{ell:>3} {a:>18.12} {b:>18.12} {:>12.2e}",
            ((a - b) / b).abs()
        );
    }
    Ok(())
}
