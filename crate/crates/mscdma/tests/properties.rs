//! Property tests for the spectral kernels and the detector algebra.

use mscdma::detector::{build_moment_inputs, mmse_weights, sinr_general, sinr_wiener};
use mscdma::moments::{uniform_delay_recursion, SystemEnsemble};
use mscdma::pulse::{fourier_phase_vector, ChipPulse, FrontEnd};
use proptest::prelude::*;
use std::f64::consts::PI;

fn arb_pulse() -> impl Strategy<Value = ChipPulse> {
    prop_oneof![
        (0.25f64..2.0).prop_map(|gamma| {
            let r = if gamma <= 1.0 { 1 } else { 2 };
            ChipPulse::sinc(gamma, 1.0, FrontEnd::TypeA { oversampling: r }).unwrap()
        }),
        (0.0f64..=1.0).prop_map(|theta| {
            ChipPulse::root_raised_cosine(theta, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap()
        }),
        (0.0f64..=1.0).prop_map(|theta| {
            ChipPulse::root_raised_cosine(theta, 1.0, FrontEnd::TypeB).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn folded_transform_is_periodic(pulse in arb_pulse(), omega in -8.0f64..8.0, tau in -2.0f64..2.0) {
        let a = pulse.folded_transform(omega, tau);
        let b = pulse.folded_transform(omega + 2.0 * PI, tau);
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn folded_transform_shift_identity(pulse in arb_pulse(), omega in -3.2f64..3.2, tau in -1.0f64..1.0) {
        let lhs = pulse.folded_transform(omega, tau + pulse.chip_interval);
        let rhs = num_complex::Complex64::from_polar(1.0, omega) * pulse.folded_transform(omega, tau);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn q_matrices_are_hermitian_psd(pulse in arb_pulse(), omega in -3.2f64..3.2, tau in 0.0f64..1.0) {
        let q = pulse.q_matrix(omega, tau);
        prop_assert!(q.hermitian_error() < 1e-12);
        prop_assert!(q.min_eigenvalue() > -1e-10);
        let avg = pulse.q_matrix_tau_avg(omega);
        prop_assert!(avg.hermitian_error() < 1e-12);
        prop_assert!(avg.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn phase_vectors_have_unit_norm(omega in -10.0f64..10.0, r in 1u32..6) {
        let e = fourier_phase_vector(omega, r);
        let norm: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sinr_is_scale_invariant(
        load in 0.2f64..1.2,
        sigma2 in 0.01f64..0.5,
        rank in 1usize..5,
        scale in prop_oneof![0.01f64..100.0, -100.0f64..-0.01],
    ) {
        let pulse = ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeA { oversampling: 1 }).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, sigma2).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 2 * rank).unwrap();
        let (xi, xiv) = build_moment_inputs(&table, 0, sigma2, rank).unwrap();
        let w = mmse_weights(&xi, &xiv).unwrap();
        let a = sinr_general(&w, &xi, &xiv).unwrap();
        let scaled: Vec<f64> = w.iter().map(|x| scale * x).collect();
        let b = sinr_general(&scaled, &xi, &xiv).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn wiener_beats_arbitrary_weights(
        load in 0.2f64..1.2,
        sigma2 in 0.02f64..0.5,
        w0 in -2.0f64..2.0,
        w1 in -2.0f64..2.0,
        w2 in -2.0f64..2.0,
    ) {
        // the Wiener solution maximizes the SINR over the Krylov subspace,
        // so any hand-picked weight vector (PIC-style) can only do worse
        let pulse = ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeA { oversampling: 1 }).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, sigma2).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 6).unwrap();
        let (xi, xiv) = build_moment_inputs(&table, 0, sigma2, 3).unwrap();
        let wiener = sinr_wiener(&xi, &xiv).unwrap();
        if let Ok(other) = sinr_general(&[w0, w1, w2], &xi, &xiv) {
            prop_assert!(other <= wiener * (1.0 + 1e-10));
        }
    }

    #[test]
    fn moment_tables_stay_psd(load in 0.2f64..1.5, gamma in 1.0f64..2.0) {
        let pulse = ChipPulse::sinc(gamma, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(load, &pulse, 0.1).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 8).unwrap();
        prop_assert!(table.hankel_min_eigenvalue() > -1e-8);
        for ell in 1..=8 {
            prop_assert!(table.r_value(0, ell) >= 0.0);
        }
    }
}
