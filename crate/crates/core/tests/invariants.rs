//! Property tests for the structural invariants: unitarity of the beam
//! splitter transform, dephasing-invariance of photon statistics, parity at
//! the dark port, and energy conservation.

use evenfock_core::interferometer::{
    beam_splitter_transform, mean_photon_number, odd_probability_mass, partial_trace,
    photon_number_distribution, BeamSplitter, PortLabel,
};
use evenfock_core::state_prep::{apply_kerr, coherent_state, CoherentParams, KerrParams};
use evenfock_core::{FockVector, KerrConvention};
use num_complex::Complex64;
use proptest::prelude::*;

fn arb_state(cutoff: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), cutoff + 1).prop_map(|parts| {
        let amps: Vec<Complex64> = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            let mut v = vec![Complex64::new(0.0, 0.0); amps.len()];
            v[0] = Complex64::new(1.0, 0.0);
            FockVector::from_amps(&v)
        } else {
            let scaled: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
            FockVector::from_amps(&scaled)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_unitary(
        in0 in arb_state(7),
        in1 in arb_state(7),
        t in 0.05f64..0.95,
    ) {
        let bs = BeamSplitter::from_transmission(t).unwrap();
        let out = beam_splitter_transform(&in0, &in1, &bs).unwrap();
        let want = in0.norm_sq() * in1.norm_sq();
        prop_assert!((out.norm_sq() - want).abs() < 1e-10);
    }

    #[test]
    fn partial_traces_preserve_total_mean(
        in0 in arb_state(6),
        in1 in arb_state(6),
        t in 0.1f64..0.9,
    ) {
        let bs = BeamSplitter::from_transmission(t).unwrap();
        let out = beam_splitter_transform(&in0, &in1, &bs).unwrap();
        let m2 = mean_photon_number(
            &photon_number_distribution(&partial_trace(&out, PortLabel::Port2)).unwrap(),
        ).unwrap();
        let m3 = mean_photon_number(
            &photon_number_distribution(&partial_trace(&out, PortLabel::Port3)).unwrap(),
        ).unwrap();
        let in_mean = |v: &FockVector| -> f64 {
            v.photon_number_pmf().probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
        };
        prop_assert!((m2 + m3 - in_mean(&in0) - in_mean(&in1)).abs() < 1e-9);
    }

    #[test]
    fn dark_port_parity_for_random_gamma(gamma3 in 0.0f64..2.0, beta_mag in 0.3f64..2.2) {
        let cutoff = evenfock_core::numeric::default_cutoff(
            beta_mag * beta_mag, beta_mag * beta_mag);
        let kerr = KerrParams::new(gamma3, KerrConvention::NSquared);
        let in0 = apply_kerr(
            &coherent_state(CoherentParams::new(beta_mag, 0.0), cutoff).unwrap(), kerr);
        let in1 = apply_kerr(
            &coherent_state(
                CoherentParams::new(beta_mag, -std::f64::consts::FRAC_PI_2), cutoff).unwrap(),
            kerr);
        let out = beam_splitter_transform(&in0, &in1, &BeamSplitter::balanced()).unwrap();
        let d3 = photon_number_distribution(&partial_trace(&out, PortLabel::Port3)).unwrap();
        prop_assert!(odd_probability_mass(&d3).unwrap() < 1e-10);
    }

    #[test]
    fn parity_holds_for_both_conventions(gamma3 in 0.05f64..1.5) {
        for conv in [KerrConvention::NSquared, KerrConvention::NSquaredMinusN] {
            let kerr = KerrParams::new(gamma3, conv);
            let in0 = apply_kerr(
                &coherent_state(CoherentParams::new(1.5, 0.0), 22).unwrap(), kerr);
            let in1 = apply_kerr(
                &coherent_state(
                    CoherentParams::new(1.5, -std::f64::consts::FRAC_PI_2), 22).unwrap(),
                kerr);
            let out = beam_splitter_transform(&in0, &in1, &BeamSplitter::balanced()).unwrap();
            let d3 = photon_number_distribution(&partial_trace(&out, PortLabel::Port3)).unwrap();
            prop_assert!(odd_probability_mass(&d3).unwrap() < 1e-10);
        }
    }
}
