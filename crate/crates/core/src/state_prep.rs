//! Input-state construction: coherent states, Kerr-evolved coherent states
//! and Fock basis states.

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::numeric::{wrap_2pi, FactorialTable};

/// Which per-component nonlinear phase the Kerr cell applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KerrConvention {
    /// exp(i gamma3 n^2); the convention used by all figure reproductions.
    NSquared,
    /// exp(i gamma3 (n^2 - n)).
    NSquaredMinusN,
}

impl KerrConvention {
    /// Kerr phase exponent for a single Fock component.
    #[inline]
    pub fn phase(self, gamma3: f64, n: usize) -> f64 {
        let n = n as f64;
        match self {
            KerrConvention::NSquared => gamma3 * n * n,
            KerrConvention::NSquaredMinusN => gamma3 * (n * n - n),
        }
    }

    /// Signed integer weight n^2 (or n^2 - n) used when phases are
    /// accumulated as gamma3 * integer.
    #[inline]
    pub fn weight(self, n: i64) -> i64 {
        match self {
            KerrConvention::NSquared => n * n,
            KerrConvention::NSquaredMinusN => n * n - n,
        }
    }
}

/// Dimensionless Kerr strength plus phase convention.
#[derive(Debug, Clone, Copy)]
pub struct KerrParams {
    pub gamma3: f64,
    pub convention: KerrConvention,
}

impl KerrParams {
    pub fn new(gamma3: f64, convention: KerrConvention) -> Self {
        Self { gamma3, convention }
    }
}

/// Coherent-state parameters: amplitude magnitude and phase, so that
/// alpha = magnitude * exp(i phase).
#[derive(Debug, Clone, Copy)]
pub struct CoherentParams {
    pub magnitude: f64,
    pub phase: f64,
}

impl CoherentParams {
    pub fn new(magnitude: f64, phase: f64) -> Self {
        assert!(magnitude >= 0.0, "coherent magnitude must be nonnegative");
        Self { magnitude, phase }
    }
}

/// Coherent state truncated at `cutoff`:
/// amps[n] = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
pub fn coherent_state(params: CoherentParams, cutoff: usize) -> Result<FockVector> {
    let lf = FactorialTable::new(cutoff)?;
    let lambda = params.magnitude * params.magnitude;
    let ln_mag = params.magnitude.ln();
    let mut mags = Vec::with_capacity(cutoff + 1);
    let mut phases = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        let log_amp = if n == 0 {
            -0.5 * lambda
        } else {
            n as f64 * ln_mag - 0.5 * lf.ln(n) - 0.5 * lambda
        };
        mags.push(log_amp.exp());
        phases.push(wrap_2pi(n as f64 * params.phase));
    }
    Ok(FockVector::from_polar_parts(mags, phases))
}

/// Self-phase modulation: multiply each component by the Kerr phase.
/// Magnitudes are untouched, so the photon-number pmf is bit-identical to
/// the input's.
pub fn apply_kerr(state: &FockVector, params: KerrParams) -> FockVector {
    if params.gamma3 == 0.0 {
        return state.clone();
    }
    state.dephased(|n| params.convention.phase(params.gamma3, n))
}

/// Basis state |n> truncated at `cutoff`.
pub fn fock_state(n: usize, cutoff: usize) -> Result<FockVector> {
    if n > cutoff {
        return Err(Error::FockOutOfRange { n, cutoff });
    }
    let mut mags = vec![0.0; cutoff + 1];
    mags[n] = 1.0;
    Ok(FockVector::from_polar_parts(mags, vec![0.0; cutoff + 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::KahanSum;
    use approx::assert_abs_diff_eq;

    /// Independent Poisson pmf oracle via direct recurrence.
    fn poisson_pmf(lambda: f64, max_n: usize) -> Vec<f64> {
        let mut probs = Vec::with_capacity(max_n + 1);
        let mut p = (-lambda).exp();
        probs.push(p);
        for n in 1..=max_n {
            p *= lambda / n as f64;
            probs.push(p);
        }
        probs
    }

    #[test]
    fn zero_amplitude_is_vacuum() {
        let v = coherent_state(CoherentParams::new(0.0, 1.3), 10).unwrap();
        assert_eq!(v.magnitude(0), 1.0);
        for n in 1..=10 {
            assert_eq!(v.magnitude(n), 0.0);
        }
    }

    #[test]
    fn coherent_pmf_is_poisson() {
        let v = coherent_state(CoherentParams::new(2.0, 0.0), 30).unwrap();
        let pmf = v.photon_number_pmf();
        let oracle = poisson_pmf(4.0, 30);
        for n in 0..=30 {
            assert_abs_diff_eq!(pmf.probs[n], oracle[n], epsilon = 1e-13);
        }
        // p(4) spot check against the oracle value
        assert_abs_diff_eq!(pmf.probs[4], oracle[4], epsilon = 1e-15);
    }

    #[test]
    fn coherent_tail_matches_poisson_tail() {
        let v = coherent_state(CoherentParams::new(2.0, 0.0), 30).unwrap();
        let tail = 1.0 - v.norm_sq();
        assert!(tail.abs() < 1e-12, "tail {tail:e}");
        let analytic = crate::numeric::poisson_tail(4.0, 30);
        assert!((tail - analytic).abs() < 1e-13);
    }

    #[test]
    fn pi_phase_alternates_signs() {
        let plain = coherent_state(CoherentParams::new(2.0, 0.0), 12).unwrap();
        let flipped = coherent_state(CoherentParams::new(2.0, std::f64::consts::PI), 12).unwrap();
        for n in 0..=12 {
            let want = plain.amp(n) * if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((flipped.amp(n) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn kerr_zero_strength_is_identity() {
        let v = coherent_state(CoherentParams::new(1.5, 0.4), 15).unwrap();
        let w = apply_kerr(&v, KerrParams::new(0.0, KerrConvention::NSquared));
        for n in 0..=15 {
            assert_eq!(v.magnitude(n), w.magnitude(n));
            assert_eq!(v.phase(n), w.phase(n));
        }
    }

    #[test]
    fn kerr_preserves_magnitudes_bitwise() {
        let v = coherent_state(CoherentParams::new(2.0, 0.3), 25).unwrap();
        for conv in [KerrConvention::NSquared, KerrConvention::NSquaredMinusN] {
            for gamma3 in [0.1, 1.0, std::f64::consts::FRAC_PI_4] {
                let w = apply_kerr(&v, KerrParams::new(gamma3, conv));
                for n in 0..=25 {
                    assert_eq!(v.magnitude(n), w.magnitude(n), "n={n}");
                }
                let a = v.photon_number_pmf();
                let b = w.photon_number_pmf();
                assert_eq!(a.probs, b.probs);
            }
        }
    }

    #[test]
    fn kerr_on_vacuum_is_trivial() {
        let v = fock_state(0, 6).unwrap();
        let w = apply_kerr(&v, KerrParams::new(0.7, KerrConvention::NSquared));
        assert!((w.amp(0) - v.amp(0)).norm() < 1e-15);
    }

    #[test]
    fn conventions_differ_by_linear_phase() {
        let v = coherent_state(CoherentParams::new(1.2, 0.0), 14).unwrap();
        let gamma3 = 0.23;
        let a = apply_kerr(&v, KerrParams::new(gamma3, KerrConvention::NSquared));
        let b = apply_kerr(&v, KerrParams::new(gamma3, KerrConvention::NSquaredMinusN));
        for n in 0..=14 {
            let rotated = a.amp(n) * num_complex::Complex64::from_polar(1.0, -gamma3 * n as f64);
            assert!((b.amp(n) - rotated).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn fock_state_basics() {
        let v = fock_state(1, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(v.magnitude(n), if n == 1 { 1.0 } else { 0.0 });
        }
        for k in 0..=6 {
            assert_eq!(fock_state(k, 6).unwrap().norm_sq(), 1.0);
        }
        assert!(matches!(
            fock_state(5, 4),
            Err(Error::FockOutOfRange { .. })
        ));
    }

    #[test]
    fn poisson_oracle_normalizes() {
        let probs = poisson_pmf(4.0, 60);
        let total = KahanSum::sum_iter(probs.into_iter());
        assert!((total - 1.0).abs() < 1e-14);
    }
}
