//! Truncated Fock-space containers: single-mode state vectors, two-mode
//! amplitude tensors, density matrices and probability distributions.
//!
//! Single-mode pure states are stored in polar form (magnitude + phase per
//! photon number). Pure dephasing operations then touch only the phases, so
//! photon-number statistics are preserved bit-for-bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{wrap_2pi, KahanSum};

pub type ComplexAmplitude = Complex64;

/// Truncated single-mode pure state: one amplitude per photon number 0..=C.
#[derive(Debug, Clone)]
pub struct FockVector {
    mags: Vec<f64>,
    phases: Vec<f64>,
}

impl FockVector {
    pub fn from_polar_parts(mags: Vec<f64>, phases: Vec<f64>) -> Self {
        assert_eq!(mags.len(), phases.len());
        assert!(!mags.is_empty());
        Self { mags, phases }
    }

    pub fn from_amps(amps: &[Complex64]) -> Self {
        let mags = amps.iter().map(|a| a.norm()).collect();
        let phases = amps.iter().map(|a| a.arg()).collect();
        Self { mags, phases }
    }

    pub fn zero(cutoff: usize) -> Self {
        Self {
            mags: vec![0.0; cutoff + 1],
            phases: vec![0.0; cutoff + 1],
        }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.mags.len() - 1
    }

    #[inline]
    pub fn magnitude(&self, n: usize) -> f64 {
        self.mags[n]
    }

    #[inline]
    pub fn phase(&self, n: usize) -> f64 {
        self.phases[n]
    }

    #[inline]
    pub fn amp(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.mags[n], self.phases[n])
    }

    /// Add `delta(n)` to the phase of every component, leaving magnitudes
    /// untouched.
    pub fn dephased(&self, delta: impl Fn(usize) -> f64) -> Self {
        let phases = self
            .phases
            .iter()
            .enumerate()
            .map(|(n, &p)| wrap_2pi(p + delta(n)))
            .collect();
        Self {
            mags: self.mags.clone(),
            phases,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        KahanSum::sum_iter(self.mags.iter().map(|m| m * m))
    }

    /// Photon-number pmf |amps[n]|^2 with the normalization deficit as the
    /// tail bound.
    pub fn photon_number_pmf(&self) -> Distribution {
        let probs: Vec<f64> = self.mags.iter().map(|m| m * m).collect();
        let tail = (1.0 - KahanSum::sum_iter(probs.iter().copied())).max(0.0);
        Distribution {
            support: Support::PhotonNumber,
            probs,
            tail_bound: tail,
        }
    }
}

/// Joint amplitude tensor over the two output (or input) ports, indexed
/// (n2, n3) row-major.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    dim: usize,
    amps: Vec<Complex64>,
}

impl TwoModeState {
    pub fn zero(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        Self {
            dim,
            amps: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    #[inline]
    pub fn amp(&self, n2: usize, n3: usize) -> Complex64 {
        self.amps[n2 * self.dim + n3]
    }

    #[inline]
    pub fn amp_mut(&mut self, n2: usize, n3: usize) -> &mut Complex64 {
        &mut self.amps[n2 * self.dim + n3]
    }

    pub fn norm_sq(&self) -> f64 {
        KahanSum::sum_iter(self.amps.iter().map(|a| a.norm_sqr()))
    }

    /// Outer product of two single-mode states (no interference).
    pub fn product(left: &FockVector, right: &FockVector) -> Result<Self> {
        if left.cutoff() != right.cutoff() {
            return Err(Error::CutoffMismatch {
                left: left.cutoff(),
                right: right.cutoff(),
            });
        }
        let mut out = Self::zero(left.cutoff());
        for a in 0..=left.cutoff() {
            for b in 0..=right.cutoff() {
                *out.amp_mut(a, b) = left.amp(a) * right.amp(b);
            }
        }
        Ok(out)
    }
}

/// Truncated single-mode density operator, indexed (row, column).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        Self {
            dim,
            elems: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Projector |psi><psi| of a pure state.
    pub fn pure(state: &FockVector) -> Self {
        let dim = state.cutoff() + 1;
        let mut elems = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                elems.push(state.amp(a) * state.amp(b).conj());
            }
        }
        Self { dim, elems }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    #[inline]
    pub fn elem(&self, row: usize, col: usize) -> Complex64 {
        self.elems[row * self.dim + col]
    }

    #[inline]
    pub fn elem_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        &mut self.elems[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n in 0..self.dim {
            let d = self.elem(n, n);
            re.add(d.re);
            im.add(d.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Check the density-matrix invariants: Hermiticity, near-real
    /// nonnegative diagonal and trace within the declared truncation tail.
    pub fn validate(&self, tail: f64) -> Result<()> {
        for a in 0..self.dim {
            for b in a..self.dim {
                let diff = self.elem(a, b) - self.elem(b, a).conj();
                if diff.norm() > 1e-12 {
                    return Err(Error::InvalidIndexTuple(format!(
                        "non-Hermitian element ({a},{b}): residual {:e}",
                        diff.norm()
                    )));
                }
            }
        }
        for n in 0..self.dim {
            let d = self.elem(n, n);
            if d.re < -1e-12 {
                return Err(Error::NegativeProbability {
                    index: n,
                    value: d.re,
                });
            }
        }
        let tr = self.trace();
        if tr.re < 1.0 - tail - 1e-9 || tr.re > 1.0 + 1e-9 {
            return Err(Error::InvalidSweep(format!(
                "trace {} outside [1-{tail:e}, 1]",
                tr.re
            )));
        }
        Ok(())
    }

    /// Largest eigenvalue via power iteration; used for rank checks.
    pub fn largest_eigenvalue(&self) -> f64 {
        let mut v = vec![Complex64::new(1.0, 0.0); self.dim];
        let mut lambda = 0.0;
        for _ in 0..200 {
            let mut w = vec![Complex64::new(0.0, 0.0); self.dim];
            for a in 0..self.dim {
                for b in 0..self.dim {
                    w[a] += self.elem(a, b) * v[b];
                }
            }
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            for x in &mut w {
                *x /= norm;
            }
            lambda = norm;
            v = w;
        }
        lambda
    }
}

/// Support of a [`Distribution`]: photon numbers 0..len or a phase grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    PhotonNumber,
    Phase(Vec<f64>),
}

/// Probability mass function with an explicit truncation-tail estimate.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub support: Support,
    pub probs: Vec<f64>,
    pub tail_bound: f64,
}

impl Distribution {
    pub fn from_photon_probs(probs: Vec<f64>, tail_bound: f64) -> Self {
        Self {
            support: Support::PhotonNumber,
            probs,
            tail_bound,
        }
    }

    pub fn sum(&self) -> f64 {
        KahanSum::sum_iter(self.probs.iter().copied())
    }

    pub fn is_photon_number(&self) -> bool {
        self.support == Support::PhotonNumber
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_norm_is_one() {
        let mut mags = vec![0.0; 11];
        mags[0] = 1.0;
        let v = FockVector::from_polar_parts(mags, vec![0.0; 11]);
        assert_eq!(v.norm_sq(), 1.0);
    }

    #[test]
    fn zero_vector_norm_is_zero() {
        assert_eq!(FockVector::zero(8).norm_sq(), 0.0);
    }

    #[test]
    fn from_amps_round_trips() {
        let amps = [
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
            Complex64::new(-0.3, 0.4),
        ];
        let v = FockVector::from_amps(&amps);
        for (n, a) in amps.iter().enumerate() {
            assert!((v.amp(n) - a).norm() < 1e-15);
        }
    }

    #[test]
    fn product_state_norm_factorizes() {
        let a = FockVector::from_amps(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let b = FockVector::from_amps(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let joint = TwoModeState::product(&a, &b).unwrap();
        assert!((joint.norm_sq() - a.norm_sq() * b.norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn product_rejects_mismatched_cutoffs() {
        let a = FockVector::zero(3);
        let b = FockVector::zero(4);
        assert!(matches!(
            TwoModeState::product(&a, &b),
            Err(Error::CutoffMismatch { .. })
        ));
    }

    #[test]
    fn pure_projector_is_valid_density_matrix() {
        let v = FockVector::from_amps(&[
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let rho = DensityMatrix::pure(&v);
        rho.validate(0.0).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(rho.largest_eigenvalue() > 1.0 - 1e-9);
    }
}
