//! The matrix path: propagate two single-mode inputs through a general beam
//! splitter, reduce by partial trace and extract photon-number and phase
//! statistics.
//!
//! Conventions: the port-0 creation operator maps to t a2+ + i r a3+ and the
//! port-1 operator to t a3+ + i r a2+, with real nonnegative t, r. The
//! reflection factor i is fixed; the dark-port condition theta = pi/2 depends
//! on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Distribution, FockVector, Support, TwoModeState};
use crate::numeric::{mul_i_pow, pow_log, FactorialTable, KahanSum, EPS_NORM, TWO_PI};

/// Lossless two-port beam splitter with t^2 + r^2 = 1.
#[derive(Debug, Clone, Copy)]
pub struct BeamSplitter {
    t: f64,
    r: f64,
}

impl BeamSplitter {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(t >= 0.0 && r >= 0.0) || (t * t + r * r - 1.0).abs() >= EPS_NORM {
            return Err(Error::InvalidBeamSplitter { t, r });
        }
        Ok(Self { t, r })
    }

    /// Build from the transmission coefficient; r is derived.
    pub fn from_transmission(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidBeamSplitter {
                t,
                r: f64::NAN,
            });
        }
        let r = (1.0 - t * t).max(0.0).sqrt();
        Ok(Self { t, r })
    }

    pub fn balanced() -> Self {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        Self { t: x, r: x }
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Output-port label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PortLabel {
    Port2,
    Port3,
}

/// Combine two inputs with a shared cutoff C into the joint output state at
/// cutoff 2C (total photon number is conserved, so no extra truncation).
///
/// Unitarity: norm_sq(out) = norm_sq(in0) * norm_sq(in1) up to rounding.
pub fn beam_splitter_transform(
    in0: &FockVector,
    in1: &FockVector,
    bs: &BeamSplitter,
) -> Result<TwoModeState> {
    let c = in0.cutoff();
    if in1.cutoff() != c {
        return Err(Error::CutoffMismatch {
            left: c,
            right: in1.cutoff(),
        });
    }
    let out_cutoff = 2 * c;
    let lf = FactorialTable::new(out_cutoff.max(1))?;
    let ln_t = bs.t.ln();
    let ln_r = bs.r.ln();
    let mut out = TwoModeState::zero(out_cutoff);

    for big_m in 0..=c {
        if in0.magnitude(big_m) == 0.0 {
            continue;
        }
        let a0 = in0.amp(big_m);
        for big_n in 0..=c {
            if in1.magnitude(big_n) == 0.0 {
                continue;
            }
            let pair = a0 * in1.amp(big_n);
            // Binomial split: m photons of in0 transmit to port 2, n photons
            // of in1 transmit to port 3; the rest reflect with factor i.
            let half_mn = 0.5 * (lf.ln(big_m) + lf.ln(big_n));
            for m in 0..=big_m {
                let ket0 = lf.ln(big_m) - lf.ln(m) - lf.ln(big_m - m);
                for n in 0..=big_n {
                    let n2 = m + (big_n - n);
                    let n3 = (big_m - m) + n;
                    let texp = (m + n) as i64;
                    let rexp = (big_m - m + big_n - n) as i64;
                    let log_mag = 0.5 * (lf.ln(n2) + lf.ln(n3)) - half_mn
                        + ket0
                        + lf.ln(big_n)
                        - lf.ln(n)
                        - lf.ln(big_n - n)
                        + pow_log(ln_t, texp)
                        + pow_log(ln_r, rexp);
                    let w = mul_i_pow(pair * log_mag.exp(), rexp);
                    *out.amp_mut(n2, n3) += w;
                }
            }
        }
    }
    Ok(out)
}

/// Reduce the joint state to one port's density matrix by summing over the
/// other port's basis.
pub fn partial_trace(joint: &TwoModeState, keep: PortLabel) -> DensityMatrix {
    let dim = joint.cutoff() + 1;
    let mut rho = DensityMatrix::zero(joint.cutoff());
    for a in 0..dim {
        for b in 0..dim {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for other in 0..dim {
                let z = match keep {
                    PortLabel::Port2 => joint.amp(a, other) * joint.amp(b, other).conj(),
                    PortLabel::Port3 => joint.amp(other, a) * joint.amp(other, b).conj(),
                };
                re.add(z.re);
                im.add(z.im);
            }
            *rho.elem_mut(a, b) = Complex64::new(re.value(), im.value());
        }
    }
    rho
}

/// Photon-number pmf of a density matrix: the (real, clamped) diagonal.
pub fn photon_number_distribution(rho: &DensityMatrix) -> Result<Distribution> {
    let dim = rho.cutoff() + 1;
    let mut probs = Vec::with_capacity(dim);
    for n in 0..dim {
        let d = rho.elem(n, n).re;
        if d < -1e-12 {
            return Err(Error::NegativeProbability { index: n, value: d });
        }
        probs.push(d.max(0.0));
    }
    let tail = (1.0 - KahanSum::sum_iter(probs.iter().copied())).max(0.0);
    Ok(Distribution::from_photon_probs(probs, tail))
}

/// Mean of an integer-supported distribution.
pub fn mean_photon_number(dist: &Distribution) -> Result<f64> {
    if !dist.is_photon_number() {
        return Err(Error::NonIntegerSupport);
    }
    Ok(KahanSum::sum_iter(
        dist.probs.iter().enumerate().map(|(n, p)| n as f64 * p),
    ))
}

/// Total probability mass on odd photon numbers.
pub fn odd_probability_mass(dist: &Distribution) -> Result<f64> {
    if !dist.is_photon_number() {
        return Err(Error::NonIntegerSupport);
    }
    Ok(KahanSum::sum_iter(
        dist.probs.iter().skip(1).step_by(2).copied(),
    ))
}

/// Phase pmf <phi|rho|phi> sampled on a uniform grid over [0, 2pi),
/// normalized to sum to 1.
pub fn phase_distribution(rho: &DensityMatrix, num_points: usize) -> Result<Distribution> {
    if num_points < 2 {
        return Err(Error::InvalidSweep(
            "phase grid needs at least 2 points".into(),
        ));
    }
    let dim = rho.cutoff() + 1;
    let grid: Vec<f64> = (0..num_points)
        .map(|j| TWO_PI * j as f64 / num_points as f64)
        .collect();
    let mut probs = Vec::with_capacity(num_points);
    for &phi in &grid {
        // <phi|rho|phi> = sum_{a,b} rho[a][b] e^{i(b-a)phi}
        let mut acc = KahanSum::new();
        for a in 0..dim {
            for b in 0..dim {
                let z = rho.elem(a, b) * Complex64::from_polar(1.0, (b as f64 - a as f64) * phi);
                acc.add(z.re);
            }
        }
        probs.push(acc.value().max(0.0));
    }
    let total = KahanSum::sum_iter(probs.iter().copied());
    if total > 0.0 {
        for p in &mut probs {
            *p /= total;
        }
    }
    let tail = (1.0 - rho.trace().re).max(0.0);
    Ok(Distribution {
        support: Support::Phase(grid),
        probs,
        tail_bound: tail,
    })
}

/// Circular spread 1 - |sum_j p_j e^{i phi_j}| of a phase distribution.
pub fn circular_variance(dist: &Distribution) -> Result<f64> {
    let grid = match &dist.support {
        Support::Phase(g) => g,
        Support::PhotonNumber => return Err(Error::NonIntegerSupport),
    };
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (p, phi) in dist.probs.iter().zip(grid) {
        re.add(p * phi.cos());
        im.add(p * phi.sin());
    }
    Ok(1.0 - Complex64::new(re.value(), im.value()).norm())
}
