//! The formula path: constrained five-fold sums for the output photon-number
//! probabilities, the symmetric dark-port special case, and a term-level
//! verifier of the pair-wise cancellation symmetry.
//!
//! Free summation indices are the input-side photon numbers N (alpha, ket),
//! M (beta, ket), K (beta, bra) and the output-side splits m <= M, k <= K.
//! The remaining indices are fixed by the constraints: L = M + N - K (alpha,
//! bra) and, per probability,
//!   port 2, x photons: n = x - m, l = x - k, j = M + N - x;
//!   port 3, y photons: n = M + N - m - y, j = M + N - y, l = j - k.
//! A term whose derived indices fall outside their factorial domains is
//! identically zero and skipped. The bra-side index L is truncated at the
//! same cutoff as the explicit sums, which makes the sum equal, term for
//! term, to the truncated matrix path.
//!
//! Each term is evaluated as exp(sum of log-factorials) with the phase split
//! into a continuous part (Kerr + input phases) and an exact power of i; the
//! denominator log-factorials are grouped so that the bra-side group is
//! symmetric under the exchange (K,k) <-> (L,l). Terms are accumulated with
//! compensated summation in fixed lexicographic order; parallelism is over
//! the outermost index with partials combined in index order, so results do
//! not depend on the worker count.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interferometer::BeamSplitter;
use crate::numeric::{mul_i_pow, pow_log, wrap_2pi, FactorialTable, KahanSum};
use crate::state_prep::KerrConvention;

/// Parameters of the five-fold probability sums.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormConfig {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma3: f64,
    pub bs: BeamSplitter,
    /// Upper limit substituted for each infinite sum (including the derived
    /// bra-side index L).
    pub cutoff: usize,
    pub kerr_convention: KerrConvention,
    /// Re-evaluate at cutoff + 2 and error out if the value moves by more
    /// than 1e-9. Off by default; doubles the cost.
    pub convergence_check: bool,
}

impl ClosedFormConfig {
    /// Equal-magnitude input arrangement: beta real at port 0, alpha =
    /// beta_mag * e^{-i theta} at port 1.
    pub fn symmetric_inputs(
        beta_mag: f64,
        theta: f64,
        gamma3: f64,
        bs: BeamSplitter,
        cutoff: usize,
    ) -> Self {
        Self {
            alpha: Complex64::from_polar(beta_mag, -theta),
            beta: Complex64::new(beta_mag, 0.0),
            gamma3,
            bs,
            cutoff,
            kerr_convention: KerrConvention::NSquared,
            convergence_check: false,
        }
    }
}

#[derive(Clone, Copy)]
enum Port {
    Two,
    Three,
}

struct SumCtx {
    lf: FactorialTable,
    cutoff: usize,
    ln_t: f64,
    ln_r: f64,
    ln_a: f64,
    ln_b: f64,
    arg_a: f64,
    arg_b: f64,
    gamma3: f64,
    conv: KerrConvention,
    log_prefactor: f64,
}

impl SumCtx {
    fn new(cfg: &ClosedFormConfig) -> Result<Self> {
        let table_max = (2 * cfg.cutoff).max(1) + 2;
        Ok(Self {
            lf: FactorialTable::new(table_max)?,
            cutoff: cfg.cutoff,
            ln_t: cfg.bs.t().ln(),
            ln_r: cfg.bs.r().ln(),
            ln_a: cfg.alpha.norm().ln(),
            ln_b: cfg.beta.norm().ln(),
            arg_a: cfg.alpha.arg(),
            arg_b: cfg.beta.arg(),
            gamma3: cfg.gamma3,
            conv: cfg.kerr_convention,
            log_prefactor: -(cfg.alpha.norm_sqr() + cfg.beta.norm_sqr()),
        })
    }

    /// Sum all terms with the given ket-side alpha index N.
    fn partition(&self, port: Port, count: usize, big_n: usize) -> Complex64 {
        let lf = &self.lf;
        let c = self.cutoff;
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for big_m in 0..=c {
            let j = match port {
                Port::Two | Port::Three => {
                    let Some(j) = (big_m + big_n).checked_sub(count) else {
                        continue;
                    };
                    j
                }
            };
            let num = lf.ln(j) + lf.ln(count);
            // m range such that the derived n lies in [0, N]
            let (m_lo, m_hi) = match port {
                Port::Two => (count.saturating_sub(big_n), big_m.min(count)),
                Port::Three => (big_m.saturating_sub(count), big_m.min(big_m + big_n - count)),
            };
            if m_lo > m_hi {
                continue;
            }
            for big_k in (big_m + big_n).saturating_sub(c)..=(big_m + big_n).min(c) {
                let big_l = big_m + big_n - big_k;
                let phase = wrap_2pi(
                    self.gamma3
                        * (self.conv.weight(big_m as i64) + self.conv.weight(big_n as i64)
                            - self.conv.weight(big_k as i64)
                            - self.conv.weight(big_l as i64)) as f64
                        + self.arg_b * (big_m as f64 - big_k as f64)
                        + self.arg_a * (big_n as f64 - big_l as f64),
                );
                let (sin_p, cos_p) = phase.sin_cos();
                let base = pow_log(self.ln_b, (big_m + big_k) as i64)
                    + pow_log(self.ln_a, (big_n + big_l) as i64)
                    + num;
                // k range such that the derived l lies in [0, L]
                let (k_lo, k_hi, j_or_x) = match port {
                    Port::Two => (count.saturating_sub(big_l), big_k.min(count), count),
                    Port::Three => (j.saturating_sub(big_l), big_k.min(j), j),
                };
                if k_lo > k_hi {
                    continue;
                }
                for m in m_lo..=m_hi {
                    let n = match port {
                        Port::Two => count - m,
                        Port::Three => big_m + big_n - m - count,
                    };
                    let ket = (lf.ln(m) + lf.ln(big_m - m)) + (lf.ln(n) + lf.ln(big_n - n));
                    let r_ket = (big_m - m + n) as i64;
                    for k in k_lo..=k_hi {
                        let l = j_or_x - k;
                        let bra =
                            (lf.ln(k) + lf.ln(big_k - k)) + (lf.ln(l) + lf.ln(big_l - l));
                        let r_bra = (big_k - k + l) as i64;
                        let texp =
                            (big_n - n + m) as i64 + k as i64 + (big_l - l) as i64;
                        let log_mag = base - ket - bra
                            + pow_log(self.ln_t, texp)
                            + pow_log(self.ln_r, r_ket + r_bra);
                        let mag = log_mag.exp();
                        let z = mul_i_pow(
                            Complex64::new(mag * cos_p, mag * sin_p),
                            r_ket - r_bra,
                        );
                        re.add(z.re);
                        im.add(z.im);
                    }
                }
            }
        }
        Complex64::new(re.value(), im.value())
    }

    fn evaluate(&self, port: Port, count: usize) -> Complex64 {
        let partials: Vec<Complex64> = (0..=self.cutoff)
            .into_par_iter()
            .map(|big_n| self.partition(port, count, big_n))
            .collect();
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for p in partials {
            re.add(p.re);
            im.add(p.im);
        }
        let scale = self.log_prefactor.exp();
        Complex64::new(scale * re.value(), scale * im.value())
    }
}

fn probability(port: Port, count: usize, cfg: &ClosedFormConfig) -> Result<f64> {
    let z = SumCtx::new(cfg)?.evaluate(port, count);
    debug_assert!(z.im.abs() < 1e-10, "imaginary residue {:e}", z.im);
    let value = z.re;
    if cfg.convergence_check {
        let mut wider = *cfg;
        wider.cutoff = cfg.cutoff + 2;
        wider.convergence_check = false;
        let v2 = SumCtx::new(&wider)?.evaluate(port, count).re;
        let delta = (v2 - value).abs();
        if delta > 1e-9 {
            return Err(Error::NotConverged { delta });
        }
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Probability of measuring x photons at port 2.
pub fn p2(x: usize, cfg: &ClosedFormConfig) -> Result<f64> {
    probability(Port::Two, x, cfg)
}

/// Probability of measuring y photons at port 3.
pub fn p3(y: usize, cfg: &ClosedFormConfig) -> Result<f64> {
    probability(Port::Three, y, cfg)
}

// ---------------------------------------------------------------------------
// Symmetric dark-port case: alpha = beta e^{-i pi/2}, t = r = 1/sqrt(2).
// ---------------------------------------------------------------------------

/// Free indices of one term of the symmetric-case sum. The derived indices
/// (L, n, l, j) follow from the constraints for the given y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumIndexTuple {
    /// N: alpha-side input photon number (ket).
    pub n_in: usize,
    /// M: beta-side input photon number (ket).
    pub m_in: usize,
    /// K: beta-side input photon number (bra).
    pub k_in: usize,
    /// m: beta-side output split, 0 <= m <= M.
    pub m_out: usize,
    /// k: bra-side output split, 0 <= k <= K.
    pub k_out: usize,
}

/// Derived indices of a symmetric-case term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedIndices {
    /// L = M + N - K: alpha-side input photon number (bra).
    pub l_in: usize,
    /// n = M + N - m - y.
    pub n_out: usize,
    /// l = j - k.
    pub l_out: usize,
    /// j = M + N - y: ket-side port-2 photon count.
    pub j: usize,
}

impl SumIndexTuple {
    pub fn new(n_in: usize, m_in: usize, k_in: usize, m_out: usize, k_out: usize) -> Self {
        Self {
            n_in,
            m_in,
            k_in,
            m_out,
            k_out,
        }
    }

    /// Resolve the constrained indices for a port-3 count y. Returns None
    /// when the constraints put an index outside its factorial domain, in
    /// which case the term is identically zero.
    pub fn resolve(&self, y: usize) -> Option<DerivedIndices> {
        let total = self.m_in + self.n_in;
        let l_in = total.checked_sub(self.k_in)?;
        let j = total.checked_sub(y)?;
        let n_out = total.checked_sub(self.m_out + y)?;
        if n_out > self.n_in {
            return None;
        }
        let l_out = j.checked_sub(self.k_out)?;
        if l_out > l_in {
            return None;
        }
        Some(DerivedIndices {
            l_in,
            n_out,
            l_out,
            j,
        })
    }

    fn structurally_valid(&self) -> bool {
        self.m_out <= self.m_in && self.k_out <= self.k_in
    }

    /// Partner tuple under the simultaneous exchange K <-> L, k <-> l.
    pub fn exchanged(&self, y: usize) -> Option<Self> {
        let d = self.resolve(y)?;
        Some(Self {
            n_in: self.n_in,
            m_in: self.m_in,
            k_in: d.l_in,
            m_out: self.m_out,
            k_out: d.l_out,
        })
    }

    /// Partner tuple under the other exchange, M <-> N with m <-> n.
    pub fn mn_exchanged(&self, y: usize) -> Option<Self> {
        let d = self.resolve(y)?;
        Some(Self {
            n_in: self.m_in,
            m_in: self.n_in,
            k_in: self.k_in,
            m_out: d.n_out,
            k_out: self.k_out,
        })
    }
}

/// One term of the symmetric-case sum, prefactor e^{-2 beta^2} included.
/// Zero when the constraints are unsatisfiable.
pub fn symmetric_term(
    idx: &SumIndexTuple,
    y: usize,
    beta_mag: f64,
    gamma3: f64,
    convention: KerrConvention,
    lf: &FactorialTable,
) -> Complex64 {
    let Some(d) = idx.resolve(y) else {
        return Complex64::new(0.0, 0.0);
    };
    let (big_n, big_m, big_k) = (idx.n_in as i64, idx.m_in as i64, idx.k_in as i64);
    let big_l = d.l_in as i64;
    // |beta|/sqrt(2) raised to M+N+K+L; the exponent is formed as
    // (M+K)+(N+L) so the float product is invariant under K <-> L.
    let ln_bs = (beta_mag * std::f64::consts::FRAC_1_SQRT_2).ln();
    let etot = (idx.m_in + idx.k_in) as i64 + (idx.n_in + d.l_in) as i64;
    let phase = wrap_2pi(
        gamma3
            * (convention.weight(big_m) + convention.weight(big_n)
                - convention.weight(big_k)
                - convention.weight(big_l)) as f64,
    );
    let ket = (lf.ln(idx.m_out) + lf.ln(idx.m_in - idx.m_out))
        + (lf.ln(d.n_out) + lf.ln(idx.n_in - d.n_out));
    let bra = (lf.ln(idx.k_out) + lf.ln(idx.k_in - idx.k_out))
        + (lf.ln(d.l_out) + lf.ln(d.l_in - d.l_out));
    let log_mag = pow_log(ln_bs, etot) + lf.ln(d.j) + lf.ln(y) - ket - bra
        - 2.0 * beta_mag * beta_mag;
    // i-power: (i)^{L + M - m + n} (-i)^{N + K - k + l}
    let p = (big_l + big_m - idx.m_out as i64 + d.n_out as i64)
        - (big_n + big_k - idx.k_out as i64 + d.l_out as i64);
    let mag = log_mag.exp();
    let (sin_p, cos_p) = phase.sin_cos();
    mul_i_pow(Complex64::new(mag * cos_p, mag * sin_p), p)
}

/// Dark-port probability via the symmetric-case sum. Equals the general
/// port-3 sum at beta real, theta = pi/2, t = r = 1/sqrt(2).
///
/// Terms are enumerated as exchange pairs (K,k) <-> (L,l); the two members
/// of a pair share a bit-identical magnitude and continuous phase and differ
/// only by an exact power of i, so odd-y pairs cancel exactly and even-y
/// pairs double.
pub fn p3_symmetric(y: usize, beta_mag: f64, gamma3: f64, cutoff: usize) -> Result<f64> {
    let lf = FactorialTable::new((2 * cutoff).max(1) + 2)?;
    let conv = KerrConvention::NSquared;
    let partials: Vec<f64> = (0..=cutoff)
        .into_par_iter()
        .map(|big_n| {
            let mut acc = KahanSum::new();
            for big_m in 0..=cutoff {
                let total = big_m + big_n;
                if total < y {
                    continue;
                }
                let j = total - y;
                // enumerate K <= L only; the K > L half is folded in via the
                // exchange symmetry
                for big_k in total.saturating_sub(cutoff)..=total / 2 {
                    let big_l = total - big_k;
                    if big_l > cutoff {
                        continue;
                    }
                    // derived n = M + N - m - y must lie in [0, N]
                    for m_out in big_m.saturating_sub(y)..=big_m.min(j) {
                        if total - m_out - y > big_n {
                            continue;
                        }
                        let k_lo = j.saturating_sub(big_l);
                        let k_hi = big_k.min(j);
                        for k_out in k_lo..=k_hi {
                            let l_out = j - k_out;
                            let idx = SumIndexTuple::new(big_n, big_m, big_k, m_out, k_out);
                            if big_k == big_l {
                                // pairing is now within the k index
                                use std::cmp::Ordering;
                                match k_out.cmp(&l_out) {
                                    Ordering::Less => {
                                        let t = symmetric_term(
                                            &idx, y, beta_mag, gamma3, conv, &lf,
                                        );
                                        let pair = pair_sum(&idx, y, t);
                                        acc.add(pair);
                                    }
                                    Ordering::Equal => {
                                        // self-paired: only possible for even y
                                        let t = symmetric_term(
                                            &idx, y, beta_mag, gamma3, conv, &lf,
                                        );
                                        acc.add(t.re);
                                    }
                                    Ordering::Greater => {}
                                }
                            } else {
                                let t =
                                    symmetric_term(&idx, y, beta_mag, gamma3, conv, &lf);
                                acc.add(pair_sum(&idx, y, t));
                            }
                        }
                    }
                }
            }
            acc.value()
        })
        .collect();
    let mut total = KahanSum::new();
    for p in partials {
        total.add(p);
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// Real contribution of a term together with its exchange partner. The
/// partner equals term * (-1)^y exactly, so this is 0 for odd y and
/// 2 * Re(term) for even y.
fn pair_sum(_idx: &SumIndexTuple, y: usize, term: Complex64) -> f64 {
    if y % 2 == 1 {
        0.0
    } else {
        2.0 * term.re
    }
}

/// Outcome of checking one exchange pair.
#[derive(Debug, Clone, Copy)]
pub struct PairVerdict {
    pub term: Complex64,
    pub exchanged: Complex64,
    pub pair_sum: Complex64,
    pub y: usize,
}

impl PairVerdict {
    /// Largest magnitude among the two terms; the scale for relative checks.
    pub fn scale(&self) -> f64 {
        self.term.norm().max(self.exchanged.norm())
    }

    /// True when the pair behaves as the exchange symmetry dictates:
    /// cancellation for odd y, doubling for even y.
    pub fn holds(&self, rel_tol: f64) -> bool {
        let scale = self.scale();
        if scale == 0.0 {
            return true;
        }
        if self.y % 2 == 1 {
            self.pair_sum.norm() <= rel_tol * scale
        } else {
            (self.pair_sum - self.term * 2.0).norm() <= rel_tol * scale
        }
    }
}

/// Evaluate a term of the symmetric-case sum and its partner under the
/// simultaneous exchange K <-> L, k <-> l, and report both values.
pub fn cancellation_pair_check(
    idx: &SumIndexTuple,
    y: usize,
    beta_mag: f64,
    gamma3: f64,
) -> Result<PairVerdict> {
    if !idx.structurally_valid() {
        return Err(Error::InvalidIndexTuple(format!(
            "output split exceeds its input index: {idx:?}"
        )));
    }
    let max_n = 2 * (idx.m_in + idx.n_in).max(idx.k_in).max(y).max(1) + 2;
    let lf = FactorialTable::new(max_n)?;
    let conv = KerrConvention::NSquared;
    let term = symmetric_term(idx, y, beta_mag, gamma3, conv, &lf);
    let exchanged = match idx.exchanged(y) {
        Some(partner) => symmetric_term(&partner, y, beta_mag, gamma3, conv, &lf),
        None => Complex64::new(0.0, 0.0),
    };
    Ok(PairVerdict {
        term,
        exchanged,
        pair_sum: term + exchanged,
        y,
    })
}

/// Rejection-sample `count` index tuples that have nonzero terms for the
/// given y.
pub fn sample_index_tuples<R: Rng>(
    y: usize,
    cutoff: usize,
    count: usize,
    rng: &mut R,
) -> Vec<SumIndexTuple> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n_in = rng.gen_range(0..=cutoff);
        let m_in = rng.gen_range(0..=cutoff);
        let k_in = rng.gen_range(0..=(m_in + n_in).min(2 * cutoff));
        let m_out = rng.gen_range(0..=m_in);
        let k_out = rng.gen_range(0..=k_in);
        let idx = SumIndexTuple::new(n_in, m_in, k_in, m_out, k_out);
        if idx.resolve(y).is_some() {
            out.push(idx);
        }
    }
    out
}
