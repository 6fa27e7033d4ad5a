//! Parameter sweeps, fringe visibility, distribution reports, verification
//! suites and the figure-reproduction file set.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closed_form::{self, ClosedFormConfig};
use crate::error::{Error, Result};
use crate::fock::{Distribution, FockVector};
use crate::interferometer::{
    beam_splitter_transform, mean_photon_number, odd_probability_mass, partial_trace,
    photon_number_distribution, BeamSplitter, PortLabel,
};
use crate::numeric::{default_cutoff, KahanSum, TWO_PI};
use crate::state_prep::{apply_kerr, coherent_state, CoherentParams, KerrConvention, KerrParams};

/// Fixed physical parameters shared by sweeps and reports. `cutoff = 0`
/// selects the automatic tail policy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BaseParams {
    pub beta_mag: f64,
    pub theta: f64,
    pub gamma3: f64,
    pub transmission: f64,
    pub cutoff: usize,
    pub kerr_convention: KerrConvention,
}

impl BaseParams {
    pub fn new(beta_mag: f64, theta: f64, gamma3: f64) -> Self {
        Self {
            beta_mag,
            theta,
            gamma3,
            transmission: std::f64::consts::FRAC_1_SQRT_2,
            cutoff: 0,
            kerr_convention: KerrConvention::NSquared,
        }
    }

    pub fn beam_splitter(&self) -> Result<BeamSplitter> {
        BeamSplitter::from_transmission(self.transmission)
    }

    pub fn effective_cutoff(&self) -> usize {
        if self.cutoff > 0 {
            self.cutoff
        } else {
            let lambda = self.beta_mag * self.beta_mag;
            default_cutoff(lambda, lambda)
        }
    }

    /// Kerr-evolved inputs: beta real at port 0, beta e^{-i theta} at port 1.
    pub fn input_states(&self) -> Result<(FockVector, FockVector)> {
        let c = self.effective_cutoff();
        let kerr = KerrParams::new(self.gamma3, self.kerr_convention);
        let in0 = apply_kerr(&coherent_state(CoherentParams::new(self.beta_mag, 0.0), c)?, kerr);
        let in1 = apply_kerr(
            &coherent_state(CoherentParams::new(self.beta_mag, -self.theta), c)?,
            kerr,
        );
        Ok((in0, in1))
    }

    pub fn closed_form_config(&self) -> Result<ClosedFormConfig> {
        let mut cfg = ClosedFormConfig::symmetric_inputs(
            self.beta_mag,
            self.theta,
            self.gamma3,
            self.beam_splitter()?,
            self.effective_cutoff(),
        );
        cfg.kerr_convention = self.kerr_convention;
        Ok(cfg)
    }
}

/// Which computational path evaluates an observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathChoice {
    Matrix,
    ClosedForm,
    Both,
}

/// Swept variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Theta,
    Gamma3,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: BaseParams,
    pub path: PathChoice,
}

/// One sweep sample. `path_disagreement` is populated for BOTH-path runs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub mean_n2: f64,
    pub mean_n3: f64,
    pub odd_mass_3: f64,
    pub total_mean: f64,
    pub tail_bound: f64,
    pub path_disagreement: Option<f64>,
}

impl SweepRow {
    /// Conservation residual |mean_n2 + mean_n3 - (|alpha|^2 + |beta|^2)|.
    pub fn conservation_residual(&self, beta_mag: f64) -> f64 {
        (self.total_mean - 2.0 * beta_mag * beta_mag).abs()
    }
}

/// Threshold above which a BOTH-path row counts as a verification failure.
pub const PATH_DISAGREEMENT_TOL: f64 = 1e-6;

/// Conservation tolerance for emitted sweep rows.
pub const CONSERVATION_TOL: f64 = 1e-8;

fn matrix_port_stats(base: &BaseParams) -> Result<(f64, f64, f64, f64)> {
    let (in0, in1) = base.input_states()?;
    let joint = beam_splitter_transform(&in0, &in1, &base.beam_splitter()?)?;
    let d2 = photon_number_distribution(&partial_trace(&joint, PortLabel::Port2))?;
    let d3 = photon_number_distribution(&partial_trace(&joint, PortLabel::Port3))?;
    let tail = (1.0 - joint.norm_sq()).max(0.0);
    Ok((
        mean_photon_number(&d2)?,
        mean_photon_number(&d3)?,
        odd_probability_mass(&d3)?,
        tail,
    ))
}

fn closed_form_port_stats(base: &BaseParams) -> Result<(f64, f64, f64, f64)> {
    let cfg = base.closed_form_config()?;
    let max_n = 2 * cfg.cutoff;
    let mut mean2 = KahanSum::new();
    let mut mean3 = KahanSum::new();
    let mut odd3 = KahanSum::new();
    let mut total3 = KahanSum::new();
    let mut total2 = KahanSum::new();
    for n in 0..=max_n {
        let p2 = closed_form::p2(n, &cfg)?;
        let p3 = closed_form::p3(n, &cfg)?;
        mean2.add(n as f64 * p2);
        mean3.add(n as f64 * p3);
        total2.add(p2);
        total3.add(p3);
        if n % 2 == 1 {
            odd3.add(p3);
        }
    }
    let tail = (1.0 - 0.5 * (total2.value() + total3.value())).max(0.0);
    Ok((mean2.value(), mean3.value(), odd3.value(), tail))
}

fn sweep_row(base: &BaseParams, value: f64, path: PathChoice) -> Result<SweepRow> {
    let (m2, m3, odd3, tail, disagreement) = match path {
        PathChoice::Matrix => {
            let (m2, m3, odd3, tail) = matrix_port_stats(base)?;
            (m2, m3, odd3, tail, None)
        }
        PathChoice::ClosedForm => {
            let (m2, m3, odd3, tail) = closed_form_port_stats(base)?;
            (m2, m3, odd3, tail, None)
        }
        PathChoice::Both => {
            let (m2, m3, odd3, tail) = matrix_port_stats(base)?;
            let (c2, c3, codd3, _) = closed_form_port_stats(base)?;
            let disagreement = (m2 - c2)
                .abs()
                .max((m3 - c3).abs())
                .max((odd3 - codd3).abs());
            (m2, m3, odd3, tail, Some(disagreement))
        }
    };
    Ok(SweepRow {
        value,
        mean_n2: m2,
        mean_n3: m3,
        odd_mass_3: odd3,
        total_mean: m2 + m3,
        tail_bound: tail,
        path_disagreement: disagreement,
    })
}

/// Evaluate the sweep. Rows come back in ascending variable order on the
/// inclusive grid start..=stop with `steps` samples; each row is computed
/// independently.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.steps < 2 {
        return Err(Error::InvalidSweep("steps must be at least 2".into()));
    }
    if !(spec.start < spec.stop) {
        return Err(Error::InvalidSweep("start must be below stop".into()));
    }
    let values: Vec<f64> = (0..spec.steps)
        .map(|i| spec.start + (spec.stop - spec.start) * i as f64 / (spec.steps - 1) as f64)
        .collect();
    values
        .into_iter()
        .map(|v| {
            let mut base = spec.base;
            match spec.variable {
                SweepVariable::Theta => base.theta = v,
                SweepVariable::Gamma3 => base.gamma3 = v,
            }
            sweep_row(&base, v, spec.path)
        })
        .collect()
}

/// Fringe visibility (max - min)/(max + min) of the port-3 mean photon
/// number over a full period of theta, sampled on `resolution` points
/// (matrix path). The grid is stop-exclusive so multiples of pi/2 are hit
/// exactly when 4 | resolution.
pub fn visibility(gamma3: f64, base: &BaseParams, resolution: usize) -> Result<f64> {
    if resolution < 32 {
        return Err(Error::InvalidSweep(
            "visibility needs at least 32 theta points".into(),
        ));
    }
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for i in 0..resolution {
        let mut b = *base;
        b.gamma3 = gamma3;
        b.theta = TWO_PI * i as f64 / resolution as f64;
        let (_, m3, _, _) = matrix_port_stats(&b)?;
        max = max.max(m3);
        min = min.min(m3);
    }
    if max + min == 0.0 {
        if max > 0.0 {
            return Ok(1.0);
        }
        return Err(Error::DegenerateVisibility);
    }
    Ok((max - min) / (max + min))
}

/// A per-port photon-number distribution with the metadata needed to
/// reproduce it.
#[derive(Debug, Clone)]
pub struct DistributionReport {
    pub port: PortLabel,
    pub path: PathChoice,
    pub cutoff: usize,
    pub dist: Distribution,
}

/// Photon-number pmf of one output port, truncated at `max_n`.
pub fn distribution_report(
    port: PortLabel,
    base: &BaseParams,
    max_n: usize,
    path: PathChoice,
) -> Result<DistributionReport> {
    let cutoff = base.effective_cutoff();
    let dist = match path {
        PathChoice::Matrix | PathChoice::Both => {
            let (in0, in1) = base.input_states()?;
            let joint = beam_splitter_transform(&in0, &in1, &base.beam_splitter()?)?;
            let full = photon_number_distribution(&partial_trace(&joint, port))?;
            let probs: Vec<f64> = (0..=max_n)
                .map(|n| full.probs.get(n).copied().unwrap_or(0.0))
                .collect();
            let tail = (1.0 - KahanSum::sum_iter(probs.iter().copied())).max(0.0);
            Distribution::from_photon_probs(probs, tail)
        }
        PathChoice::ClosedForm => {
            let cfg = base.closed_form_config()?;
            let probs: Vec<f64> = (0..=max_n)
                .map(|n| match port {
                    PortLabel::Port2 => closed_form::p2(n, &cfg),
                    PortLabel::Port3 => closed_form::p3(n, &cfg),
                })
                .collect::<Result<_>>()?;
            let tail = (1.0 - KahanSum::sum_iter(probs.iter().copied())).max(0.0);
            Distribution::from_photon_probs(probs, tail)
        }
    };
    Ok(DistributionReport {
        port,
        path,
        cutoff,
        dist,
    })
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, residual: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: residual < tolerance,
        residual,
        tolerance,
        detail,
    }
}

fn cross_path_check(
    name: &str,
    beta_sq: &[f64],
    gammas: &[f64],
    thetas: &[f64],
    transmissions_sq: &[f64],
    max_count: usize,
    cutoff: usize,
) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    let mut where_ = String::new();
    for &b2 in beta_sq {
        for &g in gammas {
            for &th in thetas {
                for &t2 in transmissions_sq {
                    let mut base = BaseParams::new(b2.sqrt(), th, g);
                    base.transmission = t2.sqrt();
                    base.cutoff = cutoff;
                    let matrix =
                        distribution_report(PortLabel::Port2, &base, max_count, PathChoice::Matrix)?;
                    let closed = distribution_report(
                        PortLabel::Port2,
                        &base,
                        max_count,
                        PathChoice::ClosedForm,
                    )?;
                    let matrix3 =
                        distribution_report(PortLabel::Port3, &base, max_count, PathChoice::Matrix)?;
                    let closed3 = distribution_report(
                        PortLabel::Port3,
                        &base,
                        max_count,
                        PathChoice::ClosedForm,
                    )?;
                    for n in 0..=max_count {
                        let d2 = (matrix.dist.probs[n] - closed.dist.probs[n]).abs();
                        let d3 = (matrix3.dist.probs[n] - closed3.dist.probs[n]).abs();
                        let d = d2.max(d3);
                        if d > worst {
                            worst = d;
                            where_ = format!("beta^2={b2}, gamma3={g}, theta={th}, t^2={t2}, n={n}");
                        }
                    }
                }
            }
        }
    }
    Ok(check(name, worst, 1e-8, where_))
}

fn parity_check(name: &str, beta_mags: &[f64], gammas: &[f64]) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    let mut where_ = String::new();
    for &b in beta_mags {
        for &g in gammas {
            let base = BaseParams::new(b, std::f64::consts::FRAC_PI_2, g);
            let (_, _, odd, _) = matrix_port_stats(&base)?;
            if odd > worst {
                worst = odd;
                where_ = format!("beta={b}, gamma3={g}");
            }
        }
    }
    Ok(check(name, worst, 1e-10, where_))
}

fn cancellation_audit(name: &str, samples: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta_mag = 6.0_f64.sqrt();
    let mut worst = 0.0f64;
    let mut even_worst = 0.0f64;
    let per_y = samples / 4;
    for &y in &[1usize, 3, 5] {
        for idx in closed_form::sample_index_tuples(y, 14, per_y, &mut rng) {
            let v = closed_form::cancellation_pair_check(&idx, y, beta_mag, 0.1).unwrap();
            let scale = v.scale();
            if scale > 0.0 {
                worst = worst.max(v.pair_sum.norm() / scale);
            }
        }
    }
    for idx in closed_form::sample_index_tuples(2, 14, samples - 3 * per_y, &mut rng) {
        let v = closed_form::cancellation_pair_check(&idx, 2, beta_mag, 0.1).unwrap();
        let scale = v.scale();
        if scale > 0.0 {
            even_worst = even_worst.max((v.pair_sum - v.term * 2.0).norm() / scale);
        }
    }
    check(
        name,
        worst.max(even_worst),
        1e-14,
        format!("odd worst {worst:e}, even worst {even_worst:e}"),
    )
}

/// Run the named invariant suites and report measured residuals.
pub fn verify(level: VerifyLevel, seed: u64) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    // Hong-Ou-Mandel: |1>|1> on a balanced splitter never coincides.
    {
        let one = crate::state_prep::fock_state(1, 2)?;
        let out = beam_splitter_transform(&one, &one, &BeamSplitter::balanced())?;
        checks.push(check(
            "hong_ou_mandel",
            out.amp(1, 1).norm(),
            1e-14,
            "p(1,1) amplitude".into(),
        ));
    }

    // Coherent limit: gamma3 = 0 leaves the dark port in vacuum.
    {
        let base = BaseParams::new(2.0, std::f64::consts::FRAC_PI_2, 0.0);
        let rep = distribution_report(PortLabel::Port3, &base, 10, PathChoice::Matrix)?;
        checks.push(check(
            "coherent_dark_port",
            1.0 - rep.dist.probs[0],
            1e-10,
            "1 - p3(0)".into(),
        ));
    }

    // Energy conservation across theta.
    {
        let spec = SweepSpec {
            variable: SweepVariable::Theta,
            start: 0.0,
            stop: TWO_PI,
            steps: if level == VerifyLevel::Full { 64 } else { 16 },
            base: BaseParams::new(2.0, 0.0, 0.1),
            path: PathChoice::Matrix,
        };
        let worst = sweep(&spec)?
            .iter()
            .map(|r| r.conservation_residual(2.0))
            .fold(0.0f64, f64::max);
        checks.push(check(
            "energy_conservation",
            worst,
            CONSERVATION_TOL,
            "max |mean2 + mean3 - 8| over theta".into(),
        ));
    }

    // Dark-port parity, matrix path.
    match level {
        VerifyLevel::Quick => checks.push(parity_check(
            "dark_port_parity",
            &[2.0_f64.sqrt(), 2.0],
            &[0.1, 1.0],
        )?),
        VerifyLevel::Full => checks.push(parity_check(
            "dark_port_parity",
            &[2.0_f64.sqrt(), 2.0, 6.0_f64.sqrt()],
            &[0.01, 0.1, 0.4, 1.0, std::f64::consts::FRAC_PI_4],
        )?),
    }

    // Cross-path equivalence.
    match level {
        VerifyLevel::Quick => checks.push(cross_path_check(
            "cross_path",
            &[2.0],
            &[0.1],
            &[std::f64::consts::FRAC_PI_2],
            &[0.5],
            6,
            12,
        )?),
        VerifyLevel::Full => checks.push(cross_path_check(
            "cross_path",
            &[2.0, 4.0, 6.0],
            &[0.0, 0.1, 0.4, 1.0],
            &[std::f64::consts::FRAC_PI_2],
            &[0.5],
            10,
            16,
        )?),
    }

    // Symmetric-case sum agrees with the general port-3 sum.
    {
        let mut worst = 0.0f64;
        for y in 0..=6 {
            let base = {
                let mut b = BaseParams::new(2.0, std::f64::consts::FRAC_PI_2, 0.1);
                b.cutoff = 14;
                b
            };
            let cfg = base.closed_form_config()?;
            let general = closed_form::p3(y, &cfg)?;
            let special = closed_form::p3_symmetric(y, 2.0, 0.1, 14)?;
            worst = worst.max((general - special).abs());
        }
        checks.push(check(
            "symmetric_vs_general",
            worst,
            1e-10,
            "max |general - symmetric| over y <= 6".into(),
        ));
    }

    // Closed-form parity for odd y.
    {
        let mut worst = 0.0f64;
        let gammas: &[f64] = if level == VerifyLevel::Full {
            &[0.1, 0.5, 1.0, std::f64::consts::FRAC_PI_4]
        } else {
            &[0.1, 1.0]
        };
        for &g in gammas {
            for y in [1usize, 3, 5] {
                worst = worst.max(closed_form::p3_symmetric(y, 2.0, g, 14)?);
            }
        }
        checks.push(check(
            "closed_form_parity",
            worst,
            1e-12,
            "max p3_symmetric(odd y)".into(),
        ));
    }

    // Normalization of the closed-form port-3 pmf.
    if level == VerifyLevel::Full {
        let mut base = BaseParams::new(2.0, 0.7, 0.1);
        base.cutoff = 14;
        let cfg = base.closed_form_config()?;
        let mut total = KahanSum::new();
        for y in 0..=28 {
            total.add(closed_form::p3(y, &cfg)?);
        }
        let tail = 2.0 * crate::numeric::poisson_tail(4.0, 14);
        checks.push(check(
            "closed_form_normalization",
            (1.0 - total.value() - tail).abs(),
            1e-8,
            "|1 - sum_y p3(y) - tail|".into(),
        ));
    }

    // Term-level cancellation audit.
    let samples = if level == VerifyLevel::Full { 10_000 } else { 1_000 };
    checks.push(cancellation_audit("cancellation_audit", samples, seed));

    Ok(VerifyReport {
        level,
        seed,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Figure reproduction + numeric formatting
// ---------------------------------------------------------------------------

/// Format with 12 significant digits; round-trips doubles closely enough
/// for golden-file comparisons without full 17-digit noise.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Round to 12 significant digits (used before JSON serialization so both
/// output formats carry the same precision).
pub fn round_sig12(x: f64) -> f64 {
    fmt_sig12(x).parse().unwrap()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents.as_bytes())?;
    Ok(())
}

fn sweep_csv(rows: &[SweepRow], variable: &str) -> String {
    let mut out = format!("{variable},mean_n2,mean_n3,odd_mass_3,total_mean,tail_bound\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig12(r.value),
            fmt_sig12(r.mean_n2),
            fmt_sig12(r.mean_n3),
            fmt_sig12(r.odd_mass_3),
            fmt_sig12(r.total_mean),
            fmt_sig12(r.tail_bound)
        );
    }
    out
}

fn dist_csv(dist: &Distribution) -> String {
    let mut out = String::from("n,probability\n");
    for (n, p) in dist.probs.iter().enumerate() {
        let _ = writeln!(out, "{n},{}", fmt_sig12(*p));
    }
    out
}

/// Gamma grid for the distribution panels: spans the low-nonlinearity
/// squeezed-vacuum-like regime through the strongly modulated one.
pub const FIGURE_GAMMA_GRID: [f64; 6] = [0.01, 0.1, 0.3, 0.6, 1.0, 2.0];

/// Detunings delta for the off-optimum robustness panels (theta = pi/2 + delta).
pub const FIGURE_DELTA_GRID: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.4];

/// Emit the full figure-reproduction data set into `dir`. Returns the
/// written paths. Byte-identical across repeated runs and worker counts.
pub fn write_figures(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    // Fringe versus relative phase: beta = 2, gamma3 = 0.1.
    {
        let spec = SweepSpec {
            variable: SweepVariable::Theta,
            start: 0.0,
            stop: TWO_PI,
            steps: 64,
            base: BaseParams::new(2.0, 0.0, 0.1),
            path: PathChoice::Matrix,
        };
        let rows = sweep(&spec)?;
        let path = dir.join("fringe_theta.csv");
        write_file(&path, &sweep_csv(&rows, "theta"))?;
        written.push(path);
    }

    // Port-3 mean at the dark port versus gamma3 in [0, 1].
    {
        let spec = SweepSpec {
            variable: SweepVariable::Gamma3,
            start: 0.0,
            stop: 1.0,
            steps: 64,
            base: BaseParams::new(2.0, std::f64::consts::FRAC_PI_2, 0.0),
            path: PathChoice::Matrix,
        };
        let rows = sweep(&spec)?;
        let path = dir.join("dark_port_mean_gamma.csv");
        write_file(&path, &sweep_csv(&rows, "gamma3"))?;
        written.push(path);
    }

    // Fringe visibility versus gamma3.
    {
        let base = BaseParams::new(2.0, 0.0, 0.0);
        let mut out = String::from("gamma3,visibility\n");
        for i in 0..32 {
            let g = i as f64 / 31.0;
            let v = visibility(g, &base, 128)?;
            let _ = writeln!(out, "{},{}", fmt_sig12(g), fmt_sig12(v));
        }
        let path = dir.join("visibility_gamma.csv");
        write_file(&path, &out)?;
        written.push(path);
    }

    // Photon-number distributions at both ports across the gamma grid,
    // beta = sqrt(6), theta = pi/2.
    for (i, &g) in FIGURE_GAMMA_GRID.iter().enumerate() {
        let base = BaseParams::new(6.0_f64.sqrt(), std::f64::consts::FRAC_PI_2, g);
        for (port, tag) in [(PortLabel::Port3, "port3"), (PortLabel::Port2, "port2")] {
            let rep = distribution_report(port, &base, 24, PathChoice::Matrix)?;
            let path = dir.join(format!("dist_gamma{i}_{tag}.csv"));
            write_file(&path, &dist_csv(&rep.dist))?;
            written.push(path);
        }
    }

    // Robustness against detuning from the optimum phase: beta = 2,
    // gamma3 = 0.1, theta = pi/2 + delta.
    for (i, &delta) in FIGURE_DELTA_GRID.iter().enumerate() {
        let base = BaseParams::new(2.0, std::f64::consts::FRAC_PI_2 + delta, 0.1);
        let rep = distribution_report(PortLabel::Port3, &base, 16, PathChoice::Matrix)?;
        let path = dir.join(format!("dist_detuning{i}_port3.csv"));
        write_file(&path, &dist_csv(&rep.dist))?;
        written.push(path);
    }

    Ok(written)
}
