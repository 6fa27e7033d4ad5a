//! Command-line front end: photon-number and phase distributions, parameter
//! sweeps, fringe visibility, verification suites and the figure
//! reproduction set.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 resource
//! bound exceeded.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use evenfock_core::experiments::{
    self, fmt_sig12, round_sig12, BaseParams, PathChoice, SweepRow, SweepSpec, SweepVariable,
    VerifyLevel, CONSERVATION_TOL, PATH_DISAGREEMENT_TOL,
};
use evenfock_core::interferometer::{phase_distribution, partial_trace, beam_splitter_transform};
use evenfock_core::{Error, KerrConvention, PortLabel};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "evenfock",
    version,
    about = "Interference of Kerr-squeezed coherent states at a beam splitter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// exp(i gamma3 n^2)
    N2,
    /// exp(i gamma3 (n^2 - n))
    #[value(name = "n2-n")]
    N2MinusN,
}

impl From<ConventionArg> for KerrConvention {
    fn from(v: ConventionArg) -> Self {
        match v {
            ConventionArg::N2 => KerrConvention::NSquared,
            ConventionArg::N2MinusN => KerrConvention::NSquaredMinusN,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Matrix,
    Closed,
    Both,
}

impl From<PathArg> for PathChoice {
    fn from(v: PathArg) -> Self {
        match v {
            PathArg::Matrix => PathChoice::Matrix,
            PathArg::Closed => PathChoice::ClosedForm,
            PathArg::Both => PathChoice::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Input amplitude magnitude |beta| (both ports share it)
    #[arg(long, default_value_t = 2.0)]
    beta_mag: f64,
    /// Relative phase theta in radians (port-1 input is beta e^{-i theta})
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    theta: f64,
    /// Kerr strength gamma3
    #[arg(long, default_value_t = 0.1)]
    gamma3: f64,
    /// Beam-splitter transmission t; r is derived from t^2 + r^2 = 1
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    transmission: f64,
    /// Fock cutoff; 0 selects the automatic tail policy
    #[arg(long, default_value_t = 0)]
    cutoff: usize,
    /// Kerr phase convention
    #[arg(long, value_enum, default_value = "n2")]
    kerr_convention: ConventionArg,
    /// Computational path
    #[arg(long, value_enum, default_value = "matrix")]
    path: PathArg,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores. Results are worker-independent
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Seed for randomized verification sampling
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl CommonArgs {
    fn base(&self) -> BaseParams {
        BaseParams {
            beta_mag: self.beta_mag,
            theta: self.theta,
            gamma3: self.gamma3,
            transmission: self.transmission,
            cutoff: self.cutoff,
            kerr_convention: self.kerr_convention.into(),
        }
    }

    fn metadata(&self, path: PathChoice, cutoff: usize) -> serde_json::Value {
        json!({
            "beta_mag": self.beta_mag,
            "theta": self.theta,
            "gamma3": self.gamma3,
            "transmission": self.transmission,
            "cutoff": cutoff,
            "kerr_convention": match KerrConvention::from(self.kerr_convention) {
                KerrConvention::NSquared => "n2",
                KerrConvention::NSquaredMinusN => "n2-n",
            },
            "path": match path {
                PathChoice::Matrix => "matrix",
                PathChoice::ClosedForm => "closed",
                PathChoice::Both => "both",
            },
            "tool_version": VERSION,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PortArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

impl From<PortArg> for PortLabel {
    fn from(v: PortArg) -> Self {
        match v {
            PortArg::Two => PortLabel::Port2,
            PortArg::Three => PortLabel::Port3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Photon-number distribution at one output port
    Dist {
        #[command(flatten)]
        common: CommonArgs,
        /// Output port
        #[arg(long, value_enum, default_value = "3")]
        port: PortArg,
        /// Largest photon number to report
        #[arg(long, default_value_t = 24)]
        max_n: usize,
    },
    /// Phase distribution at one output port (matrix path)
    PhaseDist {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "3")]
        port: PortArg,
        /// Number of phase grid points over [0, 2pi)
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Sweep the relative phase theta
    SweepTheta {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = evenfock_core::numeric::TWO_PI)]
        stop: f64,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Sweep the Kerr strength gamma3
    SweepGamma {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.0)]
        stop: f64,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Fringe visibility over a grid of gamma3 values
    Visibility {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.0)]
        stop: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Theta resolution used to locate the fringe extrema
        #[arg(long, default_value_t = 128)]
        resolution: usize,
    },
    /// Run the invariant verification suites
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
    /// Emit the full figure-reproduction data set into a directory
    Figures {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn emit(common: &CommonArgs, contents: &str) -> evenfock_core::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, contents.as_bytes())?,
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
        }
    }
    Ok(())
}

fn sweep_output(
    common: &CommonArgs,
    rows: &[SweepRow],
    variable: &str,
    cutoff: usize,
) -> String {
    match common.format {
        FormatArg::Csv => {
            let mut out =
                format!("{variable},mean_n2,mean_n3,odd_mass_3,total_mean,tail_bound\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_sig12(r.value),
                    fmt_sig12(r.mean_n2),
                    fmt_sig12(r.mean_n3),
                    fmt_sig12(r.odd_mass_3),
                    fmt_sig12(r.total_mean),
                    fmt_sig12(r.tail_bound)
                ));
            }
            out
        }
        FormatArg::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        variable: round_sig12(r.value),
                        "mean_n2": round_sig12(r.mean_n2),
                        "mean_n3": round_sig12(r.mean_n3),
                        "odd_mass_3": round_sig12(r.odd_mass_3),
                        "total_mean": round_sig12(r.total_mean),
                        "tail_bound": round_sig12(r.tail_bound),
                    })
                })
                .collect();
            let doc = json!({
                "metadata": common.metadata(common.path.into(), cutoff),
                "rows": rows,
            });
            format!("{doc:#}\n")
        }
    }
}

/// Verification outcome of a sweep: conservation at every row, and
/// cross-path agreement for BOTH-path runs.
fn sweep_violations(rows: &[SweepRow], beta_mag: f64) -> Vec<String> {
    let mut violations = Vec::new();
    for r in rows {
        let resid = r.conservation_residual(beta_mag);
        if resid >= CONSERVATION_TOL {
            violations.push(format!(
                "conservation violated at value {}: residual {resid:e}",
                r.value
            ));
        }
        if let Some(d) = r.path_disagreement {
            if d >= PATH_DISAGREEMENT_TOL {
                violations.push(format!(
                    "path disagreement at value {}: {d:e}",
                    r.value
                ));
            }
        }
    }
    violations
}

fn run_sweep(
    common: &CommonArgs,
    variable: SweepVariable,
    start: f64,
    stop: f64,
    steps: usize,
) -> evenfock_core::Result<u8> {
    let base = common.base();
    let spec = SweepSpec {
        variable,
        start,
        stop,
        steps,
        base,
        path: common.path.into(),
    };
    let rows = experiments::sweep(&spec)?;
    let name = match variable {
        SweepVariable::Theta => "theta",
        SweepVariable::Gamma3 => "gamma3",
    };
    emit(common, &sweep_output(common, &rows, name, base.effective_cutoff()))?;
    let violations = sweep_violations(&rows, common.beta_mag);
    for v in &violations {
        eprintln!("verification failure: {v}");
    }
    Ok(if violations.is_empty() { 0 } else { 2 })
}

fn run(cli: Cli) -> evenfock_core::Result<u8> {
    let common = match &cli.command {
        Command::Dist { common, .. }
        | Command::PhaseDist { common, .. }
        | Command::SweepTheta { common, .. }
        | Command::SweepGamma { common, .. }
        | Command::Visibility { common, .. }
        | Command::Verify { common, .. }
        | Command::Figures { common } => common.clone(),
    };
    if common.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.workers)
            .build_global()
            .map_err(|e| Error::InvalidSweep(format!("worker pool: {e}")))?;
    }

    match cli.command {
        Command::Dist {
            common,
            port,
            max_n,
        } => {
            let base = common.base();
            let path: PathChoice = common.path.into();
            let report = experiments::distribution_report(port.into(), &base, max_n, path)?;
            let mut disagreement = None;
            if path == PathChoice::Both {
                let closed = experiments::distribution_report(
                    port.into(),
                    &base,
                    max_n,
                    PathChoice::ClosedForm,
                )?;
                let d = report
                    .dist
                    .probs
                    .iter()
                    .zip(&closed.dist.probs)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                disagreement = Some(d);
            }
            let contents = match common.format {
                FormatArg::Csv => {
                    let mut out = String::from("n,probability\n");
                    for (n, p) in report.dist.probs.iter().enumerate() {
                        out.push_str(&format!("{n},{}\n", fmt_sig12(*p)));
                    }
                    out
                }
                FormatArg::Json => {
                    let doc = json!({
                        "metadata": common.metadata(path, report.cutoff),
                        "port": match report.port {
                            PortLabel::Port2 => 2,
                            PortLabel::Port3 => 3,
                        },
                        "tail_bound": round_sig12(report.dist.tail_bound),
                        "probabilities": report.dist.probs.iter()
                            .map(|&p| round_sig12(p)).collect::<Vec<_>>(),
                    });
                    format!("{doc:#}\n")
                }
            };
            emit(&common, &contents)?;
            if let Some(d) = disagreement {
                if d >= PATH_DISAGREEMENT_TOL {
                    eprintln!("verification failure: path disagreement {d:e}");
                    return Ok(2);
                }
            }
            Ok(0)
        }
        Command::PhaseDist {
            common,
            port,
            points,
        } => {
            let base = common.base();
            let (in0, in1) = base.input_states()?;
            let joint = beam_splitter_transform(&in0, &in1, &base.beam_splitter()?)?;
            let rho = partial_trace(&joint, port.into());
            let dist = phase_distribution(&rho, points)?;
            let grid = match &dist.support {
                evenfock_core::Support::Phase(g) => g.clone(),
                _ => unreachable!(),
            };
            let contents = match common.format {
                FormatArg::Csv => {
                    let mut out = String::from("phi,probability\n");
                    for (phi, p) in grid.iter().zip(&dist.probs) {
                        out.push_str(&format!("{},{}\n", fmt_sig12(*phi), fmt_sig12(*p)));
                    }
                    out
                }
                FormatArg::Json => {
                    let doc = json!({
                        "metadata": common.metadata(PathChoice::Matrix, base.effective_cutoff()),
                        "phi": grid.iter().map(|&x| round_sig12(x)).collect::<Vec<_>>(),
                        "probabilities": dist.probs.iter()
                            .map(|&p| round_sig12(p)).collect::<Vec<_>>(),
                    });
                    format!("{doc:#}\n")
                }
            };
            emit(&common, &contents)?;
            Ok(0)
        }
        Command::SweepTheta {
            common,
            start,
            stop,
            steps,
        } => run_sweep(&common, SweepVariable::Theta, start, stop, steps),
        Command::SweepGamma {
            common,
            start,
            stop,
            steps,
        } => run_sweep(&common, SweepVariable::Gamma3, start, stop, steps),
        Command::Visibility {
            common,
            start,
            stop,
            steps,
            resolution,
        } => {
            if steps < 2 || !(start < stop) {
                return Err(Error::InvalidSweep(
                    "visibility grid needs steps >= 2 and start < stop".into(),
                ));
            }
            let base = common.base();
            let mut pairs = Vec::with_capacity(steps);
            for i in 0..steps {
                let g = start + (stop - start) * i as f64 / (steps - 1) as f64;
                pairs.push((g, experiments::visibility(g, &base, resolution)?));
            }
            let contents = match common.format {
                FormatArg::Csv => {
                    let mut out = String::from("gamma3,visibility\n");
                    for (g, v) in &pairs {
                        out.push_str(&format!("{},{}\n", fmt_sig12(*g), fmt_sig12(*v)));
                    }
                    out
                }
                FormatArg::Json => {
                    let doc = json!({
                        "metadata": common.metadata(PathChoice::Matrix, base.effective_cutoff()),
                        "rows": pairs.iter().map(|(g, v)| json!({
                            "gamma3": round_sig12(*g),
                            "visibility": round_sig12(*v),
                        })).collect::<Vec<_>>(),
                    });
                    format!("{doc:#}\n")
                }
            };
            emit(&common, &contents)?;
            Ok(0)
        }
        Command::Verify { common, level } => {
            let level = match level {
                LevelArg::Quick => VerifyLevel::Quick,
                LevelArg::Full => VerifyLevel::Full,
            };
            let report = experiments::verify(level, common.seed)?;
            let contents = match common.format {
                FormatArg::Csv => {
                    let mut out = String::from("check,passed,residual,tolerance,detail\n");
                    for c in &report.checks {
                        out.push_str(&format!(
                            "{},{},{},{},\"{}\"\n",
                            c.name,
                            c.passed,
                            fmt_sig12(c.residual),
                            fmt_sig12(c.tolerance),
                            c.detail
                        ));
                    }
                    out
                }
                FormatArg::Json => format!("{:#}\n", serde_json::to_value(&report).unwrap()),
            };
            emit(&common, &contents)?;
            if report.passed() {
                Ok(0)
            } else {
                for c in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!(
                        "verification failure: {} residual {:e} >= {:e}",
                        c.name, c.residual, c.tolerance
                    );
                }
                Ok(2)
            }
        }
        Command::Figures { common } => {
            let dir = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("figures"));
            let written = experiments::write_figures(&dir)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version requests are successes; anything else is a
            // usage error (exit 1)
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::ResourceBound { .. }) => {
            eprintln!("error: resource bound exceeded");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
