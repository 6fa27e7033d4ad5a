//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::Command;

use evenfock_core::closed_form::{cancellation_pair_check, p2, p3, sample_index_tuples};
use evenfock_core::experiments::{self, BaseParams, PathChoice, SweepSpec, SweepVariable};
use evenfock_core::interferometer::{
    beam_splitter_transform, odd_probability_mass, partial_trace, photon_number_distribution,
    BeamSplitter, PortLabel,
};
use evenfock_core::state_prep::{apply_kerr, coherent_state, fock_state, CoherentParams, KerrParams};
use evenfock_core::KerrConvention;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Criterion {
    name: &'static str,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self { name }
    }

    fn finish(self, passed: bool, detail: String) {
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {detail}", self.name);
        assert!(passed, "{}: {detail}", self.name);
    }
}

fn port_pmf(base: &BaseParams, port: PortLabel) -> Vec<f64> {
    let (in0, in1) = base.input_states().unwrap();
    let joint = beam_splitter_transform(&in0, &in1, &base.beam_splitter().unwrap()).unwrap();
    photon_number_distribution(&partial_trace(&joint, port))
        .unwrap()
        .probs
}

fn odd_mass(base: &BaseParams) -> f64 {
    let (in0, in1) = base.input_states().unwrap();
    let joint = beam_splitter_transform(&in0, &in1, &base.beam_splitter().unwrap()).unwrap();
    odd_probability_mass(&photon_number_distribution(&partial_trace(&joint, PortLabel::Port3)).unwrap())
        .unwrap()
}

#[test]
fn criterion_01_dark_port_parity() {
    let c = Criterion::new("criterion 1 dark-port parity");
    let mut worst = 0.0f64;
    for beta_mag in [2.0f64.sqrt(), 2.0, 6.0f64.sqrt()] {
        for gamma3 in [0.01, 0.1, 0.4, 1.0, FRAC_PI_4] {
            let base = BaseParams {
                gamma3,
                ..BaseParams::new(beta_mag, FRAC_PI_2, gamma3)
            };
            worst = worst.max(odd_mass(&base));
        }
    }
    c.finish(
        worst < 1e-10,
        format!("worst odd mass {worst:e} (tolerance 1e-10)"),
    );
}

#[test]
fn criterion_02_cross_path_equivalence() {
    let c = Criterion::new("criterion 2 cross-path equivalence");
    let cutoff = 16;
    let mut worst = 0.0f64;
    for beta_sq in [2.0f64, 4.0] {
        for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
            for gamma3 in [0.0, 0.1, 0.4] {
                for t_sq in [0.5f64, 0.7] {
                    let base = BaseParams {
                        theta,
                        gamma3,
                        transmission: t_sq.sqrt(),
                        cutoff,
                        ..BaseParams::new(beta_sq.sqrt(), theta, gamma3)
                    };
                    let cfg = base.closed_form_config().unwrap();
                    let m2 = port_pmf(&base, PortLabel::Port2);
                    let m3 = port_pmf(&base, PortLabel::Port3);
                    for n in 0..=10 {
                        worst = worst.max((p2(n, &cfg).unwrap() - m2[n]).abs());
                        worst = worst.max((p3(n, &cfg).unwrap() - m3[n]).abs());
                    }
                }
            }
        }
    }
    c.finish(
        worst < 1e-8,
        format!("worst |closed - matrix| {worst:e} (tolerance 1e-8)"),
    );
}

#[test]
fn criterion_03_energy_conservation() {
    let c = Criterion::new("criterion 3 energy conservation");
    let spec = SweepSpec {
        variable: SweepVariable::Theta,
        start: 0.0,
        stop: 2.0 * PI,
        steps: 64,
        base: BaseParams::new(2.0, FRAC_PI_2, 0.1),
        path: PathChoice::Matrix,
    };
    let rows = experiments::sweep(&spec).unwrap();
    let worst = rows
        .iter()
        .map(|r| (r.mean_n2 + r.mean_n3 - 8.0).abs())
        .fold(0.0f64, f64::max);
    c.finish(
        rows.len() == 64 && worst < 1e-8,
        format!("worst |mean2 + mean3 - 8| {worst:e} over 64 theta points (tolerance 1e-8)"),
    );
}

#[test]
fn criterion_04_coherent_limit() {
    let c = Criterion::new("criterion 4 coherent limit");
    let base = BaseParams::new(2.0, FRAC_PI_2, 0.0);
    let p3_pmf = port_pmf(&base, PortLabel::Port3);
    let p2_pmf = port_pmf(&base, PortLabel::Port2);
    let vac_defect = 1.0 - p3_pmf[0];
    let mut poisson = (-8.0f64).exp();
    let mut worst = 0.0f64;
    for (n, &p) in p2_pmf.iter().enumerate().take(base.effective_cutoff() + 1) {
        worst = worst.max((p - poisson).abs());
        poisson *= 8.0 / (n + 1) as f64;
    }
    c.finish(
        vac_defect < 1e-10 && worst < 1e-9,
        format!("1 - p3(0) = {vac_defect:e} (tol 1e-10); worst Poisson(8) deviation {worst:e} (tol 1e-9)"),
    );
}

#[test]
fn criterion_05_visibility_decay() {
    let c = Criterion::new("criterion 5 visibility decay");
    let base = BaseParams::new(2.0, FRAC_PI_2, 0.0);
    let grid = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0];
    let vis: Vec<f64> = grid
        .iter()
        .map(|&g| experiments::visibility(g, &base, 128).unwrap())
        .collect();
    let monotone = vis.windows(2).all(|w| w[1] <= w[0] + 1e-6);
    let passed = vis[0] > 0.999 && monotone && vis[5] < 0.1;
    c.finish(
        passed,
        format!(
            "v(0) = {:.6}, v(1.0) = {:.6}, non-increasing: {monotone}",
            vis[0], vis[5]
        ),
    );
}

#[test]
fn criterion_06_cancellation_audit() {
    let c = Criterion::new("criterion 6 term cancellation audit");
    let mut rng = ChaCha8Rng::seed_from_u64(20240817);
    let mut worst_odd = 0.0f64;
    let mut worst_even = 0.0f64;
    let mut checked = 0usize;
    for y in [1usize, 3, 5, 7, 2, 4, 6] {
        let count = if y % 2 == 1 { 2000 } else { 800 };
        for idx in sample_index_tuples(y, 10, count, &mut rng) {
            let v = cancellation_pair_check(&idx, y, 2.0, 0.1).unwrap();
            let scale = v.scale();
            if scale == 0.0 {
                continue;
            }
            if y % 2 == 1 {
                worst_odd = worst_odd.max(v.pair_sum.norm() / scale);
            } else {
                worst_even = worst_even.max((v.pair_sum - v.term * 2.0).norm() / scale);
            }
            checked += 1;
        }
    }
    c.finish(
        checked >= 10_000 && worst_odd < 1e-14 && worst_even < 1e-14,
        format!(
            "{checked} pairs; worst odd-y relative pair sum {worst_odd:e}, \
             worst even-y doubling defect {worst_even:e} (tolerance 1e-14)"
        ),
    );
}

#[test]
fn criterion_07_robustness_trend_golden() {
    let c = Criterion::new("criterion 7 detuning robustness trend");
    let golden = include_str!("golden/fig3_odd_mass.csv");
    let mut rows = Vec::new();
    for line in golden.lines().skip(1) {
        let mut it = line.split(',');
        let delta: f64 = it.next().unwrap().parse().unwrap();
        let mass: f64 = it.next().unwrap().parse().unwrap();
        rows.push((delta, mass));
    }
    assert_eq!(rows.len(), 5);
    let mut worst_rel = 0.0f64;
    let mut values = Vec::new();
    for &(delta, frozen) in &rows {
        let base = BaseParams::new(2.0, FRAC_PI_2 + delta, 0.1);
        let mass = odd_mass(&base);
        values.push(mass);
        if frozen > 1e-20 {
            worst_rel = worst_rel.max((mass - frozen).abs() / frozen);
        } else {
            assert!(mass < 1e-20, "delta=0 mass {mass:e} should be numerically zero");
        }
    }
    let zero_at_origin = values[0] < 1e-12;
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    c.finish(
        zero_at_origin && increasing && worst_rel < 1e-9,
        format!(
            "odd mass zero at delta=0 ({:.3e}), strictly increasing: {increasing}, \
             worst relative drift from golden {worst_rel:e} (tolerance 1e-9)",
            values[0]
        ),
    );
}

#[test]
fn criterion_08_kerr_pmf_bitwise() {
    let c = Criterion::new("criterion 8 Kerr pmf bitwise invariance");
    let mut passed = true;
    for beta_mag in [1.0, 2.0, 6.0f64.sqrt()] {
        for gamma3 in [0.0, 0.1, 1.0, FRAC_PI_4] {
            for conv in [KerrConvention::NSquared, KerrConvention::NSquaredMinusN] {
                let parent = coherent_state(CoherentParams::new(beta_mag, 0.3), 24).unwrap();
                let evolved = apply_kerr(&parent, KerrParams::new(gamma3, conv));
                let a = parent.photon_number_pmf().probs;
                let b = evolved.photon_number_pmf().probs;
                passed &= a.len() == b.len()
                    && a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
            }
        }
    }
    c.finish(passed, "Kerr-evolved pmf identical bitwise to parent Poisson pmf".into());
}

#[test]
fn criterion_09_hong_ou_mandel() {
    let c = Criterion::new("criterion 9 Hong-Ou-Mandel");
    let one = fock_state(1, 4).unwrap();
    let out = beam_splitter_transform(&one, &one, &BeamSplitter::balanced()).unwrap();
    let coincidence = out.amp(1, 1).norm();
    c.finish(
        coincidence < 1e-14,
        format!("|amp(1,1)| = {coincidence:e} (tolerance 1e-14)"),
    );
}

#[test]
fn criterion_10_figures_determinism() {
    let c = Criterion::new("criterion 10 figures determinism");
    let bin = env!("CARGO_BIN_EXE_evenfock");
    let run = |workers: &str| {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new(bin)
            .args(["figures", "--workers", workers, "--out"])
            .arg(dir.path())
            .status()
            .unwrap();
        assert!(status.success());
        let mut files: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        files
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_owned(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect::<Vec<_>>()
    };
    let a = run("1");
    let b = run("1");
    let d = run("4");
    let passed = !a.is_empty() && a == b && a == d;
    c.finish(
        passed,
        format!(
            "{} files, repeat-identical: {}, worker-independent: {}",
            a.len(),
            a == b,
            a == d
        ),
    );
}
