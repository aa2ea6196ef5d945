//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line per clause (run with `--nocapture` to see them). Tolerances are
//! pinned in the asserts.

use std::collections::BTreeMap;
use std::time::Instant;

use frontlab::dispersion::{dispersion_det, linear_spreading_speed};
use frontlab::experiments::{
    exp_distance_scaling, exp_four_fronts, exp_interface_saddle_node, exp_nagumo_dichotomy,
    exp_splice, exp_terrace, exp_three_fronts_cgl, ScalingFamily,
};
use frontlab::harness::{parse_config_str, pipeline};
use frontlab::linalg::Lcg;
use frontlab::models::{build_preset, equilibrium_at, ReactionModel};
use frontlab::profiles::shoot_scalar_front;
use frontlab::spectra::{point_spectrum_selfadjoint, SchrodingerOperator};

struct Gate {
    name: &'static str,
    failures: Vec<String>,
    started: Instant,
}

impl Gate {
    fn new(name: &'static str) -> Self {
        Gate { name, failures: Vec::new(), started: Instant::now() }
    }

    fn check(&mut self, clause: &str, pass: bool, detail: String) {
        println!(
            "[{}] {}: {clause} ({detail})",
            if pass { "PASS" } else { "FAIL" },
            self.name
        );
        if !pass {
            self.failures.push(format!("{clause}: {detail}"));
        }
    }

    fn finish(self) {
        println!(
            "[{}] {} complete in {:.1} s",
            if self.failures.is_empty() { "PASS" } else { "FAIL" },
            self.name,
            self.started.elapsed().as_secs_f64()
        );
        assert!(
            self.failures.is_empty(),
            "{} failed clauses:\n  {}",
            self.name,
            self.failures.join("\n  ")
        );
    }
}

fn preset(name: &str, params: &[(&str, f64)]) -> ReactionModel {
    let map: BTreeMap<String, f64> =
        params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    build_preset(name, &map).unwrap()
}

#[test]
fn criterion_01_spreading_speed_oracle() {
    let mut gate = Gate::new("criterion 1 (spreading-speed oracle)");

    let m = preset("nagumo", &[("a", -1.0)]);
    let s = linear_spreading_speed(&m, &equilibrium_at(&m, vec![0.0])).unwrap();
    gate.check(
        "nagumo c_lin = 2",
        (s.c_lin - 2.0).abs() <= 1e-8,
        format!("measured {:.12}", s.c_lin),
    );

    let m = preset("forced_cgl", &[("alpha", 0.02), ("beta", 0.5)]);
    let s = linear_spreading_speed(&m, &equilibrium_at(&m, vec![0.0, 0.0])).unwrap();
    let exact = 2.0 * 1.02f64.sqrt();
    gate.check(
        "forced CGL c_lin = 2 sqrt(1.02)",
        (s.c_lin - exact).abs() <= 1e-8,
        format!("measured {:.12} vs {exact:.12}", s.c_lin),
    );

    let mu = 0.1;
    let m = preset("skew", &[("mu", mu)]);
    let s = linear_spreading_speed(&m, &equilibrium_at(&m, vec![1.0, 0.0])).unwrap();
    let exact = 2.0 * (1.0 + mu).sqrt();
    gate.check(
        "skew wake c = 2 sqrt(1 + mu)",
        (s.c_lin - exact).abs() <= 1e-8,
        format!("measured {:.12} vs {exact:.12}", s.c_lin),
    );
    gate.finish();
}

#[test]
fn criterion_02_nagumo_dichotomy() {
    let mut gate = Gate::new("criterion 2 (Nagumo dichotomy)");
    let rec = exp_nagumo_dichotomy().unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_03_four_fronts() {
    let mut gate = Gate::new("criterion 3 (four fronts)");
    let rec = exp_four_fronts(0.1).unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_04_three_fronts_cgl() {
    let mut gate = Gate::new("criterion 4 (three CGL fronts)");
    let rec = exp_three_fronts_cgl(0.02, 0.5).unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_05_critical_beta_curve() {
    let mut gate = Gate::new("criterion 5 (critical beta curve)");
    let rec = frontlab::experiments::exp_critical_beta_curve().unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_06_distance_scalings() {
    let mut gate = Gate::new("criterion 6 (distance scalings)");
    for family in [
        ScalingFamily::SkewMu,
        ScalingFamily::CglBetaAboveAc,
        ScalingFamily::CglBetaBelowAc,
    ] {
        let rec = exp_distance_scaling(family).unwrap();
        for c in &rec.criteria {
            gate.check(
                &format!("{}: {}", rec.name, c.name),
                c.pass,
                format!("measured {:.4}, expected {}", c.measured, c.expected),
            );
        }
    }
    gate.finish();
}

#[test]
fn criterion_07_interface_saddle_node() {
    let mut gate = Gate::new("criterion 7 (interface saddle-node)");
    let rec = exp_interface_saddle_node(1e-3).unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_08_splice() {
    let mut gate = Gate::new("criterion 8 (splice)");
    let rec = exp_splice(&[-1.82, -2.3]).unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_09_terrace() {
    let mut gate = Gate::new("criterion 9 (terrace)");
    let rec = exp_terrace(3, 0.05).unwrap();
    for c in &rec.criteria {
        gate.check(&c.name, c.pass, format!("measured {:.6}, expected {}", c.measured, c.expected));
    }
    gate.finish();
}

#[test]
fn criterion_10_property_suites() {
    let mut gate = Gate::new("criterion 10 (property suites)");

    // Dispersion identity d_c(lambda, nu) = d(lambda - c nu, nu) at 1000
    // seeded samples on a coupled model.
    {
        let m = preset("fhn", &[]);
        let at = equilibrium_at(&m, vec![0.0, 0.0]);
        let mut rng = Lcg(31415);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let c = rng.uniform(-3.0, 3.0);
            let lambda =
                num_complex::Complex64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let nu = num_complex::Complex64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let lhs = dispersion_det(&m, c, lambda, nu, &at);
            let rhs = dispersion_det(&m, 0.0, lambda - c * nu, nu, &at);
            worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
        }
        gate.check(
            "dispersion identity to machine precision",
            worst <= 1e-12,
            format!("worst relative mismatch {worst:.2e}"),
        );
    }

    // Poeschl-Teller ground state at 1e-6.
    {
        let l = 30.0;
        let n = 60001;
        let h = 2.0 * l / (n - 1) as f64;
        let potential: Vec<f64> =
            (0..n).map(|k| 2.0 / (-l + h * k as f64).cosh().powi(2)).collect();
        let op = SchrodingerOperator { xi_min: -l, h, diffusion: 1.0, potential, shift: 0.0 };
        let top = point_spectrum_selfadjoint(&op, 1)[0];
        gate.check(
            "Poeschl-Teller top eigenvalue 1.0 +- 1e-6",
            (top - 1.0).abs() <= 1e-6,
            format!("measured {top:.10}"),
        );
    }

    // Balanced-cubic kink against tanh(xi / sqrt 2) at 1e-6 (shooting).
    {
        let m = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
        let p = shoot_scalar_front(&m, 0.0, 1.0, 20.0).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..p.n_nodes() {
            let exact = -(p.xi(j) / 2.0f64.sqrt()).tanh();
            worst = worst.max((p.values[0][j] - exact).abs());
        }
        gate.check(
            "kink vs tanh <= 1e-6",
            worst <= 1e-6,
            format!("max deviation {worst:.2e}"),
        );
    }

    // Jacobian finite-difference convergence order >= 1.9.
    {
        let m = preset("forced_cgl", &[("alpha", 0.07), ("beta", 0.3)]);
        let state = vec![0.37, -0.81];
        let j = m.jacobian_at(&state);
        let err = |h: f64| -> f64 {
            let fd = frontlab::models::fd_jacobian(&m, &state, h);
            fd.iter().zip(&j).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let order = (err(1e-3) / err(5e-4)).log2();
        gate.check(
            "jacobian FD order >= 1.9",
            order >= 1.9,
            format!("observed order {order:.3}"),
        );
    }

    // Grid-doubling convergence orders: profiles (BVP kink), spectra
    // (Poeschl-Teller) and time stepping (heat kernel) are covered by unit
    // tests of the respective modules; re-run the profile order here as the
    // cross-module representative.
    {
        let m = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
        let sm = equilibrium_at(&m, vec![1.0]);
        let sp = equilibrium_at(&m, vec![-1.0]);
        let err_at = |n_grid: usize| -> f64 {
            let opts = frontlab::profiles::BvpOptions { l: 20.0, n_grid, ..Default::default() };
            let init = frontlab::profiles::tanh_connection(
                &sm.state, &sp.state, 20.0, n_grid, 1.5, &[0.0],
            );
            let p = frontlab::profiles::solve_front_bvp(
                &m,
                frontlab::profiles::SpeedMode::Fixed(0.0),
                &sm,
                &sp,
                &opts,
                &init,
            )
            .unwrap();
            (0..p.n_nodes())
                .map(|j| (p.values[0][j] + (p.xi(j) / 2.0f64.sqrt()).tanh()).abs())
                .fold(0.0, f64::max)
        };
        let order = (err_at(501) / err_at(1001)).log2();
        gate.check(
            "profile grid-doubling order >= 1.8",
            order >= 1.8,
            format!("observed order {order:.3}"),
        );
    }

    // Determinism: double runs are byte-identical.
    {
        let dir = std::env::temp_dir().join("frontlab_acceptance_determinism");
        let _ = std::fs::remove_dir_all(&dir);
        let cfg = parse_config_str(
            r#"{
                "model": {"preset": "skew", "params": {"mu": 0.1}},
                "numerics": {"x_lo": -60.0, "x_hi": 120.0, "t_end": 20.0, "snapshot_every": 5.0},
                "tracking": {"component": 0, "level": 0.5, "offset": 20.0}
            }"#,
        )
        .unwrap();
        let d1 = dir.join("a");
        let d2 = dir.join("b");
        pipeline::simulate_run(&cfg, &d1).unwrap();
        pipeline::simulate_run(&cfg, &d2).unwrap();
        let mut identical = true;
        for file in ["snapshots.csv", "fronts.csv", "track_meta.json", "resolved_config.json"] {
            let a = std::fs::read(d1.join(file)).unwrap();
            let b = std::fs::read(d2.join(file)).unwrap();
            if a != b {
                identical = false;
            }
        }
        pipeline::droots_run(&cfg, &d1).unwrap();
        pipeline::droots_run(&cfg, &d2).unwrap();
        let a = std::fs::read(d1.join("double_roots.csv")).unwrap();
        let b = std::fs::read(d2.join("double_roots.csv")).unwrap();
        identical &= a == b;
        gate.check("double runs byte-identical", identical, "simulate + droots outputs".into());
    }

    gate.finish();
}
