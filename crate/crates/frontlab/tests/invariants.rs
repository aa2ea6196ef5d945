//! Cross-module invariants beyond the acceptance criteria: symmetry of the
//! skew fronts, the comparison-principle sandwich, selection robustness
//! under small kinetics perturbations, secondary invasion speeds, and sweep
//! plumbing.

use std::collections::BTreeMap;

use frontlab::dispersion::linear_spreading_speed;
use frontlab::evolve::{
    front_separation, run, track_front, wake_state, BoundaryKind, FieldState, InitialData,
    RunSpec, Stepper,
};
use frontlab::harness::{parse_config_str, pipeline, run_sweep};
use frontlab::models::{
    build_preset, equilibrium_at, find_equilibria, ModelKind, ReactionModel,
};
use frontlab::profiles::{
    crossing_position, measure_decay_component, shoot_scalar_front, solve_front_bvp,
    tanh_connection, verify_sub_super, BvpOptions, SpeedMode,
};

fn skew(mu: f64) -> ReactionModel {
    let mut p = BTreeMap::new();
    p.insert("mu".to_string(), mu);
    build_preset("skew", &p).unwrap()
}

fn skew_front(model: &ReactionModel, su: f64, sv: f64, mu: f64) -> frontlab::profiles::FrontProfile {
    let sm = equilibrium_at(model, vec![su, sv]);
    let sp = equilibrium_at(model, vec![0.0, 0.0]);
    let l = 40.0;
    let n_grid = 3201;
    let delta = std::f64::consts::PI / mu.sqrt();
    let init = tanh_connection(&sm.state, &sp.state, l, n_grid, 1.0, &[0.0, -delta]);
    let opts = BvpOptions { l, n_grid, ..Default::default() };
    solve_front_bvp(model, SpeedMode::Fixed(2.0), &sm, &sp, &opts, &init).unwrap()
}

#[test]
fn skew_secondary_front_monotone_bounded_and_steeper_than_u() {
    let mu = 0.1;
    let model = skew(mu);
    let profile = skew_front(&model, 1.0, 1.0, mu);
    let v = &profile.values[1];
    for w in v.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "v not monotone");
    }
    assert!(v.iter().all(|&x| x > -1e-9 && x < 1.0 + 1e-9), "v leaves (0, 1)");
    let (eta_v, _, _) = measure_decay_component(&profile, 1).unwrap();
    let (eta_u, _, _) = measure_decay_component(&profile, 0).unwrap();
    assert!(
        eta_v > eta_u + 0.2,
        "v must decay strictly faster than u: {eta_v} vs {eta_u}"
    );
}

#[test]
fn skew_reflection_symmetry_of_fronts() {
    // Solving from (-1, 1) equals the u-reflection of the (1, 1) front.
    let mu = 0.1;
    let model = skew(mu);
    let a = skew_front(&model, 1.0, 1.0, mu);
    let b = skew_front(&model, -1.0, 1.0, mu);
    let mut worst: f64 = 0.0;
    for j in 0..a.n_nodes() {
        worst = worst.max((a.values[0][j] + b.values[0][j]).abs());
        worst = worst.max((a.values[1][j] - b.values[1][j]).abs());
    }
    assert!(worst <= 1e-9, "reflection symmetry violated by {worst}");
}

#[test]
fn sub_super_solutions_sandwich_the_simulation() {
    // The v-component from step data stays between the comparison
    // functions built on the frozen u-front.
    let mu = 0.2;
    let epsilon = 0.1;
    let m_const = 1e9f64;
    let model = skew(mu);
    let cubic = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
    let u_front = shoot_scalar_front(&cubic, 2.0, 1.0, 60.0).unwrap();
    let report = verify_sub_super(&model, epsilon, m_const, &u_front).unwrap();
    assert!(report.sub_ok && report.super_ok, "{report:?}");

    // Comoving run seeded with the exact u-front and a v-step matching the
    // initial ordering sub <= v <= super.
    let x0 = report.x0;
    let h = 0.1;
    let x_lo = -60.0;
    let m_nodes = 1201;
    let mut values = vec![vec![0.0; m_nodes], vec![0.0; m_nodes]];
    for k in 0..m_nodes {
        let x = x_lo + h * k as f64;
        values[0][k] = u_front.sample(0, x);
        values[1][k] = if x <= x0 { 1.0 } else { 0.0 };
    }
    let mut state = FieldState {
        t: 0.0,
        frame_speed: 2.0,
        x_lo,
        h,
        values,
        bc: BoundaryKind::DirichletAtEquilibrium,
        bc_left: vec![1.0, 1.0],
        bc_right: vec![0.0, 0.0],
    };
    let dt = 0.005;
    let mut stepper = Stepper::new(&model, &state, dt).unwrap();

    // Sub-solution: the slower front phi(. ; 2 - eps) anchored at x0.
    let phi_profile = shoot_scalar_front(&cubic, 2.0 - epsilon, 1.0, 60.0).unwrap();
    let xi_z = crossing_position(&phi_profile, 0, 0.0).unwrap();
    let phi = |s: f64| -> f64 {
        if s >= x0 {
            0.0
        } else {
            phi_profile.sample(0, s - x0 + xi_z).max(0.0)
        }
    };
    let nu = -(2.0 + epsilon);
    let glue0 = m_const.ln() / (2.0 + epsilon);

    let t_end = 20.0;
    let steps = (t_end / dt).round() as usize;
    let mut worst_lower: f64 = 0.0;
    let mut worst_upper: f64 = 0.0;
    for s in 1..=steps {
        stepper.step(&mut state).unwrap();
        if s % 800 != 0 {
            continue;
        }
        let t = state.t;
        for k in 0..m_nodes {
            let x = state.x(k);
            if x < x_lo + 5.0 || x > 55.0 {
                continue;
            }
            let v = state.values[1][k];
            let lower = phi(x + epsilon * t);
            let upper = (m_const * (nu * (x - epsilon * t)).exp()).min(1.0);
            worst_lower = worst_lower.max(lower - v);
            worst_upper = worst_upper.max(v - upper);
        }
    }
    assert!(worst_lower <= 1e-2, "sub-solution exceeded the run by {worst_lower}");
    assert!(worst_upper <= 1e-2, "run exceeded the super-solution by {worst_upper}");
}

#[test]
fn selection_robust_under_small_kinetics_perturbation() {
    // A fixed C^2-small bump added to the balanced cubic changes neither
    // the fitted speed beyond 3% nor the wake state.
    use frontlab::models::terrace::{Bump, TerraceData};
    let base = vec![0.0, 1.0, 0.0, -1.0];
    let plain = ReactionModel::scalar_poly("balanced", base.clone());
    let perturbed = ReactionModel {
        name: "balanced_perturbed".into(),
        n_components: 1,
        diffusion: vec![1.0],
        params: BTreeMap::new(),
        kind: ModelKind::Terrace(TerraceData {
            base,
            boosts: Vec::new(),
            detunes: vec![Bump { lo: 0.3, hi: 0.7, amp: 0.01 }],
            levels: vec![0.0, 1.0],
        }),
    };
    let spec = RunSpec {
        x_lo: -80.0,
        x_hi: 320.0,
        h: 0.1,
        dt: 0.005,
        t_end: 120.0,
        frame_speed: 0.0,
        bc: BoundaryKind::Neumann,
        snapshot_every: 2.0,
    };
    let init = InitialData::Step { left: vec![1.0] };
    let speed_and_wake = |model: &ReactionModel| -> (f64, Vec<f64>) {
        let traj = run(model, &init, &spec).unwrap();
        let track = track_front(&traj, 0, 0.5).unwrap();
        let eqs = find_equilibria(model, &[(-2.0, 2.0)], 16).unwrap();
        let wake = wake_state(traj.last(), &track, 20.0, &eqs).unwrap();
        (track.fitted_speed, eqs[wake].state.clone())
    };
    let (s0, w0) = speed_and_wake(&plain);
    let (s1, w1) = speed_and_wake(&perturbed);
    assert!((s1 - s0).abs() <= 0.03 * s0, "speeds {s0} vs {s1}");
    assert!((w0[0] - w1[0]).abs() < 0.05, "wakes {w0:?} vs {w1:?}");
}

#[test]
fn secondary_invasion_matches_linear_prediction() {
    // One grid point of the secondary-sweep protocol: A_2 invades A_3 at
    // the linear spreading speed of the v-mode at A_3.
    let alpha = 0.05;
    let beta = 0.5;
    let mut p = BTreeMap::new();
    p.insert("alpha".to_string(), alpha);
    p.insert("beta".to_string(), beta);
    let model = build_preset("forced_cgl", &p).unwrap();
    let eqs = find_equilibria(&model, &[(-2.0, 2.0), (-2.0, 2.0)], 24).unwrap();
    let a2 = eqs
        .iter()
        .find(|e| frontlab::experiments::cgl_ring_index(e) == Some(2))
        .unwrap()
        .clone();
    let a3 = eqs
        .iter()
        .find(|e| frontlab::experiments::cgl_ring_index(e) == Some(3))
        .unwrap()
        .clone();
    let pred = linear_spreading_speed(&model, &a3).unwrap().c_lin;
    let spec = RunSpec {
        x_lo: -100.0,
        x_hi: pred * 150.0 + 150.0,
        h: 0.1,
        dt: 0.005,
        t_end: 150.0,
        frame_speed: 0.0,
        bc: BoundaryKind::Neumann,
        snapshot_every: 2.0,
    };
    let init = InitialData::TwoStates { left: a2.state.clone(), right: a3.state.clone() };
    let traj = run(&model, &init, &spec).unwrap();
    let track = track_front(&traj, 1, 0.5 * a2.state[1]).unwrap();
    let speed = frontlab::experiments::drift_corrected_speed(&track);
    assert!(
        (speed - pred).abs() <= 0.03 * pred,
        "secondary speed {speed} vs linear prediction {pred}"
    );
}

#[test]
fn fitted_speed_converges_with_window() {
    // |speed(T) - speed(2T)| decreases: consistent with o(t) drift.
    let model = build_preset("nagumo", &BTreeMap::new()).unwrap();
    let init = InitialData::Step { left: vec![1.0] };
    let speed_at = |t_end: f64| -> f64 {
        let spec = RunSpec {
            x_lo: -60.0,
            x_hi: 2.0 * t_end + 120.0,
            h: 0.1,
            dt: 0.005,
            t_end,
            frame_speed: 0.0,
            bc: BoundaryKind::Neumann,
            snapshot_every: 2.0,
        };
        let traj = run(&model, &init, &spec).unwrap();
        track_front(&traj, 0, 0.5).unwrap().fitted_speed
    };
    let e1 = (speed_at(40.0) - 2.0).abs();
    let e2 = (speed_at(80.0) - 2.0).abs();
    let e3 = (speed_at(160.0) - 2.0).abs();
    assert!(e2 < e1 && e3 < e2, "window convergence: {e1:.4e}, {e2:.4e}, {e3:.4e}");
}

#[test]
fn skew_separation_measured_consistently() {
    // front_separation of identical components and levels vanishes, and the
    // two-component separation has the v-front trailing.
    let model = skew(0.05);
    let spec = RunSpec {
        x_lo: -150.0,
        x_hi: 60.0,
        h: 0.1,
        dt: 0.005,
        t_end: 400.0,
        frame_speed: 2.0,
        bc: BoundaryKind::DirichletAtEquilibrium,
        snapshot_every: 50.0,
    };
    let init = InitialData::StaggeredStep { left: vec![1.0, 1.0], shifts: vec![0.0, -16.0] };
    let traj = run(&model, &init, &spec).unwrap();
    let last = traj.last();
    let zero = front_separation(last, 0, 0.5, 0, 0.5).unwrap();
    assert_eq!(zero, 0.0);
    let sep = front_separation(last, 1, 0.5, 0, 0.5).unwrap();
    assert!(sep > 5.0, "v-front must trail the u-front: separation {sep}");
}

#[test]
fn sweep_plumbing() {
    let dir = std::env::temp_dir().join("frontlab_sweep_test");
    let _ = std::fs::remove_dir_all(&dir);
    let cfg = parse_config_str(
        r#"{
            "model": {"preset": "nagumo", "params": {"a": -1.0}},
            "numerics": {"x_lo": -50.0, "x_hi": 100.0, "t_end": 20.0, "snapshot_every": 5.0},
            "sweep": {"axes": [
                {"path": "model.params.a", "values": [-1.0, -0.8]},
                {"path": "numerics.t_end", "values": [10.0, 15.0, 20.0]}
            ]},
            "parallelism": 2
        }"#,
    )
    .unwrap();
    run_sweep(&cfg, &dir).unwrap();
    let text = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 7, "header plus 2x3 grid rows");
    for k in 0..6 {
        assert!(dir.join(format!("run_{k:04}")).join("track_meta.json").exists());
    }

    // A one-point sweep reproduces the single run byte for byte.
    let single = std::env::temp_dir().join("frontlab_sweep_single");
    let _ = std::fs::remove_dir_all(&single);
    let cfg1 = parse_config_str(
        r#"{
            "model": {"preset": "nagumo", "params": {"a": -1.0}},
            "numerics": {"x_lo": -50.0, "x_hi": 100.0, "t_end": 20.0, "snapshot_every": 5.0},
            "sweep": {"axes": [{"path": "model.params.a", "values": [-1.0]}]}
        }"#,
    )
    .unwrap();
    run_sweep(&cfg1, &single).unwrap();
    pipeline::simulate_run(&cfg1, &single.join("direct")).unwrap();
    let a = std::fs::read(single.join("run_0000").join("snapshots.csv")).unwrap();
    let b = std::fs::read(single.join("direct").join("snapshots.csv")).unwrap();
    assert_eq!(a, b);
}
