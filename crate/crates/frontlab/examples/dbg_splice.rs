use frontlab::evolve::*;
use frontlab::models::*;
use std::collections::BTreeMap;
fn main() {
    let alpha = 0.02;
    let beta = 0.7;
    let mut p = BTreeMap::new();
    p.insert("alpha".to_string(), alpha);
    p.insert("beta".to_string(), beta);
    let model = build_preset("forced_cgl", &p).unwrap();
    let eqs = find_equilibria(&model, &[(-2.0, 2.0), (-2.0, 2.0)], 24).unwrap();
    let c = if std::env::var_os("SPLICE_FRAME2").is_some() { 2.0 } else { 2.0 * (1.0f64 + alpha).sqrt() };
    let t_splice = 370.0;
    let a0: Vec<f64> = eqs.iter().find(|e| e.state[0] > 1.0).unwrap().state.clone();
    println!("A_0 = ({:.4}, {:.4}); c = {c:.6}", a0[0], a0[1]);

    // Pre-splice reconnaissance: where is the front at t = 370?
    let spec = RunSpec {
        x_lo: -150.0, x_hi: 75.0, h: 0.1, dt: 0.005, t_end: t_splice,
        frame_speed: c, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 370.0,
    };
    let init = InitialData::PhaseStep { ell: 4 };
    let traj = run(&model, &init, &spec).unwrap();
    let pre = traj.last();
    for level in [-0.01, -0.1, -0.35, -0.7] {
        println!("  t=370: rightmost Re A = {level}: x = {:?}", pre.rightmost_crossing(0, level));
    }
    for x in [-6.0, -4.0, -3.0, -2.3, -1.82, -1.0, 0.0, 2.0] {
        println!("  t=370: A({x:+.2}) = ({:+.4}, {:+.4})", pre.sample(0, x), pre.sample(1, x));
    }

    // Full protocol for both cuts.
    for l0 in [-1.82f64, -2.3] {
        let spec = RunSpec {
            x_lo: -150.0, x_hi: 75.0, h: 0.1, dt: 0.005, t_end: 800.0,
            frame_speed: c, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 10.0,
        };
        let replacement = vec![1.0, 0.0];
        let mut done = false;
        let traj = run_with_callback(&model, &init, &spec, |state| {
            if !done && state.t >= t_splice - 1e-9 {
                splice(state, l0, &replacement);
                done = true;
            }
            Ok(())
        }).unwrap();
        let last = traj.last();
        // probe behind the leading edge: level on |A| small
        let front = last.rightmost_crossing(0, 0.05).or(last.rightmost_crossing(0, -0.05));
        let xf = front.unwrap_or(0.0);
        let probe: Vec<f64> = (0..2).map(|cc| last.sample(cc, xf - 25.0)).collect();
        let id = nearest_equilibrium(&eqs, &probe, 0.1).map(|(i, _)| i);
        println!("L0 = {l0}: front at {xf:.2}, probe ({:+.3}, {:+.3}) eq {:?}", probe[0], probe[1], id);
        // where does Re A change sign at the end?
        let sc = last.rightmost_crossing(0, 0.0);
        println!("  final rightmost sign change of Re A at {:?}", sc);
    }
}
