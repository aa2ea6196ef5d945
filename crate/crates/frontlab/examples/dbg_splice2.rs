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
    let c: f64 = std::env::var("SPLICE_C").map(|v| v.parse().unwrap()).unwrap_or(2.0);
    let h: f64 = std::env::var("SPLICE_H").map(|v| v.parse().unwrap()).unwrap_or(0.1);
    let dt: f64 = std::env::var("SPLICE_DT").map(|v| v.parse().unwrap()).unwrap_or(0.005);
    let t_splice = 370.0;
    let init = InitialData::PhaseStep { ell: 4 };
    for l0 in [-3.0f64, -2.5, -2.3, -2.1, -1.82, -1.5, -1.0, 0.0, 1.0, 2.0] {
        let spec = RunSpec {
            x_lo: -150.0, x_hi: 75.0, h, dt, t_end: 700.0,
            frame_speed: c, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 25.0,
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
        let front = last.rightmost_crossing(0, 0.05).or(last.rightmost_crossing(0, -0.05));
        let xf = front.unwrap_or(0.0);
        let probe: Vec<f64> = (0..2).map(|cc| last.sample(cc, xf - 25.0)).collect();
        let flipped = probe[0] > 0.5;
        println!("L0 = {l0:+.2}: wake ({:+.3}, {:+.3}) -> {}", probe[0], probe[1], if flipped { "FLIP" } else { "recover" });
    }
}
