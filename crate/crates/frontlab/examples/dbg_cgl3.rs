use frontlab::evolve::*;
use frontlab::models::*;
use std::collections::BTreeMap;
use std::time::Instant;
fn main() {
    let alpha = 0.02;
    let beta = 0.5;
    let mut p = BTreeMap::new();
    p.insert("alpha".to_string(), alpha);
    p.insert("beta".to_string(), beta);
    let model = build_preset("forced_cgl", &p).unwrap();
    let eqs = find_equilibria(&model, &[(-2.0, 2.0), (-2.0, 2.0)], 24).unwrap();
    println!("equilibria:");
    for (i, e) in eqs.iter().enumerate() {
        println!("  {i}: ({:+.4}, {:+.4}) {:?}", e.state[0], e.state[1], e.stability);
    }
    let c = 2.0 * (1.0f64 + alpha).sqrt();
    for ell in [0u32, 2, 4] {
        let t0 = Instant::now();
        let spec = RunSpec {
            x_lo: -250.0, x_hi: 100.0, h: 0.1, dt: 0.005, t_end: 600.0,
            frame_speed: c, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 10.0,
        };
        let init = InitialData::PhaseStep { ell };
        let traj = run(&model, &init, &spec).unwrap();
        // track the leading (real) front: level 0.1*sign of the real wake
        let level = if ell == 0 { 0.3 } else { -0.3 };
        let track = track_front(&traj, 0, level).unwrap();
        let last = traj.last();
        // probe at several offsets
        for off in [20.0, 40.0, 60.0, 90.0] {
            let w = wake_state(last, &track, off, &eqs);
            let xf = track.positions.last().unwrap();
            let st: Vec<f64> = (0..2).map(|c| last.sample(c, xf - off)).collect();
            println!("ell {ell}: offset {off}: state ({:+.3},{:+.3}) -> eq {:?}", st[0], st[1], w);
        }
        println!("  front pos final {:.2}, speed {:.4}, sublinear {}, elapsed {:.1?}", track.positions.last().unwrap(), track.fitted_speed, track.sublinear, t0.elapsed());
    }
}
