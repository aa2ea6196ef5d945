use frontlab::evolve::*;
use frontlab::models::*;
use std::collections::BTreeMap;
fn main() {
    for mu in [0.005f64, 0.02, 0.08] {
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let model = build_preset("skew", &p).unwrap();
        let t_end = 3000.0;
        let x_lo = -(6.0 / mu.sqrt() + 150.0);
        let spec = RunSpec {
            x_lo, x_hi: 60.0, h: 0.1, dt: 0.005, t_end,
            frame_speed: 2.0, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 150.0,
        };
        let init = InitialData::Step { left: vec![1.0, 1.0] };
        let traj = run(&model, &init, &spec).unwrap();
        print!("mu {mu:.3}: sep(t) =");
        for snap in traj.snapshots.iter().skip(1) {
            if let Ok(d) = front_separation(snap, 1, 0.5, 0, 0.5) {
                print!(" {:.2}", -d);
            }
        }
        println!("  [pi/sqrt(mu) = {:.1}]", std::f64::consts::PI / mu.sqrt());
    }
}
