use frontlab::evolve::*;
use frontlab::models::*;
use frontlab::linalg::fit_line;
use std::collections::BTreeMap;
use std::time::Instant;
fn main() {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for mu in [0.005, 0.00889, 0.0158, 0.0281, 0.05, 0.08] {
        let t0 = Instant::now();
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let model = build_preset("skew", &p).unwrap();
        let t_end = 200.0 + 30.0 / (mu as f64).sqrt();
        let x_lo = -(3.5 / (mu as f64).sqrt() + 120.0);
        let spec = RunSpec {
            x_lo, x_hi: 60.0, h: 0.1, dt: 0.005, t_end,
            frame_speed: 2.0, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: t_end / 40.0,
        };
        let init = InitialData::Step { left: vec![1.0, 1.0] };
        let traj = run(&model, &init, &spec).unwrap();
        // separation at the last few snapshots
        let mut seps = Vec::new();
        for snap in traj.snapshots.iter().rev().take(5) {
            if let Ok(d) = front_separation(snap, 1, 0.5, 0, 0.5) {
                seps.push(d);
            }
        }
        let sep = seps.iter().sum::<f64>() / seps.len() as f64;
        let var = seps.iter().map(|s| (s - sep).abs()).fold(0.0, f64::max);
        println!("mu {mu:.5}: sep {sep:.3} (spread {var:.3}) T {t_end:.0} [{:.1?}]", t0.elapsed());
        lx.push((mu as f64).ln());
        ly.push(sep.ln());
    }
    let (slope, _) = fit_line(&lx, &ly);
    println!("power-law exponent: {slope:.4} (expect -0.5 +- 0.1)");
}
