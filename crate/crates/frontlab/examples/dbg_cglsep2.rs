use frontlab::evolve::*;
use frontlab::models::*;
use frontlab::spectra::critical_beta;
use std::collections::BTreeMap;
use std::time::Instant;
fn main() {
    let alpha = 0.05f64;
    let t0 = Instant::now();
    let (beta_c, mech) = critical_beta(alpha).unwrap();
    println!("beta_c({alpha}) = {beta_c:.6} ({mech:?}) [{:.1?}]", t0.elapsed());
    let c = 2.0 * (1.0 + alpha).sqrt();
    for dbeta in [0.01f64, 0.03, 0.1] {
        let beta = beta_c + dbeta;
        let mut p = BTreeMap::new();
        p.insert("alpha".to_string(), alpha);
        p.insert("beta".to_string(), beta);
        let model = build_preset("forced_cgl", &p).unwrap();
        let spec = RunSpec {
            x_lo: -250.0, x_hi: 75.0, h: 0.1, dt: 0.005, t_end: 2000.0,
            frame_speed: c, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: 100.0,
        };
        let init = InitialData::PhaseStep { ell: 2 };
        let traj = run(&model, &init, &spec).unwrap();
        print!("dbeta {dbeta:.3}: sep(t) =");
        for snap in traj.snapshots.iter().skip(1).step_by(2) {
            let xr = snap.rightmost_crossing(0, -0.1);
            let xi = snap.rightmost_crossing(1, 0.1);
            match (xr, xi) {
                (Some(a), Some(b)) => print!(" {:.2}", a - b),
                _ => print!(" ?"),
            }
        }
        println!();
    }
}
