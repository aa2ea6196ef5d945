use frontlab::evolve::*;
use frontlab::models::*;
use std::collections::BTreeMap;
use std::time::Instant;

fn fit_power_offset(mus: &[f64], seps: &[f64]) -> (f64, f64) {
    // Grid search over p, linear LLS for (A, B); returns (p_best, residual).
    let mut best = (0.0, f64::INFINITY);
    let mut p = -1.2;
    while p <= -0.1 {
        let rows: Vec<Vec<f64>> = mus.iter().map(|m| vec![m.powf(p), 1.0]).collect();
        if let Ok(beta) = frontlab::linalg::least_squares(&rows, seps) {
            let res: f64 = rows.iter().zip(seps).map(|(r, s)| (beta[0] * r[0] + beta[1] - s).powi(2)).sum();
            if res < best.1 { best = (p, res); }
        }
        p += 0.005;
    }
    best
}

fn main() {
    let t0 = Instant::now();
    let n_pts = 8;
    let (mu_lo, mu_hi) = (0.005f64, 0.08f64);
    let mut mus = Vec::new();
    let mut seps = Vec::new();
    for k in 0..n_pts {
        let mu = mu_lo * (mu_hi / mu_lo).powf(k as f64 / (n_pts - 1) as f64);
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let model = build_preset("skew", &p).unwrap();
        let t_end = 500.0 + 25.0 / mu.sqrt();
        let x_lo = -(6.0 / mu.sqrt() + 150.0);
        let spec = RunSpec {
            x_lo, x_hi: 60.0, h: 0.1, dt: 0.005, t_end,
            frame_speed: 2.0, bc: BoundaryKind::DirichletAtEquilibrium, snapshot_every: t_end / 30.0,
        };
        let delta0 = std::f64::consts::PI / mu.sqrt() + 3.0;
        let init = InitialData::StaggeredStep { left: vec![1.0, 1.0], shifts: vec![0.0, -delta0] };
        let traj = run(&model, &init, &spec).unwrap();
        // Aitken extrapolation from the last three snapshots.
        let snaps = &traj.snapshots;
        let k3 = snaps.len() - 1;
        let s = |i: usize| -> f64 { front_separation(&snaps[i], 1, 0.5, 0, 0.5).unwrap() };
        let (s1, s2, s3) = (s(k3 - 8), s(k3 - 4), s(k3));
        let d1 = s2 - s1;
        let d2 = s3 - s2;
        let sep = if d1.abs() > 1e-12 && (d1 - d2).abs() > 1e-12 && d2 / d1 > 0.0 && d2 / d1 < 0.95 {
            s3 + d2 * d2 / (d1 - d2)
        } else {
            s3
        };
        println!("mu {mu:.5}: raw {s3:.2} extrapolated {sep:.2} (T = {t_end:.0})");
        mus.push(mu);
        seps.push(sep);
    }
    let (p_best, res) = fit_power_offset(&mus, &seps);
    println!("offset-aware exponent: {p_best:.3} (residual {res:.2e}) elapsed {:.1?}", t0.elapsed());
}
