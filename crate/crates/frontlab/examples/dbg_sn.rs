use frontlab::models::*;
use frontlab::profiles::*;
use std::collections::BTreeMap;
use std::time::Instant;
fn main() {
    let delta = 1e-3;
    for mu in [3.6f64, 3.8] {
        let t0 = Instant::now();
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        p.insert("delta".to_string(), delta);
        let model = build_preset("interface_sn", &p).unwrap();
        let l = 40.0;
        let n_grid = 2001;
        let c0 = 1.3;
        // u-front init from shooting the scalar cubic at c0.
        let cubic = ReactionModel::scalar_poly("cubic", vec![0.0, 1.0, 0.0, -1.0]);
        let sm = eq(&model, vec![1.0, 0.0]);
        let sp = eq(&model, vec![0.0, 0.0]);
        let u_init: Vec<f64> = {
            let shot = shoot_scalar_front(&cubic, 2.0, 1.0, l).unwrap();
            (0..n_grid).map(|j| shot.sample(0, -l + 2.0 * l * j as f64 / (n_grid - 1) as f64)).collect()
        };
        for s in [1.0f64, -1.0] {
            let v_init: Vec<f64> = u_init.iter().map(|&u| s * (mu * (u - u * u * u)).max(0.0).sqrt()).collect();
            let opts = BvpOptions { l, n_grid, ..Default::default() };
            match solve_front_bvp(&model, SpeedMode::Fixed(c0), &sm, &sp, &opts, &[u_init.clone(), v_init]) {
                Ok(pr) => {
                    let vamp = pr.values[1].iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
                    println!("mu {mu} sign {s:+}: converged at c0, v-extreme {vamp:+.4}");
                    // continue in c upward
                    let branch = continue_branch(
                        ContinuationParameter::FrameSpeed(&model),
                        "c", &pr, (c0, 2.6),
                        &ContinuationOptions { step: 0.05, max_steps: 300, bvp: opts.clone(), points_past_fold: 4 },
                    );
                    match branch {
                        Ok(b) => {
                            let last = b.points.last().unwrap();
                            println!("   branch: {} points, last c {:.4}, fold {:?}, terminated {}", b.points.len(), last.param, b.fold, b.terminated);
                        }
                        Err(e) => println!("   branch err: {e}"),
                    }
                }
                Err(e) => println!("mu {mu} sign {s:+}: {e}"),
            }
        }
        println!("  elapsed {:.1?}", t0.elapsed());
    }
}
fn eq(m: &ReactionModel, s: Vec<f64>) -> frontlab::models::Equilibrium {
    let e = m.jacobian_eigenvalues(&s);
    frontlab::models::Equilibrium { state: s, jac_eigenvalues: e, stability: frontlab::models::Stability::Saddle }
}
