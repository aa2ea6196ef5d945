use frontlab::models::*;
use frontlab::profiles::*;
use std::collections::BTreeMap;
fn main() {
    let delta = 1e-3;
    let mu = 3.6f64;
    let mut p = BTreeMap::new();
    p.insert("mu".to_string(), mu);
    p.insert("delta".to_string(), delta);
    let model = build_preset("interface_sn", &p).unwrap();
    let l = 40.0;
    let n_grid = 2001;
    let cubic = ReactionModel::scalar_poly("cubic", vec![0.0, 1.0, 0.0, -1.0]);
    let sm = eq(&model, vec![1.0, 0.0]);
    let sp = eq(&model, vec![0.0, 0.0]);
    let shot = shoot_scalar_front(&cubic, 2.0, 1.0, l).unwrap();
    let u_init: Vec<f64> = (0..n_grid).map(|j| shot.sample(0, -l + 2.0 * l * j as f64 / (n_grid - 1) as f64)).collect();
    // Direct solves on a c-grid for both signs.
    for s in [1.0f64, -1.0] {
        print!("sign {s:+}: v-extreme(c) =");
        for c in [1.3f64, 1.5, 1.7, 1.9, 1.95, 1.99, 2.0, 2.01, 2.05, 2.2] {
            let v_init: Vec<f64> = u_init.iter().map(|&u| s * (mu * (u - u * u * u)).max(0.0).sqrt()).collect();
            let opts = BvpOptions { l, n_grid, ..Default::default() };
            match solve_front_bvp(&model, SpeedMode::Fixed(c), &sm, &sp, &opts, &[u_init.clone(), v_init]) {
                Ok(pr) => {
                    let vamp = pr.values[1].iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
                    print!(" {c}:{vamp:+.3}");
                }
                Err(_) => print!(" {c}:fail"),
            }
        }
        println!();
    }
}
fn eq(m: &ReactionModel, s: Vec<f64>) -> frontlab::models::Equilibrium {
    let e = m.jacobian_eigenvalues(&s);
    frontlab::models::Equilibrium { state: s, jac_eigenvalues: e, stability: frontlab::models::Stability::Saddle }
}
