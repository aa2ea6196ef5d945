use frontlab::models::*;
use frontlab::profiles::*;
use std::collections::BTreeMap;
fn main() {
    let mu = 0.1;
    let mut p = BTreeMap::new();
    p.insert("mu".to_string(), mu);
    let model = build_preset("skew", &p).unwrap();
    let eqs = find_equilibria(&model, &[(-1.5, 1.5), (-1.5, 1.5)], 12).unwrap();
    let sm = eqs.iter().find(|e| (e.state[0] - 1.0).abs() < 1e-9 && (e.state[1] - 1.0).abs() < 1e-9).unwrap();
    let sp = eqs.iter().find(|e| e.state[0].abs() < 1e-9 && e.state[1].abs() < 1e-9).unwrap();
    let l = 40.0;
    let n_grid = 4001;
    // v interface trails the u interface by roughly pi/sqrt(mu).
    let delta = std::f64::consts::PI / mu.sqrt();
    let init = tanh_connection(&sm.state, &sp.state, l, n_grid, 1.0, &[0.0, -delta]);
    let opts = BvpOptions { l, n_grid, ..Default::default() };
    match solve_front_bvp(&model, SpeedMode::Fixed(2.0), sm, sp, &opts, &init) {
        Ok(pr) => {
            println!("converged: res {:.2e} eta(norm) {:.4} steep {:?} a+ {:.4}", pr.residual, pr.eta, pr.steepness, pr.a_plus);
            // v-component decay
            match measure_decay_component(&pr, 1) {
                Ok((eta_v, a, st)) => println!("v-decay: eta {eta_v:.5} a {a:.3e} {st:?} (1+sqrt(mu) = {:.5}, 1+sqrt(2-mu) = {:.5})", 1.0 + mu.sqrt(), 1.0 + (2.0f64 - mu).sqrt()),
                Err(e) => println!("v-decay err: {e}"),
            }
            match measure_decay_component(&pr, 0) {
                Ok((eta_u, _, st)) => println!("u-decay: eta {eta_u:.5} {st:?}"),
                Err(e) => println!("u-decay err: {e}"),
            }
            // Monotonicity of v and 0 < v < 1:
            let v = &pr.values[1];
            let mono = v.windows(2).all(|w| w[1] <= w[0] + 1e-9);
            let bounds = v.iter().all(|&x| x > -1e-9 && x < 1.0 + 1e-9);
            println!("v monotone: {mono}, 0<v<1: {bounds}");
            // print v profile at a few points
            for j in (0..pr.n_nodes()).step_by(250) {
                println!("  xi {:7.2}  u {:+.4e}  v {:+.4e}", pr.xi(j), pr.values[0][j], pr.values[1][j]);
            }
        }
        Err(e) => println!("four-front BVP failed: {e}"),
    }
}
