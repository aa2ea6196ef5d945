use frontlab::models::ReactionModel;
use frontlab::profiles::*;
fn main() {
    let m = ReactionModel::scalar_poly("kpp", vec![0.0, 1.0, -1.0]);
    let sm = eq(&m, vec![1.0]);
    let sp = eq(&m, vec![0.0]);
    let opts = BvpOptions { l: 30.0, n_grid: 3001, ..Default::default() };
    let init = tanh_connection(&sm.state, &sp.state, opts.l, 3001, 1.0, &[0.0]);
    for c in [2.5, 2.2, 2.05, 2.0] {
        match solve_front_bvp(&m, SpeedMode::Fixed(c), &sm, &sp, &opts, &init) {
            Ok(p) => println!("fixed c={c}: ok eta {:.4} p-class {:?} res {:.2e}", p.eta, p.steepness, p.residual),
            Err(e) => println!("fixed c={c}: err {e}"),
        }
    }
    match solve_front_bvp(&m, SpeedMode::Free(2.1), &sm, &sp, &opts, &init) {
        Ok(p) => println!("free c: ok c={:.8} eta {:.4}", p.speed, p.eta),
        Err(e) => println!("free c: err {e}"),
    }
}
fn eq(m: &ReactionModel, s: Vec<f64>) -> frontlab::models::Equilibrium {
    let e = m.jacobian_eigenvalues(&s);
    frontlab::models::Equilibrium { state: s, jac_eigenvalues: e, stability: frontlab::models::Stability::Stable }
}
