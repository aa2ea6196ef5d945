use frontlab::models::ReactionModel;
use frontlab::profiles::*;
fn main() {
    let m = ReactionModel::scalar_poly("kpp", vec![0.0, 1.0, -1.0]);
    let p = shoot_scalar_front(&m, 2.0, 1.0, 30.0).unwrap();
    println!("shoot: target {} eta {} a+ {} steep {:?}", p.state_plus.state[0], p.eta, p.a_plus, p.steepness);
    for j in (0..p.n_nodes()).step_by(120) {
        println!("  xi {:7.2} u {:+.6e}", p.xi(j), p.values[0][j]);
    }
    // BVP
    let sm = equilibrium_from_state_pub(&m, vec![1.0]);
    let sp = equilibrium_from_state_pub(&m, vec![0.0]);
    let opts = BvpOptions { l: 30.0, n_grid: 3001, ..Default::default() };
    let init = tanh_connection(&sm.state, &sp.state, opts.l, 3001, 1.0, &[0.0]);
    match solve_front_bvp(&m, SpeedMode::Fixed(2.0), &sm, &sp, &opts, &init) {
        Ok(p) => println!("bvp ok: eta {} steep {:?} res {:.2e}", p.eta, p.steepness, p.residual),
        Err(e) => println!("bvp err: {e}"),
    }
}
fn equilibrium_from_state_pub(m: &ReactionModel, s: Vec<f64>) -> frontlab::models::Equilibrium {
    let eigs = m.jacobian_eigenvalues(&s);
    frontlab::models::Equilibrium { state: s, jac_eigenvalues: eigs, stability: frontlab::models::Stability::Stable }
}
