use frontlab::models::ReactionModel;
use frontlab::profiles::*;
fn main() {
    // Small instance: check J * e_k columns against FD of the residual.
    let m = ReactionModel::scalar_poly("kpp", vec![0.0, 1.0, -1.0]);
    let sm = eq(&m, vec![1.0]);
    let sp = eq(&m, vec![0.0]);
    let n_grid = 401;
    let l = 10.0;
    let opts = BvpOptions { l, n_grid, newton_max: 1, ..Default::default() };
    let init = tanh_connection(&sm.state, &sp.state, l, n_grid, 1.0, &[0.0]);
    // Use the debug hook.
    let report = frontlab::profiles::bvp_debug_jacobian_fd_check(&m, 2.0, &sm, &sp, &opts, &init);
    println!("max jacobian FD mismatch: {report:.3e}");
}
fn eq(m: &ReactionModel, s: Vec<f64>) -> frontlab::models::Equilibrium {
    let e = m.jacobian_eigenvalues(&s);
    frontlab::models::Equilibrium { state: s, jac_eigenvalues: e, stability: frontlab::models::Stability::Stable }
}
