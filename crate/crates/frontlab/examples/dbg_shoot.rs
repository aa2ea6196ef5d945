use frontlab::models::ReactionModel;
use frontlab::profiles::shoot_scalar_front;
fn main() {
    let m = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
    match shoot_scalar_front(&m, 0.0, 1.0, 20.0) {
        Ok(p) => println!("ok: target {} eta {}", p.state_plus.state[0], p.eta),
        Err(e) => println!("err: {e}"),
    }
    // Manual integration to see where the trajectory ends up.
    let f = |u: f64| u - u * u * u;
    let (mut u, mut w) = (1.0 - 1e-7, -1e-7 * 2.0f64.sqrt());
    let h = 1e-3;
    let mut xi = 0.0;
    while xi < 100.0 {
        let k1 = (w, -f(u));
        let k2 = (w + 0.5 * h * k1.1, -f(u + 0.5 * h * k1.0));
        let k3 = (w + 0.5 * h * k2.1, -f(u + 0.5 * h * k2.0));
        let k4 = (w + h * k3.1, -f(u + h * k3.0));
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        w += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        xi += h;
        if xi % 10.0 < h { println!("xi {:6.1} u {:+.6e} w {:+.6e} (u+1 = {:+.3e})", xi, u, w, u + 1.0); }
        if u.abs() > 3.0 { println!("escaped at xi {xi}"); break; }
    }
}
