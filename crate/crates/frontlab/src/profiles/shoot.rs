//! Scalar phase-plane shooting.
//!
//! The traveling-wave equation `d u'' + c u' + f(u) = 0` is integrated as
//! `u' = w`, `w' = -(c w + f(u)) / d` from the one-dimensional unstable
//! eigendirection of the saddle `(from_state, 0)`, with an adaptive embedded
//! Runge-Kutta pair. The trajectory is re-gridded to a uniform grid centered
//! at the mid-level crossing, and the tail is classified by the decay fit.

use crate::error::{Error, Result};
use crate::models::{find_equilibria, ReactionModel};
use crate::profiles::{equilibrium_from_state, fit_decay_on, FrontProfile, Steepness};

const RK_TOL: f64 = 1e-11;
const MAX_STEP: f64 = 0.05;
const START_OFFSET: f64 = 1e-7;

/// One accepted integrator node: position, state, derivative.
struct Node {
    xi: f64,
    u: f64,
    w: f64,
    du: f64,
    dw: f64,
}

/// Shoot the unstable manifold of `(from_state, 0)` in the phase plane and
/// return the front profile re-gridded to `[-L, L]`, centered at the
/// mid-level crossing between `from_state` and the reached equilibrium.
pub fn shoot_scalar_front(
    model: &ReactionModel,
    c: f64,
    from_state: f64,
    l: f64,
) -> Result<FrontProfile> {
    if model.n_components != 1 {
        return Err(Error::Contract("shoot_scalar_front: scalar models only".into()));
    }
    let f = |u: f64| -> f64 {
        let mut out = [0.0];
        model.reaction(&[u], &mut out);
        out[0]
    };
    let fp = |u: f64| -> f64 {
        let mut out = [0.0];
        model.jacobian(&[u], &mut out);
        out[0]
    };
    let d = model.diffusion[0];
    let fprime = fp(from_state);
    if fprime >= 0.0 {
        return Err(Error::Contract(
            "shoot_scalar_front: from_state must satisfy f'(from_state) < 0".into(),
        ));
    }

    // Catalogue of equilibria for landing detection.
    let span_guess = 2.0 * from_state.abs().max(1.0);
    let eqs = find_equilibria(model, &[(-span_guess, span_guess)], 64)?;
    let levels_max = eqs.iter().map(|e| e.state[0].abs()).fold(from_state.abs(), f64::max);

    // Descending start along the unstable eigendirection.
    let s_u = 0.5 * (-c + (c * c - 4.0 * d * fprime).sqrt()) / d;
    let scale = from_state.abs().max(1.0);
    let delta = START_OFFSET * scale;
    let mut u = from_state - delta;
    let mut w = -delta * s_u;
    let mut xi = 0.0;

    let rhs = |u: f64, w: f64| -> (f64, f64) { (w, -(c * w + f(u)) / d) };

    let mut nodes: Vec<Node> = Vec::with_capacity(4096);
    {
        let (du, dw) = rhs(u, w);
        nodes.push(Node { xi, u, w, du, dw });
    }

    let span_max = 10.0 * l + 200.0;
    let mut h: f64 = 1e-4;

    // Closest approach to any equilibrium other than the start: the
    // trajectory eventually bounces off a saddle by amplified integration
    // error, so the connection is the trajectory truncated at the closest
    // approach.
    let mut best: Option<(f64, usize, f64)> = None; // (dist, node idx, eq state)
    let mut left_start = false;
    let mut reached: Option<(usize, f64)> = None;

    while xi < span_max {
        h = h.min(MAX_STEP).min(span_max - xi + 1e-12);
        let (u1, w1, err) = dopri_step(&rhs, u, w, h);
        let tol = RK_TOL * (1.0 + u.abs().max(w.abs()));
        if err > tol {
            h *= 0.9 * (tol / err).powf(0.2).clamp(0.2, 1.0);
            continue;
        }
        xi += h;
        u = u1;
        w = w1;
        let (du, dw) = rhs(u, w);
        nodes.push(Node { xi, u, w, du, dw });
        if err > 0.0 {
            h *= 0.9 * (tol / err).powf(0.2).clamp(0.2, 5.0);
        } else {
            h *= 2.0;
        }

        if (u - from_state).abs() > 0.2 * scale {
            left_start = true;
        }
        let dist_of = |e: f64| (u - e).abs().max(w.abs());
        let nearest = eqs
            .iter()
            .map(|e| e.state[0])
            .filter(|&e| left_start || (e - from_state).abs() > 1e-8)
            .map(|e| (dist_of(e), e))
            .fold(None, |acc: Option<(f64, f64)>, v| match acc {
                Some(a) if a.0 <= v.0 => Some(a),
                _ => Some(v),
            });
        if let Some((dist, eq)) = nearest {
            let improved = best.map(|(bd, _, _)| dist < bd).unwrap_or(true);
            if improved {
                best = Some((dist, nodes.len() - 1, eq));
            }
            if dist < 1e-13 * scale {
                reached = Some((nodes.len() - 1, eq));
                break;
            }
            if let Some((bd, bi, beq)) = best {
                // Bounced off a saddle: keep the closest approach.
                if bd < 1e-5 * scale && dist > 100.0 * bd {
                    reached = Some((bi, beq));
                    break;
                }
            }
        }
        // Escape: left the invariant region entirely.
        if u.abs() > 2.0 * levels_max {
            match best {
                Some((bd, bi, beq)) if bd < 1e-5 * scale => {
                    reached = Some((bi, beq));
                    break;
                }
                _ => {
                    return Err(Error::NoConvergence(format!(
                        "shoot_scalar_front: trajectory escaped (|u| > {})",
                        2.0 * levels_max
                    )))
                }
            }
        }
    }

    let (cut_idx, target) = match reached {
        Some(r) => r,
        None => match best {
            Some((bd, bi, beq)) if bd < 1e-5 * scale => (bi, beq),
            _ => {
                return Err(Error::NoConvergence(
                    "shoot_scalar_front: no connection within the integration span".into(),
                ))
            }
        },
    };
    nodes.truncate(cut_idx + 1);

    // Mid-level crossing for the translation normalization.
    let mid = 0.5 * (from_state + target);
    let descending = from_state > target;
    let mut xi_mid = None;
    for pair in nodes.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if (a.u - mid) * (b.u - mid) <= 0.0 && a.u != b.u {
            // Refine on the cubic Hermite interpolant.
            let mut lo = a.xi;
            let mut hi = b.xi;
            for _ in 0..80 {
                let m = 0.5 * (lo + hi);
                let um = hermite_eval(a, b, m).0;
                if ((um - mid) > 0.0) == descending {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            xi_mid = Some(0.5 * (lo + hi));
            break;
        }
    }
    let xi_mid = xi_mid.ok_or_else(|| {
        Error::NoConvergence("shoot_scalar_front: mid-level never crossed".into())
    })?;

    // Uniform grid on [-L, L] around the crossing; pad with from_state on
    // the left where the trajectory had not started yet.
    let n_grid = (40.0 * l).ceil() as usize + 1;
    let h_grid = 2.0 * l / (n_grid - 1) as f64;
    let mut values = vec![0.0; n_grid];
    let mut node_idx = 0usize;
    for (j, v) in values.iter_mut().enumerate() {
        let xi_abs = xi_mid - l + h_grid * j as f64;
        if xi_abs <= nodes[0].xi {
            *v = from_state - (from_state - nodes[0].u) * ((xi_abs - nodes[0].xi) * s_u).exp();
            continue;
        }
        if xi_abs >= nodes[nodes.len() - 1].xi {
            *v = target;
            continue;
        }
        while nodes[node_idx + 1].xi < xi_abs {
            node_idx += 1;
        }
        *v = hermite_eval(&nodes[node_idx], &nodes[node_idx + 1], xi_abs).0;
    }

    let state_minus = equilibrium_from_state(model, vec![from_state]);
    let state_plus = equilibrium_from_state(model, vec![target]);
    let mut profile = FrontProfile {
        xi_min: -l,
        h: h_grid,
        values: vec![values],
        speed: c,
        state_minus,
        state_plus,
        eta: 0.0,
        a_plus: 0.0,
        steepness: Steepness::Indeterminate,
        residual: RK_TOL,
    };
    let fitted = match crate::profiles::double_root_tail_hint(model, &[target], c) {
        Some(eta0) => crate::profiles::fit_decay_hinted(&profile, None, eta0),
        None => fit_decay_on(&profile, None),
    };
    match fitted {
        Ok((eta, a_plus, steep)) => {
            profile.eta = eta;
            profile.a_plus = a_plus;
            profile.steepness = steep;
        }
        Err(_) => {
            profile.steepness = Steepness::Indeterminate;
        }
    }
    Ok(profile)
}

/// Dormand-Prince 5(4) step; returns (u, w, error estimate).
fn dopri_step(
    rhs: &impl Fn(f64, f64) -> (f64, f64),
    u: f64,
    w: f64,
    h: f64,
) -> (f64, f64, f64) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let k1 = rhs(u, w);
    let k2 = rhs(u + h * A21 * k1.0, w + h * A21 * k1.1);
    let k3 = rhs(u + h * (A31 * k1.0 + A32 * k2.0), w + h * (A31 * k1.1 + A32 * k2.1));
    let k4 = rhs(
        u + h * (A41 * k1.0 + A42 * k2.0 + A43 * k3.0),
        w + h * (A41 * k1.1 + A42 * k2.1 + A43 * k3.1),
    );
    let k5 = rhs(
        u + h * (A51 * k1.0 + A52 * k2.0 + A53 * k3.0 + A54 * k4.0),
        w + h * (A51 * k1.1 + A52 * k2.1 + A53 * k3.1 + A54 * k4.1),
    );
    let k6 = rhs(
        u + h * (A61 * k1.0 + A62 * k2.0 + A63 * k3.0 + A64 * k4.0 + A65 * k5.0),
        w + h * (A61 * k1.1 + A62 * k2.1 + A63 * k3.1 + A64 * k4.1 + A65 * k5.1),
    );
    let u1 = u + h * (B1 * k1.0 + B3 * k3.0 + B4 * k4.0 + B5 * k5.0 + B6 * k6.0);
    let w1 = w + h * (B1 * k1.1 + B3 * k3.1 + B4 * k4.1 + B5 * k5.1 + B6 * k6.1);
    let k7 = rhs(u1, w1);
    let eu = h * (E1 * k1.0 + E3 * k3.0 + E4 * k4.0 + E5 * k5.0 + E6 * k6.0 + E7 * k7.0);
    let ew = h * (E1 * k1.1 + E3 * k3.1 + E4 * k4.1 + E5 * k5.1 + E6 * k6.1 + E7 * k7.1);
    (u1, w1, (eu * eu + ew * ew).sqrt())
}

/// Cubic Hermite interpolation between two integrator nodes.
fn hermite_eval(a: &Node, b: &Node, xi: f64) -> (f64, f64) {
    let h = b.xi - a.xi;
    let t = (xi - a.xi) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    (
        h00 * a.u + h10 * h * a.du + h01 * b.u + h11 * h * b.du,
        h00 * a.w + h10 * h * a.dw + h01 * b.w + h11 * h * b.dw,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Steepness;

    #[test]
    fn balanced_cubic_kink_matches_tanh() {
        // u'' + u - u^3 = 0 has the kink u = tanh(xi / sqrt(2)) from 1 to -1.
        let m = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
        let p = shoot_scalar_front(&m, 0.0, 1.0, 20.0).unwrap();
        assert!((p.state_plus.state[0] + 1.0).abs() < 1e-9);
        let mut worst: f64 = 0.0;
        for j in 0..p.n_nodes() {
            let xi = p.xi(j);
            // The shot runs from +1 down to -1; tanh(x/sqrt 2) runs up.
            let exact = -(xi / 2.0f64.sqrt()).tanh();
            worst = worst.max((p.values[0][j] - exact).abs());
        }
        assert!(worst <= 1e-6, "kink error {worst}");
    }

    #[test]
    fn kpp_front_is_generic_and_monotone() {
        // f = u(1-u) at c = 2: the critical front decays like xi e^{-xi}.
        let m = ReactionModel::scalar_poly("kpp", vec![0.0, 1.0, -1.0]);
        let p = shoot_scalar_front(&m, 2.0, 1.0, 30.0).unwrap();
        assert!(p.state_plus.state[0].abs() < 1e-9);
        assert_eq!(p.steepness, Steepness::Generic);
        assert!((p.eta - 1.0).abs() < 0.05, "eta = {}", p.eta);
        for pair in p.values[0].windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "front not monotone");
        }
    }

    #[test]
    fn escape_is_reported() {
        // f = u + u^2 has no equilibrium below 0 to land on when shooting
        // from the saddle at -1 toward -inf in a slow frame.
        let m = ReactionModel::scalar_poly("runaway", vec![0.0, 1.0, 1.0]);
        let r = shoot_scalar_front(&m, 0.5, -1.0, 10.0);
        assert!(r.is_err());
    }

    use crate::models::ReactionModel;
}
