//! Numerical sign checks for the comparison-principle construction around
//! the skew-coupled secondary front.
//!
//! The v-equation in the frame of the primary front, `v_t = v_xx + 2 v_x +
//! (2 u_*^2 - 1 + mu)(v - v^3)`, admits a sub-solution built from the slower
//! front `phi(. ; 2 - eps)` of `0 = phi'' + c phi' + phi - phi^3` shifted
//! leftward, and a super-solution gluing the plateau 1 to the exponential
//! envelope `M e^{nu (x - eps t)}` with `nu = -(2 + eps)`. The residual
//! `N(v) = v_t - v_xx - 2 v_x - (2 u_*^2 - 1 + mu)(v - v^3)` is evaluated by
//! finite differences on an (x, t) grid: `N(sub) <= 0` and `N(super) >= 0`
//! up to discretization error on the respective validity regions.

use crate::error::{Error, Result};
use crate::models::{ModelKind, ReactionModel};
use crate::profiles::{crossing_position, shoot_scalar_front, FrontProfile};

#[derive(Debug, Clone)]
pub struct SubSuperReport {
    /// Anchor x0 with 2 u_*(x)^2 - 1 + mu > 1 + eps for x < x0.
    pub x0: f64,
    /// Onset of 1 - mu - 2 u_*^2 > 0 (leading-edge validity of the
    /// exponential branch).
    pub x_star: f64,
    /// max N over the sub-solution region (negative means clean sign).
    pub sub_max: f64,
    /// min N over the exponential super-solution region (positive is clean).
    pub super_min: f64,
    pub sub_ok: bool,
    pub super_ok: bool,
}

const FD_TOL: f64 = 5e-3;

/// Verify the sub/super-solution sign conditions for the skew system at the
/// given primary front profile (scalar u-front at speed 2, u(0) = 1/2).
pub fn verify_sub_super(
    model: &ReactionModel,
    epsilon: f64,
    m_const: f64,
    profile_u: &FrontProfile,
) -> Result<SubSuperReport> {
    let mu = match &model.kind {
        ModelKind::Skew { mu } => *mu,
        _ => {
            return Err(Error::Contract(
                "verify_sub_super: expects the skew-coupled preset".into(),
            ))
        }
    };
    if epsilon <= 0.0 || epsilon >= mu {
        return Err(Error::Contract(format!(
            "verify_sub_super: need 0 < eps < mu, got eps = {epsilon}, mu = {mu}"
        )));
    }
    if mu >= 1.0 {
        return Err(Error::Contract(
            "verify_sub_super: the super-solution construction needs mu < 1".into(),
        ));
    }

    let q = |x: f64| -> f64 {
        let u = profile_u.sample(0, x);
        2.0 * u * u - 1.0 + mu
    };

    // x0: the largest grid abscissa with q > 1 + eps to its left.
    let mut x0 = None;
    for j in (0..profile_u.n_nodes()).rev() {
        if q(profile_u.xi(j)) > 1.0 + epsilon {
            x0 = Some(profile_u.xi(j));
            break;
        }
    }
    let x0 = x0.ok_or_else(|| {
        Error::AnalysisFailure("verify_sub_super: q never exceeds 1 + eps".into())
    })? - 1.0;

    // x*: beyond it 1 - mu - 2 u_*^2 > 0.
    let mut x_star = profile_u.xi_max();
    for j in 0..profile_u.n_nodes() {
        if 1.0 - mu - 2.0 * profile_u.sample(0, profile_u.xi(j)).powi(2) > 0.0 {
            x_star = profile_u.xi(j);
            break;
        }
    }
    let glue0 = m_const.ln() / (2.0 + epsilon);
    if x_star >= glue0 {
        return Err(Error::Contract(format!(
            "verify_sub_super: M too small, ln(M)/(2+eps) = {glue0:.3} <= x* = {x_star:.3}"
        )));
    }

    // The slower front phi(.; 2 - eps), anchored so phi(x0) = 0 with phi > 0
    // to the left (its first downward zero crossing sits at x0).
    let cubic = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
    let phi_profile = shoot_scalar_front(&cubic, 2.0 - epsilon, 1.0, profile_u.half_width())?;
    let xi_z = crossing_position(&phi_profile, 0, 0.0).ok_or_else(|| {
        Error::AnalysisFailure("verify_sub_super: phi has no zero crossing".into())
    })?;
    let phi = |s: f64| -> f64 {
        if s >= x0 {
            0.0
        } else {
            phi_profile.sample(0, s - x0 + xi_z).max(0.0)
        }
    };

    let nu = -(2.0 + epsilon);
    let v_super = |x: f64, t: f64| -> f64 { (m_const * (nu * (x - epsilon * t)).exp()).min(1.0) };
    let v_sub = |x: f64, t: f64| -> f64 { phi(x + epsilon * t) };

    let residual = |v: &dyn Fn(f64, f64) -> f64, x: f64, t: f64, dx: f64, dt: f64| -> f64 {
        let vt = (v(x, t + dt) - v(x, t - dt)) / (2.0 * dt);
        let vxx = (v(x - dx, t) - 2.0 * v(x, t) + v(x + dx, t)) / (dx * dx);
        let vx = (v(x + dx, t) - v(x - dx, t)) / (2.0 * dx);
        let vv = v(x, t);
        vt - vxx - 2.0 * vx - q(x) * (vv - vv * vv * vv)
    };

    // Stencil steps aligned to the phi grid: the sub-solution is built from
    // a linearly interpolated profile, so dx and eps*dt must be exact grid
    // multiples to keep the interpolation bias smooth under differencing.
    let dx = phi_profile.h;
    let dt = phi_profile.h / epsilon;
    let t_max = 20.0 * dt;
    let x_lo = profile_u.xi_min + 2.0;
    let x_hi = profile_u.xi_max() - 2.0;

    let mut sub_max = f64::NEG_INFINITY;
    let mut super_min = f64::INFINITY;
    let nx = ((x_hi - x_lo) / dx).floor() as usize;
    let nt = 20;
    for it in 1..=nt {
        let t = t_max * it as f64 / nt as f64;
        for ix in 0..=nx {
            let x = x_lo + dx * ix as f64;
            // Sub-solution region, away from the seam x + eps t = x0.
            if x + epsilon * t < x0 - 4.0 * dx && phi(x + epsilon * t) > 1e-8 {
                sub_max = sub_max.max(residual(&v_sub, x, t, dx, dt));
            }
            // Exponential super-solution region, beyond the glue line.
            let glue = epsilon * t + glue0;
            if x > glue + 2.0 * dx + 2.0 * epsilon * dt {
                super_min = super_min.min(residual(&v_super, x, t, dx, dt));
            }
        }
    }

    Ok(SubSuperReport {
        x0,
        x_star,
        sub_max,
        super_min,
        sub_ok: sub_max <= FD_TOL,
        super_ok: super_min >= -FD_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_preset;
    use std::collections::BTreeMap;

    fn skew_front(mu: f64) -> (ReactionModel, FrontProfile) {
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let model = build_preset("skew", &p).unwrap();
        // The u-equation is the balanced cubic, independent of v.
        let cubic = ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0]);
        let u = shoot_scalar_front(&cubic, 2.0, 1.0, 40.0).unwrap();
        (model, u)
    }

    #[test]
    fn sub_and_super_solutions_have_clean_signs() {
        let (model, u) = skew_front(0.2);
        let report = verify_sub_super(&model, 0.1, 1e9, &u).unwrap();
        assert!(report.sub_ok, "sub violation {US:.3e}", US = report.sub_max);
        assert!(report.super_ok, "super violation {:.3e}", report.super_min);
        // The sub-solution residual is strictly negative in the bulk.
        assert!(report.sub_max <= 0.01);
    }

    #[test]
    fn epsilon_out_of_range_rejected() {
        let (model, u) = skew_front(0.2);
        assert!(verify_sub_super(&model, 0.3, 1e9, &u).is_err());
        assert!(verify_sub_super(&model, -0.1, 1e9, &u).is_err());
    }

    #[test]
    fn small_m_violates_precondition() {
        let (model, u) = skew_front(0.2);
        // ln(M)/(2+eps) must exceed x*; M = 1 puts the glue at 0.
        assert!(verify_sub_super(&model, 0.1, 0.01, &u).is_err());
    }
}
