//! Pseudo-arclength continuation of front BVP solutions with fold detection.

use crate::error::{Error, Result};
use crate::linalg::solve_bordered;
use crate::models::ReactionModel;
use crate::profiles::bvp::{solve_front_bvp, BvpOptions, SpeedMode};
use crate::profiles::{equilibrium_from_state, FrontProfile};

/// What the continuation parameter controls.
pub enum ContinuationParameter<'a> {
    /// The frame speed of a fixed model.
    FrameSpeed(&'a ReactionModel),
    /// A model family parameter; the frame speed stays fixed.
    ModelParam { family: &'a dyn Fn(f64) -> ReactionModel, speed: f64 },
}

pub struct ContinuationOptions {
    /// Initial pseudo-arclength step (in the scaled norm).
    pub step: f64,
    pub max_steps: usize,
    pub bvp: BvpOptions,
    /// Keep stepping past a detected fold for this many points.
    pub points_past_fold: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            step: 0.05,
            max_steps: 400,
            bvp: BvpOptions::default(),
            points_past_fold: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub param: f64,
    /// Scalar solution measure (max amplitude of the last component).
    pub measure: f64,
    pub profile: FrontProfile,
}

#[derive(Debug)]
pub struct ContinuationBranch {
    pub parameter: String,
    pub points: Vec<BranchPoint>,
    /// Parameter value of a detected fold (sign change of the parameter
    /// tangent), refined by a local quadratic fit.
    pub fold: Option<f64>,
    /// True when the step size collapsed before the range was exhausted.
    pub terminated: bool,
}

fn measure_of(p: &FrontProfile) -> f64 {
    let last = p.n_components() - 1;
    p.values[last].iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Continue the solution of the front BVP from `profile0` (converged at
/// `range.0`) toward `range.1`, tracking folds.
pub fn continue_branch(
    parameter: ContinuationParameter<'_>,
    parameter_name: &str,
    profile0: &FrontProfile,
    range: (f64, f64),
    opts: &ContinuationOptions,
) -> Result<ContinuationBranch> {
    let dir = if range.1 >= range.0 { 1.0 } else { -1.0 };
    let model_at = |theta: f64| -> ReactionModel {
        match &parameter {
            ContinuationParameter::FrameSpeed(m) => (*m).clone(),
            ContinuationParameter::ModelParam { family, .. } => family(theta),
        }
    };
    let speed_at = |theta: f64| -> f64 {
        match &parameter {
            ContinuationParameter::FrameSpeed(_) => theta,
            ContinuationParameter::ModelParam { speed, .. } => *speed,
        }
    };

    let n = profile0.n_components();
    let m = profile0.n_nodes();
    let state_minus = profile0.state_minus.state.clone();
    let state_plus = profile0.state_plus.state.clone();

    let solve_at = |theta: f64, init: &[Vec<f64>]| -> Result<FrontProfile> {
        let model = model_at(theta);
        let sm = equilibrium_from_state(&model, state_minus.clone());
        let sp = equilibrium_from_state(&model, state_plus.clone());
        solve_front_bvp(&model, SpeedMode::Fixed(speed_at(theta)), &sm, &sp, &opts.bvp, init)
    };

    let mut points: Vec<BranchPoint> = vec![BranchPoint {
        param: range.0,
        measure: measure_of(profile0),
        profile: profile0.clone(),
    }];

    // Second point by natural continuation. The profile part of the
    // arclength norm is weighted from this first secant so that parameter
    // and profile motion contribute comparably: localized solution changes
    // near a fold must steer the tangent, while ordinary steps advance the
    // parameter by about the nominal step.
    let dtheta0 = dir * opts.step.min((range.1 - range.0).abs() * 0.5).max(1e-4);
    let theta1 = range.0 + dtheta0;
    let p1 = solve_at(theta1, &points[0].profile.values)?;
    let scale_u = {
        let mut du2 = 0.0;
        for comp in 0..n {
            for jj in 0..m {
                let d = p1.values[comp][jj] - points[0].profile.values[comp][jj];
                du2 += d * d;
            }
        }
        dtheta0 * dtheta0 / du2.max(1e-12)
    };
    points.push(BranchPoint { param: theta1, measure: measure_of(&p1), profile: p1 });

    let mut ds = opts.step;
    let mut fold: Option<f64> = None;
    let mut fold_sign_ref: Option<f64> = None;
    let mut past_fold = 0usize;
    let mut terminated = false;
    let mut arclengths = vec![0.0, opts.step];

    for _ in 0..opts.max_steps {
        let k = points.len();
        let (prev, last) = (&points[k - 2], &points[k - 1]);
        // Secant tangent in the scaled norm.
        let mut t_u = vec![0.0; n * m];
        let mut norm2 = 0.0;
        for comp in 0..n {
            for jj in 0..m {
                let d = last.profile.values[comp][jj] - prev.profile.values[comp][jj];
                t_u[jj * n + comp] = d;
                norm2 += d * d * scale_u;
            }
        }
        let t_theta = last.param - prev.param;
        norm2 += t_theta * t_theta;
        let norm = norm2.sqrt().max(1e-14);
        for v in t_u.iter_mut() {
            *v /= norm;
        }
        let t_theta = t_theta / norm;

        // Near a fold, refine the step so the quadratic fit is local.
        let near_fold = t_theta.abs() < 0.2;
        let ds_eff = if near_fold { ds.min(opts.step / 8.0) } else { ds };

        match arclength_step(
            &model_at,
            &speed_at,
            &state_minus,
            &state_plus,
            &last.profile,
            last.param,
            &t_u,
            t_theta,
            ds_eff,
            scale_u,
            &opts.bvp,
        ) {
            Ok((profile, theta)) => {
                arclengths.push(arclengths[k - 1] + ds_eff);
                points.push(BranchPoint { param: theta, measure: measure_of(&profile), profile });
                if ds < opts.step {
                    ds *= 1.5;
                }

                // Fold: the parameter direction reverses persistently (two
                // consecutive increments against the branch direction, above
                // corrector noise).
                let kk = points.len();
                let d_prev = points[kk - 2].param - points[kk - 3].param;
                let d_last = points[kk - 1].param - points[kk - 2].param;
                let noise = 1e-4 * ds_eff;
                if let Some(sign) = fold_sign_ref {
                    if fold.is_none() && d_last * sign < -noise && d_prev * sign < -noise {
                        fold = Some(refine_fold(&points, &arclengths));
                    }
                } else if d_prev.abs() > noise {
                    fold_sign_ref = Some(d_prev.signum());
                }
                if fold.is_some() {
                    past_fold += 1;
                    if past_fold >= opts.points_past_fold {
                        break;
                    }
                }
                let theta_now = points[kk - 1].param;
                if fold.is_none()
                    && ((dir > 0.0 && theta_now >= range.1) || (dir < 0.0 && theta_now <= range.1))
                {
                    break;
                }
            }
            Err(_) => {
                ds *= 0.5;
                if ds < 1e-6 {
                    terminated = true;
                    break;
                }
            }
        }
    }

    Ok(ContinuationBranch {
        parameter: parameter_name.to_string(),
        points,
        fold,
        terminated,
    })
}

/// Quadratic fit of the parameter against arclength around the tangent sign
/// change; returns the extremum value.
fn refine_fold(points: &[BranchPoint], arclengths: &[f64]) -> f64 {
    let k = points.len();
    let (s0, s1, s2) = (arclengths[k - 3], arclengths[k - 2], arclengths[k - 1]);
    let (t0, t1, t2) = (points[k - 3].param, points[k - 2].param, points[k - 1].param);
    // Lagrange parabola through three points; vertex of theta(s).
    let d0 = t0 / ((s0 - s1) * (s0 - s2));
    let d1 = t1 / ((s1 - s0) * (s1 - s2));
    let d2 = t2 / ((s2 - s0) * (s2 - s1));
    let a = d0 + d1 + d2;
    let b = -(d0 * (s1 + s2) + d1 * (s0 + s2) + d2 * (s0 + s1));
    if a.abs() < 1e-14 {
        return t1;
    }
    let s_star = -b / (2.0 * a);
    let c = d0 * s1 * s2 + d1 * s0 * s2 + d2 * s0 * s1;
    a * s_star * s_star + b * s_star + c
}

/// One pseudo-arclength corrector: Newton on the BVP rows (with the
/// least-binding boundary row relaxed through a slack), the mid-level phase
/// row pinning translation, and the arclength constraint; the border
/// unknowns are (theta, slack).
#[allow(clippy::too_many_arguments)]
fn arclength_step(
    model_at: &dyn Fn(f64) -> ReactionModel,
    speed_at: &dyn Fn(f64) -> f64,
    state_minus: &[f64],
    state_plus: &[f64],
    last: &FrontProfile,
    theta_last: f64,
    t_u: &[f64],
    t_theta: f64,
    ds: f64,
    scale_u: f64,
    bvp: &BvpOptions,
) -> Result<(FrontProfile, f64)> {
    let n = last.n_components();
    let m = last.n_nodes();
    let h = last.h;
    let mid_node = (m - 1) / 2;
    let phase_target = last.profile_value(0, mid_node);

    // Predictor.
    let mut u = vec![0.0; n * m];
    for comp in 0..n {
        for jj in 0..m {
            u[jj * n + comp] = last.profile_value(comp, jj) + ds * t_u[jj * n + comp];
        }
    }
    let mut theta = theta_last + ds * t_theta;
    let pred_u = u.clone();
    let pred_theta = theta;

    let residual_all = |u: &[f64], theta: f64, out: &mut [f64]| -> Result<()> {
        let model = model_at(theta);
        let c = speed_at(theta);
        let disc = super::bvp::discretization_for(&model, state_minus, state_plus, c, n, m, h)?;
        disc.residual(u, c, out);
        Ok(())
    };

    let mut res = vec![0.0; n * m];
    for _iter in 0..bvp.newton_max {
        residual_all(&u, theta, &mut res)?;
        let relaxed = {
            let model = model_at(theta);
            super::bvp::relaxed_row_index(&model, state_plus, speed_at(theta), n, m)
        };
        let phase_res = u[mid_node * n] - phase_target;
        let arc_res = {
            let mut s = 0.0;
            for idx in 0..n * m {
                s += t_u[idx] * (u[idx] - pred_u[idx]) * scale_u;
            }
            s + t_theta * (theta - pred_theta)
        };
        let rnorm = res
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != relaxed)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
            .max(arc_res.abs())
            .max(phase_res.abs());
        if rnorm <= bvp.tol.max(1e-10) {
            let model = model_at(theta);
            let sm = equilibrium_from_state(&model, state_minus.to_vec());
            let sp = equilibrium_from_state(&model, state_plus.to_vec());
            let mut values = vec![vec![0.0; m]; n];
            for jj in 0..m {
                for comp in 0..n {
                    values[comp][jj] = u[jj * n + comp];
                }
            }
            let mut profile = FrontProfile {
                xi_min: last.xi_min,
                h,
                values,
                speed: speed_at(theta),
                state_minus: sm,
                state_plus: sp,
                eta: 0.0,
                a_plus: 0.0,
                steepness: crate::profiles::Steepness::Indeterminate,
                residual: rnorm,
            };
            if let Ok((eta, ap, st)) = crate::profiles::fit_decay_on(&profile, None) {
                profile.eta = eta;
                profile.a_plus = ap;
                profile.steepness = st;
            }
            return Ok((profile, theta));
        }

        let model = model_at(theta);
        let c = speed_at(theta);
        let disc = super::bvp::discretization_for(&model, state_minus, state_plus, c, n, m, h)?;
        let a = disc.jacobian(&u, c);

        // Borders: d residual / d theta (finite difference) and the unit
        // relaxation column, against the arclength and phase rows.
        let dtheta = 1e-6 * (1.0 + theta.abs());
        let mut rp = vec![0.0; n * m];
        let mut rm = vec![0.0; n * m];
        residual_all(&u, theta + dtheta, &mut rp)?;
        residual_all(&u, theta - dtheta, &mut rm)?;
        let col_theta: Vec<f64> =
            rp.iter().zip(&rm).map(|(p, q)| (p - q) / (2.0 * dtheta)).collect();
        let mut col_relax = vec![0.0; n * m];
        col_relax[relaxed] = 1.0;
        let arc_row: Vec<f64> = t_u.iter().map(|v| v * scale_u).collect();
        let mut phase_row = vec![0.0; n * m];
        phase_row[mid_node * n] = 1.0;

        let rhs: Vec<f64> = res.iter().map(|v| -v).collect();
        let (du, dy) = solve_bordered(
            a,
            &[col_theta, col_relax],
            &[arc_row, phase_row],
            &[vec![t_theta, 0.0], vec![0.0, 0.0]],
            &rhs,
            &[-arc_res, -phase_res],
        )?;
        for (ui, d) in u.iter_mut().zip(&du) {
            *ui += d;
        }
        theta += dy[0];
        if !theta.is_finite() {
            return Err(Error::NoConvergence("continuation: theta diverged".into()));
        }
    }
    Err(Error::NoConvergence("continuation corrector did not converge".into()))
}

impl FrontProfile {
    fn profile_value(&self, comp: usize, node: usize) -> f64 {
        self.values[comp][node]
    }
}
