//! Time integration of invasion runs.
//!
//! Semi-implicit stepping of `U_t = D U_xx + c_frame U_x + F(U)`: diffusion
//! and frame advection are treated by Crank-Nicolson (one prefactored
//! tridiagonal solve per component per step), the reaction explicitly by
//! midpoint half-steps in Strang order, keeping the scheme second order in
//! time. Front tracking measures rightmost level crossings, fitted speeds
//! with sublinear-drift detection, wake states and front separations; the
//! splice intervention overwrites the solution left of a cut and continues.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::TridiagFactored;
use crate::models::{Equilibrium, ReactionModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Neumann,
    DirichletAtEquilibrium,
}

/// The discretized field at one instant.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub t: f64,
    pub frame_speed: f64,
    pub x_lo: f64,
    pub h: f64,
    /// Per-component nodal values.
    pub values: Vec<Vec<f64>>,
    pub bc: BoundaryKind,
    /// Boundary values pinned by the Dirichlet variant.
    pub bc_left: Vec<f64>,
    pub bc_right: Vec<f64>,
}

impl FieldState {
    pub fn n_nodes(&self) -> usize {
        self.values[0].len()
    }

    pub fn n_components(&self) -> usize {
        self.values.len()
    }

    pub fn x(&self, idx: usize) -> f64 {
        self.x_lo + self.h * idx as f64
    }

    pub fn x_hi(&self) -> f64 {
        self.x(self.n_nodes() - 1)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|x| x.is_finite()))
    }

    /// Rightmost crossing of `level` in `comp`, linearly interpolated.
    pub fn rightmost_crossing(&self, comp: usize, level: f64) -> Option<f64> {
        let v = &self.values[comp];
        for j in (0..v.len() - 1).rev() {
            if (v[j] - level) * (v[j + 1] - level) <= 0.0 && v[j] != v[j + 1] {
                let frac = (level - v[j]) / (v[j + 1] - v[j]);
                return Some(self.x(j) + frac * self.h);
            }
        }
        None
    }

    /// Sample component `comp` at position `x` (clamped, linear).
    pub fn sample(&self, comp: usize, x: f64) -> f64 {
        let v = &self.values[comp];
        let t = (x - self.x_lo) / self.h;
        if t <= 0.0 {
            return v[0];
        }
        let n = v.len();
        if t >= (n - 1) as f64 {
            return v[n - 1];
        }
        let j = t.floor() as usize;
        v[j] + (v[j + 1] - v[j]) * (t - j as f64)
    }
}

/// Stability bound for the explicit reaction part: `0.5 / max ||F'||` over
/// sampled states in the given box.
pub fn dt_max(model: &ReactionModel, bounds: &[(f64, f64)]) -> f64 {
    let n = model.n_components;
    let mut worst: f64 = 1e-12;
    let samples = 64usize;
    let mut state = vec![0.0; n];
    let mut jac = vec![0.0; n * n];
    let total = samples.pow(n as u32);
    for s in 0..total {
        let mut rem = s;
        for (k, st) in state.iter_mut().enumerate() {
            let idx = rem % samples;
            rem /= samples;
            let (lo, hi) = bounds[k];
            *st = lo + (hi - lo) * idx as f64 / (samples - 1) as f64;
        }
        model.jacobian(&state, &mut jac);
        let norm = (0..n)
            .map(|i| (0..n).map(|j| jac[i * n + j].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        worst = worst.max(norm);
    }
    0.5 / worst
}

/// Prefactored IMEX stepper for a fixed (model, grid, dt, frame) tuple.
pub struct Stepper<'a> {
    model: &'a ReactionModel,
    dt: f64,
    implicit: Vec<TridiagFactored>,
    /// Explicit half of Crank-Nicolson: (sub, diag, sup) per component.
    explicit: Vec<(f64, f64, f64)>,
    bc: BoundaryKind,
    work: Vec<f64>,
    rhs: Vec<f64>,
    mid: Vec<f64>,
    rate: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(model: &'a ReactionModel, state: &FieldState, dt: f64) -> Result<Self> {
        let n = model.n_components;
        let m = state.n_nodes();
        let h = state.h;
        let c = state.frame_speed;
        let mut implicit = Vec::with_capacity(n);
        let mut explicit = Vec::with_capacity(n);
        for i in 0..n {
            let d = model.diffusion[i];
            let w = d / (h * h);
            let adv = c / (2.0 * h);
            // L = d D2 + c D1: sub = w - adv, diag = -2w, sup = w + adv.
            let (lsub, ldiag, lsup) = (w - adv, -2.0 * w, w + adv);
            let mut sub = vec![-0.5 * dt * lsub; m];
            let mut diag = vec![1.0 - 0.5 * dt * ldiag; m];
            let mut sup = vec![-0.5 * dt * lsup; m];
            match state.bc {
                BoundaryKind::Neumann => {
                    // Mirror ghost: row 0 couples to node 1 with weight
                    // (sub + sup); advection contribution cancels.
                    sup[0] = -0.5 * dt * (lsub + lsup);
                    sub[m - 1] = -0.5 * dt * (lsub + lsup);
                }
                BoundaryKind::DirichletAtEquilibrium => {
                    diag[0] = 1.0;
                    sup[0] = 0.0;
                    sub[m - 1] = 0.0;
                    diag[m - 1] = 1.0;
                }
            }
            implicit.push(TridiagFactored::new(&sub, &diag, &sup)?);
            explicit.push((0.5 * dt * lsub, 0.5 * dt * ldiag, 0.5 * dt * lsup));
        }
        Ok(Stepper {
            model,
            dt,
            implicit,
            explicit,
            bc: state.bc,
            work: vec![0.0; m],
            rhs: vec![0.0; m],
            mid: vec![0.0; 2],
            rate: vec![0.0; 2],
        })
    }

    /// Explicit midpoint half-step of the reaction flow.
    fn react_half(&mut self, state: &mut FieldState) {
        let n = state.n_components();
        let m = state.n_nodes();
        let dt2 = 0.5 * self.dt;
        let mut u = vec![0.0; n];
        for k in 0..m {
            for i in 0..n {
                u[i] = state.values[i][k];
            }
            self.model.reaction(&u, &mut self.rate);
            for i in 0..n {
                self.mid[i] = u[i] + 0.5 * dt2 * self.rate[i];
            }
            self.model.reaction(&self.mid[..n], &mut self.rate);
            for i in 0..n {
                state.values[i][k] = u[i] + dt2 * self.rate[i];
            }
        }
    }

    /// One full IMEX step (Strang: reaction half, CN, reaction half).
    pub fn step(&mut self, state: &mut FieldState) -> Result<()> {
        self.react_half(state);

        let n = state.n_components();
        let m = state.n_nodes();
        for i in 0..n {
            let (esub, ediag, esup) = self.explicit[i];
            {
                let v = &state.values[i];
                self.rhs[0] = v[0] + ediag * v[0]
                    + match self.bc {
                        BoundaryKind::Neumann => (esub + esup) * v[1],
                        BoundaryKind::DirichletAtEquilibrium => 0.0,
                    };
                for k in 1..m - 1 {
                    self.rhs[k] = v[k] + esub * v[k - 1] + ediag * v[k] + esup * v[k + 1];
                }
                self.rhs[m - 1] = v[m - 1] + ediag * v[m - 1]
                    + match self.bc {
                        BoundaryKind::Neumann => (esub + esup) * v[m - 2],
                        BoundaryKind::DirichletAtEquilibrium => 0.0,
                    };
                if self.bc == BoundaryKind::DirichletAtEquilibrium {
                    self.rhs[0] = state.bc_left[i];
                    self.rhs[m - 1] = state.bc_right[i];
                }
            }
            self.implicit[i].solve(&mut self.rhs, &mut self.work);
            state.values[i].copy_from_slice(&self.rhs);
        }

        self.react_half(state);
        state.t += self.dt;
        Ok(())
    }
}

/// Initial data builders.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `U = left` for x < 0, zero for x >= 0.
    Step { left: Vec<f64> },
    /// `+amp` on (-width, 0), `-amp` on (0, width), zero outside.
    SignChangingStep { amp: Vec<f64>, width: f64 },
    /// Compact bump `amp * cos^2(pi x / 2 width)` on |x| < width.
    Bump { amp: Vec<f64>, width: f64 },
    /// Phase-rotated step for the CGL system: `(cos, sin)(ell pi / 3)` on
    /// x < 0.
    PhaseStep { ell: u32 },
    /// Step between two prescribed states at x = 0.
    TwoStates { left: Vec<f64>, right: Vec<f64> },
    /// Per-component steps `U_i = left[i]` for `x < shifts[i]`, zero beyond;
    /// seeds staged fronts near their locked separation.
    StaggeredStep { left: Vec<f64>, shifts: Vec<f64> },
}

impl InitialData {
    pub fn build(&self, n: usize, x_lo: f64, h: f64, m: usize) -> Vec<Vec<f64>> {
        let mut values = vec![vec![0.0; m]; n];
        for k in 0..m {
            let x = x_lo + h * k as f64;
            match self {
                InitialData::Step { left } => {
                    if x < 0.0 {
                        for i in 0..n {
                            values[i][k] = left[i];
                        }
                    }
                }
                InitialData::SignChangingStep { amp, width } => {
                    if x > -width && x < 0.0 {
                        for i in 0..n {
                            values[i][k] = amp[i];
                        }
                    } else if x > 0.0 && x < *width {
                        for i in 0..n {
                            values[i][k] = -amp[i];
                        }
                    }
                }
                InitialData::Bump { amp, width } => {
                    if x.abs() < *width {
                        let shape = (std::f64::consts::FRAC_PI_2 * x / width).cos().powi(2);
                        for i in 0..n {
                            values[i][k] = amp[i] * shape;
                        }
                    }
                }
                InitialData::PhaseStep { ell } => {
                    if x < 0.0 {
                        let phi = *ell as f64 * std::f64::consts::PI / 3.0;
                        values[0][k] = phi.cos();
                        if n > 1 {
                            values[1][k] = phi.sin();
                        }
                    }
                }
                InitialData::TwoStates { left, right } => {
                    let s = if x < 0.0 { left } else { right };
                    for i in 0..n {
                        values[i][k] = s[i];
                    }
                }
                InitialData::StaggeredStep { left, shifts } => {
                    for i in 0..n {
                        if x < shifts[i] {
                            values[i][k] = left[i];
                        }
                    }
                }
            }
        }
        values
    }

    /// Far-field states implied by the builder (left, right).
    pub fn far_states(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        match self {
            InitialData::Step { left } => (left.clone(), vec![0.0; n]),
            InitialData::StaggeredStep { left, .. } => (left.clone(), vec![0.0; n]),
            InitialData::TwoStates { left, right } => (left.clone(), right.clone()),
            InitialData::PhaseStep { ell } => {
                let phi = *ell as f64 * std::f64::consts::PI / 3.0;
                let mut left = vec![phi.cos()];
                if n > 1 {
                    left.push(phi.sin());
                }
                (left, vec![0.0; n])
            }
            _ => (vec![0.0; n], vec![0.0; n]),
        }
    }
}

/// A completed run: snapshots at the scheduled times.
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    pub dt: f64,
}

impl Trajectory {
    pub fn last(&self) -> &FieldState {
        self.snapshots.last().expect("trajectory has at least the initial state")
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub h: f64,
    pub dt: f64,
    pub t_end: f64,
    pub frame_speed: f64,
    pub bc: BoundaryKind,
    pub snapshot_every: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            x_lo: -100.0,
            x_hi: 100.0,
            h: 0.1,
            dt: 0.005,
            t_end: 100.0,
            frame_speed: 0.0,
            bc: BoundaryKind::Neumann,
            snapshot_every: 1.0,
        }
    }
}

/// Integrate from the built initial data, collecting snapshots every
/// `snapshot_every` time units (and at t = 0 and t = T).
pub fn run(model: &ReactionModel, initial: &InitialData, spec: &RunSpec) -> Result<Trajectory> {
    run_with_callback(model, initial, spec, |_| Ok(()))
}

/// `run` with a per-step intervention hook (used by the splice protocol).
pub fn run_with_callback(
    model: &ReactionModel,
    initial: &InitialData,
    spec: &RunSpec,
    mut hook: impl FnMut(&mut FieldState) -> Result<()>,
) -> Result<Trajectory> {
    let n = model.n_components;
    let m = ((spec.x_hi - spec.x_lo) / spec.h).round() as usize + 1;
    let values = initial.build(n, spec.x_lo, spec.h, m);
    let (left, right) = initial.far_states(n);
    let mut state = FieldState {
        t: 0.0,
        frame_speed: spec.frame_speed,
        x_lo: spec.x_lo,
        h: spec.h,
        values,
        bc: spec.bc,
        bc_left: left,
        bc_right: right,
    };
    let mut stepper = Stepper::new(model, &state, spec.dt)?;
    let total_steps = (spec.t_end / spec.dt).round() as usize;
    let snap_stride = (spec.snapshot_every / spec.dt).round().max(1.0) as usize;

    let mut snapshots = Vec::with_capacity(total_steps / snap_stride + 2);
    snapshots.push(state.clone());
    for step_idx in 1..=total_steps {
        stepper.step(&mut state)?;
        hook(&mut state)?;
        if step_idx % 200 == 0 && !state.is_finite() {
            return Err(Error::BlowUp { t: state.t });
        }
        if step_idx % snap_stride == 0 || step_idx == total_steps {
            if !state.is_finite() {
                return Err(Error::BlowUp { t: state.t });
            }
            snapshots.push(state.clone());
        }
    }
    Ok(Trajectory { snapshots, dt: spec.dt })
}

// ---------------------------------------------------------------------------
// Front tracking
// ---------------------------------------------------------------------------

/// Level-crossing track of an interface: positions of the rightmost
/// crossing, fitted speed over the trailing window, and the sublinear-drift
/// flag of the selection test.
#[derive(Debug, Clone, Serialize)]
pub struct FrontTrack {
    pub component: usize,
    pub level: f64,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub fitted_speed: f64,
    /// Drift series x(t) - fitted_speed t - const on the fit window.
    pub drift: Vec<f64>,
    pub sublinear: bool,
    /// True when the tracked level came within 10% of the right boundary.
    pub boundary_contact: bool,
}

/// Track the rightmost crossing of `level` across the snapshots. Snapshots
/// where the level is never crossed are skipped; an empty result is an
/// error status.
pub fn track_front(traj: &Trajectory, component: usize, level: f64) -> Result<FrontTrack> {
    let mut times = Vec::new();
    let mut positions = Vec::new();
    for snap in &traj.snapshots {
        if let Some(x) = snap.rightmost_crossing(component, level) {
            times.push(snap.t);
            positions.push(x);
        }
    }
    if times.len() < 4 {
        return Err(Error::AnalysisFailure(format!(
            "track_front: level {level} crossed in only {} snapshots",
            times.len()
        )));
    }

    let x_hi = traj.last().x_hi();
    let x_lo = traj.last().x_lo;
    let domain = x_hi - x_lo;
    let boundary_contact = positions.iter().any(|&x| x > x_hi - 0.1 * domain);

    // Fit over the final 40% of the crossings.
    let start = (times.len() as f64 * 0.6) as usize;
    let (slope, intercept) =
        crate::linalg::fit_line(&times[start..], &positions[start..]);
    let drift: Vec<f64> = times[start..]
        .iter()
        .zip(&positions[start..])
        .map(|(t, x)| x - slope * t - intercept)
        .collect();
    // Sublinear drift: the residual grows slower than 0.05 t on the window.
    let t0 = times[start];
    let d0 = drift[0];
    let sublinear = times[start..]
        .iter()
        .zip(&drift)
        .all(|(t, d)| (d - d0).abs() <= 0.05 * (t - t0) + 0.2);

    Ok(FrontTrack {
        component,
        level,
        times,
        positions,
        fitted_speed: slope,
        drift,
        sublinear,
        boundary_contact,
    })
}

/// Identify the wake state: sample the field `offset` behind the tracked
/// interface at the final snapshot and match against the catalogue within
/// tolerance 0.05 (max norm). `None` is a valid transient status.
pub fn wake_state(
    snapshot: &FieldState,
    track: &FrontTrack,
    offset: f64,
    equilibria: &[Equilibrium],
) -> Option<usize> {
    let x_front = *track.positions.last()?;
    let probe = x_front - offset;
    let state: Vec<f64> =
        (0..snapshot.n_components()).map(|c| snapshot.sample(c, probe)).collect();
    crate::models::nearest_equilibrium(equilibria, &state, 0.05).map(|(i, _)| i)
}

/// Signed separation `x_b - x_a` of two rightmost level crossings.
pub fn front_separation(
    snapshot: &FieldState,
    comp_a: usize,
    level_a: f64,
    comp_b: usize,
    level_b: f64,
) -> Result<f64> {
    let xa = snapshot
        .rightmost_crossing(comp_a, level_a)
        .ok_or_else(|| Error::AnalysisFailure("front_separation: level_a not crossed".into()))?;
    let xb = snapshot
        .rightmost_crossing(comp_b, level_b)
        .ok_or_else(|| Error::AnalysisFailure("front_separation: level_b not crossed".into()))?;
    Ok(xb - xa)
}

/// Overwrite the state left of `l0` with the replacement values.
pub fn splice(state: &mut FieldState, l0: f64, replacement: &[f64]) {
    let m = state.n_nodes();
    for k in 0..m {
        if state.x(k) < l0 {
            for (comp, &r) in replacement.iter().enumerate() {
                state.values[comp][k] = r;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_preset;
    use std::collections::BTreeMap;

    #[test]
    fn heat_kernel_convergence_order() {
        // F = 0: the scheme reduces to Crank-Nicolson; compare a Gaussian
        // evolving under pure diffusion with the exact solution.
        let model = ReactionModel::scalar_poly("zero", vec![0.0]);
        let exact = |x: f64, t: f64| {
            let s = 1.0 + 4.0 * t;
            (1.0 / s.sqrt()) * (-x * x / s).exp()
        };
        let err_at = |h: f64, dt: f64| -> f64 {
            let spec = RunSpec {
                x_lo: -30.0,
                x_hi: 30.0,
                h,
                dt,
                t_end: 1.0,
                frame_speed: 0.0,
                bc: BoundaryKind::Neumann,
                snapshot_every: 1.0,
            };
            let m = ((spec.x_hi - spec.x_lo) / h).round() as usize + 1;
            let mut state = FieldState {
                t: 0.0,
                frame_speed: 0.0,
                x_lo: spec.x_lo,
                h,
                values: vec![(0..m).map(|k| exact(spec.x_lo + h * k as f64, 0.0)).collect()],
                bc: BoundaryKind::Neumann,
                bc_left: vec![0.0],
                bc_right: vec![0.0],
            };
            let mut stepper = Stepper::new(&model, &state, dt).unwrap();
            let steps = (1.0 / dt).round() as usize;
            for _ in 0..steps {
                stepper.step(&mut state).unwrap();
            }
            (0..m)
                .map(|k| (state.values[0][k] - exact(state.x(k), 1.0)).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err_at(0.2, 0.02);
        let e2 = err_at(0.1, 0.01);
        let order = (e1 / e2).log2();
        assert!(order >= 1.8, "observed order {order} ({e1:.3e} vs {e2:.3e})");
    }

    #[test]
    fn odd_symmetry_preserved() {
        // Balanced cubic with odd initial data on a symmetric grid: the
        // scheme is equivariant, so oddness is preserved to roundoff.
        let model = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let spec = RunSpec {
            x_lo: -20.0,
            x_hi: 20.0,
            h: 0.1,
            dt: 0.005,
            t_end: 5.0,
            ..Default::default()
        };
        let init = InitialData::SignChangingStep { amp: vec![0.8], width: 5.0 };
        let traj = run(&model, &init, &spec).unwrap();
        let last = traj.last();
        let m = last.n_nodes();
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let mirror = m - 1 - k;
            worst = worst.max((last.values[0][k] + last.values[0][mirror]).abs());
        }
        assert!(worst < 1e-10, "odd symmetry violated by {worst}");
    }

    #[test]
    fn kpp_invariant_interval_preserved() {
        // f = u(1-u) with 0 <= u0 <= 1 stays in [0, 1 + 1e-10].
        let model = ReactionModel::scalar_poly("kpp", vec![0.0, 1.0, -1.0]);
        let spec = RunSpec {
            x_lo: -50.0,
            x_hi: 150.0,
            h: 0.1,
            dt: 0.005,
            t_end: 30.0,
            ..Default::default()
        };
        let init = InitialData::Step { left: vec![1.0] };
        let traj = run(&model, &init, &spec).unwrap();
        for snap in &traj.snapshots {
            for &v in &snap.values[0] {
                assert!(v >= -1e-10 && v <= 1.0 + 1e-10, "left [0,1]: {v}");
            }
        }
    }

    #[test]
    fn linearized_level_spreads_at_speed_two() {
        // u_t = u_xx + u from a point mass: the 1e-8 level moves at speed
        // approaching 2.
        let model = ReactionModel::scalar_poly("lin", vec![0.0, 1.0]);
        let spec = RunSpec {
            x_lo: -40.0,
            x_hi: 160.0,
            h: 0.1,
            dt: 0.005,
            t_end: 40.0,
            snapshot_every: 2.0,
            ..Default::default()
        };
        let init = InitialData::Bump { amp: vec![1e-6], width: 1.0 };
        let traj = run(&model, &init, &spec).unwrap();
        let track = track_front(&traj, 0, 1e-8).unwrap();
        assert!(
            (track.fitted_speed - 2.0).abs() < 0.1,
            "level speed {}",
            track.fitted_speed
        );
    }

    #[test]
    fn synthetic_track_with_log_drift() {
        // x(t) = 2t - 1.5 ln t: fitted speed near 2, drift sublinear.
        let mut traj = Trajectory { snapshots: Vec::new(), dt: 0.1 };
        for k in 1..400 {
            let t = k as f64;
            let x = 2.0 * t - 1.5 * t.ln();
            // A step profile crossing 0.5 at x.
            let m = 2001;
            let h = 0.5;
            let x_lo = 0.0;
            let values: Vec<f64> = (0..m)
                .map(|j| if x_lo + h * j as f64 <= x { 1.0 } else { 0.0 })
                .collect();
            traj.snapshots.push(FieldState {
                t,
                frame_speed: 0.0,
                x_lo,
                h,
                values: vec![values],
                bc: BoundaryKind::Neumann,
                bc_left: vec![1.0],
                bc_right: vec![0.0],
            });
        }
        let track = track_front(&traj, 0, 0.5).unwrap();
        assert!((track.fitted_speed - 2.0).abs() < 0.02, "{}", track.fitted_speed);
        assert!(track.sublinear);
    }

    #[test]
    fn splice_with_wake_state_is_idempotent() {
        let model = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let spec = RunSpec {
            x_lo: -50.0,
            x_hi: 100.0,
            h: 0.1,
            dt: 0.005,
            t_end: 10.0,
            ..Default::default()
        };
        let init = InitialData::Step { left: vec![1.0] };
        let plain = run(&model, &init, &spec).unwrap();
        let spliced = run_with_callback(&model, &init, &spec, |state| {
            if (state.t - 5.0).abs() < 1e-9 {
                splice(state, -20.0, &[1.0]);
            }
            Ok(())
        })
        .unwrap();
        let a = plain.last();
        let b = spliced.last();
        let mut worst: f64 = 0.0;
        for k in 0..a.n_nodes() {
            worst = worst.max((a.values[0][k] - b.values[0][k]).abs());
        }
        assert!(worst <= 1e-10, "splice with the wake state changed the run by {worst}");
    }

    #[test]
    fn comoving_consistency() {
        // A lab-frame run shifted by c t matches a comoving run at matched
        // times to discretization accuracy.
        let model = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let t_end = 20.0;
        let lab = RunSpec {
            x_lo: -60.0,
            x_hi: 120.0,
            h: 0.05,
            dt: 0.0025,
            t_end,
            frame_speed: 0.0,
            bc: BoundaryKind::Neumann,
            snapshot_every: t_end,
        };
        let commoving = RunSpec {
            x_lo: -60.0,
            x_hi: 120.0,
            h: 0.05,
            dt: 0.0025,
            t_end,
            frame_speed: 2.0,
            bc: BoundaryKind::DirichletAtEquilibrium,
            snapshot_every: t_end,
        };
        let init = InitialData::Step { left: vec![1.0] };
        let a = run(&model, &init, &lab).unwrap();
        let b = run(&model, &init, &commoving).unwrap();
        let fa = a.last();
        let fb = b.last();
        let mut worst: f64 = 0.0;
        for k in 0..fb.n_nodes() {
            let x_com = fb.x(k);
            if x_com < -30.0 || x_com > 60.0 {
                continue;
            }
            let x_lab = x_com + 2.0 * t_end;
            if x_lab > 110.0 {
                continue;
            }
            worst = worst.max((fb.values[0][k] - fa.sample(0, x_lab)).abs());
        }
        assert!(worst <= 5e-3, "frames disagree by {worst}");
    }

    use crate::models::ReactionModel;
}
