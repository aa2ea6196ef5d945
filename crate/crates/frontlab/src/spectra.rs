//! Stability of front profiles.
//!
//! The linearization at a front in the comoving frame, conjugated by the
//! exponential weight `e^{eta x}`, is
//!
//! ```text
//! L_eta = e^{eta x} (D d_xx + c d_x + F'(U_*(x))) e^{-eta x}
//!       = D d_xx + (c - 2 D eta) d_x + (D eta^2 - c eta + F'(U_*(x))).
//! ```
//!
//! At the optimal weight `eta = c / (2 d)` the advection cancels per
//! component and each diagonal block becomes a self-adjoint Schroedinger
//! operator, handled by Sturm-sequence bisection on the symmetric
//! tridiagonal discretization. Off the symmetric path a dense matrix is
//! assembled instead. Essential spectra come analytically from the
//! asymptotic limits (the dispersion module), so discretized essential
//! clusters are never mistaken for point spectrum: only eigenvalues above
//! the boundary-potential proxy count as genuine.

use serde::Serialize;

use crate::dispersion::{find_double_roots, weighted_essential_spectrum, SeedBox, SpectrumCurve};
use crate::error::{Error, Result};
use crate::linalg::sturm_top_eigenvalues;
use crate::models::{cgl_real_subsystem, cgl_u_plus_minus, ModelKind, ReactionModel};
use crate::profiles::{
    equilibrium_from_state, solve_front_bvp, tanh_connection, BvpOptions, FrontProfile,
    SpeedMode, Steepness,
};

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// Self-adjoint operator `d d_xx + V(x) + shift` on a uniform grid with
/// Dirichlet ends; the discretization matrix is symmetric tridiagonal.
#[derive(Debug, Clone)]
pub struct SchrodingerOperator {
    pub xi_min: f64,
    pub h: f64,
    pub diffusion: f64,
    pub potential: Vec<f64>,
    pub shift: f64,
}

impl SchrodingerOperator {
    pub fn n(&self) -> usize {
        self.potential.len()
    }

    /// Symmetric tridiagonal entries (diag, off-diagonal).
    pub fn tridiag(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let w = self.diffusion / (self.h * self.h);
        let diag: Vec<f64> =
            self.potential.iter().map(|v| -2.0 * w + v + self.shift).collect();
        let off = vec![w; n - 1];
        (diag, off)
    }

    /// Sup of the essential spectrum proxy: the larger boundary potential.
    pub fn essential_proxy(&self) -> f64 {
        let n = self.n();
        (self.potential[0].max(self.potential[n - 1])) + self.shift
    }
}

/// Weighted linearization of a model at a front profile.
pub struct WeightedLinearization {
    pub eta: f64,
    pub speed: f64,
    /// Symmetric fast path: one Schroedinger block per component, available
    /// when the Jacobian along the profile is triangular and the advection
    /// cancels in every component.
    pub blocks: Option<Vec<SchrodingerOperator>>,
    /// Dense fallback (row-major n_total x n_total).
    pub dense: Option<nalgebra::DMatrix<f64>>,
}

/// Build the discretized weighted operator
/// `e^{eta x} (D d_xx + c d_x + F'(U_*)) e^{-eta x}` on `n_grid` nodes.
///
/// The symmetric-tridiagonal fast path is selected when the conjugated
/// operator decouples into self-adjoint scalar blocks; otherwise a dense
/// matrix (Dirichlet ends) is returned.
pub fn weighted_linearization(
    model: &ReactionModel,
    profile: &FrontProfile,
    eta: f64,
    n_grid: usize,
) -> Result<WeightedLinearization> {
    if eta < 0.0 {
        return Err(Error::Contract("weighted_linearization: eta must be >= 0".into()));
    }
    let n = model.n_components;
    let c = profile.speed;
    let l = profile.half_width();
    let h = 2.0 * l / (n_grid - 1) as f64;

    // Sample the Jacobian along the profile.
    let mut jacs = Vec::with_capacity(n_grid);
    let mut state = vec![0.0; n];
    let mut off_upper: f64 = 0.0;
    let mut off_lower: f64 = 0.0;
    for k in 0..n_grid {
        let xi = -l + h * k as f64;
        for comp in 0..n {
            state[comp] = profile.sample(comp, xi);
        }
        let j = model.jacobian_at(&state);
        if n == 2 {
            off_upper = off_upper.max(j[1].abs());
            off_lower = off_lower.max(j[2].abs());
        }
        jacs.push(j);
    }

    let triangular = n == 1 || off_upper < 1e-10 || off_lower < 1e-10;
    let advection_cancels = (0..n).all(|i| (c - 2.0 * model.diffusion[i] * eta).abs() < 1e-10);

    if triangular && advection_cancels {
        let mut blocks = Vec::with_capacity(n);
        for i in 0..n {
            let d = model.diffusion[i];
            let base = d * eta * eta - c * eta;
            let potential: Vec<f64> =
                jacs.iter().map(|j| base + j[i * n + i]).collect();
            blocks.push(SchrodingerOperator {
                xi_min: -l,
                h,
                diffusion: d,
                potential,
                shift: 0.0,
            });
        }
        return Ok(WeightedLinearization { eta, speed: c, blocks: Some(blocks), dense: None });
    }

    let total = n * n_grid;
    if total > 2000 {
        return Err(Error::Contract(format!(
            "weighted_linearization: dense path limited to 2000 unknowns, got {total}"
        )));
    }
    let mut a = nalgebra::DMatrix::<f64>::zeros(total, total);
    for k in 0..n_grid {
        for i in 0..n {
            let d = model.diffusion[i];
            let b = c - 2.0 * d * eta;
            let row = k * n + i;
            let v0 = d * eta * eta - c * eta;
            if k > 0 {
                a[(row, (k - 1) * n + i)] += d / (h * h) - b / (2.0 * h);
            }
            a[(row, k * n + i)] += -2.0 * d / (h * h) + v0;
            if k + 1 < n_grid {
                a[(row, (k + 1) * n + i)] += d / (h * h) + b / (2.0 * h);
            }
            for jj in 0..n {
                a[(row, k * n + jj)] += jacs[k][i * n + jj];
            }
        }
    }
    Ok(WeightedLinearization { eta, speed: c, blocks: None, dense: Some(a) })
}

/// Top `count` point eigenvalues (descending) of a self-adjoint operator by
/// Sturm bisection, reporting only eigenvalues above the essential-spectrum
/// proxy (max of the boundary potentials).
pub fn point_spectrum_selfadjoint(op: &SchrodingerOperator, count: usize) -> Vec<f64> {
    let (diag, off) = op.tridiag();
    let proxy = op.essential_proxy();
    sturm_top_eigenvalues(&diag, &off, count, 1e-10)
        .into_iter()
        .filter(|&e| e > proxy)
        .collect()
}

/// Largest eigenvalue regardless of the essential proxy (used where the
/// supremum of the whole spectrum is the quantity of interest).
pub fn top_eigenvalue(op: &SchrodingerOperator) -> f64 {
    let (diag, off) = op.tridiag();
    sturm_top_eigenvalues(&diag, &off, 1, 1e-10)[0]
}

// ---------------------------------------------------------------------------
// Critical coupling of the forced CGL wake operator
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstabilityMechanism {
    Point,
    Essential,
}

/// Weighted wake operator of the forced CGL system at the real front
/// `u_*^s` (s = +1 or -1): `L~_v = d_xx - 2 alpha - 2 beta u_* - u_*^2`.
pub fn cgl_weighted_v_operator(
    alpha: f64,
    beta: f64,
    sign: f64,
    l: f64,
    n_grid: usize,
) -> Result<SchrodingerOperator> {
    let front = cgl_real_front(alpha, beta, sign, l, n_grid)?;
    let potential: Vec<f64> = (0..front.n_nodes())
        .map(|k| {
            let u = front.values[0][k];
            -2.0 * alpha - 2.0 * beta * u - u * u
        })
        .collect();
    Ok(SchrodingerOperator { xi_min: -l, h: front.h, diffusion: 1.0, potential, shift: 0.0 })
}

/// The real front u_*^+ (sign = +1) or u_*^- (sign = -1) of the scalar
/// subsystem at the linear spreading speed.
pub fn cgl_real_front(
    alpha: f64,
    beta: f64,
    sign: f64,
    l: f64,
    n_grid: usize,
) -> Result<FrontProfile> {
    let sub = cgl_real_subsystem(alpha, beta);
    let (up, um) = cgl_u_plus_minus(alpha, beta);
    let target = if sign >= 0.0 { up } else { um };
    let sm = equilibrium_from_state(&sub, vec![target]);
    let sp = equilibrium_from_state(&sub, vec![0.0]);
    let c = 2.0 * (1.0 + alpha).sqrt();
    let opts = BvpOptions { l, n_grid, ..Default::default() };
    let init = tanh_connection(&sm.state, &sp.state, l, n_grid, 1.0, &[0.0]);
    solve_front_bvp(&sub, SpeedMode::Fixed(c), &sm, &sp, &opts, &init)
}

pub fn beta_lin(alpha: f64) -> f64 {
    (1.0 + 3.0 * alpha) / 6.0f64.sqrt()
}

pub fn beta_pushed(alpha: f64) -> f64 {
    ((1.0 + alpha) / 2.0).sqrt()
}

const CRITICAL_BETA_L: f64 = 80.0;
const CRITICAL_BETA_GRID: usize = 4001;
/// Margin above the essential edge for a genuine point eigenvalue.
const POINT_MARGIN: f64 = 1e-3;

/// Critical beta of the wake operator `L~_v^-`: the zero crossing of its top
/// point eigenvalue if one exists below `beta_lin` (point mechanism), else
/// `beta_lin` itself, where the weighted wake essential spectrum reaches the
/// origin (essential mechanism).
pub fn critical_beta(alpha: f64) -> Result<(f64, InstabilityMechanism)> {
    if alpha <= 0.0 || alpha >= 1.0 / 3.0 {
        return Err(Error::Contract("critical_beta: need 0 < alpha < 1/3".into()));
    }
    let blin = beta_lin(alpha);
    let top_at = |beta: f64| -> Result<f64> {
        let op = cgl_weighted_v_operator(alpha, beta, -1.0, CRITICAL_BETA_L, CRITICAL_BETA_GRID)?;
        Ok(top_eigenvalue(&op))
    };

    // Genuine positive point eigenvalue at beta_lin decides the mechanism:
    // the essential proxy there is ~0, so anything clearly positive is a
    // bound state.
    let lam_lin = top_at(blin)?;
    if lam_lin <= POINT_MARGIN {
        return Ok((blin, InstabilityMechanism::Essential));
    }

    // Bracket the zero crossing from below.
    let mut b_hi = blin;
    let mut b_lo = 0.5 * blin;
    let mut tries = 0;
    while top_at(b_lo)? > 0.0 {
        b_hi = b_lo;
        b_lo *= 0.5;
        tries += 1;
        if tries > 12 {
            return Err(Error::AnalysisFailure(
                "critical_beta: no stable beta found below beta_lin".into(),
            ));
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (b_lo + b_hi);
        if top_at(mid)? > 0.0 {
            b_hi = mid;
        } else {
            b_lo = mid;
        }
        if b_hi - b_lo < 1e-6 {
            break;
        }
    }
    Ok((0.5 * (b_lo + b_hi), InstabilityMechanism::Point))
}

// ---------------------------------------------------------------------------
// Sturm exclusion surrogate for the skew secondary front
// ---------------------------------------------------------------------------

/// Numerical surrogate for the comparison argument excluding unstable point
/// spectrum of the v-linearization at the skew secondary front: checks
/// `h(x) = -4 u_x u (v - v^3) > 0` on the interior and that the top
/// eigenvalue of the weighted v-block is <= 1e-8.
pub fn sturm_exclusion_check(model: &ReactionModel, profile: &FrontProfile) -> Result<bool> {
    if !matches!(model.kind, ModelKind::Skew { .. }) {
        return Err(Error::Contract("sturm_exclusion_check: expects the skew preset".into()));
    }
    let v = &profile.values[1];
    let u = &profile.values[0];
    let m = profile.n_nodes();
    // Monotonicity precondition on v.
    for w in v.windows(2) {
        if w[1] > w[0] + 1e-7 {
            return Err(Error::Contract(
                "sturm_exclusion_check: v-component is not monotone".into(),
            ));
        }
    }

    // h(x) > 0 where it is above roundoff noise.
    let mut positive = true;
    for k in 1..m - 1 {
        let ux = (u[k + 1] - u[k - 1]) / (2.0 * profile.h);
        let hval = -4.0 * ux * u[k] * (v[k] - v[k].powi(3));
        if hval < -1e-12 {
            positive = false;
            break;
        }
    }

    let eta = profile.speed / 2.0;
    let lin = weighted_linearization(model, profile, eta, profile.n_nodes())?;
    let blocks = lin.blocks.ok_or_else(|| {
        Error::AnalysisFailure("sturm_exclusion_check: symmetric path unavailable".into())
    })?;
    let top = top_eigenvalue(&blocks[1]);
    Ok(positive && top <= 1e-8)
}

// ---------------------------------------------------------------------------
// Marginal stability checklist
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MarginallyStablePulled,
    Unstable,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Checklist {
    pub wake_attracting: bool,
    pub pinched_dr_at_zero: bool,
    pub weighted_spectrum_stable: bool,
    pub no_weighted_kernel_but_generic_tail: bool,
}

/// Weighted-spectrum report with the pulled-front selection checklist.
pub struct SpectrumReport {
    pub eta: f64,
    pub essential: Vec<SpectrumCurve>,
    pub point_eigs: Vec<f64>,
    pub checklist: Checklist,
    pub verdict: Verdict,
}

const SPECTRUM_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-6;

/// Fill the four-point marginal-stability checklist for a front profile:
/// the wake state attracts, the leading edge carries a pinched double root
/// at the origin, the weighted spectrum is stable up to the marginal
/// leading-edge touching, and the tail is generic with no weighted kernel.
pub fn marginal_stability_report(
    model: &ReactionModel,
    profile: &FrontProfile,
) -> Result<SpectrumReport> {
    let c = profile.speed;
    let eta = profile.eta;

    // (1) The wake state is linearly exponentially attracting.
    let wake_attracting = profile
        .state_minus
        .jac_eigenvalues
        .iter()
        .all(|e| e.re < 0.0);

    // (2) (0, -eta) is a pinched double root at the invaded state.
    let roots = find_double_roots(model, c, &profile.state_plus, SeedBox::default(), 81)?;
    let pinched_dr_at_zero = roots.iter().any(|r| {
        r.pinched
            && r.lambda.norm() < 1e-7
            && r.nu.re < 0.0
            && (r.nu.re + eta).abs() < 0.05 * eta.max(0.1)
            && r.nu.im.abs() < 1e-7
    });

    // (3) Weighted essential curves from both limits and weighted point
    // eigenvalues all lie in Re lambda <= tol.
    let mut essential = weighted_essential_spectrum(
        model,
        &profile.state_plus,
        c,
        eta,
        (-8.0, 8.0),
        513,
    )?;
    essential.extend(weighted_essential_spectrum(
        model,
        &profile.state_minus,
        c,
        eta,
        (-8.0, 8.0),
        513,
    )?);
    let essential_stable = essential.iter().all(|cv| cv.max_re() <= SPECTRUM_TOL);

    let lin = weighted_linearization(model, profile, eta, profile.n_nodes().min(4001))?;
    let mut point_eigs: Vec<f64> = Vec::new();
    let mut min_abs_eig = f64::INFINITY;
    match (&lin.blocks, &lin.dense) {
        (Some(blocks), _) => {
            for op in blocks {
                for e in point_spectrum_selfadjoint(op, 6) {
                    point_eigs.push(e);
                }
                let (diag, off) = op.tridiag();
                let top = sturm_top_eigenvalues(&diag, &off, 1, 1e-10)[0];
                // Smallest singular value proxy on decaying functions:
                // distance of the spectrum from zero.
                let below = crate::linalg::sturm_count(&diag, &off, 0.0);
                let n_tot = diag.len();
                // Eigenvalue nearest zero by bisecting around the count.
                let nearest = nearest_eigenvalue_to_zero(&diag, &off, below, n_tot);
                min_abs_eig = min_abs_eig.min(nearest.abs().min(top.abs()));
            }
        }
        (_, Some(dense)) => {
            let eigs = dense.clone().complex_eigenvalues();
            for e in eigs.iter() {
                // Filter discretized essential clusters: keep eigenvalues
                // farther than 1e-3 from every essential curve.
                let near_essential = essential.iter().any(|cv| {
                    cv.points.iter().any(|(_, lam)| {
                        (lam.re - e.re).hypot(lam.im - e.im) < 1e-3
                    })
                });
                min_abs_eig = min_abs_eig.min((e.re.powi(2) + e.im.powi(2)).sqrt());
                if !near_essential {
                    point_eigs.push(e.re);
                }
            }
        }
        _ => unreachable!(),
    }
    point_eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let points_stable = point_eigs.first().map(|&e| e <= SPECTRUM_TOL).unwrap_or(true);
    let weighted_spectrum_stable = essential_stable && points_stable;

    // (4) Generic tail and no weighted kernel.
    let no_weighted_kernel_but_generic_tail =
        profile.steepness == Steepness::Generic && min_abs_eig > KERNEL_TOL;

    let checklist = Checklist {
        wake_attracting,
        pinched_dr_at_zero,
        weighted_spectrum_stable,
        no_weighted_kernel_but_generic_tail,
    };
    let verdict = if profile.steepness == Steepness::Indeterminate {
        Verdict::Indeterminate
    } else if checklist.wake_attracting
        && checklist.pinched_dr_at_zero
        && checklist.weighted_spectrum_stable
        && checklist.no_weighted_kernel_but_generic_tail
    {
        Verdict::MarginallyStablePulled
    } else {
        Verdict::Unstable
    };

    Ok(SpectrumReport { eta, essential, point_eigs, checklist, verdict })
}

fn nearest_eigenvalue_to_zero(diag: &[f64], off: &[f64], below: usize, n: usize) -> f64 {
    // The eigenvalue just below zero (index below-1) and just above (below).
    let mut best = f64::INFINITY;
    let (lo, hi) = {
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let e_l = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let e_r = if i < n - 1 { off[i].abs() } else { 0.0 };
            lo = lo.min(diag[i] - e_l - e_r);
            hi = hi.max(diag[i] + e_l + e_r);
        }
        (lo - 1.0, hi + 1.0)
    };
    for target in [below.wrapping_sub(1), below] {
        if target >= n {
            continue;
        }
        let mut a = lo;
        let mut b = hi;
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if crate::linalg::sturm_count(diag, off, mid) <= target {
                a = mid;
            } else {
                b = mid;
            }
        }
        best = best.min((0.5 * (a + b)).abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Lcg;
    use crate::models::build_preset;
    use std::collections::BTreeMap;

    #[test]
    fn laplacian_dirichlet_eigenvalues() {
        // Zero potential, eta = 0, c = 0: eigenvalues -(j pi / 2L)^2.
        let l = 30.0;
        let n = 3001;
        let op = SchrodingerOperator {
            xi_min: -l,
            h: 2.0 * l / (n - 1) as f64,
            diffusion: 1.0,
            potential: vec![0.0; n],
            shift: 0.0,
        };
        let (diag, off) = op.tridiag();
        let eigs = sturm_top_eigenvalues(&diag, &off, 3, 1e-12);
        let h = op.h;
        for (j, e) in eigs.iter().enumerate() {
            // Continuum limit -(j pi / 2L)^2 and the exact discrete value.
            let continuum = -(((j + 1) as f64 * std::f64::consts::PI) / (2.0 * l)).powi(2);
            let discrete = -(4.0 / (h * h))
                * (((j + 1) as f64 * std::f64::consts::PI) / (2.0 * (n as f64 + 1.0))).sin().powi(2);
            assert!((e - continuum).abs() < 1e-4, "mode {j}: {e} vs {continuum}");
            assert!((e - discrete).abs() < 1e-10, "mode {j}: {e} vs discrete {discrete}");
        }
    }

    #[test]
    fn poeschl_teller_ground_state() {
        // V = 2 sech^2(x): top eigenvalue 1 with eigenfunction sech(x).
        let l = 30.0;
        let n = 60001;
        let h = 2.0 * l / (n - 1) as f64;
        let potential: Vec<f64> =
            (0..n).map(|k| 2.0 / (-l + h * k as f64).cosh().powi(2)).collect();
        let op =
            SchrodingerOperator { xi_min: -l, h, diffusion: 1.0, potential, shift: 0.0 };
        let top = point_spectrum_selfadjoint(&op, 1);
        assert_eq!(top.len(), 1);
        assert!((top[0] - 1.0).abs() <= 1e-6, "ground state {le}", le = top[0]);
    }

    #[test]
    fn poeschl_teller_grid_doubling_order() {
        let eig_at = |n: usize| -> f64 {
            let l = 30.0;
            let h = 2.0 * l / (n - 1) as f64;
            let potential: Vec<f64> =
                (0..n).map(|k| 2.0 / (-l + h * k as f64).cosh().powi(2)).collect();
            let op =
                SchrodingerOperator { xi_min: -l, h, diffusion: 1.0, potential, shift: 0.0 };
            point_spectrum_selfadjoint(&op, 1)[0]
        };
        let e1 = (eig_at(2001) - 1.0).abs();
        let e2 = (eig_at(4001) - 1.0).abs();
        let order = (e1 / e2).log2();
        assert!(order >= 1.8, "observed order {order}");
    }

    #[test]
    fn cgl_plus_operator_negative_semidefinite() {
        // L~_v^+ for alpha = 0.1, beta = 0.4: all eigenvalues <= 0.
        let op = cgl_weighted_v_operator(0.1, 0.4, 1.0, 60.0, 3001).unwrap();
        let top = top_eigenvalue(&op);
        assert!(top <= 1e-8, "top eigenvalue {top}");
    }

    #[test]
    fn cgl_minus_operator_positive_eigenvalue_small_alpha() {
        // At alpha = 0.05 < alpha_c and beta = beta_lin, a positive bound
        // state exists.
        let alpha = 0.05;
        let op =
            cgl_weighted_v_operator(alpha, beta_lin(alpha), -1.0, 60.0, 3001).unwrap();
        let eigs = point_spectrum_selfadjoint(&op, 2);
        assert!(!eigs.is_empty() && eigs[0] > POINT_MARGIN, "eigs {eigs:?}");
    }

    #[test]
    fn critical_beta_mechanisms() {
        // alpha = 0.25 > alpha_c: essential mechanism at beta_lin exactly.
        let (bc, mech) = critical_beta(0.25).unwrap();
        assert_eq!(mech, InstabilityMechanism::Essential);
        assert!((bc - beta_lin(0.25)).abs() < 1e-12);
        assert!((bc - 0.714435).abs() < 1e-5);

        // alpha = 0.05 < alpha_c: point mechanism strictly below beta_lin.
        let (bc, mech) = critical_beta(0.05).unwrap();
        assert_eq!(mech, InstabilityMechanism::Point);
        assert!(bc < beta_lin(0.05) - 1e-4, "bc = {bc}");
    }

    #[test]
    fn skew_sturm_exclusion() {
        for mu in [0.1, 0.3] {
            let mut p = BTreeMap::new();
            p.insert("mu".to_string(), mu);
            let model = build_preset("skew", &p).unwrap();
            let profile = skew_four_front(&model, mu);
            assert!(sturm_exclusion_check(&model, &profile).unwrap(), "mu = {mu}");
        }
    }

    #[test]
    fn sign_flipped_potential_fails_exclusion() {
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), 0.1);
        let model = build_preset("skew", &p).unwrap();
        let mut profile = skew_four_front(&model, 0.1);
        // Constructed violation: reflect the v-component so v_x > 0 regions
        // flip the sign of h(x).
        for v in profile.values[1].iter_mut() {
            *v = 1.0 - *v;
        }
        assert!(sturm_exclusion_check(&model, &profile).is_err());
    }

    fn skew_four_front(model: &ReactionModel, mu: f64) -> FrontProfile {
        let sm = equilibrium_from_state(model, vec![1.0, 1.0]);
        let sp = equilibrium_from_state(model, vec![0.0, 0.0]);
        let l = 40.0;
        let n_grid = 3201;
        let delta = std::f64::consts::PI / mu.sqrt();
        let init = tanh_connection(&sm.state, &sp.state, l, n_grid, 1.0, &[0.0, -delta]);
        let opts = BvpOptions { l, n_grid, ..Default::default() };
        solve_front_bvp(model, SpeedMode::Fixed(2.0), &sm, &sp, &opts, &init).unwrap()
    }

    #[test]
    fn nagumo_front_marginally_stable() {
        // Balanced cubic front from 1 to 0 at c = 2.
        let m = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let profile = crate::profiles::shoot_scalar_front(&m, 2.0, 1.0, 30.0).unwrap();
        let report = marginal_stability_report(&m, &profile).unwrap();
        assert_eq!(report.verdict, Verdict::MarginallyStablePulled, "{:?}", report.checklist);
    }

    #[test]
    fn skew_concatenated_front_marginally_stable() {
        let mu = 0.1;
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let model = build_preset("skew", &p).unwrap();
        let profile = skew_four_front(&model, mu);
        let report = marginal_stability_report(&model, &profile).unwrap();
        assert_eq!(report.verdict, Verdict::MarginallyStablePulled, "{:?}", report.checklist);
    }

    #[test]
    fn pushed_cgl_front_not_marginally_stable() {
        // beta above the pushed threshold: the critical-speed front fails
        // the checklist.
        let alpha = 0.02;
        let beta = beta_pushed(alpha) + 0.05;
        let front = cgl_real_front(alpha, beta, 1.0, 40.0, 3001).unwrap();
        let sub = cgl_real_subsystem(alpha, beta);
        let report = marginal_stability_report(&sub, &front).unwrap();
        assert_ne!(report.verdict, Verdict::MarginallyStablePulled);
    }

    #[test]
    fn weighted_block_matches_dispersion_limits() {
        // Essential curves from the weighted block boundary values agree
        // with the dispersion-module spectrum curves at the limits.
        let m = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let profile = crate::profiles::shoot_scalar_front(&m, 2.0, 1.0, 30.0).unwrap();
        let lin = weighted_linearization(&m, &profile, 1.0, 2001).unwrap();
        let block = &lin.blocks.as_ref().unwrap()[0];
        let v_plus = block.potential[block.n() - 1];
        let curves = weighted_essential_spectrum(
            &m,
            &profile.state_plus,
            2.0,
            1.0,
            (-3.0, 3.0),
            257,
        )
        .unwrap();
        // Parabola max of d_xx + V at k = 0 equals the curve maximum.
        let max_re = curves[0].max_re();
        assert!((v_plus - max_re).abs() < 1e-8, "{v_plus} vs {max_re}");
    }

    #[test]
    fn dense_and_sturm_agree_on_random_tridiagonal() {
        let mut rng = Lcg(77);
        for _ in 0..3 {
            let n = 200;
            let diag: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let off: Vec<f64> = (0..n - 1).map(|_| rng.uniform(-0.5, 0.5)).collect();
            let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                dense[(i, i)] = diag[i];
                if i + 1 < n {
                    dense[(i, i + 1)] = off[i];
                    dense[(i + 1, i)] = off[i];
                }
            }
            let mut oracle: Vec<f64> = dense.symmetric_eigenvalues().iter().cloned().collect();
            oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let top = sturm_top_eigenvalues(&diag, &off, 1, 1e-12)[0];
            assert!((top - oracle[0]).abs() < 1e-9);
        }
    }
}
