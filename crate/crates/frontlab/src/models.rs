//! Reaction-diffusion models `U_t = D U_xx + F(U)`.
//!
//! One- and two-component kinetics with exact Jacobians: the preset catalog
//! wraps the cubic Nagumo family, FitzHugh-Nagumo, the real and resonantly
//! forced complex Ginzburg-Landau systems, the skew-coupled staged-invasion
//! system and the interface saddle-node system. A terrace builder constructs
//! multistable scalar nonlinearities whose invasion steps all share the
//! linear spreading speed.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Lcg;

pub mod terrace;
pub use terrace::{build_terrace, TerraceSpec};

/// Stability type of an equilibrium, from the kinetics Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Saddle,
    Unstable,
}

/// A zero of the reaction map with its Jacobian spectrum.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub state: Vec<f64>,
    pub jac_eigenvalues: Vec<Complex64>,
    pub stability: Stability,
}

impl Equilibrium {
    pub fn is_linearly_stable(&self) -> bool {
        self.stability == Stability::Stable
    }
}

/// Kinetics variants. All reaction maps and Jacobians are exact closed forms.
#[derive(Debug, Clone)]
pub enum ModelKind {
    /// Scalar polynomial f(u) = sum coeffs[k] u^k.
    ScalarPoly { coeffs: Vec<f64> },
    /// Terrace nonlinearity: base polynomial with per-step speed-equalizing
    /// boosts and detuning bumps.
    Terrace(terrace::TerraceData),
    /// u_t = u_xx + u(1-u)(u-a) - v, v_t = d_v v_xx + eps (u - gamma v + b).
    Fhn { a: f64, b: f64, gamma: f64, eps: f64 },
    /// Real Ginzburg-Landau / forced CGL in real variables. `plus_coupling`
    /// selects the +2 beta u v variant of the v-equation.
    ForcedCgl { alpha: f64, beta: f64, plus_coupling: bool },
    /// u_t = u_xx + u - u^3, v_t = v_xx + (2u^2 - 1 + mu)(v - v^3).
    Skew { mu: f64 },
    /// u_t = u_xx + u - u^3, v_t = v_xx + mu (u-u^3) v - v^3 + delta (u-u^3).
    InterfaceSn { mu: f64, delta: f64 },
    /// Decoupled diagonal two-component polynomial system (toys, tests).
    Diag2 { coeffs: [Vec<f64>; 2] },
}

/// A reaction-diffusion system: diagonal diffusion plus kinetics.
#[derive(Debug, Clone)]
pub struct ReactionModel {
    pub name: String,
    pub n_components: usize,
    pub diffusion: Vec<f64>,
    pub params: BTreeMap<String, f64>,
    pub kind: ModelKind,
}

fn poly_eval(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

fn poly_deriv_eval(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..coeffs.len()).rev() {
        acc = acc * u + coeffs[k] * k as f64;
    }
    acc
}

impl ReactionModel {
    pub fn scalar_poly(name: &str, coeffs: Vec<f64>) -> Self {
        ReactionModel {
            name: name.to_string(),
            n_components: 1,
            diffusion: vec![1.0],
            params: BTreeMap::new(),
            kind: ModelKind::ScalarPoly { coeffs },
        }
    }

    /// Evaluate the reaction map F(U).
    pub fn reaction(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.n_components);
        match &self.kind {
            ModelKind::ScalarPoly { coeffs } => out[0] = poly_eval(coeffs, u[0]),
            ModelKind::Terrace(data) => out[0] = data.eval(u[0]),
            ModelKind::Fhn { a, b, gamma, eps } => {
                out[0] = u[0] * (1.0 - u[0]) * (u[0] - a) - u[1];
                out[1] = eps * (u[0] - gamma * u[1] + b);
            }
            ModelKind::ForcedCgl { alpha, beta, plus_coupling } => {
                let (x, v) = (u[0], u[1]);
                let r2 = x * x + v * v;
                out[0] = (1.0 + alpha) * x + beta * (x * x - v * v) - x * r2;
                let coupling = if *plus_coupling { 2.0 } else { -2.0 };
                out[1] = (1.0 - alpha) * v + coupling * beta * x * v - v * r2;
            }
            ModelKind::Skew { mu } => {
                let (x, v) = (u[0], u[1]);
                out[0] = x - x * x * x;
                out[1] = (2.0 * x * x - 1.0 + mu) * (v - v * v * v);
            }
            ModelKind::InterfaceSn { mu, delta } => {
                let (x, v) = (u[0], u[1]);
                let w = x - x * x * x;
                out[0] = w;
                out[1] = mu * w * v - v * v * v + delta * w;
            }
            ModelKind::Diag2 { coeffs } => {
                out[0] = poly_eval(&coeffs[0], u[0]);
                out[1] = poly_eval(&coeffs[1], u[1]);
            }
        }
    }

    /// Jacobian F'(U), row-major n x n.
    pub fn jacobian(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.n_components);
        match &self.kind {
            ModelKind::ScalarPoly { coeffs } => out[0] = poly_deriv_eval(coeffs, u[0]),
            ModelKind::Terrace(data) => out[0] = data.eval_deriv(u[0]),
            ModelKind::Fhn { a, gamma, eps, .. } => {
                let x = u[0];
                out[0] = (1.0 - x) * (x - a) + x * (-(x - a)) + x * (1.0 - x);
                out[1] = -1.0;
                out[2] = *eps;
                out[3] = -eps * gamma;
            }
            ModelKind::ForcedCgl { alpha, beta, plus_coupling } => {
                let (x, v) = (u[0], u[1]);
                let coupling = if *plus_coupling { 2.0 } else { -2.0 };
                out[0] = (1.0 + alpha) + 2.0 * beta * x - 3.0 * x * x - v * v;
                out[1] = -2.0 * beta * v - 2.0 * x * v;
                out[2] = coupling * beta * v - 2.0 * x * v;
                out[3] = (1.0 - alpha) + coupling * beta * x - x * x - 3.0 * v * v;
            }
            ModelKind::Skew { mu } => {
                let (x, v) = (u[0], u[1]);
                out[0] = 1.0 - 3.0 * x * x;
                out[1] = 0.0;
                out[2] = 4.0 * x * (v - v * v * v);
                out[3] = (2.0 * x * x - 1.0 + mu) * (1.0 - 3.0 * v * v);
            }
            ModelKind::InterfaceSn { mu, delta } => {
                let (x, v) = (u[0], u[1]);
                let wp = 1.0 - 3.0 * x * x;
                out[0] = wp;
                out[1] = 0.0;
                out[2] = (mu * v + delta) * wp;
                out[3] = mu * (x - x * x * x) - 3.0 * v * v;
            }
            ModelKind::Diag2 { coeffs } => {
                out[0] = poly_deriv_eval(&coeffs[0], u[0]);
                out[1] = 0.0;
                out[2] = 0.0;
                out[3] = poly_deriv_eval(&coeffs[1], u[1]);
            }
        }
    }

    /// Jacobian as a small owned matrix.
    pub fn jacobian_at(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n_components;
        let mut j = vec![0.0; n * n];
        self.jacobian(u, &mut j);
        j
    }

    /// Eigenvalues of the kinetics Jacobian at a state (n <= 2).
    pub fn jacobian_eigenvalues(&self, u: &[f64]) -> Vec<Complex64> {
        let j = self.jacobian_at(u);
        match self.n_components {
            1 => vec![Complex64::new(j[0], 0.0)],
            2 => {
                let tr = j[0] + j[3];
                let det = j[0] * j[3] - j[1] * j[2];
                let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
                vec![
                    (Complex64::new(tr, 0.0) + disc) * 0.5,
                    (Complex64::new(tr, 0.0) - disc) * 0.5,
                ]
            }
            _ => unreachable!("only 1- or 2-component systems are supported"),
        }
    }
}

/// Evaluate F(U) with a dimension contract check.
pub fn eval_reaction(model: &ReactionModel, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != model.n_components {
        return Err(Error::Contract(format!(
            "eval_reaction: state has dimension {}, model has {} components",
            u.len(),
            model.n_components
        )));
    }
    let mut out = vec![0.0; model.n_components];
    model.reaction(u, &mut out);
    Ok(out)
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const DEDUP_DIST: f64 = 1e-6;

fn classify(eigs: &[Complex64]) -> Stability {
    let any_pos = eigs.iter().any(|e| e.re > 0.0);
    let any_neg = eigs.iter().any(|e| e.re <= 0.0);
    match (any_pos, any_neg) {
        (true, true) => Stability::Saddle,
        (true, false) => Stability::Unstable,
        _ => Stability::Stable,
    }
}

/// Newton refinement of equilibria seeded on a grid over `bounds`
/// (one (lo, hi) pair per component). Non-convergent seeds are dropped.
pub fn find_equilibria(
    model: &ReactionModel,
    bounds: &[(f64, f64)],
    grid: usize,
) -> Result<Vec<Equilibrium>> {
    if grid < 8 {
        return Err(Error::Contract("find_equilibria: grid must be >= 8".into()));
    }
    if bounds.len() != model.n_components {
        return Err(Error::Contract(
            "find_equilibria: bounds dimension must match model".into(),
        ));
    }
    let n = model.n_components;
    let mut found: Vec<Vec<f64>> = Vec::new();

    let mut seeds: Vec<Vec<f64>> = Vec::new();
    match n {
        1 => {
            let (lo, hi) = bounds[0];
            for i in 0..=grid {
                seeds.push(vec![lo + (hi - lo) * i as f64 / grid as f64]);
            }
        }
        2 => {
            for i in 0..=grid {
                for j in 0..=grid {
                    let x = bounds[0].0 + (bounds[0].1 - bounds[0].0) * i as f64 / grid as f64;
                    let y = bounds[1].0 + (bounds[1].1 - bounds[1].0) * j as f64 / grid as f64;
                    seeds.push(vec![x, y]);
                }
            }
        }
        _ => unreachable!(),
    }

    let mut f = vec![0.0; n];
    for seed in seeds {
        let mut u = seed;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            model.reaction(&u, &mut f);
            let norm = f.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if norm < NEWTON_TOL {
                converged = true;
                break;
            }
            let j = model.jacobian_at(&u);
            let step = match n {
                1 => {
                    if j[0] == 0.0 {
                        break;
                    }
                    vec![f[0] / j[0]]
                }
                2 => {
                    let det = j[0] * j[3] - j[1] * j[2];
                    if det.abs() < 1e-300 {
                        break;
                    }
                    vec![(f[0] * j[3] - f[1] * j[1]) / det, (f[1] * j[0] - f[0] * j[2]) / det]
                }
                _ => unreachable!(),
            };
            let mut moved = 0.0;
            for k in 0..n {
                u[k] -= step[k];
                moved += step[k].abs();
            }
            if !moved.is_finite() {
                break;
            }
        }
        if !converged {
            continue;
        }
        // De-duplicate and keep roots inside a modest inflation of the box.
        let inside = (0..n).all(|k| {
            let (lo, hi) = bounds[k];
            let pad = 0.05 * (hi - lo);
            u[k] >= lo - pad && u[k] <= hi + pad
        });
        if !inside {
            continue;
        }
        let dup = found.iter().any(|v| {
            v.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < DEDUP_DIST
        });
        if !dup {
            found.push(u);
        }
    }

    found.sort_by(|a, b| {
        for k in 0..n {
            match a[k].partial_cmp(&b[k]).unwrap() {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });

    Ok(found
        .into_iter()
        .map(|state| {
            let eigs = model.jacobian_eigenvalues(&state);
            let stability = classify(&eigs);
            Equilibrium { state, jac_eigenvalues: eigs, stability }
        })
        .collect())
}

/// Equilibrium record at a given state (assumed to be a rest state of the
/// kinetics): Jacobian eigenvalues and stability classification.
pub fn equilibrium_at(model: &ReactionModel, state: Vec<f64>) -> Equilibrium {
    let eigs = model.jacobian_eigenvalues(&state);
    let stability = classify(&eigs);
    Equilibrium { state, jac_eigenvalues: eigs, stability }
}

/// Locate the catalogued equilibrium nearest to `state` within `tol` (max norm).
pub fn nearest_equilibrium<'a>(
    equilibria: &'a [Equilibrium],
    state: &[f64],
    tol: f64,
) -> Option<(usize, &'a Equilibrium)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, eq) in equilibria.iter().enumerate() {
        let d = eq
            .state
            .iter()
            .zip(state)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if d <= tol && best.map(|(_, bd)| d < bd).unwrap_or(true) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| (i, &equilibria[i]))
}

// ---------------------------------------------------------------------------
// Preset catalog
// ---------------------------------------------------------------------------

pub const PRESET_NAMES: [&str; 6] =
    ["nagumo", "fhn", "cgl_real", "forced_cgl", "skew", "interface_sn"];

fn get_param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Build a preset by name. Unknown names produce a catalog-miss error;
/// parameters not listed for the preset are rejected.
pub fn build_preset(name: &str, params: &BTreeMap<String, f64>) -> Result<ReactionModel> {
    let allowed: &[&str] = match name {
        "nagumo" => &["a"],
        "fhn" => &["a", "b", "gamma", "eps", "d_v"],
        "cgl_real" => &[],
        "forced_cgl" => &["alpha", "beta", "plus_coupling"],
        "skew" => &["mu"],
        "interface_sn" => &["mu", "delta"],
        _ => {
            return Err(Error::CatalogMiss(name.to_string(), PRESET_NAMES.join(", ")));
        }
    };
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "preset `{name}` does not take parameter `{key}` (accepted: {})",
                allowed.join(", ")
            )));
        }
    }

    let mut echo = params.clone();
    let model = match name {
        "nagumo" => {
            // f(u) = u (1-u) (u-a) = -a u + (1+a) u^2 - u^3.
            let a = get_param(params, "a", -1.0);
            echo.insert("a".into(), a);
            ReactionModel {
                name: "nagumo".into(),
                n_components: 1,
                diffusion: vec![1.0],
                params: echo,
                kind: ModelKind::ScalarPoly { coeffs: vec![0.0, -a, 1.0 + a, -1.0] },
            }
        }
        "fhn" => {
            let a = get_param(params, "a", -0.2);
            let b = get_param(params, "b", 0.0);
            let gamma = get_param(params, "gamma", 0.0);
            // eps = 0.01 would make F'(0) a Jordan block (tr^2 = 4 det) and
            // d_c a perfect square; keep the default away from that set.
            let eps = get_param(params, "eps", 0.05);
            let d_v = get_param(params, "d_v", 1.0);
            echo.insert("a".into(), a);
            echo.insert("b".into(), b);
            echo.insert("gamma".into(), gamma);
            echo.insert("eps".into(), eps);
            echo.insert("d_v".into(), d_v);
            ReactionModel {
                name: "fhn".into(),
                n_components: 2,
                diffusion: vec![1.0, d_v],
                params: echo,
                kind: ModelKind::Fhn { a, b, gamma, eps },
            }
        }
        "cgl_real" => ReactionModel {
            name: "cgl_real".into(),
            n_components: 2,
            diffusion: vec![1.0, 1.0],
            params: echo,
            kind: ModelKind::ForcedCgl { alpha: 0.0, beta: 0.0, plus_coupling: false },
        },
        "forced_cgl" => {
            let alpha = get_param(params, "alpha", 0.02);
            let beta = get_param(params, "beta", 0.5);
            let plus = get_param(params, "plus_coupling", 0.0) != 0.0;
            echo.insert("alpha".into(), alpha);
            echo.insert("beta".into(), beta);
            ReactionModel {
                name: "forced_cgl".into(),
                n_components: 2,
                diffusion: vec![1.0, 1.0],
                params: echo,
                kind: ModelKind::ForcedCgl { alpha, beta, plus_coupling: plus },
            }
        }
        "skew" => {
            let mu = get_param(params, "mu", 0.1);
            echo.insert("mu".into(), mu);
            ReactionModel {
                name: "skew".into(),
                n_components: 2,
                diffusion: vec![1.0, 1.0],
                params: echo,
                kind: ModelKind::Skew { mu },
            }
        }
        "interface_sn" => {
            let mu = get_param(params, "mu", 3.7);
            let delta = get_param(params, "delta", 1e-3);
            echo.insert("mu".into(), mu);
            echo.insert("delta".into(), delta);
            ReactionModel {
                name: "interface_sn".into(),
                n_components: 2,
                diffusion: vec![1.0, 1.0],
                params: echo,
                kind: ModelKind::InterfaceSn { mu, delta },
            }
        }
        _ => unreachable!(),
    };

    for (i, d) in model.diffusion.iter().enumerate() {
        // FHN is the one preset with an optionally vanishing v-diffusion.
        if *d < 0.0 || (*d == 0.0 && i == 0) {
            return Err(Error::InvalidSpec(format!(
                "diffusion coefficient {i} must be positive, got {d}"
            )));
        }
    }
    Ok(model)
}

/// The scalar real subsystem u_t = u_xx + (1+alpha) u + beta u^2 - u^3 of the
/// forced CGL equation (v = 0 invariant subspace).
pub fn cgl_real_subsystem(alpha: f64, beta: f64) -> ReactionModel {
    ReactionModel::scalar_poly("cgl_real_subsystem", vec![0.0, 1.0 + alpha, beta, -1.0])
}

/// Nonzero equilibria u_pm = (beta -+ sqrt(4 + 4 alpha + beta^2)) / 2 of the
/// real subsystem.
pub fn cgl_u_plus_minus(alpha: f64, beta: f64) -> (f64, f64) {
    let s = (4.0 + 4.0 * alpha + beta * beta).sqrt();
    (0.5 * (beta + s), 0.5 * (beta - s))
}

/// Finite-difference Jacobian used by validation tests.
pub fn fd_jacobian(model: &ReactionModel, u: &[f64], h: f64) -> Vec<f64> {
    let n = model.n_components;
    let mut out = vec![0.0; n * n];
    let mut up = u.to_vec();
    let mut um = u.to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for j in 0..n {
        up[j] = u[j] + h;
        um[j] = u[j] - h;
        model.reaction(&up, &mut fp);
        model.reaction(&um, &mut fm);
        for i in 0..n {
            out[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
        up[j] = u[j];
        um[j] = u[j];
    }
    out
}

/// Deterministic sample states in [-2, 2]^n for property checks.
pub fn sample_states(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = Lcg(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect())
        .collect()
}
