//! Terrace nonlinearities: scalar kinetics with a ladder of stable states
//! `0 = u_0 < u_1 < ... < u_N`, engineered so that every invasion step
//! travels at the linear spreading speed `c_lin = 2 sqrt(f'(0)) = 2`.
//!
//! Construction: a base product polynomial with simple zeros at all levels
//! and at one intermediate unstable state per upper step; a multiplicative
//! compactly supported boost per step, tuned by bisection so the step front
//! speed equals `c_lin`; and an additive detuning bump, scaled by the
//! per-level `detune`, that breaks each step heteroclinic so the unstable
//! manifold of `u_l` passes below the saddle `u_{l-1}` and connects to 0
//! directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, ReactionModel};

/// Specification for [`build_terrace`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TerraceSpec {
    /// Number of stable levels above zero (N >= 1).
    pub n_levels: usize,
    /// Sorted levels `0 = u_0 < u_1 < ... < u_N`.
    pub levels: Vec<f64>,
    /// Closed modification intervals `J_l` inside the gap `(u_{l-1}, u_l)`,
    /// one per step; defaults to the middle 60% of each gap.
    #[serde(default)]
    pub modification_intervals: Option<Vec<(f64, f64)>>,
    /// Per-step detuning amplitude `eps_l >= 0` (length N); entry `l-1`
    /// controls how far the broken heteroclinic of step `l` misses the next
    /// saddle.
    pub detune: Vec<f64>,
}

impl TerraceSpec {
    /// Integer levels 0..=N with uniform detune.
    pub fn integer_levels(n: usize, detune: f64) -> Self {
        TerraceSpec {
            n_levels: n,
            levels: (0..=n).map(|k| k as f64).collect(),
            modification_intervals: None,
            detune: vec![detune; n],
        }
    }
}

/// C^2 compactly supported bump on `[lo, hi]`, normalized to max 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
    pub amp: f64,
}

impl Bump {
    fn shape(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            64.0 * (s * (1.0 - s)).powi(3)
        }
    }

    fn shape_deriv(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            64.0 * 3.0 * (s * (1.0 - s)).powi(2) * (1.0 - 2.0 * s)
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let s = (u - self.lo) / (self.hi - self.lo);
        self.amp * Self::shape(s)
    }

    pub fn eval_deriv(&self, u: f64) -> f64 {
        let s = (u - self.lo) / (self.hi - self.lo);
        self.amp * Self::shape_deriv(s) / (self.hi - self.lo)
    }
}

/// Evaluation data for a built terrace nonlinearity:
/// `f(u) = p(u) (1 + sum boosts) + sum detunes`.
#[derive(Debug, Clone)]
pub struct TerraceData {
    /// Base polynomial coefficients, ascending.
    pub base: Vec<f64>,
    pub boosts: Vec<Bump>,
    pub detunes: Vec<Bump>,
    pub levels: Vec<f64>,
}

impl TerraceData {
    pub fn eval(&self, u: f64) -> f64 {
        let mut p = 0.0;
        for &c in self.base.iter().rev() {
            p = p * u + c;
        }
        let mut boost = 1.0;
        for b in &self.boosts {
            boost += b.eval(u);
        }
        let mut f = p * boost;
        for d in &self.detunes {
            f += d.eval(u);
        }
        f
    }

    pub fn eval_deriv(&self, u: f64) -> f64 {
        let mut p = 0.0;
        for &c in self.base.iter().rev() {
            p = p * u + c;
        }
        let mut dp = 0.0;
        for k in (1..self.base.len()).rev() {
            dp = dp * u + self.base[k] * k as f64;
        }
        let mut boost = 1.0;
        let mut dboost = 0.0;
        for b in &self.boosts {
            boost += b.eval(u);
            dboost += b.eval_deriv(u);
        }
        let mut df = dp * boost + p * dboost;
        for d in &self.detunes {
            df += d.eval_deriv(u);
        }
        df
    }
}

/// Expand a monic polynomial from its roots, ascending coefficients.
fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Build the terrace model. Validates the spec, constructs the base
/// polynomial (normalized to `f'(0) = 1`, hence `c_lin = 2`), equalizes each
/// upper step's front speed to 2 by a multiplicative boost inside `J_l`, and
/// applies the additive detuning bumps.
pub fn build_terrace(spec: &TerraceSpec) -> Result<ReactionModel> {
    let n = spec.n_levels;
    if n < 1 {
        return Err(Error::InvalidSpec("terrace: n_levels must be >= 1".into()));
    }
    if spec.levels.len() != n + 1 {
        return Err(Error::InvalidSpec(format!(
            "terrace: expected {} levels, got {}",
            n + 1,
            spec.levels.len()
        )));
    }
    if spec.levels[0].abs() > 1e-14 {
        return Err(Error::InvalidSpec("terrace: levels must start at 0".into()));
    }
    for w in spec.levels.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidSpec("terrace: levels must be strictly increasing".into()));
        }
    }
    if spec.detune.len() != n {
        return Err(Error::InvalidSpec(format!(
            "terrace: expected {} detune entries, got {}",
            n,
            spec.detune.len()
        )));
    }
    if spec.detune.iter().any(|&e| e < 0.0) {
        return Err(Error::InvalidSpec("terrace: detune entries must be >= 0".into()));
    }

    // Modification intervals, one per step, interior to their gaps.
    let intervals: Vec<(f64, f64)> = match &spec.modification_intervals {
        Some(iv) => {
            if iv.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "terrace: expected {n} modification intervals, got {}",
                    iv.len()
                )));
            }
            for (l, &(lo, hi)) in iv.iter().enumerate() {
                let (a, b) = (spec.levels[l], spec.levels[l + 1]);
                if !(a < lo && lo < hi && hi < b) {
                    return Err(Error::InvalidSpec(format!(
                        "terrace: interval J_{} = [{lo}, {hi}] not interior to ({a}, {b})",
                        l + 1
                    )));
                }
            }
            iv.clone()
        }
        None => (0..n)
            .map(|l| {
                let (a, b) = (spec.levels[l], spec.levels[l + 1]);
                let gap = b - a;
                (a + 0.2 * gap, b - 0.2 * gap)
            })
            .collect(),
    };

    // Base polynomial: simple zeros at every level plus one intermediate
    // unstable zero per upper step, placed in the lower quarter of the gap so
    // each step carries positive mass (positive front speed to boost from).
    let mut roots = vec![0.0, spec.levels[1]];
    for l in 2..=n {
        let (a, b) = (spec.levels[l - 1], spec.levels[l]);
        roots.push(a + 0.25 * (b - a));
        roots.push(b);
    }
    let monic = poly_from_roots(&roots);
    let dp0 = monic[1]; // p(0) = 0, so p'(0) is the linear coefficient
    if dp0 == 0.0 {
        return Err(Error::InvalidSpec("terrace: degenerate base polynomial".into()));
    }
    let base: Vec<f64> = monic.iter().map(|c| c / dp0).collect();

    let mut data = TerraceData {
        base,
        boosts: Vec::new(),
        detunes: Vec::new(),
        levels: spec.levels.clone(),
    };

    // Sanity of the sign structure before tuning.
    if data.eval_deriv(0.0) <= 0.0 {
        return Err(Error::InvalidSpec("terrace: f'(0) <= 0 after normalization".into()));
    }

    // Equalize upper step speeds to c_lin = 2: the step front speed is
    // monotone in the boost amplitude, so bisecting the overshoot predicate
    // at c = c_lin locates the amplitude with speed exactly c_lin.
    let c_lin = 2.0;
    for l in 2..=n {
        let (jlo, jhi) = intervals[l - 1];
        let from = spec.levels[l];
        let to = spec.levels[l - 1];
        let overshoots_at = |data: &TerraceData, amp: f64| -> bool {
            let mut probe = data.clone();
            probe.boosts.push(Bump { lo: jlo, hi: jhi, amp });
            shoot_overshoots(&probe, c_lin, from, to)
        };
        if overshoots_at(&data, 0.0) {
            return Err(Error::InvalidSpec(format!(
                "terrace: step {l} already faster than c_lin without boost"
            )));
        }
        let mut b_lo = 0.0;
        let mut b_hi = 1.0;
        let mut expand = 0;
        while !overshoots_at(&data, b_hi) {
            b_lo = b_hi;
            b_hi *= 2.0;
            expand += 1;
            if expand > 24 {
                return Err(Error::AnalysisFailure(format!(
                    "terrace: step {l} speed cannot reach c_lin = 2"
                )));
            }
        }
        for _ in 0..50 {
            let mid = 0.5 * (b_lo + b_hi);
            if overshoots_at(&data, mid) {
                b_hi = mid;
            } else {
                b_lo = mid;
            }
            if b_hi - b_lo < 1e-12 * (1.0 + b_hi) {
                break;
            }
        }
        data.boosts.push(Bump { lo: jlo, hi: jhi, amp: 0.5 * (b_lo + b_hi) });
    }

    // Detuning bumps (additive, raising f slightly so each step overshoots).
    for l in 1..=n {
        let eps = spec.detune[l - 1];
        if eps > 0.0 {
            let (jlo, jhi) = intervals[l - 1];
            data.detunes.push(Bump { lo: jlo, hi: jhi, amp: eps });
        }
    }

    // Verify the terrace invariants by evaluation.
    for (l, &ul) in spec.levels.iter().enumerate() {
        if data.eval(ul).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!("terrace: f(u_{l}) != 0 after build")));
        }
        if l >= 1 && data.eval_deriv(ul) >= 0.0 {
            return Err(Error::InvalidSpec(format!("terrace: f'(u_{l}) >= 0 after build")));
        }
    }

    let mut params = std::collections::BTreeMap::new();
    params.insert("n_levels".to_string(), n as f64);
    Ok(ReactionModel {
        name: "terrace".into(),
        n_components: 1,
        diffusion: vec![1.0],
        params,
        kind: ModelKind::Terrace(data),
    })
}

/// Speed of the step front connecting `from` (at -inf) to `to` (at +inf),
/// located by bisection on c with phase-plane shooting: at speeds below the
/// front speed the unstable manifold of `from` overshoots below the saddle
/// `(to, 0)`; above it, it turns around early.
fn step_front_speed(data: &TerraceData, from: f64, to: f64) -> f64 {
    let mut c_lo = 0.0;
    let mut c_hi = 20.0;
    for _ in 0..52 {
        let c = 0.5 * (c_lo + c_hi);
        if shoot_overshoots(data, c, from, to) {
            c_lo = c;
        } else {
            c_hi = c;
        }
        if c_hi - c_lo < 1e-11 {
            break;
        }
    }
    0.5 * (c_lo + c_hi)
}

/// RK4 integration of u' = w, w' = -c w - f(u) from the descending unstable
/// eigendirection of `(from, 0)`. Returns true when the trajectory crosses
/// `u = to` with w < 0 (overshoot), false when it turns around first.
fn shoot_overshoots(data: &TerraceData, c: f64, from: f64, to: f64) -> bool {
    let fprime = data.eval_deriv(from);
    // from is a stable PDE state: spatial saddle, one positive rate.
    let s_u = 0.5 * (-c + (c * c - 4.0 * fprime).max(0.0).sqrt());
    let delta = 1e-7 * (from - to).abs();
    let mut u = from - delta;
    let mut w = -delta * s_u;
    // Step bounded by the stiffest local rate on the step.
    let mut l_max = 1.0f64;
    for s in 0..=100 {
        let uu = to + (from - to) * s as f64 / 100.0;
        l_max = l_max.max(data.eval_deriv(uu).abs());
    }
    let h = (2e-3f64).min(0.2 / l_max.sqrt());
    let rhs = |u: f64, w: f64| -> (f64, f64) { (w, -c * w - data.eval(u)) };
    let mut steps = 0usize;
    loop {
        let (k1u, k1w) = rhs(u, w);
        let (k2u, k2w) = rhs(u + 0.5 * h * k1u, w + 0.5 * h * k1w);
        let (k3u, k3w) = rhs(u + 0.5 * h * k2u, w + 0.5 * h * k2w);
        let (k4u, k4w) = rhs(u + h * k3u, w + h * k3w);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if u <= to {
            return w < 0.0;
        }
        if w >= 0.0 {
            return false;
        }
        // Creeping into the saddle: on the connection boundary itself.
        if u - to < 1e-9 && w.abs() < 1e-8 {
            return false;
        }
        steps += 1;
        if steps as f64 * h > 2000.0 {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_is_kpp_like() {
        let spec = TerraceSpec::integer_levels(1, 0.0);
        let m = build_terrace(&spec).unwrap();
        if let ModelKind::Terrace(d) = &m.kind {
            assert!((d.eval(0.0)).abs() < 1e-14);
            assert!((d.eval(1.0)).abs() < 1e-12);
            assert!((d.eval_deriv(0.0) - 1.0).abs() < 1e-12);
            assert!(d.eval_deriv(1.0) < 0.0);
        } else {
            panic!("wrong kind");
        }
    }

    #[test]
    fn three_levels_signs_verified() {
        let spec = TerraceSpec::integer_levels(3, 0.0);
        let m = build_terrace(&spec).unwrap();
        if let ModelKind::Terrace(d) = &m.kind {
            for l in 0..=3 {
                assert!(d.eval(l as f64).abs() < 1e-10, "f({l}) != 0");
            }
            assert!(d.eval_deriv(0.0) > 0.0);
            for l in 1..=3 {
                assert!(d.eval_deriv(l as f64) < 0.0, "f'({l}) not negative");
            }
        } else {
            panic!("wrong kind");
        }
    }

    #[test]
    fn equalized_step_speeds_are_two() {
        let spec = TerraceSpec::integer_levels(3, 0.0);
        let m = build_terrace(&spec).unwrap();
        if let ModelKind::Terrace(d) = &m.kind {
            for l in 2..=3 {
                let c = step_front_speed(d, l as f64, (l - 1) as f64);
                assert!((c - 2.0).abs() < 1e-6, "step {l} speed {c}");
            }
        }
    }

    #[test]
    fn invalid_levels_rejected() {
        let spec = TerraceSpec {
            n_levels: 2,
            levels: vec![0.0, 1.0, 0.5],
            modification_intervals: None,
            detune: vec![0.0, 0.0],
        };
        assert!(matches!(build_terrace(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn bump_is_c2_at_endpoints() {
        let b = Bump { lo: 0.0, hi: 1.0, amp: 1.0 };
        for eps in [1e-7, 1e-5, 1e-3] {
            assert!(b.eval(eps) < 70.0 * eps * eps * eps);
            assert!(b.eval_deriv(eps).abs() < 200.0 * eps * eps);
            assert!(b.eval(1.0 - eps) < 70.0 * eps * eps * eps);
        }
        assert_eq!(b.eval(-0.1), 0.0);
        assert_eq!(b.eval(1.1), 0.0);
        assert!((b.eval(0.5) - 1.0).abs() < 1e-14);
    }
}
