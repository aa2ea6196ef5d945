//! Linear spreading theory.
//!
//! For a linearization `U_t = D U_xx + c U_x + J U` at an equilibrium, the
//! dispersion determinant is
//!
//! ```text
//! d_c(lambda, nu) = det(D nu^2 + c nu I + J - lambda I),
//! ```
//!
//! satisfying `d_c(lambda, nu) = d(lambda - c nu, nu)` with `d` the
//! steady-frame determinant. Pointwise growth is governed by pinched double
//! roots: solutions of `d_c = 0`, `d_nu d_c = 0` whose colliding spatial
//! roots `nu_pm(lambda)` originate from `Re nu -> +-inf` as `Re lambda ->
//! +inf`. The linear spreading speed is the largest frame speed at which a
//! pinched double root still sits on the imaginary axis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{Equilibrium, ReactionModel};
use crate::polyroots::poly_roots;

type C = Complex64;

// ---------------------------------------------------------------------------
// Dispersion polynomial
// ---------------------------------------------------------------------------

/// `d_c(lambda, nu)` as a bivariate polynomial: `coeff[i][j]` multiplies
/// `lambda^i nu^j`. Real coefficients; degree in nu is at most `2 n`.
#[derive(Debug, Clone)]
pub struct DispersionPoly {
    pub coeff: Vec<Vec<f64>>,
    pub c: f64,
}

impl DispersionPoly {
    /// Assemble for the linearization at `state` in a frame of speed `c`.
    pub fn new(model: &ReactionModel, c: f64, state: &[f64]) -> Self {
        let j = model.jacobian_at(state);
        let d = &model.diffusion;
        let coeff = match model.n_components {
            1 => {
                // d nu^2 + c nu + J - lambda
                vec![vec![j[0], c, d[0]], vec![-1.0, 0.0, 0.0]]
            }
            2 => {
                // (q1 - lambda)(q2 - lambda) - J12 J21,
                // q_i = d_i nu^2 + c nu + J_ii.
                let q1 = [j[0], c, d[0]];
                let q2 = [j[3], c, d[1]];
                let mut prod = vec![0.0; 5];
                for (a, qa) in q1.iter().enumerate() {
                    for (b, qb) in q2.iter().enumerate() {
                        prod[a + b] += qa * qb;
                    }
                }
                prod[0] -= j[1] * j[2];
                let lin: Vec<f64> = (0..5)
                    .map(|k| {
                        let mut v = 0.0;
                        if k < 3 {
                            v -= q1[k] + q2[k];
                        }
                        v
                    })
                    .collect();
                vec![prod, lin, vec![1.0, 0.0, 0.0, 0.0, 0.0]]
            }
            _ => unreachable!(),
        };
        DispersionPoly { coeff, c }
    }

    pub fn eval(&self, lambda: C, nu: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for row in self.coeff.iter().rev() {
            let mut p = C::new(0.0, 0.0);
            for &cf in row.iter().rev() {
                p = p * nu + cf;
            }
            acc = acc * lambda + p;
        }
        acc
    }

    pub fn d_nu(&self, lambda: C, nu: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for row in self.coeff.iter().rev() {
            let mut p = C::new(0.0, 0.0);
            for k in (1..row.len()).rev() {
                p = p * nu + row[k] * k as f64;
            }
            acc = acc * lambda + p;
        }
        acc
    }

    pub fn d_nu_nu(&self, lambda: C, nu: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for row in self.coeff.iter().rev() {
            let mut p = C::new(0.0, 0.0);
            for k in (2..row.len()).rev() {
                p = p * nu + row[k] * (k * (k - 1)) as f64;
            }
            acc = acc * lambda + p;
        }
        acc
    }

    pub fn d_lambda(&self, lambda: C, nu: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (i, row) in self.coeff.iter().enumerate().skip(1).rev() {
            let mut p = C::new(0.0, 0.0);
            for &cf in row.iter().rev() {
                p = p * nu + cf;
            }
            acc = acc + p * i as f64 * lambda.powu((i - 1) as u32);
        }
        acc
    }

    pub fn d_lambda_nu(&self, lambda: C, nu: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (i, row) in self.coeff.iter().enumerate().skip(1) {
            let mut p = C::new(0.0, 0.0);
            for k in (1..row.len()).rev() {
                p = p * nu + row[k] * k as f64;
            }
            acc += p * i as f64 * lambda.powu((i - 1) as u32);
        }
        acc
    }

    /// Coefficients of `nu -> d_c(lambda, nu)` for fixed lambda.
    pub fn nu_poly(&self, lambda: C) -> Vec<C> {
        let deg = self.coeff.iter().map(|r| r.len()).max().unwrap_or(1);
        let mut out = vec![C::new(0.0, 0.0); deg];
        let mut lp = C::new(1.0, 0.0);
        for row in &self.coeff {
            for (k, &cf) in row.iter().enumerate() {
                out[k] += lp * cf;
            }
            lp *= lambda;
        }
        out
    }
}

/// Dispersion determinant `det(D nu^2 + c nu I + J - lambda I)` at an
/// equilibrium.
pub fn dispersion_det(
    model: &ReactionModel,
    c: f64,
    lambda: C,
    nu: C,
    at: &Equilibrium,
) -> C {
    DispersionPoly::new(model, c, &at.state).eval(lambda, nu)
}

// ---------------------------------------------------------------------------
// Double roots
// ---------------------------------------------------------------------------

/// A double root of the dispersion relation at frame speed `c`.
#[derive(Debug, Clone)]
pub struct DoubleRoot {
    pub c: f64,
    pub lambda: C,
    pub nu: C,
    pub pinched: bool,
    pub eigvec: Vec<C>,
    pub gen_eigvec: Vec<C>,
    /// (|d_c|, |d_nu d_c|) at the root.
    pub residuals: (f64, f64),
    /// True when `(d_lambda d_c)(d_nunu d_c)` vanishes within tolerance.
    pub degenerate: bool,
}

/// Seed rectangle for the double-root Newton iteration.
#[derive(Debug, Clone, Copy)]
pub struct SeedBox {
    pub re_lambda: (f64, f64),
    pub im_lambda: (f64, f64),
    pub re_nu: (f64, f64),
    pub im_nu: (f64, f64),
}

impl Default for SeedBox {
    fn default() -> Self {
        SeedBox {
            re_lambda: (-6.0, 4.0),
            im_lambda: (-3.0, 3.0),
            re_nu: (-4.0, 1.0),
            im_nu: (-3.0, 3.0),
        }
    }
}

const DR_DEDUP: f64 = 1e-8;
const DEGENERACY_TOL: f64 = 1e-8;
pub const DEFAULT_PATH_LEN: f64 = 50.0;

/// Newton iteration for the double-root system from a lattice of seeds.
/// Converged roots are de-duplicated, equipped with (generalized)
/// eigenvectors and classified by the pinching condition.
pub fn find_double_roots(
    model: &ReactionModel,
    c: f64,
    at: &Equilibrium,
    seed_box: SeedBox,
    n_seeds: usize,
) -> Result<Vec<DoubleRoot>> {
    if n_seeds < 16 {
        return Err(Error::Contract("find_double_roots: n_seeds must be >= 16".into()));
    }
    let poly = DispersionPoly::new(model, c, &at.state);

    let mut roots: Vec<(C, C)> = Vec::new();
    if let Some(factors) = decoupled_factors(model, &at.state) {
        // The determinant factors into scalar dispersion relations; double
        // roots are per-factor double roots plus pairwise factor crossings.
        // (Generic Newton is ill-posed here: for identical factors the
        // double-root system is satisfied along the whole curve d_c = 0.)
        for f in &factors {
            if f.d > 0.0 {
                let nu = C::new(-c / (2.0 * f.d), 0.0);
                let lambda = C::new(f.r - c * c / (4.0 * f.d), 0.0);
                push_dedup(&mut roots, (lambda, nu));
            }
        }
        let (f1, f2) = (&factors[0], &factors[1]);
        let identical = (f1.d - f2.d).abs() < 1e-14 && (f1.r - f2.r).abs() < 1e-14;
        if !identical && (f1.d - f2.d).abs() > 1e-14 {
            let nu2 = C::new((f2.r - f1.r) / (f1.d - f2.d), 0.0);
            for nu in [nu2.sqrt(), -nu2.sqrt()] {
                let lambda = f1.d * nu * nu + c * nu + f1.r;
                push_dedup(&mut roots, (lambda, nu));
            }
        }
    } else {
        // Lattice in lambda; nu seeded at the critical points of
        // d_c(lambda, .), which contain every double root's nu exactly.
        let k = (n_seeds as f64).sqrt().ceil() as usize;
        let axis = |range: (f64, f64), i: usize| -> f64 {
            if k == 1 {
                0.5 * (range.0 + range.1)
            } else {
                range.0 + (range.1 - range.0) * i as f64 / (k - 1) as f64
            }
        };
        let nu_margin = 0.5 * (seed_box.re_nu.1 - seed_box.re_nu.0).abs().max(1.0);
        for a in 0..k {
            for b in 0..k {
                let lambda0 = C::new(axis(seed_box.re_lambda, a), axis(seed_box.im_lambda, b));
                let coeffs = poly.nu_poly(lambda0);
                let dcoeffs = crate::polyroots::poly_derivative(&coeffs);
                for nu0 in poly_roots(&dcoeffs) {
                    if nu0.re < seed_box.re_nu.0 - nu_margin
                        || nu0.re > seed_box.re_nu.1 + nu_margin
                    {
                        continue;
                    }
                    if let Some((l, n)) = newton_double_root(&poly, lambda0, nu0) {
                        push_dedup(&mut roots, (l, n));
                    }
                }
            }
        }
    }

    roots.sort_by(|a, b| {
        b.0.re
            .partial_cmp(&a.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
            .then(a.1.re.partial_cmp(&b.1.re).unwrap())
    });

    let mut out = Vec::with_capacity(roots.len());
    for (lambda, nu) in roots {
        let mut dr = assemble_double_root(model, &poly, c, lambda, nu, &at.state);
        dr.pinched = check_pinching(model, &dr, at, DEFAULT_PATH_LEN).unwrap_or(false);
        out.push(dr);
    }
    Ok(out)
}

fn push_dedup(roots: &mut Vec<(C, C)>, cand: (C, C)) {
    let dup = roots
        .iter()
        .any(|(lr, nr)| (lr - cand.0).norm() + (nr - cand.1).norm() < DR_DEDUP);
    if !dup {
        roots.push(cand);
    }
}

/// Scalar dispersion factors of a decoupled (diagonal-Jacobian) system.
fn decoupled_factors(model: &ReactionModel, state: &[f64]) -> Option<Vec<ScalarDispersion>> {
    if model.n_components != 2 {
        return None;
    }
    let j = model.jacobian_at(state);
    if j[1].abs() > 1e-12 || j[2].abs() > 1e-12 {
        return None;
    }
    Some(vec![
        ScalarDispersion { d: model.diffusion[0], r: j[0] },
        ScalarDispersion { d: model.diffusion[1], r: j[3] },
    ])
}

fn newton_double_root(poly: &DispersionPoly, mut lambda: C, mut nu: C) -> Option<(C, C)> {
    for _ in 0..60 {
        let f0 = poly.eval(lambda, nu);
        let f1 = poly.d_nu(lambda, nu);
        let res = f0.norm() + f1.norm();
        if res < 1e-13 {
            return Some((lambda, nu));
        }
        // Jacobian of (d_c, d_nu d_c) wrt (lambda, nu).
        let a = poly.d_lambda(lambda, nu);
        let b = poly.d_nu(lambda, nu);
        let c2 = poly.d_lambda_nu(lambda, nu);
        let d2 = poly.d_nu_nu(lambda, nu);
        let det = a * d2 - b * c2;
        if det.norm() < 1e-280 {
            return None;
        }
        let dl = (f0 * d2 - f1 * b) / det;
        let dn = (f1 * a - f0 * c2) / det;
        lambda -= dl;
        nu -= dn;
        if !lambda.re.is_finite() || !nu.re.is_finite() {
            return None;
        }
        if lambda.norm() > 1e6 || nu.norm() > 1e6 {
            return None;
        }
    }
    None
}

fn assemble_double_root(
    model: &ReactionModel,
    poly: &DispersionPoly,
    c: f64,
    lambda: C,
    nu: C,
    state: &[f64],
) -> DoubleRoot {
    let n = model.n_components;
    let residuals = (poly.eval(lambda, nu).norm(), poly.d_nu(lambda, nu).norm());
    let degenerate =
        (poly.d_lambda(lambda, nu) * poly.d_nu_nu(lambda, nu)).norm() < DEGENERACY_TOL;

    let (eigvec, gen_eigvec) = match n {
        1 => (vec![C::new(1.0, 0.0)], vec![C::new(0.0, 0.0)]),
        2 => {
            let j = model.jacobian_at(state);
            let d = &model.diffusion;
            let m = |i: usize, k: usize| -> C {
                let diag = if i == k {
                    d[i] * nu * nu + c * nu - lambda
                } else {
                    C::new(0.0, 0.0)
                };
                diag + j[i * 2 + k]
            };
            let m00 = m(0, 0);
            let m01 = m(0, 1);
            let m10 = m(1, 0);
            let m11 = m(1, 1);
            // Kernel vector from the better-scaled row.
            let cand1 = [-m01, m00];
            let cand2 = [m11, -m10];
            let n1 = cand1[0].norm() + cand1[1].norm();
            let n2 = cand2[0].norm() + cand2[1].norm();
            let mut v = if n1 >= n2 { cand1 } else { cand2 };
            let vn = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if vn < 1e-12 {
                // Fully degenerate kernel (uncoupled branch crossing).
                v = [C::new(1.0, 0.0), C::new(0.0, 0.0)];
            } else {
                v[0] /= vn;
                v[1] /= vn;
            }
            // First entry of significant size made real positive.
            let phase = if v[0].norm() > 1e-8 { v[0] / v[0].norm() } else { v[1] / v[1].norm() };
            v[0] /= phase;
            v[1] /= phase;

            // Generalized direction: (M) U1 = -(2 D nu + c) U, made unique by
            // orthogonality to U via a bordered system.
            let rhs0 = -(2.0 * d[0] * nu + c) * v[0];
            let rhs1 = -(2.0 * d[1] * nu + c) * v[1];
            let mut a = vec![
                vec![m00, m01, v[0]],
                vec![m10, m11, v[1]],
                vec![v[0].conj(), v[1].conj(), C::new(0.0, 0.0)],
            ];
            let mut b = vec![rhs0, rhs1, C::new(0.0, 0.0)];
            let gen = match crate::linalg::solve_dense_small_c(&mut a, &mut b) {
                Ok(sol) => vec![sol[0], sol[1]],
                Err(_) => vec![C::new(0.0, 0.0), C::new(0.0, 0.0)],
            };
            (v.to_vec(), gen)
        }
        _ => unreachable!(),
    };

    DoubleRoot { c, lambda, nu, pinched: false, eigvec, gen_eigvec, residuals, degenerate }
}

// ---------------------------------------------------------------------------
// Pinching condition
// ---------------------------------------------------------------------------

/// Continue the spatial roots of `d_c(lambda, .)` along `lambda(tau) =
/// lambda_dr + tau` and test whether the pair colliding at `nu_dr` separates
/// with `Re nu -> +inf` and `-inf` (monotone trend over the final 20% of the
/// path).
///
/// Degenerate double roots are handled per branch when the linearization
/// decouples; otherwise they are reported indeterminate.
pub fn check_pinching(
    model: &ReactionModel,
    dr: &DoubleRoot,
    at: &Equilibrium,
    path_len: f64,
) -> Result<bool> {
    if let Some(factors) = decoupled_factors(model, &at.state) {
        // Per-branch treatment: classify the root against the scalar factors.
        let mut doubles = Vec::new();
        let mut simple = 0usize;
        for f in &factors {
            if f.eval(dr.c, dr.lambda, dr.nu).norm() < 1e-7 {
                if f.d_nu(dr.c, dr.nu).norm() < 1e-7 {
                    doubles.push(scalar_pinched(f));
                } else {
                    simple += 1;
                }
            }
        }
        return match (doubles.len(), simple) {
            (0, 2) => track_pair_across_factors(model, dr, &at.state, path_len),
            (k, 0) if k > 0 => Ok(doubles.into_iter().all(|v| v)),
            _ => Err(Error::Indeterminate(
                "check_pinching: root collides across a factor double root".into(),
            )),
        };
    }
    if dr.degenerate {
        return Err(Error::Indeterminate(
            "check_pinching: degenerate double root in a coupled system".into(),
        ));
    }
    let poly = DispersionPoly::new(model, dr.c, &at.state);
    track_polynomial_pair(&poly, dr, path_len)
}

struct ScalarDispersion {
    d: f64,
    r: f64,
}

impl ScalarDispersion {
    fn eval(&self, c: f64, lambda: C, nu: C) -> C {
        self.d * nu * nu + c * nu + self.r - lambda
    }
    fn d_nu(&self, c: f64, nu: C) -> C {
        2.0 * self.d * nu + c
    }
}

/// A scalar factor d nu^2 + c nu + r - lambda always pinches: its two roots
/// are -c/2d +- sqrt(...)/2d with the square root growing along +lambda.
fn scalar_pinched(f: &ScalarDispersion) -> bool {
    f.d > 0.0
}

/// Track the two roots of the full polynomial colliding at `nu_dr`.
fn track_polynomial_pair(poly: &DispersionPoly, dr: &DoubleRoot, path_len: f64) -> Result<bool> {
    let coeffs0 = poly.nu_poly(dr.lambda);
    let all0 = poly_roots(&coeffs0);
    if all0.len() < 2 {
        return Err(Error::Indeterminate("check_pinching: fewer than two spatial roots".into()));
    }
    // Sort by distance to nu_dr: the first two form the colliding pair.
    let mut order: Vec<usize> = (0..all0.len()).collect();
    order.sort_by(|&a, &b| {
        (all0[a] - dr.nu).norm().partial_cmp(&(all0[b] - dr.nu).norm()).unwrap()
    });
    let mut current: Vec<C> = order.iter().map(|&i| all0[i]).collect();
    let pair = [0usize, 1usize];

    let n_roots = current.len();
    let mut tau = 0.0;
    let mut dtau = path_len / 400.0;
    let min_dtau = path_len * 1e-10;
    let mut trace_a: Vec<(f64, f64)> = vec![(0.0, dr.nu.re)];
    let mut trace_b: Vec<(f64, f64)> = vec![(0.0, dr.nu.re)];

    while tau < path_len {
        let step = dtau.min(path_len - tau);
        let lambda = dr.lambda + C::new(tau + step, 0.0);
        let roots = poly_roots(&poly.nu_poly(lambda));
        if roots.len() != n_roots {
            // Degree drop along the path; shrink the step.
            dtau *= 0.5;
            if dtau < min_dtau {
                return Err(Error::Indeterminate("check_pinching: degree drop".into()));
            }
            continue;
        }
        match match_roots(&current, &roots, tau + step > 2.0 * dtau) {
            Some(next) => {
                current = next;
                tau += step;
                trace_a.push((tau, current[pair[0]].re));
                trace_b.push((tau, current[pair[1]].re));
                if dtau < path_len / 50.0 {
                    dtau *= 1.5;
                }
            }
            None => {
                dtau *= 0.5;
                if dtau < min_dtau {
                    return Err(Error::Indeterminate(
                        "check_pinching: persistent root-tracking ambiguity".into(),
                    ));
                }
            }
        }
    }

    Ok(pair_separates(&trace_a, &trace_b, dr.nu.re))
}

/// Track the pair for a decoupled system where the colliding roots belong to
/// two different scalar factors (explicit quadratic roots as the oracle).
fn track_pair_across_factors(
    model: &ReactionModel,
    dr: &DoubleRoot,
    state: &[f64],
    path_len: f64,
) -> Result<bool> {
    let j = model.jacobian_at(state);
    let mut traces: Vec<Vec<(f64, f64)>> = Vec::new();
    for comp in 0..2 {
        let d = model.diffusion[comp];
        let r = j[comp * 2 + comp];
        let c = dr.c;
        // Roots of d nu^2 + c nu + (r - lambda); pick the branch through nu_dr.
        let mut trace = Vec::new();
        let mut prev = dr.nu;
        let steps = 200;
        for s in 0..=steps {
            let lambda = dr.lambda + C::new(path_len * s as f64 / steps as f64, 0.0);
            let disc = (C::new(c * c, 0.0) - 4.0 * d * (C::new(r, 0.0) - lambda)).sqrt();
            let r1 = (-c + disc) / (2.0 * d);
            let r2 = (-c - disc) / (2.0 * d);
            let pick = if (r1 - prev).norm() <= (r2 - prev).norm() { r1 } else { r2 };
            prev = pick;
            trace.push((path_len * s as f64 / steps as f64, pick.re));
        }
        traces.push(trace);
    }
    Ok(pair_separates(&traces[0], &traces[1], dr.nu.re))
}

/// Monotone trend test on the final 20% of both traces.
fn pair_separates(trace_a: &[(f64, f64)], trace_b: &[(f64, f64)], nu_re0: f64) -> bool {
    fn tail(t: &[(f64, f64)]) -> &[(f64, f64)] {
        let start = (t.len() as f64 * 0.8) as usize;
        &t[start.min(t.len() - 2)..]
    }
    let ta = tail(trace_a);
    let tb = tail(trace_b);
    // Identify which trace moves up and which down.
    let enda = ta.last().unwrap().1;
    let endb = tb.last().unwrap().1;
    let (up, down) = if enda >= endb { (ta, tb) } else { (tb, ta) };
    let up_monotone = up.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12);
    let down_monotone = down.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    let separated = up.last().unwrap().1 > nu_re0 + 0.5 && down.last().unwrap().1 < nu_re0 - 0.5;
    up_monotone && down_monotone && separated
}

/// Min-distance matching of the new root set to the previous one. Returns
/// None when the assignment is ambiguous (two new roots within 1e-10).
fn match_roots(prev: &[C], next: &[C], check_ambiguity: bool) -> Option<Vec<C>> {
    let n = prev.len();
    if check_ambiguity {
        for i in 0..n {
            for k in i + 1..n {
                if (next[i] - next[k]).norm() < 1e-10 {
                    return None;
                }
            }
        }
    }
    let mut used = vec![false; n];
    let mut out = vec![C::new(0.0, 0.0); n];
    // Greedy global min-distance assignment; n <= 4.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            pairs.push(((prev[i] - next[k]).norm(), i, k));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut assigned = vec![false; n];
    for (_, i, k) in pairs {
        if !assigned[i] && !used[k] {
            assigned[i] = true;
            used[k] = true;
            out[i] = next[k];
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Spreading speed
// ---------------------------------------------------------------------------

/// Linear spreading data at the marginal frame speed.
#[derive(Debug, Clone)]
pub struct SpreadingSpeed {
    pub c_lin: f64,
    /// Leading-edge decay rate, -Re nu_dr of the critical pinched root.
    pub eta: f64,
    /// Effective diffusivity from lambda ~ d_eff (nu - nu_dr)^2.
    pub d_eff: f64,
    /// Group velocity offset for a queried frame; 0 at the critical frame.
    pub c_group: f64,
}

impl SpreadingSpeed {
    pub fn group_velocity(&self, frame_speed: f64) -> f64 {
        frame_speed - self.c_lin
    }
}

const C_MAX_DEFAULT: f64 = 20.0;

/// Max Re lambda over pinched double roots at frame speed c; None when no
/// pinched root is found.
pub fn pinched_growth(model: &ReactionModel, at: &Equilibrium, c: f64) -> Option<f64> {
    let roots = find_double_roots(model, c, at, SeedBox::default(), 81).ok()?;
    roots
        .iter()
        .filter(|r| r.pinched)
        .map(|r| r.lambda.re)
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// Bisection in c for `max Re lambda_dr over pinched double roots = 0`.
pub fn linear_spreading_speed(model: &ReactionModel, at: &Equilibrium) -> Result<SpreadingSpeed> {
    let unstable = model
        .jacobian_eigenvalues(&at.state)
        .iter()
        .any(|e| e.re > 0.0);
    if !unstable {
        return Err(Error::Contract(
            "linear_spreading_speed: equilibrium is not linearly unstable".into(),
        ));
    }

    let growth = |c: f64| -> Result<f64> {
        pinched_growth(model, at, c).ok_or_else(|| {
            Error::AnalysisFailure(format!("no pinched double root found at c = {c}"))
        })
    };

    // Bracket by doubling from c = 1.
    let mut c_lo = 0.0;
    let mut c_hi = 1.0;
    let mut g_hi = growth(c_hi)?;
    while g_hi > 0.0 {
        c_lo = c_hi;
        c_hi *= 2.0;
        if c_hi > C_MAX_DEFAULT {
            return Err(Error::AnalysisFailure(format!(
                "spreading speed exceeds c_max = {C_MAX_DEFAULT}"
            )));
        }
        g_hi = growth(c_hi)?;
    }
    for _ in 0..60 {
        let mid = 0.5 * (c_lo + c_hi);
        if growth(mid)? > 0.0 {
            c_lo = mid;
        } else {
            c_hi = mid;
        }
        if c_hi - c_lo < 1e-12 {
            break;
        }
    }
    let c_lin = 0.5 * (c_lo + c_hi);

    // Critical root: the pinched root with maximal Re lambda at c_lin.
    let roots = find_double_roots(model, c_lin, at, SeedBox::default(), 81)?;
    let critical = roots
        .iter()
        .filter(|r| r.pinched)
        .max_by(|a, b| a.lambda.re.partial_cmp(&b.lambda.re).unwrap())
        .ok_or_else(|| Error::AnalysisFailure("no pinched root at c_lin".into()))?;

    let eta = -critical.nu.re;
    let poly = DispersionPoly::new(model, c_lin, &at.state);
    let dl = poly.d_lambda(critical.lambda, critical.nu);
    let dnn = poly.d_nu_nu(critical.lambda, critical.nu);
    let d_eff = (-dnn / (2.0 * dl)).re;

    Ok(SpreadingSpeed { c_lin, eta, d_eff, c_group: 0.0 })
}

// ---------------------------------------------------------------------------
// Envelope speed
// ---------------------------------------------------------------------------

/// Frozen scalar linear equation `w_t = d w_xx + b w_x + r w`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarLinearization {
    pub diff: f64,
    pub drift: f64,
    pub growth: f64,
}

impl ScalarLinearization {
    pub fn lambda(&self, nu: f64) -> f64 {
        self.diff * nu * nu + self.drift * nu + self.growth
    }
}

/// Speed of the exponential solution `e^{lambda t + nu x}`: `-lambda(nu)/nu`.
pub fn envelope_speed(lin: &ScalarLinearization, nu: f64) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::Contract("envelope_speed: nu must be nonzero".into()));
    }
    Ok(-lin.lambda(nu) / nu)
}

// ---------------------------------------------------------------------------
// Weighted essential spectrum
// ---------------------------------------------------------------------------

/// One branch of a weighted essential-spectrum curve: points
/// `(k_tilde, lambda)` with `nu = -eta + i k_tilde`.
#[derive(Debug, Clone)]
pub struct SpectrumCurve {
    pub weight: f64,
    pub branch: usize,
    pub points: Vec<(f64, C)>,
}

impl SpectrumCurve {
    pub fn max_re(&self) -> f64 {
        self.points.iter().map(|(_, l)| l.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Essential spectrum of the constant-coefficient limit at `at` in the frame
/// of speed `c`, conjugated by the weight `e^{eta x}`: eigenvalues of
/// `D nu^2 + c nu + J` over `nu = -eta + i k_tilde`, grouped into continuous
/// branches by nearest-neighbor matching.
pub fn weighted_essential_spectrum(
    model: &ReactionModel,
    at: &Equilibrium,
    c: f64,
    eta: f64,
    k_range: (f64, f64),
    n_pts: usize,
) -> Result<Vec<SpectrumCurve>> {
    if n_pts < 64 {
        return Err(Error::Contract("weighted_essential_spectrum: n_pts must be >= 64".into()));
    }
    let n = model.n_components;
    let j = model.jacobian_at(&at.state);
    let d = &model.diffusion;

    let eigs_at = |k: f64| -> Vec<C> {
        let nu = C::new(-eta, k);
        match n {
            1 => vec![d[0] * nu * nu + c * nu + j[0]],
            2 => {
                let a = d[0] * nu * nu + c * nu + j[0];
                let b = C::new(j[1], 0.0);
                let c2 = C::new(j[2], 0.0);
                let dd = d[1] * nu * nu + c * nu + j[3];
                let tr = a + dd;
                let det = a * dd - b * c2;
                let disc = (tr * tr - 4.0 * det).sqrt();
                vec![(tr + disc) * 0.5, (tr - disc) * 0.5]
            }
            _ => unreachable!(),
        }
    };

    let mut curves: Vec<SpectrumCurve> = (0..n)
        .map(|b| SpectrumCurve { weight: eta, branch: b, points: Vec::with_capacity(n_pts) })
        .collect();
    let mut prev: Option<Vec<C>> = None;
    for s in 0..n_pts {
        let k = k_range.0 + (k_range.1 - k_range.0) * s as f64 / (n_pts - 1) as f64;
        let mut e = eigs_at(k);
        if let Some(p) = &prev {
            if n == 2 && ((p[0] - e[1]).norm() + (p[1] - e[0]).norm())
                < ((p[0] - e[0]).norm() + (p[1] - e[1]).norm())
            {
                e.swap(0, 1);
            }
        }
        for (b, &lam) in e.iter().enumerate() {
            curves[b].points.push((k, lam));
        }
        prev = Some(e);
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Lcg;
    use crate::models::{build_preset, find_equilibria, ModelKind};
    use std::collections::BTreeMap;

    fn origin(model: &ReactionModel) -> Equilibrium {
        let state = vec![0.0; model.n_components];
        let eigs = model.jacobian_eigenvalues(&state);
        Equilibrium { state, jac_eigenvalues: eigs, stability: crate::models::Stability::Unstable }
    }

    fn scalar_unit() -> ReactionModel {
        // f(u) = u - u^3: f'(0) = 1.
        ReactionModel::scalar_poly("balanced", vec![0.0, 1.0, 0.0, -1.0])
    }

    #[test]
    fn scalar_dispersion_values() {
        let m = scalar_unit();
        let at = origin(&m);
        // c = 0: d = nu^2 + 1 - lambda; at (1, 0) -> 0.
        let v = dispersion_det(&m, 0.0, C::new(1.0, 0.0), C::new(0.0, 0.0), &at);
        assert!(v.norm() < 1e-15);
        // c = 2: d_c(0, -1) = 1 - 2 + 1 = 0 (the KPP double root).
        let v = dispersion_det(&m, 2.0, C::new(0.0, 0.0), C::new(-1.0, 0.0), &at);
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn dispersion_identity_dc_equals_shifted() {
        // d_c(lambda, nu) = d(lambda - c nu, nu) at 1000 random samples,
        // for a coupled 2-component model.
        let m = build_preset("fhn", &BTreeMap::new()).unwrap();
        let at = origin(&m);
        let mut rng = Lcg(2024);
        for _ in 0..1000 {
            let c = rng.uniform(-3.0, 3.0);
            let lambda = C::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let nu = C::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            let lhs = dispersion_det(&m, c, lambda, nu, &at);
            let rhs = dispersion_det(&m, 0.0, lambda - c * nu, nu, &at);
            assert!(
                (lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()),
                "identity violated: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn scalar_double_root_closed_form() {
        let m = scalar_unit();
        let at = origin(&m);
        for c in [0.7, 1.3, 2.0, 3.1] {
            let roots = find_double_roots(&m, c, &at, SeedBox::default(), 16).unwrap();
            assert_eq!(roots.len(), 1, "c = {c}");
            let r = &roots[0];
            assert!((r.nu - C::new(-c / 2.0, 0.0)).norm() < 1e-10);
            assert!((r.lambda - C::new(1.0 - c * c / 4.0, 0.0)).norm() < 1e-10);
            assert!(r.residuals.0 < 1e-10 && r.residuals.1 < 1e-10);
            assert!(r.pinched);
            assert!(!r.degenerate);
        }
    }

    #[test]
    fn doubling_seeds_same_root_set() {
        // fhn at the origin is genuinely coupled, exercising the Newton path.
        let m = build_preset("fhn", &BTreeMap::new()).unwrap();
        let at = origin(&m);
        let r16 = find_double_roots(&m, 2.0, &at, SeedBox::default(), 81).unwrap();
        let r32 = find_double_roots(&m, 2.0, &at, SeedBox::default(), 256).unwrap();
        assert_eq!(r16.len(), r32.len());
        for (a, b) in r16.iter().zip(&r32) {
            assert!((a.lambda - b.lambda).norm() < 1e-9);
            assert!((a.nu - b.nu).norm() < 1e-9);
        }
    }

    #[test]
    fn cgl_real_degenerate_double_root() {
        let m = build_preset("cgl_real", &BTreeMap::new()).unwrap();
        let at = origin(&m);
        let roots = find_double_roots(&m, 2.0, &at, SeedBox::default(), 81).unwrap();
        let r = roots
            .iter()
            .find(|r| (r.lambda.norm() < 1e-8) && (r.nu - C::new(-1.0, 0.0)).norm() < 1e-7)
            .expect("double root at (0, -1)");
        assert!(r.degenerate, "two identical decoupled copies give a degenerate root");
        assert!(r.pinched, "per-branch handling still reports pinched");
    }

    #[test]
    fn stable_mode_double_root_still_pinched() {
        // Scalar with r = -1 at c = 2: double root at lambda = -2, nu = -1.
        let m = ReactionModel::scalar_poly("stable", vec![0.0, -1.0]);
        let at = Equilibrium {
            state: vec![0.0],
            jac_eigenvalues: vec![C::new(-1.0, 0.0)],
            stability: crate::models::Stability::Stable,
        };
        let roots = find_double_roots(&m, 2.0, &at, SeedBox::default(), 16).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].lambda - C::new(-2.0, 0.0)).norm() < 1e-10);
        assert!(roots[0].pinched);
    }

    #[test]
    fn branch_crossing_double_root_not_pinched() {
        // Decoupled diagonal system with d = (1, 2), r = (1, 0) in a frame
        // c = -5: the factors share the root nu = +1 at lambda = -3 and both
        // continued roots drift to Re nu -> -inf (explicit quadratic roots).
        let m = ReactionModel {
            name: "toy".into(),
            n_components: 2,
            diffusion: vec![1.0, 2.0],
            params: BTreeMap::new(),
            kind: ModelKind::Diag2 { coeffs: [vec![0.0, 1.0], vec![0.0, 0.0]] },
        };
        let at = origin(&m);
        let box_ = SeedBox {
            re_lambda: (-4.0, -2.0),
            im_lambda: (-0.5, 0.5),
            re_nu: (0.5, 1.5),
            im_nu: (-0.5, 0.5),
        };
        let roots = find_double_roots(&m, -5.0, &at, box_, 16).unwrap();
        let r = roots
            .iter()
            .find(|r| (r.lambda - C::new(-3.0, 0.0)).norm() < 1e-7 && (r.nu - C::new(1.0, 0.0)).norm() < 1e-7)
            .expect("crossing double root at (-3, 1)");
        assert!(!r.pinched, "branch-crossing root must not be pinched");
    }

    #[test]
    fn spreading_speed_closed_forms() {
        // nagumo balanced: c_lin = 2, eta = 1, d_eff = 1.
        let m = build_preset("nagumo", &BTreeMap::new()).unwrap();
        let at = origin(&m);
        let s = linear_spreading_speed(&m, &at).unwrap();
        assert!((s.c_lin - 2.0).abs() < 1e-8, "c_lin = {}", s.c_lin);
        assert!((s.eta - 1.0).abs() < 1e-7);
        assert!((s.d_eff - 1.0).abs() < 1e-7);

        // forced CGL alpha = 0.02: c_lin = 2 sqrt(1.02).
        let mut p = BTreeMap::new();
        p.insert("alpha".to_string(), 0.02);
        p.insert("beta".to_string(), 0.5);
        let m = build_preset("forced_cgl", &p).unwrap();
        let at = origin(&m);
        let s = linear_spreading_speed(&m, &at).unwrap();
        assert!((s.c_lin - 2.0 * 1.02f64.sqrt()).abs() < 1e-8);

        // skew wake problem at (1, 0): speed 2 sqrt(1 + mu).
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), 0.1);
        let m = build_preset("skew", &p).unwrap();
        let eqs = find_equilibria(&m, &[(-1.5, 1.5), (-1.5, 1.5)], 12).unwrap();
        let at = eqs
            .iter()
            .find(|e| (e.state[0] - 1.0).abs() < 1e-8 && e.state[1].abs() < 1e-8)
            .unwrap();
        let s = linear_spreading_speed(&m, at).unwrap();
        assert!((s.c_lin - 2.0 * 1.1f64.sqrt()).abs() < 1e-8, "c_lin = {}", s.c_lin);
    }

    #[test]
    fn forced_cgl_v_branch_growth_at_critical_speed() {
        // At c = 2 sqrt(1 + alpha), the u-branch root has Re lambda = 0 and
        // the v-branch root Re lambda = -2 alpha.
        let alpha = 0.02;
        let mut p = BTreeMap::new();
        p.insert("alpha".to_string(), alpha);
        p.insert("beta".to_string(), 0.5);
        let m = build_preset("forced_cgl", &p).unwrap();
        let at = origin(&m);
        let c = 2.0 * (1.0f64 + alpha).sqrt();
        let roots = find_double_roots(&m, c, &at, SeedBox::default(), 81).unwrap();
        let u_root = roots.iter().find(|r| r.lambda.re.abs() < 1e-9).expect("u-branch root");
        assert!((u_root.nu - C::new(-(1.0f64 + alpha).sqrt(), 0.0)).norm() < 1e-8);
        assert!(
            roots.iter().any(|r| (r.lambda.re + 2.0 * alpha).abs() < 1e-9),
            "v-branch root at Re lambda = -2 alpha"
        );
    }

    #[test]
    fn spreading_speed_invariant_under_appended_stable_mode() {
        // Scalar f'(0) = 1 versus the same system with a decoupled strictly
        // stable second component.
        let scalar = scalar_unit();
        let at1 = origin(&scalar);
        let s1 = linear_spreading_speed(&scalar, &at1).unwrap();
        let augmented = ReactionModel {
            name: "augmented".into(),
            n_components: 2,
            diffusion: vec![1.0, 0.7],
            params: BTreeMap::new(),
            kind: ModelKind::Diag2 {
                coeffs: [vec![0.0, 1.0, 0.0, -1.0], vec![0.0, -0.8]],
            },
        };
        let at2 = origin(&augmented);
        let s2 = linear_spreading_speed(&augmented, &at2).unwrap();
        assert!((s1.c_lin - s2.c_lin).abs() < 1e-8);
        assert!((s1.eta - s2.eta).abs() < 1e-7);
    }

    #[test]
    fn pinched_growth_monotone_in_c() {
        // Sampled monotonicity of max Re lambda_dr over pinched roots.
        for name in ["nagumo", "forced_cgl", "skew", "cgl_real"] {
            let m = build_preset(name, &BTreeMap::new()).unwrap();
            let at = origin(&m);
            let mut prev = f64::INFINITY;
            for i in 0..50 {
                let c = 4.0 * i as f64 / 49.0;
                if let Some(g) = pinched_growth(&m, &at, c) {
                    assert!(
                        g <= prev + 1e-9,
                        "{name}: growth not monotone at c = {c}: {g} > {prev}"
                    );
                    prev = g;
                }
            }
        }
    }

    #[test]
    fn envelope_speed_examples() {
        // w_t = w_xx + 2 w_x: c_env(-2 - eps) = eps.
        let lin = ScalarLinearization { diff: 1.0, drift: 2.0, growth: 0.0 };
        let eps = 0.3;
        assert!((envelope_speed(&lin, -2.0 - eps).unwrap() - eps).abs() < 1e-14);
        assert!(envelope_speed(&lin, -2.0).unwrap().abs() < 1e-14);
        // w_t = w_xx + 2 w_x + w at nu = -1: lambda = 0, c_env = 0.
        let lin = ScalarLinearization { diff: 1.0, drift: 2.0, growth: 1.0 };
        assert!(envelope_speed(&lin, -1.0).unwrap().abs() < 1e-14);
        assert!(envelope_speed(&lin, 0.0).is_err());
    }

    #[test]
    fn weighted_spectrum_forced_cgl_leading_edge() {
        let alpha = 0.02;
        let mut p = BTreeMap::new();
        p.insert("alpha".to_string(), alpha);
        p.insert("beta".to_string(), 0.5);
        let m = build_preset("forced_cgl", &p).unwrap();
        let at = origin(&m);
        let c = 2.0 * (1.0f64 + alpha).sqrt();
        let eta = (1.0f64 + alpha).sqrt();
        let curves =
            weighted_essential_spectrum(&m, &at, c, eta, (-3.0, 3.0), 257).unwrap();
        let maxes: Vec<f64> = curves.iter().map(|cv| cv.max_re()).collect();
        let u_max = maxes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v_max = maxes.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(u_max.abs() < 1e-10, "u-branch max Re = {u_max}");
        assert!((v_max + 2.0 * alpha).abs() < 1e-10, "v-branch max Re = {v_max}");
    }

    #[test]
    fn weighted_spectrum_skew_wake() {
        // v-branch at the (1, 0) limit, frame c = 2, eta = 1: max Re = mu.
        let mu = 0.1;
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), mu);
        let m = build_preset("skew", &p).unwrap();
        let eqs = find_equilibria(&m, &[(-1.5, 1.5), (-1.5, 1.5)], 12).unwrap();
        let at = eqs
            .iter()
            .find(|e| (e.state[0] - 1.0).abs() < 1e-8 && e.state[1].abs() < 1e-8)
            .unwrap();
        let curves = weighted_essential_spectrum(&m, at, 2.0, 1.0, (-4.0, 4.0), 513).unwrap();
        let max = curves.iter().map(|cv| cv.max_re()).fold(f64::NEG_INFINITY, f64::max);
        assert!((max - mu).abs() < 1e-10, "max Re = {max}");
    }

    #[test]
    fn weighted_spectrum_residuals() {
        let m = build_preset("forced_cgl", &BTreeMap::new()).unwrap();
        let at = origin(&m);
        let curves = weighted_essential_spectrum(&m, &at, 2.0, 0.7, (-2.0, 2.0), 64).unwrap();
        for cv in &curves {
            for &(k, lam) in cv.points.iter().step_by(7) {
                let nu = C::new(-cv.weight, k);
                let res = dispersion_det(&m, 2.0, lam, nu, &at);
                assert!(res.norm() < 1e-10, "residual {} at k = {k}", res.norm());
            }
        }
    }

    #[test]
    fn wake_instability_threshold_unweighted() {
        // At eta = 0, the u_- wake destabilizes across beta = 2a/sqrt(9+3a).
        for alpha in [0.05, 0.2] {
            let beta_star = 2.0 * alpha / (9.0f64 + 3.0 * alpha).sqrt();
            for (offset, expect_unstable) in [(-0.02, false), (0.02, true)] {
                let beta = beta_star + offset;
                let mut p = BTreeMap::new();
                p.insert("alpha".to_string(), alpha);
                p.insert("beta".to_string(), beta);
                let m = build_preset("forced_cgl", &p).unwrap();
                let (_, um) = crate::models::cgl_u_plus_minus(alpha, beta);
                let state = vec![um, 0.0];
                let eigs = m.jacobian_eigenvalues(&state);
                let at = Equilibrium {
                    state,
                    jac_eigenvalues: eigs,
                    stability: crate::models::Stability::Saddle,
                };
                let c = 2.0 * (1.0f64 + alpha).sqrt();
                let curves =
                    weighted_essential_spectrum(&m, &at, c, 0.0, (-3.0, 3.0), 513).unwrap();
                let max = curves.iter().map(|cv| cv.max_re()).fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(
                    max > 0.0,
                    expect_unstable,
                    "alpha = {alpha}, beta = {beta}: max Re = {max}"
                );
            }
        }
    }
}
