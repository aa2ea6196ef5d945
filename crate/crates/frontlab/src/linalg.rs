//! Small dense/banded linear algebra used by the solvers.
//!
//! Contents: a banded LU with partial pivoting (Newton systems of the front
//! BVPs), a prefactored Thomas solver (implicit step of the time integrator),
//! Sturm-sequence bisection for symmetric tridiagonal eigenvalues, linear
//! least squares for tail fits, and a deterministic LCG used wherever seeded
//! sampling is required.

use num_complex::Complex64;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Banded LU with partial pivoting
// ---------------------------------------------------------------------------

/// Banded matrix with lower bandwidth `kl` and upper bandwidth `ku`.
///
/// Row `i` stores columns `[i - kl, i + ku + kl]`; the extra `kl` columns on
/// the right hold pivoting fill-in.
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            return 0.0;
        }
        self.data[i * self.width + (j + self.kl - i)]
    }

    /// Factor in place. Returns the pivot sequence and multipliers needed to
    /// apply the factorization to right-hand sides.
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = vec![0.0; n * kl];

        for k in 0..n {
            // Partial pivot among rows k..=k+kl.
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for r in k + 1..=last {
                let v = self.get(r, k).abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NoConvergence(format!(
                    "banded LU: zero or non-finite pivot at column {k}"
                )));
            }
            pivots.push(p);
            if p != k {
                // Swap rows k and p, aligned by column. Only columns >= k matter.
                let hi = (k + ku + kl).min(n - 1);
                for j in k..=hi {
                    let a = self.get(k, j);
                    let b = self.get(p, j);
                    self.set(k, j, b);
                    self.set(p, j, a);
                }
            }
            let pivot = self.get(k, k);
            let hi = (k + ku + kl).min(n - 1);
            for r in k + 1..=last {
                let m = self.get(r, k) / pivot;
                multipliers[k * kl + (r - k - 1)] = m;
                if m != 0.0 {
                    for j in k + 1..=hi {
                        let v = self.get(r, j) - m * self.get(k, j);
                        self.set(r, j, v);
                    }
                }
                self.set(r, k, 0.0);
            }
        }
        Ok(BandedLu { mat: self, pivots, multipliers })
    }
}

pub struct BandedLu {
    mat: BandedMatrix,
    pivots: Vec<usize>,
    multipliers: Vec<f64>,
}

impl BandedLu {
    /// Solve `A x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.mat.n;
        let kl = self.mat.kl;
        let ku = self.mat.ku;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let last = (k + kl).min(n - 1);
            for r in k + 1..=last {
                b[r] -= self.multipliers[k * kl + (r - k - 1)] * b[k];
            }
        }
        for k in (0..n).rev() {
            let hi = (k + ku + kl).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=hi {
                s -= self.mat.get(k, j) * b[j];
            }
            b[k] = s / self.mat.get(k, k);
        }
    }
}

// ---------------------------------------------------------------------------
// Bordered solve: [A B; C D] [x; y] = [f; g]
// ---------------------------------------------------------------------------

/// Solve a banded system augmented by `k` dense border rows/columns via block
/// elimination. `border_cols` are the columns B (each length n), `border_rows`
/// the rows C, `corner` the k-by-k block D, `f`/`g` the right-hand side.
///
/// Returns (x, y). The Schur complement `D - C A^{-1} B` must be nonsingular.
pub fn solve_bordered(
    a: BandedMatrix,
    border_cols: &[Vec<f64>],
    border_rows: &[Vec<f64>],
    corner: &[Vec<f64>],
    f: &[f64],
    g: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = border_cols.len();
    assert_eq!(border_rows.len(), k);
    assert_eq!(g.len(), k);
    let lu = a.factor()?;

    let mut af = f.to_vec();
    lu.solve(&mut af);
    let mut ab: Vec<Vec<f64>> = Vec::with_capacity(k);
    for col in border_cols {
        let mut c = col.clone();
        lu.solve(&mut c);
        ab.push(c);
    }

    // Schur complement system (k x k, k <= 3).
    let mut s = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            let dot: f64 = border_rows[i].iter().zip(&ab[j]).map(|(r, c)| r * c).sum();
            s[i][j] = corner[i][j] - dot;
        }
        let dot: f64 = border_rows[i].iter().zip(&af).map(|(r, c)| r * c).sum();
        rhs[i] = g[i] - dot;
    }
    let y = solve_dense_small(&mut s, &mut rhs)?;

    let mut x = f.to_vec();
    for (j, col) in border_cols.iter().enumerate() {
        for (xi, ci) in x.iter_mut().zip(col) {
            *xi -= y[j] * ci;
        }
    }
    lu.solve(&mut x);
    Ok((x, y))
}

/// Gaussian elimination with partial pivoting for tiny dense systems.
pub fn solve_dense_small(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let mut p = k;
        for r in k + 1..n {
            if a[r][k].abs() > a[p][k].abs() {
                p = r;
            }
        }
        if a[p][k] == 0.0 || !a[p][k].is_finite() {
            return Err(Error::NoConvergence("singular dense block".into()));
        }
        if p != k {
            a.swap(k, p);
            b.swap(k, p);
        }
        for r in k + 1..n {
            let m = a[r][k] / a[k][k];
            for j in k..n {
                a[r][j] -= m * a[k][j];
            }
            b[r] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    Ok(x)
}

/// Complex variant for the eigenvector systems (n <= 3).
pub fn solve_dense_small_c(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Result<Vec<Complex64>> {
    let n = b.len();
    for k in 0..n {
        let mut p = k;
        for r in k + 1..n {
            if a[r][k].norm_sqr() > a[p][k].norm_sqr() {
                p = r;
            }
        }
        if a[p][k].norm_sqr() == 0.0 {
            return Err(Error::NoConvergence("singular complex block".into()));
        }
        if p != k {
            a.swap(k, p);
            b.swap(k, p);
        }
        for r in k + 1..n {
            let m = a[r][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[r][j] -= m * v;
            }
            let v = b[k];
            b[r] -= m * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Tridiagonal (Thomas) solver, prefactored for repeated solves
// ---------------------------------------------------------------------------

/// Prefactored tridiagonal solver for `A x = rhs` with constant `A`.
///
/// No pivoting — intended for the diagonally dominant Crank-Nicolson
/// matrices of the time stepper.
pub struct TridiagFactored {
    /// Modified superdiagonal c'_i.
    cp: Vec<f64>,
    /// Reciprocal pivots 1 / (b_i - a_i c'_{i-1}).
    inv_piv: Vec<f64>,
    /// Subdiagonal (original).
    sub: Vec<f64>,
}

impl TridiagFactored {
    /// `sub[i]` multiplies x_{i-1} in row i (sub[0] unused), `diag[i]` x_i,
    /// `sup[i]` x_{i+1} (sup[n-1] unused).
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut cp = vec![0.0; n];
        let mut inv_piv = vec![0.0; n];
        let mut piv = diag[0];
        if piv == 0.0 {
            return Err(Error::NoConvergence("tridiagonal: zero pivot".into()));
        }
        inv_piv[0] = 1.0 / piv;
        cp[0] = sup[0] * inv_piv[0];
        for i in 1..n {
            piv = diag[i] - sub[i] * cp[i - 1];
            if piv == 0.0 {
                return Err(Error::NoConvergence("tridiagonal: zero pivot".into()));
            }
            inv_piv[i] = 1.0 / piv;
            if i + 1 < n {
                cp[i] = sup[i] * inv_piv[i];
            }
        }
        Ok(TridiagFactored { cp, inv_piv, sub: sub.to_vec() })
    }

    /// Solve in place, using `work` as scratch of length n.
    pub fn solve(&self, rhs: &mut [f64], work: &mut [f64]) {
        let n = rhs.len();
        work[0] = rhs[0] * self.inv_piv[0];
        for i in 1..n {
            work[i] = (rhs[i] - self.sub[i] * work[i - 1]) * self.inv_piv[i];
        }
        rhs[n - 1] = work[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = work[i] - self.cp[i] * rhs[i + 1];
        }
    }
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal eigenvalues via Sturm bisection
// ---------------------------------------------------------------------------

const STURM_PIVOT_GUARD: f64 = 1e-300;

/// Count eigenvalues of the symmetric tridiagonal matrix strictly less than
/// `lambda`, via the LDLT Sturm sequence.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < STURM_PIVOT_GUARD {
            if q >= 0.0 { STURM_PIVOT_GUARD } else { -STURM_PIVOT_GUARD }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let e_l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let e_r = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - e_l - e_r);
        hi = hi.max(diag[i] + e_l + e_r);
    }
    (lo - 1.0, hi + 1.0)
}

/// The `count` largest eigenvalues of a symmetric tridiagonal matrix, in
/// descending order, each located by bisection to `tol`.
pub fn sturm_top_eigenvalues(diag: &[f64], off: &[f64], count: usize, tol: f64) -> Vec<f64> {
    let n = diag.len();
    let count = count.min(n);
    let (lo, hi) = gershgorin_bounds(diag, off);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        // Eigenvalue with exactly n-1-k eigenvalues below it.
        let target = n - 1 - k;
        let mut a = lo;
        let mut b = hi;
        while b - a > tol.max(2.0 * f64::EPSILON * b.abs().max(1.0)) {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) <= target {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

// ---------------------------------------------------------------------------
// Least squares
// ---------------------------------------------------------------------------

/// Solve min ||X beta - y||_2 by normal equations; X is rows x p with p tiny.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let p = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ata = vec![vec![0.0; p]; p];
    let mut aty = vec![0.0; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            aty[i] += row[i] * yi;
            for j in 0..p {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    solve_dense_small(&mut ata, &mut aty)
}

/// Slope and intercept of the least-squares line through (x, y).
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// Minimal LCG; all "random" sampling in the crate is seeded through this so
/// results are reproducible bit for bit.
#[derive(Clone)]
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        // Constants from Knuth's MMIX.
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn banded_lu_matches_dense() {
        let n = 40;
        let kl = 3;
        let ku = 2;
        let mut rng = Lcg(7);
        let mut banded = BandedMatrix::zeros(n, kl, ku);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                let v = rng.uniform(-1.0, 1.0) + if i == j { 4.0 } else { 0.0 };
                banded.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let lu = banded.factor().unwrap();
        let mut x = b.clone();
        lu.solve(&mut x);
        let xd = dense.lu().solve(&nalgebra::DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert!((x[i] - xd[i]).abs() < 1e-10, "i={i}: {} vs {}", x[i], xd[i]);
        }
    }

    #[test]
    fn bordered_solve_matches_dense() {
        let n = 25;
        let mut rng = Lcg(11);
        let mut a = BandedMatrix::zeros(n, 2, 2);
        let mut dense = DMatrix::<f64>::zeros(n + 2, n + 2);
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                let v = rng.uniform(-1.0, 1.0) + if i == j { 3.0 } else { 0.0 };
                a.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let mut cols = vec![vec![0.0; n]; 2];
        let mut rows = vec![vec![0.0; n]; 2];
        for k in 0..2 {
            for i in 0..n {
                cols[k][i] = rng.uniform(-1.0, 1.0);
                rows[k][i] = rng.uniform(-1.0, 1.0);
                dense[(i, n + k)] = cols[k][i];
                dense[(n + k, i)] = rows[k][i];
            }
        }
        let corner = vec![vec![2.0, 0.3], vec![-0.1, 1.5]];
        for i in 0..2 {
            for j in 0..2 {
                dense[(n + i, n + j)] = corner[i][j];
            }
        }
        let f: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let g = vec![0.4, -0.7];
        let (x, y) = solve_bordered(a, &cols, &rows, &corner, &f, &g).unwrap();
        let mut rhs = nalgebra::DVector::zeros(n + 2);
        for i in 0..n {
            rhs[i] = f[i];
        }
        rhs[n] = g[0];
        rhs[n + 1] = g[1];
        let sol = dense.lu().solve(&rhs).unwrap();
        for i in 0..n {
            assert!((x[i] - sol[i]).abs() < 1e-9);
        }
        assert!((y[0] - sol[n]).abs() < 1e-9);
        assert!((y[1] - sol[n + 1]).abs() < 1e-9);
    }

    #[test]
    fn thomas_solves_tridiagonal() {
        let n = 200;
        let sub = vec![-1.0; n];
        let diag = vec![2.5; n];
        let sup = vec![-1.0; n];
        let f = TridiagFactored::new(&sub, &diag, &sup).unwrap();
        let mut rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let orig = rhs.clone();
        let mut work = vec![0.0; n];
        f.solve(&mut rhs, &mut work);
        // Residual check.
        for i in 0..n {
            let mut r = 2.5 * rhs[i];
            if i > 0 {
                r -= rhs[i - 1];
            }
            if i + 1 < n {
                r -= rhs[i + 1];
            }
            assert!((r - orig[i]).abs() < 1e-11);
        }
    }

    #[test]
    fn sturm_matches_dense_symmetric_eigen() {
        // 200x200 random symmetric tridiagonals vs dense oracle; the spec
        // invariant requires max-eigenvalue agreement to 1e-9.
        let n = 200;
        let mut rng = Lcg(42);
        for _ in 0..5 {
            let diag: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let off: Vec<f64> = (0..n - 1).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let mut dense = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                dense[(i, i)] = diag[i];
                if i + 1 < n {
                    dense[(i, i + 1)] = off[i];
                    dense[(i + 1, i)] = off[i];
                }
            }
            let mut oracle: Vec<f64> =
                dense.symmetric_eigenvalues().iter().cloned().collect();
            oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let top = sturm_top_eigenvalues(&diag, &off, 3, 1e-12);
            for k in 0..3 {
                assert!(
                    (top[k] - oracle[k]).abs() < 1e-9,
                    "k={k}: {} vs {}",
                    top[k],
                    oracle[k]
                );
            }
        }
    }

    #[test]
    fn sturm_count_simple() {
        // [[1,-1],[-1,3]] has eigenvalues 2 -+ sqrt(2).
        let diag = [1.0, 3.0];
        let off = [-1.0];
        assert_eq!(sturm_count(&diag, &off, 0.0), 0);
        assert_eq!(sturm_count(&diag, &off, 1.0), 1);
        assert_eq!(sturm_count(&diag, &off, 4.0), 2);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let (s, b) = fit_line(&x, &y);
        assert!((s - 3.0).abs() < 1e-12);
        assert!((b + 2.0).abs() < 1e-10);
    }
}
