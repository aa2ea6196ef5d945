//! Roots of complex polynomials via companion-matrix eigenvalues.
//!
//! The dispersion relations treated here are polynomials in the spatial rate
//! with degree at most four (two components, second order), so a single-shift
//! complex Hessenberg QR on the companion matrix is robust and cheap. Roots
//! are polished by a few Newton steps on the original polynomial.

use num_complex::Complex64;

type C = Complex64;

/// Evaluate polynomial with coefficients in ascending order.
pub fn poly_eval(coeffs: &[C], x: C) -> C {
    let mut acc = C::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Derivative coefficients, ascending order.
pub fn poly_derivative(coeffs: &[C]) -> Vec<C> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// All roots of the polynomial `sum coeffs[k] x^k` (ascending coefficients).
///
/// Leading coefficients below `1e-14 * max|coeff|` are trimmed (degree drop);
/// an empty or constant polynomial yields no roots.
pub fn poly_roots(coeffs: &[C]) -> Vec<C> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut cs: Vec<C> = coeffs.to_vec();
    while let Some(last) = cs.last() {
        if last.norm() <= 1e-14 * scale && cs.len() > 1 {
            cs.pop();
        } else {
            break;
        }
    }
    let n = cs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-cs[0] / cs[1]];
    }
    if n == 2 {
        return quadratic_roots(cs[2], cs[1], cs[0]);
    }

    // Monic companion matrix, upper Hessenberg by construction.
    let lead = cs[n];
    let mut h = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 1..n {
        h[i][i - 1] = C::new(1.0, 0.0);
    }
    for i in 0..n {
        h[i][n - 1] = -cs[i] / lead;
    }
    let mut roots = hessenberg_eigenvalues(&mut h);

    // Newton polish against the original polynomial.
    let deriv = poly_derivative(&cs);
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let p = poly_eval(&cs, *r);
            let dp = poly_eval(&deriv, *r);
            if dp.norm() < 1e-300 {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() < 1e-15 * (1.0 + r.norm()) {
                break;
            }
        }
    }
    roots
}

fn quadratic_roots(a: C, b: C, c: C) -> Vec<C> {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Avoid cancellation: pick the sign aligning disc with b.
    let q = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    let q = -0.5 * q;
    let mut out = Vec::with_capacity(2);
    out.push(q / a);
    if q.norm() > 0.0 {
        out.push(c / q);
    } else {
        out.push(C::new(0.0, 0.0));
    }
    out
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Givens rotations. Destroys the input.
pub fn hessenberg_eigenvalues(h: &mut [Vec<C>]) -> Vec<C> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iter_since_deflate = 0usize;

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // Deflation scan from the bottom of the active block.
        let mut lo = hi - 1;
        while lo > 0 {
            let small = f64::EPSILON * (h[lo - 1][lo - 1].norm() + h[lo][lo].norm() + 1e-300);
            if h[lo][lo - 1].norm() <= small {
                h[lo][lo - 1] = C::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iter_since_deflate = 0;
            continue;
        }
        if hi - lo == 2 && h[lo + 1][lo].norm() > 0.0 {
            // Trailing 2x2 solved directly.
            let (r1, r2) = eig2(h[lo][lo], h[lo][lo + 1], h[lo + 1][lo], h[lo + 1][lo + 1]);
            eigs.push(r1);
            eigs.push(r2);
            hi = lo;
            iter_since_deflate = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2, with an occasional
        // exceptional shift to break symmetry cycles.
        let m = hi - 1;
        let shift = if iter_since_deflate > 0 && iter_since_deflate % 12 == 0 {
            h[m][m] + C::new(1.0 + 0.5 * iter_since_deflate as f64, 0.37)
        } else {
            let (r1, r2) = eig2(h[m - 1][m - 1], h[m - 1][m], h[m][m - 1], h[m][m]);
            if (r1 - h[m][m]).norm() <= (r2 - h[m][m]).norm() { r1 } else { r2 }
        };
        iter_since_deflate += 1;
        if iter_since_deflate > 300 {
            // Give up on further deflation; report diagonal of what's left.
            for i in lo..hi {
                eigs.push(h[i][i]);
            }
            hi = lo;
            iter_since_deflate = 0;
            continue;
        }

        // Implicit QR sweep on the active Hessenberg block.
        let mut rotations: Vec<(usize, C, C)> = Vec::with_capacity(hi - lo - 1);
        for i in lo..hi {
            h[i][i] -= shift;
        }
        for i in lo..hi - 1 {
            let (c, s, r) = givens(h[i][i], h[i + 1][i]);
            h[i][i] = r;
            h[i + 1][i] = C::new(0.0, 0.0);
            for j in i + 1..hi {
                let a = h[i][j];
                let b = h[i + 1][j];
                h[i][j] = c.conj() * a + s.conj() * b;
                h[i + 1][j] = -s * a + c * b;
            }
            rotations.push((i, c, s));
        }
        for &(i, c, s) in &rotations {
            for r in lo..=(i + 1).min(hi - 1) {
                let a = h[r][i];
                let b = h[r][i + 1];
                h[r][i] = a * c + b * s;
                h[r][i + 1] = -a * s.conj() + b * c.conj();
            }
        }
        for i in lo..hi {
            h[i][i] += shift;
        }
    }
    eigs
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: C, b: C, c: C, d: C) -> (C, C) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) * 0.5, (tr - disc) * 0.5)
}

/// Complex Givens rotation zeroing b: returns (c, s, r) with
/// [c.conj, s.conj; -s, c] [a; b] = [r; 0] and |c|^2 + |s|^2 = 1.
fn givens(a: C, b: C) -> (C, C, C) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (C::new(1.0, 0.0), C::new(0.0, 0.0), a);
    }
    let r = (na * na + nb * nb).sqrt();
    if na == 0.0 {
        // Rotation mapping (0, b) -> (|b|, 0).
        return (C::new(0.0, 0.0), b / nb, C::new(nb, 0.0));
    }
    let alpha = a / na;
    let c = C::new(na / r, 0.0);
    let s = alpha.conj() * b / r;
    (c, s, alpha * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sort_roots(mut r: Vec<C>) -> Vec<C> {
        r.sort_by(|a, b| {
            a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
        });
        r
    }

    #[test]
    fn quadratic_and_quartic_known_roots() {
        // (x-1)(x+2) = x^2 + x - 2
        let r = sort_roots(poly_roots(&[c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]));
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);

        // (x^2+1)(x-3)(x+5) = expanded
        // x^4 + 2x^3 - 14x^2 + 2x - 15
        let r = sort_roots(poly_roots(&[
            c(-15.0, 0.0),
            c(2.0, 0.0),
            c(-14.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
        ]));
        assert!((r[0] - c(-5.0, 0.0)).norm() < 1e-10);
        assert!((r[3] - c(3.0, 0.0)).norm() < 1e-10);
        let imag: Vec<&C> = r.iter().filter(|z| z.im.abs() > 0.5).collect();
        assert_eq!(imag.len(), 2);
        for z in imag {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn complex_coefficients() {
        // (x - (1+i)) (x - (2-3i)) with complex coefficients.
        let r1 = c(1.0, 1.0);
        let r2 = c(2.0, -3.0);
        let coeffs = vec![r1 * r2, -(r1 + r2), c(1.0, 0.0)];
        let roots = poly_roots(&coeffs);
        let mut found = [false, false];
        for z in roots {
            if (z - r1).norm() < 1e-11 {
                found[0] = true;
            }
            if (z - r2).norm() < 1e-11 {
                found[1] = true;
            }
        }
        assert!(found[0] && found[1]);
    }

    #[test]
    fn double_root_resolved() {
        // (x+1)^2 = x^2 + 2x + 1: double roots come out within sqrt(eps).
        let r = poly_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        for z in r {
            assert!((z - c(-1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn random_cubics_against_reconstruction() {
        let mut rng = crate::linalg::Lcg(3);
        for _ in 0..200 {
            let roots_true: Vec<C> = (0..3)
                .map(|_| c(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)))
                .collect();
            // Expand (x-r0)(x-r1)(x-r2).
            let mut coeffs = vec![c(1.0, 0.0)];
            for &r in &roots_true {
                let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
                for (k, &cf) in coeffs.iter().enumerate() {
                    next[k + 1] += cf;
                    next[k] -= cf * r;
                }
                coeffs = next;
            }
            let roots = poly_roots(&coeffs);
            assert_eq!(roots.len(), 3);
            for rt in &roots_true {
                let best = roots.iter().map(|z| (z - rt).norm()).fold(f64::MAX, f64::min);
                assert!(best < 1e-8, "missed root {rt}, best distance {best}");
            }
        }
    }
}
