use frontlab::dispersion::*;
use frontlab::models::*;
use std::collections::BTreeMap;
fn main() {
    let m = build_preset("fhn", &BTreeMap::new()).unwrap();
    let state = vec![0.0, 0.0];
    let eigs = m.jacobian_eigenvalues(&state);
    let at = Equilibrium { state, jac_eigenvalues: eigs, stability: Stability::Unstable };
    for n in [81usize, 256, 1024] {
        let roots = find_double_roots(&m, 2.0, &at, SeedBox::default(), n).unwrap();
        println!("n_seeds {n}: {} roots", roots.len());
        for r in &roots {
            println!("  lambda {:.6}{:+.6}i nu {:.6}{:+.6}i pinched {} degen {}", r.lambda.re, r.lambda.im, r.nu.re, r.nu.im, r.pinched, r.degenerate);
        }
    }
}
