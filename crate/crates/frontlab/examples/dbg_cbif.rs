use frontlab::models::ReactionModel;
use frontlab::profiles::shoot_scalar_front;
use frontlab::spectra::{top_eigenvalue, SchrodingerOperator};
fn main() {
    let cubic = ReactionModel::scalar_poly("cubic", vec![0.0, 1.0, 0.0, -1.0]);
    for mu in [3.2f64, 3.6, 3.8, 4.2] {
        print!("mu {mu}: lambda_top(c) =");
        for c in [1.6f64, 1.8, 1.9, 2.0, 2.1, 2.2] {
            // u-front at speed c (c >= 2 monotone; for c < 2 shoot still works).
            let l = 60.0;
            let front = shoot_scalar_front(&cubic, c.max(2.0), 1.0, l).unwrap();
            // For c < 2 the u-front formally doesn't exist as monotone; the
            // paper's picture holds the u-front at speed c: use the shooting
            // profile at max(c,2)? No: use the BVP at exactly c.
            let n = front.n_nodes();
            let potential: Vec<f64> = (0..n).map(|k| {
                let u = front.values[0][k];
                mu * (u - u * u * u) - c * c / 4.0
            }).collect();
            let op = SchrodingerOperator { xi_min: -l, h: front.h, diffusion: 1.0, potential, shift: 0.0 };
            print!(" {:+.4}", top_eigenvalue(&op));
        }
        println!();
    }
}
