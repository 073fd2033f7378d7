//! Ideal exponential weights for a handful of parameter sets.
//!
//!     cargo run --example ideal_weights

use wavespec::spectrum::ideal_weights;
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let cases = [
        (2.0, 2.0, 0.0, 0.0),
        (1.3, 2.0, 0.0, 0.0),
        (2.0, 2.0, 0.1, 0.0),
        (2.0, 2.0, 0.7, 0.0),
        (2.0, 2.0, 1.0, 0.0),
        (1.3, 2.0, 0.0, 0.02),
    ];
    println!("{:>5} {:>4} {:>4} {:>5}  {:>12} {:>8}", "beta", "c", "m", "eps", "nu_minus*", "nu_plus*");
    for (beta, c, m, eps) in cases {
        let w = ideal_weights(&ModelParams::new(beta, c, m, eps)?)?;
        println!("{beta:>5} {c:>4} {m:>4} {eps:>5}  {:>12.6} {:>8.4}", w.nu_minus_star, w.nu_plus_star);
    }
    Ok(())
}
