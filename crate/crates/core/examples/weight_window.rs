//! Admissible weight window as the chemotactic strength approaches its
//! critical value: the interval shrinks and disappears.
//!
//!     cargo run --release --example weight_window

use wavespec::spectrum::{admissible_weight_window, beta_crit};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let bc = beta_crit(0.0)?;
    println!("beta_crit = {bc:.10}");
    println!("{:>10}  {:>11}  {:>11}  {:>11}  {:>9}", "beta", "nu_min", "nu_max", "nu_minus*", "width");
    let mut betas: Vec<f64> = (0..8).map(|i| 1.1 + 0.07 * i as f64).collect();
    betas.extend([bc - 1e-3, bc + 1e-3]);
    for beta in betas {
        let w = admissible_weight_window(&ModelParams::new(beta, 1.0, 0.0, 0.0)?, None, None)?;
        match (w.nu_min, w.nu_max) {
            (Some(a), Some(b)) => println!(
                "{beta:>10.6}  {a:>11.6}  {b:>11.6}  {:>11.6}  {:>9.5}",
                w.nu_minus_star,
                b - a
            ),
            _ => println!("{beta:>10.6}  {:>11}  {:>11}  {:>11.6}  {:>9}", "-", "-", w.nu_minus_star, "empty"),
        }
    }
    Ok(())
}
