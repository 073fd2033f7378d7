//! Critical chemotactic strength for several consumption exponents, with the
//! Sturm root count and the closed-form check of the crossing.
//!
//!     cargo run --example beta_crit

use wavespec::polynomial::sturm_count;
use wavespec::spectrum::{beta_crit, f_beta, verify_beta_crit};

fn main() -> wavespec::Result<()> {
    let s = sturm_count(&f_beta(), 1.0, 1e6)?;
    println!("real roots of f on (1, 1e6): {}", s.count);
    println!("{:>5}  {:>14}  {:>14}  {:>12}", "m", "beta_crit", "|Im lambda|", "residual");
    for m in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9] {
        let b = beta_crit(m)?;
        let check = verify_beta_crit(b, 1.0, m)?;
        println!("{m:>5.2}  {b:>14.10}  {:>14.10}  {:>12.2e}", check.sqrt_lambda1, check.min_residual());
    }
    Ok(())
}
