//! The onset of absolute instability moves with the consumption exponent as
//! beta_crit (1 - m).
//!
//!     cargo run --example onset_scaling

use wavespec::spectrum::{beta_crit, onset_beta};

fn main() -> wavespec::Result<()> {
    let b0 = beta_crit(0.0)?;
    println!("{:>4}  {:>14}  {:>14}  {:>9}", "m", "onset", "b0 (1 - m)", "diff");
    for m in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let expected = b0 * (1.0 - m);
        let onset = onset_beta(1.0, m, (0.9 * expected, 1.1 * expected), 1e-10)?;
        println!("{m:>4}  {onset:>14.10}  {expected:>14.10}  {:>9.1e}", onset - expected);
    }
    Ok(())
}
