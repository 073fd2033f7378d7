//! Travelling-wave profiles: a front with a pulse for `m = 0`, two fronts for
//! `m = 1`, with the asymptotic states.
//!
//!     cargo run --example profiles

use wavespec::model::{sample_profile, wave_limits};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    for m in [0.0, 0.5, 1.0] {
        let params = ModelParams::new(2.0, 2.0, m, 0.0)?;
        let limits = wave_limits(&params);
        println!("m = {m}: u_z/u -> {:.4} as z -> -inf, left cell density {:?}", limits.uz_over_u, limits.w_left);
        println!("{:>6}  {:>10}  {:>10}", "z", "u", "w");
        for (z, s) in sample_profile(&params, -6.0, 6.0, 13) {
            println!("{z:>6.1}  {:>10.6}  {:>10.6}", s.u, s.w);
        }
        println!();
    }
    Ok(())
}
