//! Absolute spectrum from the right: closed form versus the generic
//! rank test on a few probe points.
//!
//!     cargo run --example abs_plus

use num_complex::Complex64;
use wavespec::asymptotics::Side;
use wavespec::spectrum::{abs_plus_analytic, abs_rank_gap};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let params = ModelParams::new(2.0, 2.0, 0.0, 0.0)?;
    let a = abs_plus_analytic(&params);
    println!("segment {:?}, rightmost point {}", a.segment, a.rightmost());
    let probes = [
        Complex64::new(-1.5, 0.0),
        a.wing(-3.0),
        a.wing(-6.0).conj(),
        Complex64::new(-3.0, 1.0),
        Complex64::new(0.5, 0.5),
    ];
    for z in probes {
        let gap = abs_rank_gap(&params, Side::PlusInfinity, z)?;
        println!("{z:>22.6}  closed form {:<5}  rank gap {gap:>10.2e}", a.contains(z, 1e-8));
    }
    Ok(())
}
