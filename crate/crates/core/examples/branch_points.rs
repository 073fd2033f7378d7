//! Branch points of the left asymptotic system and their membership in the
//! absolute spectrum.
//!
//!     cargo run --example branch_points -- [beta] [c] [m] [eps]

use wavespec::spectrum::branch_points;
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let get = |i: usize, d: f64| a.get(i).copied().unwrap_or(d);
    let params = ModelParams::new(get(0, 2.0), get(1, 2.0), get(2, 0.0), get(3, 0.0))?;
    let bps = branch_points(&params)?;
    println!("{params:?}");
    for b in &bps.points {
        let kind = if b.in_absolute { "absolute" } else { "generalised" };
        println!(
            "lambda = {:>28.10}   mu* = {:>28.10}   {kind:<11}  residuals ({:.1e}, {:.1e})",
            b.lambda_br, b.double_root_mu, b.residuals.0, b.residuals.1
        );
    }
    for f in &bps.failures {
        println!("seed failure: {f}");
    }
    Ok(())
}
