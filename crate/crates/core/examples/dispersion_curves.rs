//! Dispersion relations on both sides, weighted so that the left curves
//! pass through the branch points.
//!
//!     cargo run --example dispersion_curves

use wavespec::asymptotics::Side;
use wavespec::spectrum::{branch_points, dispersion_curves_at, ideal_weights_from};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let params = ModelParams::new(2.0, 2.0, 0.0, 0.0)?;
    let bps = branch_points(&params)?;
    let w = ideal_weights_from(&params, &bps)?;
    let mut ks: Vec<f64> = (0..=200).map(|i| -4.0 + 0.04 * i as f64).collect();
    ks.extend(bps.absolute().map(|b| b.double_root_mu.im));
    ks.sort_by(f64::total_cmp);
    for (side, nu) in [(Side::MinusInfinity, w.nu_minus_star), (Side::PlusInfinity, w.nu_plus_star)] {
        let d = dispersion_curves_at(&params, side, nu, &ks)?;
        println!("{} side, weight {nu:.6}: {} curves, {} ambiguous matches", side.label(), d.curves.len(), d.warnings.len());
        for c in &d.curves {
            let rightmost = c.lambdas().max_by(|a, b| a.re.total_cmp(&b.re)).unwrap();
            println!("  branch {}: {} samples, rightmost point {rightmost:.6}", c.branch_id, c.samples.len());
        }
    }
    for b in bps.absolute() {
        let d = dispersion_curves_at(&params, Side::MinusInfinity, w.nu_minus_star, &ks)?;
        let dist = d.curves.iter().map(|c| c.distance_to(b.lambda_br)).fold(f64::INFINITY, f64::min);
        println!("branch point {:.6}: distance to weighted curves {dist:.1e}", b.lambda_br);
    }
    Ok(())
}
