//! Branch points with cell diffusion switched on, converging to the
//! diffusion-free values, and the fast spatial eigenvalue near -c/eps.
//!
//!     cargo run --example epsilon_continuation

use num_complex::Complex64;
use wavespec::asymptotics::{spatial_eigenvalues, Side};
use wavespec::spectrum::branch_points;
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let lead = |eps: f64| -> wavespec::Result<Complex64> {
        let bps = branch_points(&ModelParams::new(1.3, 2.0, 0.0, eps)?)?;
        let upper = bps.absolute().map(|b| b.lambda_br).find(|l| l.im > 0.0);
        Ok(upper.expect("absolute branch point"))
    };
    let l0 = lead(0.0)?;
    println!("eps = 0: {l0:.6}");
    let mut prev: Option<Complex64> = None;
    let mut prev_step: Option<f64> = None;
    for eps in [0.04, 0.02, 0.01, 0.005] {
        let l = lead(eps)?;
        let mu = spatial_eigenvalues(&ModelParams::new(1.3, 2.0, 0.0, eps)?, Side::MinusInfinity, Complex64::new(1.0, 0.0), 0.0)?;
        let fast = mu.mu.iter().min_by(|a, b| a.re.total_cmp(&b.re)).unwrap();
        let step = prev.map(|p| (p - l).norm());
        let order = match (prev_step, step) {
            (Some(a), Some(b)) => format!("{:.3}", (a / b).log2()),
            _ => "-".into(),
        };
        println!(
            "eps = {eps:<6} lambda_br = {l:.6}  |error| = {:.3e}  order {order:>5}  fast mu = {:.3} (-c/eps = {:.1})",
            (l - l0).norm(),
            fast,
            -2.0 / eps
        );
        prev_step = step;
        prev = Some(l);
    }
    Ok(())
}
