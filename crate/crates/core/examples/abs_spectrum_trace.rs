//! Continuation of the absolute spectrum out of its branch points by
//! sweeping the weight, including the degenerate start at the origin for
//! `m = 1`.
//!
//!     cargo run --release --example abs_spectrum_trace

use wavespec::asymptotics::Side;
use wavespec::spectrum::{abs_rank_gap, branch_points, trace_abs_minus, TraceOptions};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    for (beta, c, m, eps) in [(2.0, 2.0, 0.0, 0.0), (1.3, 2.0, 0.0, 0.0), (2.0, 2.0, 1.0, 0.0), (1.3, 2.0, 0.0, 0.02)] {
        let params = ModelParams::new(beta, c, m, eps)?;
        let bps = branch_points(&params)?;
        let Some(seed) = bps.absolute().find(|b| b.lambda_br.im >= 0.0) else {
            continue;
        };
        let tr = trace_abs_minus(&params, seed, TraceOptions::default())?;
        let worst = tr
            .curve
            .lambdas()
            .map(|l| abs_rank_gap(&params, Side::MinusInfinity, l).map(f64::abs))
            .collect::<wavespec::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("({beta}, {c}, {m}, {eps}) from {:.6}", seed.lambda_br);
        println!("  weights {:.4} .. {:.4}, {} points, worst rank gap {worst:.1e}", tr.nu_range.0, tr.nu_range.1, tr.curve.samples.len());
        for (nu, l) in tr.curve.samples.iter().step_by(80) {
            println!("  nu = {nu:>8.4}  lambda = {l:.6}");
        }
        if let Some(f) = &tr.failure {
            println!("  stopped early: {f}");
        }
    }
    Ok(())
}
