//! Full classification of one parameter set, printed as the JSON report.
//!
//!     cargo run --release --example stability_report -- [beta] [c] [m] [eps]

use wavespec::cli::output::ReportJson;
use wavespec::{classify, ModelParams};

fn main() -> wavespec::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let get = |i: usize, d: f64| a.get(i).copied().unwrap_or(d);
    let report = classify(&ModelParams::new(get(0, 1.3), get(1, 1.0), get(2, 0.0), get(3, 0.0))?)?;
    report.check_invariants()?;
    let json = serde_json::to_string_pretty(&ReportJson::from_report(&report)).expect("serialisable");
    println!("{json}");
    Ok(())
}
