//! Spatial eigenvalues, Morse indices and the large-lambda well-posedness
//! check on both sides.
//!
//!     cargo run --example spatial_eigenvalues

use num_complex::Complex64;
use wavespec::asymptotics::{check_well_posed, morse_index, spatial_eigenvalues, Side};
use wavespec::ModelParams;

fn main() -> wavespec::Result<()> {
    let params = ModelParams::new(2.0, 2.0, 0.0, 0.0)?;
    check_well_posed(&params)?;
    for lambda in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.5)] {
        for side in Side::BOTH {
            let r = spatial_eigenvalues(&params, side, lambda, 0.0)?;
            let roots: Vec<String> = r.mu.iter().map(|m| format!("{m:.4}")).collect();
            let idx = morse_index(&params, side, lambda, 0.0)?;
            println!("lambda = {lambda:<8} {:<5} index {}  mu = [{}]", side.label(), idx.index, roots.join(", "));
        }
    }
    Ok(())
}
