//! Coarse text map of the essential spectrum, unweighted and with the ideal
//! weights. `#` marks a Morse-index mismatch, `.` the right-hand region,
//! `o` other equal-index regions, `~` cells too close to a dispersion curve.
//!
//!     cargo run --release --example essential_grid -- [beta] [c]

use num_complex::Complex64;
use wavespec::spectrum::{default_window, essential_grid, ideal_weights, Region};
use wavespec::ModelParams;

fn show(params: &ModelParams, nu_minus: f64, nu_plus: f64) -> wavespec::Result<()> {
    let (nx, ny) = (72, 28);
    let grid = essential_grid(params, nu_minus, nu_plus, default_window(params.c), (nx, ny))?;
    println!("weights ({nu_minus:.4}, {nu_plus:.4}); rows from Im max down to Im min, axis at column |");
    let axis = grid.cell_at(Complex64::new(0.0, 0.0)).map(|c| c.lambda.re);
    for iy in (0..ny).rev() {
        let row: String = (0..nx)
            .map(|ix| {
                let cell = grid.cell(ix, iy);
                match cell.region {
                    _ if axis == Some(cell.lambda.re) && cell.region != Region::InEssential => '|',
                    Region::InEssential => '#',
                    Region::Omega1 => '.',
                    Region::NearBoundary => '~',
                    Region::Omega2 | Region::Omega3 => 'o',
                }
            })
            .collect();
        println!("{row}");
    }
    println!(
        "cells: {} essential, {} right region\n",
        grid.count(Region::InEssential),
        grid.count(Region::Omega1)
    );
    Ok(())
}

fn main() -> wavespec::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let params = ModelParams::new(a.first().copied().unwrap_or(1.3), a.get(1).copied().unwrap_or(2.0), 0.0, 0.0)?;
    show(&params, 0.0, 0.0)?;
    let w = ideal_weights(&params)?;
    show(&params, w.nu_minus_star, w.nu_plus_star)
}
