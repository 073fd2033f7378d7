//! Polynomial utilities: simultaneous root finding, a closed-form cubic and
//! Sturm counting.
//!
//!     cargo run --example polynomial_roots

use num_complex::Complex64;
use wavespec::polynomial::{roots_cubic, roots_general, sturm_count, ComplexPoly};

fn main() -> wavespec::Result<()> {
    // (x - 1)(x - 2)(x + 3)(x^2 + 1), ascending coefficients.
    let p = ComplexPoly::from_real(&[6.0, -7.0, 6.0, -6.0, 0.0, 1.0])?;
    let r = roots_general(&p)?;
    for (z, res) in r.roots.iter().zip(&r.residuals) {
        println!("root {z:>22.12}  residual {res:.1e}");
    }
    let s = sturm_count(&p, -10.0, 10.0)?;
    println!("real roots in (-10, 10): {}  isolated in {:?}", s.count, s.isolating_intervals);

    let double = ComplexPoly::from_roots(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), Complex64::new(-2.0, 1.0)]);
    let r = roots_cubic(&double)?;
    let roots: Vec<String> = r.roots.iter().map(|z| format!("{z:.6}")).collect();
    println!("cubic with a double root: {}", roots.join(", "));
    Ok(())
}
