//! Essential and absolute spectra of travelling waves in a Keller–Segel
//! model with logarithmic chemosensitivity.
//!
//! The pipeline runs from [`model`] (parameters and the explicit wave
//! profile) through [`asymptotics`] (characteristic polynomials of the
//! asymptotic systems) to [`spectrum`] (branch points, weights, grids,
//! absolute-spectrum continuation and the stability verdict). Root finding
//! and Sturm sequences live in [`polynomial`].

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod model;
pub mod polynomial;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use spectrum::{classify, StabilityReport, Verdict};
