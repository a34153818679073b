//! Linear-combination-of-unitaries state preparation for multivariate
//! functions expanded in Fourier or Chebyshev series.
//!
//! The pipeline is: compute series coefficients ([`series`]), lay out the
//! uniform grid ([`grid`]), synthesize the prepare/select/phase circuit
//! ([`synthesis`]) in a small gate IR ([`circuit`]), run it on a dense
//! statevector ([`simulator`]) and check the result ([`verification`]).
//! [`physics`] holds the built-in targets and the plane-wave eigensolver.

pub mod circuit;
pub mod error;
pub mod grid;
pub mod physics;
pub mod series;
pub mod simulator;
pub mod synthesis;
pub mod verification;

pub use error::{Error, Result};
pub use num_complex::Complex64;
