//! Numerical machinery around the Kramers-Kronig relations for causal,
//! absolutely integrable signals.

pub mod catalog;
pub mod contour;
pub mod error;
pub mod hilbert;
pub mod integrability;
pub mod quadrature;
pub mod transforms;
mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
