//! Rescaled radial basis function interpolation.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod interpolate;
pub mod io;
pub mod kernels;
pub mod pum;
pub mod solver;
pub mod spatial;

pub use error::{Error, Result};
