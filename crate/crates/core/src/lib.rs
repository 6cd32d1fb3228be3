//! Existence, stability and profiles of standing waves for the
//! triple-power nonlinearity.

pub mod boundary;
pub mod closedform;
pub mod error;
pub mod io;
pub mod poly;
pub mod profiles;
pub mod potential;
pub mod quadrature;
pub mod regions;
pub mod stability;

pub use error::{Error, Result};
pub use potential::{CaseSigns, ExistenceClass, GeneralCoeffs, ModelParams};
