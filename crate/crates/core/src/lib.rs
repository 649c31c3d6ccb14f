//! Metastability toolkit for the mass-conserving discretized Allen-Cahn
//! ring: landscape enumeration, hierarchies, Eyring-Kramers rates,
//! spectral gap and stochastic simulation.

pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod landscape;
pub mod model;
pub mod rates;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use model::{LatticeConfig, Params};
