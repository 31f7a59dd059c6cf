//! Simulation toolkit for FDD massive MIMO: downlink covariance estimation
//! from uplink snapshots and sparsifying precoder design.

pub mod array;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod link;
pub mod milp;
pub mod precoder;
pub mod nn;
pub mod rng;
pub mod udct;

pub use error::{Error, Result};
pub use num_complex::Complex64;
