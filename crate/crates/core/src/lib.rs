//! Numerical toolkit for the trace-distance key-security criterion d:
//! quantum state distances, classical-quantum key ensembles, the criterion
//! in its several forms, measurement-based attacks, couplings, GF(2)
//! post-processing analysis and guarantee arithmetic.

pub mod bounds;
pub mod coupling;
pub mod criteria;
pub mod discrimination;
pub mod ensembles;
pub mod error;
pub mod qmath;
pub mod random;
pub mod sidechannel;

pub use error::{Error, Result};
