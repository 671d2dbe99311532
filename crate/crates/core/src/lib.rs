//! Exact computer algebra for the Poisson superalgebras po(0|2k), their
//! special Hamiltonian quotients sh(0|2k), the contact superalgebra k^L(1|6)
//! and loop extensions: quadratic Casimir elements, Verma modules and
//! Shapovalov determinants.

pub mod error;
pub mod exactnum;
pub mod liealg;
pub mod superpoly;
pub mod rootsys;
pub mod casimir;
pub mod uea;
pub mod verma;
pub mod cli;

pub use error::{Error, Result};
