//! Spectral-radius bounds for staircase (0,1)-matrices and exhaustive
//! verification of the Nordhaus-Gaddum problem for the spectral radius.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod par;
pub mod staircase;
pub mod transforms;
pub mod verifier;

pub use bounds::{BoundReport, EqualityWitness, Rho0Breakdown};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Partition, Polynomial};
pub use par::Exec;
pub use staircase::{Membership, ParamSix, SimpleGraph, StaircaseMatrix};
pub use transforms::{ChainReport, TransformTrace};
