//! Numerics for moments of random circuits over subgroups of the unitary
//! group: Clifford, orthogonal, unitary-symplectic and matchgate circuits.

pub mod circuits;
pub mod experiments;
pub mod commutant;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod operator;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
