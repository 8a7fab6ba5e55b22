//! Irreducibility, similarity to irreducible operators and generator
//! constructions in the matrix algebras `M_n(C)`.

pub mod cli;
pub mod error;
pub mod generators;
pub mod numkernel;
pub mod oracle;
pub mod similarity;
pub mod staralg;

pub use error::{Error, Necessity, Result};
