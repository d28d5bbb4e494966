//! Classification data for symplectic leaves of complex reductive
//! Poisson-Lie groups attached to Belavin-Drinfeld triples.

pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod weyl;
pub mod bdtriple;
pub mod decomp;
pub mod leafclass;
pub mod typea;
pub mod cli;

pub use error::{Error, Result};
