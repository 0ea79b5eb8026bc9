//! Exact symbolic engine for gl(n) Yangian evaluations in Weyl algebras.

pub mod error;
pub mod gl2;
pub mod hwfun;
pub mod intertwiners;
pub mod lmatrix;
pub mod symbolics;
pub mod weyl;

pub use error::{Error, Result};
