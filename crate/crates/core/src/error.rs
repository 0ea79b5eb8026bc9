use thiserror::Error;

use crate::symbolics::{GammaError, LaurentError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {0} is below 2")]
    RankTooSmall(usize),
    #[error("constraint system is not unit triangular at sub-site {0}")]
    NonTriangular(usize),
    #[error("factor sites share the coordinate {0}")]
    SiteCollision(String),
    #[error("the two quantum determinant orderings disagree")]
    CentralityFailure,
    #[error("not a highest weight vector: T_{a}{b} at u^{power} gives {residual}")]
    NotHighestWeight { a: usize, b: usize, power: u32, residual: String },
    #[error("the zero vector is not admissible")]
    ZeroVector,
    #[error("diagonal action of T_{0}{0} is not a multiple of the vector")]
    NotEigenvector(usize),
    #[error("product is not divisible by u^{0}")]
    NotDivisible(u32),
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("degenerate Beta argument {0}")]
    DegenerateArgument(String),
    #[error("parameter arrays are not related by the permutation: {0}")]
    ParameterMismatch(String),
    #[error("state is not beta admissible: {0}")]
    NotBetaAdmissible(String),
    #[error("determinant product does not normalize to 1: {0}")]
    NonUnitResidual(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

pub type Result<T> = std::result::Result<T, Error>;
