//! Exact arithmetic: rationals, affine forms, polynomials and Gamma products.

pub mod affine;
pub mod gamma;
pub mod laurent;
pub mod param;
pub mod poly;
pub mod ratfun;
pub mod rational;

pub use affine::AffineForm;
pub use gamma::{GammaError, GammaFactor, GammaProduct, GammaSum, GammaValue};
pub use laurent::{gamma_pole_order, LaurentError, LaurentLeading};
pub use param::{Param, ParamKind};
pub use poly::{PMono, ParamPoly};
pub use ratfun::RatFun;
pub use rational::Q;

/// `Gamma(a) Gamma(b) / Gamma(a + b)`.
pub fn beta(a: &AffineForm, b: &AffineForm) -> GammaProduct {
    GammaProduct::beta(a, b)
}
