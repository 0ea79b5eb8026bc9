use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::affine::AffineForm;
use super::gamma::{GammaProduct, GammaValue};
use super::param::Param;
use super::rational::{factorial, nonpositive_integer, pow_q, sign_pow, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("free parameters other than the expansion variable remain: {0}")]
    NonAffineResidual(String),
    #[error("Gamma argument {0} is a pole independently of the expansion variable")]
    NonGenericResidual(String),
    #[error("the expression vanishes identically")]
    IdenticallyZero,
}

/// Leading term `coefficient * var^order` of a Laurent expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentLeading {
    pub order: i64,
    pub coefficient: GammaValue,
}

impl fmt::Display for LaurentLeading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * t^{}", self.coefficient, self.order)
    }
}

fn split_in(a: &AffineForm, var: &Param) -> Result<(Q, Q), LaurentError> {
    if let Some(p) = a.params().find(|p| *p != var) {
        return Err(LaurentError::NonAffineResidual(p.to_string()));
    }
    Ok((a.constant_part().clone(), a.coeff(var)))
}

/// Leading Laurent term of `g` as `var -> 0` after substituting `assignment`.
pub fn gamma_pole_order(
    g: &GammaProduct,
    assignment: &BTreeMap<Param, Q>,
    var: &Param,
) -> Result<LaurentLeading, LaurentError> {
    let mut assignment = assignment.clone();
    assignment.remove(var);
    let g = g.substitute(&assignment);
    if g.is_zero() {
        return Err(LaurentError::IdenticallyZero);
    }
    let mut order: i64 = 0;
    let mut coeff = GammaValue::rational(g.coeff().clone());
    for (a, p) in g.prefactor_factors() {
        let (c, b) = split_in(a, var)?;
        if !c.is_zero() {
            coeff = coeff.mul(&GammaValue::rational(pow_q(&c, *p)));
        } else if !b.is_zero() {
            coeff = coeff.mul(&GammaValue::rational(pow_q(&b, *p)));
            order += *p as i64;
        } else if *p > 0 {
            return Err(LaurentError::IdenticallyZero);
        } else {
            return Err(LaurentError::NonGenericResidual(a.to_string()));
        }
    }
    for (a, p) in g.gamma_map() {
        let (c, b) = split_in(a, var)?;
        match nonpositive_integer(&c) {
            Some(m) => {
                if b.is_zero() {
                    if *p > 0 {
                        return Err(LaurentError::NonGenericResidual(a.to_string()));
                    }
                    return Err(LaurentError::IdenticallyZero);
                }
                // Gamma(-m + b t) = (-1)^m / (m! b t) + O(1)
                let r = sign_pow(m as i64) / (Q::from_integer(factorial(m)) * &b);
                coeff = coeff.mul(&GammaValue::rational(pow_q(&r, *p)));
                order -= *p as i64;
            }
            None => {
                let v = GammaValue::gamma_of(&c).expect("not a pole");
                coeff = coeff.mul(&v.pow(*p));
            }
        }
    }
    Ok(LaurentLeading { order, coefficient: coeff })
}

/// Pole order (negative) or zero order (positive) of a single Gamma factor
/// `Gamma(c + b t)^p` at `t = 0`.
pub fn factor_order(c: &Q, b: &Q, p: i32) -> i64 {
    if nonpositive_integer(c).is_some() && !b.is_zero() {
        -(p as i64)
    } else {
        0
    }
}

/// `m!` as a rational, for test and report convenience.
pub fn fact_q(m: i64) -> Q {
    Q::from_integer(factorial(m.to_u64().expect("nonnegative")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolics::rational::{q, qf};

    fn u() -> AffineForm {
        AffineForm::param(Param::u())
    }

    fn two_l() -> AffineForm {
        AffineForm::param(Param::ell(1, 1))
    }

    fn at(x: Q) -> BTreeMap<Param, Q> {
        [(Param::ell(1, 1), x)].into_iter().collect()
    }

    /// Gamma(u)^2 Gamma(-2L - u) / Gamma(-2L + u)
    fn pil1() -> GammaProduct {
        GammaProduct::gamma_pow(u(), 2).mul_gamma(&(-two_l() - u()), 1).mul_gamma(&(-two_l() + u()), -1)
    }

    #[test]
    fn pil1_generic_is_plus_u_minus_two() {
        let l = gamma_pole_order(&pil1(), &at(qf(1, 2)), &Param::u()).unwrap();
        assert_eq!(l.order, -2);
        assert_eq!(l.coefficient, GammaValue::rational(q(1)));
    }

    #[test]
    fn pil1_integer_flips_sign() {
        let l = gamma_pole_order(&pil1(), &at(q(3)), &Param::u()).unwrap();
        assert_eq!(l.order, -2);
        assert_eq!(l.coefficient, GammaValue::rational(q(-1)));
    }

    #[test]
    fn shifted_form_has_no_sign_flip() {
        // Gamma(u)^2 Gamma(2L - u) / Gamma(2L + u) at 2L = 3 tends to +u^-2.
        let g = GammaProduct::gamma_pow(u(), 2).mul_gamma(&(two_l() - u()), 1).mul_gamma(&(two_l() + u()), -1);
        let l = gamma_pole_order(&g, &at(q(3)), &Param::u()).unwrap();
        assert_eq!((l.order, l.coefficient), (-2, GammaValue::rational(q(1))));
    }

    #[test]
    fn regular_ratio_is_one() {
        let g = GammaProduct::gamma(u() + 1).mul_gamma(&(AffineForm::int(1) - u()), -1);
        let l = gamma_pole_order(&g, &BTreeMap::new(), &Param::u()).unwrap();
        assert_eq!((l.order, l.coefficient), (0, GammaValue::rational(q(1))));
    }

    #[test]
    fn invariant_under_canonicalization() {
        let g = pil1().mul_gamma(&(u() + 3), 1).mul_gamma(&(u() - 2), -1);
        for x in [qf(1, 2), q(3), qf(-7, 3)] {
            let a = gamma_pole_order(&g, &at(x.clone()), &Param::u()).unwrap();
            let b = gamma_pole_order(&g.canonical(), &at(x), &Param::u()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn residual_parameters_are_rejected() {
        let e = gamma_pole_order(&pil1(), &BTreeMap::new(), &Param::u());
        assert!(matches!(e, Err(LaurentError::NonAffineResidual(_))));
    }
}
