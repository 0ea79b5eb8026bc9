use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::affine::AffineForm;
use super::param::Param;
use super::poly::ParamPoly;
use super::rational::Q;

/// A rational function whose denominator is a product of monic affine forms.
///
/// Every coefficient that arises from Gamma shifts has this shape, and with
/// a factored denominator the zero test reduces to a zero test of the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatFun {
    num: ParamPoly,
    den: BTreeMap<AffineForm, u32>,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun::default()
    }

    pub fn one() -> Self {
        RatFun::from_poly(ParamPoly::one())
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        RatFun { num: p, den: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(ParamPoly::constant(c))
    }

    pub fn numerator(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<AffineForm, u32> {
        &self.den
    }

    pub fn denominator(&self) -> ParamPoly {
        let mut d = ParamPoly::one();
        for (f, e) in &self.den {
            d = &d * &ParamPoly::from_affine(f).pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies by `a^e` for an affine form and a signed exponent.
    pub fn mul_affine_pow(&self, a: &AffineForm, e: i32) -> RatFun {
        let (s, m) = a.monic();
        if m.is_constant() {
            return self.scale(&super::rational::pow_q(&s, e));
        }
        let mut out = self.scale(&super::rational::pow_q(&s, e));
        if e >= 0 {
            let mut e = e as u32;
            // cancel against the denominator first
            if let Some(d) = out.den.get_mut(&m) {
                let k = (*d).min(e);
                *d -= k;
                e -= k;
                if *d == 0 {
                    out.den.remove(&m);
                }
            }
            out.num = &out.num * &ParamPoly::from_affine(&m).pow(e);
        } else {
            *out.den.entry(m).or_insert(0) += (-e) as u32;
        }
        out
    }

    pub fn scale(&self, s: &Q) -> RatFun {
        RatFun { num: self.num.scale(s), den: if s.is_zero() { BTreeMap::new() } else { self.den.clone() } }
    }

    pub fn eval(&self, assignment: &BTreeMap<Param, Q>) -> Option<Q> {
        let n = self.num.eval(assignment)?;
        let d = self.denominator().eval(assignment)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn substitute(&self, assignment: &BTreeMap<Param, Q>) -> RatFun {
        let mut out = RatFun::from_poly(self.num.substitute(assignment));
        for (f, e) in &self.den {
            out = out.mul_affine_pow(&f.substitute(assignment), -(*e as i32));
        }
        out
    }
}

impl Add<&RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            let d = den.entry(f.clone()).or_insert(0);
            *d = (*d).max(*e);
        }
        let lift = |r: &RatFun| {
            let mut n = r.num.clone();
            for (f, e) in &den {
                let have = r.den.get(f).copied().unwrap_or(0);
                n = &n * &ParamPoly::from_affine(f).pow(e - have);
            }
            n
        };
        let num = &lift(self) + &lift(o);
        if num.is_zero() {
            return RatFun::zero();
        }
        RatFun { num, den }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub<&RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Mul<&RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        let mut out = RatFun::from_poly(&self.num * &o.num);
        out.den = self.den.clone();
        for (f, e) in &o.den {
            *out.den.entry(f.clone()).or_insert(0) += e;
        }
        out
    }
}

impl Mul<&ParamPoly> for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &ParamPoly) -> RatFun {
        if o.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: &self.num * o, den: self.den.clone() }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(a, e)| if *e == 1 { format!("({})", a) } else { format!("({})^{}", a, e) })
            .collect();
        write!(f, "({}) / {}", self.num, d.join("*"))
    }
}
