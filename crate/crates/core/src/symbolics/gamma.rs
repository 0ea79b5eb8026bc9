use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::affine::AffineForm;
use super::param::Param;
use super::poly::ParamPoly;
use super::ratfun::RatFun;
use super::rational::{factorial, floor, fmt_q, frac, nonpositive_integer, pow_q, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("Gamma argument {0} sits at a pole")]
    Pole(String),
    #[error("prefactor denominator {0} vanishes")]
    ZeroDenominator(String),
    #[error("free parameters remain after substitution: {0}")]
    NotFullyAssigned(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaFactor {
    pub argument: AffineForm,
    pub power: i32,
}

/// `coeff * prod (affine)^p * prod Gamma(arg)^p`.
///
/// The prefactor is kept factored into monic non-constant affine forms, so it
/// is a rational function of the parameters with known zeros and poles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaProduct {
    coeff: Q,
    affine: BTreeMap<AffineForm, i32>,
    gammas: BTreeMap<AffineForm, i32>,
}

impl Default for GammaProduct {
    fn default() -> Self {
        GammaProduct::one()
    }
}

impl GammaProduct {
    pub fn one() -> Self {
        GammaProduct::constant(Q::one())
    }

    pub fn zero() -> Self {
        GammaProduct::constant(Q::zero())
    }

    pub fn constant(c: Q) -> Self {
        GammaProduct { coeff: c, affine: BTreeMap::new(), gammas: BTreeMap::new() }
    }

    pub fn gamma(arg: AffineForm) -> Self {
        Self::gamma_pow(arg, 1)
    }

    pub fn gamma_pow(arg: AffineForm, power: i32) -> Self {
        let mut g = GammaProduct::one();
        if power != 0 {
            g.gammas.insert(arg, power);
        }
        g
    }

    /// `Gamma(a) Gamma(b) / Gamma(a + b)`.
    pub fn beta(a: &AffineForm, b: &AffineForm) -> Self {
        let mut g = GammaProduct::gamma(a.clone());
        g = g.mul_gamma(b, 1);
        g.mul_gamma(&(a + b), -1)
    }

    pub fn coeff(&self) -> &Q {
        &self.coeff
    }

    pub fn prefactor_factors(&self) -> &BTreeMap<AffineForm, i32> {
        &self.affine
    }

    pub fn factors(&self) -> Vec<GammaFactor> {
        self.gammas.iter().map(|(a, p)| GammaFactor { argument: a.clone(), power: *p }).collect()
    }

    pub fn gamma_map(&self) -> &BTreeMap<AffineForm, i32> {
        &self.gammas
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return GammaProduct::zero();
        }
        let mut g = self.clone();
        g.coeff *= s;
        g
    }

    pub fn mul_gamma(&self, arg: &AffineForm, power: i32) -> Self {
        let mut g = self.clone();
        if g.is_zero() {
            return g;
        }
        let e = g.gammas.entry(arg.clone()).or_insert(0);
        *e += power;
        if *e == 0 {
            g.gammas.remove(arg);
        }
        g
    }

    /// Multiplies the prefactor by `a^power`.
    pub fn mul_affine(&self, a: &AffineForm, power: i32) -> Self {
        if self.is_zero() || power == 0 {
            return self.clone();
        }
        let (s, m) = a.monic();
        if m.is_constant() {
            if s.is_zero() {
                assert!(power > 0, "division by the zero constant");
                return GammaProduct::zero();
            }
            return self.scale(&pow_q(&s, power));
        }
        let mut g = self.scale(&pow_q(&s, power));
        let e = g.affine.entry(m.clone()).or_insert(0);
        *e += power;
        if *e == 0 {
            g.affine.remove(&m);
        }
        g
    }

    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        GammaProduct {
            coeff: self.coeff.recip(),
            affine: self.affine.iter().map(|(a, p)| (a.clone(), -p)).collect(),
            gammas: self.gammas.iter().map(|(a, p)| (a.clone(), -p)).collect(),
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut acc = GammaProduct::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `Gamma(z+1) = z Gamma(z)` until every non-constant argument has
    /// constant part in `[0, 1)`; constant arguments at positive integers are
    /// replaced by factorials and other non-polar constants are reduced to
    /// `(0, 1)`. Idempotent.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return GammaProduct::zero();
        }
        let mut out = GammaProduct { coeff: self.coeff.clone(), affine: self.affine.clone(), gammas: BTreeMap::new() };
        for (arg, p) in &self.gammas {
            let c = arg.constant_part();
            if arg.is_constant() {
                if nonpositive_integer(c).is_some() {
                    out = out.mul_gamma(arg, *p);
                    continue;
                }
                if c.is_integer() {
                    let m = c.to_integer();
                    let f = Q::from_integer(factorial(num_traits::ToPrimitive::to_u64(&(m - 1)).unwrap()));
                    out = out.scale(&pow_q(&f, *p));
                    continue;
                }
            }
            let k = floor(c);
            let base = arg.with_constant(frac(c));
            let k: i64 = num_traits::ToPrimitive::to_i64(&k).expect("shift fits in i64");
            out = out.mul_gamma(&base, *p);
            if k > 0 {
                for j in 0..k {
                    out = out.mul_affine(&base.shift(&q(j)), *p);
                }
            } else {
                for j in 1..=(-k) {
                    out = out.mul_affine(&base.shift(&q(-j)), -*p);
                }
            }
        }
        out
    }

    /// Partial substitution of parameters by rationals.
    pub fn substitute(&self, assignment: &BTreeMap<Param, Q>) -> Self {
        let mut out = GammaProduct::constant(self.coeff.clone());
        for (a, p) in &self.affine {
            out = out.mul_affine(&a.substitute(assignment), *p);
        }
        for (a, p) in &self.gammas {
            out = out.mul_gamma(&a.substitute(assignment), *p);
        }
        out
    }

    /// Substitution of parameters by affine forms.
    pub fn substitute_affine(&self, map: &BTreeMap<Param, AffineForm>) -> Self {
        let mut out = GammaProduct::constant(self.coeff.clone());
        for (a, p) in &self.affine {
            out = out.mul_affine(&a.substitute_affine(map), *p);
        }
        for (a, p) in &self.gammas {
            out = out.mul_gamma(&a.substitute_affine(map), *p);
        }
        out
    }

    pub fn params(&self) -> std::collections::BTreeSet<Param> {
        self.affine.keys().chain(self.gammas.keys()).flat_map(|a| a.params().copied()).collect()
    }

    /// Exact value at a full assignment.
    pub fn eval(&self, assignment: &BTreeMap<Param, Q>) -> Result<GammaValue, GammaError> {
        let g = self.substitute(assignment);
        if g.is_zero() {
            return Ok(GammaValue::zero());
        }
        if let Some(a) = g.affine.keys().chain(g.gammas.keys()).find(|a| !a.is_constant()) {
            return Err(GammaError::NotFullyAssigned(a.to_string()));
        }
        let mut v = GammaValue::rational(g.coeff.clone());
        for (a, p) in &g.gammas {
            v = v.mul(&GammaValue::gamma_of(a.constant_part())?.pow(*p));
        }
        Ok(v)
    }

    /// Splits a canonical product into its Gamma part and rational prefactor.
    pub fn split(&self) -> (BTreeMap<AffineForm, i32>, RatFun) {
        let c = self.canonical();
        let mut r = RatFun::constant(c.coeff.clone());
        for (a, p) in &c.affine {
            r = r.mul_affine_pow(a, *p);
        }
        (c.gammas, r)
    }

    /// Prefactor as numerator and denominator polynomials.
    pub fn prefactor_num_den(&self) -> (ParamPoly, ParamPoly) {
        let mut n = ParamPoly::constant(self.coeff.clone());
        let mut d = ParamPoly::one();
        for (a, p) in &self.affine {
            let f = ParamPoly::from_affine(a).pow(p.unsigned_abs());
            if *p > 0 {
                n = &n * &f;
            } else {
                d = &d * &f;
            }
        }
        (n, d)
    }
}

impl Mul<&GammaProduct> for &GammaProduct {
    type Output = GammaProduct;
    fn mul(self, o: &GammaProduct) -> GammaProduct {
        if self.is_zero() || o.is_zero() {
            return GammaProduct::zero();
        }
        let mut g = self.scale(&o.coeff);
        for (a, p) in &o.affine {
            let e = g.affine.entry(a.clone()).or_insert(0);
            *e += p;
            if *e == 0 {
                g.affine.remove(a);
            }
        }
        for (a, p) in &o.gammas {
            g = g.mul_gamma(a, *p);
        }
        g
    }
}

impl Mul for GammaProduct {
    type Output = GammaProduct;
    fn mul(self, o: GammaProduct) -> GammaProduct {
        &self * &o
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coeff.is_one() || (self.affine.is_empty() && self.gammas.is_empty()) {
            parts.push(fmt_q(&self.coeff));
        }
        let mut den = Vec::new();
        for (a, p) in &self.affine {
            let s = if p.abs() == 1 { format!("({})", a) } else { format!("({})^{}", a, p.abs()) };
            if *p > 0 {
                parts.push(s)
            } else {
                den.push(s)
            }
        }
        for (a, p) in &self.gammas {
            let s = if p.abs() == 1 { format!("G({})", a) } else { format!("G({})^{}", a, p.abs()) };
            if *p > 0 {
                parts.push(s)
            } else {
                den.push(s)
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))?;
        if !den.is_empty() {
            write!(f, " / ({})", den.join("*"))?;
        }
        Ok(())
    }
}

/// An exact constant `rational * prod Gamma(r)^p` with every `r` in `(0, 1)`.
/// `Gamma(1/2) = sqrt(pi)` is kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaValue {
    pub rational: Q,
    pub gammas: BTreeMap<Q, i32>,
}

impl GammaValue {
    pub fn zero() -> Self {
        GammaValue::rational(Q::zero())
    }

    pub fn rational(r: Q) -> Self {
        GammaValue { rational: r, gammas: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.gammas.is_empty() {
            Some(&self.rational)
        } else {
            None
        }
    }

    /// `Gamma(c)` for a rational `c` that is not a pole.
    pub fn gamma_of(c: &Q) -> Result<GammaValue, GammaError> {
        if nonpositive_integer(c).is_some() {
            return Err(GammaError::Pole(fmt_q(c)));
        }
        let g = GammaProduct::gamma(AffineForm::constant(c.clone())).canonical();
        let mut v = GammaValue::rational(g.coeff.clone());
        for (a, p) in &g.gammas {
            v.gammas.insert(a.constant_part().clone(), *p);
        }
        Ok(v)
    }

    pub fn mul(&self, o: &GammaValue) -> GammaValue {
        if self.is_zero() || o.is_zero() {
            return GammaValue::zero();
        }
        let mut v = GammaValue::rational(&self.rational * &o.rational);
        v.gammas = self.gammas.clone();
        for (r, p) in &o.gammas {
            let e = v.gammas.entry(r.clone()).or_insert(0);
            *e += p;
            if *e == 0 {
                v.gammas.remove(r);
            }
        }
        v
    }

    pub fn pow(&self, e: i32) -> GammaValue {
        GammaValue {
            rational: pow_q(&self.rational, e),
            gammas: self.gammas.iter().map(|(r, p)| (r.clone(), p * e)).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.rational.is_positive()
    }

    pub fn sign(&self) -> i32 {
        if self.rational.is_positive() {
            1
        } else if self.rational.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.rational))?;
        for (r, p) in &self.gammas {
            let name = if *r == super::rational::qf(1, 2) { "sqrt(pi)".to_string() } else { format!("G({})", fmt_q(r)) };
            if *p == 1 {
                write!(f, "*{}", name)?;
            } else {
                write!(f, "*{}^{}", name, p)?;
            }
        }
        Ok(())
    }
}

/// A finite sum of Gamma products in canonical form: Gamma part -> rational
/// prefactor. Two sums are equal exactly when their maps agree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GammaSum {
    terms: BTreeMap<BTreeMap<AffineForm, i32>, RatFun>,
}

impl GammaSum {
    pub fn zero() -> Self {
        GammaSum::default()
    }

    pub fn from_product(g: &GammaProduct) -> Self {
        let mut s = GammaSum::zero();
        s.add_product(g, &ParamPoly::one());
        s
    }

    /// Adds `poly * g`.
    pub fn add_product(&mut self, g: &GammaProduct, poly: &ParamPoly) {
        if g.is_zero() || poly.is_zero() {
            return;
        }
        let (key, r) = g.split();
        let r = &r * poly;
        let e = self.terms.entry(key.clone()).or_insert_with(RatFun::zero);
        *e = &*e + &r;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_sum(&mut self, o: &GammaSum) {
        for (k, r) in &o.terms {
            let e = self.terms.entry(k.clone()).or_insert_with(RatFun::zero);
            *e = &*e + r;
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn scale_poly(&self, p: &ParamPoly) -> GammaSum {
        let mut out = GammaSum::zero();
        for (k, r) in &self.terms {
            let v = r * p;
            if !v.is_zero() {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<BTreeMap<AffineForm, i32>, RatFun> {
        &self.terms
    }
}

impl Add<&GammaSum> for &GammaSum {
    type Output = GammaSum;
    fn add(self, o: &GammaSum) -> GammaSum {
        let mut s = self.clone();
        s.add_sum(o);
        s
    }
}

impl Sub<&GammaSum> for &GammaSum {
    type Output = GammaSum;
    fn sub(self, o: &GammaSum) -> GammaSum {
        let mut s = self.clone();
        s.add_sum(&o.scale_poly(&ParamPoly::int(-1)));
        s
    }
}

impl fmt::Display for GammaSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, r)| {
                let g = GammaProduct { coeff: Q::one(), affine: BTreeMap::new(), gammas: k.clone() };
                format!("[{}]*{}", r, g)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
