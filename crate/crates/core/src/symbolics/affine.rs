use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::param::Param;
use super::rational::{fmt_q, q, Q};

/// `constant + sum_p coeff_p * p` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AffineForm {
    terms: BTreeMap<Param, Q>,
    constant: Q,
}

impl AffineForm {
    pub fn constant(c: Q) -> Self {
        AffineForm { terms: BTreeMap::new(), constant: c }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn param(p: Param) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, Q::one());
        AffineForm { terms, constant: Q::zero() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Param, Q)>>(constant: Q, terms: I) -> Self {
        let mut a = AffineForm::constant(constant);
        for (p, c) in terms {
            a.add_term(p, c);
        }
        a
    }

    fn add_term(&mut self, p: Param, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn constant_part(&self) -> &Q {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<Param, Q> {
        &self.terms
    }

    pub fn coeff(&self, p: &Param) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Q> {
        if self.terms.is_empty() {
            Some(&self.constant)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.terms.keys()
    }

    pub fn with_constant(&self, c: Q) -> Self {
        AffineForm { terms: self.terms.clone(), constant: c }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return AffineForm::default();
        }
        AffineForm {
            terms: self.terms.iter().map(|(p, c)| (*p, c * s)).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn shift(&self, c: &Q) -> Self {
        let mut a = self.clone();
        a.constant += c;
        a
    }

    /// Substitutes the given parameters by rationals; others stay symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<Param, Q>) -> Self {
        let mut out = AffineForm::constant(self.constant.clone());
        for (p, c) in &self.terms {
            match assignment.get(p) {
                Some(v) => out.constant += c * v,
                None => out.add_term(*p, c.clone()),
            }
        }
        out
    }

    /// Substitutes parameters by affine forms.
    pub fn substitute_affine(&self, map: &BTreeMap<Param, AffineForm>) -> Self {
        let mut out = AffineForm::constant(self.constant.clone());
        for (p, c) in &self.terms {
            match map.get(p) {
                Some(a) => out = &out + &a.scale(c),
                None => out.add_term(*p, c.clone()),
            }
        }
        out
    }

    pub fn eval(&self, assignment: &BTreeMap<Param, Q>) -> Option<Q> {
        self.substitute(assignment).as_constant().cloned()
    }

    /// Splits into `(scalar, monic)` with `self = scalar * monic`, where the
    /// leading (smallest) parameter of `monic` has coefficient 1. Constants
    /// give `(c, 1)`.
    pub fn monic(&self) -> (Q, AffineForm) {
        match self.terms.iter().next() {
            None => (self.constant.clone(), AffineForm::int(1)),
            Some((_, lead)) => {
                let lead = lead.clone();
                (lead.clone(), self.scale(&lead.recip()))
            }
        }
    }
}

impl From<Param> for AffineForm {
    fn from(p: Param) -> Self {
        AffineForm::param(p)
    }
}

impl From<Q> for AffineForm {
    fn from(c: Q) -> Self {
        AffineForm::constant(c)
    }
}

impl From<i64> for AffineForm {
    fn from(c: i64) -> Self {
        AffineForm::int(c)
    }
}

impl Add<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn add(self, o: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.constant += &o.constant;
        for (p, c) in &o.terms {
            out.add_term(*p, c.clone());
        }
        out
    }
}

impl Sub<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn sub(self, o: &AffineForm) -> AffineForm {
        self + &(-o)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&q(-1))
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(self, o: AffineForm) -> AffineForm {
        &self + &o
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, o: AffineForm) -> AffineForm {
        &self - &o
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        -&self
    }
}

impl Add<i64> for AffineForm {
    type Output = AffineForm;
    fn add(self, o: i64) -> AffineForm {
        self.shift(&q(o))
    }
}

impl Sub<i64> for AffineForm {
    type Output = AffineForm;
    fn sub(self, o: i64) -> AffineForm {
        self.shift(&q(-o))
    }
}

impl Mul<&Q> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, s: &Q) -> AffineForm {
        self.scale(s)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mag.is_one() {
                write!(f, "{}", p)?;
            } else {
                write!(f, "{}*{}", fmt_q(&mag), p)?;
            }
            first = false;
        }
        if first {
            return write!(f, "{}", fmt_q(&self.constant));
        }
        if !self.constant.is_zero() {
            let neg = self.constant.is_negative();
            write!(f, "{}{}", if neg { " - " } else { " + " }, fmt_q(&self.constant.abs()))?;
        }
        Ok(())
    }
}
