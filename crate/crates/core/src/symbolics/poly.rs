use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::affine::AffineForm;
use super::param::Param;
use super::rational::{fmt_q, q, Q};

/// A monomial in parameters: exponent map without zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PMono(BTreeMap<Param, u32>);

impl PMono {
    pub fn one() -> Self {
        PMono(BTreeMap::new())
    }

    pub fn var(p: Param, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(p, e);
        }
        PMono(m)
    }

    pub fn from_exponents(m: BTreeMap<Param, u32>) -> Self {
        PMono(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn exponents(&self) -> &BTreeMap<Param, u32> {
        &self.0
    }

    pub fn degree_in(&self, p: &Param) -> u32 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, o: &PMono) -> PMono {
        let mut m = self.0.clone();
        for (p, e) in &o.0 {
            *m.entry(*p).or_insert(0) += e;
        }
        PMono(m)
    }

    pub fn without(&self, p: &Param) -> PMono {
        let mut m = self.0.clone();
        m.remove(p);
        PMono(m)
    }
}

/// Sparse multivariate polynomial over the rationals in [`Param`]s.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<PMono, Q>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(PMono::one(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn var(p: Param) -> Self {
        Self::monomial(PMono::var(p, 1), Q::one())
    }

    pub fn monomial(m: PMono, c: Q) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_affine(a: &AffineForm) -> Self {
        let mut p = ParamPoly::constant(a.constant_part().clone());
        for (v, c) in a.terms() {
            p.add_term(PMono::var(*v, 1), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: PMono, c: Q) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<PMono, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.0.is_empty() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Returns the polynomial as an affine form when its total degree is at most one.
    pub fn as_affine(&self) -> Option<AffineForm> {
        let mut a = AffineForm::default();
        for (m, c) in &self.terms {
            match m.total_degree() {
                0 => a = a.shift(c),
                1 => {
                    let p = *m.0.keys().next().unwrap();
                    a = &a + &AffineForm::param(p).scale(c);
                }
                _ => return None,
            }
        }
        Some(a)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn params(&self) -> std::collections::BTreeSet<Param> {
        self.terms.keys().flat_map(|m| m.0.keys().copied()).collect()
    }

    pub fn degree_in(&self, p: &Param) -> u32 {
        self.terms.keys().map(|m| m.degree_in(p)).max().unwrap_or(0)
    }

    /// Coefficient of `p^k`, as a polynomial in the remaining parameters.
    pub fn coeff_of(&self, p: &Param, k: u32) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(p) == k {
                out.add_term(m.without(p), c.clone());
            }
        }
        out
    }

    pub fn eval(&self, assignment: &BTreeMap<Param, Q>) -> Option<Q> {
        self.substitute(assignment).as_constant()
    }

    /// Substitutes some parameters by rationals.
    pub fn substitute(&self, assignment: &BTreeMap<Param, Q>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = BTreeMap::new();
            for (p, e) in &m.0 {
                match assignment.get(p) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), *e as usize),
                    None => {
                        rest.insert(*p, *e);
                    }
                }
            }
            out.add_term(PMono(rest), coeff);
        }
        out
    }

    /// Substitutes parameters by polynomials.
    pub fn substitute_poly(&self, map: &BTreeMap<Param, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut t = ParamPoly::constant(c.clone());
            let mut rest = BTreeMap::new();
            for (p, e) in &m.0 {
                match map.get(p) {
                    Some(v) => t = &t * &v.pow(*e),
                    None => {
                        rest.insert(*p, *e);
                    }
                }
            }
            out += &(&t * &ParamPoly::monomial(PMono(rest), Q::one()));
        }
        out
    }

    /// Shifts a parameter: `p -> p + shift`.
    pub fn shift_param(&self, p: Param, shift: &AffineForm) -> ParamPoly {
        let mut map = BTreeMap::new();
        map.insert(p, ParamPoly::from_affine(&(&AffineForm::param(p) + shift)));
        self.substitute_poly(&map)
    }

    /// Exact division by `p^k` when every term is divisible.
    pub fn div_param_power(&self, p: &Param, k: u32) -> Option<ParamPoly> {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let d = m.degree_in(p);
            if d < k {
                return None;
            }
            let mut e = m.0.clone();
            if d == k {
                e.remove(p);
            } else {
                e.insert(*p, d - k);
            }
            out.add_term(PMono(e), c.clone());
        }
        Some(out)
    }
}

impl From<&AffineForm> for ParamPoly {
    fn from(a: &AffineForm) -> Self {
        ParamPoly::from_affine(a)
    }
}

impl From<Param> for ParamPoly {
    fn from(p: Param) -> Self {
        ParamPoly::var(p)
    }
}

impl From<i64> for ParamPoly {
    fn from(c: i64) -> Self {
        ParamPoly::int(c)
    }
}

impl From<Q> for ParamPoly {
    fn from(c: Q) -> Self {
        ParamPoly::constant(c)
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, o: &ParamPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, o: &ParamPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: &ParamPoly) -> ParamPoly {
        let mut acc: BTreeMap<PMono, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = acc.entry(m1.mul(m2)).or_insert_with(Q::zero);
                *e += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        ParamPoly { terms: acc }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&q(-1))
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(self, o: ParamPoly) -> ParamPoly {
        &self + &o
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, o: ParamPoly) -> ParamPoly {
        &self - &o
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: ParamPoly) -> ParamPoly {
        &self * &o
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first reads more naturally
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.total_degree().cmp(&a.0.total_degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{}^{}", p, e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
