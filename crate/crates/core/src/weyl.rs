//! Normal-ordered Weyl algebra over site-indexed variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::symbolics::rational::{binomial, falling};
use crate::symbolics::{AffineForm, Param, ParamPoly, Q};

/// A coordinate `x^{(site, slot)}_comp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub site: u16,
    pub slot: u16,
    pub comp: u16,
}

impl VarId {
    pub fn new(site: u16, slot: u16, comp: u16) -> Self {
        VarId { site, slot, comp }
    }

    /// The single normal coordinate of a gl(2) site.
    pub fn site(site: u16) -> Self {
        VarId { site, slot: 1, comp: 1 }
    }

    /// Plain component variable `x_a` of a one-site JS realization.
    pub fn comp(a: u16) -> Self {
        VarId { site: 0, slot: 0, comp: a }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.site == 0 && self.slot == 0 {
            write!(f, "{}", self.comp)
        } else if self.slot == 1 && self.comp == 1 {
            write!(f, "{}", self.site)
        } else {
            write!(f, "{}_{}{}", self.site, self.slot, self.comp)
        }
    }
}

fn bump(m: &mut BTreeMap<VarId, u32>, v: VarId, e: u32) {
    if e > 0 {
        *m.entry(v).or_insert(0) += e;
    }
}

/// A commutative monomial in the coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<VarId, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exponents<I: IntoIterator<Item = (VarId, u32)>>(it: I) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in it {
            bump(&mut m, v, e);
        }
        Monomial(m)
    }

    pub fn var(v: VarId, e: u32) -> Self {
        Monomial::from_exponents([(v, e)])
    }

    pub fn exponents(&self) -> &BTreeMap<VarId, u32> {
        &self.0
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &o.0 {
            bump(&mut m, *v, *e);
        }
        Monomial(m)
    }

    /// Degree restricted to one site.
    pub fn site_degree(&self, site: u16) -> u32 {
        self.0.iter().filter(|(v, _)| v.site == site).map(|(_, e)| e).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { format!("x{}", v) } else { format!("x{}^{}", v, e) })
            .collect();
        write!(f, "{}", s.join("*"))
    }
}

/// All monomials in `vars` of total degree at most `d`, by degree then lexicographically.
pub fn monomial_basis(vars: &[VarId], d: u32) -> Vec<Monomial> {
    fn rec(vars: &[VarId], left: u32, cur: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(Monomial::from_exponents(cur.iter().copied())),
            Some((v, rest)) => {
                for e in 0..=left {
                    cur.push((*v, e));
                    rec(rest, left - e, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(vars, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    out
}

/// Polynomial in the coordinates with `ParamPoly` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FnPoly {
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl FnPoly {
    pub fn zero() -> Self {
        FnPoly::default()
    }

    pub fn one() -> Self {
        FnPoly::monomial(Monomial::one(), ParamPoly::one())
    }

    pub fn monomial(m: Monomial, c: ParamPoly) -> Self {
        let mut f = FnPoly::zero();
        f.add_term(m, c);
        f
    }

    pub fn var(v: VarId) -> Self {
        FnPoly::monomial(Monomial::var(v, 1), ParamPoly::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, ParamPoly> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &ParamPoly) -> FnPoly {
        let mut out = FnPoly::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> FnPoly {
        let mut acc = FnPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn substitute_params(&self, a: &BTreeMap<Param, Q>) -> FnPoly {
        let mut out = FnPoly::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.substitute(a));
        }
        out
    }
}

impl Add<&FnPoly> for &FnPoly {
    type Output = FnPoly;
    fn add(self, o: &FnPoly) -> FnPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&FnPoly> for &FnPoly {
    type Output = FnPoly;
    fn sub(self, o: &FnPoly) -> FnPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&FnPoly> for &FnPoly {
    type Output = FnPoly;
    fn mul(self, o: &FnPoly) -> FnPoly {
        let mut out = FnPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for FnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.terms.iter().map(|(m, c)| format!("({})*{}", c, m)).collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// `prod x^a * prod d^b` with every `x` to the left of every `d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMonomial {
    x: BTreeMap<VarId, u32>,
    d: BTreeMap<VarId, u32>,
}

impl WeylMonomial {
    pub fn one() -> Self {
        WeylMonomial::default()
    }

    pub fn new<I, J>(x: I, d: J) -> Self
    where
        I: IntoIterator<Item = (VarId, u32)>,
        J: IntoIterator<Item = (VarId, u32)>,
    {
        let mut m = WeylMonomial::one();
        for (v, e) in x {
            bump(&mut m.x, v, e);
        }
        for (v, e) in d {
            bump(&mut m.d, v, e);
        }
        m
    }

    pub fn x_exponents(&self) -> &BTreeMap<VarId, u32> {
        &self.x
    }

    pub fn d_exponents(&self) -> &BTreeMap<VarId, u32> {
        &self.d
    }

    /// Net change of polynomial degree.
    pub fn degree_shift(&self) -> i64 {
        self.x.values().sum::<u32>() as i64 - self.d.values().sum::<u32>() as i64
    }

    fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.x.keys().chain(self.d.keys())
    }

    /// Normal-ordered expansion of `self * o` as rational multiples of monomials.
    pub fn mul(&self, o: &WeylMonomial) -> Vec<(WeylMonomial, BigInt)> {
        // d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k), variable by variable
        let mut acc = vec![(WeylMonomial { x: self.x.clone(), d: BTreeMap::new() }, BigInt::one())];
        let vars: BTreeSet<VarId> = self.d.keys().chain(o.x.keys()).copied().collect();
        for v in vars {
            let b = self.d.get(&v).copied().unwrap_or(0);
            let c = o.x.get(&v).copied().unwrap_or(0);
            let mut next = Vec::with_capacity(acc.len() * (b.min(c) as usize + 1));
            for (m, k0) in &acc {
                for k in 0..=b.min(c) {
                    let f = binomial(b as u64, k as u64) * falling(c as u64, k as u64);
                    let mut m2 = m.clone();
                    bump(&mut m2.x, v, c - k);
                    bump(&mut m2.d, v, b - k);
                    next.push((m2, k0 * f));
                }
            }
            acc = next;
        }
        for (m, _) in acc.iter_mut() {
            for (v, e) in &o.d {
                bump(&mut m.d, *v, *e);
            }
        }
        acc
    }

    /// Action on a commutative monomial.
    pub fn apply(&self, m: &Monomial) -> Option<(Monomial, BigInt)> {
        let mut exps = m.0.clone();
        let mut coeff = BigInt::one();
        for (v, b) in &self.d {
            let e = exps.get(v).copied().unwrap_or(0);
            if e < *b {
                return None;
            }
            coeff *= falling(e as u64, *b as u64);
            if e == *b {
                exps.remove(v);
            } else {
                exps.insert(*v, e - b);
            }
        }
        for (v, a) in &self.x {
            bump(&mut exps, *v, *a);
        }
        Some((Monomial(exps), coeff))
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s: Vec<String> = Vec::new();
        for (v, e) in &self.x {
            s.push(if *e == 1 { format!("x{}", v) } else { format!("x{}^{}", v, e) });
        }
        for (v, e) in &self.d {
            s.push(if *e == 1 { format!("d{}", v) } else { format!("d{}^{}", v, e) });
        }
        if s.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", s.join("*"))
        }
    }
}

/// A differential operator with polynomial coefficients, stored in normal order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylOp {
    terms: BTreeMap<WeylMonomial, ParamPoly>,
}

impl WeylOp {
    pub fn zero() -> Self {
        WeylOp::default()
    }

    pub fn one() -> Self {
        WeylOp::scalar(ParamPoly::one())
    }

    pub fn scalar(c: ParamPoly) -> Self {
        WeylOp::term(WeylMonomial::one(), c)
    }

    pub fn int(c: i64) -> Self {
        WeylOp::scalar(ParamPoly::int(c))
    }

    pub fn affine(a: &AffineForm) -> Self {
        WeylOp::scalar(ParamPoly::from_affine(a))
    }

    pub fn term(m: WeylMonomial, c: ParamPoly) -> Self {
        let mut w = WeylOp::zero();
        w.add_term(m, c);
        w
    }

    pub fn x(v: VarId) -> Self {
        WeylOp::term(WeylMonomial::new([(v, 1)], []), ParamPoly::one())
    }

    pub fn d(v: VarId) -> Self {
        WeylOp::term(WeylMonomial::new([], [(v, 1)]), ParamPoly::one())
    }

    /// `x_v d_v`.
    pub fn euler(v: VarId) -> Self {
        WeylOp::term(WeylMonomial::new([(v, 1)], [(v, 1)]), ParamPoly::one())
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<WeylMonomial, ParamPoly> {
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

    /// The coefficient if the operator is a multiple of the identity.
    pub fn as_scalar(&self) -> Option<ParamPoly> {
        match self.terms.len() {
            0 => Some(ParamPoly::zero()),
            1 => self.terms.get(&WeylMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &ParamPoly) -> WeylOp {
        let mut out = WeylOp::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> WeylOp {
        self.scale(&ParamPoly::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> WeylOp {
        let mut acc = WeylOp::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().copied().collect::<Vec<_>>()).collect()
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms.values().flat_map(|c| c.params()).collect()
    }

    pub fn map_coeffs<F: Fn(&ParamPoly) -> ParamPoly>(&self, f: F) -> WeylOp {
        let mut out = WeylOp::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), f(k));
        }
        out
    }

    /// Substitutes `p -> p + shift` in every coefficient.
    pub fn shift_param(&self, p: Param, shift: &AffineForm) -> WeylOp {
        self.map_coeffs(|c| c.shift_param(p, shift))
    }

    pub fn substitute_params(&self, a: &BTreeMap<Param, Q>) -> WeylOp {
        self.map_coeffs(|c| c.substitute(a))
    }

    pub fn substitute_poly(&self, map: &BTreeMap<Param, ParamPoly>) -> WeylOp {
        self.map_coeffs(|c| c.substitute_poly(map))
    }

    pub fn degree_in(&self, p: &Param) -> u32 {
        self.terms.values().map(|c| c.degree_in(p)).max().unwrap_or(0)
    }

    /// Coefficient operator of `p^k`.
    pub fn coeff_of(&self, p: &Param, k: u32) -> WeylOp {
        self.map_coeffs(|c| c.coeff_of(p, k))
    }

    /// Renames coordinates; the map must be injective on the variables present.
    pub fn rename_vars(&self, f: &dyn Fn(VarId) -> VarId) -> WeylOp {
        let mut out = WeylOp::zero();
        for (m, k) in &self.terms {
            let m2 = WeylMonomial::new(m.x.iter().map(|(v, e)| (f(*v), *e)), m.d.iter().map(|(v, e)| (f(*v), *e)));
            out.add_term(m2, k.clone());
        }
        out
    }

    /// Largest increase in polynomial degree produced by any term.
    pub fn max_degree_gain(&self) -> i64 {
        self.terms.keys().map(|m| m.degree_shift()).max().unwrap_or(0)
    }

    pub fn apply(&self, f: &FnPoly) -> FnPoly {
        let mut out = FnPoly::zero();
        for (wm, wc) in &self.terms {
            for (m, c) in &f.terms {
                if let Some((m2, k)) = wm.apply(m) {
                    out.add_term(m2, (wc * c).scale(&Q::from_integer(k)));
                }
            }
        }
        out
    }

    pub fn apply_monomial(&self, m: &Monomial) -> FnPoly {
        self.apply(&FnPoly::monomial(m.clone(), ParamPoly::one()))
    }

    pub fn commutator(&self, o: &WeylOp) -> WeylOp {
        &(self * o) - &(o * self)
    }
}

impl Add<&WeylOp> for &WeylOp {
    type Output = WeylOp;
    fn add(self, o: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&WeylOp> for &WeylOp {
    type Output = WeylOp;
    fn sub(self, o: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.map_coeffs(|c| -c)
    }
}

impl Mul<&WeylOp> for &WeylOp {
    type Output = WeylOp;
    fn mul(self, o: &WeylOp) -> WeylOp {
        weyl_mul(self, o)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for WeylOp {
            type Output = WeylOp;
            fn $f(self, o: WeylOp) -> WeylOp {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        -&self
    }
}

/// Canonical normal-ordered product.
pub fn weyl_mul(f: &WeylOp, g: &WeylOp) -> WeylOp {
    let mut out = WeylOp::zero();
    for (m1, c1) in &f.terms {
        for (m2, c2) in &g.terms {
            let c = c1 * c2;
            if c.is_zero() {
                continue;
            }
            for (m, k) in m1.mul(m2) {
                out.add_term(m, c.scale(&Q::from_integer(k)));
            }
        }
    }
    out
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == WeylMonomial::one() {
                    format!("({})", c)
                } else if c.as_constant().is_some_and(|k| k.is_one()) {
                    m.to_string()
                } else {
                    format!("({})*{}", c, m)
                }
            })
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// Matrix of an operator between monomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub entries: Vec<Vec<ParamPoly>>,
}

impl ActionMatrix {
    pub fn entry(&self, r: usize, c: usize) -> &ParamPoly {
        &self.entries[r][c]
    }
}

/// Matrix of `apply(f, .)` from the degree `<= d` basis in `vars` into the
/// degree `<= d + gain` basis; columns are computed in parallel.
pub fn matrix_of_action(f: &WeylOp, vars: &[VarId], d: u32) -> ActionMatrix {
    let gain = f.max_degree_gain().max(0).to_u32().unwrap_or(0);
    let cols = monomial_basis(vars, d);
    let rows = monomial_basis(vars, d + gain);
    let index: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let images: Vec<FnPoly> = cols.par_iter().map(|m| f.apply_monomial(m)).collect();
    let mut entries = vec![vec![ParamPoly::zero(); cols.len()]; rows.len()];
    for (j, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            let i = *index.get(m).expect("image lies in the target basis");
            entries[i][j] = c.clone();
        }
    }
    ActionMatrix { rows, cols, entries }
}


/// `sum c * m(x) * prod_i phi_i^(alpha_i + k_i)` for fixed polynomial bases `phi_i`
/// with affine symbolic exponents `alpha_i` and integer shifts `k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFn {
    bases: Vec<(FnPoly, AffineForm)>,
    terms: BTreeMap<(Vec<i64>, Monomial), ParamPoly>,
}

impl PowerFn {
    pub fn new(bases: Vec<(FnPoly, AffineForm)>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((vec![0; bases.len()], Monomial::one()), ParamPoly::one());
        PowerFn { bases, terms }
    }

    pub fn from_poly(p: &FnPoly) -> Self {
        let mut f = PowerFn { bases: Vec::new(), terms: BTreeMap::new() };
        for (m, c) in p.terms() {
            f.add_term(Vec::new(), m.clone(), c.clone());
        }
        f
    }

    /// The single term `m * prod phi_i^(alpha_i + k_i)`.
    pub fn single(bases: Vec<(FnPoly, AffineForm)>, k: Vec<i64>, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((k, m), ParamPoly::one());
        PowerFn { bases, terms }
    }

    pub fn bases(&self) -> &[(FnPoly, AffineForm)] {
        &self.bases
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<i64>, Monomial), ParamPoly> {
        &self.terms
    }

    fn add_term(&mut self, k: Vec<i64>, m: Monomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let key = (k, m);
        let e = self.terms.entry(key.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn empty_like(&self) -> PowerFn {
        PowerFn { bases: self.bases.clone(), terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.normalized(None).1.is_zero()
    }

    fn diff(&self, v: VarId, dphi: &[FnPoly]) -> PowerFn {
        let mut out = self.empty_like();
        for ((k, m), c) in &self.terms {
            let e = m.exponent(&v);
            if e > 0 {
                let mut ex = m.0.clone();
                if e == 1 {
                    ex.remove(&v);
                } else {
                    ex.insert(v, e - 1);
                }
                out.add_term(k.clone(), Monomial(ex), c.scale(&Q::from(BigInt::from(e))));
            }
            for (i, (_, alpha)) in self.bases.iter().enumerate() {
                if dphi[i].is_zero() {
                    continue;
                }
                let beta = ParamPoly::from_affine(&alpha.shift(&Q::from(BigInt::from(k[i]))));
                let cb = c * &beta;
                let mut k2 = k.clone();
                k2[i] -= 1;
                for (dm, dc) in dphi[i].terms() {
                    out.add_term(k2.clone(), m.mul(dm), &cb * dc);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &ParamPoly) -> PowerFn {
        let mut out = self.empty_like();
        for ((k, m), c0) in &self.terms {
            out.add_term(k.clone(), m.clone(), c0 * c);
        }
        out
    }

    pub fn add(&self, o: &PowerFn) -> PowerFn {
        assert_eq!(self.bases, o.bases, "PowerFn bases differ");
        let mut out = self.clone();
        for ((k, m), c) in &o.terms {
            out.add_term(k.clone(), m.clone(), c.clone());
        }
        out
    }

    pub fn apply(&self, f: &WeylOp) -> PowerFn {
        let mut by_d: BTreeMap<&BTreeMap<VarId, u32>, Vec<(&BTreeMap<VarId, u32>, &ParamPoly)>> = BTreeMap::new();
        for (wm, wc) in f.terms() {
            by_d.entry(wm.d_exponents()).or_default().push((wm.x_exponents(), wc));
        }
        let mut dphi: BTreeMap<VarId, Vec<FnPoly>> = BTreeMap::new();
        let mut out = self.empty_like();
        for (dpart, xs) in by_d {
            let mut g = self.clone();
            for (v, e) in dpart {
                let dp = dphi.entry(*v).or_insert_with(|| self.bases.iter().map(|(phi, _)| WeylOp::d(*v).apply(phi)).collect());
                for _ in 0..*e {
                    g = g.diff(*v, dp);
                }
            }
            for (xpart, wc) in xs {
                let xm = Monomial(xpart.clone());
                for ((k, m), c) in &g.terms {
                    out.add_term(k.clone(), m.mul(&xm), c * wc);
                }
            }
        }
        out
    }

    /// Writes the function as `prod phi_i^(alpha_i + kmin_i) * P(x)` and returns `(kmin, P)`.
    /// With `floor` given, that common shift is used instead of the minimum.
    pub fn normalized(&self, floor: Option<&[i64]>) -> (Vec<i64>, FnPoly) {
        let r = self.bases.len();
        let kmin: Vec<i64> = match floor {
            Some(f) => f.to_vec(),
            None => (0..r).map(|i| self.terms.keys().map(|(k, _)| k[i]).min().unwrap_or(0)).collect(),
        };
        let mut p = FnPoly::zero();
        for ((k, m), c) in &self.terms {
            let mut t = FnPoly::monomial(m.clone(), c.clone());
            for i in 0..r {
                let e = k[i] - kmin[i];
                assert!(e >= 0, "floor above a present shift");
                t = &t * &self.bases[i].0.pow(e as u32);
            }
            p = &p + &t;
        }
        (kmin, p)
    }

    /// Minimal shift vector over both functions.
    pub fn common_floor(&self, o: &PowerFn) -> Vec<i64> {
        let r = self.bases.len();
        (0..r)
            .map(|i| self.terms.keys().chain(o.terms.keys()).map(|(k, _)| k[i]).min().unwrap_or(0))
            .collect()
    }
}
