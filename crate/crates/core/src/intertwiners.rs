//! R operators and adjacent permutation operators, realized through the
//! Beta-function evaluation of their shift integrals, and exact checks of the
//! Yang-Baxter and intertwining relations on truncated monomial bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hwfun::{self, DetFactor, HWFunction, ParamArray, Step};
use crate::lmatrix::{normal_var, restricted_l, LKind, LMatrix};
use crate::symbolics::{AffineForm, GammaProduct, GammaSum, Param, ParamPoly, Q};
use crate::weyl::{monomial_basis, FnPoly, Monomial, PowerFn, VarId, WeylOp};

/// `(x^A . d^B) = sum x_a d_a`; a missing `x` stands for a unit coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftGenerator {
    pairs: Vec<(Option<VarId>, VarId)>,
}

impl ShiftGenerator {
    pub fn new(pairs: Vec<(Option<VarId>, VarId)>) -> Result<Self> {
        let xs: Vec<VarId> = pairs.iter().filter_map(|p| p.0).collect();
        let ds: BTreeSet<VarId> = pairs.iter().map(|p| p.1).collect();
        if xs.iter().collect::<BTreeSet<_>>().len() != xs.len() || ds.len() != pairs.len() {
            return Err(Error::SiteCollision("shift generator".into()));
        }
        Ok(ShiftGenerator { pairs })
    }

    pub fn pairs(&self) -> &[(Option<VarId>, VarId)] {
        &self.pairs
    }

    /// `(y^from . d^to)` on the normal coordinates of the restricted L-matrices.
    pub fn restricted(n: usize, from: u16, to: u16) -> Self {
        let pairs = (1..n).map(|a| (Some(normal_var(from, 1, a)), normal_var(to, 1, a))).collect();
        ShiftGenerator { pairs }
    }

    /// `(x^{I,i+1} . d^{I,i})` on the constrained first order coordinates.
    pub fn within(n: usize, site: u16, i: usize) -> Self {
        let p = n - i + 1;
        let pairs = (1..p)
            .map(|a| {
                let x = if a < p - 1 { Some(normal_var(site, i + 1, a)) } else { None };
                (x, normal_var(site, i, a))
            })
            .collect();
        ShiftGenerator { pairs }
    }

    fn substitution(&self) -> BTreeMap<VarId, Option<VarId>> {
        self.pairs.iter().map(|(x, d)| (*d, *x)).collect()
    }
}

/// Which site is the source of the shift: `R12` shifts site 2 towards site 1,
/// `R21` shifts site 1 towards site 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    R12,
    R21,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ROpSpec {
    pub generator: ShiftGenerator,
    pub w: AffineForm,
    pub direction: Direction,
}

impl ROpSpec {
    /// `R12(w) = int c^(w-1) exp(-c (x^1 d^2))` on restricted normal coordinates.
    pub fn r12(n: usize, w: AffineForm) -> Self {
        ROpSpec { generator: ShiftGenerator::restricted(n, 1, 2), w, direction: Direction::R12 }
    }

    /// `R21(w) = int c^(w-1) exp(-c (x^2 d^1))`.
    pub fn r21(n: usize, w: AffineForm) -> Self {
        ROpSpec { generator: ShiftGenerator::restricted(n, 2, 1), w, direction: Direction::R21 }
    }

    pub fn source_site(&self) -> u16 {
        match self.direction {
            Direction::R12 => 2,
            Direction::R21 => 1,
        }
    }
}

/// A power base `phi^(alpha + k)` of a [`GammaFn`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base {
    pub label: String,
    pub poly: FnPoly,
    pub exponent: AffineForm,
}

/// `(-1)^phase * sum_terms g * m(x) * prod phi_i^(alpha_i + k_i)` with
/// Gamma-weighted coefficients `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFn {
    bases: Vec<Base>,
    terms: BTreeMap<(Vec<i64>, Monomial), GammaSum>,
    phase: AffineForm,
}

impl GammaFn {
    pub fn zero() -> Self {
        GammaFn { bases: Vec::new(), terms: BTreeMap::new(), phase: AffineForm::default() }
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut f = GammaFn::zero();
        f.add_term(Vec::new(), m, &GammaSum::from_product(&GammaProduct::one()));
        f
    }

    pub fn from_poly(p: &FnPoly) -> Self {
        let mut f = GammaFn::zero();
        for (m, c) in p.terms() {
            f.add_term(Vec::new(), m.clone(), &GammaSum::zero().with_poly(c));
        }
        f
    }

    /// `m * prod f^alpha` for determinant factors of two gl(n) sites.
    pub fn det_powers(n: usize, factors: &BTreeMap<DetFactor, AffineForm>, m: Monomial) -> Self {
        let bases: Vec<Base> = factors
            .iter()
            .map(|(f, e)| Base { label: f.to_string(), poly: f.expand(n), exponent: e.clone() })
            .collect();
        let mut out = GammaFn { bases, terms: BTreeMap::new(), phase: AffineForm::default() };
        let k = vec![0; out.bases.len()];
        out.add_term(k, m, &GammaSum::from_product(&GammaProduct::one()));
        out
    }

    pub fn bases(&self) -> &[Base] {
        &self.bases
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<i64>, Monomial), GammaSum> {
        &self.terms
    }

    pub fn phase(&self) -> &AffineForm {
        &self.phase
    }

    fn empty_like(&self) -> GammaFn {
        GammaFn { bases: self.bases.clone(), terms: BTreeMap::new(), phase: self.phase.clone() }
    }

    fn add_term(&mut self, k: Vec<i64>, m: Monomial, g: &GammaSum) {
        if g.is_zero() {
            return;
        }
        let key = (k, m);
        let e = self.terms.entry(key.clone()).or_default();
        e.add_sum(g);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn power_bases(&self) -> Vec<(FnPoly, AffineForm)> {
        self.bases.iter().map(|b| (b.poly.clone(), b.exponent.clone())).collect()
    }

    /// Action of a Weyl operator.
    pub fn apply(&self, op: &WeylOp) -> GammaFn {
        let pb = self.power_bases();
        let mut out = self.empty_like();
        for ((k, m), g) in &self.terms {
            let r = PowerFn::single(pb.clone(), k.clone(), m.clone()).apply(op);
            for ((k2, m2), c) in r.terms() {
                out.add_term(k2.clone(), m2.clone(), &g.scale_poly(c));
            }
        }
        out
    }

    /// Index of the base with polynomial `p` up to sign; appends it with
    /// exponent 0 when absent.
    fn base_index(&mut self, p: &FnPoly, label: impl Fn() -> String) -> (usize, bool) {
        let neg = &FnPoly::zero() - p;
        if let Some(i) = self.bases.iter().position(|b| &b.poly == p) {
            return (i, false);
        }
        if let Some(i) = self.bases.iter().position(|b| b.poly == neg) {
            return (i, true);
        }
        self.bases.push(Base { label: label(), poly: p.clone(), exponent: AffineForm::default() });
        let old = std::mem::take(&mut self.terms);
        for ((mut k, m), g) in old {
            k.push(0);
            self.terms.insert((k, m), g);
        }
        (self.bases.len() - 1, false)
    }

    /// Drops constant bases `+-1`, moving a negative sign into the phase.
    fn drop_unit_bases(mut self) -> GammaFn {
        loop {
            let Some(i) = self.bases.iter().position(|b| b.poly.terms().len() <= 1 && b.poly.terms().keys().all(|m| m.degree() == 0)) else {
                return self;
            };
            let c = self.bases[i].poly.coeff(&Monomial::one()).as_constant().unwrap_or_else(Q::zero);
            let b = self.bases.remove(i);
            let old = std::mem::take(&mut self.terms);
            if c == -Q::one() {
                self.phase = &self.phase + &b.exponent;
            }
            for ((mut k, m), g) in old {
                let s = k.remove(i);
                let g = if c == -Q::one() && s % 2 != 0 { g.scale_poly(&ParamPoly::int(-1)) } else { g };
                assert!(c == Q::one() || c == -Q::one(), "vanishing base");
                self.add_term(k, m, &g);
            }
        }
    }

    /// `prod phi_i^(alpha_i + floor_i) * P(x)`; returns `P` with Gamma-weighted coefficients.
    pub fn normalized(&self, floor: &[i64]) -> BTreeMap<Monomial, GammaSum> {
        let mut out: BTreeMap<Monomial, GammaSum> = BTreeMap::new();
        for ((k, m), g) in &self.terms {
            let mut t = FnPoly::monomial(m.clone(), ParamPoly::one());
            for (i, b) in self.bases.iter().enumerate() {
                let e = k[i] - floor[i];
                assert!(e >= 0, "floor above a present shift");
                t = &t * &b.poly.pow(e as u32);
            }
            for (m2, c) in t.terms() {
                let e = out.entry(m2.clone()).or_default();
                e.add_sum(&g.scale_poly(c));
            }
        }
        out.retain(|_, g| !g.is_zero());
        out
    }

    /// Exact comparison; `None` when equal, otherwise a description of the first difference.
    pub fn difference(&self, o: &GammaFn) -> Option<String> {
        if self.phase != o.phase {
            return Some(format!("phase {} vs {}", self.phase, o.phase));
        }
        let mut union = self.bases.clone();
        for b in &o.bases {
            if !union.iter().any(|u| shift_between(u, b).is_some()) {
                union.push(b.clone());
            }
        }
        let mut diff = self.rebased(&union);
        for ((k, m), g) in &o.rebased(&union).terms {
            diff.add_term(k.clone(), m.clone(), &g.scale_poly(&ParamPoly::int(-1)));
        }
        diff.nonzero_witness()
    }

    /// `None` if the function vanishes identically, otherwise a coefficient
    /// that survives. Terms are grouped by Gamma key and brought to a common
    /// denominator, so only polynomial arithmetic is needed.
    fn nonzero_witness(&self) -> Option<String> {
        if self.terms.is_empty() {
            return None;
        }
        let floor: Vec<i64> =
            (0..self.bases.len()).map(|i| self.terms.keys().map(|(k, _)| k[i]).min().unwrap_or(0)).collect();
        let mut groups: BTreeMap<&BTreeMap<AffineForm, i32>, Vec<(&Vec<i64>, &Monomial, &crate::symbolics::RatFun)>> =
            BTreeMap::new();
        for ((k, m), g) in &self.terms {
            for (key, r) in g.terms() {
                groups.entry(key).or_default().push((k, m, r));
            }
        }
        let mut powers: BTreeMap<(usize, i64), FnPoly> = BTreeMap::new();
        for (key, items) in groups {
            let mut den: BTreeMap<&AffineForm, u32> = BTreeMap::new();
            for (_, _, r) in &items {
                for (f, e) in r.denominator_factors() {
                    let x = den.entry(f).or_insert(0);
                    *x = (*x).max(*e);
                }
            }
            let mut total = FnPoly::zero();
            for (k, m, r) in items {
                let mut num = r.numerator().clone();
                for (f, e) in &den {
                    let have = r.denominator_factors().get(*f).copied().unwrap_or(0);
                    if *e > have {
                        num = &num * &ParamPoly::from_affine(f).pow(e - have);
                    }
                }
                let mut t = FnPoly::monomial(m.clone(), num);
                for (i, b) in self.bases.iter().enumerate() {
                    let e = k[i] - floor[i];
                    if e > 0 {
                        let p = powers.entry((i, e)).or_insert_with(|| b.poly.pow(e as u32));
                        t = &t * &*p;
                    }
                }
                total = &total + &t;
            }
            if !total.is_zero() {
                let g = key.iter().fold(GammaProduct::one(), |g, (a, p)| g.mul_gamma(a, *p));
                let (m, c) = total.terms().iter().next().expect("nonzero");
                return Some(format!("coefficient of {} has {} * ({}) / common denominator", m, g, c));
            }
        }
        None
    }

    /// The same function written over `bases`, which must cover every own base.
    fn rebased(&self, bases: &[Base]) -> GammaFn {
        let map: Vec<(usize, i64)> = self
            .bases
            .iter()
            .map(|b| bases.iter().enumerate().find_map(|(i, u)| shift_between(u, b).map(|s| (i, s))).expect("covered"))
            .collect();
        let mut out = GammaFn { bases: bases.to_vec(), terms: BTreeMap::new(), phase: self.phase.clone() };
        for ((k, m), g) in &self.terms {
            let mut k2 = vec![0; bases.len()];
            for (j, &(i, s)) in map.iter().enumerate() {
                k2[i] += k[j] + s;
            }
            out.add_term(k2, m.clone(), g);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_witness().is_none()
    }

    /// The same function with the phase `(-1)^phase`.
    pub fn with_phase(&self, phase: &AffineForm) -> GammaFn {
        GammaFn { phase: phase.clone(), ..self.clone() }
    }

    /// Product with a Gamma-weighted scalar.
    pub fn scaled(&self, g: &GammaSum) -> GammaFn {
        let mut out = self.empty_like();
        for ((k, m), c) in &self.terms {
            out.add_term(k.clone(), m.clone(), &c.mul_sum(g));
        }
        out
    }

    /// Sum of two functions over the same bases.
    pub fn plus(&self, o: &GammaFn) -> GammaFn {
        if self.terms.is_empty() {
            return o.clone();
        }
        let mut union = self.bases.clone();
        for b in &o.bases {
            if !union.iter().any(|u| shift_between(u, b).is_some()) {
                union.push(b.clone());
            }
        }
        let mut out = self.rebased(&union);
        for ((k, m), g) in &o.rebased(&union).terms {
            out.add_term(k.clone(), m.clone(), g);
        }
        out
    }

    /// Multiplication by `phi^w`.
    pub fn mul_power(&self, label: &str, poly: &FnPoly, w: &AffineForm) -> GammaFn {
        let mut out = self.clone();
        let (i, neg) = out.base_index(poly, || label.to_string());
        out.bases[i].exponent = &out.bases[i].exponent + w;
        if neg {
            out.phase = &out.phase + w;
        }
        out.drop_unit_bases()
    }
}

/// Integer `s` with `b = u * phi^s` when both share the polynomial.
fn shift_between(u: &Base, b: &Base) -> Option<i64> {
    if u.poly != b.poly {
        return None;
    }
    let d = &b.exponent - &u.exponent;
    d.as_constant().filter(|c| c.is_integer()).and_then(|c| i64::try_from(c.to_integer()).ok())
}

impl fmt::Display for GammaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((k, m), g)| {
                let mut s = format!("({})*{}", g, m);
                for (b, e) in self.bases.iter().zip(k) {
                    s += &format!("*[{}]^({}{:+})", b.label, b.exponent, e);
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl GammaSum {
    fn with_poly(mut self, p: &ParamPoly) -> GammaSum {
        self.add_product(&GammaProduct::one(), p);
        self
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Expands `m(y -> y - c z)` into `sum_j c^j P_j`.
fn shift_expand(m: &Monomial, subs: &BTreeMap<VarId, Option<VarId>>) -> BTreeMap<u32, FnPoly> {
    let mut acc: BTreeMap<u32, FnPoly> = [(0, FnPoly::one())].into_iter().collect();
    for (v, &e) in m.exponents() {
        let mut factor: BTreeMap<u32, FnPoly> = BTreeMap::new();
        match subs.get(v) {
            None => {
                factor.insert(0, FnPoly::monomial(Monomial::var(*v, e), ParamPoly::one()));
            }
            Some(z) => {
                for j in 0..=e {
                    let mut mono = Monomial::var(*v, e - j);
                    if let Some(z) = z {
                        mono = mono.mul(&Monomial::var(*z, j));
                    }
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let c = Q::from(binom(e, j) * BigInt::from(sign));
                    factor.insert(j, FnPoly::monomial(mono, ParamPoly::constant(c)));
                }
            }
        }
        let mut next: BTreeMap<u32, FnPoly> = BTreeMap::new();
        for (i, p) in &acc {
            for (j, q) in &factor {
                let e = next.entry(i + j).or_insert_with(FnPoly::zero);
                *e = &*e + &(p * q);
            }
        }
        acc = next;
    }
    acc
}

fn substitute_poly(p: &FnPoly, subs: &BTreeMap<VarId, Option<VarId>>) -> BTreeMap<u32, FnPoly> {
    let mut out: BTreeMap<u32, FnPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        for (j, q) in shift_expand(m, subs) {
            let e = out.entry(j).or_insert_with(FnPoly::zero);
            *e = &*e + &q.scale(c);
        }
    }
    out.retain(|_, q| !q.is_zero());
    out
}

/// What an R or S operator acts on.
#[derive(Clone, Debug)]
pub enum RTarget<'a> {
    /// Functions of the restricted normal coordinates, homogeneous of the
    /// given degree in the source site before the restriction.
    Homogeneous { f: &'a GammaFn, source_degree: AffineForm },
    /// Products of monomials and powers with exactly one base moved by the shift.
    Powers(&'a GammaFn),
}

/// Action of `int c^(w-1) exp(-c gen)` by the rule
/// `int c^(w-1+k) (A - c B)^v = B(w+k, v+1) A^(v+w+k) B^(-w-k)`.
pub fn r_apply(spec: &ROpSpec, target: &RTarget) -> Result<GammaFn> {
    if spec.w.is_zero() {
        return Err(Error::DegenerateArgument(spec.w.to_string()));
    }
    let subs = spec.generator.substitution();
    match target {
        RTarget::Homogeneous { f, source_degree } => {
            if !f.bases.is_empty() {
                return Err(Error::UnsupportedTarget("homogeneous target with power bases".into()));
            }
            let site = spec.source_site();
            let mut out = f.empty_like();
            for ((k, m), g) in &f.terms {
                let v = source_degree - &AffineForm::int(m.site_degree(site) as i64);
                for (j, p) in shift_expand(m, &subs) {
                    let beta = GammaProduct::beta(&(&spec.w + &AffineForm::int(j as i64)), &(v.clone() + AffineForm::int(1)));
                    let gb = g.mul_product(&beta);
                    for (m2, c) in p.terms() {
                        out.add_term(k.clone(), m2.clone(), &gb.scale_poly(c));
                    }
                }
            }
            Ok(out)
        }
        RTarget::Powers(f) => shift_powers(&spec.w, &subs, f),
    }
}

fn shift_powers(w: &AffineForm, subs: &BTreeMap<VarId, Option<VarId>>, f: &GammaFn) -> Result<GammaFn> {
    let mut active = None;
    for (i, b) in f.bases.iter().enumerate() {
        let s = substitute_poly(&b.poly, subs);
        if s.keys().any(|&j| j > 0) {
            if active.is_some() {
                return Err(Error::UnsupportedTarget("more than one power base moves".into()));
            }
            if s.keys().any(|&j| j > 1) || s.get(&0) != Some(&b.poly) {
                return Err(Error::UnsupportedTarget(format!("{} is not moved by a single binomial", b.label)));
            }
            active = Some((i, &FnPoly::zero() - &s[&1]));
        }
    }
    let Some((ia, bpoly)) = active else {
        return Err(Error::UnsupportedTarget("no power base moves under the shift".into()));
    };
    let mut out = f.empty_like();
    let (ib, neg) = out.base_index(&bpoly, || format!("d({})", f.bases[ia].label));
    if neg {
        out.phase = &out.phase - w;
    }
    out.bases[ia].exponent = &out.bases[ia].exponent + w;
    out.bases[ib].exponent = &out.bases[ib].exponent - w;
    let nb = out.bases.len();
    for ((k, m), g) in &f.terms {
        let v = &f.bases[ia].exponent + &AffineForm::int(k[ia]);
        for (j, p) in shift_expand(m, subs) {
            let j = j as i64;
            let beta = GammaProduct::beta(&(w + &AffineForm::int(j)), &(v.clone() + AffineForm::int(1)));
            let mut gb = g.mul_product(&beta);
            if neg && j % 2 != 0 {
                gb = gb.scale_poly(&ParamPoly::int(-1));
            }
            let mut k2 = k.clone();
            k2.resize(nb, 0);
            k2[ia] += j;
            k2[ib] -= j;
            for (m2, c) in p.terms() {
                out.add_term(k2.clone(), m2.clone(), &gb.scale_poly(c));
            }
        }
    }
    Ok(out.drop_unit_bases())
}

impl GammaSum {
    /// Product of two sums.
    pub fn mul_sum(&self, o: &GammaSum) -> GammaSum {
        let mut out = GammaSum::zero();
        for (key, r) in o.terms() {
            let mut base = GammaProduct::one();
            for (arg, p) in key {
                base = base.mul_gamma(arg, *p);
            }
            for (a, e) in r.denominator_factors() {
                base = base.mul_affine(a, -(*e as i32));
            }
            out.add_sum(&self.mul_product(&base).scale_poly(r.numerator()));
        }
        out
    }

    /// Product with a Gamma product.
    pub fn mul_product(&self, g: &GammaProduct) -> GammaSum {
        let mut out = GammaSum::zero();
        for (key, r) in self.terms() {
            let mut base = GammaProduct::one();
            for (arg, p) in key {
                base = base.mul_gamma(arg, *p);
            }
            for (a, e) in r.denominator_factors() {
                base = base.mul_affine(a, -(*e as i32));
            }
            out.add_product(&(&base * g), r.numerator());
        }
        out
    }
}

/// Elementary permutation operator with its argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermOpSpec {
    pub step: Step,
    pub argument: AffineForm,
}

impl PermOpSpec {
    /// The operator with the argument dictated by the array it acts on.
    pub fn dictated(step: Step, array: &ParamArray) -> Self {
        PermOpSpec { step, argument: step.argument(array) }
    }
}

/// Applies a permutation operator to a determinant-power function.
pub fn perm_apply(spec: &PermOpSpec, state: &HWFunction) -> Result<HWFunction> {
    let expect = spec.step.argument(&state.array);
    if expect != spec.argument {
        return Err(Error::ParameterMismatch(format!("argument {} but the array dictates {}", spec.argument, expect)));
    }
    match spec.step {
        Step::Between => Ok(hwfun::step_between(&spec.argument, state)),
        Step::Within { site: 1, k } => hwfun::beta_step_s1(k, &spec.argument, state),
        Step::Within { site: 2, k } => hwfun::beta_step_s2(k, &spec.argument, state),
        Step::Within { site, .. } => Err(Error::UnsupportedTarget(format!("site {site}"))),
    }
}

/// Applies one step to a Gamma-weighted function of the two first order sites.
pub fn step_apply(n: usize, step: &Step, w: &AffineForm, f: &GammaFn) -> Result<GammaFn> {
    match *step {
        Step::Between => {
            let d = DetFactor::new(n, 1);
            Ok(f.mul_power(&d.to_string(), &d.expand(n), w))
        }
        Step::Within { site, k } => {
            if w.is_zero() {
                return Err(Error::DegenerateArgument(w.to_string()));
            }
            let g = ShiftGenerator::within(n, site as u16, k);
            shift_powers(w, &g.substitution(), f)
        }
    }
}

/// Applies a sequence of steps, arguments read off the evolving array.
pub fn sequence_apply(steps: &[Step], array: &ParamArray, f: &GammaFn) -> Result<(GammaFn, ParamArray)> {
    let mut a = array.clone();
    let mut f = f.clone();
    for s in steps {
        let w = s.argument(&a);
        f = step_apply(a.n, s, &w, &f)?;
        match *s {
            Step::Between => a.swap_between(),
            Step::Within { site, k } => a.swap_within(site, k),
        }
    }
    Ok((f, a))
}

/// Outcome of an exact relation check on a truncated basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub pass: bool,
    pub checked: usize,
    pub first_mismatch: Option<String>,
}

impl Report {
    fn from_mismatches(checked: usize, m: Option<String>) -> Self {
        Report { pass: m.is_none(), checked, first_mismatch: m }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `R12(u-v) L^1(u) L^2(v) = L^1(v) L^2(u) R12(u-v)`.
    Rll,
    /// The same with restricted factors and argument `u - v`.
    RllUPlusU,
    /// `R21(u^- - v^-) L^1(u^-,u) L^2(v^-,v) = L^1(v^-,u) L^2(u^-,v) R21(u^- - v^-)`.
    RllVPlusU,
}

fn two_ell_of(l: &LMatrix, site: u32) -> Result<AffineForm> {
    match l.kind() {
        LKind::JsRestricted { two_ell } => Ok(two_ell.clone()),
        LKind::JsMinus => Ok(AffineForm::param(Param::ell(site, 0))),
        k => Err(Error::UnsupportedTarget(format!("R operators act on JS factors, got {k:?}"))),
    }
}

/// The argument fixed by the relation.
pub fn rll_argument(relation: Relation, l1: &AffineForm, l2: &AffineForm) -> AffineForm {
    let uv = &AffineForm::param(Param::u()) - &AffineForm::param(Param::v());
    match relation {
        Relation::Rll | Relation::RllUPlusU => uv,
        Relation::RllVPlusU => &(&uv - l1) + l2,
    }
}

/// Restricted L-matrix at spectral parameter `s`; the degree may itself depend on `u`, `v`.
fn restricted_at(n: usize, two_ell: &AffineForm, site: u16, s: Param) -> Result<LMatrix> {
    let slot = Param::aux(u32::MAX - site as u32);
    let l = restricted_l(n, &AffineForm::param(slot), site)?.at_param(s);
    let map: BTreeMap<Param, ParamPoly> = [(slot, ParamPoly::from_affine(two_ell))].into_iter().collect();
    Ok(l.map(|e| e.substitute_poly(&map)))
}

/// Checks an RLL relation on all monomials of degree `<= d`.
///
/// JS factors on unrestricted coordinates are checked on homogeneous
/// functions of symbolic degrees, where the relation takes its restricted
/// form with argument `u - v`. `w_shift` is added to the fixed argument.
pub fn verify_rll(l1: &LMatrix, l2: &LMatrix, relation: Relation, d: u32, w_shift: &AffineForm) -> Result<Report> {
    let n = l1.n();
    if n != l2.n() {
        return Err(Error::RankMismatch(n, l2.n()));
    }
    if matches!(l1.kind(), LKind::Identity) && matches!(l2.kind(), LKind::Identity) {
        return Ok(Report::from_mismatches(0, None));
    }
    let e1 = two_ell_of(l1, 1)?;
    let e2 = two_ell_of(l2, 2)?;
    let w = &rll_argument(relation, &e1, &e2) + w_shift;
    let (spec, r1, r2, s1, s2) = match relation {
        Relation::Rll | Relation::RllUPlusU => (ROpSpec::r12(n, w.clone()), &e1 - &w, &e2 + &w, Param::v(), Param::u()),
        Relation::RllVPlusU => (ROpSpec::r21(n, w.clone()), &e1 + &w, &e2 - &w, Param::u(), Param::v()),
    };
    let src_deg = if spec.source_site() == 1 { e1.clone() } else { e2.clone() };
    let lhs_t = restricted_at(n, &e1, 1, Param::u())?.mul(&restricted_at(n, &e2, 2, Param::v())?)?;
    let rhs_t = restricted_at(n, &r1, 1, s1)?.mul(&restricted_at(n, &r2, 2, s2)?)?;
    let vars: Vec<VarId> = (1..=2).flat_map(|s| (1..n).map(move |a| normal_var(s, 1, a))).collect();
    let basis = monomial_basis(&vars, d);
    let checked = basis.len() * n * n;
    let mismatch = basis.par_iter().find_map_first(|m| {
        let f = GammaFn::monomial(m.clone());
        let rf = r_apply(&spec, &RTarget::Homogeneous { f: &f, source_degree: src_deg.clone() });
        let rf = match rf {
            Ok(x) => x,
            Err(e) => return Some(e.to_string()),
        };
        for a in 1..=n {
            for b in 1..=n {
                let tf = f.apply(lhs_t.at(a, b));
                let lhs = match r_apply(&spec, &RTarget::Homogeneous { f: &tf, source_degree: src_deg.clone() }) {
                    Ok(x) => x,
                    Err(e) => return Some(e.to_string()),
                };
                let rhs = rf.apply(rhs_t.at(a, b));
                if let Some(diff) = lhs.difference(&rhs) {
                    return Some(format!("entry ({a},{b}) on {m}: {diff}"));
                }
            }
        }
        None
    });
    Ok(Report::from_mismatches(checked, mismatch))
}

/// Applies the permutation to an array, as the steps would.
pub fn permuted(steps: &[Step], array: &ParamArray) -> ParamArray {
    let mut a = array.clone();
    for s in steps {
        match *s {
            Step::Between => a.swap_between(),
            Step::Within { site, k } => a.swap_within(site, k),
        }
    }
    a
}

/// Checks `S T(u; before) = T(u; after) S` entrywise on the functions
/// `m * prod f^alpha` for all monomials `m` of degree `<= d`, where the
/// determinant powers `seed` provide the domain of the first shift.
pub fn verify_intertwining(
    steps: &[Step],
    before: &ParamArray,
    after: &ParamArray,
    seed: &BTreeMap<DetFactor, AffineForm>,
    d: u32,
) -> Result<Report> {
    if &permuted(steps, before) != after {
        return Err(Error::ParameterMismatch(format!("{after} is not the permuted {before}")));
    }
    let n = before.n;
    let tb = hwfun::monodromy(before)?;
    let ta = hwfun::monodromy(after)?;
    if steps.is_empty() {
        let same = tb.product() == ta.product();
        return Ok(Report::from_mismatches(0, (!same).then(|| "monodromies differ".to_string())));
    }
    let vars: Vec<VarId> = tb.product().vars().iter().copied().collect();
    let basis = monomial_basis(&vars, d);
    let checked = basis.len() * n * n;
    let mismatch = basis.par_iter().find_map_first(|m| {
        let run = || -> Result<Option<String>> {
            let f = GammaFn::det_powers(n, seed, m.clone());
            let (sf, _) = sequence_apply(steps, before, &f)?;
            for a in 1..=n {
                for b in 1..=n {
                    let (lhs, _) = sequence_apply(steps, before, &f.apply(tb.product().at(a, b)))?;
                    let rhs = sf.apply(ta.product().at(a, b));
                    if let Some(diff) = lhs.difference(&rhs) {
                        return Ok(Some(format!("entry ({a},{b}) on {m}: {diff}")));
                    }
                }
            }
            Ok(None)
        };
        run().unwrap_or_else(|e| Some(e.to_string()))
    });
    Ok(Report::from_mismatches(checked, mismatch))
}
