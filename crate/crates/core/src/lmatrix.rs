//! L-matrices, monodromies, quantum determinants and highest weight checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symbolics::rational::qf;
use crate::symbolics::{AffineForm, Param, ParamPoly, Q};
use crate::weyl::{FnPoly, PowerFn, VarId, WeylOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LKind {
    JsMinus,
    JsPlus,
    JsRestricted { two_ell: AffineForm },
    Biedenharn { two_ell: Vec<AffineForm> },
    Composite,
    Identity,
}

/// An `n x n` matrix of Weyl operators polynomial in the spectral parameter `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    n: usize,
    entries: Vec<Vec<WeylOp>>,
    kind: LKind,
    vars: BTreeSet<VarId>,
}

fn u() -> Param {
    Param::u()
}

fn u_op() -> WeylOp {
    WeylOp::scalar(ParamPoly::var(u()))
}

impl LMatrix {
    pub fn from_entries(entries: Vec<Vec<WeylOp>>, kind: LKind, vars: BTreeSet<VarId>) -> Self {
        let n = entries.len();
        assert!(entries.iter().all(|r| r.len() == n), "matrix must be square");
        LMatrix { n, entries, kind, vars }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|a| (0..n).map(|b| WeylOp::int((a == b) as i64)).collect()).collect();
        LMatrix { n, entries, kind: LKind::Identity, vars: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &LKind {
        &self.kind
    }

    pub fn vars(&self) -> &BTreeSet<VarId> {
        &self.vars
    }

    /// Entry with 1-based indices.
    pub fn at(&self, a: usize, b: usize) -> &WeylOp {
        &self.entries[a - 1][b - 1]
    }

    pub fn entries(&self) -> &Vec<Vec<WeylOp>> {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&WeylOp) -> WeylOp + Sync) -> LMatrix {
        let entries = self.entries.par_iter().map(|r| r.iter().map(&f).collect()).collect();
        LMatrix { n: self.n, entries, kind: self.kind.clone(), vars: self.vars.clone() }
    }

    /// `u -> u + shift`.
    pub fn shift_u(&self, shift: &AffineForm) -> LMatrix {
        if shift.is_zero() {
            return self.clone();
        }
        self.map(|e| e.shift_param(u(), shift))
    }

    /// Replaces `u` by another parameter.
    pub fn at_param(&self, p: Param) -> LMatrix {
        let map: BTreeMap<Param, ParamPoly> = [(u(), ParamPoly::var(p))].into_iter().collect();
        self.map(|e| e.substitute_poly(&map))
    }

    pub fn substitute_params(&self, a: &BTreeMap<Param, Q>) -> LMatrix {
        self.map(|e| e.substitute_params(a))
    }

    pub fn u_degree(&self) -> u32 {
        self.entries.iter().flatten().map(|e| e.degree_in(&u())).max().unwrap_or(0)
    }

    /// Coefficient matrix of `u^k`.
    pub fn u_coeff(&self, k: u32) -> LMatrix {
        self.map(|e| e.coeff_of(&u(), k))
    }

    pub fn mul(&self, o: &LMatrix) -> Result<LMatrix> {
        if self.n != o.n {
            return Err(Error::RankMismatch(self.n, o.n));
        }
        let n = self.n;
        let entries: Vec<Vec<WeylOp>> = (0..n * n)
            .into_par_iter()
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                let mut s = WeylOp::zero();
                for c in 0..n {
                    s = &s + &(&self.entries[a][c] * &o.entries[c][b]);
                }
                s
            })
            .collect::<Vec<_>>()
            .chunks(n)
            .map(|r| r.to_vec())
            .collect();
        let vars = self.vars.union(&o.vars).copied().collect();
        Ok(LMatrix { n, entries, kind: LKind::Composite, vars })
    }

    /// Divides every entry by `u^k`, failing unless divisible.
    pub fn div_u_power(&self, k: u32) -> Result<LMatrix> {
        for e in self.entries.iter().flatten() {
            for j in 0..k {
                if !e.coeff_of(&u(), j).is_zero() {
                    return Err(Error::NotDivisible(k));
                }
            }
        }
        Ok(self.map(|e| {
            let mut out = WeylOp::zero();
            for (m, c) in e.terms() {
                let mut p = ParamPoly::zero();
                for (pm, pc) in c.terms() {
                    let d = pm.degree_in(&u());
                    let mut ex = pm.exponents().clone();
                    if d == k {
                        ex.remove(&u());
                    } else {
                        ex.insert(u(), d - k);
                    }
                    p.add_term(crate::symbolics::PMono::from_exponents(ex), pc.clone());
                }
                out.add_term(m.clone(), p);
            }
            out
        }))
    }

    /// Action of entry `(a, b)` on a function.
    pub fn apply_entry(&self, a: usize, b: usize, f: &FnPoly) -> FnPoly {
        self.at(a, b).apply(f)
    }
}

impl fmt::Display for LMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, row) in self.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                writeln!(f, "L[{}][{}] = {}", a + 1, b + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Coordinate `x_a` of a one-site JS realization.
pub fn js_var(site: u16, a: usize) -> VarId {
    VarId::new(site, 0, a as u16)
}

/// `u + L^-` with `L^-_ab = -d_a x_b`, or `u + L^+` with `L^+_ab = x_a d_b`.
pub fn js_l(n: usize, plus: bool, site: u16) -> Result<LMatrix> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    let x = |a: usize| WeylOp::x(js_var(site, a));
    let d = |a: usize| WeylOp::d(js_var(site, a));
    let entries = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| {
                    let g = if plus { &x(a) * &d(b) } else { -(&d(a) * &x(b)) };
                    if a == b {
                        &u_op() + &g
                    } else {
                        g
                    }
                })
                .collect()
        })
        .collect();
    let vars = (1..=n).map(|a| js_var(site, a)).collect();
    Ok(LMatrix { n, entries, kind: if plus { LKind::JsPlus } else { LKind::JsMinus }, vars })
}

/// Normal coordinate `y^{site, s}_a`.
pub fn normal_var(site: u16, s: usize, a: usize) -> VarId {
    VarId::new(site, s as u16, a as u16)
}

/// JS `L^-` on homogeneous functions of degree `2l` in `n` variables, in the
/// normal coordinates `y_a = x_a / x_n`, `a < n`:
/// `L_ab = (u - 1) delta_ab - y_b D_a`, `D_a = d_a` for `a < n`, `D_n = 2l - E`.
pub fn restricted_l(n: usize, two_ell: &AffineForm, site: u16) -> Result<LMatrix> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    let y = |a: usize| normal_var(site, 1, a);
    let euler = (1..n).fold(WeylOp::zero(), |s, a| &s + &WeylOp::euler(y(a)));
    let dd = |a: usize| if a < n { WeylOp::d(y(a)) } else { &WeylOp::affine(two_ell) - &euler };
    let yy = |b: usize| if b < n { WeylOp::x(y(b)) } else { WeylOp::one() };
    let entries = (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| {
                    let t = -(&yy(b) * &dd(a));
                    if a == b {
                        &(&u_op() - &WeylOp::one()) + &t
                    } else {
                        t
                    }
                })
                .collect()
        })
        .collect();
    let vars = (1..n).map(y).collect();
    Ok(LMatrix { n, entries, kind: LKind::JsRestricted { two_ell: two_ell.clone() }, vars })
}

/// Restricted gl(2) L-matrix in the single coordinate `x = VarId::site(site)`.
pub fn restricted_l_gl2(two_ell: &AffineForm, site: u16) -> LMatrix {
    restricted_l(2, two_ell, site).expect("rank 2")
}

/// First order evaluation `L(u; 2l_1..2l_n)` on one site.
///
/// Sub-site `s` carries pivot `p = n - s + 1`, degree `2l_p` and coordinates
/// `y^s_a`, `a < p`. Derivatives in eliminated directions are obtained by
/// back substitution through the constraints of the earlier sub-sites; the
/// product of the sub-site matrices is divided by `u^(n-1)`.
pub fn biedenharn_l(n: usize, two_ell: &[AffineForm], site: u16) -> Result<LMatrix> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    assert_eq!(two_ell.len(), n, "one 2l per component");
    let mut product = LMatrix::identity(n);
    let mut vars = BTreeSet::new();
    for s in 1..=n {
        let l = biedenharn_sub_site(n, s, &two_ell[n - s], site)?;
        vars.extend(l.vars.iter().copied());
        product = product.mul(&l)?;
    }
    let mut out = product.div_u_power(n as u32 - 1)?;
    out.kind = LKind::Biedenharn { two_ell: two_ell.to_vec() };
    out.vars = vars;
    Ok(out)
}

/// The sub-site factors whose product is `u^(n-1)` times the first order evaluation.
pub fn biedenharn_factors(n: usize, two_ell: &[AffineForm], site: u16) -> Result<Vec<LMatrix>> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    (1..=n).map(|s| biedenharn_sub_site(n, s, &two_ell[n - s], site)).collect()
}

fn biedenharn_sub_site(n: usize, s: usize, two_ell: &AffineForm, site: u16) -> Result<LMatrix> {
    let p = n - s + 1;
    let y = |j: usize, a: usize| normal_var(site, j, a);
    // k[a][c]: coefficient of D^s_c (c <= p) in the derivative along component a
    let mut k: Vec<Vec<WeylOp>> = vec![vec![WeylOp::zero(); p + 1]; n + 1];
    for (a, row) in k.iter_mut().enumerate().take(p + 1).skip(1) {
        row[a] = WeylOp::one();
    }
    for a in p + 1..=n {
        let j = n - a + 1;
        if j >= s {
            return Err(Error::NonTriangular(s));
        }
        for c in 1..=p {
            let mut acc = WeylOp::zero();
            for a2 in 1..a {
                acc = &acc - &(&WeylOp::x(y(j, a2)) * &k[a2][c]);
            }
            k[a][c] = acc;
        }
    }
    let euler = (1..p).fold(WeylOp::zero(), |acc, a| &acc + &WeylOp::euler(y(s, a)));
    let xb = |b: usize| if b < p { WeylOp::x(y(s, b)) } else { WeylOp::one() };
    let dx = |c: usize, b: usize| {
        if c < p {
            &WeylOp::d(y(s, c)) * &xb(b)
        } else {
            &(&WeylOp::affine(&two_ell.shift(&Q::from_integer(1.into()))) - &euler) * &xb(b)
        }
    };
    let mut entries = vec![vec![WeylOp::zero(); n]; n];
    for a in 1..=n {
        for b in 1..=n {
            let mut e = if a == b { u_op() } else { WeylOp::zero() };
            if b <= p {
                for c in 1..=p {
                    if !k[a][c].is_zero() {
                        e = &e - &(&k[a][c] * &dx(c, b));
                    }
                }
            }
            entries[a - 1][b - 1] = e;
        }
    }
    let vars = (1..p).map(|a| y(s, a)).collect();
    Ok(LMatrix { n, entries, kind: LKind::Composite, vars })
}

/// Ordered product of L-matrices with spectral shifts `u -> u + delta`.
#[derive(Clone, Debug)]
pub struct Monodromy {
    factors: Vec<(LMatrix, AffineForm)>,
    product: LMatrix,
}

impl Monodromy {
    pub fn new(n: usize, factors: Vec<(LMatrix, AffineForm)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut product = LMatrix::identity(n);
        for (l, d) in &factors {
            if l.n != n {
                return Err(Error::RankMismatch(n, l.n));
            }
            for v in &l.vars {
                if !seen.insert(*v) {
                    return Err(Error::SiteCollision(v.to_string()));
                }
            }
            product = product.mul(&l.shift_u(d))?;
        }
        Ok(Monodromy { factors, product })
    }

    pub fn factors(&self) -> &[(LMatrix, AffineForm)] {
        &self.factors
    }

    pub fn product(&self) -> &LMatrix {
        &self.product
    }

    pub fn order(&self) -> u32 {
        self.factors.len() as u32
    }

    /// `T^{[k]}`, the coefficient of `u^(N - k)`.
    pub fn expansion(&self, k: u32) -> LMatrix {
        self.product.u_coeff(self.order() - k)
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Row ordering `sum sgn T(u-n+1)_{1 s1} ... T(u)_{n sn}`.
pub fn qdet_rows(t: &LMatrix) -> WeylOp {
    let n = t.n;
    let shifted: Vec<LMatrix> = (0..n).map(|i| t.shift_u(&AffineForm::int(i as i64 + 1 - n as i64))).collect();
    (0..n)
        .permutations(n)
        .par_bridge()
        .map(|p| {
            let mut acc = WeylOp::int(perm_sign(&p));
            for (i, &pi) in p.iter().enumerate() {
                acc = &acc * &shifted[i].entries[i][pi];
            }
            acc
        })
        .reduce(WeylOp::zero, |a, b| &a + &b)
}

/// Column ordering `sum sgn T(u)_{s1 1} ... T(u-n+1)_{sn n}`.
pub fn qdet_cols(t: &LMatrix) -> WeylOp {
    let n = t.n;
    let shifted: Vec<LMatrix> = (0..n).map(|i| t.shift_u(&AffineForm::int(-(i as i64)))).collect();
    (0..n)
        .permutations(n)
        .par_bridge()
        .map(|p| {
            let mut acc = WeylOp::int(perm_sign(&p));
            for (i, &pi) in p.iter().enumerate() {
                acc = &acc * &shifted[i].entries[pi][i];
            }
            acc
        })
        .reduce(WeylOp::zero, |a, b| &a + &b)
}

/// Quantum determinant; both orderings are computed and must agree.
pub fn qdet(t: &LMatrix) -> Result<WeylOp> {
    let r = qdet_rows(t);
    let c = qdet_cols(t);
    if r != c {
        return Err(Error::CentralityFailure);
    }
    Ok(r)
}

/// Checks that `T_ab` annihilates `v` for `a < b` and returns the diagonal
/// eigenvalues `lambda_a(u)`.
pub fn check_hw(t: &LMatrix, v: &PowerFn) -> Result<Vec<ParamPoly>> {
    let (_, vp) = v.normalized(None);
    if vp.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = t.n;
    for a in 1..=n {
        for b in a + 1..=n {
            let r = v.apply(t.at(a, b));
            if !r.is_zero() {
                let e = t.at(a, b);
                let power = (0..=e.degree_in(&u()))
                    .find(|k| !v.apply(&e.coeff_of(&u(), *k)).is_zero())
                    .unwrap_or(0);
                return Err(Error::NotHighestWeight { a, b, power, residual: r.normalized(None).1.to_string() });
            }
        }
    }
    (1..=n).map(|a| eigenvalue(t.at(a, a), v).ok_or(Error::NotEigenvector(a))).collect()
}

fn eigenvalue(op: &WeylOp, v: &PowerFn) -> Option<ParamPoly> {
    let r = v.apply(op);
    let floor = v.common_floor(&r);
    let (_, vp) = v.normalized(Some(&floor));
    let (_, rp) = r.normalized(Some(&floor));
    let (m0, c0) = vp.terms().iter().find(|(_, c)| c.as_constant().is_some())?;
    let lambda = rp.coeff(m0).scale(&c0.as_constant()?.recip());
    if &rp - &vp.scale(&lambda) == FnPoly::zero() {
        Some(lambda)
    } else {
        None
    }
}

/// `prod_I (u + delta_I - (n - a + 1) - 2l^I_a)` for `a = 1..n`.
pub fn predicted_weights(n: usize, two_ells: &[Vec<AffineForm>], shifts: &[AffineForm]) -> Vec<ParamPoly> {
    (1..=n)
        .map(|a| {
            two_ells.iter().zip(shifts).fold(ParamPoly::one(), |acc, (ell, d)| {
                let f = &(&(&AffineForm::param(u()) + d) - &ell[a - 1]) - &AffineForm::int((n - a + 1) as i64);
                &acc * &ParamPoly::from_affine(&f)
            })
        })
        .collect()
}

/// `rho_a = (n + 1)/2 - a`.
pub fn rho(n: usize, a: usize) -> Q {
    qf(n as i64 + 1, 2) - Q::from_integer((a as i64).into())
}

/// The parameters `2l^site_a` of one site as affine forms.
pub fn site_params(n: usize, site: u16) -> Vec<AffineForm> {
    (1..=n).map(|a| AffineForm::param(Param::ell(site as u32, a as u32))).collect()
}

/// First failing index quadruple of the Yangian relation
/// `(u - v)[T_ab(u), T_cd(v)] = T_cb(u) T_ad(v) - T_cb(v) T_ad(u)`.
pub fn rll_defect(t: &LMatrix) -> Option<(usize, usize, usize, usize)> {
    let n = t.n;
    let tu = t;
    let tv = t.at_param(Param::v());
    let umv = WeylOp::scalar(&ParamPoly::var(u()) - &ParamPoly::var(Param::v()));
    (0..n.pow(4)).into_par_iter().find_map_first(|i| {
        let (a, b, c, d) = (i / n.pow(3), (i / n.pow(2)) % n, (i / n) % n, i % n);
        let lhs = &umv * &tu.entries[a][b].commutator(&tv.entries[c][d]);
        let rhs = &(&tu.entries[c][b] * &tv.entries[a][d]) - &(&tv.entries[c][b] * &tu.entries[a][d]);
        if lhs != rhs {
            Some((a + 1, b + 1, c + 1, d + 1))
        } else {
            None
        }
    })
}
