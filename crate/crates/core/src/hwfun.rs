//! Determinant-power highest weight functions and beta sequences of
//! permutation operators for two adjacent gl(n) sites.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::symbolics::{AffineForm, GammaProduct, Param};
use crate::weyl::{FnPoly, VarId};

/// Column `x^{site, slot}` of the normal coordinate frame. Slot `n` is the unit vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnVector {
    pub site: u16,
    pub slot: usize,
}

impl ColumnVector {
    /// Row index of the unit entry; entries below it vanish.
    pub fn pivot(&self, n: usize) -> usize {
        n - self.slot + 1
    }

    pub fn is_unit(&self, n: usize) -> bool {
        self.slot == n
    }

    /// Component `a` as a polynomial in the normal coordinates.
    pub fn component(&self, n: usize, a: usize) -> FnPoly {
        let p = self.pivot(n);
        if a < p {
            FnPoly::var(VarId::new(self.site, self.slot as u16, a as u16))
        } else if a == p {
            FnPoly::one()
        } else {
            FnPoly::zero()
        }
    }
}

/// `f(x^{1,i}, x^{2,j}) = det(x^{1,1}, .., x^{1,i-1}, x^{1,i+1}, .., x^{1,n}, x^{2,j})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetFactor {
    pub missing: usize,
    pub second: usize,
}

impl DetFactor {
    pub fn new(missing: usize, second: usize) -> Self {
        DetFactor { missing, second }
    }

    pub fn columns(&self, n: usize) -> Vec<ColumnVector> {
        let mut c: Vec<ColumnVector> = (1..=n).filter(|&s| s != self.missing).map(|slot| ColumnVector { site: 1, slot }).collect();
        c.push(ColumnVector { site: 2, slot: self.second });
        c
    }

    /// For matching slots the columns form a permuted unit triangle; returns the
    /// determinant `+1` or `-1`.
    pub fn unit_sign(&self, n: usize) -> Option<i32> {
        if self.missing != self.second {
            return None;
        }
        let piv: Vec<usize> = self.columns(n).iter().map(|c| c.pivot(n)).collect();
        let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| piv[i] > piv[j]).count();
        Some(if inv % 2 == 0 { 1 } else { -1 })
    }

    /// The determinant expanded in the normal coordinates.
    pub fn expand(&self, n: usize) -> FnPoly {
        use itertools::Itertools;
        let cols = self.columns(n);
        let mut out = FnPoly::zero();
        for p in (0..n).permutations(n) {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut t = FnPoly::one();
            for (c, &row) in cols.iter().zip(&p) {
                t = &t * &c.component(n, row + 1);
                if t.is_zero() {
                    break;
                }
            }
            if inv % 2 == 1 {
                t = &FnPoly::zero() - &t;
            }
            out = &out + &t;
        }
        out
    }
}

impl fmt::Display for DetFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f(x^1,{}; x^2,{})", self.missing, self.second)
    }
}

/// Parameter array of two sites; block position `p` of site `I` initially holds `2l^I_{n-p+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamArray {
    pub n: usize,
    pub blocks: [Vec<AffineForm>; 2],
}

impl ParamArray {
    pub fn standard(n: usize) -> Self {
        let block = |site: u32| (1..=n).map(|p| AffineForm::param(Param::ell(site, (n - p + 1) as u32))).collect();
        ParamArray { n, blocks: [block(1), block(2)] }
    }

    /// Value at site `I` (1 or 2), block position `p` (1-based).
    pub fn at(&self, site: usize, p: usize) -> &AffineForm {
        &self.blocks[site - 1][p - 1]
    }

    /// `2l^site_a`, i.e. block position `n - a + 1`.
    pub fn ell(&self, site: usize, a: usize) -> &AffineForm {
        self.at(site, self.n - a + 1)
    }

    pub fn swap_within(&mut self, site: usize, k: usize) {
        self.blocks[site - 1].swap(k - 1, k);
    }

    pub fn swap_between(&mut self) {
        let n = self.n;
        let t = self.blocks[0][n - 1].clone();
        self.blocks[0][n - 1] = std::mem::replace(&mut self.blocks[1][0], t);
    }

    /// `2l_a` values of one site in component order `a = 1..n`.
    pub fn site_ells(&self, site: usize) -> Vec<AffineForm> {
        (1..=self.n).map(|a| self.ell(site, a).clone()).collect()
    }
}

impl fmt::Display for ParamArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |v: &Vec<AffineForm>| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "{}; {}", b(&self.blocks[0]), b(&self.blocks[1]))
    }
}

/// `coefficient * (-1)^sign_exponent * prod f^exponent` with the parameter array it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HWFunction {
    pub factors: BTreeMap<DetFactor, AffineForm>,
    pub coefficient: GammaProduct,
    pub sign_exponent: AffineForm,
    pub array: ParamArray,
}

impl HWFunction {
    pub fn one(array: ParamArray) -> Self {
        HWFunction { factors: BTreeMap::new(), coefficient: GammaProduct::one(), sign_exponent: AffineForm::default(), array }
    }

    pub fn n(&self) -> usize {
        self.array.n
    }

    pub fn mul_factor(&mut self, f: DetFactor, e: &AffineForm) {
        let x = self.factors.entry(f).or_default();
        *x = &*x + e;
        if x.is_zero() {
            self.factors.remove(&f);
        }
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factor `f(x^{1,k+1}, x^{2,j})` or `f(x^{1,i}, x^{2,k})` on which a
    /// shift acts; exactly one must exist.
    fn single_active(&self, pred: impl Fn(&DetFactor) -> bool, what: &str) -> Result<(DetFactor, AffineForm)> {
        let act: Vec<_> = self.factors.iter().filter(|(f, _)| pred(f)).collect();
        match act.as_slice() {
            [(f, e)] => Ok((**f, (*e).clone())),
            [] => Err(Error::NotBetaAdmissible(format!("{what}: no active factor"))),
            _ => Err(Error::NotBetaAdmissible(format!("{what}: {} active factors", act.len()))),
        }
    }
}

impl fmt::Display for HWFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        if !self.sign_exponent.is_zero() {
            write!(f, " * (-1)^({})", self.sign_exponent)?;
        }
        for (d, e) in &self.factors {
            write!(f, " * {}^({})", d, e)?;
        }
        Ok(())
    }
}

/// Drops unit determinants `f(x^{1,j}, x^{2,j})`, recording a negative
/// orientation in the sign exponent, and zero exponents.
pub fn det_normalize(h: &HWFunction) -> HWFunction {
    let n = h.n();
    let mut out = h.clone();
    out.factors.clear();
    for (f, e) in &h.factors {
        match f.unit_sign(n) {
            Some(s) => {
                if s < 0 {
                    out.sign_exponent = &out.sign_exponent + e;
                }
            }
            None => out.mul_factor(*f, e),
        }
    }
    // integer part of the constant goes into the coefficient, leaving it in [0, 1)
    let c = out.sign_exponent.constant_part().clone();
    let k = c.floor();
    if !k.is_zero() {
        if !(k.to_integer() % 2u8).is_zero() {
            out.coefficient = out.coefficient.scale(&(-crate::symbolics::rational::q(1)));
        }
        out.sign_exponent = out.sign_exponent.with_constant(c - k);
    }
    out
}

fn degenerate(w: &AffineForm) -> Result<()> {
    if w.is_zero() {
        return Err(Error::DegenerateArgument(w.to_string()));
    }
    Ok(())
}

/// `S^1_{k,k+1}(w)`: `f(k+1, j)^v -> B(w, v+1) f(k, j)^{-w} f(k+1, j)^{w+v}`.
pub fn beta_step_s1(k: usize, w: &AffineForm, h: &HWFunction) -> Result<HWFunction> {
    degenerate(w)?;
    let (f, v) = h.single_active(|f| f.missing == k + 1, "S1")?;
    let mut out = h.clone();
    out.factors.remove(&f);
    out.coefficient = &out.coefficient * &GammaProduct::beta(w, &(v.clone() + 1));
    out.mul_factor(DetFactor::new(k, f.second), &-w);
    out.mul_factor(f, &(w + &v));
    out.array.swap_within(1, k);
    Ok(det_normalize(&out))
}

/// `S^2_{k,k+1}(w)`: `f(i, k)^v -> B(w, v+1) f(i, k+1)^{-w} f(i, k)^{w+v}`.
pub fn beta_step_s2(k: usize, w: &AffineForm, h: &HWFunction) -> Result<HWFunction> {
    degenerate(w)?;
    let (f, v) = h.single_active(|f| f.second == k, "S2")?;
    let mut out = h.clone();
    out.factors.remove(&f);
    out.coefficient = &out.coefficient * &GammaProduct::beta(w, &(v.clone() + 1));
    out.mul_factor(DetFactor::new(f.missing, k + 1), &-w);
    out.mul_factor(f, &(w + &v));
    out.array.swap_within(2, k);
    Ok(det_normalize(&out))
}

/// `S^{12}(w)`: multiplication by `f(x^{1,n}, x^{2,1})^w`.
pub fn step_between(w: &AffineForm, h: &HWFunction) -> HWFunction {
    let mut out = h.clone();
    out.mul_factor(DetFactor::new(h.n(), 1), w);
    out.array.swap_between();
    det_normalize(&out)
}

/// An elementary permutation step; its argument is read off the current array.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// Exchange of block positions `k, k+1` of site 1 or 2.
    Within { site: usize, k: usize },
    /// Exchange of the last entry of site 1 with the first of site 2.
    Between,
}

impl Step {
    /// `cur[k+1] - cur[k]` within a site, `cur(1,n) - cur(2,1)` between sites.
    pub fn argument(&self, a: &ParamArray) -> AffineForm {
        match *self {
            Step::Within { site, k } => a.at(site, k + 1) - a.at(site, k),
            Step::Between => a.at(1, a.n) - a.at(2, 1),
        }
    }

    pub fn apply(&self, h: &HWFunction) -> Result<HWFunction> {
        let w = self.argument(&h.array);
        match *self {
            Step::Within { site: 1, k } => beta_step_s1(k, &w, h),
            Step::Within { site: 2, k } => beta_step_s2(k, &w, h),
            Step::Within { site, .. } => Err(Error::NotBetaAdmissible(format!("site {site}"))),
            Step::Between => Ok(step_between(&w, h)),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Within { site, k } => write!(f, "S^{}_{{{},{}}}", site, k, k + 1),
            Step::Between => write!(f, "S^12"),
        }
    }
}

/// States after each step of a sequence (the first entry is the input).
pub fn run_sequence(steps: &[Step], h: &HWFunction) -> Result<Vec<HWFunction>> {
    let mut states = vec![h.clone()];
    for s in steps {
        let next = s.apply(states.last().expect("nonempty"))?;
        states.push(next);
    }
    Ok(states)
}

/// Inner part of the sequence exchanging site-1 position `p` with the
/// entry that sits at site-2 position 1 before the enclosing `S^12` steps:
/// sweep left from `n` to `p+1`, swap `p, p+1`, sweep back right.
pub fn inner_site1(n: usize, p: usize) -> Vec<Step> {
    let mut s: Vec<Step> = (p + 1..n).rev().map(|k| Step::Within { site: 1, k }).collect();
    s.push(Step::Within { site: 1, k: p });
    s.extend((p + 1..n).map(|k| Step::Within { site: 1, k }));
    s
}

/// Inner part exchanging site-2 position `p` with the entry that sits at site-1
/// position `n` before the enclosing `S^12` steps.
pub fn inner_site2(p: usize) -> Vec<Step> {
    let mut s: Vec<Step> = (1..p - 1).map(|k| Step::Within { site: 2, k }).collect();
    s.push(Step::Within { site: 2, k: p - 1 });
    s.extend((1..p - 1).rev().map(|k| Step::Within { site: 2, k }));
    s
}

/// `S^{12}_{p,1}`: exchanges site-1 position `p < n` with site-2 position 1.
pub fn sequence_s12_p1(n: usize, p: usize) -> Vec<Step> {
    let mut s = vec![Step::Between];
    s.extend(inner_site1(n, p));
    s.push(Step::Between);
    s
}

/// `S^{12}_{p,2}`: exchanges site-1 position `n` with site-2 position `p > 1`.
pub fn sequence_s12_p2(p: usize) -> Vec<Step> {
    let mut s = vec![Step::Between];
    s.extend(inner_site2(p));
    s.push(Step::Between);
    s
}

/// The 1 to 1 sequence exchanging `2l^1_i` and `2l^2_i`.
pub fn sequence_s12_i(n: usize, i: usize) -> Vec<Step> {
    let q = n - i + 1;
    if i == n {
        return sequence_s12_p1(n, 1);
    }
    if i == 1 {
        return sequence_s12_p2(n);
    }
    let mut s = vec![Step::Between];
    s.extend(inner_site1(n, q));
    s.push(Step::Between);
    s.extend(inner_site2(q));
    s.push(Step::Between);
    s.extend(inner_site1(n, q));
    s.push(Step::Between);
    s
}

/// Result of a beta sequence.
#[derive(Clone, Debug)]
pub struct SequenceResult {
    pub steps: Vec<Step>,
    pub states: Vec<HWFunction>,
}

impl SequenceResult {
    pub fn last(&self) -> &HWFunction {
        self.states.last().expect("nonempty")
    }

    pub fn coefficient(&self) -> &GammaProduct {
        &self.last().coefficient
    }
}

/// Runs `S^{12}_{p,1}` on 1.
pub fn beta_sequence_s12_i1(n: usize, p: usize, array: &ParamArray) -> Result<SequenceResult> {
    let steps = sequence_s12_p1(n, p);
    let states = run_sequence(&steps, &HWFunction::one(array.clone()))?;
    Ok(SequenceResult { steps, states })
}

/// Runs `S^{12}_{p,2}` on 1.
pub fn beta_sequence_s12_i2(p: usize, array: &ParamArray) -> Result<SequenceResult> {
    let steps = sequence_s12_p2(p);
    let states = run_sequence(&steps, &HWFunction::one(array.clone()))?;
    Ok(SequenceResult { steps, states })
}

/// Runs the 1 to 1 sequence `S^{12}_i` on 1 and checks that it returns a constant.
pub fn beta_sequence_s12_i(i: usize, array: &ParamArray) -> Result<SequenceResult> {
    let steps = sequence_s12_i(array.n, i);
    let states = run_sequence(&steps, &HWFunction::one(array.clone()))?;
    let r = SequenceResult { steps, states };
    if !r.last().is_constant() {
        return Err(Error::NonUnitResidual(r.last().to_string()));
    }
    Ok(r)
}

fn beta(a: AffineForm, b: AffineForm) -> GammaProduct {
    GammaProduct::beta(&a, &b)
}

/// Closed form of the `S^{12}_{p,1}` coefficient on 1: with `c_j` the site-1
/// entries and `a` the first site-2 entry,
/// `B(a - c_p, c_{p+1} - a + 1) prod_{j=p+1}^{n-1} B(a - c_j, c_{j+1} - a + 1) B(c_j - c_p, c_{j+1} - c_j + 1)`.
pub fn closed_form_s12_p1(p: usize, array: &ParamArray) -> GammaProduct {
    let n = array.n;
    let c = |j: usize| array.at(1, j).clone();
    let a = array.at(2, 1).clone();
    let one = AffineForm::int(1);
    let mut g = beta(&a - &c(p), &(&c(p + 1) - &a) + &one);
    for j in p + 1..n {
        g = &g * &beta(&a - &c(j), &(&c(j + 1) - &a) + &one);
        g = &g * &beta(&c(j) - &c(p), &(&c(j + 1) - &c(j)) + &one);
    }
    g
}

/// Closed form of the `S^{12}_{p,2}` coefficient on 1: with `d_j` the site-2
/// entries and `a` the last site-1 entry,
/// `B(d_p - a, a - d_{p-1} + 1) prod_{k=1}^{p-2} B(d_{k+1} - a, a - d_k + 1) B(d_p - d_{k+1}, d_{k+1} - d_k + 1)`.
pub fn closed_form_s12_p2(p: usize, array: &ParamArray) -> GammaProduct {
    let d = |j: usize| array.at(2, j).clone();
    let a = array.at(1, array.n).clone();
    let one = AffineForm::int(1);
    let mut g = beta(&d(p) - &a, &(&a - &d(p - 1)) + &one);
    for k in 1..p - 1 {
        g = &g * &beta(&d(k + 1) - &a, &(&a - &d(k)) + &one);
        g = &g * &beta(&d(p) - &d(k + 1), &(&d(k + 1) - &d(k)) + &one);
    }
    g
}

/// Closed form of the full exchange `2l^1_n <-> 2l^2_n` on the standard layout,
/// `prod_{k=1}^{n-1} B(2l^2_n - 2l^1_{k+1}, 2l^1_k - 2l^2_n + 1) prod_{k=1}^{n-2} B(2l^1_{k+1} - 2l^1_n, 2l^1_k - 2l^1_{k+1} + 1)`,
/// with `2l^1_k` read from the array.
pub fn closed_form_swap_n(array: &ParamArray) -> GammaProduct {
    let n = array.n;
    let l1 = |k: usize| array.ell(1, k).clone();
    let a = array.ell(2, n).clone();
    let one = AffineForm::int(1);
    let mut g = GammaProduct::one();
    for k in 1..n {
        g = &g * &beta(&a - &l1(k + 1), &(&l1(k) - &a) + &one);
    }
    for k in 1..n - 1 {
        g = &g * &beta(&l1(k + 1) - &l1(n), &(&l1(k) - &l1(k + 1)) + &one);
    }
    g
}

/// `T(u) = L^1(u) L^2(u)` in the parametrization given by the array.
pub fn monodromy(array: &ParamArray) -> Result<crate::lmatrix::Monodromy> {
    let n = array.n;
    let l1 = crate::lmatrix::biedenharn_l(n, &array.site_ells(1), 1)?;
    let l2 = crate::lmatrix::biedenharn_l(n, &array.site_ells(2), 2)?;
    crate::lmatrix::Monodromy::new(n, vec![(l1, AffineForm::default()), (l2, AffineForm::default())])
}

/// The determinant powers of `h` as a function; the constant prefactor is dropped.
pub fn to_power_fn(h: &HWFunction) -> crate::weyl::PowerFn {
    crate::weyl::PowerFn::new(h.factors.iter().map(|(f, e)| (f.expand(h.n()), e.clone())).collect())
}
