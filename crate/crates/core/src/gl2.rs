//! Second and fourth order gl(2) evaluations: parameter combinations,
//! representation types and permutation-coefficient asymptotics.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lmatrix::{biedenharn_l, check_hw, Monodromy};
use crate::symbolics::laurent::factor_order;
use crate::symbolics::rational::{is_integer, nonnegative_integer};
use crate::symbolics::{gamma_pole_order, AffineForm, GammaProduct, GammaValue, LaurentLeading, Param, ParamPoly, Q};
use crate::weyl::{FnPoly, Monomial, PowerFn, VarId};

/// `(2l_2, 2l_1)` of one first-order factor.
pub type FactorParams = [AffineForm; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Params {
    pub factors: Vec<FactorParams>,
}

impl Gl2Params {
    pub fn new(factors: Vec<FactorParams>) -> Result<Self> {
        if factors.len() != 2 && factors.len() != 4 {
            return Err(Error::UnsupportedTarget(format!("order {} evaluation", factors.len())));
        }
        Ok(Gl2Params { factors })
    }

    /// `2l^I_a` as free symbols.
    pub fn symbolic(order: usize) -> Self {
        let f = (1..=order as u32)
            .map(|i| [AffineForm::param(Param::ell(i, 2)), AffineForm::param(Param::ell(i, 1))])
            .collect();
        Gl2Params { factors: f }
    }

    /// Rational second order parameters `2l^1_2, 2l^1_1, 2l^2_2, 2l^2_1`.
    pub fn rational(v: [Q; 4]) -> Self {
        let [a, b, c, d] = v.map(AffineForm::constant);
        Gl2Params { factors: vec![[a, b], [c, d]] }
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    /// `2l^I_a` with `I` counted from 1.
    pub fn ell(&self, i: usize, a: usize) -> &AffineForm {
        &self.factors[i - 1][2 - a]
    }

    /// The parameters as a substitution for the symbols `2l^I_a`.
    pub fn assignment(&self) -> Option<BTreeMap<Param, Q>> {
        let mut m = BTreeMap::new();
        for (i, f) in self.factors.iter().enumerate() {
            for (k, a) in [2u32, 1].into_iter().enumerate() {
                m.insert(Param::ell(i as u32 + 1, a), f[k].as_constant()?.clone());
            }
        }
        Some(m)
    }

    pub fn sigma12_1(&self) -> Self {
        self.swapped((1, 1), (2, 1))
    }

    pub fn sigma12_2(&self) -> Self {
        self.swapped((1, 2), (2, 2))
    }

    pub fn sigma12(&self) -> Self {
        self.sigma12_1().sigma12_2()
    }

    /// The adjacent swap `2l^1_1 <-> 2l^2_2` across the factor boundary.
    pub fn sigma1(&self) -> Self {
        self.swapped((1, 1), (2, 2))
    }

    /// `sigma^1 sigma^12`: `2l^2_2, 2l^1_2; 2l^2_1, 2l^1_1`.
    pub fn sigma_tilde(&self) -> Self {
        let g = |i, a| self.ell(i, a).clone();
        Gl2Params { factors: vec![[g(2, 2), g(1, 2)], [g(2, 1), g(1, 1)]] }
    }

    fn swapped(&self, p: (usize, usize), q: (usize, usize)) -> Self {
        let mut s = self.clone();
        let (x, y) = (self.ell(p.0, p.1).clone(), self.ell(q.0, q.1).clone());
        s.factors[p.0 - 1][2 - p.1] = y;
        s.factors[q.0 - 1][2 - q.1] = x;
        s
    }

    /// Factor `i` with every parameter shifted by `t`.
    pub fn shifted(f: &FactorParams, t: &AffineForm) -> FactorParams {
        [&f[0] + t, &f[1] + t]
    }

    /// The second order monodromy `L^I(u) L^J(u)` acting on `x^1, x^2`.
    pub fn monodromy(&self, i: usize, j: usize) -> Result<Monodromy> {
        let l = |site: u16, f: &FactorParams| biedenharn_l(2, &[f[1].clone(), f[0].clone()], site);
        Monodromy::new(2, vec![(l(1, &self.factors[i - 1])?, AffineForm::int(0)), (l(2, &self.factors[j - 1])?, AffineForm::int(0))])
    }
}

impl fmt::Display for Gl2Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| format!("{}, {}", p[0], p[1])).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `2L^1, 2L^2, 2M^12, 2M^21` of an ordered pair of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCombos {
    pub two_l1: AffineForm,
    pub two_l2: AffineForm,
    pub two_m12: AffineForm,
    pub two_m21: AffineForm,
}

impl ParamCombos {
    pub fn values(&self) -> Option<[Q; 4]> {
        Some([
            self.two_l1.as_constant()?.clone(),
            self.two_l2.as_constant()?.clone(),
            self.two_m12.as_constant()?.clone(),
            self.two_m21.as_constant()?.clone(),
        ])
    }
}

pub fn combos(p: &Gl2Params, i: usize, j: usize) -> ParamCombos {
    let (f, g) = (&p.factors[i - 1], &p.factors[j - 1]);
    let one = AffineForm::int(1);
    let c = ParamCombos {
        two_l1: &(&f[0] - &f[1]) - &one,
        two_l2: &(&g[0] - &g[1]) - &one,
        two_m12: &(&g[0] - &f[1]) - &one,
        two_m21: &(&f[0] - &g[1]) - &one,
    };
    debug_assert_eq!(&c.two_l1 + &c.two_l2, &c.two_m12 + &c.two_m21);
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Config {
    /// `2M12 <= 2L1, 2L2 <= 2M21`
    M12LLM,
    /// `2L2 <= 2M12, 2M21 <= 2L1`
    L2MML,
    /// `2L1 <= 2M12, 2M21 <= 2L2`
    L1MML,
    /// `2M21 <= 2L1, 2L2 <= 2M12`
    M21LLM,
    LimitL1EqM12,
    LimitAllEqual,
    Generic,
    MixedIrreducible,
    Unclassified,
}

impl Config {
    pub fn label(&self) -> &'static str {
        match self {
            Config::M12LLM => "M12<=LL<=M21",
            Config::L2MML => "L2<=MM<=L1",
            Config::L1MML => "L1<=MM<=L2",
            Config::M21LLM => "M21<=LL<=M12",
            Config::LimitL1EqM12 => "limit-L1=M12",
            Config::LimitAllEqual => "limit-all-equal",
            Config::Generic => "generic",
            Config::MixedIrreducible => "mixed-irreducible",
            Config::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    FiniteIrreducible,
    FiniteReducible,
    InfiniteHw,
    InfiniteDegenerate,
    Unclassified,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::FiniteIrreducible => "finite-irreducible",
            Verdict::FiniteReducible => "finite-reducible",
            Verdict::InfiniteHw => "infinite-hw",
            Verdict::InfiniteDegenerate => "infinite-degenerate",
            Verdict::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub integer: bool,
    pub nonnegative: bool,
}

impl Witness {
    fn of(x: &Q) -> Self {
        Witness { integer: is_integer(x), nonnegative: !x.is_negative() }
    }

    pub fn nonneg_integer(&self) -> bool {
        self.integer && self.nonnegative
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTypeReport {
    pub configuration: Config,
    pub on_constant: Verdict,
    pub on_psi0: Verdict,
    /// Status of `2L1, 2L2, 2M12, 2M21` in this order.
    pub witnesses: [Witness; 4],
}

/// The ordering configuration of four rational combos. Limits are tested
/// before the (non-strict) chains.
pub fn ordering(v: &[Q; 4]) -> Config {
    let [a, b, m, mp] = v;
    let lo_ab = a.min(b);
    let hi_ab = a.max(b);
    if a == b && b == m {
        Config::LimitAllEqual
    } else if a == m && b == mp && b < m {
        Config::LimitL1EqM12
    } else if m <= lo_ab {
        Config::M12LLM
    } else if mp <= lo_ab {
        Config::M21LLM
    } else if a <= m.min(mp) {
        Config::L1MML
    } else {
        debug_assert!(b <= m.min(mp) && m.max(mp) <= hi_ab);
        Config::L2MML
    }
}

pub fn classify(c: &ParamCombos) -> Option<RepTypeReport> {
    let v = c.values()?;
    let witnesses = [Witness::of(&v[0]), Witness::of(&v[1]), Witness::of(&v[2]), Witness::of(&v[3])];
    let [a, b, m, mp] = &v;
    let nn = |i: usize| witnesses[i].nonneg_integer();
    let report = |configuration, on_constant, on_psi0| RepTypeReport { configuration, on_constant, on_psi0, witnesses };
    use Verdict::*;
    if !(0..4).any(nn) && !is_integer(&(m - a)) && !is_integer(&(m - b)) {
        return Some(report(Config::Generic, InfiniteHw, InfiniteHw));
    }
    if !(nn(0) && nn(1)) {
        return Some(report(Config::Unclassified, Unclassified, Unclassified));
    }
    if !witnesses[2].integer {
        return Some(report(Config::MixedIrreducible, FiniteIrreducible, InfiniteHw));
    }
    let config = ordering(&v);
    if m.is_negative() || mp.is_negative() {
        return Some(report(config, Unclassified, Unclassified));
    }
    let (on_constant, on_psi0) = match config {
        Config::LimitAllEqual => (FiniteIrreducible, InfiniteHw),
        Config::LimitL1EqM12 => (FiniteIrreducible, InfiniteDegenerate),
        Config::M12LLM if m < a.min(b) => (FiniteReducible, FiniteIrreducible),
        // a tie with one of the L combos: the irreducible mixed case
        Config::M12LLM => (FiniteIrreducible, Unclassified),
        Config::L1MML => (FiniteIrreducible, InfiniteDegenerate),
        Config::L2MML => (FiniteIrreducible, Unclassified),
        _ => (Unclassified, Unclassified),
    };
    Some(report(config, on_constant, on_psi0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Pi1,
    Pi2,
    Pi,
}

fn b(a: &AffineForm, b: &AffineForm) -> GammaProduct {
    GammaProduct::beta(a, b)
}

/// Raw forms in terms of the factor parameters of the pair `(i, j)`.
pub fn perm_coeff(p: &Gl2Params, i: usize, j: usize, which: Which) -> GammaProduct {
    let l = |s: usize, a: usize| p.ell(if s == 1 { i } else { j }, a);
    let second = &(l(1, 1) - l(2, 2)) + &AffineForm::int(1);
    match which {
        Which::Pi1 => b(&(l(2, 1) - l(1, 1)), &second),
        Which::Pi2 => b(&(l(2, 2) - l(1, 2)), &second),
        Which::Pi => pi_factors(&p.factors[i - 1], &p.factors[j - 1])
            .into_iter()
            .fold(GammaProduct::one(), |g, (a, e)| g.mul_gamma(&a, e)),
    }
}

/// The same coefficients written through the combos.
pub fn perm_coeff_combo(c: &ParamCombos, which: Which) -> GammaProduct {
    let neg_m = -&c.two_m12;
    match which {
        Which::Pi1 => b(&(&c.two_m12 - &c.two_l2), &neg_m),
        Which::Pi2 => b(&(&c.two_m12 - &c.two_l1), &neg_m),
        Which::Pi => GammaProduct::gamma(&c.two_m12 - &c.two_l1)
            .mul_gamma(&(&c.two_m12 - &c.two_l2), 1)
            .mul_gamma(&neg_m, 1)
            .mul_gamma(&-&c.two_m21, -1),
    }
}

/// `Gamma(2l^2_2 - 2l^1_2) Gamma(2l^2_1 - 2l^1_1) Gamma(2l^1_1 - 2l^2_2 + 1) / Gamma(2l^2_1 - 2l^1_2 + 1)`
/// as a list of `(argument, power)`.
pub fn pi_factors(f: &FactorParams, g: &FactorParams) -> Vec<(AffineForm, i32)> {
    let one = AffineForm::int(1);
    vec![
        (&g[0] - &f[0], 1),
        (&g[1] - &f[1], 1),
        (&(&f[1] - &g[0]) + &one, 1),
        (&(&g[1] - &f[0]) + &one, -1),
    ]
}

/// `pi^1234` of a fourth order evaluation: `pi(2,3) pi(1,3) pi(2,4) pi(1,4)`.
pub fn pi_1234(p: &Gl2Params) -> Result<GammaProduct> {
    if p.order() != 4 {
        return Err(Error::UnsupportedTarget(format!("pi^1234 needs order 4, got {}", p.order())));
    }
    Ok([(2, 3), (1, 3), (2, 4), (1, 4)]
        .into_iter()
        .fold(GammaProduct::one(), |g, (i, j)| &g * &perm_coeff(p, i, j, Which::Pi)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymMode {
    /// `pi(2l^1, 2l^1 + u)`
    ShiftAll,
    /// `pi(2l^1, 2l^2 + u)`
    ShiftSecond,
    /// `pi^1234(2l^1, 2l^2, 2l^1 + u, 2l^2 + u)`
    FourFactor,
}

/// Leading term of one coefficient together with the order contributed by
/// each of its Gamma factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub leading: LaurentLeading,
    pub factor_orders: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    /// Single factor: whether the constant generates a finite representation.
    SingleFactor { finite: bool },
    Config(Config),
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::SingleFactor { finite: true } => f.write_str("finite"),
            CaseLabel::SingleFactor { finite: false } => f.write_str("infinite"),
            CaseLabel::Config(c) => c.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticsReport {
    pub mode: AsymMode,
    pub components: Vec<Component>,
    pub leading: LaurentLeading,
    pub case: CaseLabel,
}

fn u() -> AffineForm {
    AffineForm::param(Param::u())
}

/// `pi^IJ(u) = pi(2l^I, 2l^J + u)` at rational base parameters.
fn pi_ij(p: &Gl2Params, i: usize, j: usize) -> Result<Component> {
    let fs = pi_factors(&p.factors[i - 1], &Gl2Params::shifted(&p.factors[j - 1], &u()));
    let g = fs.iter().fold(GammaProduct::one(), |g, (a, e)| g.mul_gamma(a, *e));
    let empty = BTreeMap::new();
    let leading = gamma_pole_order(&g, &empty, &Param::u())?;
    let factor_orders = fs
        .iter()
        .map(|(a, e)| factor_order(a.constant_part(), &a.coeff(&Param::u()), *e))
        .collect();
    Ok(Component { name: format!("pi{i}{j}"), leading, factor_orders })
}

fn product(cs: &[Component]) -> LaurentLeading {
    cs.iter().fold(LaurentLeading { order: 0, coefficient: GammaValue::rational(Q::one()) }, |acc, c| LaurentLeading {
        order: acc.order + c.leading.order,
        coefficient: acc.coefficient.mul(&c.leading.coefficient),
    })
}

pub fn asymptotics_report(p: &Gl2Params, mode: AsymMode) -> Result<AsymptoticsReport> {
    if p.order() != 2 {
        return Err(Error::UnsupportedTarget("asymptotics take a second order base".into()));
    }
    if p.assignment().is_none() {
        return Err(Error::UnsupportedTarget("asymptotics need rational parameters".into()));
    }
    let (components, case) = match mode {
        AsymMode::ShiftAll => {
            let c = pi_ij(p, 1, 1)?;
            let finite = c.leading.coefficient.sign() < 0;
            (vec![c], CaseLabel::SingleFactor { finite })
        }
        AsymMode::ShiftSecond => {
            let c = pi_ij(p, 1, 2)?;
            let case = CaseLabel::Config(second_factor_case(&c));
            (vec![c], case)
        }
        AsymMode::FourFactor => {
            let cs = vec![pi_ij(p, 2, 1)?, pi_ij(p, 1, 1)?, pi_ij(p, 2, 2)?, pi_ij(p, 1, 2)?];
            let case = CaseLabel::Config(four_factor_case(&cs));
            (cs, case)
        }
    };
    let leading = product(&components);
    Ok(AsymptoticsReport { mode, components, leading, case })
}

/// Case of `pi^12(u)` alone, read from its pole pattern
/// `[Gamma(2M12-2L1+u), Gamma(2M12-2L2+u), Gamma(-2M12-u), 1/Gamma(-2M21+u)]`.
fn second_factor_case(c: &Component) -> Config {
    let f = &c.factor_orders;
    if f.iter().all(|o| *o == 0) {
        return Config::Generic;
    }
    match c.leading.order {
        -2 => Config::M12LLM,
        0 => Config::M21LLM,
        -1 if f[2] == 0 => Config::M12LLM,
        -1 if f[3] == 0 => Config::M21LLM,
        -1 if f[0] == 0 && f[1] != 0 => Config::L1MML,
        -1 if f[0] != 0 && f[1] == 0 => Config::L2MML,
        _ => Config::Unclassified,
    }
}

/// Case of the fourth order coefficient from the Laurent data of
/// `pi^21, pi^11, pi^22, pi^12`.
fn four_factor_case(cs: &[Component]) -> Config {
    let flip = |c: &Component| c.leading.coefficient.sign() < 0;
    let (p21, p11, p22, p12) = (&cs[0], &cs[1], &cs[2], &cs[3]);
    let quiet = |c: &Component| c.factor_orders.iter().all(|o| *o == 0);
    match (flip(p11), flip(p22)) {
        (false, false) if quiet(p21) && quiet(p12) => return Config::Generic,
        (true, true) => {}
        _ => return Config::Unclassified,
    }
    if quiet(p21) && quiet(p12) {
        return Config::MixedIrreducible;
    }
    let (f12, f21) = (&p12.factor_orders, &p21.factor_orders);
    match (p21.leading.order, p12.leading.order) {
        (-2, -2) => Config::LimitAllEqual,
        (0, -2) | (-1, -2) => Config::M12LLM,
        (-2, 0) => Config::M21LLM,
        // 2L1 = 2M12 shows up as Gamma(u) in the first factor of both
        (-2, -1) if f12[0] != 0 && f21[0] != 0 => Config::LimitL1EqM12,
        (-2, -1) => Config::M21LLM,
        (-1, -1) if f12[2] == 0 => Config::M12LLM,
        (-1, -1) if f21[2] == 0 => Config::M21LLM,
        (-1, -1) if f12[0] == 0 && f12[1] != 0 => Config::L1MML,
        (-1, -1) if f12[0] != 0 && f12[1] == 0 => Config::L2MML,
        _ => Config::Unclassified,
    }
}

/// Per-point outcome of the consistency sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepPoint {
    pub params: Gl2Params,
    pub classified: Config,
    pub asymptotic: Config,
}

impl SweepPoint {
    pub fn agrees(&self) -> bool {
        self.classified == self.asymptotic
    }
}

/// Base parameters realizing the combos `(2L1, 2L2, 2M12)` with `2l^1_1 = 0`.
pub fn params_from_combos(a: &Q, b: &Q, m: &Q) -> Gl2Params {
    let one = Q::one();
    let l22 = m + &one;
    Gl2Params::rational([a + &one, Q::zero(), l22.clone(), &l22 - b - &one])
}

/// Compares `classify` with the four-factor asymptotics on every point.
pub fn consistency_sweep(points: &[Gl2Params]) -> Result<Vec<SweepPoint>> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|p| {
            let c = classify(&combos(p, 1, 2)).ok_or_else(|| Error::UnsupportedTarget("symbolic parameters".into()))?;
            let r = asymptotics_report(p, AsymMode::FourFactor)?;
            let asymptotic = match r.case {
                CaseLabel::Config(c) => c,
                CaseLabel::SingleFactor { .. } => Config::Unclassified,
            };
            Ok(SweepPoint { params: p.clone(), classified: c.configuration, asymptotic })
        })
        .collect()
}

/// The default sweep grid: `2L1, 2L2` over integers and half-integers in
/// `[-1, 3]`, `2M12` over `[-2, 5]`.
pub fn default_sweep_grid() -> Vec<Gl2Params> {
    let half = |k: i64| Q::new(k.into(), 2.into());
    let ab: Vec<Q> = (-2..=6).map(half).collect();
    let ms: Vec<Q> = (-4..=10).map(half).collect();
    let mut out = Vec::new();
    for a in &ab {
        for b in &ab {
            for m in &ms {
                out.push(params_from_combos(a, b, m));
            }
        }
    }
    out
}

/// Coefficients of `T21^[k] (x^1)^e1 (x^2)^e2` on `(x^1)^(e1+1) (x^2)^e2` and
/// `(x^1)^e1 (x^2)^(e2+1)`, for `k = 1, 2`.
pub fn lowering_action(p: &Gl2Params, e1: &AffineForm, e2: &AffineForm) -> Result<[[ParamPoly; 2]; 2]> {
    let t = p.monodromy(1, 2)?;
    let x = [VarId::site(1), VarId::site(2)];
    let f = PowerFn::new(vec![(FnPoly::var(x[0]), e1.clone()), (FnPoly::var(x[1]), e2.clone())]);
    let mut out: [[ParamPoly; 2]; 2] = Default::default();
    for k in 1..=2 {
        let r = f.apply(t.expansion(k).at(2, 1));
        let mut shifts: BTreeMap<[i64; 2], ParamPoly> = BTreeMap::new();
        for ((ks, m), c) in r.terms() {
            let s = [ks[0] + m.exponent(&x[0]) as i64, ks[1] + m.exponent(&x[1]) as i64];
            let e = shifts.entry(s).or_insert_with(ParamPoly::zero);
            *e += c;
        }
        shifts.retain(|_, c| !c.is_zero());
        for (s, c) in shifts {
            let slot = match s {
                [1, 0] => 0,
                [0, 1] => 1,
                _ => return Err(Error::UnsupportedTarget(format!("unexpected shift {s:?}"))),
            };
            out[k as usize - 1][slot] = c;
        }
    }
    Ok(out)
}

/// Determinant of the lowering coefficient matrix; it vanishes exactly when
/// `A T21^[1] + B T21^[2]` annihilates the monomial for some `(A, B) != 0`.
pub fn lowering_determinant(p: &Gl2Params, e1: &AffineForm, e2: &AffineForm) -> Result<ParamPoly> {
    let [[a1, a2], [b1, b2]] = lowering_action(p, e1, e2)?;
    Ok(&(&a1 * &b2) - &(&a2 * &b1))
}

/// `(2L1 - m1)(2L2 - m2)(2M21 - m1 - m2)`.
pub fn triple_product(p: &Gl2Params, e1: &AffineForm, e2: &AffineForm) -> ParamPoly {
    let c = combos(p, 1, 2);
    let f = |a: &AffineForm| ParamPoly::from_affine(a);
    &(&f(&(&c.two_l1 - e1)) * &f(&(&c.two_l2 - e2))) * &f(&(&(&c.two_m21 - e1) - e2))
}

/// A nonzero `(A, B)` with `A T21^[1] m + B T21^[2] m = 0` for the monomial
/// `m = (x^1)^m1 (x^2)^m2`, if one exists.
pub fn degeneracy_witness(p: &Gl2Params, m1: u32, m2: u32) -> Result<Option<(Q, Q)>> {
    let a = p.assignment().ok_or_else(|| Error::UnsupportedTarget("witness needs rational parameters".into()))?;
    let rows = lowering_action(p, &AffineForm::int(m1 as i64), &AffineForm::int(m2 as i64))?;
    let v: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.eval(&a).expect("rational parameters")).collect())
        .collect();
    let det = &v[0][0] * &v[1][1] - &v[0][1] * &v[1][0];
    if !det.is_zero() {
        return Ok(None);
    }
    for k in 0..2 {
        if !v[1][k].is_zero() || !v[0][k].is_zero() {
            return Ok(Some((v[1][k].clone(), -v[0][k].clone())));
        }
    }
    Ok(Some((Q::one(), Q::zero())))
}

/// `psi_0 = (x^1 - x^2)^(2M12 + 1)`.
pub fn psi0(p: &Gl2Params) -> PowerFn {
    let c = combos(p, 1, 2);
    let base = &FnPoly::var(VarId::site(1)) - &FnPoly::var(VarId::site(2));
    PowerFn::new(vec![(base, &c.two_m12 + &AffineForm::int(1))])
}

/// Checks `T12^[1] psi_0 = T12^[2] psi_0 = 0` and returns the weights.
pub fn psi0_weights(p: &Gl2Params) -> Result<Vec<ParamPoly>> {
    let t = p.monodromy(1, 2)?;
    let v = psi0(p);
    for k in 1..=2 {
        if !v.apply(t.expansion(k).at(1, 2)).is_zero() {
            return Err(Error::NotHighestWeight { a: 1, b: 2, power: 2 - k, residual: "psi_0".into() });
        }
    }
    check_hw(t.product(), &v)
}

/// `psi_- = (x^1)^(2L1) (x^2)^(2L2)` for nonnegative integer `2L1, 2L2`.
pub fn psi_minus(p: &Gl2Params) -> Option<FnPoly> {
    let c = combos(p, 1, 2);
    let e1 = nonnegative_integer(c.two_l1.as_constant()?)?;
    let e2 = nonnegative_integer(c.two_l2.as_constant()?)?;
    let m = Monomial::from_exponents([(VarId::site(1), e1 as u32), (VarId::site(2), e2 as u32)]);
    Some(FnPoly::monomial(m, ParamPoly::one()))
}

/// Whether `T21(u)` annihilates `psi_-` at these rational parameters.
pub fn psi_minus_is_lowest(p: &Gl2Params) -> Result<bool> {
    let v = psi_minus(p).ok_or_else(|| Error::UnsupportedTarget("2L1, 2L2 must be nonnegative integers".into()))?;
    let a = p.assignment().ok_or_else(|| Error::UnsupportedTarget("rational parameters".into()))?;
    let t = p.monodromy(1, 2)?;
    Ok(t.product().at(2, 1).substitute_params(&a).apply(&v).is_zero())
}
