use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use yangeval::gl2::*;
use yangeval::hwfun::{beta_sequence_s12_i, ParamArray};
use yangeval::symbolics::laurent::fact_q;
use yangeval::symbolics::rational::{q, qf, sign_pow};
use yangeval::symbolics::{AffineForm, GammaProduct, GammaValue, Param, ParamPoly, Q};

fn rat(v: [i64; 4]) -> Gl2Params {
    Gl2Params::rational(v.map(q))
}

fn from_combos(a: i64, b: i64, m: i64) -> Gl2Params {
    params_from_combos(&q(a), &q(b), &q(m))
}

fn values(p: &Gl2Params) -> [Q; 4] {
    combos(p, 1, 2).values().unwrap()
}

fn leading(r: &AsymptoticsReport, name: &str) -> (i64, Q) {
    let c = r.components.iter().find(|c| c.name == name).unwrap();
    (c.leading.order, c.leading.coefficient.as_rational().unwrap().clone())
}

fn fq(m: i64) -> Q {
    fact_q(m)
}

#[test]
fn combos_follow_the_defining_differences() {
    assert_eq!(values(&rat([3, 0, 2, -2])), [q(2), q(3), q(1), q(4)]);
    assert_eq!(values(&rat([5, 5, 5, 5])), [q(-1), q(-1), q(-1), q(-1)]);
    let c = combos(&Gl2Params::symbolic(2), 1, 2);
    assert_eq!(&c.two_l1 + &c.two_l2, &c.two_m12 + &c.two_m21);
    let l = |i, a| AffineForm::param(Param::ell(i, a));
    assert_eq!(c.two_m12, &(&l(2, 2) - &l(1, 1)) - &AffineForm::int(1));
}

#[test]
fn combos_transform_under_permutations() {
    let p = Gl2Params::symbolic(2);
    let c = combos(&p, 1, 2);
    let one = AffineForm::int(1);
    let s1 = combos(&p.sigma12_1(), 1, 2);
    assert_eq!((s1.two_m12.clone(), s1.two_l2.clone()), (c.two_l2.clone(), c.two_m12.clone()));
    assert_eq!((s1.two_m21.clone(), s1.two_l1.clone()), (c.two_l1.clone(), c.two_m21.clone()));
    let s2 = combos(&p.sigma12_2(), 1, 2);
    assert_eq!((s2.two_m12.clone(), s2.two_l1.clone()), (c.two_l1.clone(), c.two_m12.clone()));
    assert_eq!((s2.two_m21.clone(), s2.two_l2.clone()), (c.two_l2.clone(), c.two_m21.clone()));
    let s = combos(&p.sigma1(), 1, 2);
    assert_eq!(&s.two_m12 + &one, -(&c.two_m12 + &one));
    assert_eq!(s.two_m21, c.two_m21);
    assert_eq!(s.two_l1, &(&c.two_l1 - &c.two_m12) - &one);
    assert_eq!(s.two_l2, &(&c.two_l2 - &c.two_m12) - &one);
    let t = combos(&p.sigma_tilde(), 1, 2);
    assert_eq!(t.two_m21, c.two_m12);
    assert_eq!(&t.two_m12 + &one, -(&c.two_m21 + &one));
    assert_eq!(t.two_l1, &(&c.two_m12 - &c.two_l1) - &one);
    assert_eq!(t.two_l2, &(&c.two_m12 - &c.two_l2) - &one);
}

#[test]
fn classification_of_the_enumerated_cases() {
    use Verdict::*;
    let r = classify(&combos(&rat([3, 0, 2, -2]), 1, 2)).unwrap();
    assert_eq!((r.configuration, r.on_constant, r.on_psi0), (Config::M12LLM, FiniteReducible, FiniteIrreducible));
    // (2L1, 2L2, 2M12, 2M21) = (1, 4, 2, 3)
    let r = classify(&combos(&from_combos(1, 4, 2), 1, 2)).unwrap();
    assert_eq!((r.configuration, r.on_constant, r.on_psi0), (Config::L1MML, FiniteIrreducible, InfiniteDegenerate));
    let r = classify(&combos(&Gl2Params::rational([qf(1, 2), q(0), qf(1, 3), qf(1, 7)]), 1, 2)).unwrap();
    assert_eq!((r.configuration, r.on_constant, r.on_psi0), (Config::Generic, InfiniteHw, InfiniteHw));
    let r = classify(&combos(&from_combos(3, 1, 3), 1, 2)).unwrap();
    assert_eq!((r.configuration, r.on_constant, r.on_psi0), (Config::LimitL1EqM12, FiniteIrreducible, InfiniteDegenerate));
    let r = classify(&combos(&from_combos(2, 2, 2), 1, 2)).unwrap();
    assert_eq!((r.configuration, r.on_constant, r.on_psi0), (Config::LimitAllEqual, FiniteIrreducible, InfiniteHw));
    let r = classify(&combos(&params_from_combos(&q(2), &q(1), &qf(1, 2)), 1, 2)).unwrap();
    assert_eq!(r.configuration, Config::MixedIrreducible);
    let r = classify(&combos(&params_from_combos(&q(2), &qf(1, 2), &q(1)), 1, 2)).unwrap();
    assert_eq!(r.configuration, Config::Unclassified);
    assert!(classify(&combos(&Gl2Params::symbolic(2), 1, 2)).is_none());
}

#[test]
fn ordering_resolves_ties_toward_limits() {
    let cfg = |a, b, m| ordering(&values(&from_combos(a, b, m)));
    assert_eq!(cfg(2, 4, 2), Config::M12LLM);
    assert_eq!(cfg(4, 2, 2), Config::M12LLM);
    assert_eq!(cfg(1, 3, 3), Config::M21LLM);
    assert_eq!(cfg(3, 1, 3), Config::LimitL1EqM12);
    assert_eq!(cfg(1, 5, 3), Config::L1MML);
    assert_eq!(cfg(5, 1, 3), Config::L2MML);
    assert_eq!(cfg(2, 2, 5), Config::M21LLM);
}

fn l(i: u32, a: u32) -> AffineForm {
    AffineForm::param(Param::ell(i, a))
}

#[test]
fn raw_and_combo_coefficients_agree() {
    let p = Gl2Params::symbolic(2);
    let c = combos(&p, 1, 2);
    for w in [Which::Pi1, Which::Pi2, Which::Pi] {
        assert_eq!(perm_coeff(&p, 1, 2, w).canonical(), perm_coeff_combo(&c, w).canonical(), "{w:?}");
    }
    // pi = pi_2(sigma12_1) pi_1
    let s = p.sigma12_1();
    let prod = &perm_coeff(&s, 1, 2, Which::Pi2) * &perm_coeff(&p, 1, 2, Which::Pi1);
    assert_eq!(prod.canonical(), perm_coeff(&p, 1, 2, Which::Pi).canonical());
    // pi_2(sigma12_1) = B(2L2 - 2M21, -2L2)
    let e = GammaProduct::beta(&(&c.two_l2 - &c.two_m21), &-&c.two_l2);
    assert_eq!(perm_coeff(&s, 1, 2, Which::Pi2).canonical(), e.canonical());
    // B(2L2 - 2M12, -2L2) is pi_1 of the permuted array instead
    let f = GammaProduct::beta(&(&c.two_l2 - &c.two_m12), &-&c.two_l2);
    assert_eq!(perm_coeff(&s, 1, 2, Which::Pi1).canonical(), f.canonical());
    assert_ne!(perm_coeff(&s, 1, 2, Which::Pi2).canonical(), f.canonical());
}

#[test]
fn raw_coefficients_match_the_beta_sequences() {
    let a = ParamArray::standard(2);
    let p = Gl2Params::symbolic(2);
    let r1 = beta_sequence_s12_i(1, &a).unwrap();
    assert_eq!(r1.coefficient().canonical(), perm_coeff(&p, 1, 2, Which::Pi1).canonical());
    let r2 = beta_sequence_s12_i(2, &a).unwrap();
    assert_eq!(r2.coefficient().canonical(), perm_coeff(&p, 1, 2, Which::Pi2).canonical());
    let after = r1.last().array.clone();
    let r3 = beta_sequence_s12_i(2, &after).unwrap();
    let full = r1.coefficient() * r3.coefficient();
    assert_eq!(full.canonical(), perm_coeff(&p, 1, 2, Which::Pi).canonical());
}

#[test]
fn pi1_at_integer_arguments() {
    // (2l^2_1 - 2l^1_1, 2l^1_1 - 2l^2_2 + 1) = (3, 2)
    let p = rat([0, 0, -1, 3]);
    let v = perm_coeff(&p, 1, 2, Which::Pi1).eval(&BTreeMap::new()).unwrap();
    assert_eq!(v, GammaValue::rational(qf(1, 12)));
}

#[test]
fn equal_factors_shifted_by_u() {
    // pi(2l, 2l + u) = Gamma(u)^2 Gamma(-2L1 - u) / Gamma(-2L1 + u)
    let p = Gl2Params::symbolic(2);
    let u = AffineForm::param(Param::u());
    let shifted = Gl2Params::new(vec![p.factors[0].clone(), Gl2Params::shifted(&p.factors[0], &u)]).unwrap();
    let c = combos(&p, 1, 2);
    let e = GammaProduct::gamma_pow(u.clone(), 2)
        .mul_gamma(&(&-&c.two_l1 - &u), 1)
        .mul_gamma(&(&-&c.two_l1 + &u), -1);
    assert_eq!(perm_coeff(&shifted, 1, 2, Which::Pi).canonical(), e.canonical());
    let printed = GammaProduct::gamma_pow(u.clone(), 2)
        .mul_gamma(&(&c.two_l1 - &u), 1)
        .mul_gamma(&(&c.two_l1 + &u), -1);
    assert_ne!(perm_coeff(&shifted, 1, 2, Which::Pi).canonical(), printed.canonical());
}

#[test]
fn shift_all_sign_flip() {
    let r = asymptotics_report(&params_from_combos(&qf(1, 2), &q(0), &q(0)), AsymMode::ShiftAll).unwrap();
    assert_eq!((r.leading.order, r.leading.coefficient.clone()), (-2, GammaValue::rational(q(1))));
    assert_eq!(r.case, CaseLabel::SingleFactor { finite: false });
    let r = asymptotics_report(&from_combos(3, 0, 0), AsymMode::ShiftAll).unwrap();
    assert_eq!((r.leading.order, r.leading.coefficient.clone()), (-2, GammaValue::rational(q(-1))));
    assert_eq!(r.case, CaseLabel::SingleFactor { finite: true });
    let r = asymptotics_report(&Gl2Params::rational([q(3), q(0), q(0), q(0)]), AsymMode::ShiftAll).unwrap();
    assert_eq!((r.leading.order, r.leading.coefficient), (-2, GammaValue::rational(q(-1))));
}

/// `pi^12(u)` leading coefficient in closed form, all combos integer.
fn pi12_expected(a: i64, b: i64, m: i64) -> (i64, Q) {
    let mp = a + b - m;
    match () {
        _ if m < 0 => (-1, sign_pow(m) * fq(-m - 1) * fq(mp) / (fq(a - m) * fq(b - m))),
        _ if m < a && m < b => (-2, -fq(mp) / (fq(a - m) * fq(b - m) * fq(m))),
        _ if a < m && m < b => (-1, sign_pow(a + m + 1) * fq(m - a - 1) * fq(mp) / (fq(b - m) * fq(m))),
        _ if b < m && m < a => (-1, sign_pow(b + m + 1) * fq(m - b - 1) * fq(mp) / (fq(a - m) * fq(m))),
        _ => (0, sign_pow(a + b + 1) * fq(m - a - 1) * fq(m - b - 1) * fq(mp) / fq(m)),
    }
}

#[test]
fn second_factor_cases() {
    let cases = [
        ((2, 3, 1), Config::M12LLM, -2, -1),
        ((1, 4, 2), Config::L1MML, -1, 1),
        ((4, 1, 2), Config::L2MML, -1, 1),
        ((2, 3, 5), Config::M21LLM, 0, 1),
    ];
    for ((a, b, m), cfg, order, _) in cases {
        let r = asymptotics_report(&from_combos(a, b, m), AsymMode::ShiftSecond).unwrap();
        assert_eq!(r.case, CaseLabel::Config(cfg), "{a} {b} {m}");
        assert_eq!(leading(&r, "pi12"), pi12_expected(a, b, m));
        assert_eq!(r.leading.order, order);
    }
    // the sign of the middle cases is (-1)^(2L1 + 2M12 + 1) in L1MML
    let r = asymptotics_report(&from_combos(1, 5, 3), AsymMode::ShiftSecond).unwrap();
    assert_eq!(leading(&r, "pi12").1.is_positive(), (1 + 3 + 1) % 2 == 0);
    assert_eq!(leading(&r, "pi12").1, pi12_expected(1, 5, 3).1);
    // negative 2M12 in M12LLM gives a simple pole, not u^-3
    let r = asymptotics_report(&from_combos(2, 1, -2), AsymMode::ShiftSecond).unwrap();
    assert_eq!(leading(&r, "pi12"), pi12_expected(2, 1, -2));
    assert_eq!(r.leading.order, -1);
    assert_eq!(r.case, CaseLabel::Config(Config::M12LLM));
    // ties with a vanishing M12 - L difference keep the double pole
    for (a, b, m) in [(2, 4, 2), (4, 2, 2)] {
        let r = asymptotics_report(&from_combos(a, b, m), AsymMode::ShiftSecond).unwrap();
        assert_eq!(r.leading.order, -2);
        assert!(r.leading.coefficient.sign() < 0);
    }
}

#[test]
fn fourth_order_leading_terms() {
    // L1 < MM < L2
    let (a, b, m) = (0, 4, 2);
    let mp = a + b - m;
    let r = asymptotics_report(&from_combos(a, b, m), AsymMode::FourFactor).unwrap();
    assert_eq!(r.case, CaseLabel::Config(Config::L1MML));
    let e21 = fq(b - m - 1) * sign_pow(b - m - 1) * fq(m) / (fq(m - a) * fq(mp));
    assert_eq!(leading(&r, "pi21"), (-1, e21));
    let e12 = fq(m - a - 1) * sign_pow(m - a - 1) * fq(mp) / (fq(b - m) * fq(m));
    assert_eq!(leading(&r, "pi12"), (-1, e12));
    // M12 < LL < M21
    let (a, b, m) = (3, 2, 1);
    let mp = a + b - m;
    let r = asymptotics_report(&from_combos(a, b, m), AsymMode::FourFactor).unwrap();
    assert_eq!(r.case, CaseLabel::Config(Config::M12LLM));
    let e21 = fq(b - m - 1) * fq(a - m - 1) * sign_pow(a + b + 1) * fq(m) / fq(mp);
    assert_eq!(leading(&r, "pi21"), (0, e21));
    assert_eq!(leading(&r, "pi12"), (-2, -fq(mp) / (fq(a - m) * fq(b - m) * fq(m))));
    // 2L1 = 2M12, 2L2 = 2M21 < 2M12
    let (a, b, m) = (4, 1, 4);
    let r = asymptotics_report(&from_combos(a, b, m), AsymMode::FourFactor).unwrap();
    assert_eq!(r.case, CaseLabel::Config(Config::LimitL1EqM12));
    let binom = fq(m) / (fq(m - b) * fq(b));
    assert_eq!(leading(&r, "pi21"), (-2, -binom));
    assert_eq!(leading(&r, "pi12"), (-1, fq(m - b - 1) * sign_pow(m - b - 1) * fq(b) / fq(m)));
    // all equal
    let r = asymptotics_report(&from_combos(2, 2, 2), AsymMode::FourFactor).unwrap();
    assert_eq!(r.case, CaseLabel::Config(Config::LimitAllEqual));
    assert_eq!(leading(&r, "pi21"), (-2, q(-1)));
    assert_eq!(leading(&r, "pi12"), (-2, q(-1)));
    assert_eq!(r.leading.order, -8);
}

#[test]
fn generic_fourth_order_is_u_minus_four() {
    let p = Gl2Params::rational([qf(7, 3), q(0), qf(5, 4), qf(-1, 5)]);
    let r = asymptotics_report(&p, AsymMode::FourFactor).unwrap();
    assert_eq!(r.leading.order, -4);
    assert_eq!(r.case, CaseLabel::Config(Config::Generic));
    let p = params_from_combos(&q(1), &q(2), &qf(1, 2));
    let r = asymptotics_report(&p, AsymMode::FourFactor).unwrap();
    let ord = |n: &str| r.components.iter().find(|c| c.name == n).unwrap().leading.order;
    assert_eq!((ord("pi21"), ord("pi12")), (0, 0));
    assert_eq!(r.case, CaseLabel::Config(Config::MixedIrreducible));
}

#[test]
fn asymptotics_reject_bad_input() {
    assert!(asymptotics_report(&Gl2Params::symbolic(2), AsymMode::FourFactor).is_err());
    assert!(asymptotics_report(&Gl2Params::symbolic(4), AsymMode::FourFactor).is_err());
}

#[test]
fn pi_1234_factorizes() {
    let p = Gl2Params::symbolic(4);
    let g = pi_1234(&p).unwrap();
    let e = &(&perm_coeff(&p, 2, 3, Which::Pi) * &perm_coeff(&p, 1, 3, Which::Pi))
        * &(&perm_coeff(&p, 2, 4, Which::Pi) * &perm_coeff(&p, 1, 4, Which::Pi));
    assert_eq!(g.canonical(), e.canonical());
    assert!(pi_1234(&Gl2Params::symbolic(2)).is_err());
}

#[test]
fn consistency_sweep_agrees_everywhere() {
    let grid = default_sweep_grid();
    assert!(grid.len() >= 200);
    let pts = consistency_sweep(&grid).unwrap();
    let bad: Vec<_> = pts.iter().filter(|p| !p.agrees()).collect();
    assert!(bad.is_empty(), "{} mismatches, first {:?}", bad.len(), bad.first());
    let mut seen = std::collections::BTreeSet::new();
    for p in &pts {
        seen.insert(p.classified);
    }
    assert!(seen.len() >= 8, "{seen:?}");
}

#[test]
fn lowering_determinant_factorizes() {
    let p = Gl2Params::symbolic(2);
    let (t1, t2) = (AffineForm::param(Param::aux(1)), AffineForm::param(Param::aux(2)));
    let det = lowering_determinant(&p, &t1, &t2).unwrap();
    let tri = triple_product(&p, &t1, &t2);
    assert!(!tri.is_zero());
    assert!((&det + &tri).is_zero() || (&det - &tri).is_zero(), "{det:?}");
}

#[test]
fn degeneracy_locus_is_the_triple_product() {
    let sets = [
        rat([3, 0, 2, -2]),
        from_combos(2, 3, 1),
        from_combos(0, 0, 0),
        from_combos(4, 1, 4),
        Gl2Params::rational([qf(1, 2), q(0), qf(1, 3), qf(1, 7)]),
        params_from_combos(&qf(3, 2), &qf(5, 2), &q(1)),
    ];
    for p in &sets {
        let a = p.assignment().unwrap();
        for m1 in 0..=6u32 {
            for m2 in 0..=6u32 {
                let (e1, e2) = (AffineForm::int(m1 as i64), AffineForm::int(m2 as i64));
                let tri = triple_product(p, &e1, &e2).eval(&a).unwrap();
                let w = degeneracy_witness(p, m1, m2).unwrap();
                assert_eq!(w.is_some(), tri.is_zero(), "{p} {m1} {m2}");
                if let Some((x, y)) = w {
                    assert!(!(x.is_zero() && y.is_zero()));
                    let rows = lowering_action(p, &e1, &e2).unwrap();
                    for k in 0..2 {
                        let s = &x * rows[0][k].eval(&a).unwrap() + &y * rows[1][k].eval(&a).unwrap();
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn witnesses_at_the_named_monomials() {
    // 2L1 = 2
    let p = from_combos(2, 3, 1);
    assert!(degeneracy_witness(&p, 2, 5).unwrap().is_some());
    // m1 + m2 = 2M21 = 4
    assert!(degeneracy_witness(&p, 1, 3).unwrap().is_some());
    let g = Gl2Params::rational([qf(1, 2), q(0), qf(1, 3), qf(1, 7)]);
    for m1 in 0..4 {
        for m2 in 0..4 {
            assert!(degeneracy_witness(&g, m1, m2).unwrap().is_none());
        }
    }
}

#[test]
fn psi0_is_a_highest_weight_vector() {
    let p = Gl2Params::symbolic(2);
    let w = psi0_weights(&p).unwrap();
    let u = ParamPoly::var(Param::u());
    let f = |i, a, s: i64| &u - &ParamPoly::from_affine(&(&l(i, a) + &AffineForm::int(s)));
    assert_eq!(w[0], &f(2, 2, 2) * &f(2, 1, 2));
    assert_eq!(w[1], &f(1, 2, 1) * &f(1, 1, 1));
}

#[test]
fn psi_minus_is_a_lowest_weight_vector() {
    let mut n = 0;
    for a in 0..4 {
        for b in 0..3 {
            for m in [-1, 1, 2] {
                let p = from_combos(a, b, m);
                assert!(psi_minus_is_lowest(&p).unwrap(), "{a} {b} {m}");
                n += 1;
            }
        }
    }
    assert!(n >= 10);
    assert!(psi_minus(&params_from_combos(&qf(1, 2), &q(1), &q(0))).is_none());
}

#[test]
fn sweep_grid_point_count() {
    let g = default_sweep_grid();
    assert_eq!(g.len(), 9 * 9 * 15);
    assert!(g.iter().all(|p| p.assignment().unwrap()[&Param::ell(1, 1)] == Q::zero() && p.order() == 2));
}

/// `u^-order pi^12(u)` evaluated in floating point close to `u = 0`.
fn pi12_numeric(a: f64, b: f64, m: f64, order: i32, u: f64) -> f64 {
    // 2l^1_1 = 0, 2l^1_2 = a + 1, 2l^2_2 = m + 1, 2l^2_1 = m - b, second factor shifted by u
    let (f1, f0) = (0.0, a + 1.0);
    let (g0, g1) = (m + 1.0 + u, m - b + u);
    let g = libm::tgamma;
    let v = g(g0 - f0) * g(g1 - f1) * g(f1 - g0 + 1.0) / g(g1 - f0 + 1.0);
    v * u.powi(-order)
}

#[test]
fn leading_terms_match_floating_point_gamma() {
    for a in 0..4 {
        for b in 0..4 {
            for m in -2..7 {
                let r = asymptotics_report(&from_combos(a, b, m), AsymMode::ShiftSecond).unwrap();
                let (order, c) = leading(&r, "pi12");
                let exact = c.to_f64().unwrap();
                let num = pi12_numeric(a as f64, b as f64, m as f64, order as i32, 1e-7);
                assert!((num - exact).abs() <= 1e-4 * exact.abs().max(1.0), "{a} {b} {m}: {num} vs {exact}");
                if m != a && m != b && a + b >= m {
                    assert_eq!((order, c), pi12_expected(a, b, m), "{a} {b} {m}");
                }
            }
        }
    }
}

/// `pi(f, g + u)` for factor pairs `(2l_2, 2l_1)` in floating point.
fn pi_numeric(f: [f64; 2], g: [f64; 2], u: f64) -> f64 {
    let gm = libm::tgamma;
    let (g0, g1) = (g[0] + u, g[1] + u);
    gm(g0 - f[0]) * gm(g1 - f[1]) * gm(f[1] - g0 + 1.0) / gm(g1 - f[0] + 1.0)
}

#[test]
fn four_factor_components_match_floating_point_gamma() {
    let u = 1e-7;
    for a in 0..4 {
        for b in 0..4 {
            for m in -1..7 {
                let p = from_combos(a, b, m);
                let r = asymptotics_report(&p, AsymMode::FourFactor).unwrap();
                let x = p.assignment().unwrap();
                let f = |i: u32| [x[&Param::ell(i, 2)].to_f64().unwrap(), x[&Param::ell(i, 1)].to_f64().unwrap()];
                for (name, i, j) in [("pi21", 2, 1), ("pi11", 1, 1), ("pi22", 2, 2), ("pi12", 1, 2)] {
                    let (order, c) = leading(&r, name);
                    let exact = c.to_f64().unwrap();
                    let num = pi_numeric(f(i), f(j), u) * u.powi(-(order as i32));
                    assert!((num - exact).abs() <= 1e-4 * exact.abs().max(1.0), "{name} {a} {b} {m}: {num} vs {exact}");
                }
            }
        }
    }
}
