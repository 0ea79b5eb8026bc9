//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use yangeval::gl2::*;
use yangeval::hwfun::*;
use yangeval::intertwiners::*;
use yangeval::lmatrix::*;
use yangeval::symbolics::laurent::fact_q;
use yangeval::symbolics::rational::{q, qf, sign_pow};
use yangeval::symbolics::{AffineForm, GammaProduct, GammaSum, GammaValue, Param, ParamPoly, Q};
use yangeval::weyl::{monomial_basis, FnPoly, Monomial, PowerFn, VarId, WeylOp};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ell(site: u32, a: u32) -> AffineForm {
    AffineForm::param(Param::ell(site, a))
}

fn u() -> ParamPoly {
    ParamPoly::var(Param::u())
}

fn lin(a: &AffineForm) -> ParamPoly {
    ParamPoly::from_affine(a)
}

fn s(p: ParamPoly) -> WeylOp {
    WeylOp::scalar(p)
}

fn same(a: &GammaProduct, b: &GammaProduct) -> bool {
    (&GammaSum::from_product(a) - &GammaSum::from_product(b)).is_zero()
}

fn l12(site: u16) -> LMatrix {
    biedenharn_l(2, &site_params(2, site), site).unwrap()
}

fn mono2() -> Monodromy {
    Monodromy::new(2, vec![(l12(1), AffineForm::int(0)), (l12(2), AffineForm::int(0))]).unwrap()
}

fn yang_baxter() -> Check {
    for n in 2..=3 {
        for plus in [false, true] {
            let l = js_l(n, plus, 1).map_err(|e| e.to_string())?;
            ensure!(rll_defect(&l).is_none(), "fundamental RLL fails for JS n={n}");
        }
    }
    for n in 2..=3 {
        let l1 = restricted_l(n, &ell(1, 1), 1).unwrap();
        let l2 = restricted_l(n, &ell(2, 1), 2).unwrap();
        let t = Instant::now();
        let ok = verify_rll(&l1, &l2, Relation::RllVPlusU, 3, &AffineForm::default()).map_err(|e| e.to_string())?;
        let took = t.elapsed();
        ensure!(ok.pass, "RLL(v+u) fails at n={n}: {:?}", ok.first_mismatch);
        ensure!(took < Duration::from_secs(60), "RLL(v+u) n={n} d=3 took {took:?}");
        for off in [-1, 1] {
            let bad = verify_rll(&l1, &l2, Relation::RllVPlusU, 3, &AffineForm::int(off)).map_err(|e| e.to_string())?;
            ensure!(!bad.pass, "RLL(v+u) passes with argument offset {off} at n={n}");
        }
    }
    Ok(())
}

fn quantum_determinant() -> Check {
    let two_l = ell(1, 1);
    let l = restricted_l_gl2(&two_l, 1);
    let uminus = &u() - &lin(&two_l);
    ensure!(
        qdet(&l).unwrap() == s(&(&uminus - &ParamPoly::int(2)) * &(&u() - &ParamPoly::int(1))),
        "restricted JS qdet"
    );
    let two = ParamPoly::int(2);
    let expect = &(&(&u() - &lin(&ell(1, 1))) - &two) * &(&(&u() - &lin(&ell(1, 2))) - &two);
    ensure!(qdet(&l12(1)).unwrap() == s(expect), "Biedenharn n=2 qdet");
    let t = mono2();
    ensure!(qdet(t.product()).unwrap() == &qdet(&l12(1)).unwrap() * &qdet(&l12(2)).unwrap(), "qdet multiplicativity");
    // qdet returns an error when the two orderings disagree
    for n in 2..=3 {
        for l in [js_l(n, false, 1).unwrap(), restricted_l(n, &ell(1, 1), 1).unwrap(), biedenharn_l(n, &site_params(n, 1), 1).unwrap()] {
            qdet(&l).map_err(|e| format!("n={n}: {e}"))?;
        }
    }
    Ok(())
}

fn biedenharn() -> Check {
    let (l1, l2) = (ell(1, 1), ell(1, 2));
    let l = l12(1);
    let x = WeylOp::x(VarId::site(1));
    let e = WeylOp::euler(VarId::site(1));
    let two_l = &(&l2 - &l1) - &AffineForm::int(1);
    ensure!(l.at(1, 1) == &(&s(&(&u() - &ParamPoly::int(2)) - &lin(&l1)) - &e), "entry 11");
    ensure!(l.at(1, 2) == &-WeylOp::d(VarId::site(1)), "entry 12");
    ensure!(l.at(2, 1) == &-(&x * &(&s(lin(&two_l)) - &e)), "entry 21");
    ensure!(l.at(2, 2) == &(&s(&(&u() - &lin(&l2)) - &ParamPoly::int(1)) + &e), "entry 22");
    for n in 2..=3 {
        let f = biedenharn_factors(n, &site_params(n, 1), 1).unwrap();
        let prod = f[1..].iter().fold(f[0].clone(), |acc, g| acc.mul(g).unwrap());
        let at0 = prod.u_coeff(0);
        let vars: Vec<VarId> = prod.vars().iter().copied().collect();
        for m in monomial_basis(&vars, 3) {
            for a in 1..=n {
                for b in 1..=n {
                    ensure!(at0.at(a, b).apply_monomial(&m).is_zero(), "constraint at u=0 fails n={n} ({a},{b}) on {m}");
                }
            }
        }
        let p = site_params(n, 1);
        let w = check_hw(&biedenharn_l(n, &p, 1).unwrap(), &PowerFn::new(Vec::new())).map_err(|e| e.to_string())?;
        for a in 1..=n {
            let lam = w[a - 1].coeff_of(&Param::u(), 0);
            let total = &(&lam + &ParamPoly::constant(rho(n, a) + qf(n as i64 + 1, 2))) + &lin(&p[a - 1]);
            ensure!(total.is_zero(), "half-sum relation n={n} a={a}");
        }
    }
    Ok(())
}

fn highest_weight() -> Check {
    let t = mono2();
    ensure!(check_hw(t.product(), &PowerFn::new(Vec::new())).is_ok(), "1 is not highest weight");
    let d = |i: u16| WeylOp::d(VarId::site(i));
    let e = |i: u16| WeylOp::euler(VarId::site(i));
    let c = |a: &AffineForm| s(lin(a));
    ensure!(t.expansion(1).at(1, 2) == &-(&d(1) + &d(2)), "T12^[1]");
    let t12 = &(&(&c(&(&ell(1, 1) + &AffineForm::int(2))) + &e(1)) * &d(2))
        + &(&d(1) * &(&c(&(&ell(2, 2) + &AffineForm::int(1))) - &e(2)));
    ensure!(t.expansion(2).at(1, 2) == &t12, "T12^[2]");
    let p = Gl2Params::symbolic(2);
    psi0_weights(&p).map_err(|e| e.to_string())?;
    let mut count = 0;
    for a in 0..4 {
        for b in 0..3 {
            let m = a - 1;
            let pt = params_from_combos(&q(a), &q(b), &q(m));
            ensure!(psi_minus_is_lowest(&pt).map_err(|e| e.to_string())?, "psi_- at {pt}");
            count += 1;
        }
    }
    ensure!(count >= 10, "only {count} instances");
    Ok(())
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn s12im(i: u32, m1: u32, m2: u32) -> GammaFn {
    let ip = 3 - i;
    let x = |s: u16| FnPoly::var(VarId::site(s));
    let mip = if ip == 1 { m1 } else { m2 };
    let other = if ip == 1 { m2 } else { m1 };
    let one = AffineForm::int(1);
    let mut total = GammaFn::zero();
    for k in 0..=mip {
        let mut poly = (&x(i as u16) - &x(ip as u16)).pow(k);
        poly = &poly * &FnPoly::monomial(Monomial::var(VarId::site(ip as u16), mip - k), ParamPoly::one());
        poly = &poly * &FnPoly::monomial(Monomial::var(VarId::site(i as u16), other), ParamPoly::one());
        let g = GammaProduct::gamma(ell(1, 1) - ell(2, 2) + one.clone())
            .mul_gamma(&(ell(2, i) - ell(1, i) + AffineForm::int(k as i64)), 1)
            .mul_gamma(&(ell(ip, 1) - ell(ip, 2) + one.clone() + AffineForm::int(k as i64)), -1)
            .scale(&q(binom(mip, k)));
        for (m, c) in poly.terms() {
            let mut t = GammaSum::zero();
            t.add_product(&g, c);
            total = total.plus(&GammaFn::monomial(m.clone()).scaled(&t));
        }
    }
    total
}

fn permutation_coefficients() -> Check {
    let p = Gl2Params::symbolic(2);
    let c = combos(&p, 1, 2);
    ensure!(&c.two_l1 + &c.two_l2 == &c.two_m12 + &c.two_m21, "LL = MM");
    for w in [Which::Pi1, Which::Pi2, Which::Pi] {
        ensure!(perm_coeff(&p, 1, 2, w).canonical() == perm_coeff_combo(&c, w).canonical(), "raw vs combo {w:?}");
    }
    let a = ParamArray::standard(2);
    for i in 1..=2u32 {
        let steps = sequence_s12_i(2, i as usize);
        for m1 in 0..=4 {
            for m2 in 0..=4 {
                let m = Monomial::from_exponents([(VarId::site(1), m1), (VarId::site(2), m2)]);
                let (r, _) = sequence_apply(&steps, &a, &GammaFn::monomial(m)).map_err(|e| e.to_string())?;
                let phase = if i == 1 { ell(1, 1) - ell(2, 1) } else { AffineForm::default() };
                let e = s12im(i, m1, m2).with_phase(&phase);
                ensure!(r.phase() == &phase && r.difference(&e).is_none(), "S12_{i} on x^({m1},{m2})");
            }
        }
    }
    Ok(())
}

fn leading(r: &AsymptoticsReport, name: &str) -> (i64, Q) {
    let c = r.components.iter().find(|c| c.name == name).unwrap();
    (c.leading.order, c.leading.coefficient.as_rational().unwrap().clone())
}

fn asymptotics() -> Check {
    let start = Instant::now();
    let f = fact_q;
    let combo = |a: i64, b: i64, m: i64| params_from_combos(&q(a), &q(b), &q(m));
    let r = asymptotics_report(&params_from_combos(&qf(1, 2), &q(0), &q(0)), AsymMode::ShiftAll).map_err(|e| e.to_string())?;
    ensure!(r.leading.order == -2 && r.leading.coefficient == GammaValue::rational(q(1)), "shift-all generic");
    let r = asymptotics_report(&combo(3, 0, 0), AsymMode::ShiftAll).map_err(|e| e.to_string())?;
    ensure!(r.leading.order == -2 && r.leading.coefficient == GammaValue::rational(q(-1)), "shift-all integer");

    // pi^12 in the four configurations, coefficients with their factorial ratios
    let cases = [
        ((2, 3, 1), Config::M12LLM, -2, -f(4) / (f(1) * f(2) * f(1))),
        ((1, 4, 2), Config::L1MML, -1, sign_pow(4) * f(0) * f(3) / (f(2) * f(2))),
        ((4, 1, 2), Config::L2MML, -1, sign_pow(4) * f(0) * f(3) / (f(2) * f(2))),
        ((2, 3, 5), Config::M21LLM, 0, sign_pow(6) * f(2) * f(1) * f(0) / f(5)),
    ];
    for ((a, b, m), cfg, order, coeff) in cases {
        let r = asymptotics_report(&combo(a, b, m), AsymMode::ShiftSecond).map_err(|e| e.to_string())?;
        ensure!(r.case == CaseLabel::Config(cfg), "pi12 label at {a},{b},{m}: {:?}", r.case);
        ensure!(leading(&r, "pi12") == (order, coeff.clone()), "pi12 at {a},{b},{m}: {:?}", leading(&r, "pi12"));
    }

    // final enumeration, four-factor mode
    let ff = |a, b, m| asymptotics_report(&combo(a, b, m), AsymMode::FourFactor).map_err(|e| e.to_string());
    let (a, b, m) = (0i64, 4i64, 2i64);
    let mp = a + b - m;
    let r = ff(a, b, m)?;
    ensure!(r.case == CaseLabel::Config(Config::L1MML), "case 1 label");
    ensure!(leading(&r, "pi21") == (-1, f(b - m - 1) * sign_pow(b - m - 1) * f(m) / (f(m - a) * f(mp))), "case 1 pi21");
    ensure!(leading(&r, "pi12") == (-1, f(m - a - 1) * sign_pow(m - a - 1) * f(mp) / (f(b - m) * f(m))), "case 1 pi12");
    let (a, b, m) = (3i64, 2i64, 1i64);
    let mp = a + b - m;
    let r = ff(a, b, m)?;
    ensure!(r.case == CaseLabel::Config(Config::M12LLM), "case 2 label");
    ensure!(leading(&r, "pi21") == (0, f(b - m - 1) * f(a - m - 1) * sign_pow(a + b + 1) * f(m) / f(mp)), "case 2 pi21");
    ensure!(leading(&r, "pi12") == (-2, -f(mp) / (f(a - m) * f(b - m) * f(m))), "case 2 pi12");
    let (a, b, m) = (4i64, 1i64, 4i64);
    let r = ff(a, b, m)?;
    ensure!(r.case == CaseLabel::Config(Config::LimitL1EqM12), "case 3 label");
    ensure!(leading(&r, "pi21") == (-2, -f(m) / (f(m - b) * f(b))), "case 3 pi21");
    ensure!(leading(&r, "pi12") == (-1, f(m - b - 1) * sign_pow(m - b - 1) * f(b) / f(m)), "case 3 pi12");
    let r = ff(2, 2, 2)?;
    ensure!(r.case == CaseLabel::Config(Config::LimitAllEqual), "case 4 label");
    ensure!(leading(&r, "pi21") == (-2, q(-1)) && leading(&r, "pi12") == (-2, q(-1)), "case 4");

    let grid = default_sweep_grid();
    let pts = consistency_sweep(&grid).map_err(|e| e.to_string())?;
    let bad = pts.iter().filter(|p| !p.agrees()).count();
    ensure!(pts.len() >= 200 && bad == 0, "{bad} of {} sweep points disagree", pts.len());
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(30), "asymptotics suite took {took:?}");
    Ok(())
}

fn beta_sequences() -> Check {
    let b = |x: &AffineForm, y: &AffineForm| GammaProduct::beta(x, y);
    let one = AffineForm::int(1);
    for n in 2..=4 {
        let a0 = ParamArray::standard(n);
        let l1 = |k: usize| ell(1, k as u32);
        for p in 1..n {
            let r = beta_sequence_s12_i1(n, p, &a0).map_err(|e| e.to_string())?;
            let av = ell(2, n as u32);
            let bb = l1(n - p + 1);
            let mut g = b(&(&av - &bb), &(&(&l1(n - p) - &av) + &one));
            for k in 1..n - p {
                g = &g * &b(&(&av - &l1(k + 1)), &(&(&l1(k) - &av) + &one));
                g = &g * &b(&(&l1(k + 1) - &bb), &(&(&l1(k) - &l1(k + 1)) + &one));
            }
            ensure!(same(r.coefficient(), &g), "site-1 closed form n={n} p={p}");
        }
        for i in 1..=n {
            let r = beta_sequence_s12_i(i, &a0).map_err(|e| e.to_string())?;
            ensure!(r.last().is_constant(), "S12_{i} at n={n} does not end in a constant");
            let mut expect = a0.clone();
            expect.blocks[0][n - i] = ell(2, i as u32);
            expect.blocks[1][n - i] = ell(1, i as u32);
            ensure!(r.last().array == expect, "S12_{i} permutation at n={n}");
        }
        let r = beta_sequence_s12_i(n, &a0).map_err(|e| e.to_string())?;
        let av = ell(2, n as u32);
        let mut g = GammaProduct::one();
        for k in 1..n {
            g = &g * &b(&(&av - &l1(k + 1)), &(&(&l1(k) - &av) + &one));
        }
        for k in 1..n - 1 {
            g = &g * &b(&(&l1(k + 1) - &l1(n)), &(&(&l1(k) - &l1(k + 1)) + &one));
        }
        ensure!(same(r.coefficient(), &g), "full swap closed form n={n}");
    }
    Ok(())
}

fn degeneracy() -> Check {
    let p = Gl2Params::symbolic(2);
    let (t1, t2) = (AffineForm::param(Param::aux(1)), AffineForm::param(Param::aux(2)));
    let det = lowering_determinant(&p, &t1, &t2).map_err(|e| e.to_string())?;
    let tri = triple_product(&p, &t1, &t2);
    ensure!((&det + &tri).is_zero() || (&det - &tri).is_zero(), "symbolic determinant {det}");
    let sets = [
        Gl2Params::rational([q(3), q(0), q(2), q(-2)]),
        params_from_combos(&q(2), &q(3), &q(1)),
        params_from_combos(&q(4), &q(1), &q(4)),
        params_from_combos(&q(0), &q(0), &q(0)),
        Gl2Params::rational([qf(1, 2), q(0), qf(1, 3), qf(1, 7)]),
    ];
    for pt in &sets {
        let a: BTreeMap<Param, Q> = pt.assignment().unwrap();
        for m1 in 0..=6u32 {
            for m2 in 0..=6u32 {
                let zero = triple_product(pt, &AffineForm::int(m1 as i64), &AffineForm::int(m2 as i64)).eval(&a).unwrap() == q(0);
                let w = degeneracy_witness(pt, m1, m2).map_err(|e| e.to_string())?;
                ensure!(w.is_some() == zero, "witness mismatch at {pt}, ({m1},{m2})");
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("Yang-Baxter suite", yang_baxter),
        ("quantum determinant suite", quantum_determinant),
        ("Biedenharn suite", biedenharn),
        ("highest-weight suite", highest_weight),
        ("permutation-coefficient suite", permutation_coefficients),
        ("asymptotics suite", asymptotics),
        ("beta-sequence suite", beta_sequences),
        ("degeneracy suite", degeneracy),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("criterion {}: {name}: PASS ({secs:.1} s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({secs:.1} s): {e}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
