use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use yangeval::gl2::{self, AsymMode, CaseLabel, Gl2Params, Which};
use yangeval::hwfun::{self, DetFactor, HWFunction, ParamArray, SequenceResult, Step};
use yangeval::intertwiners::{self, permuted, Relation};
use yangeval::lmatrix::{self, Monodromy};
use yangeval::symbolics::rational::{fmt_q, parse_q};
use yangeval::symbolics::{AffineForm, GammaProduct, GammaSum, Param, Q};
use yangeval::weyl::PowerFn;
use yangeval::Error;

use crate::args::*;

/// Why a command did not produce a passing document.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonUnitResidual(_)
            | Error::NotBetaAdmissible(_)
            | Error::NotHighestWeight { .. }
            | Error::CentralityFailure
            | Error::NotEigenvector(_)
            | Error::NotDivisible(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Command payload before it is wrapped into a document.
pub struct Outcome {
    pub command: String,
    pub job: Map<String, Value>,
    pub result: Value,
    pub pass: bool,
}

type Run = Result<Outcome, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Parameter values as typed: exact rationals or symbol names, never floats.
struct Symbols {
    names: BTreeMap<String, Param>,
}

impl Symbols {
    fn new() -> Self {
        Symbols { names: BTreeMap::new() }
    }

    /// A symbol takes the parameter of the slot where it first appears.
    fn value(&mut self, token: &str, slot: Param) -> Result<AffineForm, Failure> {
        let t = token.trim();
        if let Some(v) = parse_q(t) {
            return Ok(AffineForm::constant(v));
        }
        let ident = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident {
            return usage(format!("'{t}' is neither an exact rational nor a symbol name (floats are rejected)"));
        }
        let p = self.names.entry(t.to_string()).or_insert(slot);
        Ok(AffineForm::param(p.clone()))
    }

    fn to_json(&self) -> Value {
        Value::Object(self.names.iter().map(|(k, p)| (k.clone(), Value::String(p.to_string()))).collect())
    }
}

fn rational(token: &str) -> Result<Q, Failure> {
    parse_q(token).map_or_else(|| usage(format!("'{token}' is not an exact rational (floats are rejected)")), Ok)
}

fn strings(v: &[String]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.clone())).collect())
}

fn job(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_rank(n: usize, max: usize) -> Result<(), Failure> {
    if n < 2 || n > max {
        return usage(format!("rank n = {n} outside 2..={max}"));
    }
    Ok(())
}

fn value_name(v: impl clap::ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn show_gamma(g: &GammaProduct) -> Value {
    Value::String(g.canonical().to_string())
}

pub fn verify(v: &Verify) -> Run {
    match v {
        Verify::Rll(a) => verify_rll(a),
        Verify::Hw(a) => verify_monodromy(a, false),
        Verify::Qdet(a) => verify_monodromy(a, true),
        Verify::Intertwine(a) => verify_intertwine(a),
    }
}

fn verify_rll(a: &RllArgs) -> Run {
    check_rank(a.n, 4)?;
    let shift = AffineForm::constant(rational(&a.shift)?);
    let mut sym = Symbols::new();
    let (relation, l1, l2) = match a.relation {
        RelationArg::Rll => {
            if a.degrees.is_some() {
                return usage("--degrees applies to restricted factors only");
            }
            (Relation::Rll, lmatrix::js_l(a.n, false, 1)?, lmatrix::js_l(a.n, false, 2)?)
        }
        RelationArg::UPlusU | RelationArg::VPlusU => {
            let degs = match &a.degrees {
                Some(d) if d.len() != 2 => return usage(format!("--degrees needs 2 entries, got {}", d.len())),
                Some(d) => [sym.value(&d[0], Param::ell(1, 1))?, sym.value(&d[1], Param::ell(2, 1))?],
                None => [AffineForm::param(Param::ell(1, 1)), AffineForm::param(Param::ell(2, 1))],
            };
            let rel = if a.relation == RelationArg::UPlusU { Relation::RllUPlusU } else { Relation::RllVPlusU };
            (rel, lmatrix::restricted_l(a.n, &degs[0], 1)?, lmatrix::restricted_l(a.n, &degs[1], 2)?)
        }
    };
    let report = intertwiners::verify_rll(&l1, &l2, relation, a.deg, &shift)?;
    let rel_name = value_name(a.relation);
    Ok(Outcome {
        command: "verify rll".into(),
        job: job(&[
            ("n", json!(a.n)),
            ("relation", json!(rel_name)),
            ("deg", json!(a.deg)),
            ("shift", json!(fmt_q(shift.constant_part()))),
            ("degrees", a.degrees.as_deref().map_or(Value::Null, strings)),
        ]),
        result: json!({
            "checked": report.checked,
            "first_mismatch": report.first_mismatch,
            "symbols": sym.to_json(),
        }),
        pass: report.pass,
    })
}

fn build_monodromy(a: &MonodromyArgs, sym: &mut Symbols) -> Result<(Monodromy, Vec<Vec<AffineForm>>), Failure> {
    check_rank(a.n, 4)?;
    if a.order == 0 || a.order > 4 {
        return usage(format!("order N = {} outside 1..=4", a.order));
    }
    let (n, order) = (a.n, a.order);
    let mut params = Vec::new();
    for site in 1..=order {
        let mut p = lmatrix::site_params(n, site as u16);
        if let Some(tokens) = &a.params {
            if tokens.len() != n * order {
                return usage(format!("--params needs {} entries, got {}", n * order, tokens.len()));
            }
            // entries run a = n..1 within each factor
            for (k, t) in tokens[(site - 1) * n..site * n].iter().enumerate() {
                let idx = n - 1 - k;
                p[idx] = sym.value(t, Param::ell(site as u32, (idx + 1) as u32))?;
            }
        }
        params.push(p);
    }
    let factors = params
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((lmatrix::biedenharn_l(n, p, (i + 1) as u16)?, AffineForm::default())))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((Monodromy::new(n, factors)?, params))
}

fn verify_monodromy(a: &MonodromyArgs, qdet: bool) -> Run {
    let mut sym = Symbols::new();
    let (t, params) = build_monodromy(a, &mut sym)?;
    let echo = job(&[
        ("n", json!(a.n)),
        ("N", json!(a.order)),
        ("params", a.params.as_deref().map_or(Value::Null, strings)),
    ]);
    if !qdet {
        let shifts = vec![AffineForm::default(); a.order];
        let predicted = lmatrix::predicted_weights(a.n, &params, &shifts);
        let (weights, pass, error) = match lmatrix::check_hw(t.product(), &PowerFn::new(Vec::new())) {
            Ok(w) => {
                let ok = w == predicted;
                (w.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ok, None)
            }
            Err(e) => (Vec::new(), false, Some(e.to_string())),
        };
        return Ok(Outcome {
            command: "verify hw".into(),
            job: echo,
            result: json!({
                "weights": weights,
                "predicted": predicted.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "error": error,
                "symbols": sym.to_json(),
            }),
            pass,
        });
    }
    let (q, central, error) = match lmatrix::qdet(t.product()) {
        Ok(q) => {
            let c = q.as_scalar();
            (Some(q.to_string()), c.is_some(), None)
        }
        Err(e) => (None, false, Some(e.to_string())),
    };
    let mut product = yangeval::weyl::WeylOp::one();
    let mut per_factor = Vec::new();
    for (l, _) in t.factors() {
        let f = lmatrix::qdet(l)?;
        per_factor.push(f.to_string());
        product = &product * &f;
    }
    let multiplicative = q.as_deref() == Some(product.to_string().as_str());
    Ok(Outcome {
        command: "verify qdet".into(),
        job: echo,
        result: json!({
            "qdet": q,
            "central": central,
            "factor_qdets": per_factor,
            "multiplicative": multiplicative,
            "error": error,
            "symbols": sym.to_json(),
        }),
        pass: central && multiplicative,
    })
}

fn parse_step(s: &str, n: usize) -> Result<Step, Failure> {
    if s == "between" {
        return Ok(Step::Between);
    }
    let bad = || Failure::Usage(format!("step '{s}' is not 'between', '1:k' or '2:k' with 1 <= k < n"));
    let (site, k) = s.split_once(':').ok_or_else(bad)?;
    let site: usize = site.parse().map_err(|_| bad())?;
    let k: usize = k.parse().map_err(|_| bad())?;
    if !(1..=2).contains(&site) || k == 0 || k >= n {
        return Err(bad());
    }
    Ok(Step::Within { site, k })
}

fn verify_intertwine(a: &IntertwineArgs) -> Run {
    check_rank(a.n, 3)?;
    let n = a.n;
    let array = ParamArray::standard(n);
    let mut seed = BTreeMap::new();
    let steps = match (&a.i, &a.step) {
        (Some(i), None) => {
            if *i == 0 || *i > n {
                return usage(format!("i = {i} outside 1..={n}"));
            }
            hwfun::sequence_s12_i(n, *i)
        }
        (None, Some(s)) => {
            let step = parse_step(s, n)?;
            // a single within step needs a power of the determinant it shifts
            let v0 = AffineForm::param(Param::aux(0));
            match step {
                Step::Within { site: 1, k } => {
                    seed.insert(DetFactor::new(k + 1, 1), v0);
                }
                Step::Within { k, .. } => {
                    seed.insert(DetFactor::new(n, k), v0);
                }
                Step::Between => {}
            }
            vec![step]
        }
        _ => return usage("give exactly one of --i and --step"),
    };
    let after = permuted(&steps, &array);
    let report = intertwiners::verify_intertwining(&steps, &array, &after, &seed, a.deg)?;
    Ok(Outcome {
        command: "verify intertwine".into(),
        job: job(&[("n", json!(n)), ("i", json!(a.i)), ("step", json!(a.step)), ("deg", json!(a.deg))]),
        result: json!({
            "steps": steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "before": array.to_string(),
            "after": after.to_string(),
            "seed": seed.iter().map(|(f, e)| format!("{f}^({e})")).collect::<Vec<_>>(),
            "checked": report.checked,
            "first_mismatch": report.first_mismatch,
        }),
        pass: report.pass,
    })
}

fn gl2_params(tokens: &[String], sym: &mut Symbols, allow_single: bool) -> Result<Gl2Params, Failure> {
    let k = tokens.len();
    let ok = k == 4 || k == 8 || (allow_single && k == 2);
    if !ok {
        return usage(format!("expected 4 or 8 parameters (2l^I_2, 2l^I_1 per factor), got {k}"));
    }
    let mut factors = Vec::new();
    for (i, pair) in tokens.chunks(2).enumerate() {
        let site = (i + 1) as u32;
        factors.push([sym.value(&pair[0], Param::ell(site, 2))?, sym.value(&pair[1], Param::ell(site, 1))?]);
    }
    if factors.len() == 1 {
        factors.push(factors[0].clone());
    }
    Ok(Gl2Params::new(factors)?)
}

fn combos_json(c: &gl2::ParamCombos) -> Value {
    json!({
        "2L1": c.two_l1.to_string(),
        "2L2": c.two_l2.to_string(),
        "2M12": c.two_m12.to_string(),
        "2M21": c.two_m21.to_string(),
    })
}

fn classification_json(r: &gl2::RepTypeReport) -> Value {
    let names = ["2L1", "2L2", "2M12", "2M21"];
    let w: Map<String, Value> = names
        .iter()
        .zip(&r.witnesses)
        .map(|(n, w)| (n.to_string(), json!({"integer": w.integer, "nonnegative": w.nonnegative})))
        .collect();
    json!({
        "configuration": r.configuration.label(),
        "on_constant": r.on_constant.label(),
        "on_psi0": r.on_psi0.label(),
        "witnesses": w,
    })
}

fn coefficient_json(g: &GammaProduct, at: Option<&BTreeMap<Param, Q>>) -> Value {
    let (value, error) = match at.map(|a| g.eval(a)) {
        Some(Ok(v)) => (Some(v.to_string()), None),
        Some(Err(e)) => (None, Some(e.to_string())),
        None => (None, None),
    };
    json!({"form": show_gamma(g), "value": value, "error": error})
}

pub fn gl2_cmd(g: &Gl2) -> Run {
    match g {
        Gl2::Classify(a) => gl2_classify(a),
        Gl2::Asym(a) => gl2_asym(a),
    }
}

fn gl2_classify(a: &ClassifyArgs) -> Run {
    let mut sym = Symbols::new();
    let p = gl2_params(&a.params, &mut sym, false)?;
    let at = p.assignment();
    let mut pairs = Map::new();
    for i in 1..=p.order() {
        for j in i + 1..=p.order() {
            let c = gl2::combos(&p, i, j);
            let coeffs: Map<String, Value> = [("pi1", Which::Pi1), ("pi2", Which::Pi2), ("pi", Which::Pi)]
                .into_iter()
                .map(|(k, w)| (k.to_string(), coefficient_json(&gl2::perm_coeff(&p, i, j, w), at.as_ref())))
                .collect();
            pairs.insert(
                format!("{i}{j}"),
                json!({
                    "combos": combos_json(&c),
                    "classification": gl2::classify(&c).as_ref().map(classification_json),
                    "coefficients": coeffs,
                }),
            );
        }
    }
    let mut result = json!({"pairs": pairs, "params": p.to_string(), "symbols": sym.to_json()});
    if p.order() == 4 {
        result["pi1234"] = coefficient_json(&gl2::pi_1234(&p)?, at.as_ref());
    }
    if let Some(max) = a.witness_max {
        if p.order() != 2 || at.is_none() {
            return usage("--witness-max needs two factors with rational parameters");
        }
        let mut w = Vec::new();
        for m1 in 0..=max {
            for m2 in 0..=max {
                if let Some((x, y)) = gl2::degeneracy_witness(&p, m1, m2)? {
                    w.push(json!({"m1": m1, "m2": m2, "A": fmt_q(&x), "B": fmt_q(&y)}));
                }
            }
        }
        result["degeneracy"] = Value::Array(w);
    }
    Ok(Outcome {
        command: "gl2 classify".into(),
        job: job(&[("params", strings(&a.params)), ("witness_max", json!(a.witness_max))]),
        result,
        pass: true,
    })
}

fn leading_json(l: &yangeval::symbolics::LaurentLeading) -> Value {
    json!({"order": l.order, "coefficient": l.coefficient.to_string()})
}

fn gl2_asym(a: &AsymArgs) -> Run {
    let mode = match a.mode {
        ModeArg::ShiftAll => AsymMode::ShiftAll,
        ModeArg::ShiftSecond => AsymMode::ShiftSecond,
        ModeArg::FourFactor => AsymMode::FourFactor,
    };
    let mode_name = value_name(a.mode);
    if a.sweep {
        if a.params.is_some() {
            return usage("--sweep runs on its own grid and takes no --params");
        }
        if mode != AsymMode::FourFactor {
            return usage("--sweep compares against the four-factor asymptotics");
        }
        return gl2_sweep(mode_name);
    }
    let tokens = a.params.as_deref().unwrap_or_default();
    let mut sym = Symbols::new();
    let p = gl2_params(tokens, &mut sym, mode == AsymMode::ShiftAll)?;
    if p.order() != 2 {
        return usage("asymptotics take the two factor base; the shifted copies are added internally");
    }
    let r = gl2::asymptotics_report(&p, mode)?;
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|c| json!({"name": c.name, "leading": leading_json(&c.leading), "factor_orders": c.factor_orders}))
        .collect();
    let mut result = json!({
        "params": p.to_string(),
        "leading": leading_json(&r.leading),
        "components": components,
        "case": r.case.to_string(),
    });
    let mut pass = true;
    if let CaseLabel::Config(cfg) = r.case {
        let classified = gl2::classify(&gl2::combos(&p, 1, 2)).map(|c| c.configuration);
        let agrees = classified == Some(cfg);
        result["classification"] = json!(classified.map(|c| c.label()));
        result["agrees"] = json!(agrees);
        pass = agrees;
    }
    Ok(Outcome {
        command: "gl2 asym".into(),
        job: job(&[("mode", json!(mode_name)), ("params", strings(tokens)), ("sweep", json!(false))]),
        result,
        pass,
    })
}

fn gl2_sweep(mode_name: String) -> Run {
    let grid = gl2::default_sweep_grid();
    let points = gl2::consistency_sweep(&grid)?;
    let mut by_config: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut mismatches = Vec::new();
    for pt in &points {
        let e = by_config.entry(pt.classified.label()).or_default();
        e.0 += 1;
        if pt.agrees() {
            e.1 += 1;
        } else {
            mismatches.push(json!({
                "params": pt.params.to_string(),
                "classified": pt.classified.label(),
                "asymptotic": pt.asymptotic.label(),
            }));
        }
    }
    let table: Map<String, Value> =
        by_config.iter().map(|(k, (n, ok))| (k.to_string(), json!({"points": n, "agree": ok}))).collect();
    let agree = points.iter().filter(|p| p.agrees()).count();
    Ok(Outcome {
        command: "gl2 asym".into(),
        job: job(&[("mode", json!(mode_name)), ("sweep", json!(true))]),
        result: json!({
            "points": points.len(),
            "agree": agree,
            "by_configuration": table,
            "mismatches": mismatches,
        }),
        pass: mismatches.is_empty(),
    })
}

fn same(a: &GammaProduct, b: &GammaProduct) -> bool {
    (&GammaSum::from_product(a) - &GammaSum::from_product(b)).is_zero()
}

fn state_json(h: &HWFunction) -> Value {
    json!({
        "array": h.array.to_string(),
        "factors": h.factors.iter().map(|(f, e)| format!("{f}^({e})")).collect::<Vec<_>>(),
        "coefficient": show_gamma(&h.coefficient),
        "sign_exponent": h.sign_exponent.to_string(),
    })
}

fn trace_json(r: &SequenceResult) -> Value {
    let mut out = vec![json!({"operator": "start", "state": state_json(&r.states[0])})];
    for (k, s) in r.steps.iter().enumerate() {
        let (prev, next) = (&r.states[k], &r.states[k + 1]);
        let factor = &next.coefficient * &prev.coefficient.inverse();
        out.push(json!({
            "operator": s.to_string(),
            "argument": s.argument(&prev.array).to_string(),
            "beta": show_gamma(&factor),
            "state": state_json(next),
        }));
    }
    Value::Array(out)
}

pub fn betaseq(a: &BetaseqArgs) -> Run {
    check_rank(a.n, 4)?;
    let n = a.n;
    let array = ParamArray::standard(n);
    let mut note = None;
    let (kind, r, closed, one_to_one) = match (a.i, a.site, a.p, a.swap_n) {
        (Some(i), None, None, false) => {
            if i == 0 || i > n {
                return usage(format!("i = {i} outside 1..={n}"));
            }
            let r = hwfun::beta_sequence_s12_i(i, &array)?;
            let closed = match i {
                _ if i == n => Some(hwfun::closed_form_s12_p1(1, &array)),
                1 => Some(hwfun::closed_form_s12_p2(n, &array)),
                _ => None,
            };
            (format!("S12_{i}"), r, closed, true)
        }
        (None, Some(site), Some(p), false) => {
            let r = match site {
                1 if (1..n).contains(&p) => hwfun::beta_sequence_s12_i1(n, p, &array)?,
                2 if (2..=n).contains(&p) => hwfun::beta_sequence_s12_i2(p, &array)?,
                _ => return usage(format!("p = {p} is not valid for site {site} (site 1: 1 <= p < n, site 2: 2 <= p <= n)")),
            };
            let closed = if site == 1 { hwfun::closed_form_s12_p1(p, &array) } else { hwfun::closed_form_s12_p2(p, &array) };
            (format!("S12_({p},{site})"), r, Some(closed), false)
        }
        (None, None, None, true) => {
            let r = hwfun::beta_sequence_s12_i(n, &array)?;
            note = Some(
                "closed form with corrected indices: the second product runs over \
                 B(2l^1_{k+1} - 2l^1_n, 2l^1_k - 2l^1_{k+1} + 1), k = 1..n-2",
            );
            (format!("S12_{n} full exchange"), r, Some(hwfun::closed_form_swap_n(&array)), true)
        }
        _ => return usage("give exactly one of --i, --site with --p, or --swap-n"),
    };
    let equal = closed.as_ref().map(|c| same(r.coefficient(), c));
    let constant = r.last().is_constant();
    let mut result = json!({
        "sequence": kind,
        "steps": r.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "accumulated": show_gamma(r.coefficient()),
        "closed_form": closed.as_ref().map(show_gamma),
        "equal": equal,
        "final": state_json(r.last()),
        "one_to_one": constant,
        "note": note,
    });
    if a.trace {
        result["trace"] = trace_json(&r);
    }
    let pass = equal != Some(false) && (!one_to_one || constant);
    Ok(Outcome {
        command: "betaseq".into(),
        job: job(&[
            ("n", json!(n)),
            ("i", json!(a.i)),
            ("site", json!(a.site)),
            ("p", json!(a.p)),
            ("swap_n", json!(a.swap_n)),
            ("trace", json!(a.trace)),
        ]),
        result,
        pass,
    })
}
