use std::path::Path;

use fapres_core::addcomb::{
    discrete_john, minkowski_audit, padic_norm, random_minkowski_instance, theta as theta_of, valuation, LatticeInstance,
    NormVariant, PAdicNorm, Point, ThetaBounds,
};
use fapres_core::growth::{growth_params, mul_graph, obstruction_trace, properties_audit, section_length_audit, Audit};
use fapres_core::logic::{compile_with, Compiled, Signature};
use fapres_core::presentation::{mod_one, parse_rational, structure_audit, verify as verify_all, verify_sampled};
use fapres_core::report::fmt_rational;
use fapres_core::{GroupElement, Presentation};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::Outcome;
use crate::{AuditKind, BuildArgs, CountArgs, VerifyArgs, EvalArgs, GrowthArgs, JohnArgs, LatticeArgs, NormArgs, ThetaArgs, TraceArgs, VariantArg};

type Result<T> = std::result::Result<T, String>;

fn core<T>(r: fapres_core::Result<T>) -> Result<T> {
    r.map_err(|e| e.to_string())
}

fn load(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Presentation::from_bundle(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn build(a: &BuildArgs) -> Result<Outcome> {
    let p = core(Presentation::parse(&a.spec))?;
    std::fs::write(&a.out, p.to_bundle()).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let verification = a.verify.map(|len| verify_all(&p, len));
    let fields = json!({
        "spec": p.spec().to_string(),
        "out": a.out.display().to_string(),
        "domain_states": p.domain().num_states(),
        "add_states": p.add().num_states(),
        "r": p.add().min_dfa().complete_state_count(),
        "verification": verification,
    });
    let out = Outcome::new(fields);
    Ok(match verification {
        Some(v) => out.audited(v.passed(), Some(to_value(&v.first_counterexample))),
        None => out,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let p = load(&a.pres)?;
    let rep = match a.samples {
        Some(n) => verify_sampled(&p, a.length, n, a.seed),
        None => verify_all(&p, a.length),
    };
    let structure = core(structure_audit(&p))?;
    let passed = rep.passed() && structure.passed();
    let counterexample = match &rep.first_counterexample {
        Some(c) => to_value(c),
        None => json!({"structure": structure}),
    };
    Ok(Outcome::new(json!({"verification": rep, "structure": structure})).audited(passed, Some(counterexample)))
}

pub fn count(a: &CountArgs) -> Result<Outcome> {
    let p = load(&a.pres)?;
    let table = p.domain().count_upto(a.nmax);
    let ratios: std::collections::BTreeMap<usize, BigRational> = table.ratios().into_iter().collect();
    let mut csv = String::from("n,count,cumulative,ratio\n");
    let mut rows = Vec::new();
    for n in 0..=a.nmax {
        // the ratio in row n is |D^{≤n}| / |D^{≤n-1}|
        let ratio = n.checked_sub(1).and_then(|m| ratios.get(&m)).map(fmt_rational);
        csv.push_str(&format!("{n},{},{},{}\n", table.per_length[n], table.cumulative[n], ratio.clone().unwrap_or_default()));
        rows.push(json!({"n": n, "count": table.per_length[n].to_string(), "cumulative": table.cumulative[n].to_string(), "ratio": ratio}));
    }
    Ok(Outcome::new(json!({"spec": p.spec().to_string(), "table": rows})).with_csv(csv))
}

pub fn eval(a: &EvalArgs) -> Result<Outcome> {
    let p = load(&a.pres)?;
    let sig = Signature::of(&p);
    let f = core(sig.parse(&a.formula))?;
    match core(compile_with(&p, &sig, &f))? {
        Compiled::Bool(b) => {
            if a.out.is_some() {
                return Err("a sentence has no definable set to save".into());
            }
            Ok(Outcome::new(json!({"value": b})).with_text(b.to_string()))
        }
        Compiled::Set(set) => {
            let aut = set.automaton.min_dfa();
            if let Some(path) = &a.out {
                std::fs::write(path, aut.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let text = format!("definable set in ({}), {} states", set.vars.join(","), aut.num_states());
            Ok(Outcome::new(json!({"value": null, "vars": set.vars, "states": aut.num_states()})).with_text(text))
        }
    }
}

pub fn growth(a: &GrowthArgs) -> Result<Outcome> {
    let p = load(&a.pres)?;
    let want = |k: AuditKind| a.audits.contains(&k);
    let pre_primes: &[u64] = if want(AuditKind::Preimage) { &a.primes } else { &[] };
    let n_sum = if want(AuditKind::Sum) { a.nmax } else { 0 };
    let rep = core(properties_audit(&p, a.ratio_n, n_sum, a.nmax, pre_primes, a.pre_nmax))?;
    let mut audits: Vec<Audit> = rep
        .audits
        .into_iter()
        .filter(|x| match x.name.as_str() {
            "base" => want(AuditKind::Base),
            "sum" => want(AuditKind::Sum),
            "growth" => want(AuditKind::Growth),
            _ => true,
        })
        .collect();
    if want(AuditKind::Length) {
        for &q in &a.primes {
            let m = core(mul_graph(&p, q))?;
            let s = core(section_length_audit(&m.graph, a.section_len))?;
            audits.push(Audit::new(&format!("length p={q}"), s.passed, to_value(&s)));
        }
    }
    let passed = audits.iter().all(Audit::passed);
    let failure = audits.iter().find(|x| !x.passed()).map(|x| json!({"audit": x.name, "detail": x.detail}));
    let mut csv = String::from("n,cumulative,ratio\n");
    let ratios = rep.params.counts.ratios();
    for (n, q) in &ratios {
        csv.push_str(&format!("{n},{},{}\n", rep.params.counts.cumulative[*n], fmt_rational(q)));
    }
    let fields = json!({"spec": p.spec().to_string(), "params": rep.params.to_json(), "audits": audits});
    Ok(Outcome::new(fields).audited(passed, failure).with_csv(csv))
}

pub fn trace(a: &TraceArgs) -> Result<Outcome> {
    let p = load(&a.pres)?;
    let params = core(growth_params(&p, 30))?;
    let t = core(obstruction_trace(&p, &params, &a.primes, a.nmax, a.theta_cap))?;
    let failure = t.steps.iter().find(|s| s.within_h == Some(false)).map(to_value);
    let fields = json!({"spec": p.spec().to_string(), "params": params.to_json(), "jumps": t.jumps(), "trace": t});
    Ok(Outcome::new(fields).audited(failure.is_none(), failure))
}

fn parse_points(text: &str) -> Result<Vec<Point>> {
    if text.contains(';') {
        text.split(';').map(|row| GroupElement::parse_rational_list(row).map_err(|e| e.to_string())).collect()
    } else {
        core(GroupElement::parse_rational_list(text)).map(|xs| xs.into_iter().map(|x| vec![x]).collect())
    }
}

pub fn theta(a: &ThetaArgs) -> Result<Outcome> {
    let set = parse_points(&a.set)?;
    let bounds = ThetaBounds { cap: a.cap, denominators: a.denominators, generators: None };
    let t = core(theta_of(&set, a.rank, &bounds))?;
    let Value::Object(fields) = t.to_json() else { unreachable!("theta reports are objects") };
    Ok(Outcome::new(Value::Object(fields)))
}

pub fn norm(a: &NormArgs) -> Result<Outcome> {
    let (x, variant) = match a.variant {
        VariantArg::Rational => (GroupElement::Rational(vec![core(parse_rational(&a.x))?]), NormVariant::Rational),
        VariantArg::Vector => (GroupElement::Rational(core(GroupElement::parse_rational_list(&a.x))?), NormVariant::VectorMax),
        VariantArg::Torsion => (GroupElement::Torsion(mod_one(&core(parse_rational(&a.x))?)), NormVariant::TorsionOrder),
    };
    let ctx = core(PAdicNorm::new(a.p, variant))?;
    let n = core(padic_norm(&x, &ctx))?;
    let v = match (&x, variant) {
        (GroupElement::Rational(c), NormVariant::Rational) if !c[0].is_zero() => Some(valuation(&c[0], a.p)),
        _ => None,
    };
    Ok(Outcome::new(json!({"element": x.to_string(), "norm": fmt_rational(&n), "valuation": v})))
}

pub fn lattice_check(a: &LatticeArgs) -> Result<Outcome> {
    if let (Some(basis), Some(half)) = (&a.basis, &a.half) {
        let l = core(LatticeInstance::parse(basis, half))?;
        let rep = core(minkowski_audit(&l))?;
        return Ok(Outcome::new(json!({"instance": rep})).audited(rep.passed, Some(to_value(&rep))));
    }
    if !(1..=3).contains(&a.dim) {
        return Err(format!("--dim must be 1, 2 or 3, got {}", a.dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut reports = Vec::with_capacity(a.trials);
    for _ in 0..a.trials {
        reports.push(core(minkowski_audit(&random_minkowski_instance(&mut rng, a.dim)))?);
    }
    let held = reports.iter().filter(|r| r.hypothesis_holds).count();
    let passed = reports.iter().filter(|r| r.passed).count();
    let mut csv = String::from("trial,volume,covolume,threshold,hypothesis_holds,span_dim,passed\n");
    for (i, r) in reports.iter().enumerate() {
        csv.push_str(&format!(
            "{i},{},{},{},{},{},{}\n",
            r.volume, r.covolume, r.threshold, r.hypothesis_holds, r.span_dim, r.passed
        ));
    }
    let failure = reports.iter().find(|r| !r.passed).map(to_value);
    let fields = json!({"trials": a.trials, "hypothesis_held": held, "passed": passed, "instances": reports});
    Ok(Outcome::new(fields).audited(failure.is_none(), failure).with_csv(csv))
}

pub fn john(a: &JohnArgs) -> Result<Outcome> {
    let l = core(LatticeInstance::parse(&a.basis, &a.half))?;
    let rep = core(discrete_john(&l))?;
    let Value::Object(fields) = to_value(&rep) else { unreachable!("reports are objects") };
    Ok(Outcome::new(Value::Object(fields)).audited(rep.certified, Some(to_value(&rep))))
}
