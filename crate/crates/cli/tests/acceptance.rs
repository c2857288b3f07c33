//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use fapres_core::addcomb::{
    candidate_generators, cyclic_index, discrete_john, incr_rank_audit, minkowski_audit, random_john_instance,
    random_minkowski_instance, rational_norm, set_norm, theta, theta_scalars, LatticeInstance, PAdicNorm,
    Point, ThetaBounds,
};
use fapres_core::corpus::{fo_suite, random_rational, random_scalar_set, random_subset, BUILTIN_SPECS};
use fapres_core::growth::{growth_params, mul_graph, obstruction_trace, properties_audit, section_length_audit};
use fapres_core::logic::{compile, eval_sentence, parse};
use fapres_core::presentation::{mutate_first_transition, parse_rational, structure_audit, verify, verify_sampled};
use fapres_core::{GroupElement, Presentation};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pres(spec: &str) -> Presentation {
    Presentation::parse(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn scalars(xs: &[&str]) -> Vec<BigRational> {
    xs.iter().map(|s| q(s)).collect()
}

fn int(e: &GroupElement) -> i64 {
    e.as_scalar().expect("scalar").to_integer().try_into().expect("small")
}

fn soundness() -> Check {
    let mut notes = Vec::new();
    for spec in BUILTIN_SPECS {
        let p = pres(spec);
        if spec == "ZInv(6)" {
            // 12^6 words: exhaustive at length 3, structural proofs, and a sample at length 6
            let exact = verify(&p, 3);
            ensure!(exact.passed(), "{spec} L=3: {:?}", exact.first_counterexample);
            let s = structure_audit(&p).map_err(|e| e.to_string())?;
            ensure!(s.passed(), "{spec} structure: {s:?}");
            let sampled = verify_sampled(&p, 6, 200_000, 6);
            ensure!(sampled.passed(), "{spec} sampled L=6: {:?}", sampled.first_counterexample);
            notes.push(format!("{spec} L=3 exhaustive + structure + {} sampled pairs at L=6", sampled.pairs_checked));
        } else {
            let r = verify(&p, 6);
            ensure!(r.passed(), "{spec}: {:?}", r.first_counterexample);
            notes.push(format!("{spec} {} pairs", r.pairs_checked));
        }
    }
    let bad = verify(&mutate_first_transition(&pres("Z")), 4);
    ensure!(!bad.passed(), "mutation not caught");
    notes.push(format!("mutation caught ({} counterexamples)", bad.counterexamples));
    Ok(notes.join("; "))
}

fn counting() -> Check {
    let mut notes = Vec::new();
    // |D^{≤n}| = b^n, b counted by hand from each codec's digit set
    let bases = [2u32, 2, 3, 2, 3, 4, 12, 4];
    for (spec, base) in BUILTIN_SPECS.into_iter().zip(bases) {
        let p = pres(spec);
        let len = if spec == "ZInv(6)" { 6 } else { 12 };
        let table = p.domain().count_upto(len);
        let mut per = vec![0u64; len + 1];
        p.domain().for_each_upto(len, |w| per[w.len()] += 1);
        for (n, c) in per.iter().enumerate() {
            ensure!(table.per_length[n] == BigUint::from(*c), "{spec} length {n}: {} vs {c}", table.per_length[n]);
        }
        let far = p.domain().count_upto(30);
        for n in 0..=30 {
            ensure!(*far.upto(n) == BigUint::from(base).pow(n as u32), "{spec}: |D^≤{n}| = {}", far.upto(n));
        }
        notes.push(format!("{spec} to {len}"));
    }
    let z = pres("Z");
    let t = z.domain().count_upto(12);
    for n in 1..=12 {
        ensure!(*t.upto(n) == BigUint::from(1u32) << n, "Z: |D^≤{n}| = {}", t.upto(n));
    }
    let mut d3: Vec<i64> = z.elements_upto(3).iter().map(|(_, e)| int(e)).collect();
    d3.sort();
    ensure!(d3 == (-2..=5).collect::<Vec<_>>(), "Z D^≤3 = {d3:?}");
    Ok(format!("{}; closed forms to 30; Z D^≤3 = -2..5", notes.join(", ")))
}

fn level_properties() -> Check {
    let mut notes = Vec::new();
    for spec in ["Z", "ZInv(2)"] {
        let rep = properties_audit(&pres(spec), 30, 6, 10, &[2, 3], 4).map_err(|e| e.to_string())?;
        for a in &rep.audits {
            ensure!(a.status == "pass", "{spec} {}: {}", a.name, a.detail);
        }
        notes.push(format!("{spec} r={} l0={} C1={}", rep.params.r, rep.params.l0, rep.params.c1_observed));
    }
    Ok(format!("{} (growth with C1^r)", notes.join(", ")))
}

fn finite_sections() -> Check {
    let z = pres("Z");
    let mut notes = Vec::new();
    for p in [2, 3] {
        let m = mul_graph(&z, p).map_err(|e| e.to_string())?;
        let s = section_length_audit(&m.graph, 10).map_err(|e| e.to_string())?;
        ensure!(s.passed, "p={p}: {:?}", s.counterexample);
        notes.push(format!("p={p} k={} max slack {:?}", s.k, s.max_slack));
    }
    Ok(notes.join(", "))
}

fn fo_soundness() -> Check {
    let p = pres("Z");
    let els: Vec<(Vec<u32>, i64)> = p.elements_upto(6).into_iter().map(|(w, e)| (w, int(&e))).collect();
    let mut tuples = 0u64;
    for case in fo_suite() {
        let c = compile(&p, &parse(case.formula).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let set = c.as_set().ok_or("open formula compiled to a truth value")?;
        ensure!(set.vars == case.vars, "{}: frame {:?}", case.formula, set.vars);
        let k = case.vars.len();
        for code in 0..els.len().pow(k as u32) {
            let idx: Vec<usize> = (0..k).map(|t| code / els.len().pow(t as u32) % els.len()).collect();
            let words: Vec<&[u32]> = idx.iter().map(|&i| els[i].0.as_slice()).collect();
            let vals: Vec<i64> = idx.iter().map(|&i| els[i].1).collect();
            ensure!(c.accepts(&words) == (case.oracle)(&vals), "{} at {vals:?}", case.formula);
            tuples += 1;
        }
    }
    let even = compile(&p, &parse("E y. Add(y,y,x)").unwrap()).unwrap();
    for n in -100..=100 {
        ensure!(even.accepts(&[&p.encode(&GroupElement::int(n)).unwrap()]) == (n % 2 == 0), "parity at {n}");
    }
    let eval = |s: &str| eval_sentence(&p, &parse(s).unwrap()).unwrap();
    ensure!(eval("E x. Add(x,x,x)"), "E x. Add(x,x,x)");
    ensure!(!eval("Einf x. Add(x,x,x)"), "Einf x. Add(x,x,x)");
    let full = compile(&p, &parse("x = x").unwrap()).unwrap();
    ensure!(full.as_set().unwrap().automaton.equivalent(p.domain()).unwrap(), "x = x is not D");
    let cancel = compile(&p, &parse("Add(x,z,x)").unwrap()).unwrap();
    for (u, _) in &els {
        for (v, b) in &els {
            ensure!(cancel.accepts(&[u, v]) == (*b == 0), "Add(x,z,x) at z = {b}");
        }
    }
    Ok(format!("12 formulas, {tuples} tuples; parity |x| ≤ 100; quantifier examples"))
}

fn theta_cases() -> Check {
    let b = ThetaBounds::default();
    let th = |xs: &[&str], d| theta_scalars(&scalars(xs), d, &b).unwrap();
    let t = th(&["0", "1", "3"], 1);
    ensure!(t.value == Some(q("4/3")) && t.certified, "θ({{0,1,3}},1) = {}", t.value_string());
    ensure!(th(&["0", "1"], 0).value.is_none(), "θ({{0,1}},0) finite");
    let t = th(&["0", "1", "10", "11"], 2);
    ensure!(t.value == Some(BigRational::one()), "θ({{0,1,10,11}},2) = {}", t.value_string());
    let t = th(&["0", "1", "2", "1/11"], 1);
    ensure!(t.value == Some(q("23/4")), "θ({{0,1,2,1/11}},1) = {}", t.value_string());

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let a = random_scalar_set(&mut rng, 8);
        let sub = random_subset(&mut rng, &a);
        let d = 1 + i % 2;
        let bounds = ThetaBounds { generators: Some(candidate_generators(&a, 2)), ..ThetaBounds::default() };
        let (ta, tb) = (theta(&a, d, &bounds).unwrap(), theta(&sub, d, &bounds).unwrap());
        let scale = BigRational::new(sub.len().into(), a.len().into());
        match (&ta.value, &tb.value) {
            (Some(va), Some(vb)) => ensure!(*va >= &scale * vb, "pair {i}: {va} < {scale}·{vb}"),
            (Some(_), None) => return Err(format!("pair {i}: subset uncovered")),
            _ => {}
        }
    }
    Ok("four worked values; monotonicity on 100 seeded pairs".into())
}

fn minkowski() -> Check {
    let worked = [("1,0;0,1", "0.7,0.7", Some(vec!["(0, 0)"])), ("1,0;0,3", "1.2,1.2", Some(vec!["(-1, 0)", "(0, 0)", "(1, 0)"]))];
    for (basis, half, want) in worked {
        let r = minkowski_audit(&LatticeInstance::parse(basis, half).unwrap()).unwrap();
        ensure!(r.hypothesis_holds && r.passed, "{basis} / {half}: {r:?}");
        ensure!(Some(r.points.iter().map(String::as_str).collect::<Vec<_>>()) == want, "{basis}: points {:?}", r.points);
    }
    let vacuous = minkowski_audit(&LatticeInstance::parse("1,0;0,1", "1.1,1.1").unwrap()).unwrap();
    ensure!(!vacuous.hypothesis_holds, "(-1.1,1.1)^2 should not satisfy the hypothesis");

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut held, mut drawn) = (0, 0);
    while held < 200 {
        let d = 1 + drawn % 3;
        drawn += 1;
        let r = minkowski_audit(&random_minkowski_instance(&mut rng, d)).unwrap();
        if r.hypothesis_holds {
            ensure!(r.span_dim < d, "instance {drawn}: span {} in dimension {d}", r.span_dim);
            held += 1;
        }
    }
    Ok(format!("worked instances; 200 instances with the hypothesis ({drawn} drawn, d ≤ 3)"))
}

fn john() -> Check {
    let r = discrete_john(&LatticeInstance::parse("1,0;0,1", "2.5,1.5").unwrap()).unwrap();
    ensure!(r.certified && r.w == ["(1, 0)", "(0, 1)"] && r.n == [3, 2], "worked example: {r:?}");
    let r = discrete_john(&LatticeInstance::parse("2,0", "5,5").unwrap()).unwrap();
    ensure!(r.certified && r.w == ["(2, 0)"] && r.n == [3], "rank-one example: {r:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50 {
        let l = random_john_instance(&mut rng, 1 + i % 2);
        let r = discrete_john(&l).unwrap();
        ensure!(r.certified, "instance {i}: {r:?}");
    }
    Ok("w = ((1,0),(0,1)), N = (3,2); rank one w = ((2,0)), N = (3); 50 seeded instances certified".into())
}

fn increment_lemma() -> Check {
    let b = ThetaBounds::default();
    let pt = |s: &str| -> Point { vec![q(s)] };
    let cases = [(vec!["0", "1", "2"], "1/11", 11u64, "23/4"), (vec!["0", "1"], "1/5", 5, "2")];
    let mut notes = Vec::new();
    for (a, z, p, want) in cases {
        let a: Vec<Point> = a.iter().map(|s| pt(s)).collect();
        let r = incr_rank_audit(&a, &pt(z), p, 1, &b).map_err(|e| e.to_string())?;
        ensure!(r.passed == Some(true), "p={p}: {r:?}");
        ensure!(r.theta_extended.value == Some(q(want)), "p={p}: θ = {}", r.theta_extended.value_string());
        ensure!(r.cover_length.unwrap() > p, "p={p}: N = {:?}", r.cover_length);
        notes.push(format!("p={p} θ={want} N={}", r.cover_length.unwrap()));
    }
    let rejected = incr_rank_audit(&[pt("0"), pt("1/7")], &pt("2"), 7, 1, &b);
    ensure!(rejected.is_err(), "‖z‖ ≤ ‖A‖ accepted");
    Ok(notes.join(", "))
}

fn tracer() -> Check {
    let dy = pres("ZInv(2)");
    let params = growth_params(&dy, 30).unwrap();
    let odd = obstruction_trace(&dy, &params, &[3, 5, 7], 20, 24).unwrap();
    ensure!(odd.jumps() == 0, "ZInv(2) odd primes: {} jumps", odd.jumps());
    let two = obstruction_trace(&dy, &params, &[2, 2, 2], 20, 24).unwrap();
    ensure!(two.jumps() == 3 && two.steps.iter().all(|s| s.within_h == Some(true)), "ZInv(2) p=2: {:?}", two.steps);
    let ns: Vec<usize> = two.steps.iter().map(|s| s.jump.as_ref().unwrap().n).collect();
    let z = pres("Z");
    let zp = growth_params(&z, 30).unwrap();
    let zt = obstruction_trace(&z, &zp, &[2, 3, 5, 7], 20, 24).unwrap();
    ensure!(zt.jumps() == 0, "Z: {} jumps", zt.jumps());
    Ok(format!("ZInv(2): no jumps for 3,5,7; p=2 jumps at n = {ns:?} within h(2); Z: none for 2,3,5,7"))
}

fn padic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xs: Vec<BigRational> = (0..10_000).map(|_| random_rational(&mut rng)).collect();
    let primes = [2u64, 3, 5, 7];
    let norm = |x: &BigRational, p| rational_norm(x, p);
    for (i, w) in xs.windows(2).enumerate() {
        let (x, y) = (&w[0], &w[1]);
        let p = primes[i % 4];
        let pq = BigRational::from_integer(p.into());
        let (nx, ny, ns) = (norm(x, p), norm(y, p), norm(&(x + y), p));
        ensure!(norm(&-x.clone(), p) == nx, "‖-x‖ at {x}");
        ensure!(ns <= nx.clone().max(ny.clone()), "ultrametric at {x}, {y}");
        if nx > ny {
            ensure!(ns == nx, "dominant summand at {x}, {y}");
        }
        ensure!(x.is_zero() || norm(&(x * &pq), p) * &pq == nx, "‖px‖ = ‖x‖/p at {x}");
        let a: i64 = rng.gen_range(-30..=30);
        if norm(&(x * BigRational::from_integer(a.into())), p) < nx {
            ensure!(a % p as i64 == 0, "‖ax‖ < ‖x‖ with p ∤ a at {x}, a = {a}");
        }
    }
    let ctx2 = PAdicNorm::rational(2).unwrap();
    for chunk in xs.chunks(4).take(500) {
        let elems: Vec<GroupElement> = chunk.iter().map(|x| GroupElement::Rational(vec![x.clone()])).collect();
        let mut combos = vec![BigRational::zero()];
        for x in chunk {
            combos = combos.iter().flat_map(|c| [c - x, c.clone(), c + x]).collect();
        }
        let gen: Vec<GroupElement> = combos.into_iter().map(|c| GroupElement::Rational(vec![c])).collect();
        ensure!(set_norm(&gen, &ctx2).unwrap().0 == set_norm(&elems, &ctx2).unwrap().0, "‖⟨A⟩‖ at {chunk:?}");
    }
    let mut indices = 0;
    for (i, x) in xs.iter().enumerate().filter(|(_, x)| !x.is_zero()).take(2000) {
        let p = primes[i % 4];
        ensure!(cyclic_index(x, p, 64).unwrap() == p, "index of ⟨{x}⟩_(p) for p = {p}");
        indices += 1;
    }
    Ok(format!("9999 pairs, 500 generated sets, {indices} cyclic indices"))
}

fn run(args: &[&str], env: Option<(&str, &str)>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fapres"));
    cmd.args(args).env_remove("FAPRES_THETA_CAP");
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("fapres-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let bundle = dir.join("zinv2.bundle");
    let bundle = bundle.to_str().unwrap();
    let first = run(&["build", "--spec", "ZInv(2)", "--out", bundle], None);
    let saved = std::fs::read(bundle).unwrap();
    ensure!(run(&["build", "--spec", "ZInv(2)", "--out", bundle], None) == first, "build report differs");
    ensure!(std::fs::read(bundle).unwrap() == saved, "bundle bytes differ");
    let runs: [&[&str]; 6] = [
        &["lattice-check", "--dim", "3", "--trials", "50", "--seed", "42"],
        &["verify", "--pres", bundle, "--length", "8", "--samples", "2000", "--seed", "5"],
        &["growth", "--pres", bundle, "--nmax", "3", "--audits", "base,sum,growth"],
        &["trace", "--pres", bundle, "--primes", "2,3", "--nmax", "10"],
        &["theta", "--set", "0,1,2,20,22", "--rank", "2"],
        &["count", "--pres", bundle, "--nmax", "12", "--format", "csv"],
    ];
    for args in runs {
        ensure!(run(args, None) == run(args, None), "{args:?} differs between runs");
    }
    ensure!(
        run(&["lattice-check", "--seed", "1"], None) != run(&["lattice-check", "--seed", "2"], None),
        "seed has no effect"
    );
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical across runs, bundle included", runs.len() + 1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("presentation soundness", soundness),
        ("counting oracle", counting),
        ("level-set properties (i)-(iv)", level_properties),
        ("finite-section length bound", finite_sections),
        ("first-order compiler soundness", fo_soundness),
        ("theta oracle cases", theta_cases),
        ("convex-body lattice lemma", minkowski),
        ("discrete John sandwich", john),
        ("rank-one increment lemma", increment_lemma),
        ("obstruction tracer contrast", tracer),
        ("p-adic identities", padic),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
