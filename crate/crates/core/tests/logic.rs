use fapres_core::corpus::{fo_suite, sentence_suite};
use fapres_core::logic::{compile, compile_with, eval_sentence, eval_sentence_with, parse, singleton, Signature};
use fapres_core::presentation::domain_power;
use fapres_core::{Automaton, GroupElement, GroupSpec, Presentation};

fn z() -> Presentation {
    Presentation::parse("Z").unwrap()
}

fn int_of(e: &GroupElement) -> i64 {
    e.as_scalar().unwrap().to_integer().try_into().unwrap()
}

#[test]
fn suite_agrees_with_integers_on_short_words() {
    let p = z();
    let els: Vec<(Vec<u32>, i64)> = p.elements_upto(6).into_iter().map(|(w, e)| (w, int_of(&e))).collect();
    for case in fo_suite() {
        let c = compile(&p, &parse(case.formula).unwrap()).unwrap();
        let set = c.as_set().expect("open formula");
        assert_eq!(set.vars, case.vars, "{}", case.formula);
        let k = case.vars.len();
        let mut idx = vec![0usize; k];
        loop {
            let words: Vec<&[u32]> = idx.iter().map(|&i| els[i].0.as_slice()).collect();
            let vals: Vec<i64> = idx.iter().map(|&i| els[i].1).collect();
            assert_eq!(c.accepts(&words), (case.oracle)(&vals), "{} at {vals:?}", case.formula);
            let mut t = 0;
            while t < k {
                idx[t] += 1;
                if idx[t] < els.len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == k {
                break;
            }
        }
    }
}

#[test]
fn even_set_matches_parity() {
    let p = z();
    let c = compile(&p, &parse("E y. Add(y,y,x)").unwrap()).unwrap();
    for n in -100..=100 {
        let w = p.encode(&GroupElement::int(n)).unwrap();
        assert_eq!(c.accepts(&[&w]), n % 2 == 0);
    }
}

#[test]
fn sentences_with_a_constant() {
    let p = z();
    let sig = Signature::of(&p).with(&p, "One", singleton(&p, &GroupElement::int(1)).unwrap()).unwrap();
    for (text, want) in sentence_suite() {
        let f = sig.parse(text).unwrap();
        assert_eq!(eval_sentence_with(&p, &sig, &f).unwrap(), want, "{text}");
    }
}

#[test]
fn quantifier_examples() {
    let p = z();
    let eval = |s: &str| eval_sentence(&p, &parse(s).unwrap()).unwrap();
    assert!(eval("E x. Add(x,x,x)"));
    assert!(!eval("Einf x. Add(x,x,x)"));
    assert!(eval("Einf x. x = x"));
    let odd = compile(&p, &parse("Emod 0 2 y. Add(y,y,x)").unwrap()).unwrap();
    for n in -30..=30 {
        assert_eq!(odd.accepts(&[&p.encode(&GroupElement::int(n)).unwrap()]), n % 2 != 0);
    }
}

/// `Z/2` as the words of length ≤ 1 in the `⊕Z/2` presentation.
fn finite_presentation() -> Presentation {
    let big = Presentation::parse("ModSum(2)").unwrap();
    let d = big.domain().truncate(1).min_dfa();
    let d3 = d.embed(3, &[0]).unwrap().intersection(&d.embed(3, &[1]).unwrap()).unwrap();
    let d3 = d3.intersection(&d.embed(3, &[2]).unwrap()).unwrap();
    let add = big.add().intersection(&d3).unwrap().min_dfa();
    Presentation::from_parts(GroupSpec::ModSum(2), d, add).unwrap()
}

#[test]
fn infinitely_many_elements_dichotomy() {
    for spec in fapres_core::corpus::BUILTIN_SPECS {
        let p = Presentation::parse(spec).unwrap();
        assert!(eval_sentence(&p, &parse("Einf x. x = x").unwrap()).unwrap(), "{spec}");
    }
    let f = finite_presentation();
    assert!(!eval_sentence(&f, &parse("Einf x. x = x").unwrap()).unwrap());
    assert!(eval_sentence(&f, &parse("Emod 0 2 x. x = x").unwrap()).unwrap());
    assert!(eval_sentence(&f, &parse("A x. E y. Add(y,y,x)").unwrap()).is_ok());
}

fn set_of(p: &Presentation, text: &str, vars: &[&str]) -> Automaton {
    let c = compile(p, &parse(text).unwrap()).unwrap();
    let s = c.as_set().unwrap();
    assert_eq!(s.vars, vars, "{text}");
    s.automaton.clone()
}

#[test]
fn de_morgan_and_universal_duality() {
    for spec in ["Z", "ZInv(2)", "Pruefer(3)"] {
        let p = Presentation::parse(spec).unwrap();
        let pairs = [
            ("!(Add(x,y,z) & E w. Add(w,w,z))", "!Add(x,y,z) | !(E w. Add(w,w,z))"),
            ("!(x = y | Add(x,x,y))", "!(x = y) & !Add(x,x,y)"),
            ("A y. Add(x,y,y)", "!(E y. !Add(x,y,y))"),
            ("A y. E z. Add(x,y,z)", "!(E y. !(E z. Add(x,y,z)))"),
        ];
        for (a, b) in pairs {
            let fa = parse(a).unwrap();
            let vars: Vec<String> = fa.free_vars().into_iter().collect();
            let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
            let (x, y) = (set_of(&p, a, &vars), set_of(&p, b, &vars));
            assert!(x.equivalent(&y).unwrap(), "{spec}: {a} vs {b}");
        }
    }
}

#[test]
fn negation_stays_inside_the_domain() {
    let p = z();
    let neg = set_of(&p, "!(x = y)", &["x", "y"]);
    assert!(neg.is_subset_of(&domain_power(&p, 2)).unwrap());
    let c = compile_with(&p, &Signature::of(&p), &parse("!(x = x)").unwrap()).unwrap();
    assert!(c.as_set().unwrap().automaton.is_empty());
}
