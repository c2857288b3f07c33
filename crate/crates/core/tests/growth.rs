use fapres_core::growth::{
    growth_params, level_set, mul_graph, norm_jump, obstruction_trace, preimage_audit, properties_audit, section_length_audit,
    sumset,
};
use fapres_core::logic::singleton;
use fapres_core::Presentation;

#[test]
fn level_properties_on_z_and_dyadics() {
    for spec in ["Z", "ZInv(2)"] {
        let p = Presentation::parse(spec).unwrap();
        let rep = properties_audit(&p, 30, 3, 10, &[2, 3], 2).unwrap();
        for a in &rep.audits {
            assert!(a.passed(), "{spec} {}: {}", a.name, a.detail);
        }
    }
}

fn all_properties(specs: &[&str]) {
    for spec in specs {
        let p = Presentation::parse(spec).unwrap();
        let rep = properties_audit(&p, 30, 6, 10, &[2, 3], 4).unwrap();
        for a in &rep.audits {
            assert!(a.passed(), "{spec} {}: {}", a.name, a.detail);
        }
        // ModSum(p) kills p, so the preimage of every level under p is infinite
        let skipped: Vec<&str> = rep.audits.iter().filter(|a| a.status == "skipped").map(|a| a.name.as_str()).collect();
        match *spec {
            "ModSum(2)" => assert_eq!(skipped, ["preimage p=2"]),
            "ModSum(3)" => assert_eq!(skipped, ["preimage p=3"]),
            _ => assert!(skipped.is_empty(), "{spec}: {skipped:?}"),
        }
    }
}

#[test]
fn level_properties_on_small_builtins() {
    all_properties(&["Z", "ModSum(2)", "ModSum(3)", "Pruefer(2)", "Pruefer(3)", "ZInv(2)"]);
}

#[test]
#[ignore = "minutes per presentation"]
fn level_properties_on_large_builtins() {
    all_properties(&["ZInv(6)", "Sum(Z,Z)"]);
}

#[test]
fn small_doubling_against_counts() {
    let p = Presentation::parse("Z").unwrap();
    let g = growth_params(&p, 30).unwrap();
    let zero = singleton(&p, &p.zero()).unwrap();
    assert!(sumset(&p, &zero).unwrap().equivalent(&zero).unwrap());
    let s = sumset(&p, &level_set(&p, &g, 1)).unwrap();
    // every sum of two words of length ≤ 30 has length ≤ 32
    assert!(s.is_subset_of(&p.domain().truncate(32)).unwrap());
}

#[test]
fn finite_sections_of_multiplication() {
    let p = Presentation::parse("Z").unwrap();
    for q in [2, 3] {
        let m = mul_graph(&p, q).unwrap();
        let rep = section_length_audit(&m.graph, 10).unwrap();
        assert!(rep.passed, "p = {q}");
        assert_eq!(rep.k, m.h);
    }
}

#[test]
fn preimages_grow_denominators() {
    let p = Presentation::parse("ZInv(2)").unwrap();
    let g = growth_params(&p, 8).unwrap();
    let rep = preimage_audit(&p, &g, 2, 1).unwrap();
    assert!(rep.passed() && rep.kernel_finite);
    let m = mul_graph(&p, 2).unwrap();
    // halves of the words of length ≤ 2 reach one binary place further
    let small = p.domain().truncate(2);
    let halves = m.graph.intersection(&small.embed(2, &[1]).unwrap()).unwrap().project(1).unwrap();
    let deepest = |a: &fapres_core::Automaton| {
        a.enumerate_upto(8)
            .iter()
            .map(|w| p.decode(w).unwrap().as_scalar().unwrap().denom().bits())
            .max()
            .unwrap()
    };
    assert!(deepest(&halves) > deepest(&small));
}

#[test]
fn torsion_kernels_are_finite() {
    let p = Presentation::parse("Pruefer(2)").unwrap();
    let g = growth_params(&p, 8).unwrap();
    let rep = preimage_audit(&p, &g, 2, 1).unwrap();
    assert!(rep.kernel_finite && rep.passed());
}

#[test]
fn tracer_contrast() {
    let dy = Presentation::parse("ZInv(2)").unwrap();
    let g = growth_params(&dy, 8).unwrap();
    let t = obstruction_trace(&dy, &g, &[3, 5, 7], 20, 24).unwrap();
    assert_eq!(t.jumps(), 0);
    let t = obstruction_trace(&dy, &g, &[2, 2, 2], 20, 24).unwrap();
    assert_eq!(t.jumps(), 3);
    assert!(t.steps.iter().all(|s| s.within_h == Some(true)));
    let mut n = 0;
    for _ in 0..3 {
        let j = norm_jump(&dy, &g, 2, n, 20).unwrap().unwrap();
        assert!(j.n <= n + t.steps[0].h.unwrap());
        n = j.n;
    }
    let z = Presentation::parse("Z").unwrap();
    let g = growth_params(&z, 8).unwrap();
    assert_eq!(obstruction_trace(&z, &g, &[2, 3, 5, 7, 11], 20, 24).unwrap().jumps(), 0);
}
