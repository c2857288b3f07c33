//! Fixed test corpora: formula suites with integer oracles and seeded random generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::addcomb::Point;

/// Every built-in presentation family, smallest parameters.
pub const BUILTIN_SPECS: [&str; 8] =
    ["Z", "ModSum(2)", "ModSum(3)", "Pruefer(2)", "Pruefer(3)", "ZInv(2)", "ZInv(6)", "Sum(Z,Z)"];

/// A formula over `Z` with free variables sorted by name and its truth on integers.
pub struct FoCase {
    pub formula: &'static str,
    pub vars: &'static [&'static str],
    pub oracle: fn(&[i64]) -> bool,
}

/// Twelve formulas over `(Z, +)`, covering every quantifier and connective.
pub fn fo_suite() -> Vec<FoCase> {
    vec![
        FoCase { formula: "Add(x,y,z)", vars: &["x", "y", "z"], oracle: |v| v[0] + v[1] == v[2] },
        FoCase { formula: "x = y", vars: &["x", "y"], oracle: |v| v[0] == v[1] },
        FoCase { formula: "E y. Add(y,y,x)", vars: &["x"], oracle: |v| v[0] % 2 == 0 },
        FoCase { formula: "A y. Add(x,y,y)", vars: &["x"], oracle: |v| v[0] == 0 },
        FoCase { formula: "E z. Add(x,z,y)", vars: &["x", "y"], oracle: |_| true },
        FoCase { formula: "!(x = y) & Add(x,x,y)", vars: &["x", "y"], oracle: |v| v[1] == 2 * v[0] && v[0] != 0 },
        FoCase { formula: "E u. E v. Add(u,u,v) & Add(v,v,x)", vars: &["x"], oracle: |v| v[0] % 4 == 0 },
        FoCase { formula: "Einf y. Add(x,y,y)", vars: &["x"], oracle: |v| v[0] == 0 },
        FoCase { formula: "Emod 1 2 y. Add(y,y,x)", vars: &["x"], oracle: |v| v[0] % 2 == 0 },
        FoCase {
            formula: "Emod 0 2 y. Add(y,y,x) | Add(y,y,y)",
            vars: &["x"],
            oracle: |v| v[0] % 2 == 0 && v[0] != 0,
        },
        FoCase { formula: "E y. Add(x,y,z) & Add(y,y,x)", vars: &["x", "z"], oracle: |v| v[0] % 2 == 0 && 2 * v[1] == 3 * v[0] },
        FoCase {
            formula: "A y. (Add(y,y,x) -> E w. Add(w,w,y))",
            vars: &["x"],
            oracle: |v| v[0] % 2 != 0 || v[0] % 4 == 0,
        },
    ]
}

/// Ten sentences over `(Z, +, One)` where `One = {1}`, with their truth values.
pub fn sentence_suite() -> Vec<(&'static str, bool)> {
    vec![
        ("A x. E y. Add(y,y,x) | E c. E o. One(o) & Add(y,y,c) & Add(c,o,x)", true),
        ("A x. E y. Add(y,y,x)", false),
        ("E x. E o. One(o) & Add(x,x,o)", false),
        ("E x. !(x = x)", false),
        ("A x. A y. E z. Add(x,y,z)", true),
        ("E x. E o. One(o) & Add(x,o,x)", false),
        ("A x. E y. E o. One(o) & Add(y,o,x)", true),
        ("Einf x. E y. Add(y,y,x)", true),
        ("Emod 1 2 x. E o. One(o) & (x = o | Add(o,o,x) | Add(x,o,o))", true),
        ("A x. Add(x,x,x) -> (A y. Add(x,y,y))", true),
    ]
}

/// A rational `±a/b · p^e` with small `a, b` and a prime-power factor drawn from `{2, 3, 5, 7}`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    if rng.gen_ratio(1, 20) {
        return BigRational::from_integer(0.into());
    }
    let a: i64 = rng.gen_range(1..=1000) * if rng.gen() { 1 } else { -1 };
    let b: i64 = rng.gen_range(1..=1000);
    let p = [2i64, 3, 5, 7][rng.gen_range(0..4)];
    let e: i32 = rng.gen_range(-6..=6);
    let pe = BigInt::from(p).pow(e.unsigned_abs());
    let x = BigRational::new(a.into(), b.into());
    if e >= 0 {
        x * BigRational::from_integer(pe)
    } else {
        x / BigRational::from_integer(pe)
    }
}

/// A set of `1..=max` distinct scalars: small integers, sometimes with halves or thirds.
pub fn random_scalar_set(rng: &mut ChaCha8Rng, max: usize) -> Vec<Point> {
    let size = rng.gen_range(1..=max);
    let den = [1i64, 1, 2, 3][rng.gen_range(0..4)];
    let mut out: Vec<Point> = Vec::new();
    while out.len() < size {
        let x = vec![BigRational::new(rng.gen_range(-12i64..=12).into(), den.into())];
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort();
    out
}

/// A random nonempty subset.
pub fn random_subset(rng: &mut ChaCha8Rng, a: &[Point]) -> Vec<Point> {
    loop {
        let b: Vec<Point> = a.iter().filter(|_| rng.gen()).cloned().collect();
        if !b.is_empty() {
            return b;
        }
    }
}
