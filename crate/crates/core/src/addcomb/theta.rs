//! `θ(A, d)`: the least `|P|/|A|` over proper progressions `P ⊇ A` of rank at most `d`.
//!
//! Rank 1 has a closed form. A covering progression with step `s` must have every
//! difference from its base point in `sZ`, so `s` divides `g`, the rational gcd of the
//! differences of `A`, and the shortest cover is `min A + [0, (max A − min A)/g] · g`.
//! Higher ranks are searched over generators taken from differences of `A` divided by
//! small integers; such values are upper bounds unless they reach the floor `|P| = |A|`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::progression::{fmt_point, scale_point, sub_points, Ambient, Point, Progression};
use crate::error::{Error, Result};
use crate::report::fmt_rational;

#[derive(Clone, Debug)]
pub struct ThetaBounds {
    /// Largest `Π N_i` tried by the search.
    pub cap: u64,
    /// Differences of `A` are divided by `1..=denominators` to form candidate generators.
    pub denominators: u64,
    /// Overrides the derived candidate generators.
    pub generators: Option<Vec<Point>>,
}

impl Default for ThetaBounds {
    fn default() -> Self {
        ThetaBounds { cap: 64, denominators: 2, generators: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaResult {
    /// `None` is `∞`: no covering progression of rank `≤ d` exists (or none within bounds).
    pub value: Option<BigRational>,
    pub witness: Option<Progression>,
    /// The value is exact rather than an upper bound (or, for `∞`, a proven non-existence).
    pub certified: bool,
}

impl ThetaResult {
    pub fn value_string(&self) -> String {
        self.value.as_ref().map_or_else(|| "inf".to_string(), fmt_rational)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "theta": self.value_string(),
            "witness": self.witness.as_ref().map(Progression::to_json),
            "certified": self.certified,
        })
    }
}

impl Serialize for ThetaResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn sign_canonical(mut x: Point) -> Point {
    if x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        x = x.iter().map(|c| -c).collect();
    }
    x
}

/// Nonzero differences of `a`, sign-normalized, divided by `1..=denominators`, deduplicated and sorted.
pub fn candidate_generators(a: &[Point], denominators: u64) -> Vec<Point> {
    let mut out = BTreeSet::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            let d = sub_points(x, y);
            if d.iter().all(Zero::is_zero) {
                continue;
            }
            let d = sign_canonical(d);
            for k in 1..=denominators.max(1) {
                out.insert(scale_point(&d, &BigRational::new(BigInt::one(), BigInt::from(k))));
            }
        }
    }
    out.into_iter().collect()
}

fn rational_gcd(values: &[BigRational]) -> BigRational {
    let l = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(&(v * BigRational::from_integer(l.clone())).to_integer()));
    BigRational::new(g, l)
}

/// The exact rank-1 answer: `None` when the points are not collinear.
fn rank_one(a: &[Point]) -> Option<(BigRational, Progression)> {
    let m = a.len();
    let k = a[0].len();
    let v0 = &a[0];
    let dir = a.iter().map(|x| sub_points(x, v0)).find(|d| d.iter().any(|c| !c.is_zero()));
    let Some(dir) = dir else {
        let p = Progression::new(Ambient::Rational(k), v0.clone(), vec![vec![BigRational::one(); k]], vec![1]).ok()?;
        return Some((BigRational::one(), p));
    };
    let lead = dir.iter().position(|c| !c.is_zero()).unwrap();
    let mut ts = Vec::with_capacity(m);
    for x in a {
        let d = sub_points(x, v0);
        let t = &d[lead] / &dir[lead];
        if scale_point(&dir, &t) != d {
            return None;
        }
        ts.push(t);
    }
    let lo = ts.iter().min().unwrap().clone();
    let hi = ts.iter().max().unwrap().clone();
    let diffs: Vec<BigRational> = ts.iter().map(|t| t - &lo).filter(|t| !t.is_zero()).collect();
    let g = rational_gcd(&diffs);
    let len = ((&hi - &lo) / &g).to_integer() + BigInt::one();
    let base = super::progression::add_points(v0, &scale_point(&dir, &lo));
    let n = len.to_u64()?;
    let p = Progression::new(Ambient::Rational(k), base, vec![scale_point(&dir, &g)], vec![n]).ok()?;
    Some((BigRational::new(len, BigInt::from(m)), p))
}

/// Ordered factorizations of `s` into `parts` factors, each at least 2.
fn factorizations(s: u64, parts: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
    if parts == 0 {
        if s == 1 {
            out.push(cur.clone());
        }
        return;
    }
    for f in 2..=s {
        if s.is_multiple_of(f) {
            cur.push(f);
            factorizations(s / f, parts - 1, out, cur);
            cur.pop();
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Points and generators rescaled to a common integer lattice.
struct Scaled {
    a: Vec<Vec<i64>>,
    gens: Vec<Vec<i64>>,
    denom: BigInt,
}

fn scale_all(a: &[Point], gens: &[Point]) -> Option<Scaled> {
    let l = a.iter().chain(gens).flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let lr = BigRational::from_integer(l.clone());
    let conv = |x: &Point| -> Option<Vec<i64>> { x.iter().map(|c| (c * &lr).to_integer().to_i64()).collect() };
    let a = a.iter().map(conv).collect::<Option<Vec<_>>>()?;
    // headroom for sums of up to `cap` generators
    if a.iter().flatten().any(|c| c.abs() > 1 << 40) {
        return None;
    }
    let gens = gens.iter().map(conv).collect::<Option<Vec<_>>>()?;
    if gens.iter().flatten().any(|c| c.abs() > 1 << 40) {
        return None;
    }
    Some(Scaled { a, gens, denom: l })
}

/// Smallest proper cover of rank `2..=d` with `Π N_i < limit`, as (size, generator indices, N, v0).
fn search(s: &Scaled, d: usize, limit: u64) -> Option<(u64, Vec<usize>, Vec<u64>, Vec<i64>)> {
    let m = s.a.len() as u64;
    let anchor = &s.a[0];
    let k = anchor.len();
    let mut points = HashSet::new();
    let mut combs: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
    for (r, c) in combs.iter_mut().enumerate().skip(2) {
        *c = combinations(s.gens.len(), r);
    }
    for size in m.max(4)..limit {
        for r in 2..=d {
            let mut facs = Vec::new();
            factorizations(size, r, &mut facs, &mut Vec::new());
            if facs.is_empty() {
                continue;
            }
            for comb in &combs[r] {
                for n in &facs {
                    // v0 = anchor − Σ c_i v_i for every coefficient of the anchor
                    let mut coeff = vec![0u64; r];
                    loop {
                        let mut v0 = anchor.clone();
                        for (i, &g) in comb.iter().enumerate() {
                            for j in 0..k {
                                v0[j] -= coeff[i] as i64 * s.gens[g][j];
                            }
                        }
                        points.clear();
                        let mut layer = vec![v0.clone()];
                        for (i, &g) in comb.iter().enumerate() {
                            let mut next = Vec::with_capacity(layer.len() * n[i] as usize);
                            for base in &layer {
                                let mut x = base.clone();
                                for _ in 0..n[i] {
                                    next.push(x.clone());
                                    for j in 0..k {
                                        x[j] += s.gens[g][j];
                                    }
                                }
                            }
                            layer = next;
                        }
                        points.extend(layer);
                        if points.len() as u64 == size && s.a.iter().all(|x| points.contains(x)) {
                            return Some((size, comb.clone(), n.clone(), v0));
                        }
                        let mut i = 0;
                        while i < r {
                            coeff[i] += 1;
                            if coeff[i] < n[i] {
                                break;
                            }
                            coeff[i] = 0;
                            i += 1;
                        }
                        if i == r {
                            break;
                        }
                    }
                }
            }
        }
    }
    None
}

/// `θ(A, d)` for a finite `A ⊂ Q^k`.
pub fn theta(a: &[Point], d: usize, bounds: &ThetaBounds) -> Result<ThetaResult> {
    let set: BTreeSet<Point> = a.iter().cloned().collect();
    let a: Vec<Point> = set.into_iter().collect();
    let Some(first) = a.first() else { return Err(Error::Precondition("θ needs a nonempty set".into())) };
    let k = first.len();
    if a.iter().any(|x| x.len() != k) {
        return Err(Error::Precondition("points of different dimensions".into()));
    }
    let m = a.len();
    if d == 0 {
        if m == 1 {
            let p = Progression::new(Ambient::Rational(k), first.clone(), Vec::new(), Vec::new())?;
            return Ok(ThetaResult { value: Some(BigRational::one()), witness: Some(p), certified: true });
        }
        return Ok(ThetaResult { value: None, witness: None, certified: true });
    }
    let one = rank_one(&a);
    if d == 1 || one.as_ref().is_some_and(|(v, _)| v.is_one()) {
        return Ok(match one {
            Some((v, p)) => ThetaResult { value: Some(v), witness: Some(p), certified: true },
            // no rank-1 cover of non-collinear points
            None => ThetaResult { value: None, witness: None, certified: true },
        });
    }
    let gens = bounds.generators.clone().unwrap_or_else(|| candidate_generators(&a, bounds.denominators));
    let best_size = one.as_ref().map(|(v, _)| (v * BigRational::from_integer(m.into())).to_integer());
    let limit = match &best_size {
        Some(s) => s.to_u64().unwrap_or(u64::MAX).min(bounds.cap + 1),
        None => bounds.cap + 1,
    };
    let found = scale_all(&a, &gens).and_then(|s| search(&s, d, limit).map(|hit| (hit, s.denom)));
    if let Some(((size, comb, n, v0), denom)) = found {
        let back = |x: &[i64]| -> Point { x.iter().map(|&c| BigRational::new(c.into(), denom.clone())).collect() };
        let p = Progression::new(Ambient::Rational(k), back(&v0), comb.iter().map(|&g| gens[g].clone()).collect(), n)?;
        return Ok(ThetaResult {
            value: Some(BigRational::new(size.into(), m.into())),
            witness: Some(p),
            certified: size as usize == m,
        });
    }
    Ok(match one {
        Some((v, p)) => ThetaResult { value: Some(v), witness: Some(p), certified: false },
        None => ThetaResult { value: None, witness: None, certified: false },
    })
}

/// [`theta`] on a set of scalars.
pub fn theta_scalars(a: &[BigRational], d: usize, bounds: &ThetaBounds) -> Result<ThetaResult> {
    let pts: Vec<Point> = a.iter().map(|x| vec![x.clone()]).collect();
    theta(&pts, d, bounds)
}

/// `v0: 0, v: [1], N: [4]` for logs.
pub fn describe(p: &Progression) -> String {
    let v: Vec<String> = p.v.iter().map(fmt_point).collect();
    format!("v0 = {}, v = [{}], N = {:?}", fmt_point(&p.v0), v.join(", "), p.n)
}
