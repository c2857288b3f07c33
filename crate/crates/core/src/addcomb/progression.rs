//! Generalized arithmetic progressions `v0 + Σ a_i v_i`, `0 ≤ a_i < N_i`, and coset progressions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::mod_one;

/// A point of `Q^k`.
pub type Point = Vec<BigRational>;

/// Where the points live: `Q^k`, or `Q/Z` with coordinates reduced mod 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ambient {
    Rational(usize),
    Torsion,
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match self {
            Ambient::Rational(k) => *k,
            Ambient::Torsion => 1,
        }
    }

    pub fn reduce(&self, mut x: Point) -> Point {
        if *self == Ambient::Torsion {
            x[0] = mod_one(&x[0]);
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub ambient: Ambient,
    pub v0: Point,
    pub v: Vec<Point>,
    pub n: Vec<u64>,
}

pub fn add_points(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_points(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_point(a: &Point, c: &BigRational) -> Point {
    a.iter().map(|x| x * c).collect()
}

/// `1, 10`, `(1/2, 3)`: scalars bare, vectors parenthesized.
pub fn fmt_point(x: &Point) -> String {
    let parts: Vec<String> = x.iter().map(crate::report::fmt_rational).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

impl Progression {
    pub fn new(ambient: Ambient, v0: Point, v: Vec<Point>, n: Vec<u64>) -> Result<Progression> {
        let k = ambient.dim();
        if v0.len() != k || v.iter().any(|g| g.len() != k) {
            return Err(Error::Precondition(format!("points must have dimension {k}")));
        }
        if v.len() != n.len() || n.contains(&0) {
            return Err(Error::Precondition("one positive bound per generator".into()));
        }
        Ok(Progression { ambient, v0: ambient.reduce(v0), v, n })
    }

    /// A rational progression in one dimension from scalars.
    pub fn scalar(v0: BigRational, v: Vec<BigRational>, n: Vec<u64>) -> Result<Progression> {
        Progression::new(Ambient::Rational(1), vec![v0], v.into_iter().map(|g| vec![g]).collect(), n)
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    /// `Π N_i`, the size when proper.
    pub fn volume(&self) -> u128 {
        self.n.iter().map(|&x| x as u128).product()
    }

    /// The evaluated point set; fails when `Π N_i > cap`.
    pub fn points(&self, cap: u64) -> Result<BTreeSet<Point>> {
        if self.volume() > cap as u128 {
            return Err(Error::CapExceeded(format!("progression volume {} exceeds cap {cap}", self.volume())));
        }
        let mut out = BTreeSet::new();
        let mut layer = vec![self.v0.clone()];
        for (g, &n) in self.v.iter().zip(&self.n) {
            let mut next = Vec::with_capacity(layer.len() * n as usize);
            for base in &layer {
                let mut x = base.clone();
                for _ in 0..n {
                    next.push(x.clone());
                    x = self.ambient.reduce(add_points(&x, g));
                }
            }
            layer = next;
        }
        out.extend(layer);
        Ok(out)
    }

    /// Proper iff the coefficient map is injective, i.e. `|points| = Π N_i`.
    pub fn is_proper(&self, cap: u64) -> Result<bool> {
        Ok(self.points(cap)?.len() as u128 == self.volume())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "v0": fmt_point(&self.v0),
            "v": self.v.iter().map(fmt_point).collect::<Vec<_>>(),
            "N": self.n,
        })
    }
}

/// `H + P` in `Q/Z` with `H = ⟨h⟩` cyclic of order `|H|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetProgression {
    pub h: BigRational,
    pub order: u64,
    pub p: Progression,
}

impl CosetProgression {
    pub fn new(h: BigRational, p: Progression) -> Result<CosetProgression> {
        if p.ambient != Ambient::Torsion {
            return Err(Error::Precondition("coset progressions live in Q/Z".into()));
        }
        let h = mod_one(&h);
        let order = h.denom().try_into().map_err(|_| Error::CapExceeded("subgroup order".into()))?;
        Ok(CosetProgression { h, order, p })
    }

    /// The same set as a rank `d+1` progression: the cyclic generator appended with `N = |H|`.
    pub fn to_progression(&self) -> Progression {
        let mut v = self.p.v.clone();
        v.push(vec![self.h.clone()]);
        let mut n = self.p.n.clone();
        n.push(self.order);
        Progression { ambient: Ambient::Torsion, v0: self.p.v0.clone(), v, n }
    }

    /// Direct iff `|H + P| = |H|·|P|`.
    pub fn is_direct(&self, cap: u64) -> Result<bool> {
        let sum = self.to_progression().points(cap)?.len() as u128;
        Ok(sum == self.order as u128 * self.p.points(cap)?.len() as u128)
    }

    pub fn subgroup(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.order as usize);
        let mut x = BigRational::zero();
        for _ in 0..self.order {
            out.push(x.clone());
            x = mod_one(&(x + &self.h));
        }
        out
    }
}

/// Rank over `Q` of a set of points (exact Gaussian elimination).
pub fn rank(points: &[Point]) -> usize {
    let mut rows: Vec<Point> = points.iter().filter(|p| p.iter().any(|x| !x.is_zero())).cloned().collect();
    let Some(k) = rows.first().map(|r| r.len()) else { return 0 };
    let mut r = 0;
    for col in 0..k {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = BigRational::one() / &rows[r][col];
        let pivot = scale_point(&rows[r], &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                rows[i] = sub_points(&rows[i], &scale_point(&pivot, &f));
            }
        }
        rows[r] = pivot;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

pub fn int_point(xs: &[i64]) -> Point {
    xs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}
