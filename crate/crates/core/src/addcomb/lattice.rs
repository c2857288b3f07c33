//! Lattice points in open symmetric boxes: the convex-body lemma and the discrete John lemma.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::progression::{fmt_point, rank, Point};
use crate::error::{Error, Result};
use crate::report::fmt_rational;

/// `Γ = Σ Z·basis_j ⊂ Q^k` and the box `B = Π (−half_i, half_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInstance {
    pub basis: Vec<Point>,
    pub half: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Inverse of a square rational matrix, or `None` when singular.
fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..n).map(|j| if i == j { q(1) } else { q(0) })).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = q(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else { return q(0) };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &a[col][c] * &f;
                a[r][c] -= t;
            }
        }
    }
    det
}

impl LatticeInstance {
    pub fn new(basis: Vec<Point>, half: Vec<BigRational>) -> Result<LatticeInstance> {
        let k = half.len();
        if basis.is_empty() || basis.iter().any(|b| b.len() != k) {
            return Err(Error::Precondition(format!("basis vectors must have dimension {k}")));
        }
        if half.iter().any(|b| !b.is_positive()) {
            return Err(Error::Precondition("box bounds must be positive".into()));
        }
        if rank(&basis) != basis.len() {
            return Err(Error::Precondition("basis vectors are dependent".into()));
        }
        Ok(LatticeInstance { basis, half })
    }

    /// Parses `"1,0;0,1"` and `"2.5,1.5"`.
    pub fn parse(basis: &str, half: &str) -> Result<LatticeInstance> {
        let rows = basis
            .split(';')
            .map(crate::presentation::GroupElement::parse_rational_list)
            .collect::<Result<Vec<_>>>()?;
        LatticeInstance::new(rows, crate::presentation::GroupElement::parse_rational_list(half)?)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.half.len()
    }

    pub fn volume(&self) -> BigRational {
        self.half.iter().fold(q(1), |acc, b| acc * b * q(2))
    }

    /// `|det basis|` for a full-rank instance.
    pub fn covolume(&self) -> Result<BigRational> {
        if self.rank() != self.dim() {
            return Err(Error::Precondition("covolume needs a full-rank basis".into()));
        }
        Ok(determinant(&self.basis).abs())
    }

    pub fn point(&self, c: &[i64]) -> Point {
        (0..self.dim()).map(|i| c.iter().zip(&self.basis).map(|(&cj, b)| &b[i] * q(cj)).sum()).collect()
    }

    pub fn in_box(&self, x: &Point) -> bool {
        x.iter().zip(&self.half).all(|(xi, b)| xi.abs() < *b)
    }

    /// `B ∩ Γ` with lattice coordinates, in lexicographic order of the coordinates.
    pub fn points(&self) -> Vec<(Vec<i64>, Point)> {
        let r = self.rank();
        // r coordinates on which the basis is invertible bound the lattice coordinates
        let mut rows = Vec::new();
        for i in 0..self.dim() {
            let mut trial: Vec<Point> = rows.iter().map(|&j: &usize| self.basis.iter().map(|b| b[j].clone()).collect()).collect();
            trial.push(self.basis.iter().map(|b| b[i].clone()).collect());
            if rank(&trial) == trial.len() {
                rows.push(i);
            }
            if rows.len() == r {
                break;
            }
        }
        let sub: Vec<Vec<BigRational>> = rows.iter().map(|&i| self.basis.iter().map(|b| b[i].clone()).collect()).collect();
        let inv = inverse(&sub).expect("independent rows");
        let bound: Vec<i64> = (0..r)
            .map(|j| {
                let s: BigRational = rows.iter().enumerate().map(|(t, &i)| inv[j][t].abs() * &self.half[i]).sum();
                s.floor().to_integer().to_i64().unwrap_or(i64::MAX)
            })
            .collect();
        // integer arithmetic over a common denominator
        let den = self.basis.iter().flatten().chain(&self.half).fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer().to_i128().expect("small lattice");
        let b: Vec<Vec<i128>> = self.basis.iter().map(|v| v.iter().map(scale).collect()).collect();
        let h: Vec<i128> = self.half.iter().map(scale).collect();
        let mut out = Vec::new();
        let mut c: Vec<i64> = bound.iter().map(|&x| -x).collect();
        loop {
            let inside = (0..self.dim()).all(|i| {
                let x: i128 = c.iter().zip(&b).map(|(&cj, v)| cj as i128 * v[i]).sum();
                x.abs() < h[i]
            });
            if inside {
                out.push((c.clone(), self.point(&c)));
            }
            let mut j = r;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if c[j] < bound[j] {
                    c[j] += 1;
                    break;
                }
                c[j] = -bound[j];
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiReport {
    pub dim: usize,
    pub volume: String,
    pub covolume: String,
    /// `(2^d/d!)·covol`.
    pub threshold: String,
    pub hypothesis_holds: bool,
    pub span_dim: usize,
    pub points: Vec<String>,
    /// `span_dim < d` whenever the hypothesis holds.
    pub passed: bool,
}

/// The convex-body lemma: `vol B < (2^d/d!)·covol Γ` forces `dim Span(B ∩ Γ) < d`.
pub fn minkowski_audit(l: &LatticeInstance) -> Result<MinkowskiReport> {
    let d = l.dim();
    if d > 3 {
        return Err(Error::Precondition("dimension at most 3".into()));
    }
    let covol = l.covolume()?;
    let fact: i64 = (1..=d as i64).product();
    let threshold = BigRational::new(BigInt::from(1u64 << d), fact.into()) * &covol;
    let vol = l.volume();
    let hyp = vol < threshold;
    let pts: Vec<Point> = l.points().into_iter().map(|(_, x)| x).collect();
    let span_dim = rank(&pts);
    Ok(MinkowskiReport {
        dim: d,
        volume: fmt_rational(&vol),
        covolume: fmt_rational(&covol),
        threshold: fmt_rational(&threshold),
        hypothesis_holds: hyp,
        span_dim,
        points: pts.iter().map(fmt_point).collect(),
        passed: !hyp || span_dim < d,
    })
}

/// A random full-rank instance of dimension `d ≤ 3` satisfying the volume hypothesis.
pub fn random_minkowski_instance(rng: &mut ChaCha8Rng, d: usize) -> LatticeInstance {
    loop {
        let basis: Vec<Point> = (0..d).map(|_| (0..d).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        let det = determinant(&basis).abs();
        if det.is_zero() {
            continue;
        }
        let fact: i64 = (1..=d as i64).product();
        let threshold = BigRational::new(BigInt::from(1u64 << d), fact.into()) * det;
        let mut half: Vec<BigRational> = (1..d).map(|_| BigRational::new(rng.gen_range(1..=12).into(), 4.into())).collect();
        let partial = half.iter().fold(q(1), |acc, b| acc * b * q(2));
        // the last side closes the volume at a fraction u < 1 of the threshold
        let u = BigRational::new(rng.gen_range(1..=9).into(), 10.into());
        half.push(u * threshold / (partial * q(2)));
        return LatticeInstance::new(basis, half).expect("independent basis");
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JohnReport {
    pub rank: usize,
    pub w: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    /// `r^{2r}`.
    pub factor: u64,
    pub certified: bool,
    pub points: Vec<String>,
}

/// Searches independent `w ∈ Γ^r` and `N` with `(−N,N)·w ⊆ B ∩ Γ ⊆ (−r^{2r}N, r^{2r}N)·w`.
///
/// Candidates for `w` are the lattice points in the box and the basis vectors together with
/// their sums and differences; among certified choices the largest `Π N_i` wins.
pub fn discrete_john(l: &LatticeInstance) -> Result<JohnReport> {
    let r = l.rank();
    if r > 2 {
        return Err(Error::Precondition("rank at most 2".into()));
    }
    let factor = (r as u64).pow(2 * r as u32);
    let pts = l.points();
    let mut cands: Vec<Vec<i64>> = pts.iter().map(|(c, _)| c.clone()).collect();
    for j in 0..r {
        let mut e = vec![0i64; r];
        e[j] = 1;
        cands.push(e);
    }
    if r == 2 {
        cands.push(vec![1, 1]);
        cands.push(vec![1, -1]);
    }
    let mut cands: Vec<Vec<i64>> = cands
        .into_iter()
        .filter(|c| c.iter().any(|&x| x != 0))
        .map(|c| if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { c.iter().map(|x| -x).collect() } else { c })
        .collect();
    cands.sort_by_key(|c| {
        let linf = c.iter().map(|x| x.abs()).max().unwrap();
        let l1: i64 = c.iter().map(|x| x.abs()).sum();
        let lead = c.iter().position(|&x| x != 0).unwrap();
        (linf, l1, lead, c.clone())
    });
    cands.dedup();
    let tuples: Vec<Vec<usize>> = if r == 1 {
        (0..cands.len()).map(|i| vec![i]).collect()
    } else {
        (0..cands.len()).flat_map(|i| (0..cands.len()).filter(move |&j| j != i).map(move |j| vec![i, j])).collect()
    };
    let mut best: Option<(u64, Vec<usize>, Vec<u64>)> = None;
    for t in tuples {
        let w: Vec<&Vec<i64>> = t.iter().map(|&i| &cands[i]).collect();
        let wm: Vec<Vec<BigRational>> = (0..r).map(|row| (0..r).map(|col| q(w[col][row])).collect()).collect();
        let Some(winv) = inverse(&wm) else { continue };
        let n = largest_inner(l, &w);
        let upper = pts.iter().all(|(c, _)| {
            (0..r).all(|i| {
                let a: BigRational = (0..r).map(|j| &winv[i][j] * q(c[j])).sum();
                a.is_integer() && a.abs() < q((factor * n[i]) as i64)
            })
        });
        if !upper {
            continue;
        }
        let vol: u64 = n.iter().product();
        if best.as_ref().is_none_or(|b| vol > b.0) {
            best = Some((vol, t, n));
        }
    }
    let points: Vec<String> = pts.iter().map(|(_, x)| fmt_point(x)).collect();
    Ok(match best {
        Some((_, t, n)) => JohnReport {
            rank: r,
            w: t.iter().map(|&i| fmt_point(&l.point(&cands[i]))).collect(),
            n,
            factor,
            certified: true,
            points,
        },
        None => JohnReport { rank: r, w: Vec::new(), n: Vec::new(), factor, certified: false, points },
    })
}

/// The `N` maximizing `Π N_i` with all corners `Σ ±(N_i − 1) w_i` inside the box.
fn largest_inner(l: &LatticeInstance, w: &[&Vec<i64>]) -> Vec<u64> {
    let r = w.len();
    let fits = |n: &[u64]| {
        (0..1u32 << r).all(|mask| {
            let c: Vec<i64> = (0..r)
                .map(|j| (0..r).map(|i| (if mask >> i & 1 == 1 { -1 } else { 1 }) * (n[i] as i64 - 1) * w[i][j]).sum())
                .collect();
            l.in_box(&l.point(&c))
        })
    };
    if r == 1 {
        let mut n = 1;
        while fits(&[n + 1]) {
            n += 1;
        }
        return vec![n];
    }
    let mut best = vec![1, 1];
    let mut n1 = 1;
    while fits(&[n1, 1]) {
        let mut n2 = 1;
        while fits(&[n1, n2 + 1]) {
            n2 += 1;
        }
        if n1 * n2 > best[0] * best[1] {
            best = vec![n1, n2];
        }
        n1 += 1;
    }
    best
}

/// A random rank-`r` lattice in `Q^2` with a box, for the John audit.
pub fn random_john_instance(rng: &mut ChaCha8Rng, r: usize) -> LatticeInstance {
    loop {
        let basis: Vec<Point> = (0..r).map(|_| (0..2).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        if rank(&basis) != r {
            continue;
        }
        let half = (0..2).map(|_| BigRational::new(rng.gen_range(2..=30).into(), 4.into())).collect();
        return LatticeInstance::new(basis, half).expect("independent basis");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn worked_minkowski() {
        let l = LatticeInstance::parse("1,0;0,1", "0.7,0.7").unwrap();
        let r = minkowski_audit(&l).unwrap();
        assert_eq!((r.volume.as_str(), r.threshold.as_str()), ("49/25", "2"));
        assert!(r.hypothesis_holds && r.passed);
        assert_eq!(r.points, ["(0, 0)"]);
        let l = LatticeInstance::parse("1,0;0,3", "1.2,1.2").unwrap();
        let r = minkowski_audit(&l).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.points, ["(-1, 0)", "(0, 0)", "(1, 0)"]);
        assert_eq!(r.span_dim, 1);
        let l = LatticeInstance::parse("1,0;0,1", "1.1,1.1").unwrap();
        let r = minkowski_audit(&l).unwrap();
        assert!(!r.hypothesis_holds && r.passed);
        assert_eq!(r.span_dim, 2);
    }

    #[test]
    fn worked_john() {
        let l = LatticeInstance::parse("1,0;0,1", "2.5,1.5").unwrap();
        let r = discrete_john(&l).unwrap();
        assert!(r.certified);
        assert_eq!(r.w, ["(1, 0)", "(0, 1)"]);
        assert_eq!(r.n, [3, 2]);
        assert_eq!(r.factor, 16);
        assert_eq!(r.points.len(), 15);
        let l = LatticeInstance::parse("2,0", "5,5").unwrap();
        let r = discrete_john(&l).unwrap();
        assert_eq!((r.w.clone(), r.n.clone()), (vec!["(2, 0)".to_string()], vec![3]));
        let l = LatticeInstance::parse("3,0;0,3", "1,1").unwrap();
        let r = discrete_john(&l).unwrap();
        assert!(r.certified);
        assert_eq!(r.n, [1, 1]);
    }

    #[test]
    fn random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..60 {
            let l = random_minkowski_instance(&mut rng, 1 + i % 3);
            let r = minkowski_audit(&l).unwrap();
            assert!(r.hypothesis_holds && r.passed, "{l:?}");
        }
        for i in 0..40 {
            let l = random_john_instance(&mut rng, 1 + i % 2);
            assert!(discrete_john(&l).unwrap().certified, "{l:?}");
        }
    }
}
