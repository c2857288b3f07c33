//! The rank-increase audit: adding one element of larger `p`-norm to `A` makes it hard to cover.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::norm::rational_norm;
use super::progression::Point;
use super::theta::{theta, ThetaBounds, ThetaResult};
use crate::error::{Error, Result};
use crate::report::fmt_rational;

#[derive(Clone, Debug, Serialize)]
pub struct IncrRankReport {
    pub p: u64,
    pub d: usize,
    pub norm_a: String,
    pub norm_z: String,
    /// `θ(A ∪ {z}, d)`.
    pub theta_extended: ThetaResult,
    /// `θ(A, d − 1)`.
    pub theta_lower_rank: ThetaResult,
    /// `p^{1/d}/(4d)`, as text since it is irrational for `d ≥ 2`.
    pub root_term: String,
    /// For `d = 1`: `(p + 1)/(|A| + 1)`, the floor implied by `N_1 ≥ p + 1`.
    pub floor: Option<String>,
    /// For `d = 1`: the length of the optimal covering progression.
    pub cover_length: Option<u64>,
    /// Pass/fail for `d = 1`; `None` for the descriptive `d ≥ 2` report.
    pub passed: Option<bool>,
}

fn point_norm(x: &Point, p: u64) -> BigRational {
    x.iter().map(|c| rational_norm(c, p)).max().unwrap_or_default()
}

/// Checks `‖z‖_p > ‖A‖_p`, then computes both θ values; at `d = 1` asserts `θ(A ∪ {z}, 1) ≥ (p+1)/(|A|+1)`.
pub fn incr_rank_audit(a: &[Point], z: &Point, p: u64, d: usize, bounds: &ThetaBounds) -> Result<IncrRankReport> {
    if d == 0 {
        return Err(Error::Precondition("d ≥ 1".into()));
    }
    let mut set: Vec<Point> = a.to_vec();
    set.sort();
    set.dedup();
    if set.len() < 2 {
        return Err(Error::Precondition("|A| ≥ 2".into()));
    }
    let na = set.iter().map(|x| point_norm(x, p)).max().unwrap();
    let nz = point_norm(z, p);
    if nz <= na {
        return Err(Error::Precondition(format!(
            "‖z‖_{p} = {} is not above ‖A‖_{p} = {}",
            fmt_rational(&nz),
            fmt_rational(&na)
        )));
    }
    let mut ext = set.clone();
    ext.push(z.clone());
    let theta_extended = theta(&ext, d, bounds)?;
    let theta_lower_rank = theta(&set, d - 1, bounds)?;
    let root_term = if d == 1 { format!("{}/4", p) } else { format!("{p}^(1/{d})/{}", 4 * d) };
    let (floor, cover_length, passed) = if d == 1 {
        let floor = BigRational::new(BigInt::from(p + 1), BigInt::from(set.len() + 1));
        let len = theta_extended.witness.as_ref().map(|w| w.n[0]);
        let ok = theta_extended.value.as_ref().is_none_or(|v| *v >= floor) && len.is_none_or(|n| n > p);
        (Some(fmt_rational(&floor)), len, Some(ok))
    } else {
        (None, None, None)
    };
    Ok(IncrRankReport {
        p,
        d,
        norm_a: fmt_rational(&na),
        norm_z: fmt_rational(&nz),
        theta_extended,
        theta_lower_rank,
        root_term,
        floor,
        cover_length,
        passed,
    })
}
