//! Growth of level sets `A_n = D^{≤ l0 + n·r}` and the audits of their properties.
//!
//! `r` is the state count of the minimal complete DFA of the addition relation, and
//! `h(p)` the same count for the graph of `x ↦ p·x`.

mod audit;
mod trace;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

pub use audit::{
    preimage_audit, properties_audit, section_length_audit, sumset_audit, Audit, PreimageLevel, PreimageReport,
    PropertiesReport, SectionReport, SumsetLevel,
};
pub use trace::{level_norm, norm_jump, obstruction_trace, Jump, ObstructionTrace, TraceStep};

use crate::automaton::{Automaton, CountTable};
use crate::error::{Error, Result};
use crate::presentation::{equality, Presentation};
use crate::report::fmt_rational;

#[derive(Clone, Debug)]
pub struct GrowthParams {
    pub r: usize,
    pub l0: usize,
    /// `max_{n < n_max} |D^{≤n+1}| / |D^{≤n}|`.
    pub c1_observed: BigRational,
    pub n_max: usize,
    pub counts: CountTable,
}

impl GrowthParams {
    /// Word length bounding `A_n`.
    pub fn level_length(&self, n: usize) -> usize {
        self.l0 + n * self.r
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "l0": self.l0,
            "C1": fmt_rational(&self.c1_observed),
            "n_max": self.n_max,
            "r_counts": "states of the minimal complete DFA",
            "ratios": self.counts.ratios().iter().map(|(n, q)| serde_json::json!([n, fmt_rational(q)])).collect::<Vec<_>>(),
        })
    }
}

impl Serialize for GrowthParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `l0 = min { l : 0 ∈ D^{≤l} and |D^{≤l}| ≥ 2 }`.
fn minimal_level(p: &Presentation) -> Result<usize> {
    let zero = p.zero_word().len();
    let live = p.domain().min_dfa().num_states();
    let counts = p.domain().count_upto(zero.max(live + 1));
    (zero..=counts.max_len())
        .find(|&l| *counts.upto(l) >= BigUint::from(2u32))
        .ok_or_else(|| Error::Precondition("the domain has fewer than two elements".into()))
}

pub fn growth_params(p: &Presentation, n_max: usize) -> Result<GrowthParams> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max ≥ 1".into()));
    }
    let r = p.add().min_dfa().complete_state_count();
    let l0 = minimal_level(p)?;
    let counts = p.domain().count_upto(n_max);
    let c1_observed = counts.max_ratio().unwrap_or_else(|| BigRational::from_integer(1.into()));
    Ok(GrowthParams { r, l0, c1_observed, n_max, counts })
}

/// `A_n` as an automaton.
pub fn level_set(p: &Presentation, params: &GrowthParams, n: usize) -> Automaton {
    p.domain().truncate(params.level_length(n)).min_dfa()
}

/// `S + S = {w : Add(u, v, w) for some u, v ∈ S}`; `S` must lie in the domain.
pub fn sumset(p: &Presentation, s: &Automaton) -> Result<Automaton> {
    if !s.is_subset_of(p.domain())? {
        return Err(Error::Precondition("the set is not contained in the domain".into()));
    }
    let tuples = p.add().intersection(&s.embed(3, &[0])?)?.intersection(&s.embed(3, &[1])?)?;
    Ok(tuples.project(0)?.project(0)?.min_dfa())
}

/// The graph of `x ↦ p·x`.
#[derive(Clone, Debug)]
pub struct MulGraph {
    pub p: u64,
    pub graph: Automaton,
    pub h: usize,
}

/// Builds `M_p` by composing addition: `M_{k+1}(x, y) ⇔ ∃t. M_k(x, t) ∧ Add(t, x, y)`.
pub fn mul_graph(p: &Presentation, factor: u64) -> Result<MulGraph> {
    if factor == 0 {
        return Err(Error::Precondition("p ≥ 1".into()));
    }
    let step = p.add().embed(3, &[1, 0, 2])?;
    let mut g = equality(p).min_dfa();
    for _ in 1..factor {
        g = g.embed(3, &[0, 1])?.intersection(&step)?.project(1)?.min_dfa();
    }
    let h = g.complete_state_count();
    Ok(MulGraph { p: factor, graph: g, h })
}
