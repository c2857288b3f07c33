use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::Automaton;

/// Exact word counts per length and cumulatively, `c_0..c_n` and `|L^{≤i}|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    #[serde(serialize_with = "crate::report::big_vec")]
    pub per_length: Vec<BigUint>,
    #[serde(serialize_with = "crate::report::big_vec")]
    pub cumulative: Vec<BigUint>,
}

impl CountTable {
    pub fn max_len(&self) -> usize {
        self.per_length.len() - 1
    }

    /// `|L^{≤n}|`.
    pub fn upto(&self, n: usize) -> &BigUint {
        &self.cumulative[n]
    }

    /// `|L^{≤n+1}| / |L^{≤n}|` for every `n` with a nonzero denominator.
    pub fn ratios(&self) -> Vec<(usize, BigRational)> {
        self.cumulative
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !w[0].is_zero())
            .map(|(n, w)| (n, BigRational::new(w[1].clone().into(), w[0].clone().into())))
            .collect()
    }

    /// The largest ratio in [`CountTable::ratios`], the witness constant of the growth bound.
    pub fn max_ratio(&self) -> Option<BigRational> {
        self.ratios().into_iter().map(|(_, r)| r).max()
    }

    /// Cumulative counts as `f64` for display.
    pub fn cumulative_f64(&self) -> Vec<f64> {
        self.cumulative.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }
}

impl Automaton {
    /// Counts accepted words of each length up to `n` by iterating the transition matrix.
    pub fn count_upto(&self, n: usize) -> CountTable {
        let dfa = self.determinize();
        let states = dfa.num_states();
        let mut vec = vec![BigUint::zero(); states];
        vec[dfa.initial()[0] as usize] = BigUint::from(1u32);
        let mut per_length = Vec::with_capacity(n + 1);
        for len in 0..=n {
            let count = (0..states)
                .filter(|&q| dfa.is_accepting(q as u32))
                .fold(BigUint::zero(), |acc, q| acc + &vec[q]);
            per_length.push(count);
            if len == n {
                break;
            }
            let mut next = vec![BigUint::zero(); states];
            for (q, c) in vec.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(_, t) in dfa.transitions(q as u32) {
                    next[t as usize] += c;
                }
            }
            vec = next;
        }
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = BigUint::zero();
        for c in &per_length {
            acc += c;
            cumulative.push(acc.clone());
        }
        CountTable { per_length, cumulative }
    }
}
