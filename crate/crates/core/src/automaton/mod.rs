//! Synchronous multi-tape finite automata over a padded product alphabet.
//!
//! A `k`-tape automaton reads convolved words: column `j` holds the `j`-th
//! letter of every tape, or the padding symbol `⋄` once that tape has ended.
//! All languages handled here live inside the padding-valid words, so
//! complementation and projection are relative to that universe.

mod alphabet;
mod count;
mod ops;
mod text;

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

pub use alphabet::{convolve, deconvolve, is_padding_valid, Alphabet, Letter, Sym, DEFAULT_PAD};
pub use count::CountTable;
pub use ops::ProductKind;

pub type StateId = u32;

/// A (possibly nondeterministic) automaton. Missing transitions go to an implicit dead state.
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Arc<Alphabet>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    // sorted by (sym, target), no duplicates
    delta: Vec<Vec<(Sym, StateId)>>,
}

impl Automaton {
    /// An automaton with no states; add them with [`Automaton::add_state`].
    pub fn new(alphabet: Alphabet) -> Self {
        Self::with_shared(Arc::new(alphabet))
    }

    pub(crate) fn with_shared(alphabet: Arc<Alphabet>) -> Self {
        Automaton { alphabet, initial: Vec::new(), accepting: Vec::new(), delta: Vec::new() }
    }

    /// The empty language: one non-accepting initial state.
    pub fn empty(alphabet: Alphabet) -> Self {
        let mut a = Automaton::new(alphabet);
        let q = a.add_state(false);
        a.set_initial(q);
        a
    }

    /// The language `{ε}`.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        let mut a = Automaton::new(alphabet);
        let q = a.add_state(true);
        a.set_initial(q);
        a
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub(crate) fn shared_alphabet(&self) -> Arc<Alphabet> {
        self.alphabet.clone()
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn transitions(&self, q: StateId) -> &[(Sym, StateId)] {
        &self.delta[q as usize]
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.delta.push(Vec::new());
        (self.accepting.len() - 1) as StateId
    }

    pub fn set_initial(&mut self, q: StateId) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: StateId, accepting: bool) {
        self.accepting[q as usize] = accepting;
    }

    /// Adds `from --sym--> to`. Panics on the all-padding column.
    pub fn add_transition(&mut self, from: StateId, sym: Sym, to: StateId) {
        assert!(sym < self.alphabet.all_pad(), "all-padding column is not a legal label");
        let row = &mut self.delta[from as usize];
        if let Err(pos) = row.binary_search(&(sym, to)) {
            row.insert(pos, (sym, to));
        }
    }

    /// Removes one transition; returns whether it existed.
    pub fn remove_transition(&mut self, from: StateId, sym: Sym, to: StateId) -> bool {
        let row = &mut self.delta[from as usize];
        match row.binary_search(&(sym, to)) {
            Ok(pos) => {
                row.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Exactly one initial state and at most one successor per (state, column).
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().all(|row| row.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Successor in a deterministic automaton.
    pub fn step(&self, q: StateId, sym: Sym) -> Option<StateId> {
        let row = &self.delta[q as usize];
        let pos = row.partition_point(|&(s, _)| s < sym);
        row.get(pos).filter(|&&(s, _)| s == sym).map(|&(_, t)| t)
    }

    /// Membership of a convolved word (nondeterministic simulation).
    pub fn accepts(&self, word: &[Sym]) -> bool {
        let mut current: Vec<StateId> = self.initial.clone();
        let mut next = Vec::new();
        for &sym in word {
            next.clear();
            for &q in &current {
                let row = &self.delta[q as usize];
                let start = row.partition_point(|&(s, _)| s < sym);
                next.extend(row[start..].iter().take_while(|&&(s, _)| s == sym).map(|&(_, t)| t));
            }
            next.sort_unstable();
            next.dedup();
            std::mem::swap(&mut current, &mut next);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q as usize])
    }

    /// Membership of a tuple of words, convolved first.
    pub fn accepts_tuple(&self, words: &[&[Letter]]) -> bool {
        self.accepts(&convolve(&self.alphabet, words))
    }

    /// Size of the minimal complete DFA: live states plus the dead state when needed.
    ///
    /// Assumes `self` is already minimal (see [`Automaton::min_dfa`]).
    pub fn complete_state_count(&self) -> usize {
        if !self.accepting.iter().any(|&a| a) {
            return 1;
        }
        let legal = self.alphabet.all_pad() as usize;
        let incomplete = self.delta.iter().any(|row| row.len() < legal);
        self.num_states() + usize::from(incomplete)
    }

    /// Builds the automaton of states reachable from `inits` under `step`; deterministic when `inits` has one state.
    ///
    /// `step` receives the unpacked column and returns the successor, or `None` to reject.
    pub fn explore<S, F, A>(alphabet: Alphabet, inits: Vec<S>, step: F, accept: A) -> Automaton
    where
        S: Clone + Eq + Hash,
        F: Fn(&S, &[Letter]) -> Option<S>,
        A: Fn(&S) -> bool,
    {
        let columns: Vec<(Sym, Vec<Letter>)> = alphabet.legal_symbols().map(|s| (s, alphabet.unpack(s))).collect();
        let mut aut = Automaton::new(alphabet);
        let mut ids: HashMap<S, StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        for s in inits {
            let id = *ids.entry(s.clone()).or_insert_with(|| {
                queue.push_back(s.clone());
                aut.add_state(accept(&s))
            });
            aut.set_initial(id);
        }
        while let Some(s) = queue.pop_front() {
            let from = ids[&s];
            for (sym, letters) in &columns {
                if let Some(t) = step(&s, letters) {
                    let to = match ids.get(&t) {
                        Some(&id) => id,
                        None => {
                            let id = aut.add_state(accept(&t));
                            ids.insert(t.clone(), id);
                            queue.push_back(t);
                            id
                        }
                    };
                    aut.delta[from as usize].push((*sym, to));
                }
            }
        }
        for row in &mut aut.delta {
            row.sort_unstable();
            row.dedup();
        }
        aut
    }

    fn check_same_alphabet(&self, other: &Automaton) -> crate::Result<()> {
        if self.alphabet != other.alphabet {
            return Err(crate::Error::AlphabetMismatch(format!("{} vs {}", self.alphabet, other.alphabet)));
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Equality relation on all of `{0..b}*`, two tapes.
    pub fn equality(b: u32) -> Automaton {
        let alphabet = Alphabet::digits(b, 2);
        Automaton::explore(
            alphabet,
            vec![()],
            |_, col| if col[0] == col[1] && col[0] < b { Some(()) } else { None },
            |_| true,
        )
    }

    /// All words over `{0..b}`, one tape.
    pub fn universal(b: u32) -> Automaton {
        Automaton::explore(Alphabet::digits(b, 1), vec![()], |_, _| Some(()), |_| true)
    }

    /// Arity-1 words over `{0..b}` whose letter sum is ≡ r mod m.
    pub fn sum_mod(b: u32, m: u32, r: u32) -> Automaton {
        Automaton::explore(Alphabet::digits(b, 1), vec![0u32], |s, col| Some((s + col[0]) % m), |s| *s == r)
    }
}
