use std::collections::{HashMap, VecDeque};

use super::{Alphabet, Automaton, Letter, StateId, Sym};
use crate::error::{Error, Result};

/// Boolean combination performed by [`Automaton::product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Intersection,
    Union,
    Difference,
}

impl Automaton {
    /// Subset construction restricted to reachable subsets.
    pub fn determinize(&self) -> Automaton {
        if self.is_deterministic() {
            return self.clone();
        }
        let mut out = Automaton::with_shared(self.shared_alphabet());
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = self.initial.clone();
        let q0 = out.add_state(start.iter().any(|&q| self.is_accepting(q)));
        out.set_initial(q0);
        ids.insert(start.clone(), q0);
        queue.push_back(start);
        let mut moves: Vec<(Sym, StateId)> = Vec::new();
        while let Some(set) = queue.pop_front() {
            let from = ids[&set];
            moves.clear();
            for &q in &set {
                moves.extend_from_slice(self.transitions(q));
            }
            moves.sort_unstable();
            moves.dedup();
            let mut i = 0;
            while i < moves.len() {
                let sym = moves[i].0;
                let mut j = i;
                let mut target = Vec::new();
                while j < moves.len() && moves[j].0 == sym {
                    target.push(moves[j].1);
                    j += 1;
                }
                let to = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state(target.iter().any(|&q| self.is_accepting(q)));
                        ids.insert(target.clone(), id);
                        queue.push_back(target);
                        id
                    }
                };
                out.delta[from as usize].push((sym, to));
                i = j;
            }
        }
        out
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &stack {
            seen[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, t) in self.transitions(q) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub(crate) fn productive(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for &(_, t) in &self.delta[q] {
                rev[t as usize].push(q as StateId);
            }
        }
        let mut good = self.accepting.clone();
        let mut stack: Vec<StateId> = (0..n as StateId).filter(|&q| good[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !good[p as usize] {
                    good[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        good
    }

    /// Removes unreachable and non-productive states. An empty language becomes [`Automaton::empty`].
    pub fn trim(&self) -> Automaton {
        let reach = self.reachable();
        let prod = self.productive();
        let keep: Vec<bool> = reach.iter().zip(&prod).map(|(a, b)| *a && *b).collect();
        if !self.initial.iter().any(|&q| keep[q as usize]) {
            return Automaton::empty((*self.alphabet).clone());
        }
        let mut map = vec![StateId::MAX; self.num_states()];
        let mut out = Automaton::with_shared(self.shared_alphabet());
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = out.add_state(self.accepting[q]);
            }
        }
        for &q in &self.initial {
            if keep[q as usize] {
                out.set_initial(map[q as usize]);
            }
        }
        for q in 0..self.num_states() {
            if keep[q] {
                out.delta[map[q] as usize] = self.delta[q]
                    .iter()
                    .filter(|(_, t)| keep[*t as usize])
                    .map(|&(s, t)| (s, map[t as usize]))
                    .collect();
            }
        }
        out
    }

    /// Minimal trimmed DFA with canonical numbering (breadth-first from the initial state, by column order).
    pub fn min_dfa(&self) -> Automaton {
        let dfa = self.determinize().trim();
        if !dfa.accepting.iter().any(|&a| a) {
            return Automaton::empty((*self.alphabet).clone());
        }
        let n = dfa.num_states();
        // Moore refinement; missing transitions lead to the (implicit) dead class.
        let mut class: Vec<u32> = dfa.accepting.iter().map(|&a| u32::from(a)).collect();
        let mut num_classes = class.iter().collect::<std::collections::HashSet<_>>().len();
        loop {
            let mut sigs: HashMap<(u32, Vec<(Sym, u32)>), u32> = HashMap::new();
            let mut next = vec![0u32; n];
            for q in 0..n {
                let sig: Vec<(Sym, u32)> = dfa.delta[q].iter().map(|&(s, t)| (s, class[t as usize])).collect();
                let len = sigs.len() as u32;
                next[q] = *sigs.entry((class[q], sig)).or_insert(len);
            }
            let count = sigs.len();
            class = next;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }
        // canonical renumbering by BFS
        let mut order: Vec<u32> = vec![u32::MAX; num_classes];
        let mut rep: Vec<usize> = Vec::with_capacity(num_classes);
        let start = dfa.initial[0] as usize;
        order[class[start] as usize] = 0;
        rep.push(start);
        let mut head = 0;
        while head < rep.len() {
            let q = rep[head];
            head += 1;
            for &(_, t) in &dfa.delta[q] {
                let c = class[t as usize] as usize;
                if order[c] == u32::MAX {
                    order[c] = rep.len() as u32;
                    rep.push(t as usize);
                }
            }
        }
        let mut out = Automaton::with_shared(self.shared_alphabet());
        for &q in &rep {
            out.add_state(dfa.accepting[q]);
        }
        out.set_initial(0);
        for (i, &q) in rep.iter().enumerate() {
            out.delta[i] = dfa.delta[q].iter().map(|&(s, t)| (s, order[class[t as usize] as usize])).collect();
        }
        out
    }

    /// Boolean product of two automata over the same alphabet.
    pub fn product(kind: ProductKind, a: &Automaton, b: &Automaton) -> Result<Automaton> {
        a.check_same_alphabet(b)?;
        let a = a.determinize();
        let b = b.determinize();
        const DEAD: StateId = StateId::MAX;
        let acc = |qa: StateId, qb: StateId| {
            let x = qa != DEAD && a.is_accepting(qa);
            let y = qb != DEAD && b.is_accepting(qb);
            match kind {
                ProductKind::Intersection => x && y,
                ProductKind::Union => x || y,
                ProductKind::Difference => x && !y,
            }
        };
        let mut out = Automaton::with_shared(a.shared_alphabet());
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = (a.initial[0], b.initial[0]);
        let s0 = out.add_state(acc(start.0, start.1));
        out.set_initial(s0);
        ids.insert(start, s0);
        queue.push_back(start);
        let empty: &[(Sym, StateId)] = &[];
        while let Some((qa, qb)) = queue.pop_front() {
            let from = ids[&(qa, qb)];
            let ra = if qa == DEAD { empty } else { a.transitions(qa) };
            let rb = if qb == DEAD { empty } else { b.transitions(qb) };
            let mut moves: Vec<(Sym, (StateId, StateId))> = Vec::new();
            match kind {
                ProductKind::Intersection => {
                    for &(s, ta) in ra {
                        if let Some(tb) = b_step(rb, s) {
                            moves.push((s, (ta, tb)));
                        }
                    }
                }
                ProductKind::Difference => {
                    for &(s, ta) in ra {
                        moves.push((s, (ta, b_step(rb, s).unwrap_or(DEAD))));
                    }
                }
                ProductKind::Union => {
                    let (mut i, mut j) = (0, 0);
                    while i < ra.len() || j < rb.len() {
                        let sa = ra.get(i).map_or(Sym::MAX, |x| x.0);
                        let sb = rb.get(j).map_or(Sym::MAX, |x| x.0);
                        if sa == sb {
                            moves.push((sa, (ra[i].1, rb[j].1)));
                            i += 1;
                            j += 1;
                        } else if sa < sb {
                            moves.push((sa, (ra[i].1, DEAD)));
                            i += 1;
                        } else {
                            moves.push((sb, (DEAD, rb[j].1)));
                            j += 1;
                        }
                    }
                }
            }
            for (s, pair) in moves {
                let to = match ids.get(&pair) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state(acc(pair.0, pair.1));
                        ids.insert(pair, id);
                        queue.push_back(pair);
                        id
                    }
                };
                out.delta[from as usize].push((s, to));
            }
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Automaton) -> Result<Automaton> {
        Automaton::product(ProductKind::Intersection, self, other)
    }

    pub fn union(&self, other: &Automaton) -> Result<Automaton> {
        Automaton::product(ProductKind::Union, self, other)
    }

    pub fn difference(&self, other: &Automaton) -> Result<Automaton> {
        Automaton::product(ProductKind::Difference, self, other)
    }

    /// All padding-valid tuple-words over `alphabet`.
    pub fn padding_valid(alphabet: &Alphabet) -> Automaton {
        let pad = alphabet.pad_letter();
        Automaton::explore(
            alphabet.clone(),
            vec![0u64],
            |ended, col| {
                let mut next = *ended;
                for (t, &l) in col.iter().enumerate() {
                    if l == pad {
                        next |= 1 << t;
                    } else if ended & (1 << t) != 0 {
                        return None;
                    }
                }
                Some(next)
            },
            |_| true,
        )
    }

    /// Complement relative to the padding-valid words.
    pub fn complement(&self) -> Automaton {
        Automaton::padding_valid(&self.alphabet)
            .difference(self)
            .expect("same alphabet")
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !reach.iter().zip(&self.accepting).any(|(r, a)| *r && *a)
    }

    /// A shortest accepted word, found breadth-first.
    pub fn shortest_word(&self) -> Option<Vec<Sym>> {
        let mut parent: Vec<Option<(StateId, Sym)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if !seen[q as usize] {
                seen[q as usize] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q as usize] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((prev, sym)) = parent[cur as usize] {
                    word.push(sym);
                    cur = prev;
                }
                word.reverse();
                return Some(word);
            }
            for &(sym, t) in &self.delta[q as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, sym));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Language inclusion `L(self) ⊆ L(other)`.
    pub fn is_subset_of(&self, other: &Automaton) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Language equality via emptiness of both differences.
    pub fn equivalent(&self, other: &Automaton) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Existential projection erasing tape `tape` (0-based).
    ///
    /// Columns that become all-padding can only occur at the end of a word (the
    /// erased tape was the longest); they are absorbed into the acceptance condition.
    pub fn project(&self, tape: usize) -> Result<Automaton> {
        let k = self.arity();
        if k < 2 {
            return Err(Error::Precondition("projection needs at least two tapes".into()));
        }
        if tape >= k {
            return Err(Error::TapeOutOfRange { index: tape, arity: k });
        }
        let src = &self.alphabet;
        let dst = src.with_arity(k - 1);
        let dst_all_pad = dst.all_pad();
        let drop = |sym: Sym| -> Sym {
            let letters = src.unpack(sym);
            let rest: Vec<Letter> =
                letters.iter().enumerate().filter(|(t, _)| *t != tape).map(|(_, &l)| l).collect();
            debug_assert!(rest.len() == k - 1);
            dst.pack(&rest)
        };
        let n = self.num_states();
        let mut out = Automaton::new(dst.clone());
        for _ in 0..n {
            out.add_state(false);
        }
        for &q in &self.initial {
            out.set_initial(q);
        }
        // tail[q]: q reaches acceptance by reading only columns that vanish under projection
        let mut tail_edges: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            let mut row = Vec::with_capacity(self.delta[q].len());
            for &(s, t) in &self.delta[q] {
                let s2 = drop(s);
                if s2 == dst_all_pad {
                    tail_edges[t as usize].push(q as StateId);
                } else {
                    row.push((s2, t));
                }
            }
            row.sort_unstable();
            row.dedup();
            out.delta[q] = row;
        }
        let mut tail = self.accepting.clone();
        let mut stack: Vec<StateId> = (0..n as StateId).filter(|&q| tail[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &tail_edges[q as usize] {
                if !tail[p as usize] {
                    tail[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        out.accepting = tail;
        Ok(out)
    }

    /// Cylindrification: a `k`-tape automaton whose tapes `map[0], map[1], ...` read `self`'s tapes.
    ///
    /// Tapes not in `map` are unconstrained (padding-valid). A tape of `self` may be
    /// mapped to the same target twice, which forces the two words to be equal.
    pub fn embed(&self, k: usize, map: &[usize]) -> Result<Automaton> {
        if map.len() != self.arity() {
            return Err(Error::Precondition(format!(
                "tape map has {} entries, automaton has {} tapes",
                map.len(),
                self.arity()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= k) {
            return Err(Error::TapeOutOfRange { index: bad, arity: k });
        }
        let a = self.determinize();
        let inner = a.alphabet().clone();
        let outer = inner.with_arity(k);
        let pad = outer.pad_letter();
        let inner_all_pad = inner.all_pad();
        // state: (inner state or DONE, ended-tapes mask)
        const DONE: StateId = StateId::MAX;
        if map.len() > 32 {
            return Err(Error::Precondition("too many tapes".into()));
        }
        let init = (a.initial[0], 0u64);
        let accept = |s: &(StateId, u64)| s.0 == DONE || a.is_accepting(s.0);
        let step = |s: &(StateId, u64), col: &[Letter]| -> Option<(StateId, u64)> {
            let mut ended = s.1;
            for (t, &l) in col.iter().enumerate() {
                if l == pad {
                    ended |= 1 << t;
                } else if ended & (1 << t) != 0 {
                    return None;
                }
            }
            let mut sub = [0 as Letter; 32];
            for (i, &t) in map.iter().enumerate() {
                sub[i] = col[t];
            }
            let sym = inner.pack(&sub[..map.len()]);
            if sym == inner_all_pad {
                if s.0 == DONE || a.is_accepting(s.0) {
                    Some((DONE, ended))
                } else {
                    None
                }
            } else if s.0 == DONE {
                None
            } else {
                a.step(s.0, sym).map(|t| (t, ended))
            }
        };
        Ok(Automaton::explore(outer, vec![init], step, accept))
    }

    /// Words of length at most `n` (any arity), as a filter automaton.
    pub fn length_at_most(alphabet: &Alphabet, n: usize) -> Automaton {
        Automaton::explore(alphabet.clone(), vec![0usize], |i, _| (*i < n).then_some(i + 1), |_| true)
    }

    /// `L ∩ (length ≤ n)`.
    pub fn truncate(&self, n: usize) -> Automaton {
        self.intersection(&Automaton::length_at_most(&self.alphabet, n))
            .expect("same alphabet")
    }

    /// True iff the language is finite (trimmed graph is acyclic).
    pub fn is_finite(&self) -> bool {
        let t = self.trim();
        if t.is_empty() {
            return true;
        }
        topo_order(&t).is_some()
    }

    /// Accepted words of length ≤ `n` in length-lexicographic order (by column index).
    pub fn enumerate_upto(&self, n: usize) -> Vec<Vec<Sym>> {
        let mut out = Vec::new();
        self.for_each_upto(n, |w| out.push(w.to_vec()));
        out
    }

    /// Streams accepted words of length ≤ `n` in length-lexicographic order.
    pub fn for_each_upto(&self, n: usize, mut f: impl FnMut(&[Sym])) {
        let dfa = self.min_dfa();
        if dfa.is_empty() {
            return;
        }
        // depth-first per length keeps memory linear; each length is one pass
        let limit = if topo_order(&dfa).is_some() { n.min(dfa.num_states()) } else { n };
        let mut word = Vec::with_capacity(limit);
        for len in 0..=limit {
            dfs_exact(&dfa, dfa.initial[0], len, &mut word, &mut f);
        }
    }
}

fn b_step(row: &[(Sym, StateId)], sym: Sym) -> Option<StateId> {
    let pos = row.partition_point(|&(s, _)| s < sym);
    row.get(pos).filter(|x| x.0 == sym).map(|x| x.1)
}

fn dfs_exact(
    dfa: &Automaton,
    q: StateId,
    remaining: usize,
    word: &mut Vec<Sym>,
    f: &mut impl FnMut(&[Sym]),
) {
    if remaining == 0 {
        if dfa.is_accepting(q) {
            f(word);
        }
        return;
    }
    for &(s, t) in dfa.transitions(q) {
        word.push(s);
        dfs_exact(dfa, t, remaining - 1, word, f);
        word.pop();
    }
}

/// Topological order of all states, or `None` if there is a cycle.
pub(crate) fn topo_order(a: &Automaton) -> Option<Vec<StateId>> {
    let n = a.num_states();
    let mut indeg = vec![0usize; n];
    for q in 0..n {
        for &(_, t) in a.transitions(q as StateId) {
            indeg[t as usize] += 1;
        }
    }
    let mut queue: VecDeque<StateId> = (0..n as StateId).filter(|&q| indeg[q as usize] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for &(_, t) in a.transitions(q) {
            indeg[t as usize] -= 1;
            if indeg[t as usize] == 0 {
                queue.push_back(t);
            }
        }
    }
    (order.len() == n).then_some(order)
}
