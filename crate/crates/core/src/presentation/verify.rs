//! Exhaustive check of an addition automaton against the codec.

use rayon::prelude::*;
use serde::Serialize;

use super::{Codec, GroupElement, Presentation};
use crate::automaton::{Automaton, Letter, StateId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub u: String,
    pub v: String,
    pub u_value: String,
    pub v_value: String,
    /// `unrepresentable`, `missing` or `spurious`.
    pub kind: String,
    pub expected: Option<String>,
    /// Words accepted as the third component (at most a few).
    pub accepted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub spec: String,
    pub length: usize,
    pub domain_words: usize,
    pub pairs_checked: u64,
    /// Third components were searched up to length `length + r`.
    pub search_length: usize,
    pub counterexamples: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }
}

/// Successors of the add DFA indexed by `(state, a, b)`.
struct Table {
    radix: usize,
    next: Vec<Vec<(Letter, StateId)>>,
}

impl Table {
    fn new(add: &Automaton) -> Table {
        let a = add.alphabet();
        let radix = a.radix() as usize;
        let mut next = vec![Vec::new(); add.num_states() * radix * radix];
        for q in 0..add.num_states() as StateId {
            for &(sym, t) in add.transitions(q) {
                let l = a.unpack(sym);
                next[(q as usize * radix + l[0] as usize) * radix + l[1] as usize].push((l[2], t));
            }
        }
        Table { radix, next }
    }

    fn get(&self, q: StateId, a: Letter, b: Letter) -> &[(Letter, StateId)] {
        &self.next[(q as usize * self.radix + a as usize) * self.radix + b as usize]
    }
}

const MAX_REPORTED: usize = 4;

/// All `w` with `(u, v, w)` accepted and `|w| ≤ bound`, at most `MAX_REPORTED + 1`.
fn sections(add: &Automaton, table: &Table, u: &[Letter], v: &[Letter], bound: usize) -> Vec<Vec<Letter>> {
    let pad = add.alphabet().pad_letter();
    let base = u.len().max(v.len());
    let mut out = Vec::new();
    let mut w = Vec::new();
    for &q in add.initial() {
        walk(add, table, u, v, pad, base, bound, q, 0, false, &mut w, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    add: &Automaton,
    table: &Table,
    u: &[Letter],
    v: &[Letter],
    pad: Letter,
    base: usize,
    bound: usize,
    q: StateId,
    i: usize,
    w_ended: bool,
    w: &mut Vec<Letter>,
    out: &mut Vec<Vec<Letter>>,
) {
    if out.len() > MAX_REPORTED {
        return;
    }
    if i >= base && add.is_accepting(q) && !out.contains(w) {
        out.push(w.clone());
    }
    if i >= bound.max(base) || (i >= base && w_ended) {
        return;
    }
    let a = u.get(i).copied().unwrap_or(pad);
    let b = v.get(i).copied().unwrap_or(pad);
    for &(c, t) in table.get(q, a, b) {
        if c == pad {
            walk(add, table, u, v, pad, base, bound, t, i + 1, true, w, out);
        } else if !w_ended {
            w.push(c);
            walk(add, table, u, v, pad, base, bound, t, i + 1, false, w, out);
            w.pop();
        }
    }
}

/// Fixed-point values of words whose fraction digits stop by position `len`.
///
/// Integer tracks are `i128`, fraction tracks are numerators over `p^len`.
/// Two canonical words are equal iff their keys are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Exact(GroupElement),
    Int(i128),
    Frac(u128),
    Digits(Vec<u32>),
    Mixed(i128, Vec<u128>),
    Pair(Box<Key>, Box<Key>),
}

enum Keyer {
    Exact(Codec),
    Negabinary,
    Elementary(u32),
    Fraction { p: u128, scale: u128, len: usize },
    Mixed { digits: Vec<Vec<u32>>, fracs: Vec<(u128, u128)>, len: usize },
    Pair { codec: Codec, left: Box<Keyer>, right: Box<Keyer>, pads: (Letter, Letter) },
}

fn negabinary_i128(digits: impl DoubleEndedIterator<Item = u32>) -> Option<i128> {
    let mut acc: i128 = 0;
    for d in digits.rev() {
        acc = acc.checked_mul(-2)?.checked_add(d as i128)?;
    }
    Some(acc)
}

fn fraction_u128(p: u128, len: usize, digits: &[u32]) -> Option<u128> {
    if digits.iter().skip(len).any(|&d| d != 0) {
        return None;
    }
    let mut acc: u128 = 0;
    for i in 0..len {
        acc = acc * p + digits.get(i).copied().unwrap_or(0) as u128;
    }
    Some(acc)
}

impl Keyer {
    fn new(codec: &Codec, len: usize) -> Keyer {
        let scale = |p: u32| (p as u128).checked_pow(len as u32).filter(|s| *s < u128::MAX / 4);
        match codec {
            Codec::Negabinary => Keyer::Negabinary,
            Codec::Elementary(p) => Keyer::Elementary(*p),
            Codec::Fraction(p) => match scale(*p) {
                Some(s) => Keyer::Fraction { p: *p as u128, scale: s, len },
                None => Keyer::Exact(codec.clone()),
            },
            Codec::Mixed(primes) => {
                let fracs: Option<Vec<(u128, u128)>> = primes.iter().map(|&p| scale(p).map(|s| (p as u128, s))).collect();
                match fracs {
                    Some(fracs) => {
                        let digits = (0..codec.base_len()).map(|l| codec.letter_digits(l)).collect();
                        Keyer::Mixed { digits, fracs, len }
                    }
                    None => Keyer::Exact(codec.clone()),
                }
            }
            Codec::Pair(a, b) => Keyer::Pair {
                codec: codec.clone(),
                left: Box::new(Keyer::new(a, len)),
                right: Box::new(Keyer::new(b, len)),
                pads: (a.base_len(), b.base_len()),
            },
        }
    }

    /// `None` when the word's value is outside the key range (so it is no sum of short words).
    fn key(&self, w: &[Letter]) -> Option<Key> {
        match self {
            Keyer::Exact(c) => c.decode(w).ok().map(Key::Exact),
            Keyer::Negabinary => negabinary_i128(w.iter().copied()).map(Key::Int),
            Keyer::Elementary(_) => {
                let mut d = w.to_vec();
                while d.last() == Some(&0) {
                    d.pop();
                }
                Some(Key::Digits(d))
            }
            Keyer::Fraction { p, len, .. } => fraction_u128(*p, *len, w).map(Key::Frac),
            Keyer::Mixed { digits, fracs, len } => {
                let m = negabinary_i128(w.iter().map(|&l| digits[l as usize][0]))?;
                let mut ns = Vec::with_capacity(fracs.len());
                let mut track = Vec::with_capacity(w.len());
                for (k, &(p, _)) in fracs.iter().enumerate() {
                    track.clear();
                    track.extend(w.iter().map(|&l| digits[l as usize][k + 1]));
                    ns.push(fraction_u128(p, *len, &track)?);
                }
                Some(Key::Mixed(m, ns))
            }
            Keyer::Pair { codec, left, right, pads } => {
                let mut wa = Vec::with_capacity(w.len());
                let mut wb = Vec::with_capacity(w.len());
                for &l in w {
                    let (x, y) = codec.split_letter(l).unwrap();
                    if x != pads.0 {
                        wa.push(x);
                    }
                    if y != pads.1 {
                        wb.push(y);
                    }
                }
                Some(Key::Pair(Box::new(left.key(&wa)?), Box::new(right.key(&wb)?)))
            }
        }
    }

    fn add(&self, x: &Key, y: &Key) -> Option<Key> {
        Some(match (self, x, y) {
            (Keyer::Exact(_), Key::Exact(a), Key::Exact(b)) => Key::Exact(a.add(b).ok()?),
            (Keyer::Negabinary, Key::Int(a), Key::Int(b)) => Key::Int(a.checked_add(*b)?),
            (Keyer::Elementary(p), Key::Digits(a), Key::Digits(b)) => {
                let n = a.len().max(b.len());
                let mut d: Vec<u32> =
                    (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
                while d.last() == Some(&0) {
                    d.pop();
                }
                Key::Digits(d)
            }
            (Keyer::Fraction { scale, .. }, Key::Frac(a), Key::Frac(b)) => Key::Frac((a + b) % scale),
            (Keyer::Mixed { fracs, .. }, Key::Mixed(m1, a), Key::Mixed(m2, b)) => {
                let mut m = m1.checked_add(*m2)?;
                let mut ns = Vec::with_capacity(fracs.len());
                for (k, &(_, scale)) in fracs.iter().enumerate() {
                    let mut n = a[k] + b[k];
                    if n >= scale {
                        n -= scale;
                        m = m.checked_add(1)?;
                    }
                    ns.push(n);
                }
                Key::Mixed(m, ns)
            }
            (Keyer::Pair { left, right, .. }, Key::Pair(a1, b1), Key::Pair(a2, b2)) => {
                Key::Pair(Box::new(left.add(a1, a2)?), Box::new(right.add(b1, b2)?))
            }
            _ => return None,
        })
    }
}

/// Pair checker shared by the exhaustive and sampled modes.
pub struct Checker<'a> {
    p: &'a Presentation,
    add: Automaton,
    table: Table,
    keyer: Keyer,
    length: usize,
    search_length: usize,
}

impl<'a> Checker<'a> {
    /// Checks pairs of words of length at most `length`.
    pub fn new(p: &'a Presentation, length: usize) -> Checker<'a> {
        let add = p.add().determinize();
        let r = add.min_dfa().complete_state_count();
        let table = Table::new(&add);
        Checker { p, table, keyer: Keyer::new(p.codec(), length), add, length, search_length: length + r }
    }

    pub fn search_length(&self) -> usize {
        self.search_length
    }

    /// `None` when the pair passes. With `exact`, the accepted word is also decoded and compared.
    pub fn check(&self, u: &[Letter], v: &[Letter], exact: bool) -> Option<Counterexample> {
        self.check_keyed(u, self.keyer.key(u).as_ref(), v, self.keyer.key(v).as_ref(), exact)
    }

    fn check_keyed(&self, u: &[Letter], ku: Option<&Key>, v: &[Letter], kv: Option<&Key>, exact: bool) -> Option<Counterexample> {
        let p = self.p;
        assert!(u.len() <= self.length && v.len() <= self.length, "pair longer than the checker bound");
        let found = sections(&self.add, &self.table, u, v, self.search_length);
        let sum = match (ku, kv) {
            (Some(a), Some(b)) => self.keyer.add(a, b),
            _ => None,
        };
        let hit = match (&sum, found.as_slice()) {
            (Some(s), [w]) => p.in_domain(w) && self.keyer.key(w).as_ref() == Some(s),
            _ => false,
        };
        if hit && !exact {
            return None;
        }
        let (eu, ev) = (p.codec().decode(u), p.codec().decode(v));
        let exact_ok = || match (&eu, &ev) {
            (Ok(a), Ok(b)) => p.codec().decode(&found[0]).ok() == a.add(b).ok(),
            _ => false,
        };
        if hit && exact_ok() {
            return None;
        }
        let value = |e: &crate::Result<GroupElement>| e.as_ref().map_or_else(|err| err.to_string(), |x| x.to_string());
        let expected = match (&eu, &ev) {
            (Ok(a), Ok(b)) => a.add(b).ok().and_then(|e| p.encode(&e).ok()),
            _ => None,
        };
        let kind = match &expected {
            None => "unrepresentable",
            Some(w) if !found.contains(w) => "missing",
            Some(_) => "spurious",
        };
        Some(Counterexample {
            u: p.word_string(u),
            v: p.word_string(v),
            u_value: value(&eu),
            v_value: value(&ev),
            kind: kind.into(),
            expected: expected.map(|w| p.word_string(&w)),
            accepted: found.iter().take(MAX_REPORTED).map(|w| p.word_string(w)).collect(),
        })
    }
}

/// Pairs among the first this many words are also checked with exact element arithmetic.
const CROSS_CHECK: usize = 48;

/// Checks every pair of domain words of length at most `length`.
///
/// For each pair the sum must be representable, its canonical word must be
/// accepted, and no other third component of length `≤ length + r` may be.
pub fn verify(p: &Presentation, length: usize) -> VerificationReport {
    let checker = Checker::new(p, length);
    let words = p.domain().enumerate_upto(length);
    let keys: Vec<Option<Key>> = words.iter().map(|w| checker.keyer.key(w)).collect();
    let n = words.len();
    let per_row: Vec<(u64, Option<Counterexample>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            let mut first = None;
            for j in 0..n {
                let exact = i < CROSS_CHECK && j < CROSS_CHECK;
                if let Some(c) = checker.check_keyed(&words[i], keys[i].as_ref(), &words[j], keys[j].as_ref(), exact) {
                    count += 1;
                    first.get_or_insert(c);
                }
            }
            (count, first)
        })
        .collect();
    let counterexamples = per_row.iter().map(|(c, _)| c).sum();
    let first_counterexample = per_row.into_iter().find_map(|(_, f)| f);
    VerificationReport {
        spec: p.spec().to_string(),
        length,
        domain_words: n,
        pairs_checked: (n as u64) * (n as u64),
        search_length: checker.search_length,
        counterexamples,
        first_counterexample,
    }
}

/// Checks `samples` seeded random pairs of domain words of length at most `length`.
///
/// Lengths are drawn uniformly, then letters uniformly with rejection of non-domain words,
/// so short words are not crowded out. Every sampled pair also gets the exact comparison.
pub fn verify_sampled(p: &Presentation, length: usize, samples: u64, seed: u64) -> VerificationReport {
    use rand::{Rng, SeedableRng};
    let checker = Checker::new(p, length);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let base = p.codec().base_len();
    let word = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let len = rng.gen_range(0..=length);
        let w: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..base)).collect();
        if p.in_domain(&w) {
            return w;
        }
    };
    let mut counterexamples = 0;
    let mut first_counterexample = None;
    for _ in 0..samples {
        let (u, v) = (word(&mut rng), word(&mut rng));
        if let Some(c) = checker.check(&u, &v, true) {
            counterexamples += 1;
            first_counterexample.get_or_insert(c);
        }
    }
    VerificationReport {
        spec: p.spec().to_string(),
        length,
        domain_words: 0,
        pairs_checked: samples,
        search_length: checker.search_length,
        counterexamples,
        first_counterexample,
    }
}

/// Structural facts about the addition automaton, proved by emptiness checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// `Add ⊆ D³`.
    pub closed: bool,
    /// The projection forgetting the sum is `D × D`.
    pub total: bool,
    /// No pair has two sums.
    pub functional: bool,
    /// `Add(x, y, z) ⇔ Add(y, x, z)`.
    pub commutative: bool,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.closed && self.total && self.functional && self.commutative
    }
}

/// `D^k` as a `k`-tape automaton.
pub fn domain_power(p: &Presentation, k: usize) -> Automaton {
    let mut acc = p.domain().embed(k, &[0]).expect("tape in range");
    for t in 1..k {
        acc = acc.intersection(&p.domain().embed(k, &[t]).expect("tape in range")).expect("same alphabet").min_dfa();
    }
    acc
}

/// The equality relation on the domain.
pub fn equality(p: &Presentation) -> Automaton {
    let d = p.domain().min_dfa();
    let pad = d.alphabet().pad_letter();
    let q0 = d.initial()[0];
    Automaton::explore(
        d.alphabet().with_arity(2),
        vec![q0],
        |&q, col| if col[0] == col[1] && col[0] != pad { d.step(q, col[0]) } else { None },
        |&q| d.is_accepting(q),
    )
    .min_dfa()
}

pub fn structure_audit(p: &Presentation) -> crate::Result<StructureReport> {
    let add = p.add();
    let d2 = domain_power(p, 2);
    let d3 = domain_power(p, 3);
    let closed = add.is_subset_of(&d3)?;
    let total = add.project(2)?.equivalent(&d2)?;
    let neq = d2.difference(&equality(p))?;
    let twice = add
        .embed(4, &[0, 1, 2])?
        .intersection(&add.embed(4, &[0, 1, 3])?)?
        .min_dfa()
        .intersection(&neq.embed(4, &[2, 3])?)?;
    let functional = twice.is_empty();
    let commutative = add.embed(3, &[1, 0, 2])?.equivalent(add)?;
    Ok(StructureReport { closed, total, functional, commutative })
}

/// The presentation with the first transition of the add automaton's initial state removed.
pub fn mutate_first_transition(p: &Presentation) -> Presentation {
    let mut add = p.add().clone();
    let q = add.initial()[0];
    if let Some(&(sym, t)) = add.transitions(q).first() {
        add.remove_transition(q, sym, t);
    }
    p.with_add(add)
}
