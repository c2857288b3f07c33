use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::{Formula, Signature};
use crate::automaton::{Alphabet, Automaton, Letter, StateId, Sym};
use crate::error::{Error, Result};
use crate::presentation::{domain_power, GroupElement, Presentation};

/// A compiled subformula: a truth value when closed, otherwise a set of tuples.
#[derive(Clone, Debug)]
pub enum Compiled {
    Bool(bool),
    Set(DefinableSet),
}

/// `{ā ∈ D^k : φ(ā)}` with the variable carried by each tape.
#[derive(Clone, Debug)]
pub struct DefinableSet {
    /// Sorted by name; tape `i` holds `vars[i]`.
    pub vars: Vec<String>,
    pub automaton: Automaton,
}

impl Compiled {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Compiled::Bool(b) => Some(*b),
            Compiled::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&DefinableSet> {
        match self {
            Compiled::Set(s) => Some(s),
            Compiled::Bool(_) => None,
        }
    }

    /// Membership of a tuple of words given in the order of [`DefinableSet::vars`].
    pub fn accepts(&self, words: &[&[Letter]]) -> bool {
        match self {
            Compiled::Bool(b) => *b && words.is_empty(),
            Compiled::Set(s) => s.automaton.accepts_tuple(words),
        }
    }
}

/// The automaton accepting exactly the word of `e`.
pub fn singleton(p: &Presentation, e: &GroupElement) -> Result<Automaton> {
    let w = p.encode(e)?;
    let n = w.len();
    Ok(Automaton::explore(
        p.domain().alphabet().clone(),
        vec![0usize],
        |&i, col| (i < n && col[0] == w[i]).then_some(i + 1),
        |&i| i == n,
    ))
}

struct Ctx<'a> {
    p: &'a Presentation,
    sig: &'a Signature,
    powers: RefCell<HashMap<usize, Automaton>>,
    domain_infinite: bool,
    domain_size: Option<u64>,
}

impl Ctx<'_> {
    fn power(&self, k: usize) -> Automaton {
        self.powers.borrow_mut().entry(k).or_insert_with(|| domain_power(self.p, k)).clone()
    }

    fn alphabet(&self, k: usize) -> Alphabet {
        self.p.domain().alphabet().with_arity(k)
    }

    fn empty_set(&self, vars: Vec<String>) -> Compiled {
        let k = vars.len();
        Compiled::Set(DefinableSet { vars, automaton: Automaton::empty(self.alphabet(k)) })
    }

    fn full_set(&self, vars: Vec<String>) -> Compiled {
        let k = vars.len();
        Compiled::Set(DefinableSet { vars, automaton: self.power(k) })
    }

    fn set(&self, vars: Vec<String>, aut: Automaton) -> Compiled {
        if vars.is_empty() {
            return Compiled::Bool(!aut.is_empty());
        }
        Compiled::Set(DefinableSet { vars, automaton: aut.min_dfa() })
    }

    /// Cylindrifies `s` onto the sorted `frame ⊇ s.vars`, inside `D^|frame|`.
    fn widen(&self, s: &DefinableSet, frame: &[String]) -> Result<Automaton> {
        if s.vars == frame {
            return Ok(s.automaton.clone());
        }
        let map: Vec<usize> = s.vars.iter().map(|v| frame.binary_search(v).expect("frame covers vars")).collect();
        Ok(s.automaton.embed(frame.len(), &map)?.intersection(&self.power(frame.len()))?.min_dfa())
    }

    fn relation(&self, rel: &Automaton, args: &[String]) -> Result<Compiled> {
        let mut frame = args.to_vec();
        frame.sort();
        frame.dedup();
        let map: Vec<usize> = args.iter().map(|v| frame.binary_search(v).unwrap()).collect();
        let aut = rel.embed(frame.len(), &map)?.intersection(&self.power(frame.len()))?;
        Ok(self.set(frame, aut))
    }

    fn negate(&self, c: Compiled) -> Result<Compiled> {
        Ok(match c {
            Compiled::Bool(b) => Compiled::Bool(!b),
            Compiled::Set(s) => {
                let k = s.vars.len();
                let aut = self.power(k).difference(&s.automaton)?;
                self.set(s.vars, aut)
            }
        })
    }

    fn binary(&self, and: bool, a: Compiled, b: Compiled) -> Result<Compiled> {
        Ok(match (a, b) {
            (Compiled::Bool(x), Compiled::Bool(y)) => Compiled::Bool(if and { x && y } else { x || y }),
            (Compiled::Bool(x), Compiled::Set(s)) | (Compiled::Set(s), Compiled::Bool(x)) => match (and, x) {
                (true, true) | (false, false) => Compiled::Set(s),
                (true, false) => self.empty_set(s.vars),
                (false, true) => self.full_set(s.vars),
            },
            (Compiled::Set(s), Compiled::Set(t)) => {
                let mut frame: Vec<String> = s.vars.iter().chain(&t.vars).cloned().collect();
                frame.sort();
                frame.dedup();
                let (x, y) = (self.widen(&s, &frame)?, self.widen(&t, &frame)?);
                let aut = if and { x.intersection(&y)? } else { x.union(&y)? };
                self.set(frame, aut)
            }
        })
    }

    fn split(&self, s: &DefinableSet, x: &str) -> Option<(usize, Vec<String>)> {
        let t = s.vars.iter().position(|v| v == x)?;
        let mut rest = s.vars.clone();
        rest.remove(t);
        Some((t, rest))
    }

    fn exists(&self, x: &str, c: Compiled) -> Result<Compiled> {
        let Compiled::Set(s) = c else { return Ok(c) };
        let Some((t, rest)) = self.split(&s, x) else { return Ok(Compiled::Set(s)) };
        if rest.is_empty() {
            return Ok(Compiled::Bool(!s.automaton.is_empty()));
        }
        let aut = s.automaton.project(t)?;
        Ok(self.set(rest, aut))
    }

    fn exists_inf(&self, x: &str, c: Compiled) -> Result<Compiled> {
        let s = match c {
            Compiled::Bool(b) => return Ok(Compiled::Bool(b && self.domain_infinite)),
            Compiled::Set(s) => s,
        };
        let Some((t, rest)) = self.split(&s, x) else {
            return Ok(if self.domain_infinite { Compiled::Set(s) } else { self.empty_set(s.vars) });
        };
        let a = s.automaton.min_dfa();
        let tails = TailAnalysis::new(&a, t, None);
        if rest.is_empty() {
            return Ok(Compiled::Bool(tails.inf[a.initial()[0] as usize]));
        }
        Ok(self.set(rest, self.inf_witnesses(&a, t, &tails)?))
    }

    /// Tuples `ā` (on the tapes other than `t`) with infinitely many `x`, inside `D^{k-1}`.
    fn inf_witnesses(&self, a: &Automaton, t: usize, tails: &TailAnalysis) -> Result<Automaton> {
        let k = a.arity();
        let mut marked = a.clone();
        for q in 0..a.num_states() as StateId {
            marked.set_accepting(q, tails.inf[q as usize]);
        }
        let pad = a.alphabet().pad_letter();
        // x never padded; the word stops at the last column carrying a letter of ā
        let boundary = Automaton::explore(
            a.alphabet().clone(),
            vec![true],
            |_, col| (col[t] != pad).then(|| col.iter().enumerate().any(|(i, &l)| i != t && l != pad)),
            |&last_has_other| last_has_other,
        );
        let proj = marked.intersection(&boundary)?.project(t)?;
        proj.intersection(&self.power(k - 1))
    }

    fn exists_mod(&self, m: u64, n: u64, x: &str, c: Compiled) -> Result<Compiled> {
        let finite_count_ok = |count: Option<u64>| count.is_some_and(|c| c % n == m);
        let s = match c {
            Compiled::Bool(b) => {
                let count = if b { self.domain_size } else { Some(0) };
                return Ok(Compiled::Bool(finite_count_ok(count)));
            }
            Compiled::Set(s) => s,
        };
        let Some((t, rest)) = self.split(&s, x) else {
            let inside = finite_count_ok(self.domain_size);
            let outside = m == 0;
            let vars = s.vars.clone();
            return match (inside, outside) {
                (true, true) => Ok(self.full_set(vars)),
                (false, false) => Ok(self.empty_set(vars)),
                (true, false) => Ok(Compiled::Set(s)),
                (false, true) => self.negate(Compiled::Set(s)),
            };
        };
        let a = s.automaton.min_dfa();
        let tails = TailAnalysis::new(&a, t, Some(n));
        let q0 = a.initial()[0];
        if rest.is_empty() {
            let ok = !tails.inf[q0 as usize] && tails.count[q0 as usize] % n == m;
            return Ok(Compiled::Bool(ok));
        }
        let k = a.arity();
        let alphabet = a.alphabet();
        let radix = alphabet.radix();
        let weight = |i: usize| radix.pow(i as u32);
        let mut base = vec![0u64; a.num_states()];
        base[q0 as usize] = 1;
        let counting = Automaton::explore(
            self.alphabet(k - 1),
            vec![base],
            |counts, col| {
                let mut sym: Sym = 0;
                for (i, &l) in col.iter().enumerate() {
                    sym += l * weight(if i < t { i } else { i + 1 });
                }
                let mut next = vec![0u64; counts.len()];
                for (q, &c) in counts.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for xl in 0..radix {
                        if let Some(r) = a.step(q as StateId, sym + xl * weight(t)) {
                            next[r as usize] = (next[r as usize] + c) % n;
                        }
                    }
                }
                Some(next)
            },
            |counts| counts.iter().zip(&tails.count).map(|(c, tc)| c * tc % n).sum::<u64>() % n == m,
        );
        let finite = self.power(k - 1).difference(&self.inf_witnesses(&a, t, &tails)?)?;
        Ok(self.set(rest, counting.min_dfa().intersection(&finite)?))
    }

    fn compile(&self, f: &Formula) -> Result<Compiled> {
        use Formula::*;
        match f {
            Atom(name, args) => {
                let rel = self.sig.get(name).ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                if rel.arity() != args.len() {
                    return Err(Error::ArityMismatch { name: name.clone(), expected: rel.arity(), got: args.len() });
                }
                self.relation(rel, args)
            }
            Eq(a, b) => self.relation(self.sig.get("Eq").expect("Eq is built in"), &[a.clone(), b.clone()]),
            Not(g) => self.negate(self.compile(g)?),
            And(a, b) => self.binary(true, self.compile(a)?, self.compile(b)?),
            Or(a, b) => self.binary(false, self.compile(a)?, self.compile(b)?),
            Implies(a, b) => {
                let na = self.negate(self.compile(a)?)?;
                self.binary(false, na, self.compile(b)?)
            }
            Exists(x, g) => self.exists(x, self.compile(g)?),
            Forall(x, g) => {
                let inner = self.negate(self.compile(g)?)?;
                self.negate(self.exists(x, inner)?)
            }
            ExistsInf(x, g) => self.exists_inf(x, self.compile(g)?),
            ExistsMod { m, n, var, body } => self.exists_mod(*m, *n, var, self.compile(body)?),
        }
    }
}

/// Behaviour of a DFA on columns where only tape `t` carries a letter.
struct TailAnalysis {
    /// Infinitely many accepted continuations.
    inf: Vec<bool>,
    /// Number of accepted continuations mod `n` for states that are not `inf` (0 when not counted).
    count: Vec<u64>,
}

impl TailAnalysis {
    fn new(a: &Automaton, t: usize, modulus: Option<u64>) -> TailAnalysis {
        let alphabet = a.alphabet();
        let (radix, pad) = (alphabet.radix(), alphabet.pad_letter());
        let all_pad: Sym = (0..a.arity()).map(|i| pad * radix.pow(i as u32)).sum();
        let w = radix.pow(t as u32);
        let columns: Vec<Sym> = (0..pad).map(|l| all_pad - pad * w + l * w).collect();
        let n = a.num_states();
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|q| columns.iter().filter_map(|&s| a.step(q as StateId, s)).map(|r| r as usize).collect())
            .collect();
        let mut pred = vec![Vec::new(); n];
        for (q, ss) in succ.iter().enumerate() {
            for &r in ss {
                pred[r].push(q);
            }
        }
        let accepting: Vec<usize> = (0..n).filter(|&q| a.is_accepting(q as StateId)).collect();
        let productive = backward(&pred, &accepting);
        let comp = sccs(&succ, &productive);
        let mut size = vec![0usize; n];
        for q in 0..n {
            if productive[q] {
                size[comp[q]] += 1;
            }
        }
        let cyclic: Vec<usize> = (0..n)
            .filter(|&q| productive[q] && (size[comp[q]] > 1 || succ[q].contains(&q)))
            .collect();
        let inf = backward(&pred, &cyclic);
        let mut count = vec![0u64; n];
        if let Some(m) = modulus {
            let mut done = vec![false; n];
            for q in 0..n {
                tail_count(q, &succ, &productive, &inf, a, m, &mut count, &mut done);
            }
        }
        TailAnalysis { inf, count }
    }
}

#[allow(clippy::too_many_arguments)]
fn tail_count(
    q: usize,
    succ: &[Vec<usize>],
    productive: &[bool],
    inf: &[bool],
    a: &Automaton,
    m: u64,
    count: &mut [u64],
    done: &mut [bool],
) -> u64 {
    if done[q] {
        return count[q];
    }
    done[q] = true;
    if inf[q] || !productive[q] {
        return 0;
    }
    let mut c = u64::from(a.is_accepting(q as StateId)) % m;
    for &r in &succ[q] {
        c = (c + tail_count(r, succ, productive, inf, a, m, count, done)) % m;
    }
    count[q] = c;
    c
}

fn backward(pred: &[Vec<usize>], seeds: &[usize]) -> Vec<bool> {
    let mut mark = vec![false; pred.len()];
    let mut stack: Vec<usize> = seeds.to_vec();
    for &s in seeds {
        mark[s] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &pred[q] {
            if !mark[p] {
                mark[p] = true;
                stack.push(p);
            }
        }
    }
    mark
}

/// Strongly connected components of the subgraph induced by `keep` (iterative Tarjan).
fn sccs(succ: &[Vec<usize>], keep: &[bool]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if !keep[root] || index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if let Some(&w) = succ[v].get(*i) {
                *i += 1;
                if !keep[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

fn context<'a>(p: &'a Presentation, sig: &'a Signature) -> Ctx<'a> {
    let d = p.domain().min_dfa();
    let domain_infinite = !d.is_finite();
    let domain_size = if domain_infinite {
        None
    } else {
        let len = d.num_states();
        d.count_upto(len).cumulative[len].to_u64()
    };
    Ctx { p, sig, powers: RefCell::new(HashMap::new()), domain_infinite, domain_size }
}

/// Compiles `f` (after renaming bound variables) against `sig`.
pub fn compile_with(p: &Presentation, sig: &Signature, f: &Formula) -> Result<Compiled> {
    context(p, sig).compile(&f.normalize())
}

/// Compiles against the signature `Add`, `Eq` of `p`.
pub fn compile(p: &Presentation, f: &Formula) -> Result<Compiled> {
    compile_with(p, &Signature::of(p), f)
}

pub fn eval_sentence_with(p: &Presentation, sig: &Signature, f: &Formula) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().collect()));
    }
    Ok(compile_with(p, sig, f)?.as_bool().expect("sentences compile to truth values"))
}

pub fn eval_sentence(p: &Presentation, f: &Formula) -> Result<bool> {
    eval_sentence_with(p, &Signature::of(p), f)
}
