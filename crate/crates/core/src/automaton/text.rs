//! Line-oriented text format, one automaton per file:
//!
//! ```text
//! arity 2
//! base 0 1
//! pad ⋄
//! state q0 initial accepting
//! trans q0 (0,0) q0
//! ```
//!
//! [`Automaton::to_text`] writes states as `q0, q1, ...` in index order and
//! transitions sorted by state then column, so canonical files round-trip exactly.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Alphabet, Automaton, StateId};
use crate::error::{Error, Result};

impl Automaton {
    pub fn to_text(&self) -> String {
        let a = self.alphabet();
        let mut out = String::new();
        writeln!(out, "arity {}", a.arity()).unwrap();
        writeln!(out, "base {}", a.base().join(" ")).unwrap();
        writeln!(out, "pad {}", a.pad()).unwrap();
        for q in 0..self.num_states() as StateId {
            write!(out, "state q{q}").unwrap();
            if self.initial().contains(&q) {
                out.push_str(" initial");
            }
            if self.is_accepting(q) {
                out.push_str(" accepting");
            }
            out.push('\n');
        }
        for q in 0..self.num_states() as StateId {
            for &(sym, t) in self.transitions(q) {
                writeln!(out, "trans q{q} {} q{t}", a.symbol_name(sym)).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Automaton> {
        let mut arity = None;
        let mut base = None;
        let mut pad = None;
        let mut aut: Option<Automaton> = None;
        let mut names: HashMap<String, StateId> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "arity" | "base" | "pad" if aut.is_some() => {
                    return Err(err(format!("`{head}` after the first state")));
                }
                "arity" => {
                    let k = words.next().ok_or_else(|| err("missing arity".into()))?;
                    arity = Some(k.parse::<usize>().map_err(|e| err(format!("bad arity: {e}")))?);
                }
                "base" => base = Some(words.map(str::to_string).collect::<Vec<_>>()),
                "pad" => pad = Some(words.next().ok_or_else(|| err("missing pad symbol".into()))?.to_string()),
                "state" => {
                    if aut.is_none() {
                        let (Some(k), Some(b), Some(p)) = (arity, base.clone(), pad.clone()) else {
                            return Err(err("header (arity, base, pad) must precede states".into()));
                        };
                        let alphabet = Alphabet::new(b, p, k).map_err(|e| err(e.to_string()))?;
                        aut = Some(Automaton::new(alphabet));
                    }
                    let a = aut.as_mut().unwrap();
                    let name = words.next().ok_or_else(|| err("missing state name".into()))?;
                    if names.contains_key(name) {
                        return Err(err(format!("duplicate state `{name}`")));
                    }
                    let mut initial = false;
                    let mut accepting = false;
                    for flag in words {
                        match flag {
                            "initial" => initial = true,
                            "accepting" => accepting = true,
                            other => return Err(err(format!("unknown state flag `{other}`"))),
                        }
                    }
                    let q = a.add_state(accepting);
                    if initial {
                        a.set_initial(q);
                    }
                    names.insert(name.to_string(), q);
                }
                "trans" => {
                    let a = aut.as_mut().ok_or_else(|| err("transition before any state".into()))?;
                    let parts: Vec<&str> = words.collect();
                    if parts.len() != 3 {
                        return Err(err("expected `trans FROM (a1,...,ak) TO`".into()));
                    }
                    let from = *names.get(parts[0]).ok_or_else(|| err(format!("unknown state `{}`", parts[0])))?;
                    let to = *names.get(parts[2]).ok_or_else(|| err(format!("unknown state `{}`", parts[2])))?;
                    let label = parts[1]
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| err(format!("malformed label `{}`", parts[1])))?;
                    let alphabet = a.alphabet().clone();
                    let letters = label
                        .split(',')
                        .map(|n| alphabet.letter_of(n).ok_or_else(|| err(format!("unknown symbol `{n}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    if letters.len() != alphabet.arity() {
                        return Err(err(format!("label has {} components, arity is {}", letters.len(), alphabet.arity())));
                    }
                    let sym = alphabet.pack(&letters);
                    if sym == alphabet.all_pad() {
                        return Err(err("all-padding label".into()));
                    }
                    a.add_transition(from, sym, to);
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let a = aut.ok_or(Error::Parse { line: 0, msg: "no states".into() })?;
        if a.initial().is_empty() {
            return Err(Error::Parse { line: 0, msg: "no initial state".into() });
        }
        Ok(a)
    }
}
