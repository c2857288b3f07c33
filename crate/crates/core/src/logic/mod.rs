//! First-order formulas over a presentation, compiled to automata.
//!
//! A compiled formula with free variables `x1 < x2 < …` (sorted by name) is
//! an automaton over `D^k` whose tape `i` carries `xi`. Negation is taken
//! inside `D^k`. Besides `∃`/`∀` the compiler handles `∃^∞` ("infinitely
//! many") and `∃^{m mod n}`, which is defined only for finite witness sets:
//! an infinite witness set makes it false.

mod compile;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use compile::{compile, compile_with, eval_sentence, eval_sentence_with, singleton, Compiled, DefinableSet};
pub use parse::{parse, parse_with};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::presentation::{equality, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsInf(String, Box<Formula>),
    ExistsMod { m: u64, n: u64, var: String, body: Box<Formula> },
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        use Formula::*;
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Atom(_, args) => args.iter().for_each(|a| note(a, bound)),
            Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Not(f) => f.collect_free(bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(x, f) | Forall(x, f) | ExistsInf(x, f) | ExistsMod { var: x, body: f, .. } => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Renames every bound variable to a fresh name `v'k`, so no name is bound twice or both free and bound.
    pub fn normalize(&self) -> Formula {
        let mut counter = 0;
        self.rename(&mut Vec::new(), &mut counter)
    }

    fn rename(&self, scope: &mut Vec<(String, String)>, counter: &mut usize) -> Formula {
        use Formula::*;
        let look = |v: &String, scope: &Vec<(String, String)>| {
            scope.iter().rev().find(|(from, _)| from == v).map_or_else(|| v.clone(), |(_, to)| to.clone())
        };
        let bind = |x: &String, f: &Formula, scope: &mut Vec<(String, String)>, counter: &mut usize| {
            *counter += 1;
            let fresh = format!("{x}'{counter}");
            scope.push((x.clone(), fresh.clone()));
            let body = f.rename(scope, counter);
            scope.pop();
            (fresh, Box::new(body))
        };
        match self {
            Atom(r, args) => Atom(r.clone(), args.iter().map(|a| look(a, scope)).collect()),
            Eq(a, b) => Eq(look(a, scope), look(b, scope)),
            Not(f) => Not(Box::new(f.rename(scope, counter))),
            And(a, b) => And(Box::new(a.rename(scope, counter)), Box::new(b.rename(scope, counter))),
            Or(a, b) => Or(Box::new(a.rename(scope, counter)), Box::new(b.rename(scope, counter))),
            Implies(a, b) => Implies(Box::new(a.rename(scope, counter)), Box::new(b.rename(scope, counter))),
            Exists(x, f) => {
                let (x, f) = bind(x, f, scope, counter);
                Exists(x, f)
            }
            Forall(x, f) => {
                let (x, f) = bind(x, f, scope, counter);
                Forall(x, f)
            }
            ExistsInf(x, f) => {
                let (x, f) = bind(x, f, scope, counter);
                ExistsInf(x, f)
            }
            ExistsMod { m, n, var, body } => {
                let (var, body) = bind(var, body, scope, counter);
                ExistsMod { m: *m, n: *n, var, body }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Atom(r, args) => write!(f, "{r}({})", args.join(",")),
            Eq(a, b) => write!(f, "{a} = {b}"),
            Not(g) => write!(f, "!({g})"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Exists(x, g) => write!(f, "(E {x}. {g})"),
            Forall(x, g) => write!(f, "(A {x}. {g})"),
            ExistsInf(x, g) => write!(f, "(Einf {x}. {g})"),
            ExistsMod { m, n, var, body } => write!(f, "(Emod {m} {n} {var}. {body})"),
        }
    }
}

/// Named relations available to formulas: `Add`, `Eq` and any user additions.
#[derive(Clone, Debug)]
pub struct Signature {
    relations: BTreeMap<String, Automaton>,
}

impl Signature {
    pub fn of(p: &Presentation) -> Signature {
        let relations = BTreeMap::from([("Add".to_string(), p.add().clone()), ("Eq".to_string(), equality(p))]);
        Signature { relations }
    }

    /// Adds a relation; its alphabet must be the domain alphabet at its own arity.
    pub fn with(mut self, p: &Presentation, name: &str, aut: Automaton) -> Result<Signature> {
        let want = p.domain().alphabet().with_arity(aut.arity());
        if *aut.alphabet() != want {
            return Err(Error::AlphabetMismatch(format!("relation {name}: {} vs {want}", aut.alphabet())));
        }
        self.relations.insert(name.to_string(), aut);
        Ok(self)
    }

    pub fn arities(&self) -> BTreeMap<String, usize> {
        self.relations.iter().map(|(k, a)| (k.clone(), a.arity())).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Automaton> {
        self.relations.get(name)
    }

    /// Parses a formula against this signature.
    pub fn parse(&self, text: &str) -> Result<Formula> {
        parse_with(text, &self.arities())
    }
}
