//! Automatic presentations: a domain automaton, an addition automaton and an
//! exact codec between domain words and group elements.
//!
//! | spec | words |
//! |------|-------|
//! | `Z` | negabinary, least significant digit first |
//! | `ModSum(p)` | residues mod `p`, one per coordinate |
//! | `Pruefer(p)` | fraction digits `d_1 d_2 …` of `Σ d_i p^{-i}` mod 1 |
//! | `ZInv(n)` | letters are digit tuples: one negabinary digit and one fraction digit per prime of `n` |
//! | `Sum(a, b)` | convolution of a word of `a` with a word of `b` |
//!
//! Atomic words are canonical when the last letter is not all zero.

mod build;
mod bundle;
mod codec;
mod element;
mod spec;
mod verify;

use std::sync::atomic::{AtomicU64, Ordering};

pub use codec::{Codec, Track};
pub use element::{factorize, is_prime, mod_one, parse_rational, primary_components, GroupElement};
pub use spec::GroupSpec;
pub use verify::{
    domain_power, equality, mutate_first_transition, structure_audit, verify, verify_sampled, Checker, Counterexample, StructureReport,
    VerificationReport,
};

use crate::automaton::{Automaton, Letter};
use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// A presentation of an abelian group by automata.
#[derive(Clone, Debug)]
pub struct Presentation {
    id: u64,
    spec: GroupSpec,
    codec: Codec,
    domain: Automaton,
    add: Automaton,
}

impl Presentation {
    /// Builds the built-in presentation of `spec`; both automata are minimal.
    pub fn build(spec: &GroupSpec) -> Result<Presentation> {
        spec.validate()?;
        match spec {
            GroupSpec::Sum(a, b) => direct_sum(&Presentation::build(a)?, &Presentation::build(b)?),
            _ => {
                let codec = codec_for(spec);
                let domain = build::atomic_domain(&codec)?;
                let add = build::atomic_add(&codec)?;
                Ok(Presentation::assemble(spec.clone(), codec, domain, add))
            }
        }
    }

    /// Shorthand for parsing and building.
    pub fn parse(spec: &str) -> Result<Presentation> {
        Presentation::build(&spec.parse()?)
    }

    /// Combines externally supplied automata with the codec of `spec`.
    ///
    /// The automata must use the codec's alphabet; their correctness is what [`verify`] checks.
    pub fn from_parts(spec: GroupSpec, domain: Automaton, add: Automaton) -> Result<Presentation> {
        spec.validate()?;
        let codec = codec_for(&spec);
        let expect1 = build::alphabet(&codec, 1)?;
        let expect3 = build::alphabet(&codec, 3)?;
        if *domain.alphabet() != expect1 {
            return Err(Error::AlphabetMismatch(format!("domain: {} vs {}", domain.alphabet(), expect1)));
        }
        if *add.alphabet() != expect3 {
            return Err(Error::AlphabetMismatch(format!("add: {} vs {}", add.alphabet(), expect3)));
        }
        Ok(Presentation::assemble(spec, codec, domain, add))
    }

    fn assemble(spec: GroupSpec, codec: Codec, domain: Automaton, add: Automaton) -> Presentation {
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        Presentation { id, spec, codec, domain, add }
    }

    /// Process-unique identity, usable as a cache key.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn domain(&self) -> &Automaton {
        &self.domain
    }

    pub fn add(&self) -> &Automaton {
        &self.add
    }

    /// Replaces the addition automaton (for mutation testing).
    pub fn with_add(&self, add: Automaton) -> Presentation {
        Presentation::assemble(self.spec.clone(), self.codec.clone(), self.domain.clone(), add)
    }

    pub fn in_domain(&self, word: &[Letter]) -> bool {
        self.domain.accepts(word)
    }

    pub fn decode(&self, word: &[Letter]) -> Result<GroupElement> {
        if !self.in_domain(word) {
            return Err(Error::NotInDomain(self.word_string(word)));
        }
        self.codec.decode(word)
    }

    pub fn encode(&self, e: &GroupElement) -> Result<Vec<Letter>> {
        self.codec.encode(e)
    }

    /// The word of the identity (always `ε` for the built-in codecs).
    pub fn zero_word(&self) -> Vec<Letter> {
        self.codec.encode(&self.codec.zero()).expect("zero is representable")
    }

    pub fn zero(&self) -> GroupElement {
        self.codec.zero()
    }

    /// Parses a word given as letter names, separated by spaces or concatenated when names are one character.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let a = self.domain.alphabet();
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(str::to_string).collect()
        } else if a.base().iter().all(|n| n.chars().count() == 1) {
            text.chars().map(String::from).collect()
        } else {
            split_bracketed(text)
        };
        tokens
            .iter()
            .map(|t| a.letter_of(t).filter(|&l| l < a.base_len()).ok_or_else(|| Error::NotInDomain(format!("unknown letter `{t}`"))))
            .collect()
    }

    /// Word as text: names concatenated when each is a single character or bracketed, otherwise space separated.
    pub fn word_string(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "ε".into();
        }
        let a = self.domain.alphabet();
        let names: Vec<&str> = word.iter().map(|&l| a.letter_name(l)).collect();
        let compact = a.base().iter().all(|n| n.chars().count() == 1 || n.starts_with('['));
        if compact {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    /// Domain words of length at most `n` in length-lexicographic order, with their values.
    pub fn elements_upto(&self, n: usize) -> Vec<(Vec<Letter>, GroupElement)> {
        self.domain
            .enumerate_upto(n)
            .into_iter()
            .map(|w| {
                let e = self.codec.decode(&w).expect("domain words decode");
                (w, e)
            })
            .collect()
    }
}

fn split_bracketed(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        cur.push(c);
        if c == ']' {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub(crate) fn codec_for(spec: &GroupSpec) -> Codec {
    match spec {
        GroupSpec::Z => Codec::Negabinary,
        GroupSpec::ModSum(p) => Codec::Elementary(*p),
        GroupSpec::Pruefer(p) => Codec::Fraction(*p),
        GroupSpec::ZInv(_) => Codec::Mixed(spec.inverted_primes()),
        GroupSpec::Sum(a, b) => Codec::Pair(Box::new(codec_for(a)), Box::new(codec_for(b))),
    }
}

/// The direct sum: words are convolutions of component words, addition acts componentwise.
pub fn direct_sum(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    let spec = GroupSpec::sum(p1.spec.clone(), p2.spec.clone());
    let codec = Codec::Pair(Box::new(p1.codec.clone()), Box::new(p2.codec.clone()));
    let domain = build::pair_relation(&codec, &p1.domain, &p2.domain)?;
    let add = build::pair_relation(&codec, &p1.add, &p2.add)?;
    Ok(Presentation::assemble(spec, codec, domain, add))
}
