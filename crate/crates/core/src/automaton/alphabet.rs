use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter of `Σ ∪ {⋄}`; the padding letter is `base.len()`.
pub type Letter = u32;

/// A column of a convolved word, packed as a mixed-radix integer over `(Σ ∪ {⋄})^k`.
///
/// Tape `i` contributes `letter_i * radix^i`. The all-padding column is
/// `radix^k - 1` and is never a legal transition label.
pub type Sym = u32;

/// Base symbols, the padding symbol and the number of tapes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    base: Vec<String>,
    pad: String,
    arity: usize,
}

pub const DEFAULT_PAD: &str = "⋄";

impl Alphabet {
    pub fn new(base: Vec<String>, pad: impl Into<String>, arity: usize) -> Result<Self> {
        let pad = pad.into();
        if arity == 0 {
            return Err(Error::InvalidAutomaton("arity must be at least 1".into()));
        }
        if base.is_empty() {
            return Err(Error::InvalidAutomaton("base alphabet is empty".into()));
        }
        if base.contains(&pad) {
            return Err(Error::InvalidAutomaton(format!("padding symbol `{pad}` is a base symbol")));
        }
        for (i, s) in base.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == ',' || c == '(' || c == ')') {
                return Err(Error::InvalidAutomaton(format!("illegal symbol name `{s}`")));
            }
            if base[..i].contains(s) {
                return Err(Error::InvalidAutomaton(format!("duplicate symbol `{s}`")));
            }
        }
        let radix = (base.len() as u64) + 1;
        if radix.checked_pow(arity as u32).is_none_or(|n| n > u32::MAX as u64) {
            return Err(Error::InvalidAutomaton("tuple alphabet too large".into()));
        }
        Ok(Alphabet { base, pad, arity })
    }

    /// Digits `0..n` as base symbols, default padding.
    pub fn digits(n: u32, arity: usize) -> Self {
        let base = (0..n).map(|d| d.to_string()).collect();
        Alphabet::new(base, DEFAULT_PAD, arity).expect("digit alphabet is valid")
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn pad(&self) -> &str {
        &self.pad
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base_len(&self) -> u32 {
        self.base.len() as u32
    }

    pub fn pad_letter(&self) -> Letter {
        self.base.len() as Letter
    }

    pub fn radix(&self) -> u32 {
        self.base.len() as u32 + 1
    }

    /// Number of columns including the forbidden all-padding column.
    pub fn num_symbols(&self) -> u32 {
        self.radix().pow(self.arity as u32)
    }

    pub fn all_pad(&self) -> Sym {
        self.num_symbols() - 1
    }

    /// Same base and padding with a different number of tapes.
    pub fn with_arity(&self, arity: usize) -> Self {
        Alphabet::new(self.base.clone(), self.pad.clone(), arity).expect("arity change keeps a valid alphabet")
    }

    /// True iff `other` differs at most in arity.
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.base == other.base && self.pad == other.pad
    }

    pub fn pack(&self, letters: &[Letter]) -> Sym {
        debug_assert_eq!(letters.len(), self.arity);
        let radix = self.radix();
        letters.iter().rev().fold(0, |acc, &l| acc * radix + l)
    }

    pub fn unpack(&self, sym: Sym) -> Vec<Letter> {
        let radix = self.radix();
        let mut out = Vec::with_capacity(self.arity);
        let mut s = sym;
        for _ in 0..self.arity {
            out.push(s % radix);
            s /= radix;
        }
        out
    }

    pub fn letter(&self, sym: Sym, tape: usize) -> Letter {
        (sym / self.radix().pow(tape as u32)) % self.radix()
    }

    /// All legal columns in increasing order.
    pub fn legal_symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.all_pad()
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        if l == self.pad_letter() {
            &self.pad
        } else {
            &self.base[l as usize]
        }
    }

    pub fn letter_of(&self, name: &str) -> Option<Letter> {
        if name == self.pad {
            Some(self.pad_letter())
        } else {
            self.base.iter().position(|s| s == name).map(|i| i as Letter)
        }
    }

    pub fn symbol_name(&self, sym: Sym) -> String {
        let names: Vec<&str> = self.unpack(sym).into_iter().map(|l| self.letter_name(l)).collect();
        format!("({})", names.join(","))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity {} base {{{}}} pad {}", self.arity, self.base.join(" "), self.pad)
    }
}

/// Convolution of `k` words: the shorter words are padded at the end.
///
/// Words are letter sequences over the base symbols (no padding letters).
pub fn convolve(alphabet: &Alphabet, words: &[&[Letter]]) -> Vec<Sym> {
    assert_eq!(words.len(), alphabet.arity(), "one word per tape");
    let len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let pad = alphabet.pad_letter();
    let mut column = vec![pad; words.len()];
    (0..len)
        .map(|j| {
            for (t, w) in words.iter().enumerate() {
                column[t] = w.get(j).copied().unwrap_or(pad);
            }
            alphabet.pack(&column)
        })
        .collect()
}

/// Inverse of [`convolve`]; fails if a tape is not of the form `base* ⋄*`.
pub fn deconvolve(alphabet: &Alphabet, word: &[Sym]) -> Result<Vec<Vec<Letter>>> {
    let pad = alphabet.pad_letter();
    let mut tapes = vec![Vec::new(); alphabet.arity()];
    let mut ended = vec![false; alphabet.arity()];
    for &sym in word {
        if sym == alphabet.all_pad() {
            return Err(Error::InvalidAutomaton("all-padding column".into()));
        }
        for (t, tape) in tapes.iter_mut().enumerate() {
            let l = alphabet.letter(sym, t);
            if l == pad {
                ended[t] = true;
            } else if ended[t] {
                return Err(Error::InvalidAutomaton(format!("tape {t} resumes after padding")));
            } else {
                tape.push(l);
            }
        }
    }
    Ok(tapes)
}

/// Padding discipline of a tuple-word: every tape is `base* ⋄*` and no column is all padding.
pub fn is_padding_valid(alphabet: &Alphabet, word: &[Sym]) -> bool {
    deconvolve(alphabet, word).is_ok()
}
