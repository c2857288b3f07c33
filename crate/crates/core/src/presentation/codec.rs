//! Word ↔ element codecs of the built-in presentations.
//!
//! Every atomic codec reads a word as one or more digit tracks in lockstep:
//! letter `j` carries digit `j` of each track. A word is canonical when its
//! last letter is not the all-zero letter; the empty word encodes `0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::element::{mod_one, primary_components, GroupElement};
use crate::automaton::Letter;
use crate::error::{Error, Result};

/// The meaning of one digit track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Track {
    /// Integer digits of weight `(-2)^i`, `i = 0, 1, ...`.
    Negabinary,
    /// Residues mod `p`, one coordinate per position.
    Elementary(u32),
    /// Fraction digits of weight `p^{-(i+1)}`, taken mod 1.
    Fraction(u32),
}

impl Track {
    pub fn radix(self) -> u32 {
        match self {
            Track::Negabinary => 2,
            Track::Elementary(p) | Track::Fraction(p) => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Codec {
    /// Negabinary integers.
    Negabinary,
    /// `⊕ Z/pZ`.
    Elementary(u32),
    /// `Z(p^∞)` as fraction digits.
    Fraction(u32),
    /// `Z[1/n]`: a negabinary track plus one fraction track per prime of `n`.
    Mixed(Vec<u32>),
    /// A direct sum; letters are pairs with an inner padding symbol each side.
    Pair(Box<Codec>, Box<Codec>),
}

impl Codec {
    /// The digit tracks, left component first for sums.
    pub fn tracks(&self) -> Vec<Track> {
        match self {
            Codec::Negabinary => vec![Track::Negabinary],
            Codec::Elementary(p) => vec![Track::Elementary(*p)],
            Codec::Fraction(p) => vec![Track::Fraction(*p)],
            Codec::Mixed(primes) => {
                std::iter::once(Track::Negabinary).chain(primes.iter().map(|&p| Track::Fraction(p))).collect()
            }
            Codec::Pair(a, b) => {
                let mut t = a.tracks();
                t.extend(b.tracks());
                t
            }
        }
    }

    pub fn base_len(&self) -> u32 {
        match self {
            Codec::Pair(a, b) => (a.base_len() + 1) * (b.base_len() + 1) - 1,
            _ => self.tracks().iter().map(|t| t.radix()).product(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Codec::Pair(..))
    }

    /// Splits a sum letter into component letters; each side may be its inner pad.
    pub fn split_letter(&self, l: Letter) -> Option<(Letter, Letter)> {
        match self {
            Codec::Pair(_, b) => {
                let r = b.base_len() + 1;
                Some((l / r, l % r))
            }
            _ => None,
        }
    }

    pub fn join_letter(&self, x: Letter, y: Letter) -> Letter {
        match self {
            Codec::Pair(_, b) => x * (b.base_len() + 1) + y,
            _ => panic!("join_letter on an atomic codec"),
        }
    }

    /// Digits of an atomic letter, one per track, mixed radix with the first track least significant.
    pub fn letter_digits(&self, l: Letter) -> Vec<u32> {
        match self {
            Codec::Pair(a, b) => {
                let (x, y) = self.split_letter(l).unwrap();
                let mut d = if x == a.base_len() { vec![0; a.tracks().len()] } else { a.letter_digits(x) };
                d.extend(if y == b.base_len() { vec![0; b.tracks().len()] } else { b.letter_digits(y) });
                d
            }
            _ => {
                let mut rest = l;
                self.tracks()
                    .iter()
                    .map(|t| {
                        let d = rest % t.radix();
                        rest /= t.radix();
                        d
                    })
                    .collect()
            }
        }
    }

    fn letter_from_digits(&self, digits: &[u32]) -> Letter {
        let tracks = self.tracks();
        let mut l = 0;
        for (t, d) in tracks.iter().zip(digits).rev() {
            l = l * t.radix() + d;
        }
        l
    }

    pub fn letter_names(&self) -> Vec<String> {
        match self {
            Codec::Pair(a, b) => {
                let (na, nb) = (a.letter_names(), b.letter_names());
                (0..self.base_len())
                    .map(|l| {
                        let (x, y) = self.split_letter(l).unwrap();
                        let sx = na.get(x as usize).map_or("_", String::as_str);
                        let sy = nb.get(y as usize).map_or("_", String::as_str);
                        format!("[{sx}|{sy}]")
                    })
                    .collect()
            }
            _ if self.tracks().len() == 1 => (0..self.base_len()).map(|d| d.to_string()).collect(),
            _ => (0..self.base_len())
                .map(|l| self.letter_digits(l).iter().map(u32::to_string).collect::<Vec<_>>().join(":"))
                .collect(),
        }
    }

    /// The all-zero letter of an atomic codec.
    pub fn is_zero_letter(&self, l: Letter) -> bool {
        self.is_atomic() && l == 0
    }

    /// Decodes a canonical word (membership in the domain is the caller's concern).
    pub fn decode(&self, word: &[Letter]) -> Result<GroupElement> {
        if let Some(&bad) = word.iter().find(|&&l| l >= self.base_len()) {
            return Err(Error::NotInDomain(format!("letter index {bad} outside the alphabet")));
        }
        Ok(match self {
            Codec::Negabinary => GroupElement::Rational(vec![negabinary_value(word.iter().copied())]),
            Codec::Elementary(p) => GroupElement::elementary(*p, word.to_vec()),
            Codec::Fraction(p) => GroupElement::Torsion(mod_one(&fraction_value(*p, word.iter().copied()))),
            Codec::Mixed(primes) => {
                let digits: Vec<Vec<u32>> = word.iter().map(|&l| self.letter_digits(l)).collect();
                let mut z = negabinary_value(digits.iter().map(|d| d[0]));
                for (k, &p) in primes.iter().enumerate() {
                    z += fraction_value(p, digits.iter().map(|d| d[k + 1]));
                }
                GroupElement::Rational(vec![z])
            }
            Codec::Pair(a, b) => {
                let (pa, pb) = (a.base_len(), b.base_len());
                let mut wa = Vec::new();
                let mut wb = Vec::new();
                for &l in word {
                    let (x, y) = self.split_letter(l).unwrap();
                    if x != pa {
                        wa.push(x);
                    }
                    if y != pb {
                        wb.push(y);
                    }
                }
                GroupElement::pair(a.decode(&wa)?, b.decode(&wb)?)
            }
        })
    }

    /// The canonical word of `e`; elements outside the presented group are an error.
    pub fn encode(&self, e: &GroupElement) -> Result<Vec<Letter>> {
        let wrong = || Error::NotRepresentable(format!("{e} is not an element of this group"));
        match (self, e) {
            (Codec::Negabinary, GroupElement::Rational(v)) if v.len() == 1 => {
                if !v[0].is_integer() {
                    return Err(wrong());
                }
                Ok(negabinary_digits(v[0].numer()))
            }
            (Codec::Elementary(p), GroupElement::Elementary { p: q, digits }) if p == q => Ok(digits.clone()),
            (Codec::Fraction(p), GroupElement::Torsion(x)) => fraction_digits(*p, x).ok_or_else(wrong),
            (Codec::Mixed(primes), GroupElement::Rational(v)) if v.len() == 1 => {
                let z = &v[0];
                let mut tracks = Vec::with_capacity(primes.len() + 1);
                let mut int_part = z.clone();
                let comps = primary_components(z);
                if comps.iter().any(|(p, _)| !primes.iter().any(|&q| q as u64 == *p)) {
                    return Err(wrong());
                }
                let mut frac_tracks = Vec::new();
                for &p in primes {
                    let f = comps
                        .iter()
                        .find(|(q, _)| *q == p as u64)
                        .map(|(_, f)| f.clone())
                        .unwrap_or_else(BigRational::zero);
                    int_part -= &f;
                    frac_tracks.push(fraction_digits(p, &f).ok_or_else(wrong)?);
                }
                debug_assert!(int_part.is_integer());
                tracks.push(negabinary_digits(int_part.numer()));
                tracks.extend(frac_tracks);
                let len = tracks.iter().map(Vec::len).max().unwrap_or(0);
                Ok((0..len)
                    .map(|i| {
                        let ds: Vec<u32> = tracks.iter().map(|t| t.get(i).copied().unwrap_or(0)).collect();
                        self.letter_from_digits(&ds)
                    })
                    .collect())
            }
            (Codec::Pair(a, b), GroupElement::Pair(x, y)) => {
                let wa = a.encode(x)?;
                let wb = b.encode(y)?;
                let len = wa.len().max(wb.len());
                Ok((0..len)
                    .map(|i| {
                        let l1 = wa.get(i).copied().unwrap_or(a.base_len());
                        let l2 = wb.get(i).copied().unwrap_or(b.base_len());
                        self.join_letter(l1, l2)
                    })
                    .collect())
            }
            _ => Err(wrong()),
        }
    }

    /// `Rational`, `Torsion`, `Elementary` or `Pair` zero of this codec's group.
    pub fn zero(&self) -> GroupElement {
        self.decode(&[]).expect("the empty word decodes")
    }
}

fn negabinary_value(digits: impl DoubleEndedIterator<Item = u32>) -> BigRational {
    let mut acc = BigInt::zero();
    for d in digits.rev() {
        acc = acc * BigInt::from(-2) + BigInt::from(d);
    }
    BigRational::from_integer(acc)
}

fn negabinary_digits(m: &BigInt) -> Vec<Letter> {
    let mut m = m.clone();
    let mut out = Vec::new();
    let two = BigInt::from(2);
    while !m.is_zero() {
        let d = m.mod_floor(&two);
        out.push(d.to_u32().unwrap());
        m = (m - d) / BigInt::from(-2);
    }
    out
}

fn fraction_value(p: u32, digits: impl DoubleEndedIterator<Item = u32>) -> BigRational {
    let p = BigRational::from_integer(p.into());
    let mut acc = BigRational::zero();
    for d in digits.rev() {
        acc = (acc + BigRational::from_integer(d.into())) / &p;
    }
    acc
}

/// Digits of `x ∈ [0,1)` with a `p`-power denominator; `None` otherwise.
fn fraction_digits(p: u32, x: &BigRational) -> Option<Vec<Letter>> {
    let mut x = mod_one(x);
    let mut den = x.denom().clone();
    let bp = BigInt::from(p);
    while (&den % &bp).is_zero() {
        den /= &bp;
    }
    if !den.is_one() {
        return None;
    }
    let pr = BigRational::from_integer(bp);
    let mut out = Vec::new();
    while !x.is_zero() {
        x *= &pr;
        let d = x.floor();
        out.push(d.to_integer().to_u32().unwrap());
        x -= d;
    }
    debug_assert!(!x.is_negative());
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> GroupElement {
        GroupElement::rational(n, d)
    }

    #[test]
    fn negabinary_examples() {
        let c = Codec::Negabinary;
        assert_eq!(c.decode(&[0, 1, 1]).unwrap(), GroupElement::int(2));
        assert_eq!(c.encode(&GroupElement::int(2)).unwrap(), vec![0, 1, 1]);
        assert!(c.encode(&GroupElement::int(0)).unwrap().is_empty());
        for n in -300..300 {
            let w = c.encode(&GroupElement::int(n)).unwrap();
            assert_ne!(w.last(), Some(&0));
            assert_eq!(c.decode(&w).unwrap(), GroupElement::int(n));
        }
    }

    #[test]
    fn fraction_examples() {
        let c = Codec::Fraction(2);
        assert_eq!(c.decode(&[0, 1]).unwrap(), GroupElement::torsion(1, 4));
        assert_eq!(c.encode(&GroupElement::torsion(3, 4)).unwrap(), vec![1, 1]);
        assert!(c.encode(&GroupElement::torsion(1, 3)).is_err());
    }

    #[test]
    fn mixed_examples() {
        let c = Codec::Mixed(vec![2]);
        // integer track 11 (= -1), fraction track 1 (= 1/2)
        let w = vec![c.letter_from_digits(&[1, 1]), c.letter_from_digits(&[1, 0])];
        assert_eq!(c.decode(&w).unwrap(), r(-1, 2));
        assert_eq!(c.encode(&r(-1, 2)).unwrap(), w);
        assert!(matches!(c.encode(&r(1, 3)), Err(Error::NotRepresentable(_))));
        let six = Codec::Mixed(vec![2, 3]);
        for (n, d) in [(1, 12), (-7, 18), (5, 6), (-1, 1)] {
            let w = six.encode(&r(n, d)).unwrap();
            assert_eq!(six.decode(&w).unwrap(), r(n, d));
        }
        assert_eq!(six.letter_names()[7], "1:1:1");
    }

    #[test]
    fn pair_examples() {
        let c = Codec::Pair(Box::new(Codec::Negabinary), Box::new(Codec::Negabinary));
        let e = GroupElement::pair(GroupElement::int(1), GroupElement::int(-1));
        let w = c.encode(&e).unwrap();
        assert_eq!(c.decode(&w).unwrap(), e);
        let names = c.letter_names();
        assert_eq!(w.iter().map(|&l| names[l as usize].as_str()).collect::<String>(), "[1|1][_|1]");
    }
}
