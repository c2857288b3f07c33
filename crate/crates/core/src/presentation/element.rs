use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::report::fmt_rational;

/// An exact element of one of the presented groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// A vector of `Q^k` (torsion-free parts); `Z` and `Z[1/n]` use `k = 1`.
    Rational(Vec<BigRational>),
    /// A fraction `a/q` taken mod 1, stored reduced in `[0, 1)`.
    Torsion(BigRational),
    /// An element of `⊕ Z/pZ`: finitely many residues, trailing zeros removed.
    Elementary { p: u32, digits: Vec<u32> },
    /// An element of a direct sum.
    Pair(Box<GroupElement>, Box<GroupElement>),
}

/// Reduces a rational into `[0, 1)`.
pub fn mod_one(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl GroupElement {
    pub fn int(n: i64) -> Self {
        GroupElement::Rational(vec![BigRational::from_integer(n.into())])
    }

    pub fn rational(num: i64, den: i64) -> Self {
        GroupElement::Rational(vec![BigRational::new(num.into(), den.into())])
    }

    pub fn torsion(num: i64, den: i64) -> Self {
        GroupElement::Torsion(mod_one(&BigRational::new(num.into(), den.into())))
    }

    pub fn elementary(p: u32, digits: Vec<u32>) -> Self {
        let mut digits: Vec<u32> = digits.into_iter().map(|d| d % p).collect();
        while digits.last() == Some(&0) {
            digits.pop();
        }
        GroupElement::Elementary { p, digits }
    }

    pub fn pair(a: GroupElement, b: GroupElement) -> Self {
        GroupElement::Pair(Box::new(a), Box::new(b))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupElement::Rational(v) => v.iter().all(Zero::is_zero),
            GroupElement::Torsion(x) => x.is_zero(),
            GroupElement::Elementary { digits, .. } => digits.is_empty(),
            GroupElement::Pair(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    /// The identity of the same group shape.
    pub fn zero_like(&self) -> Self {
        match self {
            GroupElement::Rational(v) => GroupElement::Rational(vec![BigRational::zero(); v.len()]),
            GroupElement::Torsion(_) => GroupElement::Torsion(BigRational::zero()),
            GroupElement::Elementary { p, .. } => GroupElement::Elementary { p: *p, digits: Vec::new() },
            GroupElement::Pair(a, b) => GroupElement::pair(a.zero_like(), b.zero_like()),
        }
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        Ok(match (self, other) {
            (Rational(a), Rational(b)) if a.len() == b.len() => {
                Rational(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Torsion(a), Torsion(b)) => Torsion(mod_one(&(a + b))),
            (Elementary { p, digits: a }, Elementary { p: q, digits: b }) if p == q => {
                let n = a.len().max(b.len());
                let digits = (0..n)
                    .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
                    .collect();
                GroupElement::elementary(*p, digits)
            }
            (Pair(a1, b1), Pair(a2, b2)) => GroupElement::pair(a1.add(a2)?, b1.add(b2)?),
            _ => return Err(Error::Precondition(format!("cannot add {self} and {other}"))),
        })
    }

    pub fn neg(&self) -> GroupElement {
        use GroupElement::*;
        match self {
            Rational(a) => Rational(a.iter().map(|x| -x).collect()),
            Torsion(a) => Torsion(mod_one(&-a)),
            Elementary { p, digits } => GroupElement::elementary(*p, digits.iter().map(|d| (p - d) % p).collect()),
            Pair(a, b) => GroupElement::pair(a.neg(), b.neg()),
        }
    }

    /// `n · self`.
    pub fn scale(&self, n: i64) -> GroupElement {
        use GroupElement::*;
        let k = BigRational::from_integer(n.into());
        match self {
            Rational(a) => Rational(a.iter().map(|x| x * &k).collect()),
            Torsion(a) => Torsion(mod_one(&(a * &k))),
            Elementary { p, digits } => {
                let m = n.rem_euclid(*p as i64) as u32;
                GroupElement::elementary(*p, digits.iter().map(|d| d * m % p).collect())
            }
            Pair(a, b) => GroupElement::pair(a.scale(n), b.scale(n)),
        }
    }

    /// The single coordinate of a rank-1 rational element.
    pub fn as_scalar(&self) -> Option<&BigRational> {
        match self {
            GroupElement::Rational(v) if v.len() == 1 => Some(&v[0]),
            _ => None,
        }
    }

    /// Parses `3`, `-1/2`, a vector `1/2,3`, or with `torsion` a fraction mod 1.
    pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>> {
        text.split(',').map(|t| parse_rational(t.trim())).collect()
    }
}

/// Parses `a`, `a/b` or a finite decimal such as `2.5`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Precondition(format!("not a rational number: `{text}`"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = text.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip: BigInt = if ip.is_empty() || ip == "-" { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let mag = ip.abs() * &scale + frac;
        let num = if neg { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    text.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

/// Splits `x mod 1` into its `p`-primary components (CRT on the reduced denominator).
///
/// Returns pairs `(p, component)` for every prime `p` dividing the denominator.
pub fn primary_components(x: &BigRational) -> Vec<(u64, BigRational)> {
    let x = mod_one(x);
    if x.is_zero() {
        return Vec::new();
    }
    let q = x.denom().clone();
    let a = x.numer().clone();
    let mut out = Vec::new();
    for (p, e) in factorize(&q) {
        let pe = BigInt::from(p).pow(e);
        let rest = &q / &pe;
        let inv = mod_inverse(&(&rest % &pe), &pe).expect("coprime cofactor");
        let num = (&a * inv).mod_floor(&pe);
        out.push((p, BigRational::new(num, pe)));
    }
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Trial-division factorization of a positive integer.
pub fn factorize(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let last: u64 = n.try_into().expect("remaining prime factor fits in u64");
        out.push((last, 1));
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Rational(v) if v.len() == 1 => write!(f, "{}", fmt_rational(&v[0])),
            GroupElement::Rational(v) => {
                let parts: Vec<String> = v.iter().map(fmt_rational).collect();
                write!(f, "({})", parts.join(", "))
            }
            GroupElement::Torsion(x) => write!(f, "{} mod 1", fmt_rational(x)),
            GroupElement::Elementary { p, digits } => {
                let parts: Vec<String> = digits.iter().map(u32::to_string).collect();
                write!(f, "[{}] mod {p}", parts.join(","))
            }
            GroupElement::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}
