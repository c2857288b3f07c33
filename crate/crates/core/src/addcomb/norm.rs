//! p-adic norms on Q, on Q^k (coordinate maximum) and on torsion elements of Q/Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{mod_one, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormVariant {
    Rational,
    VectorMax,
    TorsionOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicNorm {
    pub p: u64,
    pub variant: NormVariant,
}

impl PAdicNorm {
    pub fn new(p: u64, variant: NormVariant) -> Result<PAdicNorm> {
        if !crate::presentation::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(PAdicNorm { p, variant })
    }

    pub fn rational(p: u64) -> Result<PAdicNorm> {
        PAdicNorm::new(p, NormVariant::Rational)
    }
}

/// Exponent `v` with `p^v ‖ n` for nonzero `n`.
pub fn valuation_int(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero rational.
pub fn valuation(x: &BigRational, p: u64) -> i64 {
    valuation_int(x.numer(), p) as i64 - valuation_int(x.denom(), p) as i64
}

/// `p^e` for any integer exponent.
pub fn power(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// `‖x‖_p = p^{-v_p(x)}`, `‖0‖_p = 0`.
pub fn rational_norm(x: &BigRational, p: u64) -> BigRational {
    if x.is_zero() {
        BigRational::zero()
    } else {
        power(p, -valuation(x, p))
    }
}

/// Order of the `p`-primary component of `x mod 1`; `0` when that component vanishes.
pub fn torsion_norm(x: &BigRational, p: u64) -> BigRational {
    let r = mod_one(x);
    if r.is_zero() {
        return BigRational::zero();
    }
    let e = valuation_int(r.denom(), p);
    if e == 0 {
        BigRational::zero()
    } else {
        power(p, e as i64)
    }
}

/// Norm of a single element under `ctx`.
pub fn padic_norm(x: &GroupElement, ctx: &PAdicNorm) -> Result<BigRational> {
    let p = ctx.p;
    match (ctx.variant, x) {
        (NormVariant::Rational, GroupElement::Rational(v)) if v.len() == 1 => Ok(rational_norm(&v[0], p)),
        (NormVariant::VectorMax, GroupElement::Rational(v)) => {
            Ok(v.iter().map(|c| rational_norm(c, p)).max().unwrap_or_else(BigRational::zero))
        }
        (NormVariant::TorsionOrder, GroupElement::Torsion(t)) => Ok(torsion_norm(t, p)),
        (_, GroupElement::Pair(a, b)) if ctx.variant != NormVariant::Rational => {
            Ok(padic_norm(a, &element_ctx(a, p))?.max(padic_norm(b, &element_ctx(b, p))?))
        }
        _ => Err(Error::WrongVariant(format!("{:?} norm does not apply to {x}", ctx.variant))),
    }
}

fn element_ctx(x: &GroupElement, p: u64) -> PAdicNorm {
    let variant = match x {
        GroupElement::Rational(v) if v.len() == 1 => NormVariant::Rational,
        GroupElement::Torsion(_) => NormVariant::TorsionOrder,
        _ => NormVariant::VectorMax,
    };
    PAdicNorm { p, variant }
}

/// The norm matching the element's kind: rational, coordinate maximum, torsion order, maximum over summands.
pub fn natural_norm(x: &GroupElement, p: u64) -> Result<BigRational> {
    padic_norm(x, &element_ctx(x, p))
}

/// `‖A‖_p = max_{a∈A} ‖a‖_p`; the flag is set when `A` is empty and the value is the conventional `0`.
pub fn set_norm<'a>(
    a: impl IntoIterator<Item = &'a GroupElement>,
    ctx: &PAdicNorm,
) -> Result<(BigRational, bool)> {
    let mut best: Option<BigRational> = None;
    for x in a {
        let n = padic_norm(x, ctx)?;
        if best.as_ref().is_none_or(|b| n > *b) {
            best = Some(n);
        }
    }
    Ok(match best {
        Some(b) => (b, false),
        None => (BigRational::zero(), true),
    })
}

/// `[V : V_(p)]` for `V = ⟨g⟩ ≤ Q`, found by scanning multiples `k·g`, `1 ≤ k ≤ limit`.
///
/// `V_(p)` is a subgroup of the cyclic group `V`, so it is `⟨k₀·g⟩` for the least such `k₀`
/// and the index is `k₀`; every multiple up to `limit` is checked against that description.
pub fn cyclic_index(g: &BigRational, p: u64, limit: u64) -> Result<u64> {
    let top = rational_norm(g, p);
    if top.is_zero() {
        return Err(Error::Precondition("‖V‖_p must be positive".into()));
    }
    let mut k0 = None;
    for k in 1..=limit {
        let below = rational_norm(&(g * BigRational::from_integer(k.into())), p) < top;
        match k0 {
            None if below => k0 = Some(k),
            Some(k0) if below != (k % k0 == 0) => {
                return Err(Error::InvalidAutomaton(format!("V_(p) is not a subgroup at {k}")));
            }
            _ => {}
        }
    }
    k0.ok_or_else(|| Error::CapExceeded(format!("no multiple below the norm up to {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let two = PAdicNorm::rational(2).unwrap();
        assert_eq!(padic_norm(&GroupElement::int(0), &two).unwrap(), q(0, 1));
        assert_eq!(padic_norm(&GroupElement::int(12), &two).unwrap(), q(1, 4));
        assert_eq!(rational_norm(&q(1, 3), 3), q(3, 1));
        let t = PAdicNorm::new(2, NormVariant::TorsionOrder).unwrap();
        assert_eq!(padic_norm(&GroupElement::torsion(1, 12), &t).unwrap(), q(4, 1));
        assert_eq!(torsion_norm(&q(1, 3), 2), q(0, 1));
        let elems = [GroupElement::rational(1, 2), GroupElement::int(3), GroupElement::rational(1, 8)];
        assert_eq!(set_norm(&elems, &two).unwrap(), (q(8, 1), false));
        assert_eq!(set_norm(&[], &two).unwrap(), (q(0, 1), true));
        assert!(matches!(padic_norm(&GroupElement::torsion(1, 2), &two), Err(Error::WrongVariant(_))));
        assert!(PAdicNorm::rational(6).is_err());
    }

    #[test]
    fn vector_and_pair() {
        let v = GroupElement::Rational(vec![q(1, 2), q(1, 4), q(3, 1)]);
        let ctx = PAdicNorm::new(2, NormVariant::VectorMax).unwrap();
        assert_eq!(padic_norm(&v, &ctx).unwrap(), q(4, 1));
        let pair = GroupElement::pair(GroupElement::int(6), GroupElement::torsion(1, 8));
        assert_eq!(natural_norm(&pair, 2).unwrap(), q(8, 1));
    }

    #[test]
    fn index_is_p() {
        assert_eq!(cyclic_index(&q(3, 20), 5, 200).unwrap(), 5);
        assert_eq!(cyclic_index(&q(7, 1), 7, 200).unwrap(), 7);
        assert!(cyclic_index(&q(0, 1), 7, 10).is_err());
    }
}
