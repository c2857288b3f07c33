use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::element::{factorize, is_prime};
use crate::error::{Error, Result};

/// `Z | ModSum(p) | Pruefer(p) | ZInv(n) | Sum(spec, spec)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Z,
    ModSum(u32),
    Pruefer(u32),
    ZInv(u32),
    Sum(Box<GroupSpec>, Box<GroupSpec>),
}

/// Largest prime or `n` accepted; keeps the arity-3 tuple alphabet within `u32`.
const MAX_PARAM: u32 = 400;

impl GroupSpec {
    pub fn sum(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::Sum(Box::new(a), Box::new(b))
    }

    /// Checks primality of `p` and `n ≥ 2`.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Z => Ok(()),
            GroupSpec::ModSum(p) | GroupSpec::Pruefer(p) => {
                if !is_prime(*p as u64) {
                    return Err(Error::InvalidSpec(format!("{p} is not prime")));
                }
                if *p > MAX_PARAM {
                    return Err(Error::InvalidSpec(format!("prime {p} exceeds {MAX_PARAM}")));
                }
                Ok(())
            }
            GroupSpec::ZInv(n) => {
                if *n < 2 {
                    return Err(Error::InvalidSpec(format!("ZInv needs n ≥ 2, got {n}")));
                }
                let radicand: u32 = self.inverted_primes().iter().product();
                if 2 * radicand > MAX_PARAM {
                    return Err(Error::InvalidSpec(format!("ZInv({n}) alphabet too large")));
                }
                Ok(())
            }
            GroupSpec::Sum(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    /// Distinct primes of `n` for `ZInv(n)`, empty otherwise.
    pub fn inverted_primes(&self) -> Vec<u32> {
        match self {
            GroupSpec::ZInv(n) => factorize(&BigInt::from(*n)).into_iter().map(|(p, _)| p as u32).collect(),
            _ => Vec::new(),
        }
    }

    /// Whether multiplication by `p` is onto.
    pub fn is_p_divisible(&self, p: u32) -> bool {
        match self {
            GroupSpec::Z => false,
            GroupSpec::ModSum(q) => *q != p,
            GroupSpec::Pruefer(_) => true,
            GroupSpec::ZInv(_) => self.inverted_primes().contains(&p),
            GroupSpec::Sum(a, b) => a.is_p_divisible(p) && b.is_p_divisible(p),
        }
    }

    /// Whether every element has finite order.
    pub fn is_torsion(&self) -> bool {
        match self {
            GroupSpec::Z | GroupSpec::ZInv(_) => false,
            GroupSpec::ModSum(_) | GroupSpec::Pruefer(_) => true,
            GroupSpec::Sum(a, b) => a.is_torsion() && b.is_torsion(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Z => write!(f, "Z"),
            GroupSpec::ModSum(p) => write!(f, "ModSum({p})"),
            GroupSpec::Pruefer(p) => write!(f, "Pruefer({p})"),
            GroupSpec::ZInv(n) => write!(f, "ZInv({n})"),
            GroupSpec::Sum(a, b) => write!(f, "Sum({a},{b})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser { text: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

struct SpecParser<'a> {
    text: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidSpec(format!("{msg} at position {} in `{}`", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..].find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(self.text.len() - start);
        self.pos += len;
        &self.text[start..start + len]
    }

    fn number(&mut self) -> Result<u32> {
        self.eat('(')?;
        let digits = self.ident().to_string();
        let n = digits.parse::<u32>().map_err(|_| self.err(&format!("expected a number, found `{digits}`")))?;
        self.eat(')')?;
        Ok(n)
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let name = self.ident().to_string();
        match name.as_str() {
            "Z" => Ok(GroupSpec::Z),
            "ModSum" => Ok(GroupSpec::ModSum(self.number()?)),
            "Pruefer" => Ok(GroupSpec::Pruefer(self.number()?)),
            "ZInv" => Ok(GroupSpec::ZInv(self.number()?)),
            "Sum" => {
                self.eat('(')?;
                let a = self.spec()?;
                self.eat(',')?;
                let b = self.spec()?;
                self.eat(')')?;
                Ok(GroupSpec::sum(a, b))
            }
            "" => Err(self.err("expected a group name")),
            other => Err(self.err(&format!("unknown group `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for text in ["Z", "ModSum(3)", "Pruefer(2)", "ZInv(6)", "Sum(Z,Sum(ModSum(2),Pruefer(5)))"] {
            let s: GroupSpec = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert_eq!(" Sum( Z , Z ) ".parse::<GroupSpec>().unwrap(), GroupSpec::sum(GroupSpec::Z, GroupSpec::Z));
    }

    #[test]
    fn rejects_bad_parameters() {
        for bad in ["ModSum(4)", "Pruefer(1)", "ZInv(1)", "ZInv(0)", "Q", "Sum(Z)", "Z Z", "ModSum(x)"] {
            assert!(matches!(bad.parse::<GroupSpec>(), Err(Error::InvalidSpec(_))), "{bad}");
        }
    }

    #[test]
    fn divisibility() {
        let z6: GroupSpec = "ZInv(6)".parse().unwrap();
        assert_eq!(z6.inverted_primes(), vec![2, 3]);
        assert!(z6.is_p_divisible(3) && !z6.is_p_divisible(5));
        assert!(!GroupSpec::Z.is_p_divisible(2));
        assert!(GroupSpec::Pruefer(3).is_p_divisible(2));
    }
}
