//! Formula syntax.
//!
//! ```text
//! formula := quant | imp
//! quant   := ("E" | "A" | "Einf") var "." formula | "Emod" m n var "." formula
//! imp     := or ("->" formula)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | quant | "(" formula ")" | Rel "(" var, ... ")" | var "=" var
//! ```
//!
//! A quantifier's body extends as far right as possible.

use std::collections::BTreeMap;

use super::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    Equals,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' {
            if chars.get(i + 1).map(|&(_, c)| c) != Some('>') {
                return Err(Error::Syntax { pos, msg: "expected `->`".into() });
            }
            out.push((pos, Tok::Arrow));
            i += 2;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let n = s.parse().map_err(|_| Error::Syntax { pos, msg: format!("number `{s}` too large") })?;
            out.push((pos, Tok::Num(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    arities: &'a BTreeMap<String, usize>,
}

const KEYWORDS: [&str; 4] = ["E", "A", "Einf", "Emod"];

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn number(&mut self) -> Result<u64> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.i += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.i += 1;
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.i += 1;
            f = Formula::Or(Box::new(f), Box::new(self.and()?));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.i += 1;
            f = Formula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn quantifier(&mut self, kw: &str) -> Result<Formula> {
        let counting = if kw == "Emod" {
            let pos = self.pos();
            let m = self.number()?;
            let n = self.number()?;
            if n == 0 || m >= n {
                return Err(Error::Syntax { pos, msg: format!("Emod needs 0 ≤ m < n, got m = {m}, n = {n}") });
            }
            Some((m, n))
        } else {
            None
        };
        let x = self.var()?;
        self.expect(Tok::Dot, "`.` after the bound variable")?;
        let body = Box::new(self.formula()?);
        Ok(match (kw, counting) {
            ("E", _) => Formula::Exists(x, body),
            ("A", _) => Formula::Forall(x, body),
            ("Einf", _) => Formula::ExistsInf(x, body),
            (_, Some((m, n))) => Formula::ExistsMod { m, n, var: x, body },
            _ => unreachable!(),
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.i += 1;
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(kw)) if KEYWORDS.contains(&kw.as_str()) => {
                self.i += 1;
                self.quantifier(&kw)
            }
            Some(Tok::Ident(name)) => {
                let pos = self.pos();
                self.i += 1;
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.i += 1;
                        let mut args = vec![self.var()?];
                        while self.peek() == Some(&Tok::Comma) {
                            self.i += 1;
                            args.push(self.var()?);
                        }
                        self.expect(Tok::RParen, "`)` or `,`")?;
                        let expected = *self.arities.get(&name).ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                        if expected != args.len() {
                            return Err(Error::ArityMismatch { name, expected, got: args.len() });
                        }
                        Ok(Formula::Atom(name, args))
                    }
                    Some(Tok::Equals) => {
                        self.i += 1;
                        let rhs = self.var()?;
                        Ok(Formula::Eq(name, rhs))
                    }
                    _ => Err(Error::Syntax { pos, msg: format!("`{name}` must be followed by `(` or `=`") }),
                }
            }
            _ => self.err("expected a formula"),
        }
    }
}

/// Parses against a signature mapping relation names to arities.
pub fn parse_with(text: &str, arities: &BTreeMap<String, usize>) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, end: text.len(), arities };
    let f = p.formula()?;
    if p.i != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses against the group signature `Add/3`, `Eq/2`.
pub fn parse(text: &str) -> Result<Formula> {
    let arities = BTreeMap::from([("Add".to_string(), 3), ("Eq".to_string(), 2)]);
    parse_with(text, &arities)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f = parse("E y. Add(y,y,x)").unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
        assert!(matches!(parse("Einf x. x = x").unwrap(), Formula::ExistsInf(..)));
        assert!(matches!(parse("Emod 0 2 y. Add(y,y,x)").unwrap(), Formula::ExistsMod { m: 0, n: 2, .. }));
    }

    #[test]
    fn precedence() {
        let f = parse("!a = b & c = d | e = f -> g = h -> i = j").unwrap();
        let Formula::Implies(lhs, rhs) = f else { panic!() };
        assert!(matches!(*rhs, Formula::Implies(..)));
        let Formula::Or(and, _) = *lhs else { panic!() };
        let Formula::And(not, _) = *and else { panic!() };
        assert!(matches!(*not, Formula::Not(_)));
        // body extends right
        let g = parse("E x. x = y & y = y").unwrap();
        assert!(matches!(g, Formula::Exists(_, ref b) if matches!(**b, Formula::And(..))));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("E x. Mul(x,x,x)"), Err(Error::UnknownRelation(_))));
        assert!(matches!(parse("Add(x,y)"), Err(Error::ArityMismatch { expected: 3, got: 2, .. })));
        assert!(matches!(parse("E x Add(x,x,x)"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("Emod 2 2 x. x = x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x = y )"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse("x = y @"), Err(Error::Syntax { pos: 6, .. })));
    }
}
