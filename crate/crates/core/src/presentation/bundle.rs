//! Presentation bundle files.
//!
//! ```text
//! bundle 1
//! spec ZInv(6)
//! codec mixed 2 3
//! begin domain
//! <automaton text>
//! end domain
//! begin add
//! <automaton text>
//! end add
//! ```

use super::{codec_for, Codec, GroupSpec, Presentation};
use crate::automaton::Automaton;
use crate::error::{Error, Result};

fn codec_line(c: &Codec) -> String {
    match c {
        Codec::Negabinary => "negabinary".into(),
        Codec::Elementary(p) => format!("elementary {p}"),
        Codec::Fraction(p) => format!("fraction {p}"),
        Codec::Mixed(ps) => {
            let ps: Vec<String> = ps.iter().map(u32::to_string).collect();
            format!("mixed {}", ps.join(" "))
        }
        Codec::Pair(a, b) => format!("pair ({}) ({})", codec_line(a), codec_line(b)),
    }
}

fn err(line: usize, msg: &str) -> Error {
    Error::Parse { line: line + 1, msg: msg.into() }
}

/// Next non-blank line, which must start with `want`; returns its index and the remainder.
fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, want: &str) -> Result<(usize, String)> {
    loop {
        let (i, l) = lines.next().ok_or_else(|| err(0, &format!("missing `{want}` line")))?;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        return l
            .strip_prefix(want)
            .map(|rest| (i, rest.trim().to_string()))
            .ok_or_else(|| err(i, &format!("expected `{want}`")));
    }
}

impl Presentation {
    pub fn to_bundle(&self) -> String {
        let mut out = String::from("bundle 1\n");
        out.push_str(&format!("spec {}\n", self.spec()));
        out.push_str(&format!("codec {}\n", codec_line(self.codec())));
        for (name, aut) in [("domain", self.domain()), ("add", self.add())] {
            out.push_str(&format!("begin {name}\n"));
            out.push_str(&aut.to_text());
            out.push_str(&format!("end {name}\n"));
        }
        out
    }

    /// Loads a bundle; the codec is determined by the spec and must match the `codec` line.
    pub fn from_bundle(text: &str) -> Result<Presentation> {
        let mut lines = text.lines().enumerate();
        let (i, version) = header(&mut lines, "bundle")?;
        if version != "1" {
            return Err(err(i, &format!("unsupported bundle version `{version}`")));
        }
        let (i, spec_text) = header(&mut lines, "spec")?;
        let spec: GroupSpec = spec_text.parse().map_err(|e: Error| err(i, &e.to_string()))?;
        let (i, codec_text) = header(&mut lines, "codec")?;
        if codec_text != codec_line(&codec_for(&spec)) {
            return Err(err(i, &format!("codec `{codec_text}` does not match spec {spec}")));
        }
        let mut automata = Vec::new();
        for name in ["domain", "add"] {
            let (start, rest) = header(&mut lines, "begin")?;
            if rest != name {
                return Err(err(start, &format!("expected `begin {name}`")));
            }
            let mut body = String::new();
            let mut closed = false;
            for (_, l) in lines.by_ref() {
                if l.trim() == format!("end {name}") {
                    closed = true;
                    break;
                }
                body.push_str(l);
                body.push('\n');
            }
            if !closed {
                return Err(err(start, &format!("unterminated `begin {name}`")));
            }
            let aut = Automaton::from_text(&body).map_err(|e| match e {
                Error::Parse { line, msg } => Error::Parse { line: start + 1 + line, msg },
                other => other,
            })?;
            automata.push(aut);
        }
        let add = automata.pop().unwrap();
        let domain = automata.pop().unwrap();
        Presentation::from_parts(spec, domain, add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for spec in ["Z", "ZInv(6)", "Sum(Z,ModSum(2))"] {
            let p = Presentation::parse(spec).unwrap();
            let text = p.to_bundle();
            let q = Presentation::from_bundle(&text).unwrap();
            assert_eq!(q.to_bundle(), text);
            assert!(q.add().equivalent(p.add()).unwrap());
        }
    }

    #[test]
    fn rejects_mismatched_codec() {
        let text = Presentation::parse("Z").unwrap().to_bundle().replace("codec negabinary", "codec fraction 2");
        assert!(matches!(Presentation::from_bundle(&text), Err(Error::Parse { line: 3, .. })));
        assert!(Presentation::from_bundle("bundle 2\n").is_err());
    }
}
