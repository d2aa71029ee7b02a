use std::fmt::Write as _;

use crate::error::{ProofError, SyntaxError};
use crate::order::PreorderedSet;

use super::{Derivation, RuleTag};

pub const HEADER: &str = "freelat-proof v1";

/// Sequents that have a one-line text form in their calculus grammar.
pub trait SequentText: Sized {
    const FLAVOR: &'static str;

    fn write(&self, base: &PreorderedSet) -> String;

    fn read(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError>;
}

/// Renders a derivation document:
///
/// ```text
/// freelat-proof v1 ortho
/// (R33 "p |- ~~p" []
///   (R34 "p ^ ~p |- 0" [1]
///     (PRIME "p |- p" [])))
/// ```
pub fn serialize<S: SequentText>(d: &Derivation<S>, base: &PreorderedSet) -> String {
    let mut out = format!("{HEADER} {}\n", S::FLAVOR);
    write_node(&mut out, d, base, 0);
    out.push('\n');
    out
}

fn write_node<S: SequentText>(out: &mut String, d: &Derivation<S>, base: &PreorderedSet, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    let side: Vec<String> = d.side.iter().map(|n| n.to_string()).collect();
    let _ = write!(
        out,
        "({} {} [{}]",
        d.rule,
        quote(&d.conclusion.write(base)),
        side.join(" ")
    );
    for p in &d.premises {
        out.push('\n');
        write_node(out, p, base, depth + 1);
    }
    out.push(')');
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

pub fn deserialize<S: SequentText>(text: &str, base: &PreorderedSet) -> Result<Derivation<S>, ProofError> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let header = header.trim();
    let mut words = header.split_whitespace();
    let (magic, version, flavor) = (words.next(), words.next(), words.next());
    if magic != Some("freelat-proof") {
        return Err(ProofError::Document {
            offset: 0,
            message: "missing `freelat-proof` header".into(),
        });
    }
    if version != Some("v1") {
        return Err(ProofError::Version(version.unwrap_or("").to_string()));
    }
    if flavor != Some(S::FLAVOR) || words.next().is_some() {
        return Err(ProofError::Document {
            offset: 0,
            message: format!("expected flavor `{}`", S::FLAVOR),
        });
    }
    let start = text.len() - body.len();
    let mut r = Reader {
        src: body.as_bytes(),
        pos: 0,
        base_offset: start,
    };
    let node = r.node(base)?;
    r.skip_ws();
    if r.pos != r.src.len() {
        return Err(r.error("trailing content after the root node"));
    }
    Ok(node)
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    base_offset: usize,
}

impl Reader<'_> {
    fn error(&self, message: impl Into<String>) -> ProofError {
        ProofError::Document {
            offset: self.base_offset + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ProofError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn atom(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() || matches!(c, b'(' | b')' | b'[' | b']' | b'"') {
                break;
            }
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn string(&mut self) -> Result<String, ProofError> {
        self.expect(b'"')?;
        let mut bytes = Vec::new();
        loop {
            match self.src.get(self.pos) {
                None => return Err(self.error("unterminated string")),
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    let Some(&c) = self.src.get(self.pos + 1) else {
                        return Err(self.error("unterminated escape"));
                    };
                    bytes.push(c);
                    self.pos += 2;
                }
                Some(&c) => {
                    bytes.push(c);
                    self.pos += 1;
                }
            }
        }
        String::from_utf8(bytes).map_err(|_| self.error("string is not UTF-8"))
    }

    fn node<S: SequentText>(&mut self, base: &PreorderedSet) -> Result<Derivation<S>, ProofError> {
        self.expect(b'(')?;
        let tag_at = self.pos;
        let tag = self.atom();
        let rule: RuleTag = tag.parse().map_err(|m: String| ProofError::Document {
            offset: self.base_offset + tag_at,
            message: m,
        })?;
        let text = self.string()?;
        let conclusion = S::read(base, &text)?;
        self.expect(b'[')?;
        let mut side = Vec::new();
        loop {
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b']') {
                self.pos += 1;
                break;
            }
            let n = self.atom();
            if n.is_empty() {
                return Err(self.error("expected a number or `]`"));
            }
            side.push(n.parse().map_err(|_| self.error(format!("bad side value `{n}`")))?);
        }
        let mut premises = Vec::new();
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b'(') => premises.push(self.node(base)?),
                _ => return Err(self.error("expected a child node or `)`")),
            }
        }
        Ok(Derivation {
            conclusion,
            rule,
            side,
            premises,
        })
    }
}
