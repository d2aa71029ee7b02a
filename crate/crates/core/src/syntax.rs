//! Tokenizer shared by the term, formula and sequent readers.

use crate::error::SyntaxError;
use crate::order::is_name_char;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    Meet,
    /// The bare name `v`.
    Join,
    Neg,
    LParen,
    RParen,
    /// `A{`
    Forall,
    /// `E{`
    Exists,
    RBrace,
    Comma,
    Turnstile,
    Leq,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let simple = match c {
            '^' => Some(Tok::Meet),
            '~' => Some(Tok::Neg),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset: i });
            chars.next();
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '|' {
            chars.next();
            match chars.next() {
                Some((_, '-')) => out.push(Token {
                    tok: Tok::Turnstile,
                    offset: i,
                }),
                _ => return Err(SyntaxError::at(i, "expected `|-`")),
            }
            continue;
        }
        if c == '<' {
            chars.next();
            match chars.next() {
                Some((_, '=')) => out.push(Token {
                    tok: Tok::Leq,
                    offset: i,
                }),
                _ => return Err(SyntaxError::at(i, "expected `<=`")),
            }
            continue;
        }
        if is_name_char(c) {
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !is_name_char(c) {
                    break;
                }
                name.push(c);
                chars.next();
            }
            let brace = matches!(chars.peek(), Some((_, '{')));
            let tok = match (name.as_str(), brace) {
                ("A", true) => Tok::Forall,
                ("E", true) => Tok::Exists,
                ("v", _) => Tok::Join,
                _ => Tok::Name(name),
            };
            if matches!(tok, Tok::Forall | Tok::Exists) {
                chars.next();
            }
            out.push(Token { tok, offset: i });
            continue;
        }
        return Err(SyntaxError::at(i, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Cursor over a token slice.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], end: usize) -> Self {
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.offset).unwrap_or(self.end)
    }

    pub fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(SyntaxError::at(self.offset(), format!("expected {what}")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(SyntaxError::at(self.offset(), "unexpected trailing input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn quantifier_braces_and_join() {
        assert_eq!(
            kinds("A{1, 1/2} v ~p"),
            vec![
                Tok::Forall,
                Tok::Name("1".into()),
                Tok::Comma,
                Tok::Name("1/2".into()),
                Tok::RBrace,
                Tok::Join,
                Tok::Neg,
                Tok::Name("p".into()),
            ]
        );
        assert_eq!(kinds("A ^ v1"), vec![Tok::Name("A".into()), Tok::Meet, Tok::Name("v1".into())]);
        assert_eq!(kinds("a |- b <= c"), vec![
            Tok::Name("a".into()),
            Tok::Turnstile,
            Tok::Name("b".into()),
            Tok::Leq,
            Tok::Name("c".into()),
        ]);
        assert!(tokenize("a | b").is_err());
        assert!(tokenize("a $ b").is_err());
    }
}
