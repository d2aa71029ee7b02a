use crate::error::OrderError;

use super::PreorderedSet;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Lt,
    Comma,
    Semi,
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '/' || c == '.'
}

fn lex(text: &str) -> Result<Vec<Spanned>, OrderError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            let column = i + 1;
            let single = match c {
                '<' => Some(Tok::Lt),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned {
                    tok,
                    line: lineno + 1,
                    column,
                });
                i += 1;
            } else if c.is_whitespace() {
                i += 1;
            } else if is_name_char(c) {
                let start = i;
                while i < chars.len() && is_name_char(chars[i].1) {
                    i += 1;
                }
                let name: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push(Spanned {
                    tok: Tok::Name(name),
                    line: lineno + 1,
                    column,
                });
            } else {
                return Err(OrderError::Syntax {
                    line: lineno + 1,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.eof)
    }

    fn error(&self, message: impl Into<String>) -> OrderError {
        let (line, column) = self.here();
        OrderError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn name(&mut self) -> Result<(String, (usize, usize)), OrderError> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok((n, at))
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), OrderError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }
}

type Located = (String, (usize, usize));

#[derive(Default)]
struct Declarations {
    elements: Vec<String>,
    edges: Vec<(Located, Located)>,
    bounds: Option<(Located, Located)>,
}

/// Parses the poset source format:
///
/// ```text
/// elements one half third zero; chain zero<third<half<one; bounds zero one
/// ```
///
/// Statements are `elements`, `order a<b, c<d`, `chain a<b<c` and
/// `bounds zero one`, separated by `;`. `#` starts a comment.
pub fn parse_poset(text: &str) -> Result<PreorderedSet, OrderError> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let last_col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut p = Parser {
        toks,
        pos: 0,
        eof: (last_line, last_col),
    };
    let mut decl = Declarations::default();
    loop {
        statement(&mut p, &mut decl)?;
        match p.peek() {
            None => break,
            Some(Tok::Semi) => {
                p.pos += 1;
                // tolerate a trailing separator
                if p.peek().is_none() {
                    break;
                }
            }
            Some(_) => return Err(p.error("expected `;` between statements")),
        }
    }

    let position = |(name, (line, column)): &Located| {
        decl.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| OrderError::Syntax {
                line: *line,
                column: *column,
                message: format!("unknown element `{name}`"),
            })
    };
    let mut edges = Vec::with_capacity(decl.edges.len());
    for (a, b) in &decl.edges {
        edges.push((position(a)?, position(b)?));
    }
    let bounds = match &decl.bounds {
        Some((z, o)) => {
            let find = |l: &Located| {
                decl.elements
                    .iter()
                    .position(|e| *e == l.0)
                    .ok_or_else(|| OrderError::BoundNotElement(l.0.clone()))
            };
            Some((find(z)?, find(o)?))
        }
        None => None,
    };
    PreorderedSet::new(decl.elements, edges, bounds)
}

fn statement(p: &mut Parser, decl: &mut Declarations) -> Result<(), OrderError> {
    let (keyword, _) = p.name().map_err(|_| p.error("expected a statement keyword"))?;
    match keyword.as_str() {
        "elements" => {
            let mut any = false;
            while let Some(Tok::Name(_)) = p.peek() {
                let (n, _) = p.name()?;
                if !decl.elements.contains(&n) {
                    decl.elements.push(n);
                }
                any = true;
            }
            if !any {
                return Err(p.error("`elements` needs at least one name"));
            }
        }
        "order" => loop {
            let a = p.name()?;
            p.expect(Tok::Lt, "`<`")?;
            let b = p.name()?;
            decl.edges.push((a, b));
            if p.peek() == Some(&Tok::Comma) {
                p.pos += 1;
            } else {
                break;
            }
        },
        "chain" => {
            let mut prev = p.name()?;
            p.expect(Tok::Lt, "`<`")?;
            loop {
                let next = p.name()?;
                decl.edges.push((prev, next.clone()));
                prev = next;
                if p.peek() == Some(&Tok::Lt) {
                    p.pos += 1;
                } else {
                    break;
                }
            }
        }
        "bounds" => {
            let z = p.name()?;
            let o = p.name()?;
            decl.bounds = Some((z, o));
        }
        other => {
            p.pos -= 1;
            return Err(p.error(format!("unknown statement `{other}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_order() {
        let m = parse_poset("elements a b; order a<b").unwrap();
        let (a, b) = (m.resolve("a").unwrap(), m.resolve("b").unwrap());
        assert!(m.leq(a, a) && m.leq(b, b) && m.leq(a, b));
        assert!(!m.leq(b, a));
        assert_eq!(m.relation().len(), 3);
    }

    #[test]
    fn one_point() {
        let m = parse_poset("elements x").unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.relation().len(), 1);
    }

    #[test]
    fn magnitude_chain() {
        let m = parse_poset(
            "elements one half third zero; chain zero<third<half<one; bounds zero one",
        )
        .unwrap();
        assert_eq!(m.relation().len(), 10);
        assert_eq!(m.zero(), m.lookup("zero"));
        assert_eq!(m.one(), m.lookup("one"));
        assert!(m.leq(m.resolve("third").unwrap(), m.resolve("half").unwrap()));
    }

    #[test]
    fn comments_and_duplicate_edges() {
        let m = parse_poset("# header\nelements a b # trailing\n; order a<b, a<b;").unwrap();
        assert_eq!(m.relation().len(), 3);
    }

    #[test]
    fn unknown_edge_name_reports_position() {
        let err = parse_poset("elements a b; order a<c").unwrap_err();
        assert_eq!(
            err,
            OrderError::Syntax {
                line: 1,
                column: 23,
                message: "unknown element `c`".into()
            }
        );
    }

    #[test]
    fn bound_must_be_declared() {
        let err = parse_poset("elements a b; bounds a z").unwrap_err();
        assert_eq!(err, OrderError::BoundNotElement("z".into()));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        match parse_poset("elements a b\n; order a b").unwrap_err() {
            OrderError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 11)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poset("elements a; frobnicate a").unwrap_err(),
            OrderError::Syntax { .. }
        ));
        assert!(matches!(
            parse_poset("elements a ! b").unwrap_err(),
            OrderError::Syntax { .. }
        ));
    }
}
