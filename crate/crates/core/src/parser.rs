//! Concrete syntax for ground normal programs.
//!
//! ```text
//! program   := statement*
//! statement := atom ( ":-" literal ( "," literal )* )? "."
//! literal   := "not" atom | atom
//! atom      := [a-z][A-Za-z0-9_]*
//! ```
//!
//! `%` starts a comment running to the end of the line. `not` is a keyword
//! and cannot be used as an atom name.

use thiserror::Error;

use crate::program::{AtomTable, Literal, Program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub kind: SyntaxErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("identifier {0:?} starts with an uppercase letter or '_'; variables are not supported")]
    Variable(String),
    #[error("numeric token {0:?} is not an atom")]
    Number(String),
    #[error("`not` is a keyword and cannot name an atom")]
    ReservedWord,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("rule has no head")]
    EmptyHead,
    #[error("rule has `:-` but an empty body; write a fact as `a.`")]
    EmptyBody,
    #[error("missing final '.'")]
    MissingPeriod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    If,
    Comma,
    Period,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::If => "':-'".into(),
            Tok::Comma => "','".into(),
            Tok::Period => "'.'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let err = |kind| SyntaxError { line: l, column: col, kind };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            ',' => {
                bump!();
                out.push(Spanned { tok: Tok::Comma, line: l, column: col });
            }
            '.' => {
                bump!();
                out.push(Spanned { tok: Tok::Period, line: l, column: col });
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push(Spanned { tok: Tok::If, line: l, column: col });
                } else {
                    return Err(err(SyntaxErrorKind::UnexpectedChar(':')));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let first = word.chars().next().unwrap();
                if first.is_ascii_digit() {
                    return Err(err(SyntaxErrorKind::Number(word)));
                }
                if !first.is_ascii_lowercase() {
                    return Err(err(SyntaxErrorKind::Variable(word)));
                }
                out.push(Spanned { tok: Tok::Ident(word), line: l, column: col });
            }
            other => return Err(err(SyntaxErrorKind::UnexpectedChar(other))),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned, kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError { line: t.line, column: t.column, kind }
    }

    fn atom_name(&mut self, expected: &'static str) -> Result<String, SyntaxError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(ref s) if s == "not" => Err(Self::error_at(&t, SyntaxErrorKind::ReservedWord)),
            Tok::Ident(s) => Ok(s),
            Tok::Eof => Err(Self::error_at(&t, SyntaxErrorKind::MissingPeriod)),
            ref other => Err(Self::error_at(
                &t,
                SyntaxErrorKind::Unexpected { expected, found: other.describe() },
            )),
        }
    }

    fn literal(&mut self, atoms: &mut AtomTable) -> Result<Literal, SyntaxError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == "not" => {
                self.next();
                // `not` directly followed by a separator is the keyword used as an atom.
                match &self.peek().tok {
                    Tok::Ident(_) => {
                        let name = self.atom_name("an atom after `not`")?;
                        Ok(Literal::Neg(atoms.intern(&name)))
                    }
                    _ => Err(Self::error_at(&t, SyntaxErrorKind::ReservedWord)),
                }
            }
            Tok::Period => Err(Self::error_at(&t, SyntaxErrorKind::EmptyBody)),
            _ => {
                let name = self.atom_name("a body literal")?;
                Ok(Literal::Pos(atoms.intern(&name)))
            }
        }
    }

    fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut atoms = AtomTable::new();
        let mut rules = Vec::new();
        loop {
            let t = self.peek().clone();
            let head = match t.tok {
                Tok::Eof => break,
                Tok::If | Tok::Period | Tok::Comma => {
                    return Err(Self::error_at(&t, SyntaxErrorKind::EmptyHead))
                }
                Tok::Ident(_) => atoms.intern(&self.atom_name("a rule head")?),
            };
            let mut body = Vec::new();
            let t = self.next();
            match &t.tok {
                Tok::Period => {}
                Tok::If => loop {
                    body.push(self.literal(&mut atoms)?);
                    let sep = self.next();
                    match &sep.tok {
                        Tok::Comma => continue,
                        Tok::Period => break,
                        Tok::Eof => return Err(Self::error_at(&sep, SyntaxErrorKind::MissingPeriod)),
                        other => {
                            return Err(Self::error_at(
                                &sep,
                                SyntaxErrorKind::Unexpected {
                                    expected: "',' or '.'",
                                    found: other.describe(),
                                },
                            ))
                        }
                    }
                },
                Tok::Eof => return Err(Self::error_at(&t, SyntaxErrorKind::MissingPeriod)),
                other => {
                    return Err(Self::error_at(
                        &t,
                        SyntaxErrorKind::Unexpected { expected: "':-' or '.'", found: other.describe() },
                    ))
                }
            }
            rules.push((head, body));
        }
        Ok(Program::from_rules(atoms, rules))
    }
}

/// Parses program text. Rules keep their source order.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI1: &str = "p :- not p, not e.\na :- not b.\nb :- not a.\ne :- not f.\nf :- not h.\nh :- not e.\nh :- not a.\n";

    fn kind(text: &str) -> SyntaxErrorKind {
        parse_program(text).unwrap_err().kind
    }

    #[test]
    fn two_cycle() {
        let p = parse_program("a :- not b.\nb :- not a.").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.atoms().len(), 2);
    }

    #[test]
    fn pi1_heads_and_indices() {
        let p = parse_program(PI1).unwrap();
        let heads: Vec<&str> = p.rules().iter().map(|r| p.name(r.head)).collect();
        assert_eq!(heads, ["p", "a", "b", "e", "f", "h", "h"]);
        assert_eq!(p.rules()[5].index, 0);
        assert_eq!(p.rules()[6].index, 1);
    }

    #[test]
    fn comments_and_whitespace() {
        let p = parse_program("% header\n  a :-\n\tnot b , c . % trailing\nc.").unwrap();
        assert_eq!(p.to_string(), "a :- not b, c.\nc.\n");
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("% only a comment").unwrap().is_empty());
    }

    #[test]
    fn empty_body_is_rejected() {
        assert_eq!(kind("a :- ."), SyntaxErrorKind::EmptyBody);
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(kind("a :- not b"), SyntaxErrorKind::MissingPeriod);
        assert_eq!(kind("a"), SyntaxErrorKind::MissingPeriod);
        assert_eq!(kind(":- a."), SyntaxErrorKind::EmptyHead);
        assert_eq!(kind("a :- X."), SyntaxErrorKind::Variable("X".into()));
        assert_eq!(kind("Foo."), SyntaxErrorKind::Variable("Foo".into()));
        assert_eq!(kind("a :- 3."), SyntaxErrorKind::Number("3".into()));
        assert_eq!(kind("not."), SyntaxErrorKind::ReservedWord);
        assert_eq!(kind("a :- not."), SyntaxErrorKind::ReservedWord);
        assert_eq!(kind("a :- b ; c."), SyntaxErrorKind::UnexpectedChar(';'));
        assert_eq!(kind("a : b."), SyntaxErrorKind::UnexpectedChar(':'));
    }

    #[test]
    fn error_position() {
        let e = parse_program("a.\nb :- not c,\n  Q.").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        assert_eq!(e.to_string(), "3:3: identifier \"Q\" starts with an uppercase letter or '_'; variables are not supported");
    }

    #[test]
    fn duplicate_rules_are_kept() {
        let p = parse_program("a :- not b. a :- not b. b :- not a.").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.rules()[1].index, 1);
    }

    #[test]
    fn fact_prints_plainly() {
        assert_eq!(parse_program("c.").unwrap().to_string(), "c.\n");
    }

    #[test]
    fn pi1_round_trip() {
        let p = parse_program(PI1).unwrap();
        let text = p.to_string();
        assert_eq!(text.lines().count(), 7);
        assert_eq!(parse_program(&text).unwrap(), p);
    }
}
