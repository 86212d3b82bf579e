//! Regex AST and parser.
//!
//! Grammar:
//! ```text
//! expr   := term ('|' term)*
//! term   := factor+
//! factor := base ('*')?
//! base   := letter | '_' | '~' | '(' expr ')'
//! ```
//! `_` denotes the empty word, `~` the empty language. Whitespace is ignored.

use super::Alphabet;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(char),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Literal(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }
}

impl std::fmt::Display for Regex {
    /// Fully parenthesized form; reparses to an equal AST.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regex::Empty => f.write_str("~"),
            Regex::Epsilon => f.write_str("_"),
            Regex::Literal(c) => write!(f, "{c}"),
            Regex::Union(a, b) => write!(f, "({a}|{b})"),
            Regex::Concat(a, b) => write!(f, "({a}{b})"),
            Regex::Star(a) => write!(f, "({a})*"),
        }
    }
}

/// Parse `text` over `alphabet`. Positions in errors are character offsets
/// into the original text (whitespace included).
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex> {
    let tokens: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.chars().count(),
        alphabet,
    };
    let expr = parser.expr()?;
    match parser.peek() {
        None => Ok(expr),
        Some((at, c)) => Err(syntax(at, format!("unexpected '{c}'"))),
    }
}

fn syntax(position: usize, message: String) -> Error {
    Error::Syntax { position, message }
}

struct Parser<'a> {
    tokens: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.tokens.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Regex> {
        let mut node = self.term()?;
        while let Some((_, '|')) = self.peek() {
            self.bump();
            node = Regex::union(node, self.term()?);
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Regex> {
        let mut node = self.factor()?;
        while let Some((_, c)) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            node = Regex::concat(node, self.factor()?);
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Regex> {
        let base = self.base()?;
        if let Some((_, '*')) = self.peek() {
            self.bump();
            return Ok(Regex::star(base));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Regex> {
        match self.bump() {
            None => Err(syntax(self.end, "unexpected end of input".into())),
            Some((_, '_')) => Ok(Regex::Epsilon),
            Some((_, '~')) => Ok(Regex::Empty),
            Some((at, '(')) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, ')')) => Ok(inner),
                    Some((p, c)) => Err(syntax(p, format!("expected ')', found '{c}'"))),
                    None => Err(syntax(at, "unclosed '('".into())),
                }
            }
            Some((at, c)) if c == ')' || c == '*' || c == '|' => {
                Err(syntax(at, format!("unexpected '{c}'")))
            }
            Some((at, c)) => {
                if self.alphabet.index_of(c).is_some() {
                    Ok(Regex::Literal(c))
                } else {
                    Err(syntax(at, format!("letter '{c}' is not in the alphabet")))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new("ab".chars()).unwrap()
    }

    #[test]
    fn parses_star_of_concat() {
        let r = parse_regex("(ab)*", &ab()).unwrap();
        assert_eq!(
            r,
            Regex::star(Regex::concat(Regex::Literal('a'), Regex::Literal('b')))
        );
    }

    #[test]
    fn parses_epsilon_and_empty() {
        assert_eq!(parse_regex("_", &ab()).unwrap(), Regex::Epsilon);
        assert_eq!(parse_regex("~", &ab()).unwrap(), Regex::Empty);
    }

    #[test]
    fn parses_union() {
        assert_eq!(
            parse_regex("a|b", &ab()).unwrap(),
            Regex::union(Regex::Literal('a'), Regex::Literal('b'))
        );
    }

    #[test]
    fn union_is_left_associative() {
        assert_eq!(
            parse_regex("a|b|a", &ab()).unwrap(),
            Regex::union(
                Regex::union(Regex::Literal('a'), Regex::Literal('b')),
                Regex::Literal('a')
            )
        );
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse_regex(" ( a b ) * ", &ab()).unwrap(),
            parse_regex("(ab)*", &ab()).unwrap()
        );
    }

    #[test]
    fn rejects_foreign_letter_with_position() {
        let err = parse_regex("a|c", &ab()).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                position: 2,
                message: "letter 'c' is not in the alphabet".into()
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for pattern in ["(ab)*", "a|b|_", "~", "(a|b)*a(a|b)*"] {
            let r = parse_regex(pattern, &ab()).unwrap();
            let reparsed = parse_regex(&r.to_string(), &ab()).unwrap();
            assert_eq!(r, reparsed, "pattern {pattern}");
        }
    }

    #[test]
    fn rejects_dangling_operators() {
        assert!(parse_regex("", &ab()).is_err());
        assert!(parse_regex("*", &ab()).is_err());
        assert!(parse_regex("a|", &ab()).is_err());
        assert!(parse_regex("(a", &ab()).is_err());
        assert!(parse_regex("a)", &ab()).is_err());
        assert!(parse_regex("a**", &ab()).is_err());
    }
}
