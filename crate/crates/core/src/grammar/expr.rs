//! Surface syntax for pregroup terms.
//!
//! ```text
//! expr    := factor*            (whitespace separated; empty is an error, `1` is the unit)
//! factor  := atom suffix?
//! atom    := name | "1" | "(" expr ")"
//! suffix  := "^" [lr]+
//! ```
//!
//! Suffix letters apply left to right, so `p^lr = (p^l)^r = p`. A suffix on
//! a group expands the compound adjoint, e.g. `(pi3^r s2)^l = s2^l pi3`.

use thiserror::Error;

use crate::pregroup::{is_valid_name, BasicType, Direction, SimpleType, Term, TypePoset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeExprError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("undeclared basic type `{0}`")]
    Undeclared(String),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, TypeExprError> {
        Err(TypeExprError::Syntax {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn sequence(&mut self, nested: bool) -> Result<Term, TypeExprError> {
        let mut factors = Vec::new();
        let mut saw_any = false;
        loop {
            self.skip_ws();
            match self.peek() {
                None if nested => return self.error("unclosed `(`"),
                None => break,
                Some(b')') if nested => break,
                Some(b')') => return self.error("unmatched `)`"),
                Some(_) => {
                    let term = self.factor()?;
                    factors.extend_from_slice(term.factors());
                    saw_any = true;
                }
            }
        }
        if !saw_any {
            return self.error("expected a type");
        }
        Ok(Term::new(factors))
    }

    fn factor(&mut self) -> Result<Term, TypeExprError> {
        let atom = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sequence(true)?;
                self.pos += 1; // the `)` found by `sequence`
                inner
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if word == "1" {
                    Term::unit()
                } else if is_valid_name(word) {
                    Term::from(SimpleType::new(BasicType::new(word).expect("validated"), 0))
                } else {
                    self.pos = start;
                    return self.error(format!("invalid basic type name `{word}`"));
                }
            }
            Some(c) => return self.error(format!("unexpected character `{}`", c as char)),
            None => return self.error("expected a type"),
        };
        self.suffix(atom)
    }

    fn suffix(&mut self, mut term: Term) -> Result<Term, TypeExprError> {
        if self.peek() != Some(b'^') {
            return Ok(term);
        }
        self.pos += 1;
        let start = self.pos;
        while let Some(c @ (b'l' | b'r')) = self.peek() {
            let d = if c == b'l' {
                Direction::Left
            } else {
                Direction::Right
            };
            term = term.adjoint(d);
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected `l` or `r` after `^`");
        }
        Ok(term)
    }
}

/// Parses a type expression into a flat term without checking names
/// against any alphabet.
pub fn parse_term(text: &str) -> Result<Term, TypeExprError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
    }
    .sequence(false)
}

/// Parses a type expression and checks every basic type against `poset`.
pub fn parse_type_expr(text: &str, poset: &TypePoset) -> Result<Term, TypeExprError> {
    let term = parse_term(text)?;
    for t in term.factors() {
        if !poset.contains(&t.base) {
            return Err(TypeExprError::Undeclared(t.base.to_string()));
        }
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(name: &str, z: i32) -> SimpleType {
        SimpleType::of(name, z)
    }

    #[test]
    fn compound_left_adjoint_expands() {
        let t = parse_term("(pi3^r s2)^l").unwrap();
        assert_eq!(t, Term::new(vec![st("s2", -1), st("pi3", 0)]));
    }

    #[test]
    fn flat_sequence() {
        let t = parse_term("pi3^r s1 j^l").unwrap();
        assert_eq!(t, Term::new(vec![st("pi3", 1), st("s1", 0), st("j", -1)]));
        assert_eq!(parse_term("qbar o^ll q^l").unwrap().factors()[1], st("o", -2));
    }

    #[test]
    fn unit_and_mixed_suffixes() {
        assert_eq!(parse_term("1").unwrap(), Term::unit());
        assert_eq!(parse_term("p 1 q").unwrap().len(), 2);
        assert_eq!(parse_term("p^lr").unwrap(), Term::from(st("p", 0)));
        assert_eq!(parse_term("p^rrr").unwrap(), Term::from(st("p", 3)));
    }

    #[test]
    fn coordination_entry() {
        let t = parse_term("(pi3^r s2)^r (pi3^r s2) (pi3^r s2)^l").unwrap();
        assert_eq!(t.to_string(), "s2^r pi3^rr pi3^r s2 s2^l pi3");
    }

    #[test]
    fn nested_groups() {
        let t = parse_term("((a b^l)^r c)^l").unwrap();
        // ((a b^l)^r c)^l = c^l · (a b^l)^{rl} = c^l a b^l
        assert_eq!(t.to_string(), "c^l a b^l");
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = |s| match parse_term(s) {
            Err(TypeExprError::Syntax { column, .. }) => column,
            other => panic!("expected syntax error for {s:?}, got {other:?}"),
        };
        assert_eq!(err("pi3^x"), 5);
        assert_eq!(err("(pi3 s1"), 8);
        assert_eq!(err("pi3)"), 4);
        assert_eq!(err("Pi3"), 1);
        assert_eq!(err(""), 1);
        assert_eq!(err("a ^l"), 3);
        assert_eq!(err("()"), 2);
    }

    #[test]
    fn undeclared_names_are_reported() {
        let poset = TypePoset::from_names(&["pi3", "s1"], &[]).unwrap();
        assert!(parse_type_expr("pi3^r s1", &poset).is_ok());
        assert_eq!(
            parse_type_expr("pi3^r s1 j^l", &poset),
            Err(TypeExprError::Undeclared("j".into()))
        );
    }
}
