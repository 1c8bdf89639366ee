//! Grammar files: basic types, their order, target groups and the lexicon.
//!
//! ```text
//! # comment
//! basic <name>
//! order <name> <= <name>
//! target <group> : <name> [<name> ...]
//! word <token> : <type-expr> [| <type-expr> ...]
//! ```
//!
//! A token may appear on several `word` lines; its terms accumulate in file
//! order.

mod expr;

pub use expr::{parse_term, parse_type_expr, TypeExprError};

use std::fmt::Write as _;

use indexmap::IndexMap;
use thiserror::Error;

use crate::pregroup::{BasicType, PregroupError, SimpleType, Term, TypePoset};

/// Source of the bundled English fragment.
pub const ENGLISH_FRAGMENT: &str = include_str!("../../data/english_fragment.grammar");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Type {
        line: usize,
        #[source]
        source: TypeExprError,
    },
    #[error("line {line}: {source}")]
    Poset {
        line: usize,
        #[source]
        source: PregroupError,
    },
}

/// Word to terms. Keys keep the spelling of the grammar file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: IndexMap<String, Vec<Term>>,
}

impl Lexicon {
    pub fn get(&self, word: &str) -> Option<&[Term]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Exact spelling first, then the lowercased token.
    pub fn resolve(&self, token: &str) -> Option<(&str, &[Term])> {
        self.entries
            .get_key_value(token)
            .or_else(|| self.entries.get_key_value(token.to_lowercase().as_str()))
            .map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Term])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSpec {
    pub poset: TypePoset,
    pub lexicon: Lexicon,
    pub targets: IndexMap<String, Vec<SimpleType>>,
}

impl GrammarSpec {
    pub fn target_group(&self, name: &str) -> Option<&[SimpleType]> {
        self.targets.get(name).map(Vec::as_slice)
    }

    /// Serializes to the grammar file format. Comments are not preserved.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in self.poset.alphabet() {
            writeln!(out, "basic {b}").unwrap();
        }
        for (a, b) in self.poset.declared_relation() {
            writeln!(out, "order {a} <= {b}").unwrap();
        }
        for (group, types) in &self.targets {
            let names: Vec<String> = types.iter().map(|t| t.base.to_string()).collect();
            writeln!(out, "target {group} : {}", names.join(" ")).unwrap();
        }
        for (word, terms) in self.lexicon.iter() {
            let exprs: Vec<String> = terms.iter().map(Term::to_string).collect();
            writeln!(out, "word {word} : {}", exprs.join(" | ")).unwrap();
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code).trim()
}

fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && token
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '-')
}

/// Parses a grammar file. All declarations are validated; nothing is
/// silently repaired.
pub fn load_grammar(text: &str) -> Result<GrammarSpec, GrammarError> {
    let line_err = |line: usize, message: String| GrammarError::Line { line, message };

    let mut basics: Vec<(BasicType, usize)> = Vec::new();
    let mut orders: Vec<(String, String, usize)> = Vec::new();
    let mut target_lines: Vec<(String, Vec<String>, usize)> = Vec::new();
    let mut word_lines: Vec<(String, Vec<String>, usize)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let code = strip_comment(raw);
        if code.is_empty() {
            continue;
        }
        let (keyword, rest) = code
            .split_once(char::is_whitespace)
            .map_or((code, ""), |(a, b)| (a, b.trim()));
        match keyword {
            "basic" => {
                let name = BasicType::new(rest).map_err(|e| GrammarError::Poset { line, source: e })?;
                if basics.iter().any(|(b, _)| *b == name) {
                    return Err(GrammarError::Poset {
                        line,
                        source: PregroupError::DuplicateBasic(rest.to_string()),
                    });
                }
                basics.push((name, line));
            }
            "order" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    [a, "<=", b] => orders.push((a.to_string(), b.to_string(), line)),
                    _ => return Err(line_err(line, "expected `order <name> <= <name>`".into())),
                }
            }
            "target" => {
                let (group, names) = rest
                    .split_once(':')
                    .ok_or_else(|| line_err(line, "expected `target <group> : <name>...`".into()))?;
                let group = group.trim();
                let names: Vec<String> = names.split_whitespace().map(str::to_string).collect();
                if group.is_empty() || names.is_empty() {
                    return Err(line_err(line, "target group needs a name and at least one type".into()));
                }
                if target_lines.iter().any(|(g, _, _)| g == group) {
                    return Err(line_err(line, format!("target group `{group}` declared twice")));
                }
                target_lines.push((group.to_string(), names, line));
            }
            "word" => {
                let (token, exprs) = rest
                    .split_once(':')
                    .ok_or_else(|| line_err(line, "expected `word <token> : <type-expr>`".into()))?;
                let token = token.trim();
                if !is_valid_token(token) {
                    return Err(line_err(line, format!("invalid word token `{token}`")));
                }
                let exprs: Vec<String> = exprs.split('|').map(|e| e.trim().to_string()).collect();
                word_lines.push((token.to_string(), exprs, line));
            }
            other => return Err(line_err(line, format!("unknown declaration `{other}`"))),
        }
    }

    // orders are validated one by one so errors carry the offending line
    let alphabet: Vec<BasicType> = basics.iter().map(|(b, _)| b.clone()).collect();
    let mut relation = Vec::new();
    for (a, b, line) in &orders {
        let lookup = |name: &str| {
            alphabet
                .iter()
                .find(|t| t.as_str() == name)
                .cloned()
                .ok_or_else(|| GrammarError::Poset {
                    line: *line,
                    source: PregroupError::Undeclared(name.to_string()),
                })
        };
        relation.push((lookup(a)?, lookup(b)?));
        TypePoset::new(alphabet.clone(), relation.clone())
            .map_err(|e| GrammarError::Poset { line: *line, source: e })?;
    }
    let poset = TypePoset::new(alphabet, relation).map_err(|e| GrammarError::Poset { line: 0, source: e })?;

    let mut targets = IndexMap::new();
    for (group, names, line) in target_lines {
        let types = names
            .iter()
            .map(|n| {
                poset
                    .lookup(n)
                    .map(|b| SimpleType::new(b.clone(), 0))
                    .ok_or_else(|| GrammarError::Poset {
                        line,
                        source: PregroupError::Undeclared(n.clone()),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        targets.insert(group, types);
    }

    let mut entries: IndexMap<String, Vec<Term>> = IndexMap::new();
    for (token, exprs, line) in word_lines {
        let slot = entries.entry(token.clone()).or_default();
        for e in exprs {
            let term = parse_type_expr(&e, &poset).map_err(|source| GrammarError::Type { line, source })?;
            if term.is_empty() {
                return Err(line_err(line, format!("word `{token}` assigned the unit type")));
            }
            if slot.contains(&term) {
                return Err(line_err(line, format!("duplicate type `{term}` for word `{token}`")));
            }
            slot.push(term);
        }
    }

    Ok(GrammarSpec {
        poset,
        lexicon: Lexicon { entries },
        targets,
    })
}

/// The English fragment with the distributional demo vocabulary.
pub fn builtin_english() -> GrammarSpec {
    load_grammar(ENGLISH_FRAGMENT).expect("bundled grammar is valid")
}

/// Sentence-final punctuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mood {
    Declarative,
    Question,
}

impl Mood {
    pub fn default_group(self) -> &'static str {
        match self {
            Mood::Declarative => "declarative",
            Mood::Question => "question",
        }
    }
}

/// Splits on whitespace and strips a terminal `.` or `?`, whether written
/// as its own token or attached to the last word.
pub fn tokenize(sentence: &str) -> (Vec<String>, Mood) {
    let mut tokens: Vec<String> = sentence.split_whitespace().map(str::to_string).collect();
    let mut mood = Mood::Declarative;
    if let Some(last) = tokens.last_mut() {
        if let Some(stripped) = last.strip_suffix(['.', '?']) {
            if last.ends_with('?') {
                mood = Mood::Question;
            }
            *last = stripped.to_string();
            if last.is_empty() {
                tokens.pop();
            }
        }
    }
    (tokens, mood)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(name: &str, z: i32) -> SimpleType {
        SimpleType::of(name, z)
    }

    #[test]
    fn minimal_file() {
        let g = load_grammar("basic pi3\nbasic pi\norder pi3 <= pi\nword she : pi3\n").unwrap();
        assert_eq!(g.lexicon.len(), 1);
        assert_eq!(g.lexicon.get("she").unwrap(), &[Term::from(st("pi3", 0))]);
    }

    #[test]
    fn cycle_is_reported_with_line() {
        let err = load_grammar("basic a\nbasic b\norder a <= b\norder b <= a\n").unwrap_err();
        assert!(matches!(
            err,
            GrammarError::Poset { line: 4, source: PregroupError::Cycle(..) }
        ));
    }

    #[test]
    fn malformed_inputs_are_rejected_with_lines() {
        let cases = [
            ("basic a\nbasic a\n", 2),
            ("basic a\norder a <= b\n", 2),
            ("basic a\norder a < a\n", 2),
            ("basic a\nword x : a b\n", 2),
            ("basic a\nword x : a^q\n", 2),
            ("basic a\n\nword x : a | a\n", 3),
            ("basic a\ntarget t : b\n", 2),
            ("basic a\nfrobnicate\n", 2),
            ("basic A\n", 1),
            ("basic a\nword x : 1\n", 2),
        ];
        for (text, expected) in cases {
            let err = load_grammar(text).unwrap_err();
            let line = match err {
                GrammarError::Line { line, .. }
                | GrammarError::Type { line, .. }
                | GrammarError::Poset { line, .. } => line,
            };
            assert_eq!(line, expected, "{text:?} -> {err}");
        }
    }

    #[test]
    fn builtin_fragment_loads() {
        let g = builtin_english();
        assert!(g.lexicon.len() >= 25);
        assert!(g.target_group("declarative").is_some());
        assert!(g.target_group("question").is_some());
        assert!(g.target_group("noun").is_some());
    }

    #[test]
    fn builtin_may_entries() {
        let g = builtin_english();
        let may = g.lexicon.get("may").unwrap();
        for expected in [
            vec![st("pi3", 1), st("s1", 0), st("j", -1)],
            vec![st("q1", 0), st("i", -1), st("pi", -1)],
            vec![st("q1", 0), st("j", -1), st("pi", -1)],
        ] {
            assert!(may.contains(&Term::new(expected.clone())), "missing {expected:?}");
        }
    }

    #[test]
    fn builtin_wh_entries() {
        let g = builtin_english();
        let who = g.lexicon.get("who").unwrap();
        assert!(who.contains(&Term::new(vec![st("qbar", 0), st("s1", -1), st("pi3", 0)])));
        assert!(who.contains(&Term::new(vec![st("qbar", 0), st("s2", -1), st("pi3", 0)])));
        let whom = g.lexicon.get("whom").unwrap();
        let interrogative = Term::new(vec![st("qbar", 0), st("o", -2), st("q", -1)]);
        assert_eq!(
            whom.iter().filter(|t| t.factors()[0].base.as_str() == "qbar").collect::<Vec<_>>(),
            vec![&interrogative]
        );
    }

    #[test]
    fn builtin_round_trips_through_text() {
        let g = builtin_english();
        let reloaded = load_grammar(&g.to_text()).unwrap();
        assert_eq!(reloaded, g);
    }

    #[test]
    fn lexicon_terms_are_flat_and_declared() {
        let g = builtin_english();
        for (_, terms) in g.lexicon.iter() {
            for t in terms {
                assert!(!t.is_empty());
                g.poset.check_declared(t).unwrap();
            }
        }
    }

    #[test]
    fn resolve_tries_exact_then_lowercase() {
        let g = builtin_english();
        assert_eq!(g.lexicon.resolve("Mary").unwrap().0, "Mary");
        assert_eq!(g.lexicon.resolve("She").unwrap().0, "she");
        assert!(g.lexicon.resolve("mary").is_none());
    }

    #[test]
    fn tokenizer_selects_mood() {
        assert_eq!(tokenize("she sleeps ."), (vec!["she".into(), "sleeps".into()], Mood::Declarative));
        assert_eq!(tokenize("May she sleep?"), (vec!["May".into(), "she".into(), "sleep".into()], Mood::Question));
        assert_eq!(tokenize("she sleeps"), (vec!["she".into(), "sleeps".into()], Mood::Declarative));
        assert_eq!(tokenize("  "), (vec![], Mood::Declarative));
    }
}
