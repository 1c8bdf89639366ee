//! Derivation search for `t1·…·tn ≤ a` with `a` a simple type.
//!
//! Reductions to a simple type need contractions only, so a derivation is a
//! set of non-crossing contraction links covering every position but one
//! survivor, which must be an order-step below the target.
//!
//! [`reduce`] enumerates these by interval decomposition: the leftmost
//! position of a fully reducible interval links to some `k` such that both
//! the span inside the link and the span after it reduce to `1`.
//! [`oracle_reduce`] is an independent breadth-first search over adjacent
//! contraction steps on the shrinking term, used to cross-check [`reduce`].

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::grammar::{GrammarSpec, Mood};
use crate::pregroup::{PregroupError, SimpleType, Term, TypePoset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("search limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("target `{0}` must have adjoint order 0")]
    CompoundTarget(SimpleType),
    #[error("cannot reduce the empty term")]
    EmptyTerm,
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("unknown target group `{0}`")]
    UnknownTargetGroup(String),
    #[error(transparent)]
    Pregroup(#[from] PregroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of lexical-choice combinations per sentence.
    pub max_choices: usize,
    /// Maximum number of derivations per reduction (and parses per sentence).
    pub max_derivations: usize,
    /// Maximum number of distinct states per BFS level of the oracle.
    pub max_oracle_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_choices: 64,
            max_derivations: 1_000,
            max_oracle_states: 200_000,
        }
    }
}

/// A proof of `term ≤ target`. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub term: Term,
    /// Sorted pairs `(i, j)` with `i < j`.
    pub links: Vec<(usize, usize)>,
    pub survivor: usize,
    pub target: SimpleType,
}

impl Derivation {
    fn sort_key(&self) -> (&[(usize, usize)], usize, &SimpleType) {
        (&self.links, self.survivor, &self.target)
    }

    /// Checks every structural invariant; returns a description of the
    /// first violation.
    pub fn check(&self, poset: &TypePoset) -> Result<(), String> {
        let n = self.term.len();
        let f = self.term.factors();
        if self.survivor == 0 || self.survivor > n {
            return Err(format!("survivor {} out of range", self.survivor));
        }
        let mut owner = vec![None; n + 1];
        for (k, &(i, j)) in self.links.iter().enumerate() {
            if !(1 <= i && i < j && j <= n) {
                return Err(format!("link {i}-{j} out of range"));
            }
            for p in [i, j] {
                if owner[p].is_some() || p == self.survivor {
                    return Err(format!("position {p} used twice"));
                }
                owner[p] = Some(k);
            }
            if !poset.contractible(&f[i - 1], &f[j - 1]).map_err(|e| e.to_string())? {
                return Err(format!("link {i}-{j}: {} {} does not contract", f[i - 1], f[j - 1]));
            }
        }
        for p in 1..=n {
            if p != self.survivor && owner[p].is_none() {
                return Err(format!("position {p} is neither linked nor the survivor"));
            }
        }
        for &(i, j) in &self.links {
            for &(k, l) in &self.links {
                if i < k && k < j && j < l {
                    return Err(format!("links {i}-{j} and {k}-{l} cross"));
                }
            }
            if i < self.survivor && self.survivor < j {
                return Err(format!("survivor {} lies under link {i}-{j}", self.survivor));
            }
        }
        let s = &f[self.survivor - 1];
        if s.z != 0 || !poset.leq_simple(s, &self.target).map_err(|e| e.to_string())? {
            return Err(format!("survivor {s} is not below {}", self.target));
        }
        Ok(())
    }

    /// Replays the links innermost-first as adjacent contractions and
    /// returns the single remaining factor.
    pub fn replay(&self, poset: &TypePoset) -> Result<SimpleType, String> {
        let mut alive: Vec<usize> = (1..=self.term.len()).collect();
        let mut pending: Vec<(usize, usize)> = self.links.clone();
        pending.sort_by_key(|&(i, j)| j - i);
        for (i, j) in pending {
            let a = alive.iter().position(|&p| p == i).ok_or("left end already removed")?;
            if alive.get(a + 1) != Some(&j) {
                return Err(format!("link {i}-{j} is not adjacent when replayed"));
            }
            let (u, v) = (&self.term.factors()[i - 1], &self.term.factors()[j - 1]);
            if !poset.contractible(u, v).map_err(|e| e.to_string())? {
                return Err(format!("{u} {v} does not contract"));
            }
            alive.drain(a..=a + 1);
        }
        match alive.as_slice() {
            [p] => Ok(self.term.factors()[p - 1].clone()),
            _ => Err(format!("{} factors remain", alive.len())),
        }
    }

    /// `i-j : <type_i> <type_j>` per link, then `* k : <type_k> <= <target>`.
    pub fn render(&self) -> String {
        let f = self.term.factors();
        let mut out = String::new();
        for &(i, j) in &self.links {
            writeln!(out, "{i}-{j} : {} {}", f[i - 1], f[j - 1]).unwrap();
        }
        writeln!(out, "* {} : {} <= {}", self.survivor, f[self.survivor - 1], self.target).unwrap();
        out
    }
}

fn check_inputs(term: &Term, target: &SimpleType, poset: &TypePoset) -> Result<(), ReduceError> {
    if target.z != 0 {
        return Err(ReduceError::CompoundTarget(target.clone()));
    }
    if term.is_empty() {
        return Err(ReduceError::EmptyTerm);
    }
    poset.check_declared(term)?;
    poset.check_declared(&Term::from(target.clone()))?;
    Ok(())
}

/// Interval search state for one term. Intervals are half-open, 0-based.
struct IntervalSearch<'a> {
    can: Vec<Vec<bool>>,
    counts: HashMap<(usize, usize), u128>,
    sets: HashMap<(usize, usize), Vec<Vec<(usize, usize)>>>,
    _term: &'a Term,
}

impl<'a> IntervalSearch<'a> {
    fn new(term: &'a Term, poset: &TypePoset) -> Result<Self, PregroupError> {
        let f = term.factors();
        let n = f.len();
        let mut can = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                can[i][j] = poset.contractible(&f[i], &f[j])?;
            }
        }
        Ok(IntervalSearch {
            can,
            counts: HashMap::new(),
            sets: HashMap::new(),
            _term: term,
        })
    }

    /// Number of ways `[i, j)` contracts to 1 (saturating).
    fn count(&mut self, i: usize, j: usize) -> u128 {
        if i == j {
            return 1;
        }
        if (j - i) % 2 == 1 {
            return 0;
        }
        if let Some(&c) = self.counts.get(&(i, j)) {
            return c;
        }
        let mut total: u128 = 0;
        for k in ((i + 1)..j).step_by(2) {
            if self.can[i][k] {
                let inner = self.count(i + 1, k);
                if inner == 0 {
                    continue;
                }
                let rest = self.count(k + 1, j);
                total = total.saturating_add(inner.saturating_mul(rest));
            }
        }
        self.counts.insert((i, j), total);
        total
    }

    /// All link sets (1-based) reducing `[i, j)` to 1.
    fn enumerate(&mut self, i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        if i == j {
            return vec![Vec::new()];
        }
        if self.count(i, j) == 0 {
            return Vec::new();
        }
        if let Some(s) = self.sets.get(&(i, j)) {
            return s.clone();
        }
        let mut out = Vec::new();
        for k in ((i + 1)..j).step_by(2) {
            if !self.can[i][k] || self.count(i + 1, k) == 0 || self.count(k + 1, j) == 0 {
                continue;
            }
            let inner = self.enumerate(i + 1, k);
            let rest = self.enumerate(k + 1, j);
            for a in &inner {
                for b in &rest {
                    let mut links = Vec::with_capacity(a.len() + b.len() + 1);
                    links.push((i + 1, k + 1));
                    links.extend_from_slice(a);
                    links.extend_from_slice(b);
                    out.push(links);
                }
            }
        }
        self.sets.insert((i, j), out.clone());
        out
    }
}

/// Every derivation of `term ≤ target`, ordered by sorted link list.
pub fn reduce(
    term: &Term,
    target: &SimpleType,
    poset: &TypePoset,
    limits: &Limits,
) -> Result<Vec<Derivation>, ReduceError> {
    check_inputs(term, target, poset)?;
    let f = term.factors();
    let n = f.len();
    let mut search = IntervalSearch::new(term, poset)?;

    let mut survivors = Vec::new();
    let mut total: u128 = 0;
    for s in 0..n {
        if f[s].z != 0 || !poset.leq_simple(&f[s], target)? {
            continue;
        }
        let ways = search.count(0, s).saturating_mul(search.count(s + 1, n));
        if ways > 0 {
            survivors.push(s);
            total = total.saturating_add(ways);
        }
    }
    if total > limits.max_derivations as u128 {
        return Err(ReduceError::LimitExceeded(format!(
            "{total} derivations exceed the limit of {}",
            limits.max_derivations
        )));
    }

    let mut out = Vec::new();
    for s in survivors {
        let left = search.enumerate(0, s);
        let right = search.enumerate(s + 1, n);
        for a in &left {
            for b in &right {
                let mut links: Vec<(usize, usize)> = a.iter().chain(b.iter()).copied().collect();
                links.sort_unstable();
                out.push(Derivation {
                    term: term.clone(),
                    links,
                    survivor: s + 1,
                    target: target.clone(),
                });
            }
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

/// Reference enumeration by repeated adjacent contraction.
///
/// Each BFS level removes one adjacent contractible pair from every state;
/// a state is the set of links made so far (which determines the remaining
/// positions).
pub fn oracle_reduce(
    term: &Term,
    target: &SimpleType,
    poset: &TypePoset,
    limits: &Limits,
) -> Result<Vec<Derivation>, ReduceError> {
    check_inputs(term, target, poset)?;
    let f = term.factors();
    let n = f.len();
    if n % 2 == 0 {
        return Ok(Vec::new());
    }

    let mut level: BTreeSet<BTreeSet<(usize, usize)>> = BTreeSet::new();
    level.insert(BTreeSet::new());
    for _ in 0..(n - 1) / 2 {
        let mut next = BTreeSet::new();
        for links in &level {
            let used: BTreeSet<usize> = links.iter().flat_map(|&(i, j)| [i, j]).collect();
            let alive: Vec<usize> = (1..=n).filter(|p| !used.contains(p)).collect();
            for w in alive.windows(2) {
                let (i, j) = (w[0], w[1]);
                if poset.contractible(&f[i - 1], &f[j - 1])? {
                    let mut grown = links.clone();
                    grown.insert((i, j));
                    next.insert(grown);
                }
            }
        }
        if next.len() > limits.max_oracle_states {
            return Err(ReduceError::LimitExceeded(format!(
                "{} oracle states exceed the limit of {}",
                next.len(),
                limits.max_oracle_states
            )));
        }
        level = next;
    }

    let mut out = Vec::new();
    for links in level {
        let used: BTreeSet<usize> = links.iter().flat_map(|&(i, j)| [i, j]).collect();
        let survivor = (1..=n).find(|p| !used.contains(p)).expect("one position remains");
        let s = &f[survivor - 1];
        if s.z == 0 && poset.leq_simple(s, target)? {
            out.push(Derivation {
                term: term.clone(),
                links: links.into_iter().collect(),
                survivor,
                target: target.clone(),
            });
        }
    }
    if out.len() > limits.max_derivations {
        return Err(ReduceError::LimitExceeded(format!(
            "{} derivations exceed the limit of {}",
            out.len(),
            limits.max_derivations
        )));
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

/// A grammatical reading of a token sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    /// Tokens as written.
    pub tokens: Vec<String>,
    /// Lexicon keys the tokens resolved to.
    pub words: Vec<String>,
    /// Term chosen for each token.
    pub choice: Vec<Term>,
    pub derivation: Derivation,
}

impl Parse {
    /// Term of each token position, 1-based factor ranges.
    pub fn spans(&self) -> Vec<(usize, usize)> {
        let mut start = 1;
        self.choice
            .iter()
            .map(|t| {
                let span = (start, start + t.len() - 1);
                start += t.len();
                span
            })
            .collect()
    }
}

/// All parses of `tokens` to any target of `target_group`, ordered by
/// lexical choice, then derivation.
pub fn parse(
    tokens: &[String],
    grammar: &GrammarSpec,
    target_group: &str,
    limits: &Limits,
) -> Result<Vec<Parse>, ReduceError> {
    let targets = grammar
        .target_group(target_group)
        .ok_or_else(|| ReduceError::UnknownTargetGroup(target_group.to_string()))?;
    if tokens.is_empty() {
        return Err(ReduceError::EmptyTerm);
    }
    let mut words = Vec::with_capacity(tokens.len());
    let mut options: Vec<&[Term]> = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let (key, terms) = grammar
            .lexicon
            .resolve(tok)
            .ok_or_else(|| ReduceError::UnknownWord(tok.clone()))?;
        words.push(key.to_string());
        options.push(terms);
    }
    let combos = options
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()))
        .unwrap_or(usize::MAX);
    if combos > limits.max_choices {
        return Err(ReduceError::LimitExceeded(format!(
            "{combos} lexical combinations exceed the limit of {}",
            limits.max_choices
        )));
    }

    let mut out = Vec::new();
    let mut index = vec![0usize; tokens.len()];
    for _ in 0..combos {
        let choice: Vec<Term> = index.iter().zip(&options).map(|(&k, o)| o[k].clone()).collect();
        let term = choice.iter().fold(Term::unit(), |acc, t| acc.concat(t));
        // a derivation reaching several targets is reported once, against
        // the most specific of them
        let mut found: Vec<Derivation> = Vec::new();
        for target in targets {
            for d in reduce(&term, target, &grammar.poset, limits)? {
                match found.iter_mut().find(|e| e.links == d.links && e.survivor == d.survivor) {
                    Some(e) => {
                        if grammar.poset.leq_simple(&d.target, &e.target)? {
                            e.target = d.target;
                        }
                    }
                    None => found.push(d),
                }
            }
        }
        found.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        for derivation in found {
            out.push(Parse {
                tokens: tokens.to_vec(),
                words: words.clone(),
                choice: choice.clone(),
                derivation,
            });
            if out.len() > limits.max_derivations {
                return Err(ReduceError::LimitExceeded(format!(
                    "more than {} parses",
                    limits.max_derivations
                )));
            }
        }
        // odometer over choices, last token fastest
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < options[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
    Ok(out)
}

/// Tokenizes a sentence and parses it against the group chosen by its final
/// punctuation, unless `group` overrides it.
pub fn parse_sentence(
    sentence: &str,
    grammar: &GrammarSpec,
    group: Option<&str>,
    limits: &Limits,
) -> Result<Vec<Parse>, ReduceError> {
    let (tokens, mood): (Vec<String>, Mood) = crate::grammar::tokenize(sentence);
    parse(&tokens, grammar, group.unwrap_or(mood.default_group()), limits)
}

/// Arc diagram of a parse: words on a baseline, links as arcs below it.
pub fn render_svg(p: &Parse) -> String {
    const STEP: f64 = 56.0;
    const BASE: f64 = 40.0;
    let f = p.derivation.term.factors();
    let x = |pos: usize| 20.0 + STEP * (pos as f64 - 0.5);
    let width = 40.0 + STEP * f.len() as f64;
    let depth = p
        .derivation
        .links
        .iter()
        .map(|&(i, j)| (j - i) as f64)
        .fold(1.0, f64::max);
    let height = BASE + 30.0 + 18.0 * depth;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="12">"#
    )
    .unwrap();
    for ((a, b), word) in p.spans().into_iter().zip(&p.tokens) {
        let mid = (x(a) + x(b)) / 2.0;
        writeln!(out, r#"  <text x="{mid}" y="14" text-anchor="middle">{}</text>"#, xml_escape(word)).unwrap();
    }
    for (k, t) in f.iter().enumerate() {
        let weight = if k + 1 == p.derivation.survivor { " font-weight=\"bold\"" } else { "" };
        writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle"{weight}>{}</text>"#,
            x(k + 1),
            BASE - 8.0,
            xml_escape(&t.to_string())
        )
        .unwrap();
    }
    for &(i, j) in &p.derivation.links {
        let (x1, x2) = (x(i), x(j));
        let dip = BASE + 18.0 * (j - i) as f64;
        writeln!(
            out,
            r#"  <path d="M {x1} {BASE} C {x1} {dip}, {x2} {dip}, {x2} {BASE}" fill="none" stroke="black"/>"#
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
