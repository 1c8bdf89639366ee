//! The free pregroup over a finite partially ordered set of basic types.
//!
//! A simple type is a basic type decorated with an integer adjoint order
//! `z`: `z = -1` is the left adjoint `p^l`, `z = 1` the right adjoint `p^r`,
//! `z = -2` is `p^ll` and so on. Mixed adjoints cancel (`p^lr = p`), so the
//! whole tower of iterated adjoints collapses into this one integer.
//!
//! A [`Term`] is an element of the free monoid over simple types (the empty
//! term is the unit `1`). Compound adjoints reverse the factor order:
//! `(p·q)^l = q^l·p^l`.
//!
//! | symbol       | ASCII name |
//! |--------------|------------|
//! | π, π_3       | `pi`, `pi3` |
//! | n̄, n̄_1      | `nbar`, `nbar1` |
//! | ā            | `abar` |
//! | q̄            | `qbar` |

mod intmap;

pub use intmap::{integer_map_adjoint, IntMapError, IntegerMapRep};

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PregroupError {
    #[error("invalid basic type name {0:?} (expected non-empty [a-z0-9_]+)")]
    InvalidName(String),
    #[error("undeclared basic type `{0}`")]
    Undeclared(String),
    #[error("basic type `{0}` declared twice")]
    DuplicateBasic(String),
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
}

/// Direction of an adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    fn step(self) -> i32 {
        match self {
            Direction::Left => -1,
            Direction::Right => 1,
        }
    }
}

/// Name of a basic type, e.g. `pi3`, `nbar1`, `qbar`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicType(String);

impl BasicType {
    pub fn new(name: impl Into<String>) -> Result<Self, PregroupError> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(BasicType(name))
        } else {
            Err(PregroupError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl std::borrow::Borrow<str> for BasicType {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A basic type with an iterated adjoint order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    pub base: BasicType,
    pub z: i32,
}

impl SimpleType {
    pub fn new(base: BasicType, z: i32) -> Self {
        SimpleType { base, z }
    }

    /// Shorthand for tests and fixtures; panics on an invalid name.
    pub fn of(name: &str, z: i32) -> Self {
        SimpleType::new(BasicType::new(name).expect("valid basic type name"), z)
    }

    pub fn adjoint(&self, direction: Direction) -> Self {
        SimpleType::new(self.base.clone(), self.z + direction.step())
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.as_str())?;
        if self.z != 0 {
            let letter = if self.z < 0 { "l" } else { "r" };
            write!(f, "^{}", letter.repeat(self.z.unsigned_abs() as usize))?;
        }
        Ok(())
    }
}

/// An element of the free pregroup: an ordered product of simple types.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Vec<SimpleType>);

impl Term {
    pub fn unit() -> Self {
        Term(Vec::new())
    }

    pub fn new(factors: Vec<SimpleType>) -> Self {
        Term(factors)
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Term) -> Term {
        let mut factors = self.0.clone();
        factors.extend_from_slice(&other.0);
        Term(factors)
    }

    /// `(p·q)^l = q^l·p^l` and `(p·q)^r = q^r·p^r`.
    pub fn adjoint(&self, direction: Direction) -> Term {
        Term(self.0.iter().rev().map(|t| t.adjoint(direction)).collect())
    }
}

impl From<SimpleType> for Term {
    fn from(t: SimpleType) -> Self {
        Term(vec![t])
    }
}

impl FromIterator<SimpleType> for Term {
    fn from_iter<I: IntoIterator<Item = SimpleType>>(iter: I) -> Self {
        Term(iter.into_iter().collect())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Adjoint of a term; free-function form of [`Term::adjoint`].
pub fn adjoint(t: &Term, direction: Direction) -> Term {
    t.adjoint(direction)
}

/// A finite partial order on basic types.
///
/// The declared relation is kept verbatim (it is what gets serialized);
/// its reflexive-transitive closure is computed once at construction.
#[derive(Debug, Clone)]
pub struct TypePoset {
    index: IndexMap<BasicType, usize>,
    declared: Vec<(BasicType, BasicType)>,
    closure: Vec<Vec<bool>>,
}

impl PartialEq for TypePoset {
    fn eq(&self, other: &Self) -> bool {
        self.index.keys().eq(other.index.keys()) && self.declared == other.declared
    }
}

impl Eq for TypePoset {}

impl TypePoset {
    pub fn new(
        alphabet: impl IntoIterator<Item = BasicType>,
        relation: impl IntoIterator<Item = (BasicType, BasicType)>,
    ) -> Result<Self, PregroupError> {
        let mut index = IndexMap::new();
        for name in alphabet {
            let next = index.len();
            if index.insert(name.clone(), next).is_some() {
                return Err(PregroupError::DuplicateBasic(name.0));
            }
        }
        let n = index.len();
        let mut closure = vec![vec![false; n]; n];
        for (i, row) in closure.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut declared = Vec::new();
        for (a, b) in relation {
            let ia = *index
                .get(&a)
                .ok_or_else(|| PregroupError::Undeclared(a.0.clone()))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| PregroupError::Undeclared(b.0.clone()))?;
            closure[ia][ib] = true;
            declared.push((a, b));
        }
        for k in 0..n {
            for i in 0..n {
                if closure[i][k] {
                    for j in 0..n {
                        if closure[k][j] {
                            closure[i][j] = true;
                        }
                    }
                }
            }
        }
        let names: Vec<&BasicType> = index.keys().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if closure[i][j] && closure[j][i] {
                    return Err(PregroupError::Cycle(names[i].0.clone(), names[j].0.clone()));
                }
            }
        }
        Ok(TypePoset {
            index,
            declared,
            closure,
        })
    }

    /// Builds a poset from plain strings; convenient for fixtures.
    pub fn from_names(alphabet: &[&str], relation: &[(&str, &str)]) -> Result<Self, PregroupError> {
        let alphabet = alphabet
            .iter()
            .map(|s| BasicType::new(*s))
            .collect::<Result<Vec<_>, _>>()?;
        let relation = relation
            .iter()
            .map(|(a, b)| Ok((BasicType::new(*a)?, BasicType::new(*b)?)))
            .collect::<Result<Vec<_>, PregroupError>>()?;
        TypePoset::new(alphabet, relation)
    }

    pub fn alphabet(&self) -> impl Iterator<Item = &BasicType> {
        self.index.keys()
    }

    pub fn declared_relation(&self) -> &[(BasicType, BasicType)] {
        &self.declared
    }

    pub fn contains(&self, name: &BasicType) -> bool {
        self.index.contains_key(name)
    }

    pub fn lookup(&self, name: &str) -> Option<&BasicType> {
        self.index.get_key_value(name).map(|(k, _)| k)
    }

    fn idx(&self, name: &BasicType) -> Result<usize, PregroupError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PregroupError::Undeclared(name.0.clone()))
    }

    pub fn check_declared(&self, term: &Term) -> Result<(), PregroupError> {
        term.factors().iter().try_for_each(|t| self.idx(&t.base).map(|_| ()))
    }

    pub fn leq_basic(&self, a: &BasicType, b: &BasicType) -> Result<bool, PregroupError> {
        Ok(self.closure[self.idx(a)?][self.idx(b)?])
    }

    /// Order on simple types: same adjoint order, and the basic order is
    /// reversed once per adjoint step.
    pub fn leq_simple(&self, u: &SimpleType, v: &SimpleType) -> Result<bool, PregroupError> {
        let related = if u.z.rem_euclid(2) == 0 {
            self.leq_basic(&u.base, &v.base)?
        } else {
            self.leq_basic(&v.base, &u.base)?
        };
        Ok(u.z == v.z && related)
    }

    /// Generalized contraction `u·v ≤ 1`.
    pub fn contractible(&self, u: &SimpleType, v: &SimpleType) -> Result<bool, PregroupError> {
        let related = if u.z.rem_euclid(2) == 0 {
            self.leq_basic(&u.base, &v.base)?
        } else {
            self.leq_basic(&v.base, &u.base)?
        };
        Ok(v.z == u.z + 1 && related)
    }
}

/// Free-function forms matching the operation names used across the crate.
pub fn leq_basic(a: &BasicType, b: &BasicType, poset: &TypePoset) -> Result<bool, PregroupError> {
    poset.leq_basic(a, b)
}

pub fn leq_simple(u: &SimpleType, v: &SimpleType, poset: &TypePoset) -> Result<bool, PregroupError> {
    poset.leq_simple(u, v)
}

pub fn contractible(u: &SimpleType, v: &SimpleType, poset: &TypePoset) -> Result<bool, PregroupError> {
    poset.contractible(u, v)
}
