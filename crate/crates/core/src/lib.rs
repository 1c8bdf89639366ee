//! Pregroup grammars: reduction search over a free pregroup and
//! evaluation of derivations as tensor contractions.

pub mod demo;
pub mod distributional;
pub mod grammar;
pub mod pregroup;
pub mod reducer;
pub mod semantics;
