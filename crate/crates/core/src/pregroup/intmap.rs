//! Order-preserving unbounded maps `ℤ → ℤ`, the standard concrete pregroup.
//!
//! Only eventually-translation maps are representable: outside a finite
//! window `[lo, hi]` the map is `n + offset`, with one offset per side.
//! Inside the window, an exception table may override the default value
//! `n + tail_offset_pos`. This keeps adjoint computation finite.
//!
//! Multiplication is composition, `(f·g)(n) = f(g(n))`, and
//!
//! ```text
//! f^l(m) = min { n | m ≤ f(n) }
//! f^r(m) = max { n | f(n) ≤ m }
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use super::Direction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntMapError {
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("exception at {0} lies outside the window")]
    ExceptionOutsideWindow(i64),
    #[error("map is not order preserving: f({n}) = {fn_} > f({next}) = {fnext}")]
    NotMonotone { n: i64, fn_: i64, next: i64, fnext: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMapRep {
    exceptions: BTreeMap<i64, i64>,
    lo: i64,
    hi: i64,
    tail_offset_pos: i64,
    tail_offset_neg: i64,
}

impl IntegerMapRep {
    pub fn new(
        exceptions: BTreeMap<i64, i64>,
        window: (i64, i64),
        tail_offset_pos: i64,
        tail_offset_neg: i64,
    ) -> Result<Self, IntMapError> {
        let (lo, hi) = window;
        if lo > hi {
            return Err(IntMapError::EmptyWindow { lo, hi });
        }
        if let Some((&n, _)) = exceptions.iter().find(|(&n, _)| n < lo || n > hi) {
            return Err(IntMapError::ExceptionOutsideWindow(n));
        }
        let rep = IntegerMapRep {
            exceptions,
            lo,
            hi,
            tail_offset_pos,
            tail_offset_neg,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn identity() -> Self {
        IntegerMapRep::translation(0)
    }

    pub fn translation(k: i64) -> Self {
        IntegerMapRep {
            exceptions: BTreeMap::new(),
            lo: 0,
            hi: 0,
            tail_offset_pos: k,
            tail_offset_neg: k,
        }
    }

    /// Tabulates `f` on `[lo, hi]`, translating by the given offsets outside.
    pub fn from_fn(
        window: (i64, i64),
        f: impl Fn(i64) -> i64,
        tail_offset_pos: i64,
        tail_offset_neg: i64,
    ) -> Result<Self, IntMapError> {
        let table = (window.0..=window.1).map(|n| (n, f(n))).collect();
        IntegerMapRep::new(table, window, tail_offset_pos, tail_offset_neg)
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn tail_offsets(&self) -> (i64, i64) {
        (self.tail_offset_neg, self.tail_offset_pos)
    }

    pub fn eval(&self, n: i64) -> i64 {
        if n < self.lo {
            n + self.tail_offset_neg
        } else if let Some(&v) = self.exceptions.get(&n) {
            v
        } else {
            n + self.tail_offset_pos
        }
    }

    /// Both tails are translations, so monotonicity on `[lo-1, hi+1]`
    /// implies it on all of ℤ.
    fn validate(&self) -> Result<(), IntMapError> {
        for n in (self.lo - 1)..=self.hi {
            let (a, b) = (self.eval(n), self.eval(n + 1));
            if a > b {
                return Err(IntMapError::NotMonotone {
                    n,
                    fn_: a,
                    next: n + 1,
                    fnext: b,
                });
            }
        }
        Ok(())
    }

    /// Composition `self ∘ other`, i.e. `n ↦ self(other(n))`.
    pub fn compose(&self, other: &IntegerMapRep) -> IntegerMapRep {
        let lo = other.lo.min(self.lo - other.tail_offset_neg) - 1;
        let hi = other.hi.max(self.hi - other.tail_offset_pos) + 1;
        let table = (lo..=hi).map(|n| (n, self.eval(other.eval(n)))).collect();
        IntegerMapRep {
            exceptions: table,
            lo,
            hi,
            tail_offset_pos: self.tail_offset_pos + other.tail_offset_pos,
            tail_offset_neg: self.tail_offset_neg + other.tail_offset_neg,
        }
    }

    /// Pointwise order `self ≤ other` on all of ℤ.
    pub fn leq(&self, other: &IntegerMapRep) -> bool {
        let lo = self.lo.min(other.lo) - 1;
        let hi = self.hi.max(other.hi) + 1;
        self.tail_offset_neg <= other.tail_offset_neg
            && self.tail_offset_pos <= other.tail_offset_pos
            && (lo..=hi).all(|n| self.eval(n) <= other.eval(n))
    }

    /// Left or right adjoint; the result is again eventually a translation.
    pub fn adjoint(&self, direction: Direction) -> IntegerMapRep {
        let below = self.eval(self.lo - 1);
        let above = self.eval(self.hi + 1);
        // every minimizer / maximizer for m inside the new window lies here
        let candidates = (self.lo - 2)..=(self.hi + 2);
        let (lo, hi) = match direction {
            Direction::Left => (below + 1, above),
            Direction::Right => (below, above - 1),
        };
        let table = (lo..=hi)
            .map(|m| {
                let value = match direction {
                    Direction::Left => candidates.clone().find(|&n| m <= self.eval(n)),
                    Direction::Right => candidates.clone().rev().find(|&n| self.eval(n) <= m),
                };
                (m, value.expect("adjoint witness inside the scanned range"))
            })
            .collect();
        IntegerMapRep {
            exceptions: table,
            lo,
            hi,
            tail_offset_pos: -self.tail_offset_pos,
            tail_offset_neg: -self.tail_offset_neg,
        }
    }
}

pub fn integer_map_adjoint(f: &IntegerMapRep, direction: Direction) -> IntegerMapRep {
    f.adjoint(direction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling() -> IntegerMapRep {
        IntegerMapRep::from_fn((-200, 200), |n| 2 * n, 200, -200).unwrap()
    }

    #[test]
    fn identity_is_self_adjoint() {
        let id = IntegerMapRep::identity();
        for d in [Direction::Left, Direction::Right] {
            let g = id.adjoint(d);
            assert!((-50..=50).all(|m| g.eval(m) == m));
        }
    }

    #[test]
    fn doubling_adjoints_are_ceil_and_floor_halves() {
        let f = doubling();
        let l = f.adjoint(Direction::Left);
        let r = f.adjoint(Direction::Right);
        for m in -100..=100i64 {
            assert_eq!(l.eval(m), m.div_euclid(2) + m.rem_euclid(2), "ceil at {m}");
            assert_eq!(r.eval(m), m.div_euclid(2), "floor at {m}");
        }
    }

    #[test]
    fn translation_adjoints_shift_back() {
        let f = IntegerMapRep::translation(3);
        for d in [Direction::Left, Direction::Right] {
            let g = f.adjoint(d);
            assert!((-100..=100).all(|m| g.eval(m) == m - 3));
        }
    }

    #[test]
    fn rejects_non_monotone_tables() {
        let mut table = BTreeMap::new();
        table.insert(0, 5);
        table.insert(1, 4);
        assert!(matches!(
            IntegerMapRep::new(table, (0, 1), 0, 0),
            Err(IntMapError::NotMonotone { .. })
        ));
        // tail junction: f(2) = 2 < f(1) = 10
        let mut table = BTreeMap::new();
        table.insert(1, 10);
        assert!(IntegerMapRep::new(table, (0, 1), 0, 0).is_err());
        let mut table = BTreeMap::new();
        table.insert(7, 7);
        assert_eq!(
            IntegerMapRep::new(table, (0, 1), 0, 0),
            Err(IntMapError::ExceptionOutsideWindow(7))
        );
    }

    #[test]
    fn compose_matches_pointwise_composition() {
        let f = doubling();
        let g = IntegerMapRep::translation(-7);
        let fg = f.compose(&g);
        for n in -500..=500 {
            assert_eq!(fg.eval(n), f.eval(g.eval(n)));
        }
    }

    #[test]
    fn adjunction_laws_in_the_map_pregroup() {
        let id = IntegerMapRep::identity();
        let f = doubling();
        let (l, r) = (f.adjoint(Direction::Left), f.adjoint(Direction::Right));
        // f·f^r ≤ 1 ≤ f^r·f and f^l·f ≤ 1 ≤ f·f^l
        assert!(f.compose(&r).leq(&id));
        assert!(id.leq(&r.compose(&f)));
        assert!(l.compose(&f).leq(&id));
        assert!(id.leq(&f.compose(&l)));
    }
}
