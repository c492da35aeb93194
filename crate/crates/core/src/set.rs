//! Ground sets and element sets.
//!
//! Elements are dense integer identifiers `0..n-1`. Sets are bitsets over a
//! 128-bit word, which caps ground sets at 128 elements — comfortably above
//! every instance this crate is meant to enumerate exhaustively.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Maximum number of ground-set elements.
pub const MAX_ELEMENTS: usize = 128;

/// An ordered universe of elements `0..size`. The identifier order is fixed
/// at construction and used for deterministic tie-breaking everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Arc<Self>> {
        if size > MAX_ELEMENTS {
            return Err(Error::input(format!(
                "ground set of {size} elements exceeds the supported maximum of {MAX_ELEMENTS}"
            )));
        }
        Ok(Arc::new(GroundSet { size, labels: None }))
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Arc<Self>> {
        let mut gs = GroundSet::new(labels.len())?;
        Arc::get_mut(&mut gs).unwrap().labels = Some(labels);
        Ok(gs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|ls| ls.get(id)).map(|s| s.as_str())
    }

    /// The full element set `0..size`.
    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    pub fn check_element(&self, id: usize) -> Result<()> {
        if id >= self.size {
            Err(Error::input(format!(
                "unknown element identifier {id} (ground set has {} elements)",
                self.size
            )))
        } else {
            Ok(())
        }
    }

    pub fn check_subset(&self, s: ElemSet) -> Result<()> {
        if s.is_subset(self.all()) {
            Ok(())
        } else {
            Err(Error::input(format!(
                "set {s} contains identifiers outside the ground set of {} elements",
                self.size
            )))
        }
    }
}

/// A set of element identifiers, backed by a 128-bit bitset.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u128);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn empty() -> Self {
        ElemSet(0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElemSet(u128::MAX)
        } else {
            ElemSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(id: usize) -> Self {
        debug_assert!(id < MAX_ELEMENTS);
        ElemSet(1u128 << id)
    }

    pub fn contains(self, id: usize) -> bool {
        id < MAX_ELEMENTS && self.0 >> id & 1 == 1
    }

    #[must_use]
    pub fn with(self, id: usize) -> Self {
        debug_assert!(id < MAX_ELEMENTS);
        ElemSet(self.0 | 1u128 << id)
    }

    #[must_use]
    pub fn without(self, id: usize) -> Self {
        ElemSet(self.0 & !(1u128 << id))
    }

    pub fn insert(&mut self, id: usize) {
        debug_assert!(id < MAX_ELEMENTS);
        self.0 |= 1u128 << id;
    }

    pub fn remove(&mut self, id: usize) {
        self.0 &= !(1u128 << id);
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersect(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[must_use]
    pub fn minus(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterates identifiers in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let id = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(id)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending identifier sequence; used to
    /// break ties among equal-weight feasible sets.
    pub fn cmp_lex(self, other: Self) -> std::cmp::Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return std::cmp::Ordering::Equal,
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = ElemSet> {
        let mask = self.0;
        let mut cur: u128 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = ElemSet(cur);
            if cur == mask {
                done = true;
            } else {
                cur = (cur.wrapping_sub(mask)) & mask;
            }
            Some(out)
        })
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ElemSet::empty();
        for id in iter {
            s.insert(id);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_covers_power_set() {
        let s: ElemSet = [0, 2, 5].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.contains(&ElemSet::empty()));
        assert!(subs.contains(&s));
        for sub in subs {
            assert!(sub.is_subset(s));
        }
    }

    #[test]
    fn lex_order_prefers_prefixes_and_small_ids() {
        let empty = ElemSet::empty();
        let zero = ElemSet::singleton(0);
        let zero_one: ElemSet = [0, 1].into_iter().collect();
        let one = ElemSet::singleton(1);
        assert!(empty.cmp_lex(zero).is_lt());
        assert!(zero.cmp_lex(zero_one).is_lt());
        assert!(zero_one.cmp_lex(one).is_lt());
    }

    #[test]
    fn ground_set_rejects_oversized_universe() {
        assert!(GroundSet::new(129).is_err());
        assert!(GroundSet::new(128).is_ok());
    }
}
