//! Weighted deduction over a pushdown automaton.
//!
//! An item `q1 ~> q2` claims that a balanced path runs from the entering
//! state `q1` to `q2`. Axioms are `q ~> q` for every entering state. Two rules
//! build larger items:
//!
//! ```text
//! Scan:     q ~> p[e] : u                          i[e] is input or epsilon
//!           -----------------------
//!           q ~> n[e] : u * w[e]
//!
//! Complete: q ~> p[e1] : u1   n[e1] ~> p[e2] : u2   e1 opens, e2 closes the same pair
//!           ---------------------------------------
//!           q ~> n[e2] : u1 * w[e1] * u2 * w[e2]
//! ```
//!
//! Every proof of `s ~> f` corresponds to exactly one accepting path and vice
//! versa. This module computes the weight tables that the search algorithms
//! in [`crate::kpaths`] use as priorities.

mod chart;
mod derivation;
mod enumerate;
mod inside;
mod outside;
mod reverse;

use std::fmt;

use rustc_hash::FxHashMap;

use crate::automata::{StateId, Wpda};
use crate::semiring::Semiring;

pub use derivation::{DerivId, Derivation, DerivationArena, Instantiation};
pub use enumerate::enumerate_derivations;
pub use inside::{inside, inside_with, shortest_distance, Inside, InsideOptions};
pub use outside::outside;
pub use reverse::{gamma, reverse_inside, reverse_inside_with, Gamma};

pub(crate) use chart::Chart;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub from: StateId,
    pub to: StateId,
}

impl Item {
    pub fn new(from: StateId, to: StateId) -> Self {
        Item { from, to }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~>{}", self.from, self.to)
    }
}

/// Sparse map from items to weights. Absent items weigh zero.
///
/// Besides the map it keeps, for every state, the list of partners it is
/// paired with on either side, in insertion order.
#[derive(Debug, Clone)]
pub struct WeightTable<W> {
    entries: FxHashMap<Item, W>,
    by_from: Vec<Vec<StateId>>,
    by_to: Vec<Vec<StateId>>,
}

impl<W: Semiring> WeightTable<W> {
    pub fn new(num_states: usize) -> Self {
        WeightTable {
            entries: FxHashMap::default(),
            by_from: vec![Vec::new(); num_states],
            by_to: vec![Vec::new(); num_states],
        }
    }

    pub fn num_states(&self) -> usize {
        self.by_from.len()
    }

    pub fn get(&self, from: StateId, to: StateId) -> Option<W> {
        self.entries.get(&Item { from, to }).copied()
    }

    /// The stored weight, or zero when absent.
    #[inline]
    pub fn weight(&self, from: StateId, to: StateId) -> W {
        self.get(from, to).unwrap_or_else(W::zero)
    }

    pub fn contains(&self, from: StateId, to: StateId) -> bool {
        self.entries.contains_key(&Item { from, to })
    }

    /// Sets an entry. Zero weights are not stored.
    pub fn insert(&mut self, from: StateId, to: StateId, weight: W) {
        if weight.is_zero() {
            return;
        }
        if self.entries.insert(Item { from, to }, weight).is_none() {
            self.by_from[from as usize].push(to);
            self.by_to[to as usize].push(from);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All `to` with an entry `from ~> to`.
    #[inline]
    pub fn tos_from(&self, from: StateId) -> &[StateId] {
        &self.by_from[from as usize]
    }

    /// All `from` with an entry `from ~> to`.
    #[inline]
    pub fn froms_to(&self, to: StateId) -> &[StateId] {
        &self.by_to[to as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, W)> + '_ {
        self.entries.iter().map(|(&i, &w)| (i, w))
    }

    /// Entries ordered by `(from, to)`.
    pub fn sorted(&self) -> Vec<(Item, W)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        v
    }
}

/// `{s} ∪ {n[e] : e opens}`, sorted.
pub fn entering_states<W: Semiring>(wpda: &Wpda<W>) -> Vec<StateId> {
    let mut states: Vec<StateId> = wpda
        .states()
        .filter(|&q| q == wpda.start() || !wpda.in_open(q).is_empty())
        .collect();
    states.dedup();
    states
}

/// States with an outgoing close transition, sorted. The final state is not
/// included unless it has one.
pub fn exiting_states<W: Semiring>(wpda: &Wpda<W>) -> Vec<StateId> {
    wpda.states()
        .filter(|&q| !wpda.out_close(q).is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::WpdaBuilder;
    use crate::fixtures;
    use crate::semiring::Tropical;

    #[test]
    fn entering_and_exiting() {
        let anbn = fixtures::anbn::<Tropical>();
        assert_eq!(entering_states(&anbn), vec![0, 1]);
        assert_eq!(exiting_states(&anbn), vec![2]);
        let trap = fixtures::h2trap::<Tropical>();
        assert_eq!(entering_states(&trap), vec![0, 1]);
        assert_eq!(exiting_states(&trap), vec![4, 8]);
    }

    #[test]
    fn paren_free_has_only_the_start() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.arc(0, "a", 1, 1).arc(1, "b", 1, 2);
        let m = b.build(1, 2).unwrap();
        assert_eq!(entering_states(&m), vec![1]);
        assert!(exiting_states(&m).is_empty());
    }

    #[test]
    fn table_ignores_zero_and_indexes_both_ends() {
        let mut t = WeightTable::<Tropical>::new(3);
        t.insert(0, 1, Tropical::from(2));
        t.insert(0, 2, Tropical::zero());
        t.insert(0, 1, Tropical::from(1));
        t.insert(2, 1, Tropical::from(5));
        assert_eq!(t.len(), 2);
        assert_eq!(t.weight(0, 1), Tropical::from(1));
        assert_eq!(t.weight(0, 2), Tropical::zero());
        assert_eq!(t.tos_from(0), &[1]);
        assert_eq!(t.froms_to(1), &[0, 2]);
        assert_eq!(t.sorted()[1].0, Item::new(2, 1));
    }
}
