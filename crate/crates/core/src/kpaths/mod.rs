//! Exact k shortest accepting paths.
//!
//! Two searches are provided:
//!
//! * [`astar_kshortest`]: agenda search over the deduction system, ordered by
//!   a heuristic completion weight. With the outside weights as heuristic the
//!   first `k` goals popped are the `k` best.
//! * [`lazy_kshortest`]: one small search per `(entering, exiting)` state
//!   pair, ordered by reverse inside weights. Nested subproblems are only
//!   consulted when a proof that uses them reaches the top of a queue.

mod astar;
mod lazy;
mod merge;

use std::fmt::{self, Write as _};
use std::time::Duration;

use crate::automata::{stack_bound, Path, StackBound, StateId, Wpda};
use crate::error::{Error, Result};
use crate::inference::{Gamma, Item, WeightTable};
use crate::semiring::Semiring;

pub use astar::{astar_kshortest, astar_traced, astar_with, AstarOptions, PopRecord};
pub use lazy::{lazy_kshortest, lazy_search_with, LazySearch};
pub use merge::{lazy_pair_merge, PairMerge};

/// Default maximum stack depth accepted by the search entry points.
pub const DEFAULT_DEPTH_LIMIT: usize = 1024;

/// Which heuristic drives [`astar_kshortest`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    /// `β(q1 ~> q2) * u`: exact completion weight. Needs commutative times.
    Outside,
    /// `u * γ(q1 ~> q2)`: distance to the nearest exit. Needs nondecreasing
    /// times, and is admissible but usually far from exact.
    Exit,
}

/// A heuristic with the table it reads.
#[derive(Debug, Clone, Copy)]
pub enum Heuristic<'a, W> {
    Outside(&'a WeightTable<W>),
    Exit(&'a Gamma<W>),
    /// `u * D(r, target)` for items `p ~> r` of the subproblem ending at
    /// `target`.
    Subproblem {
        d: &'a WeightTable<W>,
        target: StateId,
    },
}

/// Priority of the instantiation `item : weight`. Zero means "cannot reach a
/// goal"; such instantiations are never queued.
#[inline]
pub fn heuristic_value<W: Semiring>(h: &Heuristic<'_, W>, item: Item, weight: W) -> W {
    match *h {
        Heuristic::Outside(beta) => beta.weight(item.from, item.to).times(weight),
        Heuristic::Exit(gamma) => weight.times(gamma.get(item.from, item.to)),
        Heuristic::Subproblem { d, target } => weight.times(d.weight(item.to, target)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPath<W> {
    pub weight: W,
    pub path: Path,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubproblemStats {
    pub from: StateId,
    pub to: StateId,
    pub pops: u64,
    pub pushes: u64,
    pub goals: u64,
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub pops: u64,
    pub pushes: u64,
    /// Subproblems opened by the lazy search; 1 for agenda search.
    pub subproblems: usize,
    pub precompute: Duration,
    pub search: Duration,
    pub per_subproblem: Vec<SubproblemStats>,
}

impl SearchStats {
    pub fn total(&self) -> Duration {
        self.precompute + self.search
    }

    /// `key=value` lines.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "pops={}", self.pops);
        let _ = writeln!(s, "pushes={}", self.pushes);
        let _ = writeln!(s, "subproblems={}", self.subproblems);
        let _ = writeln!(
            s,
            "precompute_ms={:.3}",
            self.precompute.as_secs_f64() * 1e3
        );
        let _ = writeln!(s, "search_ms={:.3}", self.search.as_secs_f64() * 1e3);
        s
    }
}

/// Up to `k` accepting paths in nondecreasing weight order.
#[derive(Debug, Clone)]
pub struct KPathResult<W> {
    pub paths: Vec<ScoredPath<W>>,
    /// Fewer than the requested number of paths exist.
    pub exhausted: bool,
    pub stats: SearchStats,
}

impl<W: Semiring> KPathResult<W> {
    pub fn weights(&self) -> Vec<W> {
        self.paths.iter().map(|p| p.weight).collect()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

impl<W: Semiring> fmt::Display for KPathResult<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paths {
            writeln!(f, "{}\t{:?}", p.weight, p.path.0)?;
        }
        Ok(())
    }
}

/// Rejects malformed automata and automata whose stack is unbounded or
/// deeper than `depth_limit`. Returns the stack bound.
pub fn check_searchable<W: Semiring>(wpda: &Wpda<W>, depth_limit: usize) -> Result<usize> {
    let report = wpda.validate();
    if !report.is_empty() {
        return Err(Error::Validation(report));
    }
    match stack_bound(wpda) {
        StackBound::Bounded { depth } if depth <= depth_limit => Ok(depth),
        StackBound::Bounded { depth } => Err(Error::UnboundedInput(format!(
            "stack depth {depth} exceeds the limit {depth_limit}"
        ))),
        StackBound::Unbounded { witness } => Err(Error::UnboundedInput(format!(
            "state {witness} can be re-entered with a deeper stack"
        ))),
    }
}
