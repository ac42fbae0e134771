//! Stack-depth analysis.
//!
//! [`check_bounded_stack`] enumerates `(state, stack)` configurations
//! reachable from the start and reports the deepest stack it saw. It is
//! exact but its cost grows with the number of configurations, which is the
//! size of the naive expansion.
//!
//! [`stack_bound`] reaches the same verdict in polynomial time: every stack
//! reachable from the start is a chain `s ~> (  q1 ~> (  q2 ...` of balanced
//! segments separated by unmatched opens, so the maximum depth is the longest
//! path from `s` in the graph whose edges are "balanced path to an open
//! transition", and the stack is unbounded iff that graph has a reachable
//! cycle.

use rustc_hash::{FxHashMap, FxHashSet};

use super::{ParenId, StateId, Wpda};
use crate::inference::{entering_states, inside};
use crate::semiring::{Boolean, Semiring};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundReport {
    /// Exploration closed. `depth` is the deepest stack observed.
    Bounded { depth: usize, configurations: usize },
    /// Gave up: stack deeper than the depth limit or more configurations than
    /// the configuration limit. Not a proof of unboundedness.
    LimitExceeded {
        depth: usize,
        configurations: usize,
        reason: LimitKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Depth,
    Configurations,
}

/// Breadth-first enumeration of configurations reachable from
/// `(start, empty)`. Closes only fire when they match the top of the stack.
pub fn check_bounded_stack<W: Semiring>(
    wpda: &Wpda<W>,
    depth_limit: usize,
    config_limit: usize,
) -> BoundReport {
    // Stack 0 is empty; stack i > 0 is `stacks[i] = (parent, paren, depth)`.
    let mut stacks: Vec<(u32, ParenId, usize)> = vec![(0, ParenId(u32::MAX), 0)];
    let mut stack_ids: FxHashMap<(u32, ParenId), u32> = FxHashMap::default();
    let mut seen: FxHashSet<(StateId, u32)> = FxHashSet::default();
    let mut frontier = vec![(wpda.start(), 0u32)];
    seen.insert((wpda.start(), 0));
    let mut max_depth = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (q, st) in frontier {
            let mut visit = |cfg: (StateId, u32), next: &mut Vec<(StateId, u32)>| {
                if seen.insert(cfg) {
                    next.push(cfg);
                }
            };
            for &e in wpda.out_scan(q) {
                visit((wpda.transition(e).dst, st), &mut next);
            }
            let (parent, top, depth) = stacks[st as usize];
            if st != 0 {
                for &e in wpda.out_close_with(q, top) {
                    visit((wpda.transition(e).dst, parent), &mut next);
                }
            }
            for &e in wpda.out_open(q) {
                let paren = wpda.paren_raw(e);
                let pushed = *stack_ids.entry((st, paren)).or_insert_with(|| {
                    stacks.push((st, paren, depth + 1));
                    stacks.len() as u32 - 1
                });
                max_depth = max_depth.max(depth + 1);
                if max_depth > depth_limit {
                    return BoundReport::LimitExceeded {
                        depth: max_depth,
                        configurations: seen.len(),
                        reason: LimitKind::Depth,
                    };
                }
                visit((wpda.transition(e).dst, pushed), &mut next);
            }
            if seen.len() > config_limit {
                return BoundReport::LimitExceeded {
                    depth: max_depth,
                    configurations: seen.len(),
                    reason: LimitKind::Configurations,
                };
            }
        }
        frontier = next;
    }
    BoundReport::Bounded {
        depth: max_depth,
        configurations: seen.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackBound {
    Bounded {
        depth: usize,
    },
    /// Some entering state reachable from the start can re-enter itself
    /// with a deeper stack.
    Unbounded {
        witness: StateId,
    },
}

impl StackBound {
    pub fn depth(self) -> Option<usize> {
        match self {
            StackBound::Bounded { depth } => Some(depth),
            StackBound::Unbounded { .. } => None,
        }
    }
}

/// Maximum stack depth over all paths from the start, computed from
/// balanced reachability between entering states.
pub fn stack_bound<W: Semiring>(wpda: &Wpda<W>) -> StackBound {
    let reach = wpda.map_weights(|_| Boolean::TRUE);
    let table = inside(&reach)
        .expect("boolean closure always terminates")
        .table;
    // Call graph over entering states: x -> n[e] for an open e leaving a
    // state balanced-reachable from x.
    let entering = entering_states(wpda);
    let mut calls: FxHashMap<StateId, Vec<StateId>> = FxHashMap::default();
    for &x in &entering {
        let targets = calls.entry(x).or_default();
        for &y in table.tos_from(x) {
            for &e in wpda.out_open(y) {
                targets.push(wpda.transition(e).dst);
            }
        }
        targets.sort_unstable();
        targets.dedup();
    }
    // Iterative DFS from the start: cycle detection plus longest path.
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color: FxHashMap<StateId, u8> = FxHashMap::default();
    let mut longest: FxHashMap<StateId, usize> = FxHashMap::default();
    let empty = Vec::new();
    let mut stack: Vec<(StateId, usize)> = vec![(wpda.start(), 0)];
    color.insert(wpda.start(), GREY);
    while let Some(&mut (x, ref mut i)) = stack.last_mut() {
        let succ = calls.get(&x).unwrap_or(&empty);
        if *i < succ.len() {
            let y = succ[*i];
            *i += 1;
            match color.get(&y).copied().unwrap_or(WHITE) {
                WHITE => {
                    color.insert(y, GREY);
                    stack.push((y, 0));
                }
                GREY => return StackBound::Unbounded { witness: y },
                _ => {}
            }
        } else {
            let best = succ.iter().map(|y| longest[y] + 1).max().unwrap_or(0);
            longest.insert(x, best);
            color.insert(x, BLACK);
            stack.pop();
        }
    }
    StackBound::Bounded {
        depth: longest[&wpda.start()],
    }
}
