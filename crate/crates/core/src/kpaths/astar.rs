use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::automata::Wpda;
use crate::error::{Error, Result};
use crate::inference::{
    entering_states, gamma, inside, outside, reverse_inside, Chart, DerivId, Derivation,
    DerivationArena, Instantiation, Item,
};
use crate::semiring::{MinKey, Semiring};

use super::{
    check_searchable, heuristic_value, Heuristic, HeuristicKind, KPathResult, ScoredPath,
    SearchStats, DEFAULT_DEPTH_LIMIT,
};

#[derive(Debug, Clone, Copy)]
pub struct AstarOptions {
    /// Record every accepted pop in [`KPathResult`]'s companion trace.
    pub trace: bool,
    pub depth_limit: usize,
    /// Give up with [`Error::LimitExceeded`] after this many pops.
    pub max_pops: u64,
}

impl Default for AstarOptions {
    fn default() -> Self {
        AstarOptions {
            trace: false,
            depth_limit: DEFAULT_DEPTH_LIMIT,
            max_pops: u64::MAX,
        }
    }
}

/// One accepted pop of the agenda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopRecord<W> {
    pub item: Item,
    pub weight: W,
    pub priority: W,
}

struct Entry<W> {
    key: MinKey<W>,
    item: Item,
    weight: W,
    derivation: DerivId,
}

impl<W: Semiring> PartialEq for Entry<W> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl<W: Semiring> Eq for Entry<W> {}
impl<W: Semiring> PartialOrd for Entry<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<W: Semiring> Ord for Entry<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Precomputes the tables for `kind` and runs [`astar_with`].
pub fn astar_kshortest<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    kind: HeuristicKind,
) -> Result<KPathResult<W>> {
    Ok(astar_traced(wpda, k, kind, AstarOptions::default())?.0)
}

/// As [`astar_kshortest`], also returning the pop trace when requested.
pub fn astar_traced<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    kind: HeuristicKind,
    opts: AstarOptions,
) -> Result<(KPathResult<W>, Vec<PopRecord<W>>)> {
    let start = Instant::now();
    check_searchable(wpda, opts.depth_limit)?;
    let (mut result, trace) = match kind {
        HeuristicKind::Outside => {
            if !W::COMMUTATIVE {
                return Err(Error::HeuristicUnavailable(
                    "outside heuristic needs a commutative semiring",
                ));
            }
            let alpha = inside(wpda)?.table;
            let beta = outside(wpda, &alpha);
            let precompute = start.elapsed();
            let mut r = astar_with(wpda, k, &Heuristic::Outside(&beta), opts)?;
            r.0.stats.precompute = precompute;
            r
        }
        HeuristicKind::Exit => {
            if !wpda.nondecreasing_times() {
                return Err(Error::HeuristicUnavailable(
                    "exit heuristic is not monotone with decreasing weights",
                ));
            }
            let d = reverse_inside(wpda)?;
            let g = gamma(wpda, &d);
            let precompute = start.elapsed();
            let mut r = astar_with(wpda, k, &Heuristic::Exit(&g), opts)?;
            r.0.stats.precompute = precompute;
            r
        }
    };
    result.stats.subproblems = 1;
    Ok((result, trace))
}

/// Agenda search with a caller-supplied heuristic. The heuristic must be
/// admissible and monotone for the result to be the `k` best.
///
/// Each popped instantiation joins the chart and is combined with chart
/// members. An item is popped at most `k` times; later instantiations of it
/// cannot take part in any of the `k` best goals. The search stops once `k`
/// goals have been popped.
pub fn astar_with<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    h: &Heuristic<'_, W>,
    opts: AstarOptions,
) -> Result<(KPathResult<W>, Vec<PopRecord<W>>)> {
    let started = Instant::now();
    let goal = Item::new(wpda.start(), wpda.final_state());
    let mut stats = SearchStats::default();
    let mut trace = Vec::new();
    let mut arena = DerivationArena::new();
    let mut chart = Chart::new();
    let mut heap: BinaryHeap<Entry<W>> = BinaryHeap::new();
    let mut signatures: FxHashSet<Derivation> = FxHashSet::default();
    let mut pops_of: FxHashMap<Item, u32> = FxHashMap::default();
    let mut seq = 0u64;
    let mut goals: Vec<Instantiation<W>> = Vec::new();

    let mut push = |heap: &mut BinaryHeap<Entry<W>>,
                    arena: &mut DerivationArena,
                    stats: &mut SearchStats,
                    item: Item,
                    weight: W,
                    d: Derivation| {
        let priority = heuristic_value(h, item, weight);
        if priority.is_zero() || !signatures.insert(d) {
            return;
        }
        let derivation = arena.push(d);
        heap.push(Entry {
            key: MinKey { priority, seq },
            item,
            weight,
            derivation,
        });
        seq += 1;
        stats.pushes += 1;
    };

    if k > 0 {
        for q in entering_states(wpda) {
            push(
                &mut heap,
                &mut arena,
                &mut stats,
                Item::new(q, q),
                W::one(),
                Derivation::Axiom { state: q },
            );
        }
    }
    let mut fresh = Vec::new();
    while let Some(entry) = heap.pop() {
        stats.pops += 1;
        if stats.pops > opts.max_pops {
            return Err(Error::LimitExceeded(format!(
                "agenda search exceeded {} pops",
                opts.max_pops
            )));
        }
        let count = pops_of.entry(entry.item).or_insert(0);
        if *count as usize >= k {
            continue;
        }
        *count += 1;
        if opts.trace {
            trace.push(PopRecord {
                item: entry.item,
                weight: entry.weight,
                priority: entry.key.priority,
            });
        }
        let inst = Instantiation {
            item: entry.item,
            weight: entry.weight,
            derivation: entry.derivation,
        };
        if inst.item == goal {
            goals.push(inst);
            if goals.len() == k {
                break;
            }
        }
        let id = chart.add(inst);
        chart.consequents(wpda, id, |item, w, d| fresh.push((item, w, d)));
        for (item, w, d) in fresh.drain(..) {
            push(&mut heap, &mut arena, &mut stats, item, w, d);
        }
    }

    let mut paths = Vec::with_capacity(goals.len());
    for g in &goals {
        paths.push(ScoredPath {
            weight: g.weight,
            path: arena.extract_path(g.derivation)?,
        });
    }
    stats.search = started.elapsed();
    Ok((
        KPathResult {
            exhausted: paths.len() < k,
            paths,
            stats,
        },
        trace,
    ))
}
