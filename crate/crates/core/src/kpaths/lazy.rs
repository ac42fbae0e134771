use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::automata::{StateId, TransitionId, Wpda};
use crate::error::{Error, Result};
use crate::inference::{
    reverse_inside, DerivId, Derivation, DerivationArena, Instantiation, Item, WeightTable,
};
use crate::semiring::Semiring;

use super::{
    check_searchable, KPathResult, ScoredPath, SearchStats, SubproblemStats, DEFAULT_DEPTH_LIMIT,
};

#[derive(Debug, Clone, Copy)]
enum Kind<W> {
    /// A proved instantiation `p ~> to : weight`.
    Proved,
    /// `p ~> to` via a completion whose inner part is the `rank`-th best
    /// path of `(n[open], p[close])`, not yet known. `left` is the weight of
    /// the outer antecedent.
    Promised {
        left: W,
        open: TransitionId,
        close: TransitionId,
        rank: u32,
    },
}

#[derive(Debug, Clone, Copy)]
struct Entry<W> {
    priority: W,
    seq: u64,
    to: StateId,
    weight: W,
    derivation: DerivId,
    kind: Kind<W>,
}

impl<W> Entry<W> {
    fn promised(&self) -> bool {
        matches!(self.kind, Kind::Promised { .. })
    }
}

impl<W: Semiring> PartialEq for Entry<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<W: Semiring> Eq for Entry<W> {}
impl<W: Semiring> PartialOrd for Entry<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<W: Semiring> Ord for Entry<W> {
    /// Smallest priority first; at equal priority proved entries go before
    /// promises, then insertion order.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .nat_cmp(self.priority)
            .then_with(|| other.promised().cmp(&self.promised()))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug)]
struct Subproblem<W> {
    from: StateId,
    to: StateId,
    queue: BinaryHeap<Entry<W>>,
    goals: Vec<Instantiation<W>>,
    started: bool,
    exhausted: bool,
    running: bool,
    pops: u64,
    pushes: u64,
}

/// Search state for the lazy algorithm over one automaton.
///
/// Subproblem `(p, q)` enumerates balanced paths from the entering state `p`
/// to `q` in weight order, using `u * D(r, q)` as the priority of `p ~> r : u`.
/// Its queue, proven goals and statistics persist between calls, so asking
/// for rank `k + 1` resumes where rank `k` stopped.
#[derive(Debug)]
pub struct LazySearch<'a, W> {
    wpda: &'a Wpda<W>,
    d: &'a WeightTable<W>,
    arena: DerivationArena,
    index: FxHashMap<(StateId, StateId), u32>,
    subs: Vec<Subproblem<W>>,
    seq: u64,
}

impl<'a, W: Semiring> LazySearch<'a, W> {
    /// `d` must be the reverse inside table of `wpda`.
    pub fn new(wpda: &'a Wpda<W>, d: &'a WeightTable<W>) -> Self {
        LazySearch {
            wpda,
            d,
            arena: DerivationArena::new(),
            index: FxHashMap::default(),
            subs: Vec::new(),
            seq: 0,
        }
    }

    pub fn arena(&self) -> &DerivationArena {
        &self.arena
    }

    fn subproblem(&mut self, p: StateId, q: StateId) -> usize {
        let next = self.subs.len() as u32;
        let idx = *self.index.entry((p, q)).or_insert(next);
        if idx == next {
            self.subs.push(Subproblem {
                from: p,
                to: q,
                queue: BinaryHeap::new(),
                goals: Vec::new(),
                started: false,
                exhausted: false,
                running: false,
                pops: 0,
                pushes: 0,
            });
        }
        idx as usize
    }

    fn push(
        &mut self,
        idx: usize,
        priority: W,
        to: StateId,
        weight: W,
        derivation: Derivation,
        kind: Kind<W>,
    ) {
        if priority.is_zero() {
            return;
        }
        let derivation = self.arena.push(derivation);
        let sub = &mut self.subs[idx];
        sub.queue.push(Entry {
            priority,
            seq: self.seq,
            to,
            weight,
            derivation,
            kind,
        });
        sub.pushes += 1;
        self.seq += 1;
    }

    /// The `k`-th best (1-based) balanced path from `p` to `q` as a goal
    /// instantiation `p ~> q`, or `None` when fewer than `k` exist.
    ///
    /// `p` must be an entering state and `q` an exiting state or the final
    /// state.
    pub fn find_kth(
        &mut self,
        p: StateId,
        q: StateId,
        k: usize,
    ) -> Result<Option<Instantiation<W>>> {
        assert!(k >= 1, "ranks are 1-based");
        let idx = self.subproblem(p, q);
        {
            let sub = &mut self.subs[idx];
            if let Some(g) = sub.goals.get(k - 1) {
                return Ok(Some(*g));
            }
            if sub.exhausted {
                return Ok(None);
            }
            if sub.running {
                return Err(Error::UnboundedInput(format!(
                    "subproblem ({p}, {q}) depends on itself"
                )));
            }
            sub.running = true;
        }
        if !self.subs[idx].started {
            self.subs[idx].started = true;
            let h = self.d.weight(p, q);
            self.push(
                idx,
                h,
                p,
                W::one(),
                Derivation::Axiom { state: p },
                Kind::Proved,
            );
        }
        let found = self.run(idx, p, q, k);
        self.subs[idx].running = false;
        found
    }

    fn run(
        &mut self,
        idx: usize,
        p: StateId,
        q: StateId,
        k: usize,
    ) -> Result<Option<Instantiation<W>>> {
        let wpda = self.wpda;
        let d = self.d;
        loop {
            let Some(entry) = self.subs[idx].queue.pop() else {
                self.subs[idx].exhausted = true;
                return Ok(None);
            };
            self.subs[idx].pops += 1;
            let r = entry.to;
            let u = entry.weight;

            if let Kind::Promised {
                left,
                open,
                close,
                rank,
            } = entry.kind
            {
                let (t1, t2) = (wpda.transition(open), wpda.transition(close));
                let inner = self.find_kth(t1.dst, t2.src, rank as usize)?;
                let Some(inner) = inner else { continue };
                let Derivation::Promise { left: left_d, .. } = self.arena.get(entry.derivation)
                else {
                    unreachable!("promised entries carry promise nodes");
                };
                self.arena.resolve(entry.derivation, inner.derivation);
                let weight = left.times(t1.weight).times(inner.weight).times(t2.weight);
                let priority = weight.times(d.weight(r, q));
                if !priority.is_zero() {
                    let sub = &mut self.subs[idx];
                    sub.queue.push(Entry {
                        priority,
                        seq: self.seq,
                        to: r,
                        weight,
                        derivation: entry.derivation,
                        kind: Kind::Proved,
                    });
                    sub.pushes += 1;
                    self.seq += 1;
                }
                // The next inner rank can be no better than this one.
                self.push(
                    idx,
                    priority,
                    r,
                    W::zero(),
                    Derivation::Promise {
                        subproblem: (t1.dst, t2.src),
                        rank: rank + 1,
                        left: left_d,
                        open,
                        close,
                    },
                    Kind::Promised {
                        left,
                        open,
                        close,
                        rank: rank + 1,
                    },
                );
                continue;
            }

            for &e in wpda.out_scan(r) {
                let t = wpda.transition(e);
                let w = u.times(t.weight);
                let h = w.times(d.weight(t.dst, q));
                self.push(
                    idx,
                    h,
                    t.dst,
                    w,
                    Derivation::Scan {
                        antecedent: entry.derivation,
                        side: e,
                    },
                    Kind::Proved,
                );
            }
            for &e in wpda.out_open(r) {
                let t1 = wpda.transition(e);
                let paren = wpda.paren_raw(e);
                let prefix = u.times(t1.weight);
                for &y in d.tos_from(t1.dst) {
                    let closes = wpda.out_close_with(y, paren);
                    if closes.is_empty() {
                        continue;
                    }
                    let inner = prefix.times(d.weight(t1.dst, y));
                    for &e2 in closes {
                        let t2 = wpda.transition(e2);
                        let h = inner.times(t2.weight).times(d.weight(t2.dst, q));
                        self.push(
                            idx,
                            h,
                            t2.dst,
                            W::zero(),
                            Derivation::Promise {
                                subproblem: (t1.dst, y),
                                rank: 1,
                                left: entry.derivation,
                                open: e,
                                close: e2,
                            },
                            Kind::Promised {
                                left: u,
                                open: e,
                                close: e2,
                                rank: 1,
                            },
                        );
                    }
                }
            }
            if r == q {
                let inst = Instantiation {
                    item: Item::new(p, q),
                    weight: u,
                    derivation: entry.derivation,
                };
                let sub = &mut self.subs[idx];
                sub.goals.push(inst);
                if sub.goals.len() >= k {
                    return Ok(Some(inst));
                }
            }
        }
    }

    pub fn subproblem_stats(&self) -> Vec<SubproblemStats> {
        self.subs
            .iter()
            .map(|s| SubproblemStats {
                from: s.from,
                to: s.to,
                pops: s.pops,
                pushes: s.pushes,
                goals: s.goals.len() as u64,
            })
            .collect()
    }

    /// Statistics of subproblem `(p, q)`, if it was ever opened.
    pub fn stats_of(&self, p: StateId, q: StateId) -> Option<SubproblemStats> {
        let &idx = self.index.get(&(p, q))?;
        let s = &self.subs[idx as usize];
        Some(SubproblemStats {
            from: s.from,
            to: s.to,
            pops: s.pops,
            pushes: s.pushes,
            goals: s.goals.len() as u64,
        })
    }
}

/// Computes the reverse inside weights, then asks subproblem `(s, f)` for
/// ranks `1..=k`.
pub fn lazy_kshortest<W: Semiring>(wpda: &Wpda<W>, k: usize) -> Result<KPathResult<W>> {
    let started = Instant::now();
    check_searchable(wpda, DEFAULT_DEPTH_LIMIT)?;
    let d = reverse_inside(wpda)?;
    let precompute = started.elapsed();
    let (mut result, _) = lazy_search_with(wpda, &d, k, |_| {})?;
    result.stats.precompute = precompute;
    Ok(result)
}

/// Runs the lazy search with a precomputed `d` and hands the finished search
/// state to `inspect` before returning.
pub fn lazy_search_with<W: Semiring, T>(
    wpda: &Wpda<W>,
    d: &WeightTable<W>,
    k: usize,
    inspect: impl FnOnce(&LazySearch<'_, W>) -> T,
) -> Result<(KPathResult<W>, T)> {
    let started = Instant::now();
    let mut search = LazySearch::new(wpda, d);
    let (s, f) = (wpda.start(), wpda.final_state());
    let mut paths = Vec::new();
    for rank in 1..=k {
        match search.find_kth(s, f, rank)? {
            Some(g) => paths.push(ScoredPath {
                weight: g.weight,
                path: search.arena.extract_path(g.derivation)?,
            }),
            None => break,
        }
    }
    let per_subproblem = search.subproblem_stats();
    let stats = SearchStats {
        pops: per_subproblem.iter().map(|s| s.pops).sum(),
        pushes: per_subproblem.iter().map(|s| s.pushes).sum(),
        subproblems: per_subproblem.len(),
        precompute: Default::default(),
        search: started.elapsed(),
        per_subproblem,
    };
    let extra = inspect(&search);
    Ok((
        KPathResult {
            exhausted: paths.len() < k,
            paths,
            stats,
        },
        extra,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semiring::Tropical;

    fn t(v: i32) -> Tropical {
        Tropical::from(v)
    }

    #[test]
    fn h2trap_best_leaves_the_trap_alone() {
        let m = fixtures::h2trap::<Tropical>();
        let d = reverse_inside(&m).unwrap();
        let (r, (trap, inner)) =
            lazy_search_with(&m, &d, 1, |s| (s.stats_of(1, 8), s.stats_of(1, 4))).unwrap();
        assert_eq!(r.weights(), vec![t(3)]);
        assert!(trap.is_none_or(|s| s.pushes == 0));
        assert_eq!(inner.unwrap().pops, 3);
    }

    #[test]
    fn find_kth_on_inner_subproblem() {
        let m = fixtures::h2trap::<Tropical>();
        let d = reverse_inside(&m).unwrap();
        let mut s = LazySearch::new(&m, &d);
        let g = s.find_kth(1, 4, 1).unwrap().unwrap();
        assert_eq!(g.weight, t(2));
        assert_eq!(g.item, Item::new(1, 4));
        assert_eq!(s.stats_of(1, 4).unwrap().pops, 3);
        // Cached.
        assert_eq!(s.find_kth(1, 4, 1).unwrap(), Some(g));
        assert_eq!(s.stats_of(1, 4).unwrap().pops, 3);
        assert!(s.find_kth(1, 4, 2).unwrap().is_none());
        let sf = s.find_kth(0, 9, 1).unwrap().unwrap();
        assert_eq!(sf.weight, t(3));
        assert!(s.stats_of(1, 8).is_none_or(|x| x.pushes == 0));
    }

    #[test]
    fn two_best_and_exhaustion() {
        let m = fixtures::h2trap::<Tropical>();
        let r = lazy_kshortest(&m, 2).unwrap();
        assert_eq!(r.weights(), vec![t(3), t(4)]);
        for p in &r.paths {
            assert!(m.is_accepting(&p.path));
            assert_eq!(m.path_weight(&p.path), p.weight);
        }
        assert_eq!(
            m.yield_tokens(&r.paths[1].path, false),
            ["b", "b", "b", "b"]
        );
        let r = lazy_kshortest(&m, 5).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.exhausted);
    }

    #[test]
    fn nested_single_path() {
        let m = fixtures::nested::<Tropical>();
        let r = lazy_kshortest(&m, 5).unwrap();
        assert_eq!(r.weights(), vec![Tropical::one()]);
        assert_eq!(
            m.yield_tokens(&r.paths[0].path, false),
            ["a", "a", "b", "b"]
        );
    }
}
