use std::collections::{BinaryHeap, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::automata::{Path, StateId, TransitionId, Wpda};
use crate::error::{Error, Result};
use crate::semiring::{Keyed, MinKey, Semiring};

use super::{entering_states, Item, WeightTable};

#[derive(Debug, Clone, Copy)]
pub struct InsideOptions {
    /// Abort with [`Error::NonTerminating`] after this many relaxations.
    pub max_relaxations: u64,
    /// Record the best last step of every item so that best paths can be
    /// read back.
    pub keep_backpointers: bool,
}

impl Default for InsideOptions {
    fn default() -> Self {
        InsideOptions {
            max_relaxations: 100_000_000,
            keep_backpointers: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Axiom,
    Scan(Item, TransitionId),
    Complete(Item, TransitionId, Item, TransitionId),
}

/// Inside weights: for every provable item, the weight of its best proof.
#[derive(Debug, Clone)]
pub struct Inside<W> {
    pub table: WeightTable<W>,
    pub relaxations: u64,
    back: Option<FxHashMap<Item, Back>>,
}

impl<W: Semiring> Inside<W> {
    /// Best balanced path for `item`, if it is provable and backpointers
    /// were kept.
    pub fn best_path(&self, item: Item) -> Option<Path> {
        let back = self.back.as_ref()?;
        back.get(&item)?;
        enum Step {
            Visit(Item),
            Emit(TransitionId),
        }
        let mut out = Vec::new();
        let mut work = vec![Step::Visit(item)];
        while let Some(step) = work.pop() {
            match step {
                Step::Emit(e) => out.push(e),
                Step::Visit(it) => match back[&it] {
                    Back::Axiom => {}
                    Back::Scan(ant, e) => {
                        work.push(Step::Emit(e));
                        work.push(Step::Visit(ant));
                    }
                    Back::Complete(left, e1, right, e2) => {
                        work.push(Step::Emit(e2));
                        work.push(Step::Visit(right));
                        work.push(Step::Emit(e1));
                        work.push(Step::Visit(left));
                    }
                },
            }
        }
        Some(Path(out))
    }
}

/// Pending items. With nondecreasing weights the agenda is best-first and
/// every item is expanded once, at its final weight. Otherwise it is FIFO
/// and an item is queued again whenever its weight improves.
enum Queue<W> {
    Fifo {
        queue: VecDeque<Item>,
        queued: FxHashSet<Item>,
    },
    Best {
        heap: BinaryHeap<Keyed<W, Item>>,
        done: FxHashSet<Item>,
        seq: u64,
    },
}

struct Agenda<W> {
    table: WeightTable<W>,
    queue: Queue<W>,
    back: Option<FxHashMap<Item, Back>>,
    relaxations: u64,
    cap: u64,
}

impl<W: Semiring> Agenda<W> {
    #[inline]
    fn relax(&mut self, item: Item, w: W, how: Back) -> Result<()> {
        self.relaxations += 1;
        if self.relaxations > self.cap {
            return Err(Error::NonTerminating(self.cap));
        }
        if w.is_zero() {
            return Ok(());
        }
        let improved = match self.table.get(item.from, item.to) {
            Some(old) => old.plus(w) != old,
            None => true,
        };
        if improved {
            self.table.insert(item.from, item.to, w);
            if let Some(back) = self.back.as_mut() {
                back.insert(item, how);
            }
            match &mut self.queue {
                Queue::Fifo { queue, queued } => {
                    if queued.insert(item) {
                        queue.push_back(item);
                    }
                }
                Queue::Best { heap, seq, .. } => {
                    heap.push(Keyed {
                        key: MinKey {
                            priority: w,
                            seq: *seq,
                        },
                        value: item,
                    });
                    *seq += 1;
                }
            }
        }
        Ok(())
    }

    fn pop(&mut self) -> Option<Item> {
        match &mut self.queue {
            Queue::Fifo { queue, queued } => {
                let item = queue.pop_front()?;
                queued.remove(&item);
                Some(item)
            }
            Queue::Best { heap, done, .. } => loop {
                let Keyed { key, value: item } = heap.pop()?;
                if key.priority == self.table.weight(item.from, item.to) && done.insert(item) {
                    return Some(item);
                }
            },
        }
    }
}

pub fn inside<W: Semiring>(wpda: &Wpda<W>) -> Result<Inside<W>> {
    inside_with(wpda, InsideOptions::default())
}

/// Agenda with relaxation. Each popped item is extended by Scan, used
/// as the left antecedent of Complete against every known inner item, and
/// used as the inner antecedent against every known left item.
pub fn inside_with<W: Semiring>(wpda: &Wpda<W>, opts: InsideOptions) -> Result<Inside<W>> {
    let mut ag = Agenda {
        table: WeightTable::new(wpda.num_states()),
        queue: if wpda.nondecreasing_times() {
            Queue::Best {
                heap: BinaryHeap::new(),
                done: FxHashSet::default(),
                seq: 0,
            }
        } else {
            Queue::Fifo {
                queue: VecDeque::new(),
                queued: FxHashSet::default(),
            }
        },
        back: opts.keep_backpointers.then(FxHashMap::default),
        relaxations: 0,
        cap: opts.max_relaxations,
    };
    for q in entering_states(wpda) {
        ag.relax(Item::new(q, q), W::one(), Back::Axiom)?;
    }
    let close_sources = close_sources(wpda);
    while let Some(item) = ag.pop() {
        let Item { from: q1, to: q2 } = item;
        let u = ag.table.weight(q1, q2);

        for &e in wpda.out_scan(q2) {
            let t = wpda.transition(e);
            ag.relax(Item::new(q1, t.dst), u.times(t.weight), Back::Scan(item, e))?;
        }

        // As the left antecedent: q1 ~> q2 -( x ~> q3 -) .
        for &e1 in wpda.out_open(q2) {
            let t1 = wpda.transition(e1);
            let x = t1.dst;
            let paren = wpda.paren_raw(e1);
            let sources = &close_sources[paren.0 as usize];
            // Walk whichever side is shorter: the items from x or the
            // states that close this paren.
            let by_sources = sources.len() < ag.table.tos_from(x).len();
            let count = if by_sources {
                sources.len()
            } else {
                ag.table.tos_from(x).len()
            };
            let mut i = 0;
            while i < count {
                let q3 = if by_sources {
                    sources[i]
                } else {
                    ag.table.tos_from(x)[i]
                };
                i += 1;
                let Some(inner) = ag.table.get(x, q3) else {
                    continue;
                };
                let closes = wpda.out_close_with(q3, paren);
                if closes.is_empty() {
                    continue;
                }
                let prefix = u.times(t1.weight).times(inner);
                for &e2 in closes {
                    let t2 = wpda.transition(e2);
                    ag.relax(
                        Item::new(q1, t2.dst),
                        prefix.times(t2.weight),
                        Back::Complete(item, e1, Item::new(x, q3), e2),
                    )?;
                }
            }
        }

        // As the inner antecedent: q0 ~> p[e1] -( q1 ~> q2 -) .
        let opens_in = if wpda.out_close(q2).is_empty() {
            &[][..]
        } else {
            wpda.in_open(q1)
        };
        for &e1 in opens_in {
            let t1 = wpda.transition(e1);
            let closes = wpda.out_close_with(q2, wpda.paren_raw(e1));
            if closes.is_empty() {
                continue;
            }
            let p = t1.src;
            let mut i = 0;
            while i < ag.table.froms_to(p).len() {
                let q0 = ag.table.froms_to(p)[i];
                i += 1;
                let left = ag.table.weight(q0, p);
                let prefix = left.times(t1.weight).times(u);
                for &e2 in closes {
                    let t2 = wpda.transition(e2);
                    ag.relax(
                        Item::new(q0, t2.dst),
                        prefix.times(t2.weight),
                        Back::Complete(Item::new(q0, p), e1, item, e2),
                    )?;
                }
            }
        }
    }
    Ok(Inside {
        table: ag.table,
        relaxations: ag.relaxations,
        back: ag.back,
    })
}

/// States with an outgoing close transition, per paren.
pub(crate) fn close_sources<W: Semiring>(wpda: &Wpda<W>) -> Vec<Vec<StateId>> {
    let mut out = vec![Vec::new(); wpda.parens().len()];
    for q in wpda.states() {
        for &e in wpda.out_close(q) {
            let list: &mut Vec<StateId> = &mut out[wpda.paren_raw(e).0 as usize];
            if list.last() != Some(&q) {
                list.push(q);
            }
        }
    }
    out
}

/// Weight of the best accepting path, or zero when there is none.
pub fn shortest_distance<W: Semiring>(wpda: &Wpda<W>) -> Result<W> {
    Ok(inside(wpda)?.table.weight(wpda.start(), wpda.final_state()))
}
