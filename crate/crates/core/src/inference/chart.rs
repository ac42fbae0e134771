use rustc_hash::FxHashMap;

use crate::automata::{StateId, Wpda};
use crate::semiring::Semiring;

use super::{Derivation, Instantiation, Item};

/// Proven instantiations, indexed by both endpoints, for agenda searches that
/// keep more than one proof per item.
#[derive(Debug)]
pub(crate) struct Chart<W> {
    insts: Vec<Instantiation<W>>,
    by_from: FxHashMap<StateId, Vec<u32>>,
    by_to: FxHashMap<StateId, Vec<u32>>,
}

impl<W: Semiring> Chart<W> {
    pub fn new() -> Self {
        Chart {
            insts: Vec::new(),
            by_from: FxHashMap::default(),
            by_to: FxHashMap::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.insts.len()
    }

    pub fn add(&mut self, inst: Instantiation<W>) -> u32 {
        let id = self.insts.len() as u32;
        self.by_from.entry(inst.item.from).or_default().push(id);
        self.by_to.entry(inst.item.to).or_default().push(id);
        self.insts.push(inst);
        id
    }

    /// Every instantiation provable in one step from chart member `id`
    /// together with chart members. Pairs are enumerated so that each
    /// combination is produced exactly once over the lifetime of the chart
    /// provided `consequents` is called once per member right after it is
    /// added.
    pub fn consequents(&self, wpda: &Wpda<W>, id: u32, mut emit: impl FnMut(Item, W, Derivation)) {
        let a = self.insts[id as usize];
        let Item { from: q1, to: q2 } = a.item;
        for &e in wpda.out_scan(q2) {
            let t = wpda.transition(e);
            emit(
                Item::new(q1, t.dst),
                a.weight.times(t.weight),
                Derivation::Scan {
                    antecedent: a.derivation,
                    side: e,
                },
            );
        }
        // `a` on the left, any member (including `a`) inside.
        for &e1 in wpda.out_open(q2) {
            let t1 = wpda.transition(e1);
            let paren = wpda.paren_raw(e1);
            let Some(inner) = self.by_from.get(&t1.dst) else {
                continue;
            };
            for &b in inner {
                let b = self.insts[b as usize];
                for &e2 in wpda.out_close_with(b.item.to, paren) {
                    let t2 = wpda.transition(e2);
                    emit(
                        Item::new(q1, t2.dst),
                        a.weight.times(t1.weight).times(b.weight).times(t2.weight),
                        Derivation::Complete {
                            left: a.derivation,
                            open: e1,
                            right: b.derivation,
                            close: e2,
                        },
                    );
                }
            }
        }
        // `a` inside, any earlier member on the left.
        for &e1 in wpda.in_open(q1) {
            let t1 = wpda.transition(e1);
            let closes = wpda.out_close_with(q2, wpda.paren_raw(e1));
            if closes.is_empty() {
                continue;
            }
            let Some(lefts) = self.by_to.get(&t1.src) else {
                continue;
            };
            for &l in lefts {
                if l == id {
                    continue;
                }
                let l = self.insts[l as usize];
                for &e2 in closes {
                    let t2 = wpda.transition(e2);
                    emit(
                        Item::new(l.item.from, t2.dst),
                        l.weight.times(t1.weight).times(a.weight).times(t2.weight),
                        Derivation::Complete {
                            left: l.derivation,
                            open: e1,
                            right: a.derivation,
                            close: e2,
                        },
                    );
                }
            }
        }
    }
}
