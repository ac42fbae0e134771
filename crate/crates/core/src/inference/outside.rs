use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::automata::Wpda;
use crate::semiring::Semiring;

use super::{Item, WeightTable};

/// Outside weights: for every provable item `q1 ~> q2`, the best weight of
/// the prefix and suffix that turn one of its paths into an accepting path.
///
/// Runs the inference rules backwards from `s ~> f`. Only items present in
/// `alpha` are relaxed, so the result is keyed by exactly the provable items
/// that lie on some accepting path. Returns an empty table when `s ~> f` is
/// not provable. Assumes a commutative semiring.
pub fn outside<W: Semiring>(wpda: &Wpda<W>, alpha: &WeightTable<W>) -> WeightTable<W> {
    let beta = WeightTable::new(wpda.num_states());
    let (s, f) = (wpda.start(), wpda.final_state());
    if !alpha.contains(s, f) {
        return beta;
    }
    let mut ag = Agenda {
        alpha,
        beta,
        queue: VecDeque::new(),
        queued: FxHashSet::default(),
    };
    ag.relax(Item::new(s, f), W::one());
    while let Some(item) = ag.queue.pop_front() {
        ag.queued.remove(&item);
        let Item { from: q1, to: q2 } = item;
        let u = ag.beta.weight(q1, q2);
        for &e in wpda.in_scan(q2) {
            let t = wpda.transition(e);
            ag.relax(Item::new(q1, t.src), u.times(t.weight));
        }
        // q1 ~> p[e1] -( x ~> p[e] -) q2
        for &e in wpda.in_close(q2) {
            let t = wpda.transition(e);
            let paren = wpda.paren_raw(e);
            for &x in alpha.froms_to(t.src) {
                let inner = alpha.weight(x, t.src);
                for &e1 in wpda.in_open_with(x, paren) {
                    let t1 = wpda.transition(e1);
                    let Some(left) = alpha.get(q1, t1.src) else {
                        continue;
                    };
                    let around = u.times(t1.weight).times(t.weight);
                    ag.relax(Item::new(q1, t1.src), around.times(inner));
                    ag.relax(Item::new(x, t.src), around.times(left));
                }
            }
        }
    }
    ag.beta
}

struct Agenda<'a, W> {
    alpha: &'a WeightTable<W>,
    beta: WeightTable<W>,
    queue: VecDeque<Item>,
    queued: FxHashSet<Item>,
}

impl<W: Semiring> Agenda<'_, W> {
    fn relax(&mut self, item: Item, w: W) {
        if w.is_zero() || !self.alpha.contains(item.from, item.to) {
            return;
        }
        let improved = match self.beta.get(item.from, item.to) {
            Some(old) => old.plus(w) != old,
            None => true,
        };
        if improved {
            self.beta.insert(item.from, item.to, w);
            if self.queued.insert(item) {
                self.queue.push_back(item);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile_string, intersect};
    use crate::fixtures;
    use crate::inference::inside;
    use crate::semiring::Tropical;

    #[test]
    fn h2trap_outside_weights() {
        let m = fixtures::h2trap::<Tropical>();
        let alpha = inside(&m).unwrap().table;
        let beta = outside(&m, &alpha);
        let expected = [
            ((0, 0), 3),
            ((0, 6), 1),
            ((0, 9), 0),
            ((1, 1), 3),
            ((1, 2), 2),
            ((1, 3), 4),
            ((1, 4), 1),
            ((1, 5), 4),
            ((1, 7), 4),
            ((1, 8), 4),
        ];
        for ((a, b), w) in expected {
            assert_eq!(beta.weight(a, b), Tropical::from(w), "{a}~>{b}");
        }
        assert_eq!(beta.len(), expected.len());
    }

    #[test]
    fn inside_times_outside_on_the_best_path() {
        let m = fixtures::h2trap::<Tropical>();
        let alpha = inside(&m).unwrap().table;
        let beta = outside(&m, &alpha);
        let best = alpha.weight(0, 9);
        for (item, b) in beta.iter() {
            let through = alpha.weight(item.from, item.to).times(b);
            assert!(best.nat_leq(through));
        }
        for (a, b) in [(0, 0), (1, 1), (1, 2), (1, 4), (0, 6), (0, 9)] {
            assert_eq!(alpha.weight(a, b).times(beta.weight(a, b)), best);
        }
    }

    #[test]
    fn empty_without_accepting_path() {
        let a = compile_string(&["a", "a", "b"], &["a", "b"]).unwrap();
        let p = intersect(&fixtures::anbn::<Tropical>(), &a).unwrap();
        let alpha = inside(&p).unwrap().table;
        assert!(outside(&p, &alpha).is_empty());
    }
}
