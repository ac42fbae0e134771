use crate::automata::{reverse, StateId, Wpda};
use crate::error::Result;
use crate::semiring::Semiring;

use super::{exiting_states, inside_with, InsideOptions, Item, WeightTable};

/// Reverse inside weights `D(r, q)`: the best balanced path from `r` to `q`,
/// for every `q` that is an exiting state or the final state.
///
/// Computed as the inside weights of the reversed automaton, whose entering
/// states are exactly those targets. The table is keyed `(r, q)`, so
/// [`WeightTable::tos_from`] lists the targets reachable from `r`.
pub fn reverse_inside<W: Semiring>(wpda: &Wpda<W>) -> Result<WeightTable<W>> {
    reverse_inside_with(wpda, InsideOptions::default())
}

pub fn reverse_inside_with<W: Semiring>(
    wpda: &Wpda<W>,
    opts: InsideOptions,
) -> Result<WeightTable<W>> {
    let rev = reverse(wpda);
    let alpha = inside_with(
        &rev,
        InsideOptions {
            keep_backpointers: false,
            ..opts
        },
    )?
    .table;
    let mut d = WeightTable::new(wpda.num_states());
    let mut entries: Vec<(Item, W)> = alpha.iter().collect();
    // Deterministic index order.
    entries.sort_unstable_by_key(|&(i, _)| (i.to, i.from));
    for (item, w) in entries {
        d.insert(item.to, item.from, w);
    }
    Ok(d)
}

/// Exit distances: `γ[q1 ~> q2]` is the best `D(q2, x)` over exiting states
/// `x`, also counting `D(q2, f)` when `q1` is the start state.
///
/// `γ` depends on `q1` only through that last clause, so it is stored as two
/// vectors indexed by `q2`.
#[derive(Debug, Clone)]
pub struct Gamma<W> {
    start: StateId,
    from_start: Vec<W>,
    other: Vec<W>,
}

impl<W: Semiring> Gamma<W> {
    #[inline]
    pub fn get(&self, from: StateId, to: StateId) -> W {
        if from == self.start {
            self.from_start[to as usize]
        } else {
            self.other[to as usize]
        }
    }

    /// `γ` for every item of `items`, dropping zero entries.
    pub fn to_table(&self, items: &WeightTable<W>) -> WeightTable<W> {
        let mut t = WeightTable::new(items.num_states());
        for (item, _) in items.sorted() {
            t.insert(item.from, item.to, self.get(item.from, item.to));
        }
        t
    }
}

pub fn gamma<W: Semiring>(wpda: &Wpda<W>, d: &WeightTable<W>) -> Gamma<W> {
    let n = wpda.num_states();
    let mut is_exit = vec![false; n];
    for x in exiting_states(wpda) {
        is_exit[x as usize] = true;
    }
    let f = wpda.final_state();
    let mut other = vec![W::zero(); n];
    let mut from_start = vec![W::zero(); n];
    for q in 0..n as StateId {
        let mut best = W::zero();
        for &x in d.tos_from(q) {
            if is_exit[x as usize] {
                best = best.plus(d.weight(q, x));
            }
        }
        other[q as usize] = best;
        from_start[q as usize] = best.plus(d.weight(q, f));
    }
    Gamma {
        start: wpda.start(),
        from_start,
        other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::inference::inside;
    use crate::semiring::Tropical;

    #[test]
    fn h2trap_reverse_inside() {
        let m = fixtures::h2trap::<Tropical>();
        let d = reverse_inside(&m).unwrap();
        let expected = [
            ((0, 9), 3),
            ((1, 4), 2),
            ((2, 4), 1),
            ((4, 4), 0),
            ((1, 8), 0),
            ((3, 8), 0),
            ((5, 8), 0),
            ((7, 8), 0),
            ((8, 8), 0),
        ];
        for ((r, q), w) in expected {
            assert_eq!(d.get(r, q), Some(Tropical::from(w)), "D({r},{q})");
        }
        assert_eq!(d.get(0, 4), None);
        assert_eq!(d.weight(0, 4), Tropical::zero());
    }

    #[test]
    fn h2trap_gamma() {
        let m = fixtures::h2trap::<Tropical>();
        let d = reverse_inside(&m).unwrap();
        let g = gamma(&m, &d);
        let expected = [
            ((0, 0), 3),
            ((0, 6), 1),
            ((0, 9), 0),
            ((1, 1), 0),
            ((1, 2), 1),
            ((1, 3), 0),
            ((1, 4), 0),
            ((1, 5), 0),
            ((1, 7), 0),
            ((1, 8), 0),
        ];
        for ((a, b), w) in expected {
            assert_eq!(g.get(a, b), Tropical::from(w), "{a}~>{b}");
        }
        let alpha = inside(&m).unwrap().table;
        assert_eq!(g.to_table(&alpha).len(), alpha.len());
    }

    /// D agrees with forward inside weights wherever both are defined.
    #[test]
    fn d_matches_forward_inside() {
        let m = fixtures::h2trap::<Tropical>();
        let d = reverse_inside(&m).unwrap();
        let alpha = inside(&m).unwrap().table;
        for (item, w) in alpha.iter() {
            if let Some(dw) = d.get(item.from, item.to) {
                assert_eq!(dw, w);
            }
        }
    }
}
