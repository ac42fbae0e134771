use std::collections::BinaryHeap;

use rustc_hash::FxHashSet;

use crate::semiring::{MinKey, Semiring};

/// Result of [`lazy_pair_merge`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairMerge<W> {
    /// `(i, j, a_i * b_j)`, zero-based, best first.
    pub pairs: Vec<(usize, usize, W)>,
    pub pops: usize,
    pub pushes: usize,
    /// Fewer than `k` pairs exist.
    pub exhausted: bool,
}

/// The `k` best pairs of `A x B` ordered by `a * b`, where `a(i)` and `b(j)`
/// yield the `i`-th and `j`-th elements of two nondecreasing sequences (or
/// `None` past their end). Elements are requested only when a pair that
/// needs them is about to be queued.
///
/// A pair `(i+1, j)` or `(i, j+1)` is never better than `(i, j)`, so both
/// are queued only once `(i, j)` has been popped.
pub fn lazy_pair_merge<W: Semiring>(
    mut a: impl FnMut(usize) -> Option<W>,
    mut b: impl FnMut(usize) -> Option<W>,
    k: usize,
) -> PairMerge<W> {
    let mut out = PairMerge {
        pairs: Vec::with_capacity(k),
        pops: 0,
        pushes: 0,
        exhausted: false,
    };
    let mut heap: BinaryHeap<(MinKey<W>, usize, usize)> = BinaryHeap::new();
    let mut queued: FxHashSet<(usize, usize)> = FxHashSet::default();
    let mut seq = 0;
    let mut push = |heap: &mut BinaryHeap<_>, out: &mut PairMerge<W>, i: usize, j: usize| {
        if !queued.insert((i, j)) {
            return;
        }
        if let (Some(x), Some(y)) = (a(i), b(j)) {
            heap.push((
                MinKey {
                    priority: x.times(y),
                    seq,
                },
                i,
                j,
            ));
            seq += 1;
            out.pushes += 1;
        }
    };
    if k > 0 {
        push(&mut heap, &mut out, 0, 0);
    }
    while out.pairs.len() < k {
        let Some((key, i, j)) = heap.pop() else {
            out.exhausted = true;
            break;
        };
        out.pops += 1;
        out.pairs.push((i, j, key.priority));
        push(&mut heap, &mut out, i + 1, j);
        push(&mut heap, &mut out, i, j + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Tropical;
    use proptest::prelude::*;

    fn source(v: &[i32]) -> impl FnMut(usize) -> Option<Tropical> + '_ {
        move |i| v.get(i).map(|&x| Tropical::from(x))
    }

    fn values(a: &[i32], b: &[i32], m: &PairMerge<Tropical>) -> Vec<(i32, i32)> {
        m.pairs.iter().map(|&(i, j, _)| (a[i], b[j])).collect()
    }

    #[test]
    fn three_best() {
        let (a, b) = ([0, 2, 2], [1, 2, 4]);
        let m = lazy_pair_merge(source(&a), source(&b), 3);
        assert_eq!(values(&a, &b, &m), vec![(0, 1), (0, 2), (2, 1)]);
        assert!(m.pops <= 6);
        assert!(!m.exhausted);
    }

    #[test]
    fn first_pair_is_the_heads() {
        let (a, b) = ([3, 5], [-1, 8]);
        let m = lazy_pair_merge(source(&a), source(&b), 1);
        assert_eq!(values(&a, &b, &m), vec![(3, -1)]);
    }

    #[test]
    fn singletons_run_out() {
        let m = lazy_pair_merge(source(&[1]), source(&[1]), 5);
        assert_eq!(m.pairs, vec![(0, 0, Tropical::from(2))]);
        assert!(m.exhausted);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_sorting_and_stays_within_2k(
            mut a in prop::collection::vec(-20i32..20, 0..12),
            mut b in prop::collection::vec(-20i32..20, 0..12),
            k in 1usize..40,
        ) {
            a.sort();
            b.sort();
            let m = lazy_pair_merge(source(&a), source(&b), k);
            let mut all: Vec<i32> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
            all.sort();
            all.truncate(k);
            let got: Vec<i32> = m.pairs.iter().map(|p| p.2.value() as i32).collect();
            prop_assert_eq!(got, all);
            prop_assert!(m.pops <= 2 * k);
            prop_assert!(m.pushes <= 2 * k + 1);
            prop_assert_eq!(m.exhausted, a.len() * b.len() < k);
        }
    }
}
