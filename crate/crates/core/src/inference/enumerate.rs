use std::collections::BinaryHeap;

use crate::automata::Wpda;
use crate::error::{Error, Result};
use crate::semiring::{MinKey, Semiring};

use super::chart::Chart;
use super::{entering_states, Derivation, DerivationArena, Instantiation, Item};

/// Every distinct proof of `s ~> f` whose weight does not exceed `bound`, in
/// nondecreasing weight order.
///
/// Runs the agenda without any per-item limit, so every proof of every item
/// below the bound is built. Requires nondecreasing weights, which make the
/// bound a valid cut. Fails with [`Error::LimitExceeded`] once more than
/// `max_proofs` instantiations have been proved.
pub fn enumerate_derivations<W: Semiring>(
    wpda: &Wpda<W>,
    bound: W,
    max_proofs: usize,
) -> Result<(Vec<Instantiation<W>>, DerivationArena)> {
    if !wpda.nondecreasing_times() {
        return Err(Error::LimitExceeded(
            "weight-bounded enumeration needs nondecreasing weights".into(),
        ));
    }
    let goal = Item::new(wpda.start(), wpda.final_state());
    let mut arena = DerivationArena::new();
    let mut chart = Chart::new();
    let mut queue: BinaryHeap<(MinKey<W>, Item, u32)> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |queue: &mut BinaryHeap<_>, arena: &mut DerivationArena, item, w: W, d| {
        if w.is_zero() || !w.nat_leq(bound) {
            return;
        }
        let id = arena.push(d);
        queue.push((MinKey { priority: w, seq }, item, id));
        seq += 1;
    };
    for q in entering_states(wpda) {
        push(
            &mut queue,
            &mut arena,
            Item::new(q, q),
            W::one(),
            Derivation::Axiom { state: q },
        );
    }
    let mut goals = Vec::new();
    while let Some((key, item, derivation)) = queue.pop() {
        if chart.len() >= max_proofs {
            return Err(Error::LimitExceeded(format!(
                "more than {max_proofs} proofs below the bound"
            )));
        }
        let inst = Instantiation {
            item,
            weight: key.priority,
            derivation,
        };
        if item == goal {
            goals.push(inst);
        }
        let id = chart.add(inst);
        let mut fresh = Vec::new();
        chart.consequents(wpda, id, |item, w, d| fresh.push((item, w, d)));
        for (item, w, d) in fresh {
            push(&mut queue, &mut arena, item, w, d);
        }
    }
    Ok((goals, arena))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semiring::Tropical;

    #[test]
    fn h2trap_has_two_proofs() {
        let m = fixtures::h2trap::<Tropical>();
        let (goals, arena) = enumerate_derivations(&m, Tropical::from(10), 10_000).unwrap();
        let weights: Vec<_> = goals.iter().map(|g| g.weight).collect();
        assert_eq!(weights, vec![Tropical::from(3), Tropical::from(4)]);
        for g in &goals {
            let p = arena.extract_path(g.derivation).unwrap();
            assert!(m.is_accepting(&p));
            assert_eq!(m.path_weight(&p), g.weight);
        }
        let (below, _) = enumerate_derivations(&m, Tropical::from(3), 10_000).unwrap();
        assert_eq!(below.len(), 1);
    }

    #[test]
    fn limit_is_enforced() {
        let m = fixtures::h2trap::<Tropical>();
        assert!(matches!(
            enumerate_derivations(&m, Tropical::from(10), 3),
            Err(Error::LimitExceeded(_))
        ));
    }
}
