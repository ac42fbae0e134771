use crate::automata::{Path, StateId, TransitionId};
use crate::error::{Error, Result};

use super::Item;

/// Index of a node in a [`DerivationArena`].
pub type DerivId = u32;

/// One proof step. Antecedents are arena indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivation {
    Axiom {
        state: StateId,
    },
    Scan {
        antecedent: DerivId,
        side: TransitionId,
    },
    Complete {
        left: DerivId,
        open: TransitionId,
        right: DerivId,
        close: TransitionId,
    },
    /// A completion whose inner antecedent is the `rank`-th best balanced
    /// path of `subproblem`, not yet computed.
    Promise {
        subproblem: (StateId, StateId),
        rank: u32,
        left: DerivId,
        open: TransitionId,
        close: TransitionId,
    },
}

/// A proved item together with its weight and proof.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instantiation<W> {
    pub item: Item,
    pub weight: W,
    pub derivation: DerivId,
}

/// Append-only store of proof nodes shared between proofs.
#[derive(Debug, Clone, Default)]
pub struct DerivationArena {
    nodes: Vec<Derivation>,
}

impl DerivationArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Derivation) -> DerivId {
        let id = self.nodes.len() as DerivId;
        self.nodes.push(node);
        id
    }

    pub fn get(&self, id: DerivId) -> Derivation {
        self.nodes[id as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Turns a promise into the completion it stood for.
    ///
    /// # Panics
    /// If `id` is not a promise.
    pub fn resolve(&mut self, id: DerivId, right: DerivId) {
        match self.nodes[id as usize] {
            Derivation::Promise {
                left, open, close, ..
            } => {
                self.nodes[id as usize] = Derivation::Complete {
                    left,
                    open,
                    right,
                    close,
                }
            }
            other => panic!("node {id} is not a promise: {other:?}"),
        }
    }

    /// Reads the side-condition transitions off the proof in left-to-right
    /// post-order: a completion contributes `left`, `open`, `right`, `close`.
    pub fn extract_path(&self, id: DerivId) -> Result<Path> {
        enum Step {
            Visit(DerivId),
            Emit(TransitionId),
        }
        let mut out = Vec::new();
        let mut work = vec![Step::Visit(id)];
        while let Some(step) = work.pop() {
            match step {
                Step::Emit(e) => out.push(e),
                Step::Visit(d) => match self.get(d) {
                    Derivation::Axiom { .. } => {}
                    Derivation::Scan { antecedent, side } => {
                        work.push(Step::Emit(side));
                        work.push(Step::Visit(antecedent));
                    }
                    Derivation::Complete {
                        left,
                        open,
                        right,
                        close,
                    } => {
                        work.push(Step::Emit(close));
                        work.push(Step::Visit(right));
                        work.push(Step::Emit(open));
                        work.push(Step::Visit(left));
                    }
                    Derivation::Promise { .. } => return Err(Error::UnresolvedPromise),
                },
            }
        }
        Ok(Path(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semiring::{Semiring, Tropical};

    /// The proof of "aabb" through the a^n b^n automaton. Side conditions
    /// are numbered in the order the proof tree introduces them.
    #[test]
    fn proof_of_aabb_reads_off_in_post_order() {
        let m = fixtures::anbn::<Tropical>();
        // Transition ids: 0 q1-(q2, 1 q1-b q3, 2 q2-a q1, 3 q3-)q4, 4 q4-b q3.
        let (open, b13, a21, close, b43) = (0, 1, 2, 3, 4);
        let step = [u32::MAX, a21, a21, b13, open, close, b43, open, close];

        let mut arena = DerivationArena::new();
        let q1 = arena.push(Derivation::Axiom { state: 0 });
        let q2_a = arena.push(Derivation::Axiom { state: 1 });
        let s1 = arena.push(Derivation::Scan {
            antecedent: q2_a,
            side: step[1],
        });
        let q2_b = arena.push(Derivation::Axiom { state: 1 });
        let s2 = arena.push(Derivation::Scan {
            antecedent: q2_b,
            side: step[2],
        });
        let s3 = arena.push(Derivation::Scan {
            antecedent: s2,
            side: step[3],
        });
        let inner = arena.push(Derivation::Complete {
            left: s1,
            open: step[4],
            right: s3,
            close: step[5],
        });
        let s6 = arena.push(Derivation::Scan {
            antecedent: inner,
            side: step[6],
        });
        let root = arena.push(Derivation::Complete {
            left: q1,
            open: step[7],
            right: s6,
            close: step[8],
        });

        let path = arena.extract_path(root).unwrap();
        let expected: Vec<u32> = [7, 1, 4, 2, 3, 5, 6, 8].iter().map(|&i| step[i]).collect();
        assert_eq!(path.0, expected);
        assert!(m.is_accepting(&path));
        assert_eq!(m.yield_tokens(&path, false), ["a", "a", "b", "b"]);
        assert_eq!(m.path_weight(&path), Tropical::one());
    }

    #[test]
    fn axiom_and_single_scan() {
        let mut arena = DerivationArena::new();
        let ax = arena.push(Derivation::Axiom { state: 3 });
        assert!(arena.extract_path(ax).unwrap().is_empty());
        let sc = arena.push(Derivation::Scan {
            antecedent: ax,
            side: 9,
        });
        assert_eq!(arena.extract_path(sc).unwrap().0, vec![9]);
    }

    #[test]
    fn promises_must_be_resolved() {
        let mut arena = DerivationArena::new();
        let ax = arena.push(Derivation::Axiom { state: 0 });
        let p = arena.push(Derivation::Promise {
            subproblem: (1, 2),
            rank: 1,
            left: ax,
            open: 0,
            close: 3,
        });
        assert!(matches!(
            arena.extract_path(p),
            Err(Error::UnresolvedPromise)
        ));
        let inner = arena.push(Derivation::Axiom { state: 1 });
        arena.resolve(p, inner);
        assert_eq!(arena.extract_path(p).unwrap().0, vec![0, 3]);
    }
}
