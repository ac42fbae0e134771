//! Reference implementations used to check the searches.
//!
//! None of these are meant to be fast. [`expand`] builds the finite acceptor
//! over `(state, stack)` configurations, [`wfsa_kshortest`] finds k shortest
//! paths in an acceptor, and [`brute_force_kshortest`] enumerates every
//! accepting path up to a length bound.

use std::collections::{BinaryHeap, VecDeque};
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::automata::{Arc, Label, ParenId, Path, StateId, TransitionId, Wfsa, Wpda};
use crate::error::{Error, Result};
use crate::kpaths::{KPathResult, ScoredPath, SearchStats};
use crate::semiring::{Keyed, MinKey, Semiring};

#[derive(Debug, Clone, Copy)]
pub struct ExpandOptions {
    pub depth_limit: usize,
    pub config_limit: usize,
    /// Stop with [`Error::LimitExceeded`] when this instant passes.
    pub deadline: Option<Instant>,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            depth_limit: 1024,
            config_limit: 10_000_000,
            deadline: None,
        }
    }
}

/// An acceptor over configurations, with the pushdown transition behind
/// every arc.
#[derive(Debug, Clone)]
pub struct Expansion<W> {
    pub wfsa: Wfsa<W>,
    pub arc_origin: Vec<TransitionId>,
    /// `(state, stack id)` per acceptor state; stack 0 is empty.
    pub configurations: Vec<(StateId, u32)>,
}

impl<W: Semiring> Expansion<W> {
    pub fn to_wpda_path(&self, arcs: &[u32]) -> Path {
        Path(arcs.iter().map(|&a| self.arc_origin[a as usize]).collect())
    }
}

/// Naive expansion. Input and epsilon transitions keep the stack, opens
/// push, closes pop when they match the top. Open and close transitions
/// become epsilon arcs with their weight.
pub fn expand<W: Semiring>(wpda: &Wpda<W>, opts: ExpandOptions) -> Result<Expansion<W>> {
    // Stack i > 0 is `(parent, paren, depth)`; structurally shared.
    let mut stacks: Vec<(u32, ParenId, usize)> = vec![(0, ParenId(u32::MAX), 0)];
    let mut stack_ids: FxHashMap<(u32, ParenId), u32> = FxHashMap::default();
    let mut ids: FxHashMap<(StateId, u32), StateId> = FxHashMap::default();
    let mut configs: Vec<(StateId, u32)> = Vec::new();
    let mut arcs = Vec::new();
    let mut arc_origin = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |cfg: (StateId, u32),
                      configs: &mut Vec<(StateId, u32)>,
                      queue: &mut VecDeque<StateId>|
     -> Result<StateId> {
        if let Some(&id) = ids.get(&cfg) {
            return Ok(id);
        }
        if configs.len() >= opts.config_limit {
            return Err(Error::LimitExceeded(format!(
                "expansion exceeded {} configurations",
                opts.config_limit
            )));
        }
        let id = configs.len() as StateId;
        ids.insert(cfg, id);
        configs.push(cfg);
        queue.push_back(id);
        Ok(id)
    };

    let start = intern((wpda.start(), 0), &mut configs, &mut queue)?;
    while let Some(id) = queue.pop_front() {
        if id % 4096 == 0 {
            if let Some(deadline) = opts.deadline {
                if Instant::now() > deadline {
                    return Err(Error::LimitExceeded("expansion ran out of time".into()));
                }
            }
        }
        let (q, st) = configs[id as usize];
        for &e in wpda.out_scan(q) {
            let t = wpda.transition(e);
            let dst = intern((t.dst, st), &mut configs, &mut queue)?;
            arcs.push(Arc {
                src: id,
                label: match t.label {
                    Label::Input(s) => Some(s),
                    _ => None,
                },
                weight: t.weight,
                dst,
            });
            arc_origin.push(e);
        }
        let (parent, top, depth) = stacks[st as usize];
        if st != 0 {
            for &e in wpda.out_close_with(q, top) {
                let t = wpda.transition(e);
                let dst = intern((t.dst, parent), &mut configs, &mut queue)?;
                arcs.push(Arc {
                    src: id,
                    label: None,
                    weight: t.weight,
                    dst,
                });
                arc_origin.push(e);
            }
        }
        for &e in wpda.out_open(q) {
            if depth + 1 > opts.depth_limit {
                return Err(Error::LimitExceeded(format!(
                    "stack deeper than {}",
                    opts.depth_limit
                )));
            }
            let paren = wpda.paren_raw(e);
            let pushed = *stack_ids.entry((st, paren)).or_insert_with(|| {
                stacks.push((st, paren, depth + 1));
                stacks.len() as u32 - 1
            });
            let t = wpda.transition(e);
            let dst = intern((t.dst, pushed), &mut configs, &mut queue)?;
            arcs.push(Arc {
                src: id,
                label: None,
                weight: t.weight,
                dst,
            });
            arc_origin.push(e);
        }
    }
    let finals = ids
        .get(&(wpda.final_state(), 0))
        .map(|&f| vec![(f, W::one())])
        .unwrap_or_default();
    Ok(Expansion {
        wfsa: Wfsa {
            num_states: configs.len(),
            arcs,
            start,
            finals,
            symbols: wpda.symbols().clone(),
        },
        arc_origin,
        configurations: configs,
    })
}

/// Weighted arc-id sequences, best first.
pub type ArcPaths<W> = Vec<(W, Vec<u32>)>;

/// k shortest accepting paths of an acceptor as arc-id sequences, with
/// their weights including the final weight. The second component is true
/// when fewer than `k` exist.
///
/// A* with the exact distance-to-final as heuristic; each state is expanded
/// at most `k` times.
pub fn wfsa_kshortest<W: Semiring>(wfsa: &Wfsa<W>, k: usize) -> Result<(ArcPaths<W>, bool)> {
    let n = wfsa.num_states;
    // Distance to a final state, by label-correcting relaxation.
    let mut h = vec![W::zero(); n];
    let mut incoming = vec![Vec::new(); n];
    for (i, a) in wfsa.arcs.iter().enumerate() {
        incoming[a.dst as usize].push(i as u32);
    }
    let mut queue = VecDeque::new();
    let mut queued = vec![false; n];
    for &(f, w) in &wfsa.finals {
        h[f as usize] = h[f as usize].plus(w);
        if !queued[f as usize] {
            queued[f as usize] = true;
            queue.push_back(f);
        }
    }
    let cap = (n as u64 + 1) * (wfsa.arcs.len() as u64 + 1) + 16;
    let mut relaxations = 0u64;
    while let Some(v) = queue.pop_front() {
        queued[v as usize] = false;
        for &ai in &incoming[v as usize] {
            relaxations += 1;
            if relaxations > cap {
                return Err(Error::NonTerminating(cap));
            }
            let a = &wfsa.arcs[ai as usize];
            let cand = a.weight.times(h[v as usize]);
            let old = h[a.src as usize];
            if old.plus(cand) != old {
                h[a.src as usize] = cand;
                if !queued[a.src as usize] {
                    queued[a.src as usize] = true;
                    queue.push_back(a.src);
                }
            }
        }
    }

    let out_arcs = wfsa.out_arcs();
    let mut final_weight = vec![W::zero(); n];
    for &(f, w) in &wfsa.finals {
        final_weight[f as usize] = final_weight[f as usize].plus(w);
    }
    // Search tree of partial paths: (parent node, arc).
    let mut tree: Vec<(u32, u32)> = Vec::new();
    let mut heap: BinaryHeap<Keyed<W, (u32, StateId, W, bool)>> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut pops = vec![0usize; n];
    let mut found = Vec::new();
    const ROOT: u32 = u32::MAX;
    let s = wfsa.start;
    if k > 0 && !h[s as usize].is_zero() {
        heap.push(Keyed {
            key: MinKey {
                priority: h[s as usize],
                seq,
            },
            value: (ROOT, s, W::one(), false),
        });
        seq += 1;
    }
    while let Some(Keyed {
        key,
        value: (node, q, g, done),
    }) = heap.pop()
    {
        if done {
            let mut arcs = Vec::new();
            let mut cur = node;
            while cur != ROOT {
                let (parent, arc) = tree[cur as usize];
                arcs.push(arc);
                cur = parent;
            }
            arcs.reverse();
            found.push((key.priority, arcs));
            if found.len() == k {
                break;
            }
            continue;
        }
        if pops[q as usize] >= k {
            continue;
        }
        pops[q as usize] += 1;
        let fw = final_weight[q as usize];
        if !fw.is_zero() {
            heap.push(Keyed {
                key: MinKey {
                    priority: g.times(fw),
                    seq,
                },
                value: (node, q, g.times(fw), true),
            });
            seq += 1;
        }
        for &ai in &out_arcs[q as usize] {
            let a = &wfsa.arcs[ai as usize];
            let hv = h[a.dst as usize];
            if hv.is_zero() {
                continue;
            }
            let g2 = g.times(a.weight);
            tree.push((node, ai));
            let child = tree.len() as u32 - 1;
            heap.push(Keyed {
                key: MinKey {
                    priority: g2.times(hv),
                    seq,
                },
                value: (child, a.dst, g2, false),
            });
            seq += 1;
        }
    }
    let exhausted = found.len() < k;
    Ok((found, exhausted))
}

/// Expands `wpda` and returns its k shortest accepting paths, mapped back to
/// pushdown transitions.
pub fn expand_kshortest<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    opts: ExpandOptions,
) -> Result<KPathResult<W>> {
    let started = Instant::now();
    let exp = expand(wpda, opts)?;
    let precompute = started.elapsed();
    let (found, exhausted) = wfsa_kshortest(&exp.wfsa, k)?;
    Ok(KPathResult {
        paths: found
            .into_iter()
            .map(|(weight, arcs)| ScoredPath {
                weight,
                path: exp.to_wpda_path(&arcs),
            })
            .collect(),
        exhausted,
        stats: SearchStats {
            precompute,
            search: started.elapsed() - precompute,
            ..Default::default()
        },
    })
}

/// Every accepting path with at most `max_len` transitions, sorted by weight
/// (stable, so ties stay in depth-first discovery order) and cut to `k`.
/// Fails when more than `max_paths` accepting paths are found.
pub fn brute_force_kshortest<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    max_len: usize,
    max_paths: usize,
) -> Result<KPathResult<W>> {
    struct Dfs<'a, W> {
        wpda: &'a Wpda<W>,
        max_len: usize,
        max_paths: usize,
        path: Vec<TransitionId>,
        stack: Vec<ParenId>,
        found: Vec<(W, Vec<TransitionId>)>,
    }
    impl<W: Semiring> Dfs<'_, W> {
        fn visit(&mut self, q: StateId, w: W) -> Result<()> {
            if q == self.wpda.final_state() && self.stack.is_empty() {
                if self.found.len() >= self.max_paths {
                    return Err(Error::LimitExceeded(format!(
                        "more than {} accepting paths",
                        self.max_paths
                    )));
                }
                self.found.push((w, self.path.clone()));
            }
            if self.path.len() >= self.max_len {
                return Ok(());
            }
            let wpda = self.wpda;
            for &e in wpda.out_scan(q) {
                self.step(e, w)?;
            }
            for &e in wpda.out_open(q) {
                self.stack.push(wpda.paren_raw(e));
                self.step(e, w)?;
                self.stack.pop();
            }
            if let Some(&top) = self.stack.last() {
                for &e in wpda.out_close_with(q, top) {
                    self.stack.pop();
                    self.step(e, w)?;
                    self.stack.push(top);
                }
            }
            Ok(())
        }

        fn step(&mut self, e: TransitionId, w: W) -> Result<()> {
            let t = self.wpda.transition(e);
            self.path.push(e);
            let r = self.visit(t.dst, w.times(t.weight));
            self.path.pop();
            r
        }
    }
    let mut dfs = Dfs {
        wpda,
        max_len,
        max_paths,
        path: Vec::new(),
        stack: Vec::new(),
        found: Vec::new(),
    };
    dfs.visit(wpda.start(), W::one())?;
    let mut found = dfs.found;
    found.sort_by(|a, b| a.0.nat_cmp(b.0));
    let exhausted = found.len() < k;
    found.truncate(k);
    Ok(KPathResult {
        paths: found
            .into_iter()
            .map(|(weight, p)| ScoredPath {
                weight,
                path: Path(p),
            })
            .collect(),
        exhausted,
        stats: SearchStats::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile_string, intersect, WpdaBuilder};
    use crate::fixtures;
    use crate::semiring::Tropical;

    fn t(v: i32) -> Tropical {
        Tropical::from(v)
    }

    #[test]
    fn expansion_of_nested_has_one_path() {
        let m = fixtures::nested::<Tropical>();
        let exp = expand(&m, ExpandOptions::default()).unwrap();
        let (found, exhausted) = wfsa_kshortest(&exp.wfsa, 3).unwrap();
        assert_eq!(found.len(), 1);
        assert!(exhausted);
        assert_eq!(found[0].0, Tropical::one());
        let path = exp.to_wpda_path(&found[0].1);
        assert!(m.is_accepting(&path));
    }

    #[test]
    fn expansion_of_h2trap() {
        let m = fixtures::h2trap::<Tropical>();
        let r = expand_kshortest(&m, 2, ExpandOptions::default()).unwrap();
        assert_eq!(r.weights(), vec![t(3), t(4)]);
        assert!(r.paths.iter().all(|p| m.is_accepting(&p.path)));
    }

    #[test]
    fn paren_free_expansion_is_a_copy() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.arc(0, "a", 1, 1).arc(1, "b", 2, 2).arc(0, "<eps>", 5, 2);
        let m = b.build(0, 2).unwrap();
        let exp = expand(&m, ExpandOptions::default()).unwrap();
        assert_eq!(exp.wfsa.num_states, 3);
        assert_eq!(exp.wfsa.arcs.len(), 3);
        assert!(exp.configurations.iter().all(|&(_, st)| st == 0));
        let labels: Vec<_> = exp
            .wfsa
            .arcs
            .iter()
            .map(|a| exp.wfsa.label_text(a.label))
            .collect();
        assert_eq!(labels, ["a", "<eps>", "b"]);
    }

    #[test]
    fn expansion_of_unbounded_hits_a_limit() {
        let opts = ExpandOptions {
            depth_limit: 50,
            config_limit: 1000,
            deadline: None,
        };
        assert!(matches!(
            expand(&fixtures::anbn::<Tropical>(), opts),
            Err(Error::LimitExceeded(_))
        ));
    }

    #[test]
    fn linear_chain_has_one_path() {
        let a = compile_string::<Tropical>(&["a", "b", "c"], &["a", "b", "c"]).unwrap();
        let (found, exhausted) = wfsa_kshortest(&a, 4).unwrap();
        assert_eq!(found, vec![(Tropical::one(), vec![0, 1, 2])]);
        assert!(exhausted);
    }

    #[test]
    fn brute_force_examples() {
        let h = fixtures::h2trap::<Tropical>();
        let r = brute_force_kshortest(&h, 10, 16, 100).unwrap();
        assert_eq!(r.weights(), vec![t(3), t(4)]);

        let f3 = fixtures::nested::<Tropical>();
        let r = brute_force_kshortest(&f3, 10, 16, 100).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(
            f3.yield_tokens(&r.paths[0].path, false),
            ["a", "a", "b", "b"]
        );

        let aab = compile_string(&["a", "a", "b"], &["a", "b"]).unwrap();
        let p = intersect(&fixtures::anbn::<Tropical>(), &aab).unwrap();
        assert!(brute_force_kshortest(&p, 10, 16, 100).unwrap().is_empty());
    }

    #[test]
    fn brute_force_limit() {
        let h = fixtures::h2trap::<Tropical>();
        assert!(matches!(
            brute_force_kshortest(&h, 10, 16, 1),
            Err(Error::LimitExceeded(_))
        ));
    }

    /// Several accepting paths through a cycle: k shortest by weight.
    #[test]
    fn cyclic_acceptor() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.arc(0, "a", 1, 1).arc(1, "b", 2, 0);
        let m = b.build(0, 1).unwrap();
        let r = expand_kshortest(&m, 3, ExpandOptions::default()).unwrap();
        assert_eq!(r.weights(), vec![t(1), t(4), t(7)]);
        let bf = brute_force_kshortest(&m, 3, 7, 100).unwrap();
        assert_eq!(bf.weights(), r.weights());
    }
}
