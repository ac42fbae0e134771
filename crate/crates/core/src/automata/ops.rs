use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::{Label, StateId, Transition, TransitionId, Wfsa, Wpda, WpdaParts};
use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// Flips every transition, swaps start and final, and exchanges each paren
/// with its partner. Weights are unchanged.
pub fn reverse<W: Semiring>(wpda: &Wpda<W>) -> Wpda<W> {
    let parens = wpda.parens();
    let transitions = wpda
        .transitions()
        .iter()
        .map(|t| {
            let label = match t.label {
                Label::Open(s) => Label::Close(parens.close(parens.open_id(s).expect("validated"))),
                Label::Close(s) => Label::Open(parens.open(parens.close_id(s).expect("validated"))),
                other => other,
            };
            Transition {
                src: t.dst,
                label,
                weight: t.weight,
                dst: t.src,
            }
        })
        .collect();
    Wpda::from_parts_unchecked(WpdaParts {
        num_states: wpda.num_states(),
        transitions,
        start: wpda.final_state(),
        final_state: wpda.start(),
        parens: parens.pairs().to_vec(),
        input_alphabet: wpda.input_alphabet().clone(),
        symbols: wpda.symbols().clone(),
    })
}

/// Product of a pushdown automaton with an acceptor, plus provenance.
#[derive(Debug, Clone)]
pub struct Intersection<W> {
    pub wpda: Wpda<W>,
    /// `(pda state, acceptor state)` of each product state; `None` for the
    /// super-final state.
    pub state_origin: Vec<Option<(StateId, StateId)>>,
    /// `(pda transition, acceptor arc)` of each product transition; both
    /// `None` for arcs into the super-final state.
    pub transition_origin: Vec<(Option<TransitionId>, Option<u32>)>,
}

pub fn intersect<W: Semiring>(wpda: &Wpda<W>, wfsa: &Wfsa<W>) -> Result<Wpda<W>> {
    intersect_with_origin(wpda, wfsa).map(|i| i.wpda)
}

/// Product construction over pairs reachable from the start pair, trimmed
/// to states that can also reach the final pair. States are numbered in
/// discovery order.
pub fn intersect_with_origin<W: Semiring>(
    wpda: &Wpda<W>,
    wfsa: &Wfsa<W>,
) -> Result<Intersection<W>> {
    if !wfsa.is_epsilon_free() {
        return Err(Error::EpsilonInOperand);
    }
    // Acceptor arcs by (state, pda symbol).
    let mut arcs_by: FxHashMap<(StateId, super::Symbol), Vec<u32>> = FxHashMap::default();
    for (i, arc) in wfsa.arcs.iter().enumerate() {
        let name = wfsa.symbols.name(arc.label.expect("epsilon-free"));
        let sym = wpda
            .symbols()
            .get(name)
            .filter(|s| wpda.input_alphabet().contains(s))
            .ok_or_else(|| Error::AlphabetMismatch(name.to_string()))?;
        arcs_by.entry((arc.src, sym)).or_default().push(i as u32);
    }
    let finals: Vec<(StateId, W)> = wfsa
        .finals
        .iter()
        .copied()
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let single_final = match finals.as_slice() {
        [(s, w)] if *w == W::one() => Some(*s),
        _ => None,
    };

    // Outgoing transitions in id order, so discovery order is deterministic.
    let mut out = vec![Vec::new(); wpda.num_states()];
    for (e, t) in wpda.transitions().iter().enumerate() {
        out[t.src as usize].push(e as TransitionId);
    }
    let mut index: FxHashMap<(StateId, StateId), StateId> = FxHashMap::default();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut transitions = Vec::new();
    let mut origin = Vec::new();
    let mut intern = |pair: (StateId, StateId),
                      pairs: &mut Vec<(StateId, StateId)>,
                      queue: &mut VecDeque<StateId>| {
        *index.entry(pair).or_insert_with(|| {
            let id = pairs.len() as StateId;
            pairs.push(pair);
            queue.push_back(id);
            id
        })
    };
    intern((wpda.start(), wfsa.start), &mut pairs, &mut queue);
    while let Some(id) = queue.pop_front() {
        let (q, s) = pairs[id as usize];
        for &e in &out[q as usize] {
            let t = wpda.transition(e);
            match t.label {
                Label::Input(sym) => {
                    let Some(arcs) = arcs_by.get(&(s, sym)) else {
                        continue;
                    };
                    for &a in arcs {
                        let arc = &wfsa.arcs[a as usize];
                        let dst = intern((t.dst, arc.dst), &mut pairs, &mut queue);
                        transitions.push(Transition {
                            src: id,
                            label: t.label,
                            weight: t.weight.times(arc.weight),
                            dst,
                        });
                        origin.push((Some(e), Some(a)));
                    }
                }
                _ => {
                    let dst = intern((t.dst, s), &mut pairs, &mut queue);
                    transitions.push(Transition {
                        src: id,
                        label: t.label,
                        weight: t.weight,
                        dst,
                    });
                    origin.push((Some(e), None));
                }
            }
        }
    }

    let mut state_origin: Vec<Option<(StateId, StateId)>> =
        pairs.iter().copied().map(Some).collect();
    let final_state = match single_final {
        Some(sf) => index.get(&(wpda.final_state(), sf)).copied(),
        None => {
            let sink = state_origin.len() as StateId;
            state_origin.push(None);
            for &(sf, w) in &finals {
                if let Some(&from) = index.get(&(wpda.final_state(), sf)) {
                    transitions.push(Transition {
                        src: from,
                        label: Label::Epsilon,
                        weight: w,
                        dst: sink,
                    });
                    origin.push((None, None));
                }
            }
            Some(sink)
        }
    };

    // Trim to states that reach the final state.
    let n = state_origin.len();
    let mut live = vec![false; n];
    if let Some(f) = final_state {
        let mut preds = vec![Vec::new(); n];
        for t in &transitions {
            preds[t.dst as usize].push(t.src);
        }
        let mut stack = vec![f];
        live[f as usize] = true;
        while let Some(x) = stack.pop() {
            for &p in &preds[x as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
    }
    if !live[0] {
        // Nothing accepted: keep a start state and an isolated final.
        let mut parts = empty_parts(wpda);
        parts.num_states = 2;
        parts.final_state = 1;
        return Ok(Intersection {
            wpda: Wpda::from_parts_unchecked(parts),
            state_origin: vec![state_origin[0], None],
            transition_origin: Vec::new(),
        });
    }
    let mut renumber = vec![StateId::MAX; n];
    let mut kept_states = Vec::new();
    for (old, &alive) in live.iter().enumerate() {
        if alive {
            renumber[old] = kept_states.len() as StateId;
            kept_states.push(state_origin[old]);
        }
    }
    let mut kept_transitions = Vec::new();
    let mut kept_origin = Vec::new();
    for (t, o) in transitions.into_iter().zip(origin) {
        if live[t.src as usize] && live[t.dst as usize] {
            kept_transitions.push(Transition {
                src: renumber[t.src as usize],
                dst: renumber[t.dst as usize],
                ..t
            });
            kept_origin.push(o);
        }
    }
    let mut parts = empty_parts(wpda);
    parts.num_states = kept_states.len();
    parts.transitions = kept_transitions;
    parts.final_state = renumber[final_state.expect("live start implies final") as usize];
    Ok(Intersection {
        wpda: Wpda::from_parts_unchecked(parts),
        state_origin: kept_states,
        transition_origin: kept_origin,
    })
}

fn empty_parts<W: Semiring>(wpda: &Wpda<W>) -> WpdaParts<W> {
    WpdaParts {
        num_states: 1,
        transitions: Vec::new(),
        start: 0,
        final_state: 0,
        parens: wpda.parens().pairs().to_vec(),
        input_alphabet: wpda.input_alphabet().clone(),
        symbols: wpda.symbols().clone(),
    }
}
