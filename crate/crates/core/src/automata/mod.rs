//! Weighted pushdown automata and the finite acceptors they are intersected
//! with.
//!
//! A [`Wpda`] is a labeled weighted digraph. Open-paren transitions push,
//! close-paren transitions pop, and a path is accepting when it runs from the
//! start state to the final state and its parentheses are balanced.

mod adjacency;
mod ops;
mod path;
mod stack;
mod wfsa;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::Semiring;

use adjacency::Csr;

pub use ops::{intersect, intersect_with_origin, reverse, Intersection};
pub use path::Path;
pub use stack::{check_bounded_stack, stack_bound, BoundReport, LimitKind, StackBound};
pub use wfsa::{compile_string, Arc, Wfsa};

pub type StateId = u32;
pub type TransitionId = u32;

/// Reserved token for the empty label in text formats.
pub const EPSILON_TOKEN: &str = "<eps>";

/// Interned token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

/// Index of an open/close pair in a [`ParenTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParenId(pub u32);

#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Symbol {
        if let Some(&sym) = self.index.get(name) {
            return sym;
        }
        let sym = Symbol(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), sym);
        sym
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Epsilon,
    Input(Symbol),
    Open(Symbol),
    Close(Symbol),
}

impl Label {
    pub fn symbol(self) -> Option<Symbol> {
        match self {
            Label::Epsilon => None,
            Label::Input(s) | Label::Open(s) | Label::Close(s) => Some(s),
        }
    }

    pub fn is_scan(self) -> bool {
        matches!(self, Label::Epsilon | Label::Input(_))
    }
}

/// Pairing of open and close parentheses.
///
/// Built from a list of pairs that may be malformed; [`Wpda::validate`]
/// reports duplicates.
#[derive(Debug, Clone, Default)]
pub struct ParenTable {
    pairs: Vec<(Symbol, Symbol)>,
    by_open: HashMap<Symbol, ParenId>,
    by_close: HashMap<Symbol, ParenId>,
}

impl ParenTable {
    pub fn new(pairs: Vec<(Symbol, Symbol)>) -> Self {
        let mut by_open = HashMap::new();
        let mut by_close = HashMap::new();
        for (i, &(o, c)) in pairs.iter().enumerate() {
            by_open.entry(o).or_insert(ParenId(i as u32));
            by_close.entry(c).or_insert(ParenId(i as u32));
        }
        ParenTable {
            pairs,
            by_open,
            by_close,
        }
    }

    pub fn pairs(&self) -> &[(Symbol, Symbol)] {
        &self.pairs
    }

    pub fn open_id(&self, open: Symbol) -> Option<ParenId> {
        self.by_open.get(&open).copied()
    }

    pub fn close_id(&self, close: Symbol) -> Option<ParenId> {
        self.by_close.get(&close).copied()
    }

    pub fn open(&self, id: ParenId) -> Symbol {
        self.pairs[id.0 as usize].0
    }

    pub fn close(&self, id: ParenId) -> Symbol {
        self.pairs[id.0 as usize].1
    }

    pub fn is_paren(&self, sym: Symbol) -> bool {
        self.by_open.contains_key(&sym) || self.by_close.contains_key(&sym)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<W> {
    pub src: StateId,
    pub label: Label,
    pub weight: W,
    pub dst: StateId,
}

/// Raw fields of a [`Wpda`], for construction and for deliberately
/// malformed automata in tests.
#[derive(Debug, Clone)]
pub struct WpdaParts<W> {
    pub num_states: usize,
    pub transitions: Vec<Transition<W>>,
    pub start: StateId,
    pub final_state: StateId,
    pub parens: Vec<(Symbol, Symbol)>,
    pub input_alphabet: BTreeSet<Symbol>,
    pub symbols: SymbolTable,
}

#[derive(Debug, Clone)]
pub struct Wpda<W> {
    num_states: usize,
    transitions: Vec<Transition<W>>,
    start: StateId,
    final_state: StateId,
    parens: ParenTable,
    input_alphabet: BTreeSet<Symbol>,
    symbols: SymbolTable,
    /// Paren id per transition (`u32::MAX` for scan labels).
    paren_of: Vec<u32>,
    out_scan: Csr,
    out_open: Csr,
    out_close: Csr,
    in_scan: Csr,
    in_open: Csr,
    in_close: Csr,
}

const NO_PAREN: u32 = u32::MAX;

impl<W: Semiring> Wpda<W> {
    /// Builds and validates.
    pub fn new(parts: WpdaParts<W>) -> Result<Self> {
        let wpda = Self::from_parts_unchecked(parts);
        let report = wpda.validate();
        if report.is_empty() {
            Ok(wpda)
        } else {
            Err(Error::Validation(report))
        }
    }

    /// Builds without validation. Transitions with dangling endpoints are
    /// kept but left out of the adjacency indexes.
    pub fn from_parts_unchecked(parts: WpdaParts<W>) -> Self {
        let WpdaParts {
            num_states,
            transitions,
            start,
            final_state,
            parens,
            input_alphabet,
            symbols,
        } = parts;
        let parens = ParenTable::new(parens);
        let mut paren_of = Vec::with_capacity(transitions.len());
        let mut groups: [Vec<(u32, u32, u32)>; 6] = Default::default();
        for (id, t) in transitions.iter().enumerate() {
            let id = id as u32;
            let (kind, key) = match t.label {
                Label::Epsilon | Label::Input(_) => (0, NO_PAREN),
                Label::Open(s) => (1, parens.open_id(s).map_or(NO_PAREN, |p| p.0)),
                Label::Close(s) => (2, parens.close_id(s).map_or(NO_PAREN, |p| p.0)),
            };
            paren_of.push(key);
            if (t.src as usize) >= num_states || (t.dst as usize) >= num_states {
                continue;
            }
            groups[kind].push((t.src, key, id));
            groups[3 + kind].push((t.dst, key, id));
        }
        let [os, oo, oc, is, io, ic] = groups;
        Wpda {
            out_scan: Csr::build(num_states, os, false),
            out_open: Csr::build(num_states, oo, true),
            out_close: Csr::build(num_states, oc, true),
            in_scan: Csr::build(num_states, is, false),
            in_open: Csr::build(num_states, io, true),
            in_close: Csr::build(num_states, ic, true),
            num_states,
            transitions,
            start,
            final_state,
            parens,
            input_alphabet,
            symbols,
            paren_of,
        }
    }

    pub fn into_parts(self) -> WpdaParts<W> {
        WpdaParts {
            num_states: self.num_states,
            transitions: self.transitions,
            start: self.start,
            final_state: self.final_state,
            parens: self.parens.pairs,
            input_alphabet: self.input_alphabet,
            symbols: self.symbols,
        }
    }

    /// Checks the structural constraints of the model. An empty report means
    /// the automaton is well formed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.num_states as u32;
        if self.start >= n {
            violations.push(Violation::MissingStart);
        }
        if self.final_state >= n {
            violations.push(Violation::MissingFinal);
        }
        let mut seen_open = BTreeSet::new();
        let mut seen_close = BTreeSet::new();
        for &(o, c) in self.parens.pairs() {
            if !seen_open.insert(o) {
                violations.push(Violation::NonBijectiveParens(self.symbols.name(o).into()));
            }
            if !seen_close.insert(c) {
                violations.push(Violation::NonBijectiveParens(self.symbols.name(c).into()));
            }
        }
        let mut overlap = BTreeSet::new();
        for &(o, c) in self.parens.pairs() {
            if o == c || seen_close.contains(&o) {
                overlap.insert(o);
            }
            if self.input_alphabet.contains(&o) {
                overlap.insert(o);
            }
            if self.input_alphabet.contains(&c) {
                overlap.insert(c);
            }
        }
        for sym in overlap {
            violations.push(Violation::AlphabetOverlap(self.symbols.name(sym).into()));
        }
        for (id, t) in self.transitions.iter().enumerate() {
            let id = id as TransitionId;
            if t.weight.is_zero() {
                violations.push(Violation::ZeroWeight(id));
            }
            for state in [t.src, t.dst] {
                if state >= n {
                    violations.push(Violation::DanglingState {
                        transition: id,
                        state,
                    });
                }
            }
            let consistent = match t.label {
                Label::Epsilon => true,
                Label::Input(s) => self.input_alphabet.contains(&s),
                Label::Open(s) => self.parens.open_id(s).is_some(),
                Label::Close(s) => self.parens.close_id(s).is_some(),
            };
            if !consistent {
                violations.push(Violation::MisclassifiedLabel(id));
            }
        }
        ValidationReport { violations }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.num_states as StateId
    }

    pub fn transitions(&self) -> &[Transition<W>] {
        &self.transitions
    }

    #[inline]
    pub fn transition(&self, id: TransitionId) -> &Transition<W> {
        &self.transitions[id as usize]
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn parens(&self) -> &ParenTable {
        &self.parens
    }

    pub fn input_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.input_alphabet
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// Paren pair of an open or close transition.
    #[inline]
    pub fn paren_of(&self, id: TransitionId) -> Option<ParenId> {
        let p = self.paren_of[id as usize];
        (p != NO_PAREN).then_some(ParenId(p))
    }

    #[inline]
    pub(crate) fn paren_raw(&self, id: TransitionId) -> ParenId {
        ParenId(self.paren_of[id as usize])
    }

    /// Outgoing epsilon and input transitions.
    #[inline]
    pub fn out_scan(&self, q: StateId) -> &[TransitionId] {
        self.out_scan.get(q)
    }

    #[inline]
    pub fn out_open(&self, q: StateId) -> &[TransitionId] {
        self.out_open.get(q)
    }

    #[inline]
    pub fn out_close(&self, q: StateId) -> &[TransitionId] {
        self.out_close.get(q)
    }

    #[inline]
    pub fn out_open_with(&self, q: StateId, paren: ParenId) -> &[TransitionId] {
        self.out_open.get_keyed(q, paren)
    }

    #[inline]
    pub fn out_close_with(&self, q: StateId, paren: ParenId) -> &[TransitionId] {
        self.out_close.get_keyed(q, paren)
    }

    #[inline]
    pub fn in_scan(&self, q: StateId) -> &[TransitionId] {
        self.in_scan.get(q)
    }

    #[inline]
    pub fn in_open(&self, q: StateId) -> &[TransitionId] {
        self.in_open.get(q)
    }

    #[inline]
    pub fn in_close(&self, q: StateId) -> &[TransitionId] {
        self.in_close.get(q)
    }

    #[inline]
    pub fn in_open_with(&self, q: StateId, paren: ParenId) -> &[TransitionId] {
        self.in_open.get_keyed(q, paren)
    }

    #[inline]
    pub fn in_close_with(&self, q: StateId, paren: ParenId) -> &[TransitionId] {
        self.in_close.get_keyed(q, paren)
    }

    /// True when every transition weight is a nondecreasing factor, which is
    /// what makes the exit-distance heuristic monotone.
    pub fn nondecreasing_times(&self) -> bool {
        self.transitions
            .iter()
            .all(|t| t.weight.is_nondecreasing_factor())
    }

    /// Same structure with every weight mapped through `f`.
    pub fn map_weights<V: Semiring>(&self, mut f: impl FnMut(W) -> V) -> Wpda<V> {
        Wpda {
            num_states: self.num_states,
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    src: t.src,
                    label: t.label,
                    weight: f(t.weight),
                    dst: t.dst,
                })
                .collect(),
            start: self.start,
            final_state: self.final_state,
            parens: self.parens.clone(),
            input_alphabet: self.input_alphabet.clone(),
            symbols: self.symbols.clone(),
            paren_of: self.paren_of.clone(),
            out_scan: self.out_scan.clone(),
            out_open: self.out_open.clone(),
            out_close: self.out_close.clone(),
            in_scan: self.in_scan.clone(),
            in_open: self.in_open.clone(),
            in_close: self.in_close.clone(),
        }
    }

    /// Text of a label as it appears in files.
    pub fn label_text(&self, label: Label) -> &str {
        match label.symbol() {
            None => EPSILON_TOKEN,
            Some(s) => self.symbols.name(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    AlphabetOverlap(String),
    NonBijectiveParens(String),
    ZeroWeight(TransitionId),
    DanglingState {
        transition: TransitionId,
        state: StateId,
    },
    MissingStart,
    MissingFinal,
    MisclassifiedLabel(TransitionId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphabetOverlap(s) => write!(f, "symbol `{s}` is in more than one alphabet"),
            Violation::NonBijectiveParens(s) => write!(f, "paren `{s}` is paired more than once"),
            Violation::ZeroWeight(t) => write!(f, "transition {t} has weight zero"),
            Violation::DanglingState { transition, state } => {
                write!(f, "transition {transition} refers to missing state {state}")
            }
            Violation::MissingStart => f.write_str("start state does not exist"),
            Violation::MissingFinal => f.write_str("final state does not exist"),
            Violation::MisclassifiedLabel(t) => {
                write!(f, "label of transition {t} does not match the alphabets")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_zero_weight(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::ZeroWeight(_)))
    }

    pub fn has_alphabet_overlap(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::AlphabetOverlap(_)))
    }

    pub fn has_non_bijective_parens(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::NonBijectiveParens(_)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Incremental construction from string tokens. Tokens registered with
/// [`WpdaBuilder::paren`] become parentheses, [`EPSILON_TOKEN`] is epsilon,
/// everything else is an input symbol.
#[derive(Debug, Clone)]
pub struct WpdaBuilder<W> {
    symbols: SymbolTable,
    parens: Vec<(Symbol, Symbol)>,
    opens: HashSet<Symbol>,
    closes: HashSet<Symbol>,
    input_alphabet: BTreeSet<Symbol>,
    transitions: Vec<Transition<W>>,
    num_states: usize,
}

impl<W: Semiring> Default for WpdaBuilder<W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<W: Semiring> WpdaBuilder<W> {
    pub fn new() -> Self {
        WpdaBuilder {
            symbols: SymbolTable::new(),
            parens: Vec::new(),
            opens: HashSet::new(),
            closes: HashSet::new(),
            input_alphabet: BTreeSet::new(),
            transitions: Vec::new(),
            num_states: 0,
        }
    }

    pub fn paren(&mut self, open: &str, close: &str) -> &mut Self {
        let o = self.symbols.intern(open);
        let c = self.symbols.intern(close);
        self.parens.push((o, c));
        self.opens.insert(o);
        self.closes.insert(c);
        self
    }

    /// Declares an input symbol that may not appear on any transition.
    pub fn input_symbol(&mut self, token: &str) -> &mut Self {
        let s = self.symbols.intern(token);
        self.input_alphabet.insert(s);
        self
    }

    /// Ensures states `0..n` exist.
    pub fn states(&mut self, n: usize) -> &mut Self {
        self.num_states = self.num_states.max(n);
        self
    }

    pub fn label(&mut self, token: &str) -> Label {
        if token == EPSILON_TOKEN {
            return Label::Epsilon;
        }
        let s = self.symbols.intern(token);
        if self.opens.contains(&s) {
            Label::Open(s)
        } else if self.closes.contains(&s) {
            Label::Close(s)
        } else {
            self.input_alphabet.insert(s);
            Label::Input(s)
        }
    }

    pub fn arc(
        &mut self,
        src: StateId,
        token: &str,
        weight: impl Into<W>,
        dst: StateId,
    ) -> &mut Self {
        let label = self.label(token);
        self.num_states = self.num_states.max(src.max(dst) as usize + 1);
        self.transitions.push(Transition {
            src,
            label,
            weight: weight.into(),
            dst,
        });
        self
    }

    pub fn parts(&self, start: StateId, final_state: StateId) -> WpdaParts<W> {
        WpdaParts {
            num_states: self.num_states.max(start.max(final_state) as usize + 1),
            transitions: self.transitions.clone(),
            start,
            final_state,
            parens: self.parens.clone(),
            input_alphabet: self.input_alphabet.clone(),
            symbols: self.symbols.clone(),
        }
    }

    pub fn build(&self, start: StateId, final_state: StateId) -> Result<Wpda<W>> {
        Wpda::new(self.parts(start, final_state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semiring::Tropical;

    #[test]
    fn anbn_is_well_formed() {
        let m = fixtures::anbn::<Tropical>();
        assert!(m.validate().is_empty());
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.transitions().len(), 5);
    }

    #[test]
    fn zero_weight_is_reported() {
        let mut parts = fixtures::anbn::<Tropical>().into_parts();
        parts.transitions[2].weight = Tropical::zero();
        let report = Wpda::from_parts_unchecked(parts).validate();
        assert!(report.has_zero_weight());
        assert!(Wpda::new(fixtures::anbn::<Tropical>().into_parts()).is_ok());
    }

    #[test]
    fn alphabet_overlap_is_reported() {
        let mut parts = fixtures::anbn::<Tropical>().into_parts();
        let open = parts.symbols.get("(").unwrap();
        parts.input_alphabet.insert(open);
        let report = Wpda::from_parts_unchecked(parts).validate();
        assert!(report.has_alphabet_overlap());
    }

    #[test]
    fn non_bijective_parens_are_reported() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.paren("(", ")").paren("(", "]");
        b.arc(0, "a", 0, 1);
        let report = Wpda::from_parts_unchecked(b.parts(0, 1)).validate();
        assert!(report.has_non_bijective_parens());
    }

    #[test]
    fn dangling_and_missing_states_are_reported() {
        let mut parts = fixtures::anbn::<Tropical>().into_parts();
        parts.transitions[0].dst = 17;
        parts.start = 9;
        let report = Wpda::from_parts_unchecked(parts).validate();
        assert!(report.violations.contains(&Violation::MissingStart));
        assert!(report.violations.contains(&Violation::DanglingState {
            transition: 0,
            state: 17
        }));
    }

    #[test]
    fn keyed_adjacency_filters_by_pair() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.paren("(", ")").paren("[", "]");
        b.arc(0, "(", 0, 1)
            .arc(0, "[", 0, 2)
            .arc(0, "(", 1, 3)
            .arc(0, "a", 0, 1);
        let m = b.build(0, 3).unwrap();
        let round = m.parens().open_id(m.symbols().get("(").unwrap()).unwrap();
        let square = m.parens().open_id(m.symbols().get("[").unwrap()).unwrap();
        assert_eq!(m.out_open_with(0, round), &[0, 2]);
        assert_eq!(m.out_open_with(0, square), &[1]);
        assert_eq!(m.out_scan(0), &[3]);
        assert_eq!(m.in_open_with(3, round), &[2]);
        assert!(m.in_open_with(3, square).is_empty());
    }
}
