use super::{StateId, Symbol, SymbolTable};
use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// Acceptor arc; `label == None` is epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<W> {
    pub src: StateId,
    pub label: Option<Symbol>,
    pub weight: W,
    pub dst: StateId,
}

/// Weighted finite-state acceptor with possibly several final states.
#[derive(Debug, Clone)]
pub struct Wfsa<W> {
    pub num_states: usize,
    pub arcs: Vec<Arc<W>>,
    pub start: StateId,
    pub finals: Vec<(StateId, W)>,
    pub symbols: SymbolTable,
}

impl<W: Semiring> Wfsa<W> {
    pub fn is_epsilon_free(&self) -> bool {
        self.arcs.iter().all(|a| a.label.is_some())
    }

    pub fn final_weight(&self, state: StateId) -> W {
        self.finals
            .iter()
            .filter(|&&(s, _)| s == state)
            .fold(W::zero(), |acc, &(_, w)| acc.plus(w))
    }

    /// Arc ids grouped by source state.
    pub fn out_arcs(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.num_states];
        for (i, a) in self.arcs.iter().enumerate() {
            out[a.src as usize].push(i as u32);
        }
        out
    }

    pub fn label_text(&self, label: Option<Symbol>) -> &str {
        match label {
            None => super::EPSILON_TOKEN,
            Some(s) => self.symbols.name(s),
        }
    }
}

/// Encodes a token sequence as a linear acceptor with `|tokens| + 1` states
/// and unit weights.
pub fn compile_string<W: Semiring>(tokens: &[&str], alphabet: &[&str]) -> Result<Wfsa<W>> {
    let mut symbols = SymbolTable::new();
    for tok in alphabet {
        symbols.intern(tok);
    }
    let mut arcs = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let sym = symbols
            .get(tok)
            .ok_or_else(|| Error::UnknownToken(tok.to_string()))?;
        arcs.push(Arc {
            src: i as StateId,
            label: Some(sym),
            weight: W::one(),
            dst: i as StateId + 1,
        });
    }
    Ok(Wfsa {
        num_states: tokens.len() + 1,
        arcs,
        start: 0,
        finals: vec![(tokens.len() as StateId, W::one())],
        symbols,
    })
}
