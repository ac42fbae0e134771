use std::collections::HashSet;

use super::{Label, Symbol, TransitionId, Wpda};
use crate::semiring::Semiring;

/// A sequence of transition ids of some automaton.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<TransitionId>);

impl Path {
    pub fn new(transitions: Vec<TransitionId>) -> Self {
        Path(transitions)
    }

    pub fn transitions(&self) -> &[TransitionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<W: Semiring> Wpda<W> {
    /// `n[e_i] = p[e_{i+1}]` for every adjacent pair.
    pub fn is_contiguous(&self, path: &Path) -> bool {
        path.0
            .windows(2)
            .all(|w| self.transition(w[0]).dst == self.transition(w[1]).src)
    }

    pub fn path_weight(&self, path: &Path) -> W {
        path.0
            .iter()
            .fold(W::one(), |acc, &e| acc.times(self.transition(e).weight))
    }

    /// Subsequence of labels whose symbol is in `symbols`. Epsilon never
    /// appears.
    pub fn project(&self, path: &Path, symbols: &HashSet<Symbol>) -> Vec<Symbol> {
        path.0
            .iter()
            .filter_map(|&e| self.transition(e).label.symbol())
            .filter(|s| symbols.contains(s))
            .collect()
    }

    /// Token yield of a path: input symbols, plus parentheses when
    /// `keep_parens` is set.
    pub fn yield_tokens(&self, path: &Path, keep_parens: bool) -> Vec<&str> {
        path.0
            .iter()
            .filter_map(|&e| match self.transition(e).label {
                Label::Epsilon => None,
                Label::Input(s) => Some(s),
                Label::Open(s) | Label::Close(s) => keep_parens.then_some(s),
            })
            .map(|s| self.symbols().name(s))
            .collect()
    }

    /// Whether the parenthesis projection of `path` is a Dyck word.
    pub fn is_balanced(&self, path: &Path) -> bool {
        let mut stack = Vec::new();
        for &e in &path.0 {
            match self.transition(e).label {
                Label::Open(s) => match self.parens().open_id(s) {
                    Some(p) => stack.push(p),
                    None => return false,
                },
                Label::Close(s) => match (self.parens().close_id(s), stack.pop()) {
                    (Some(p), Some(top)) if p == top => {}
                    _ => return false,
                },
                Label::Epsilon | Label::Input(_) => {}
            }
        }
        stack.is_empty()
    }

    /// Balanced, contiguous, and runs from start to final. The empty path is
    /// accepting exactly when start equals final.
    pub fn is_accepting(&self, path: &Path) -> bool {
        let (from, to) = match (path.0.first(), path.0.last()) {
            (Some(&a), Some(&b)) => (self.transition(a).src, self.transition(b).dst),
            _ => (self.start(), self.start()),
        };
        from == self.start()
            && to == self.final_state()
            && self.is_contiguous(path)
            && self.is_balanced(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::WpdaBuilder;
    use crate::fixtures;
    use crate::semiring::Tropical;

    /// Transition ids of the accepting path of "aabb" through the a^n b^n
    /// automaton: q1 ( q2 a q1 ( q2 a q1 b q3 ) q4 b q3 ) q4.
    fn aabb_path() -> Path {
        let m = fixtures::anbn::<Tropical>();
        let find = |src: u32, tok: &str| {
            m.transitions()
                .iter()
                .position(|t| t.src == src && m.label_text(t.label) == tok)
                .unwrap() as u32
        };
        let open = find(0, "(");
        let a = find(1, "a");
        let b13 = find(0, "b");
        let close = find(2, ")");
        let b43 = find(3, "b");
        Path(vec![open, a, open, a, b13, close, b43, close])
    }

    fn names(m: &Wpda<Tropical>, syms: Vec<Symbol>) -> Vec<String> {
        syms.into_iter()
            .map(|s| m.symbols().name(s).to_string())
            .collect()
    }

    #[test]
    fn projection_onto_parens_and_inputs() {
        let m = fixtures::anbn::<Tropical>();
        let path = aabb_path();
        let parens: HashSet<_> = ["(", ")"]
            .iter()
            .map(|t| m.symbols().get(t).unwrap())
            .collect();
        let inputs: HashSet<_> = m.input_alphabet().iter().copied().collect();
        assert_eq!(names(&m, m.project(&path, &parens)), ["(", "(", ")", ")"]);
        assert_eq!(names(&m, m.project(&path, &inputs)), ["a", "a", "b", "b"]);
        assert!(m.project(&Path::default(), &inputs).is_empty());
    }

    #[test]
    fn aabb_path_is_accepting() {
        let m = fixtures::anbn::<Tropical>();
        assert!(m.is_accepting(&aabb_path()));
        assert_eq!(m.path_weight(&aabb_path()), Tropical::one());
        let single = Path(vec![aabb_path().0[0]]);
        assert!(!m.is_accepting(&single));
        assert!(!m.is_balanced(&single));
    }

    /// One state per label so that any label sequence is a contiguous path.
    fn chain(tokens: &[&str]) -> (Wpda<Tropical>, Path) {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.paren("(", ")").paren("[", "]");
        for (i, tok) in tokens.iter().enumerate() {
            b.arc(i as u32, tok, 0, i as u32 + 1);
        }
        let m = b.build(0, tokens.len() as u32).unwrap();
        let path = Path((0..tokens.len() as u32).collect());
        (m, path)
    }

    #[test]
    fn dyck_membership() {
        for (tokens, expected) in [
            (&["(", ")", "[", "]"][..], true),
            (&["(", "[", "(", ")", "]", ")", "[", "]"][..], true),
            (&["("][..], false),
            (&["(", "]", "[", ")"][..], false),
            (&[")", "("][..], false),
            (&["a", "(", "a", ")"][..], true),
        ] {
            let (m, path) = chain(tokens);
            assert_eq!(m.is_balanced(&path), expected, "{tokens:?}");
            assert_eq!(m.is_accepting(&path), expected, "{tokens:?}");
        }
    }

    #[test]
    fn empty_path_accepting_iff_start_is_final() {
        let mut b = WpdaBuilder::<Tropical>::new();
        b.arc(0, "a", 0, 1);
        assert!(b.build(0, 0).unwrap().is_accepting(&Path::default()));
        assert!(!b.build(0, 1).unwrap().is_accepting(&Path::default()));
    }

    #[test]
    fn yield_strips_parens_unless_asked() {
        let m = fixtures::anbn::<Tropical>();
        assert_eq!(m.yield_tokens(&aabb_path(), false), ["a", "a", "b", "b"]);
        assert_eq!(
            m.yield_tokens(&aabb_path(), true),
            ["(", "a", "(", "a", "b", ")", "b", ")"]
        );
    }
}
