//! Small hand-built automata used by tests, examples and the CLI.

use crate::automata::{
    compile_string, intersect_with_origin, Intersection, Wfsa, Wpda, WpdaBuilder,
};
use crate::semiring::Semiring;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["anbn", "nested", "h2trap"];

/// The language `a^n b^n` (n >= 1) over four states `q1..q4` = `0..3`.
///
/// Transitions, in id order: `q1 -( q2`, `q1 -b q3`, `q2 -a q1`,
/// `q3 -) q4`, `q4 -b q3`. Start `q1`, final `q4`. All weights are one.
pub fn anbn<W: Semiring + From<i32>>() -> Wpda<W> {
    let mut b = WpdaBuilder::new();
    b.paren("(", ")");
    b.arc(0, "(", W::one(), 1)
        .arc(0, "b", W::one(), 2)
        .arc(1, "a", W::one(), 0)
        .arc(2, ")", W::one(), 3)
        .arc(3, "b", W::one(), 2);
    b.build(0, 3).expect("fixture is well formed")
}

/// The string "a a b b" as a five-state chain.
pub fn aabb<W: Semiring>() -> Wfsa<W> {
    compile_string(&["a", "a", "b", "b"], &["a", "b"]).expect("fixture is well formed")
}

/// `anbn() x aabb()`, trimmed: 9 states and 8 transitions.
pub fn nested<W: Semiring + From<i32>>() -> Wpda<W> {
    nested_with_origin().wpda
}

pub fn nested_with_origin<W: Semiring + From<i32>>() -> Intersection<W> {
    intersect_with_origin(&anbn(), &aabb()).expect("fixture alphabets agree")
}

/// An automaton on which the exit-distance heuristic is misled.
///
/// States: `s` = 0, `q1..q8` = 1..8, `f` = 9. One paren pair.
///
/// ```text
/// s  -(:0  q1
/// q1 -a:1  q2 -a:1 q4 -):0 q6 -a:1 f
/// q1 -b:0  q3 -b:0 q5 -b:0 q7 -b:0 q8 -):4 f
/// ```
///
/// The two accepting paths weigh 3 and 4. Inside the parentheses the
/// `b` branch looks free, and only its closing transition reveals the cost.
pub fn h2trap<W: Semiring + From<i32>>() -> Wpda<W> {
    let mut b = WpdaBuilder::new();
    b.paren("(", ")");
    b.arc(0, "(", 0, 1)
        .arc(1, "a", 1, 2)
        .arc(1, "b", 0, 3)
        .arc(2, "a", 1, 4)
        .arc(4, ")", 0, 6)
        .arc(6, "a", 1, 9)
        .arc(3, "b", 0, 5)
        .arc(5, "b", 0, 7)
        .arc(7, "b", 0, 8)
        .arc(8, ")", 4, 9);
    b.build(0, 9).expect("fixture is well formed")
}

pub fn by_name<W: Semiring + From<i32>>(name: &str) -> Option<Wpda<W>> {
    match name {
        "anbn" => Some(anbn()),
        "nested" => Some(nested()),
        "h2trap" => Some(h2trap()),
        _ => None,
    }
}
