//! Plain-text automaton files.
//!
//! One transition per line, `src dst label [weight]`, fields separated by
//! tabs or spaces. A line holding a single state id marks that state final;
//! acceptors may also give a final weight as a second field. The start state
//! is the source of the first transition. `#` starts a comment line and
//! `<eps>` is the epsilon label. A missing weight means `one()`.
//!
//! Parenthesis files pair an open token with a close token per line.

use std::fmt::Write as _;

use crate::automata::{Arc, StateId, SymbolTable, Wfsa, Wpda, WpdaBuilder, EPSILON_TOKEN};
use crate::error::{Error, Result};
use crate::inference::WeightTable;
use crate::semiring::Semiring;

/// A parsed automaton file.
#[derive(Debug, Clone)]
pub enum Automaton<W> {
    Pushdown(Box<Wpda<W>>),
    Finite(Wfsa<W>),
}

impl<W> Automaton<W> {
    pub fn into_wpda(self) -> Option<Wpda<W>> {
        match self {
            Automaton::Pushdown(m) => Some(*m),
            Automaton::Finite(_) => None,
        }
    }

    pub fn into_wfsa(self) -> Option<Wfsa<W>> {
        match self {
            Automaton::Finite(a) => Some(a),
            Automaton::Pushdown(_) => None,
        }
    }
}

enum Line<'a, W> {
    Transition {
        src: StateId,
        dst: StateId,
        label: &'a str,
        weight: W,
    },
    Final {
        state: StateId,
        weight: Option<W>,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_whitespace().collect()))
        }
    })
}

fn parse_state(field: &str, line: usize) -> Result<StateId> {
    field
        .parse::<StateId>()
        .map_err(|_| parse_err(line, format!("`{field}` is not a state id")))
}

fn parse_weight<W: Semiring>(field: &str, line: usize) -> Result<W> {
    field
        .parse::<W>()
        .map_err(|_| parse_err(line, format!("`{field}` is not a weight")))
}

fn parse_lines<W: Semiring>(text: &str) -> Result<Vec<(usize, Line<'_, W>)>> {
    let mut out = Vec::new();
    for (n, fields) in content_lines(text) {
        let line = match fields.as_slice() {
            [state] => Line::Final {
                state: parse_state(state, n)?,
                weight: None,
            },
            [state, w] => Line::Final {
                state: parse_state(state, n)?,
                weight: Some(parse_weight(w, n)?),
            },
            [src, dst, label] | [src, dst, label, _] => Line::Transition {
                src: parse_state(src, n)?,
                dst: parse_state(dst, n)?,
                label,
                weight: match fields.get(3) {
                    Some(w) => parse_weight(w, n)?,
                    None => W::one(),
                },
            },
            _ => {
                return Err(parse_err(
                    n,
                    format!("expected 1 to 4 fields, found {}", fields.len()),
                ))
            }
        };
        out.push((n, line));
    }
    Ok(out)
}

/// Parses a parenthesis file into `(open, close)` token pairs. Pairing is
/// checked when the automaton is built.
pub fn parse_parens(text: &str) -> Result<Vec<(String, String)>> {
    content_lines(text)
        .map(|(n, fields)| match fields.as_slice() {
            [open, close] => {
                if *open == EPSILON_TOKEN || *close == EPSILON_TOKEN {
                    Err(parse_err(n, "epsilon cannot be a parenthesis"))
                } else {
                    Ok((open.to_string(), close.to_string()))
                }
            }
            _ => Err(parse_err(n, "expected `open close`")),
        })
        .collect()
}

/// Parses an automaton file. With parentheses the result is a pushdown
/// automaton, otherwise a finite acceptor.
pub fn parse_automaton<W: Semiring>(
    text: &str,
    parens: Option<&[(String, String)]>,
) -> Result<Automaton<W>> {
    match parens {
        Some(p) => parse_wpda(text, p).map(|m| Automaton::Pushdown(Box::new(m))),
        None => parse_wfsa(text).map(Automaton::Finite),
    }
}

pub fn parse_wpda<W: Semiring>(text: &str, parens: &[(String, String)]) -> Result<Wpda<W>> {
    let lines = parse_lines::<W>(text)?;
    let mut b = WpdaBuilder::new();
    for (open, close) in parens {
        b.paren(open, close);
    }
    let mut start = None;
    let mut final_state = None;
    for (n, line) in lines {
        match line {
            Line::Transition {
                src,
                dst,
                label,
                weight,
            } => {
                start.get_or_insert(src);
                b.arc(src, label, weight, dst);
            }
            Line::Final { state, weight } => {
                if weight.is_some_and(|w| w != W::one()) {
                    return Err(parse_err(n, "pushdown final states carry no weight"));
                }
                if final_state.replace(state).is_some() {
                    return Err(parse_err(
                        n,
                        "a pushdown automaton has exactly one final state",
                    ));
                }
            }
        }
    }
    let start = start.ok_or_else(|| parse_err(0, "no transitions, so no start state"))?;
    let final_state = final_state.ok_or_else(|| parse_err(0, "no final state line"))?;
    b.build(start, final_state)
}

pub fn parse_wfsa<W: Semiring>(text: &str) -> Result<Wfsa<W>> {
    let lines = parse_lines::<W>(text)?;
    let mut symbols = SymbolTable::new();
    let mut arcs = Vec::new();
    let mut finals = Vec::new();
    let mut num_states = 0usize;
    for (_, line) in lines {
        match line {
            Line::Transition {
                src,
                dst,
                label,
                weight,
            } => {
                let label = (label != EPSILON_TOKEN).then(|| symbols.intern(label));
                arcs.push(Arc {
                    src,
                    label,
                    weight,
                    dst,
                });
                num_states = num_states.max(src.max(dst) as usize + 1);
            }
            Line::Final { state, weight } => {
                finals.push((state, weight.unwrap_or_else(W::one)));
                num_states = num_states.max(state as usize + 1);
            }
        }
    }
    let start = arcs
        .first()
        .map(|a: &Arc<W>| a.src)
        .ok_or_else(|| parse_err(0, "no transitions, so no start state"))?;
    Ok(Wfsa {
        num_states,
        arcs,
        start,
        finals,
        symbols,
    })
}

/// Writes transitions leaving the start state first so that the start
/// survives a round trip. An automaton whose start has no outgoing
/// transition cannot be represented.
pub fn write_wpda<W: Semiring>(wpda: &Wpda<W>) -> String {
    let mut order: Vec<usize> = (0..wpda.transitions().len()).collect();
    order.sort_by_key(|&i| wpda.transitions()[i].src != wpda.start());
    let mut s = String::new();
    for i in order {
        let t = &wpda.transitions()[i];
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            t.src,
            t.dst,
            wpda.label_text(t.label),
            t.weight
        );
    }
    let _ = writeln!(s, "{}", wpda.final_state());
    s
}

pub fn write_parens<W: Semiring>(wpda: &Wpda<W>) -> String {
    let mut s = String::new();
    for &(o, c) in wpda.parens().pairs() {
        let _ = writeln!(s, "{}\t{}", wpda.symbols().name(o), wpda.symbols().name(c));
    }
    s
}

pub fn write_wfsa<W: Semiring>(wfsa: &Wfsa<W>) -> String {
    let mut order: Vec<usize> = (0..wfsa.arcs.len()).collect();
    order.sort_by_key(|&i| wfsa.arcs[i].src != wfsa.start);
    let mut s = String::new();
    for i in order {
        let a = &wfsa.arcs[i];
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            a.src,
            a.dst,
            wfsa.label_text(a.label),
            a.weight
        );
    }
    for &(f, w) in &wfsa.finals {
        if w == W::one() {
            let _ = writeln!(s, "{f}");
        } else {
            let _ = writeln!(s, "{f}\t{w}");
        }
    }
    s
}

/// `from to weight` lines in item order.
pub fn write_table<W: Semiring>(table: &WeightTable<W>) -> String {
    let mut s = String::new();
    for (item, w) in table.sorted() {
        let _ = writeln!(s, "{}\t{}\t{}", item.from, item.to, w);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Label;
    use crate::fixtures;
    use crate::semiring::Tropical;

    const ANBN: &str = "# a^n b^n\n0\t1\t(\t0\n0\t2\tb\t0\n1\t0\ta\t0\n2\t3\t)\t0\n3\t2\tb\t0\n3\n";

    fn parens() -> Vec<(String, String)> {
        parse_parens("(\t)\n").unwrap()
    }

    fn canonical<W: Semiring>(m: &Wpda<W>) -> Vec<String> {
        let mut v: Vec<String> = write_wpda(m).lines().map(str::to_string).collect();
        v.sort();
        v
    }

    #[test]
    fn parses_anbn() {
        let m = parse_wpda::<Tropical>(ANBN, &parens()).unwrap();
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.transitions().len(), 5);
        assert_eq!((m.start(), m.final_state()), (0, 3));
        assert!(matches!(m.transitions()[0].label, Label::Open(_)));
        assert!(matches!(m.transitions()[3].label, Label::Close(_)));
        assert_eq!(canonical(&m), canonical(&fixtures::anbn::<Tropical>()));
    }

    #[test]
    fn duplicate_open_token_is_a_validation_error() {
        let p = parse_parens("(\t)\n(\t]\n").unwrap();
        let err = parse_wpda::<Tropical>(ANBN, &p).unwrap_err();
        assert!(matches!(err, Error::Validation(r) if r.has_non_bijective_parens()));
    }

    #[test]
    fn empty_transition_section_is_a_parse_error() {
        assert!(matches!(
            parse_wpda::<Tropical>("# nothing\n3\n", &parens()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_wfsa::<Tropical>("3\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn bad_lines_report_their_number() {
        let err = parse_wpda::<Tropical>("0\t1\ta\tx\n1\n", &parens()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_wpda::<Tropical>("0\t1\ta\n\n-1\n", &parens()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_wpda::<Tropical>("0\t1\ta\n1\n0\n", &parens()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn missing_weight_is_one() {
        let m = parse_wpda::<Tropical>("0 1 a\n1\n", &[]).unwrap();
        assert_eq!(m.transitions()[0].weight, Tropical::one());
    }

    #[test]
    fn fixtures_round_trip() {
        for name in fixtures::NAMES {
            let m = fixtures::by_name::<Tropical>(name).unwrap();
            let text = write_wpda(&m);
            let p = parse_parens(&write_parens(&m)).unwrap();
            let back = parse_wpda::<Tropical>(&text, &p).unwrap();
            assert_eq!(canonical(&back), canonical(&m), "{name}");
            assert_eq!(back.start(), m.start());
        }
    }

    #[test]
    fn acceptor_round_trip() {
        let mut a = fixtures::aabb::<Tropical>();
        a.finals.push((2, Tropical::from(5)));
        let text = write_wfsa(&a);
        assert!(text.ends_with("4\n2\t5\n"));
        let back = parse_wfsa::<Tropical>(&text).unwrap();
        assert_eq!(write_wfsa(&back), text);
        let eps = parse_wfsa::<Tropical>("0\t1\t<eps>\t1.5\n1\n").unwrap();
        assert_eq!(eps.arcs[0].label, None);
        assert!(matches!(
            parse_automaton::<Tropical>(&text, None),
            Ok(Automaton::Finite(_))
        ));
    }

    #[test]
    fn table_dump() {
        let m = fixtures::h2trap::<Tropical>();
        let alpha = crate::inference::inside(&m).unwrap().table;
        let dump = write_table(&alpha);
        assert!(dump.lines().any(|l| l == "0\t9\t3"));
    }
}
