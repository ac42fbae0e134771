//! Synthetic inputs and a timing harness.
//!
//! Two kinds of generator live here. The small ones produce automata that
//! brute force can still enumerate, for cross-checking the searches. The
//! large ones produce bounded automata of a requested size for timing.
//! Everything is driven by a seed and reproducible.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{compile_string, intersect, Label, StateId, Wpda, WpdaBuilder};
use crate::error::{Error, Result};
use crate::kpaths::{astar_kshortest, lazy_kshortest, HeuristicKind, KPathResult};
use crate::oracle::{expand_kshortest, ExpandOptions};
use crate::semiring::{Semiring, Tropical};

const SMALL_ALPHABET: [&str; 2] = ["a", "b"];

/// Shape of [`random_small_instance`].
#[derive(Debug, Clone, Copy)]
pub struct SmallParams {
    /// States of the automaton before intersection, at least 2.
    pub max_states: usize,
    pub max_paren_pairs: usize,
    /// Weights are drawn from `min_weight..=max_weight`.
    pub min_weight: i32,
    pub max_weight: i32,
    /// Longest sampled string.
    pub max_string: usize,
}

impl Default for SmallParams {
    fn default() -> Self {
        SmallParams {
            max_states: 8,
            max_paren_pairs: 2,
            min_weight: 0,
            max_weight: 10,
            max_string: 8,
        }
    }
}

/// A pushdown automaton, a string it accepts and their intersection.
#[derive(Debug, Clone)]
pub struct Instance<W> {
    pub grammar: Wpda<W>,
    pub tokens: Vec<String>,
    pub wpda: Wpda<W>,
}

impl<W: Semiring> Instance<W> {
    fn new(grammar: Wpda<W>, tokens: Vec<String>, alphabet: &[&str]) -> Result<Self> {
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let wpda = intersect(&grammar, &compile_string(&refs, alphabet)?)?;
        Ok(Instance {
            grammar,
            tokens,
            wpda,
        })
    }
}

/// A small random automaton intersected with a string sampled from it.
///
/// Input transitions may go anywhere, but epsilon and parenthesis
/// transitions only lead to higher-numbered states. The intersection with a
/// string is therefore acyclic, so it has finitely many accepting paths and
/// a bounded stack.
pub fn random_small_instance<W: Semiring + From<i32>>(
    rng: &mut impl Rng,
    p: &SmallParams,
) -> Instance<W> {
    loop {
        let grammar = random_small_wpda::<W>(rng, p);
        for _ in 0..50 {
            if let Some(tokens) = sample_accepted(rng, &grammar, p.max_string) {
                return Instance::new(grammar, tokens, &SMALL_ALPHABET)
                    .expect("sampled from the grammar");
            }
        }
    }
}

fn random_small_wpda<W: Semiring + From<i32>>(rng: &mut impl Rng, p: &SmallParams) -> Wpda<W> {
    let n = rng.random_range(2..=p.max_states.max(2)) as StateId;
    let pairs = rng.random_range(1..=p.max_paren_pairs.max(1));
    let opens = ["(", "["];
    let closes = [")", "]"];
    let mut b = WpdaBuilder::<W>::new();
    for i in 0..pairs.min(2) {
        b.paren(opens[i], closes[i]);
    }
    b.states(n as usize);
    let arcs = rng.random_range(2 * n as usize..=4 * n as usize);
    for _ in 0..arcs {
        let w = W::from(rng.random_range(p.min_weight..=p.max_weight));
        let kind = rng.random_range(0..10);
        if kind < 5 {
            let label = *SMALL_ALPHABET.choose(rng).expect("nonempty");
            b.arc(rng.random_range(0..n), label, w, rng.random_range(0..n));
            continue;
        }
        let src = rng.random_range(0..n - 1);
        let dst = rng.random_range(src + 1..n);
        let pair = rng.random_range(0..pairs.min(2));
        let label = match kind {
            5 => "<eps>",
            6 | 7 => opens[pair],
            _ => closes[pair],
        };
        b.arc(src, label, w, dst);
    }
    b.build(0, n - 1)
        .expect("generated automaton is well formed")
}

/// Random walk with a stack; returns the input tokens of an accepting path.
fn sample_accepted<W: Semiring>(
    rng: &mut impl Rng,
    m: &Wpda<W>,
    max_tokens: usize,
) -> Option<Vec<String>> {
    let mut q = m.start();
    let mut stack = Vec::new();
    let mut tokens = Vec::new();
    for _ in 0..64 {
        if q == m.final_state() && stack.is_empty() && rng.random_bool(0.4) {
            return Some(tokens);
        }
        // Parenthesis moves count twice so that sampled strings tend to
        // exercise the stack.
        let mut moves: Vec<u32> = m.out_scan(q).to_vec();
        if stack.len() < 4 {
            moves.extend_from_slice(m.out_open(q));
            moves.extend_from_slice(m.out_open(q));
        }
        if let Some(&top) = stack.last() {
            moves.extend_from_slice(m.out_close_with(q, top));
            moves.extend_from_slice(m.out_close_with(q, top));
        }
        let &e = moves.choose(rng)?;
        let t = m.transition(e);
        match t.label {
            Label::Input(s) => {
                if tokens.len() == max_tokens {
                    return None;
                }
                tokens.push(m.symbols().name(s).to_string());
            }
            Label::Open(_) => stack.push(m.paren_of(e).expect("open")),
            Label::Close(_) => {
                stack.pop();
            }
            Label::Epsilon => {}
        }
        q = t.dst;
    }
    (q == m.final_state() && stack.is_empty()).then_some(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    T(usize),
    N(usize),
}

/// Rules per nonterminal. Rule 0 of each nonterminal is terminals only and
/// rule 1 calls at least one nonterminal. Every rule starts with a terminal,
/// which keeps the stack bounded once a string is intersected in.
#[derive(Debug, Clone)]
struct Grammar {
    terminals: usize,
    rules: Vec<Vec<Vec<Sym>>>,
}

/// Shape of [`cfg_instance`].
#[derive(Debug, Clone, Copy)]
pub struct CfgParams {
    pub nonterminals: usize,
    pub terminals: usize,
    pub rules_per_nonterminal: usize,
    pub max_rule_len: usize,
    pub max_weight: i32,
    pub string_len: usize,
}

impl CfgParams {
    /// Defaults drawn from the seed: 3 to 8 nonterminals and strings of 5 to
    /// 30 tokens.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CfgParams {
            nonterminals: rng.random_range(3..=8),
            terminals: 4,
            rules_per_nonterminal: 2,
            max_rule_len: 4,
            max_weight: 10,
            string_len: rng.random_range(5..=30),
        }
    }
}

fn random_grammar(rng: &mut impl Rng, p: &CfgParams) -> Grammar {
    let nts = p.nonterminals.max(1);
    let rules = (0..nts)
        .map(|_| {
            (0..p.rules_per_nonterminal.max(2))
                .map(|r| {
                    let mut rule = vec![Sym::T(rng.random_range(0..p.terminals))];
                    if r == 0 {
                        if rng.random_bool(0.5) {
                            rule.push(Sym::T(rng.random_range(0..p.terminals)));
                        }
                        return rule;
                    }
                    let len = rng.random_range(2..=p.max_rule_len.max(2));
                    for _ in 1..len {
                        rule.push(if rng.random_bool(0.5) {
                            Sym::N(rng.random_range(0..nts))
                        } else {
                            Sym::T(rng.random_range(0..p.terminals))
                        });
                    }
                    if r == 1 && !rule.iter().any(|s| matches!(s, Sym::N(_))) {
                        *rule.last_mut().expect("len >= 2") = Sym::N(rng.random_range(0..nts));
                    }
                    rule
                })
                .collect()
        })
        .collect();
    Grammar {
        terminals: p.terminals,
        rules,
    }
}

fn terminal_name(t: usize) -> String {
    format!("t{t}")
}

/// Nonterminal `i` is entered at state `2i` and left at `2i + 1`. Every
/// call site gets its own parenthesis pair: it opens into the callee's entry
/// and its close leads from the callee's exit back to the continuation, so
/// a return always goes to the site that made the call.
fn grammar_wpda<W: Semiring + From<i32>>(
    rng: &mut impl Rng,
    g: &Grammar,
    max_weight: i32,
) -> Wpda<W> {
    let mut b = WpdaBuilder::<W>::new();
    let nts = g.rules.len();
    for t in 0..g.terminals {
        b.input_symbol(&terminal_name(t));
    }
    let mut next_state = 2 * nts as StateId;
    let mut calls = 0usize;
    for (a, rules) in g.rules.iter().enumerate() {
        for rule in rules {
            let mut cur = 2 * a as StateId;
            for (j, sym) in rule.iter().enumerate() {
                let dst = if j + 1 == rule.len() {
                    2 * a as StateId + 1
                } else {
                    next_state += 1;
                    next_state - 1
                };
                let mut w = || W::from(rng.random_range(0..=max_weight));
                match *sym {
                    Sym::T(t) => {
                        b.arc(cur, &terminal_name(t), w(), dst);
                    }
                    Sym::N(c) => {
                        let (open, close) = (format!("<{calls}"), format!("{calls}>"));
                        calls += 1;
                        b.paren(&open, &close);
                        b.arc(cur, &open, w(), 2 * c as StateId);
                        b.arc(2 * c as StateId + 1, &close, w(), dst);
                    }
                }
                cur = dst;
            }
        }
    }
    b.build(0, 1).expect("generated grammar is well formed")
}

/// Leftmost derivation from nonterminal 0. Rules that call nonterminals are
/// preferred until about `len` tokens are committed, then terminal-only
/// rules finish the string.
fn sample_grammar(rng: &mut impl Rng, g: &Grammar, len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut pending = vec![Sym::N(0)];
    while let Some(sym) = pending.pop() {
        match sym {
            Sym::T(t) => out.push(terminal_name(t)),
            Sym::N(a) => {
                let rules = &g.rules[a];
                let rule = if out.len() + pending.len() < len {
                    &rules[rng.random_range(1..rules.len())]
                } else {
                    &rules[0]
                };
                pending.extend(rule.iter().rev().copied());
            }
        }
    }
    out
}

/// A random grammar-like automaton intersected with one of its strings,
/// with rules added until the intersection has at least `min_states`
/// states (or the rule count hits 4096 per nonterminal).
pub fn cfg_instance<W: Semiring + From<i32>>(seed: u64, min_states: usize) -> Instance<W> {
    let mut p = CfgParams::from_seed(seed);
    loop {
        let inst = cfg_instance_with(seed, &p);
        if inst.wpda.num_states() >= min_states || p.rules_per_nonterminal >= 4096 {
            return inst;
        }
        p.rules_per_nonterminal = (p.rules_per_nonterminal * 3).div_ceil(2);
    }
}

pub fn cfg_instance_with<W: Semiring + From<i32>>(seed: u64, p: &CfgParams) -> Instance<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let g = random_grammar(&mut rng, p);
    let grammar = grammar_wpda::<W>(&mut rng, &g, p.max_weight);
    let tokens = sample_grammar(&mut rng, &g, p.string_len);
    let names: Vec<String> = (0..g.terminals).map(terminal_name).collect();
    let alphabet: Vec<&str> = names.iter().map(String::as_str).collect();
    Instance::new(grammar, tokens, &alphabet).expect("sampled from the grammar")
}

/// A grid of `height = 2 * depth + 1` rows. Moving right scans a random
/// token, moving down opens a parenthesis in the upper half and closes one
/// in the lower half. The pair used depends on the column parity, so a
/// down move only matches one of the same parity.
pub fn grid<W: Semiring + From<i32>>(seed: u64, min_states: usize, depth: usize) -> Wpda<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let height = 2 * depth + 1;
    let width = min_states.div_ceil(height).max(2);
    let id = |r: usize, c: usize| (r * width + c) as StateId;
    let mut b = WpdaBuilder::<W>::new();
    b.paren("(", ")").paren("[", "]");
    let labels = ["t0", "t1", "t2", "t3"];
    for r in 0..height {
        for c in 0..width {
            if c + 1 < width {
                let t = *labels.choose(&mut rng).expect("nonempty");
                b.arc(id(r, c), t, W::from(rng.random_range(0..=10)), id(r, c + 1));
            }
            if r + 1 < height {
                let label = match (r < depth, c % 2) {
                    (true, 0) => "(",
                    (true, _) => "[",
                    (false, 0) => ")",
                    (false, _) => "]",
                };
                b.arc(
                    id(r, c),
                    label,
                    W::from(rng.random_range(0..=10)),
                    id(r + 1, c),
                );
            }
        }
    }
    b.build(0, id(height - 1, width - 1))
        .expect("grid is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    AstarH1,
    AstarH2,
    Lazy,
    Expand,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::AstarH1, Algo::AstarH2, Algo::Lazy, Algo::Expand];

    pub fn name(self) -> &'static str {
        match self {
            Algo::AstarH1 => "astar-h1",
            Algo::AstarH2 => "astar-h2",
            Algo::Lazy => "lazy",
            Algo::Expand => "expand",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Runs `algo` on `wpda`. `expand` gets the given options.
pub fn run_algo<W: Semiring>(
    wpda: &Wpda<W>,
    k: usize,
    algo: Algo,
    expand: ExpandOptions,
) -> Result<KPathResult<W>> {
    match algo {
        Algo::AstarH1 => astar_kshortest(wpda, k, HeuristicKind::Outside),
        Algo::AstarH2 => astar_kshortest(wpda, k, HeuristicKind::Exit),
        Algo::Lazy => lazy_kshortest(wpda, k),
        Algo::Expand => expand_kshortest(wpda, k, expand),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    CfgIntersection,
    Grid,
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cfg-intersection" => Ok(Generator::CfgIntersection),
            "grid" => Ok(Generator::Grid),
            _ => Err(format!("unknown generator `{s}`")),
        }
    }
}

impl Generator {
    pub fn generate<W: Semiring + From<i32>>(self, seed: u64, size: usize) -> Wpda<W> {
        match self {
            Generator::CfgIntersection => cfg_instance(seed, size).wpda,
            Generator::Grid => grid(seed, size, 3),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Minimum number of states of each generated input.
    pub sizes: Vec<usize>,
    pub k_values: Vec<usize>,
    pub algos: Vec<Algo>,
    pub seed: u64,
    pub generator: Generator,
    /// Expansion may use this many times the slowest other run on the same
    /// input, and this many configurations per state.
    pub expand_budget: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1000],
            k_values: vec![1, 10, 100],
            algos: vec![Algo::AstarH1, Algo::Lazy],
            seed: 0,
            generator: Generator::CfgIntersection,
            expand_budget: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub size: usize,
    pub states: usize,
    pub transitions: usize,
    pub algo: Algo,
    pub k: usize,
    pub status: RunStatus,
    pub weights: Vec<Tropical>,
    pub pops: u64,
    pub pushes: u64,
    pub precompute: Duration,
    pub search: Duration,
}

impl BenchRow {
    pub fn total(&self) -> Duration {
        self.precompute + self.search
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Inputs on which two completed runs returned different weights.
    pub mismatches: Vec<String>,
}

impl BenchReport {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Tab-separated table with a header. Without timing the table depends
    /// only on the configuration.
    pub fn table(&self, timing: bool) -> String {
        let mut s = String::from("size\tstates\ttransitions\talgo\tk\tpaths\tbest\tkth\tstatus");
        if timing {
            s.push_str("\tpops\tpushes\tprecompute_ms\tsearch_ms\ttotal_ms");
        }
        s.push('\n');
        for r in &self.rows {
            let show = |w: Option<&Tropical>| w.map_or("-".to_string(), Tropical::to_string);
            let status = match &r.status {
                RunStatus::Ok => "ok",
                RunStatus::Skipped(_) => "skipped",
            };
            let _ = write!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.size,
                r.states,
                r.transitions,
                r.algo,
                r.k,
                r.weights.len(),
                show(r.weights.first()),
                show(r.weights.last()),
                status
            );
            if timing {
                let ms = |d: Duration| d.as_secs_f64() * 1e3;
                let _ = write!(
                    s,
                    "\t{}\t{}\t{:.3}\t{:.3}\t{:.3}",
                    r.pops,
                    r.pushes,
                    ms(r.precompute),
                    ms(r.search),
                    ms(r.total())
                );
            }
            s.push('\n');
        }
        s
    }
}

/// Generates one input per size and runs every algorithm for every k.
///
/// Expansion runs last on each input. Its wall-clock budget is
/// `expand_budget` times the slowest other run (one minute when it is the
/// only algorithm) and its configuration budget is `expand_budget` times the
/// number of states. Runs that hit a limit are reported as skipped.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.sizes.is_empty() || cfg.k_values.is_empty() || cfg.algos.is_empty() {
        return Err(Error::LimitExceeded("nothing to run".into()));
    }
    let mut algos = cfg.algos.clone();
    algos.sort_by_key(|&a| a == Algo::Expand);
    algos.dedup();
    let mut report = BenchReport::default();
    for (i, &size) in cfg.sizes.iter().enumerate() {
        let wpda = cfg
            .generator
            .generate::<Tropical>(cfg.seed.wrapping_add(i as u64), size);
        for &k in &cfg.k_values {
            let mut slowest = Duration::ZERO;
            let mut reference: Option<(Algo, Vec<Tropical>)> = None;
            for &algo in &algos {
                let opts = ExpandOptions {
                    config_limit: (cfg.expand_budget as usize).saturating_mul(wpda.num_states()),
                    deadline: Some(
                        Instant::now()
                            + if slowest.is_zero() {
                                Duration::from_secs(60)
                            } else {
                                slowest * cfg.expand_budget
                            },
                    ),
                    ..ExpandOptions::default()
                };
                let started = Instant::now();
                let outcome = run_algo(&wpda, k, algo, opts);
                let elapsed = started.elapsed();
                let mut row = BenchRow {
                    size,
                    states: wpda.num_states(),
                    transitions: wpda.transitions().len(),
                    algo,
                    k,
                    status: RunStatus::Ok,
                    weights: Vec::new(),
                    pops: 0,
                    pushes: 0,
                    precompute: Duration::ZERO,
                    search: elapsed,
                };
                match outcome {
                    Ok(r) => {
                        row.weights = r.weights();
                        row.pops = r.stats.pops;
                        row.pushes = r.stats.pushes;
                        row.precompute = r.stats.precompute;
                        row.search = r.stats.search;
                        slowest = slowest.max(r.stats.total());
                        match &reference {
                            None => reference = Some((algo, row.weights.clone())),
                            Some((other, w)) if *w != row.weights => report
                                .mismatches
                                .push(format!("size {size}, k {k}: {other} and {algo} differ")),
                            Some(_) => {}
                        }
                    }
                    Err(e @ (Error::LimitExceeded(_) | Error::HeuristicUnavailable(_))) => {
                        row.status = RunStatus::Skipped(e.to_string());
                    }
                    Err(e) => return Err(e),
                }
                report.rows.push(row);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::stack_bound;

    #[test]
    fn small_instances_are_acyclic_and_accept_their_string() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let inst = random_small_instance::<Tropical>(&mut rng, &SmallParams::default());
            assert!(inst.grammar.num_states() <= 8);
            assert!(!inst.wpda.transitions().is_empty(), "{:?}", inst.tokens);
            assert!(stack_bound(&inst.wpda).depth().is_some());
            assert!(crate::inference::shortest_distance(&inst.wpda).unwrap() != Tropical::zero());
        }
    }

    #[test]
    fn cfg_instance_grows_and_is_bounded() {
        let inst = cfg_instance::<Tropical>(3, 2000);
        assert!(inst.wpda.num_states() >= 2000);
        assert!(stack_bound(&inst.wpda).depth().is_some());
        assert!(crate::inference::shortest_distance(&inst.wpda).unwrap() != Tropical::zero());
        let again = cfg_instance::<Tropical>(3, 2000);
        assert_eq!(again.tokens, inst.tokens);
        assert_eq!(again.wpda.transitions(), inst.wpda.transitions());
    }

    #[test]
    fn grid_has_paths() {
        let m = grid::<Tropical>(1, 200, 2);
        assert!(m.num_states() >= 200);
        assert_eq!(stack_bound(&m).depth(), Some(2));
        assert!(crate::inference::shortest_distance(&m).unwrap() != Tropical::zero());
    }

    #[test]
    fn bench_rows_agree_and_are_reproducible() {
        let cfg = BenchConfig {
            sizes: vec![300],
            k_values: vec![1, 20],
            algos: vec![Algo::Lazy, Algo::AstarH1],
            seed: 11,
            ..BenchConfig::default()
        };
        let a = run_bench(&cfg).unwrap();
        assert_eq!(a.rows.len(), 4);
        assert!(a.agree(), "{:?}", a.mismatches);
        assert!(a.rows.iter().all(|r| r.status == RunStatus::Ok));
        let b = run_bench(&cfg).unwrap();
        assert_eq!(a.table(false), b.table(false));
        assert!(a.table(true).lines().next().unwrap().ends_with("total_ms"));
    }

    #[test]
    fn algo_names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        assert!("dijkstra".parse::<Algo>().is_err());
    }
}
