//! `wpda`: shortest distance and k shortest paths of weighted pushdown
//! automata from text files.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input (malformed
//! file, ill-formed or unbounded automaton, unusable heuristic), 3 resource
//! limit hit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wpda_kbest::automata::{
    check_bounded_stack, compile_string, intersect, BoundReport, LimitKind, Wfsa, Wpda,
};
use wpda_kbest::bench::{run_bench, Algo, BenchConfig, Generator};
use wpda_kbest::format::{
    parse_parens, parse_wfsa, parse_wpda, write_parens, write_wfsa, write_wpda,
};
use wpda_kbest::inference::shortest_distance;
use wpda_kbest::oracle::{expand, ExpandOptions};
use wpda_kbest::semiring::{Semiring, Tropical};
use wpda_kbest::{bench, fixtures, Error};

#[derive(Parser)]
#[command(
    name = "wpda",
    version,
    about = "Weighted pushdown automata: distances and k shortest paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the k lightest accepting paths, one per line.
    Kshortest(KshortestArgs),
    /// Intersect with an acceptor or a string and print the product.
    Intersect(IntersectArgs),
    /// Print the weight of the best accepting path, or `none`.
    Distance(DistanceArgs),
    /// Check well-formedness and explore the stack depth.
    Validate(ValidateArgs),
    /// Print the equivalent finite acceptor over (state, stack) pairs.
    Expand(ExpandArgs),
    /// Time the searches on generated inputs.
    Bench(BenchArgs),
    /// Print a built-in automaton or its parenthesis file.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Input {
    /// Automaton file.
    #[arg(long, short)]
    automaton: PathBuf,
    /// Parenthesis file, one `open close` pair per line.
    #[arg(long, short)]
    parens: Option<PathBuf>,
}

#[derive(Args)]
struct Operand {
    /// Intersect with this acceptor file first.
    #[arg(long, conflicts_with = "string")]
    fsa: Option<PathBuf>,
    /// Intersect with this whitespace-separated string first.
    #[arg(long)]
    string: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    AstarH1,
    AstarH2,
    Lazy,
    Expand,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::AstarH1 => Algo::AstarH1,
            AlgoArg::AstarH2 => Algo::AstarH2,
            AlgoArg::Lazy => Algo::Lazy,
            AlgoArg::Expand => Algo::Expand,
        }
    }
}

#[derive(Args)]
struct KshortestArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    operand: Operand,
    /// Number of paths to print.
    #[arg(long, short, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "lazy")]
    algo: AlgoArg,
    /// Keep parentheses in the printed yield.
    #[arg(long)]
    keep_parens: bool,
    /// Print transitions as `src:label:weight` instead of the yield.
    #[arg(long)]
    arcs: bool,
    /// Report search statistics on stderr, or to `--stats-out`.
    #[arg(long)]
    stats: bool,
    /// File for the `--stats` report.
    #[arg(long, requires = "stats")]
    stats_out: Option<PathBuf>,
}

#[derive(Args)]
struct IntersectArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    operand: Operand,
    /// Write the product here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    operand: Operand,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 1024)]
    depth_limit: usize,
    #[arg(long, default_value_t = 1_000_000)]
    config_limit: usize,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 1024)]
    depth_limit: usize,
    #[arg(long, default_value_t = 10_000_000)]
    config_limit: usize,
    /// Write the acceptor here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Minimum state counts of the generated inputs.
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    k_values: Vec<usize>,
    /// Any of astar-h1, astar-h2, lazy and expand.
    #[arg(long, value_delimiter = ',', default_value = "astar-h1,lazy")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `cfg-intersection` or `grid`.
    #[arg(long, default_value = "cfg-intersection")]
    generator: String,
    /// Expansion budget as a multiple of the slowest other run.
    #[arg(long, default_value_t = 10)]
    expand_budget: u32,
    /// Leave out the timing columns, which makes the table reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Write the table here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(fixtures::NAMES))]
    name: String,
    /// Print the parenthesis file instead of the automaton.
    #[arg(long)]
    parens: bool,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LimitExceeded(_) | Error::NonTerminating(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> CliResult<Wpda<Tropical>> {
    let text = read(&input.automaton)?;
    let parens = match &input.parens {
        Some(p) => parse_parens(&read(p)?)?,
        None => Vec::new(),
    };
    Ok(parse_wpda(&text, &parens)?)
}

fn load_operand(op: &Operand) -> CliResult<Option<Wfsa<Tropical>>> {
    if let Some(path) = &op.fsa {
        return Ok(Some(parse_wfsa(&read(path)?)?));
    }
    if let Some(s) = &op.string {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        return Ok(Some(compile_string(&tokens, &tokens)?));
    }
    Ok(None)
}

fn load_with_operand(input: &Input, op: &Operand) -> CliResult<Wpda<Tropical>> {
    let m = load(input)?;
    match load_operand(op)? {
        Some(a) => Ok(intersect(&m, &a)?),
        None => Ok(m),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn kshortest(args: &KshortestArgs) -> CliResult {
    let m = load_with_operand(&args.input, &args.operand)?;
    let result = bench::run_algo(&m, args.k, args.algo.into(), ExpandOptions::default())?;
    let mut text = String::new();
    for p in &result.paths {
        let body = if args.arcs {
            p.path
                .0
                .iter()
                .map(|&e| {
                    let t = m.transition(e);
                    format!("{}:{}:{}", t.src, m.label_text(t.label), t.weight)
                })
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            m.yield_tokens(&p.path, args.keep_parens).join(" ")
        };
        text.push_str(&format!("{}\t{}\n", p.weight, body));
    }
    emit(None, &text)?;
    if args.stats {
        let report = result.stats.report();
        match &args.stats_out {
            Some(path) => emit(Some(path), &report)?,
            None => eprint!("{report}"),
        }
    }
    Ok(())
}

fn intersect_cmd(args: &IntersectArgs) -> CliResult {
    if args.operand.fsa.is_none() && args.operand.string.is_none() {
        return Err(usage("intersect needs --fsa or --string"));
    }
    let m = load_with_operand(&args.input, &args.operand)?;
    if m.transitions().is_empty() {
        eprintln!("the intersection is empty");
    }
    emit(args.out.as_deref(), &write_wpda(&m))
}

fn distance(args: &DistanceArgs) -> CliResult {
    let m = load_with_operand(&args.input, &args.operand)?;
    let d = shortest_distance(&m)?;
    let text = if d.is_zero() {
        "none".to_string()
    } else {
        d.to_string()
    };
    emit(None, &format!("{text}\n"))
}

fn validate(args: &ValidateArgs) -> CliResult {
    let text = read(&args.input.automaton)?;
    let parens = match &args.input.parens {
        Some(p) => parse_parens(&read(p)?)?,
        None => Vec::new(),
    };
    let m = parse_wpda::<Tropical>(&text, &parens)?;
    println!(
        "states={} transitions={} parens={}",
        m.num_states(),
        m.transitions().len(),
        m.parens().len()
    );
    match check_bounded_stack(&m, args.depth_limit, args.config_limit) {
        BoundReport::Bounded {
            depth,
            configurations,
        } => {
            println!("stack=bounded depth={depth} configurations={configurations}");
            Ok(())
        }
        BoundReport::LimitExceeded {
            depth,
            configurations,
            reason,
        } => {
            let what = match reason {
                LimitKind::Depth => "depth",
                LimitKind::Configurations => "configurations",
            };
            println!(
                "stack=limit-exceeded reason={what} depth={depth} configurations={configurations}"
            );
            Err(Failure {
                code: 2,
                message: "no bounded stack found within the limits".into(),
            })
        }
    }
}

fn expand_cmd(args: &ExpandArgs) -> CliResult {
    let m = load(&args.input)?;
    let opts = ExpandOptions {
        depth_limit: args.depth_limit,
        config_limit: args.config_limit,
        deadline: None,
    };
    let exp = expand(&m, opts)?;
    emit(args.out.as_deref(), &write_wfsa(&exp.wfsa))
}

fn bench_cmd(args: &BenchArgs) -> CliResult {
    let algos = args
        .algos
        .iter()
        .map(|a| a.parse::<Algo>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let generator = args.generator.parse::<Generator>().map_err(usage)?;
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        k_values: args.k_values.clone(),
        algos,
        seed: args.seed,
        generator,
        expand_budget: args.expand_budget,
    };
    let report = run_bench(&cfg)?;
    emit(args.out.as_deref(), &report.table(!args.no_timing))?;
    if report.agree() {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: report.mismatches.join("\n"),
        })
    }
}

fn fixture(args: &FixtureArgs) -> CliResult {
    let m = fixtures::by_name::<Tropical>(&args.name).ok_or_else(|| usage("unknown fixture"))?;
    let text = if args.parens {
        write_parens(&m)
    } else {
        write_wpda(&m)
    };
    emit(None, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Kshortest(a) => kshortest(a),
        Command::Intersect(a) => intersect_cmd(a),
        Command::Distance(a) => distance(a),
        Command::Validate(a) => validate(a),
        Command::Expand(a) => expand_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Fixture(a) => fixture(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("wpda: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
