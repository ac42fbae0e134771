use thiserror::Error;

use crate::automata::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight `{0}`")]
    BadWeight(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("automaton is not well formed: {0}")]
    Validation(ValidationReport),

    #[error("token `{0}` is not in the alphabet")]
    UnknownToken(String),

    #[error("acceptor label `{0}` is not an input symbol of the pushdown automaton")]
    AlphabetMismatch(String),

    #[error("acceptor operand must be epsilon-free")]
    EpsilonInOperand,

    #[error("stack is unbounded or deeper than the configured limit: {0}")]
    UnboundedInput(String),

    #[error("heuristic unavailable: {0}")]
    HeuristicUnavailable(&'static str),

    #[error("relaxation cap of {0} exceeded; negative cycle or unbounded input suspected")]
    NonTerminating(u64),

    #[error("derivation still contains an unresolved promise")]
    UnresolvedPromise,

    #[error("resource limit exceeded: {0}")]
    LimitExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
