use std::fmt;

use crate::automaton::StateId;

/// Why a sorter or recognizer rejected an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// Some state has two distinct incoming labels.
    InputConsistency { state: StateId },
    /// The online sorter met a directed cycle.
    Cycle,
    /// An equally-labeled edge already leaves a state strictly inside the
    /// predecessor range of the state being inserted.
    Type1 { state: StateId },
    /// A predecessor of the state being inserted lies inside a range
    /// reserved for the same label by another state.
    Type2 { state: StateId },
    /// The candidate order failed the final linear-time check.
    Verification,
    /// No satisfying assignment exists for the 2-SAT encoding.
    Unsatisfiable,
}

impl Reason {
    /// Short tag used by the command line front end, e.g. `type1`.
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::InputConsistency { .. } => "input-consistency",
            Reason::Cycle => "cycle",
            Reason::Type1 { .. } => "type1",
            Reason::Type2 { .. } => "type2",
            Reason::Verification => "order",
            Reason::Unsatisfiable => "unsat",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::InputConsistency { state } => {
                write!(f, "state {state} has two distinct incoming labels")
            }
            Reason::Cycle => write!(f, "cycle found"),
            Reason::Type1 { state } => write!(f, "inconsistency of type 1 inserting state {state}"),
            Reason::Type2 { state } => write!(f, "inconsistency of type 2 inserting state {state}"),
            Reason::Verification => write!(f, "candidate order violates the Wheeler properties"),
            Reason::Unsatisfiable => write!(f, "ordering constraints are unsatisfiable"),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("multiple sources: states {0} and {1} both have in-degree 0")]
    MultipleSources(StateId, StateId),
    #[error("source state {0} has incoming edges")]
    SourceHasIncoming(StateId),
    #[error("state {0} is not reachable from the source")]
    UnreachableState(StateId),
    #[error("state id {id} out of range (automaton has {n_states} states)")]
    StateOutOfRange { id: usize, n_states: usize },
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("duplicate edge ({from}, {to}, {label})")]
    DuplicateEdge {
        from: StateId,
        to: StateId,
        label: String,
    },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("'#' is reserved and cannot appear in alphabet symbol `{0}`")]
    HashInAlphabet(String),
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state {state} is not input-consistent: incoming labels `{first}` and `{second}`")]
    NotInputConsistent {
        state: StateId,
        first: String,
        second: String,
    },
    #[error("automaton contains a directed cycle")]
    Cyclic,
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("nondeterminism degree {0} is not supported (at most 2)")]
    DegreeTooHigh(usize),
    #[error("brute force search limited to 10 states, got {0}")]
    TooLarge(usize),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("not Wheeler: {0}")]
    NotWheeler(Reason),
    #[error("reached state set is not an interval of the given order")]
    IntervalViolation,
    #[error("output exceeded the limit of {0} states")]
    OutputLimitExceeded(usize),
    #[error("malformed index: {0}")]
    MalformedIndex(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
