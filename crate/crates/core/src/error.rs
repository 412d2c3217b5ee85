use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("{what}: size {actual} exceeds the configured cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("parse error at line {line}, byte {byte}: {message}")]
    Parse {
        line: usize,
        byte: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("input graph contains a cycle")]
    NotAForest,

    #[error("pattern order {pattern} does not divide host order {host}")]
    Divisibility { host: usize, pattern: usize },

    #[error("a + 2b = {got} but f(H) = {expected}")]
    Arity { got: usize, expected: usize },

    #[error("pattern is not in the family H-tilde, so the odd case of the Q construction does not apply")]
    NotInHtilde,

    #[error("internal construction failure: {0}")]
    ConstructionBug(String),

    #[error("embedding failed at recursion level {level} ({})", if *.budget_exhausted { "node budget exhausted" } else { "search space exhausted" })]
    EmbedFail {
        level: usize,
        budget_exhausted: bool,
        detail: String,
    },

    #[error("no common-neighbourhood chain of length {s} exists")]
    ChainFail { s: usize },

    #[error("clusters must have equal sizes, found {0:?}")]
    ClusterSize(Vec<usize>),

    #[error("structure {0} is not one of the K4-structure cases")]
    UnknownCase(String),

    #[error("clusters {0} and {1} are not joined by a double-edge")]
    NotDoubleEdge(usize, usize),

    #[error("construction does not apply: {0}")]
    NotApplicable(String),

    #[error("generator gave up after {attempts} attempts (best girth {best_girth:?}, best alpha bound {best_alpha:?})")]
    GenFail {
        attempts: usize,
        best_girth: Option<usize>,
        best_alpha: Option<usize>,
    },

    #[error("bad n: {0}")]
    BadN(String),

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn cap(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::CapExceeded {
            what,
            limit,
            actual,
        }
    }
}
