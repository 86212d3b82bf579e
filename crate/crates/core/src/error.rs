use thiserror::Error;

/// Errors produced by parsing, construction and the fixpoint engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Regex text does not conform to the grammar.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    /// A binary operation received operands over different alphabets.
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,

    /// A configured size guard was exceeded.
    #[error("{guard} guard exceeded ({actual} > {limit})")]
    Limit {
        guard: &'static str,
        limit: usize,
        actual: usize,
    },

    /// The wall-clock guard was exceeded.
    #[error("wall-clock guard exceeded after {elapsed_ms} ms (limit {limit_ms} ms)")]
    WallClock { elapsed_ms: u64, limit_ms: u64 },

    /// Basis selector not recognized.
    #[error("unknown basis `{0}`")]
    UnknownBasis(String),

    /// A user-supplied monoid table is not a monoid.
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    /// A user-supplied automaton table is malformed.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    /// Covering queries need a level closed under complement.
    #[error("covering is not supported at half level `{0}`")]
    CoveringNeedsBooleanLevel(String),

    /// Level selector not recognized.
    #[error("unknown level `{0}`")]
    UnknownLevel(String),

    /// Oracle precondition violated (e.g. subword bound too large).
    #[error("oracle precondition violated: {0}")]
    OraclePrecondition(String),
}

impl Error {
    /// True for guard breaches (size or wall clock), which map to a distinct
    /// process exit code in the CLI.
    pub fn is_guard_breach(&self) -> bool {
        matches!(self, Error::Limit { .. } | Error::WallClock { .. })
    }
}
