use thiserror::Error;

/// Errors raised by the algebra engine and the analysis routines.
///
/// Mathematical check *failures* are not errors: they are recorded in a
/// [`ValidationReport`](crate::report::ValidationReport). Errors are reserved
/// for malformed input and for situations where a computation cannot proceed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("scalar {0} is not a signed parameter monomial")]
    NotAMonomial(String),

    #[error("syntax error at column {}: {msg}", .pos + 1)]
    Syntax { pos: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("rewriting budget exhausted after {0} steps (inconsistent presentation data?)")]
    DivergenceBudgetExceeded(u64),

    #[error("element is zero")]
    ZeroElement,

    #[error("no grading homomorphism defined for this presentation")]
    NoGradingDefined,

    #[error("presentation is not reversible: {0}")]
    NotReversible(String),

    #[error("permutation is not in Xi_N: {0}")]
    NotInXi(String),

    #[error("symmetric data requires h_star torus elements")]
    MissingHStar,

    #[error("no predecessor solution for generator x{0}")]
    NoPredecessorSolution(usize),

    #[error("ambiguous predecessor for generator x{k}: candidates {candidates:?}")]
    AmbiguousPredecessor { k: usize, candidates: Vec<usize> },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("endomorphism is not filtered: {0}")]
    NotFiltered(String),

    #[error("degree zero component is singular in degree {0}")]
    SingularDegreeZeroPart(i64),

    #[error("operation requires a single-parameter presentation")]
    MultiParameterUnsupported,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
