use thiserror::Error;

/// Every failure the library can report. The CLI maps these onto exit codes
/// through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid rational \"{0}\"")]
    InvalidRational(String),

    #[error("search space of {size} tuples is too large for the oracle (budget {budget}); use the fast method")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("ELSV not applicable: (g, n) = ({g}, {n}) is unstable, 2g - 2 + n must be positive")]
    Unstable { g: u32, n: usize },

    #[error("insufficient evaluation grid: rank {rank} of {unknowns} unknowns")]
    InsufficientGrid { rank: usize, unknowns: usize },

    #[error(
        "polynomiality violated at {point:?}: expected {expected}, polynomial gives {predicted}"
    )]
    PolynomialityViolated {
        point: Vec<u32>,
        expected: String,
        predicted: String,
    },

    #[error("hodge table is missing keys: {0:?}")]
    MissingKeys(Vec<String>),

    #[error("invalid duality move: {0}")]
    InvalidMove(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("stabilization emptied the graph (unstable curve)")]
    UnstableCurve,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 0 success, 1 internal, 2 budget, 3 invalid domain, 4 rank failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            Error::Unstable { .. } | Error::InvalidPartition(_) => 3,
            Error::InsufficientGrid { .. } => 4,
            _ => 1,
        }
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeMismatch(..) => "degree_mismatch",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::InvalidRational(_) => "invalid_rational",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Unstable { .. } => "unstable",
            Error::InsufficientGrid { .. } => "insufficient_grid",
            Error::PolynomialityViolated { .. } => "polynomiality_violated",
            Error::MissingKeys(_) => "missing_keys",
            Error::InvalidMove(_) => "invalid_move",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::UnstableCurve => "unstable_curve",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
