use thiserror::Error;

/// Errors returned by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("expected a tall polynomial matrix (rows > cols), got {rows}x{cols}")]
    NotTall { rows: usize, cols: usize },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("resultant undefined: a polynomial has a zero leading coefficient")]
    DegenerateResultant,
    #[error("polynomial matrix is not zeroless: rank {rank} at z = {re} + {im}i")]
    NotZeroless { re: f64, im: f64, rank: usize },
    #[error("no stable left inverse of degree <= {max_degree} (best residual {best_residual:e})")]
    NoStableInverseWithinDegree { max_degree: usize, best_residual: f64 },
    #[error("constant coefficient is rank deficient (rank {rank} < {cols})")]
    RankDeficientAtZero { rank: usize, cols: usize },
    #[error("matrix is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("genericity violation: {0}")]
    GenericityViolation(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("insufficient data: {observations} observations for {parameters} parameters per equation")]
    InsufficientData { observations: usize, parameters: usize },
    #[error("collinear regressors (condition number {condition:e})")]
    Collinear { condition: f64 },
    #[error("eigen-decomposition failed: {0}")]
    EigenFailure(String),
    #[error("inconsistent DGP draw: rank of A(1) is {rank}, expected {expected}")]
    InconsistentDraw { rank: usize, expected: usize },
    #[error("autoregressive polynomial is explosive: root with modulus {modulus}")]
    Explosive { modulus: f64 },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("too many failed replications: {failures} (cap {cap})")]
    TooManyFailures { failures: usize, cap: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NonSquare { .. } => "non_square",
            Error::NotTall { .. } => "not_tall",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::DegenerateResultant => "degenerate_resultant",
            Error::NotZeroless { .. } => "not_zeroless",
            Error::NoStableInverseWithinDegree { .. } => "no_stable_inverse_within_degree",
            Error::RankDeficientAtZero { .. } => "rank_deficient_at_zero",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::GenericityViolation(_) => "genericity_violation",
            Error::SingularMatrix => "singular_matrix",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::Collinear { .. } => "collinear",
            Error::EigenFailure(_) => "eigen_failure",
            Error::InconsistentDraw { .. } => "inconsistent_draw",
            Error::Explosive { .. } => "explosive",
            Error::EmptyInput(_) => "empty_input",
            Error::InvalidConfig(_) => "invalid_config",
            Error::TooManyFailures { .. } => "too_many_failures",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
