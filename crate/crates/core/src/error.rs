use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("scaling entry d[{index}] = {value} is outside [0, 1]")]
    ScalingOutOfRange { index: usize, value: f64 },

    #[error("matrix is singular (pivot magnitude below {threshold:e})")]
    SingularMatrix { threshold: f64 },

    #[error("dimension {n} exceeds the limit {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("dimension {n} is below the minimum {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("matrix is not a B-matrix")]
    NotBMatrix,

    #[error("matrix is not strictly diagonally dominant with positive diagonal")]
    NotSdd,

    #[error("matrix is not a strictly diagonally dominant M-matrix")]
    NotSddMMatrix,

    #[error("matrix is not a P-matrix")]
    NotPMatrix,

    #[error("sample budget exceeded: {requested} evaluations requested, limit is {limit}")]
    SampleBudgetExceeded { requested: u128, limit: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no complementary support produced an admissible solution")]
    NoSolutionFound,

    #[error("parameter {name} = {value} is out of range ({range})")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
