use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient of q^{exponent} requested but series is only known below q^{order}")]
    QueryBeyondTruncation {
        exponent: Box<BigRational>,
        order: Box<BigRational>,
    },

    #[error("series is not invertible (zero series)")]
    NotInvertible,

    #[error("enumeration exceeded budget of {budget} nodes")]
    BoundTooLarge { budget: u64 },

    #[error("generator rows are linearly dependent")]
    RankDeficient,

    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),

    #[error("gram matrix entry ({row}, {col}) = {value} is not an integer")]
    NotIntegral {
        row: usize,
        col: usize,
        value: BigRational,
    },

    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),

    #[error("unsupported modularity level {0}")]
    UnsupportedLevel(u32),

    #[error("no basis monomial has weight {weight} for level {ell}")]
    EmptyBasis { ell: u32, weight: u32 },

    #[error("linear system is singular; supply more theta coefficients")]
    SingularSystem,

    #[error("theta coefficient at norm {norm} must be known to solve the system")]
    MissingCoefficient { norm: BigRational },

    #[error("solution predicts {predicted} vectors of norm {norm} but {known} were given")]
    InconsistentSurplus {
        norm: Box<BigRational>,
        predicted: Box<BigRational>,
        known: Box<BigRational>,
    },

    #[error("code enumeration needs {size} combinations, budget is {budget}")]
    EnumerationTooLarge { size: u128, budget: u128 },

    #[error("tail bound {bound:e} does not meet requested precision {eps:e}")]
    TailBoundNotMet { bound: f64, eps: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
