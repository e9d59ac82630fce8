use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient sizes differ: {0} vs {1}")]
    MixedSize(usize, usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("generator index ({row},{col}) out of range for n = {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("term budget of {budget} exceeded ({needed} terms required)")]
    BudgetExceeded { budget: u128, needed: u128 },

    #[error("not a magic unitary: max violation {violation:.3e} (tolerance {tol:.1e})")]
    NotMagic { violation: f64, tol: f64 },

    #[error("not a complex Hadamard matrix: max deviation {deviation:.3e}")]
    NotHadamard { deviation: f64 },

    #[error("{what} is not a projection: deviation {deviation:.3e}")]
    NotProjection { what: String, deviation: f64 },

    #[error("cocycle relations violated: residual {residual:.3e}")]
    InvalidCocycle { residual: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
