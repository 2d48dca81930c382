use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid rational {0:?}")]
    BadRational(String),

    #[error("unknown builtin algebra {0:?}")]
    UnknownBuiltin(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("tower cap {cap} is insufficient; need cap >= {required}")]
    CapInsufficient { cap: i32, required: i32 },

    #[error("prolong component of degree {0} is missing; build lower degrees first")]
    MissingComponent(i32),

    #[error("the Cartan step needs g_- abelian and concentrated in degree -1")]
    NotDepthOne,

    #[error("g0 element {0} is not a degree-0 derivation of g_-")]
    NotDerivation(usize),

    #[error("g0 is not closed under the commutator: [{0}, {1}] leaves the span")]
    NotSubalgebra(usize, usize),

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("bracket of fields {0} and {1} is not in the span of the given fields")]
    NotClosed(usize, usize),

    #[error("spanning fields are dependent at the point")]
    DependentFields,

    #[error("irregular point: {0}")]
    Irregular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
