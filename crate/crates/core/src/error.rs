use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("unknown lattice name `{0}`")]
    UnknownLattice(String),
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("not a sublattice: {0}")]
    NotASublattice(String),
    #[error("sublattice is not primitive in its ambient lattice")]
    NotPrimitive,
    #[error("glue data inconsistent: {0}")]
    Glue(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("invalid Weierstrass model: {0}")]
    Weierstrass(String),
    #[error("model is not minimal at {place}: {hint}")]
    NonMinimal { place: String, hint: String },
    #[error("invalid fibration data: {0}")]
    Fibration(String),
    #[error("not a linear chain: {0}")]
    NotAChain(String),
    #[error("unknown invariant lattice `{0}`")]
    UnknownTableRow(String),
    #[error("invalid curve configuration: {0}")]
    Configuration(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
