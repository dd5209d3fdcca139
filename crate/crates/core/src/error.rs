use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("vectors do not span a saturated sublattice (saturation index {index})")]
    NotSaturated { index: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("point set is not full-dimensional (affine hull has dimension {affine_dim} in ambient dimension {ambient_dim})")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },

    #[error("origin is not an interior point of the polytope")]
    OriginNotInterior,

    #[error("region is unbounded")]
    Unbounded,

    #[error("empty point set")]
    Empty,

    #[error("polytopes live in different lattices")]
    LatticeMismatch,

    #[error("part {part} of the nef-partition does not contain the origin")]
    OriginMissing { part: usize },

    #[error("part {part} of the nef-partition is the single point {{0}}")]
    DegeneratePart { part: usize },

    #[error("Minkowski sum is not full-dimensional (dimension {dim} of {ambient})")]
    SumNotFullDimensional { dim: usize, ambient: usize },

    #[error("Minkowski sum is not reflexive")]
    SumNotReflexive,

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("generator {index} is not primitive")]
    NonPrimitive { index: usize },

    #[error("determinant of block {block} vanishes identically for the chosen coefficients; resample")]
    DegenerateCoefficients { block: usize },

    #[error("point has a zero coordinate and is off the torus")]
    OffTorus,

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Whether the error signals a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
