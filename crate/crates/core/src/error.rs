use thiserror::Error;

/// Errors raised by the algebraic kernels and the report drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix J{index} is not skew-symmetric at entry ({row}, {col})")]
    NotSkew { index: usize, row: usize, col: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("composition elements from different families ({0} and {1})")]
    FamilyMismatch(&'static str, &'static str),

    #[error("out of scope: j has a nontrivial kernel of dimension {0} (Euclidean factor)")]
    EuclideanFactor(usize),

    #[error("not of Heisenberg type: {0}")]
    NotHType(String),

    #[error("unsupported center dimension {0}: irreducible module dimension known only for dim z in {{1, 3, 7}}")]
    UnsupportedCenterDim(usize),

    #[error("volume element does not square to the identity")]
    VolumeElementNotInvolution,
}

pub type Result<T> = std::result::Result<T, Error>;
