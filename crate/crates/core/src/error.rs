use thiserror::Error;

/// Errors raised by the exact kernels and the transforms built on them.
///
/// Vectors are carried in their display form so that the error type does not
/// depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,

    #[error("cone is not pointed: it contains the line spanned by {witness}")]
    NotPointed { witness: String },

    #[error("point set is not full-dimensional (dimension {dim} in ambient dimension {ambient})")]
    Degenerate { dim: usize, ambient: usize },

    #[error("{0} is not a vertex of the polytope")]
    NotAVertex(String),

    #[error("polytope is not simple at vertex {0}")]
    NotSimple(String),

    /// The named operation is only implemented for smooth polytopes.
    #[error("{0} implemented for smooth polytopes")]
    NotSmooth(&'static str),

    #[error("ray {0} lies outside every cone")]
    RayOutsideFan(String),

    #[error("limits exceeded: {0}")]
    LimitsExceeded(String),

    #[error("h-vector comparison requires normality")]
    RequiresNormality,

    #[error("{0} is not a height-3 element of the monoid")]
    NotHeightThree(String),

    #[error("not a proper face: {0}")]
    NotAFace(String),

    #[error("polytope is not a lattice polytope: vertex {0} is not integral")]
    NonIntegralVertex(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
