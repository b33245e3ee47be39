//! Crate-wide error type.
//!
//! Every failure carries a witness: the offending arrows, the object and
//! degree where an acyclicity or quasi-isomorphism test breaks down, the
//! basis vector that escapes a subspace.  Reports quote these verbatim.

use thiserror::Error;

/// Errors produced by validation and by the algebraic operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("missing composite: arrows `{g}` and `{h}` are composable but `comp` has no entry")]
    MissingComposite { g: String, h: String },

    #[error("non-associative composition on triple (`{g}`, `{h}`, `{k}`)")]
    NonAssociative { g: String, h: String, k: String },

    #[error("bad unit for object `{object}`: {reason}")]
    BadUnit { object: String, reason: String },

    #[error("bad inverse for arrow `{arrow}`: {reason}")]
    BadInverse { arrow: String, reason: String },

    #[error("face/degeneracy index {index} out of range for strings of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid action: {reason}")]
    InvalidAction { reason: String },

    #[error("subspace not contained: witness vector outside the ambient span")]
    NotContained,

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric at entry ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: {reason}")]
    DimMismatch { reason: String },

    #[error("structure equations violated: first residual at k={k}")]
    StructureEquationsViolated { k: usize },

    #[error("morphism equations violated: first residual at k={k}")]
    InvalidMorphism { k: usize },

    #[error("complex is not acyclic: H^{degree} is nonzero at object `{object}`")]
    NotAcyclic { object: String, degree: i64 },

    #[error("not a quasi-isomorphism: fiber cohomology map not invertible at object `{object}`, degree {degree}")]
    NotQuasiIso { object: String, degree: i64 },

    #[error("representation is not unital: {reason}")]
    NotUnital { reason: String },

    #[error("cohomology dimensions differ along an orbit: objects `{x}` and `{y}` at degree {degree}")]
    OrbitDimMismatch { x: String, y: String, degree: i64 },

    #[error("operator fails the Leibniz identity on a spanning pair")]
    NotLeibniz,

    #[error("not a functor: {reason}")]
    NotAFunctor { reason: String },

    #[error("representation is not strict: R_{k} is nonzero")]
    NotStrict { k: usize },

    #[error("action is not free: point `{point}` has nontrivial stabilizer")]
    NotFree { point: String },

    #[error("schema error at {path}: {reason}")]
    SchemaError { path: String, reason: String },

    #[error("dangling reference at {path}: `{name}` is not defined")]
    DanglingReference { path: String, name: String },

    #[error("groupoid axioms violated: {0:?}")]
    AxiomViolation(Vec<Box<Error>>),

    #[error("tensor R_{k} declared nonzero but k exceeds {max}: the target Hom bundle End^(1-k) is zero beyond the amplitude width")]
    TruncationViolation { k: usize, max: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
