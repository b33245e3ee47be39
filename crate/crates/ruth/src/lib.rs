//! Exact computations with representations up to homotopy of finite groupoids.
//!
//! A finite groupoid `G` acts on graded vector bundles not just through honest
//! actions but through *representations up to homotopy*: a bounded graded
//! bundle together with a family of structure tensors `R_0, R_1, R_2, ...`
//! (a fiberwise differential, a quasi-action, and higher homotopies) whose
//! structure equations are equivalent to a square-zero degree-one operator `D`
//! on the `E`-valued cochain space `C(G; E)`.  Everything in this crate is
//! computed over an exact field — by default arbitrary-precision rationals —
//! so every identity (Leibniz, `D^2 = 0`, homotopy equations, spectral-sequence
//! convergence) is checked with exact equality rather than tolerances.
//!
//! The main pieces:
//!
//! - [`groupoid`]: finite groupoids, nerves, actions, orbits, Haar/cutoff data.
//! - [`linalg`]: sparse exact linear algebra (rank, kernels, echelon bases).
//! - [`cochain`]: cochains and `End`/`Hom`-valued tensors with the signed
//!   star products and face-sum operators.
//! - [`rep`]: representations up to homotopy, structure verification,
//!   cohomology, duals, normalized subspaces.
//! - [`morphism`]: morphisms, mapping cones, Hom complexes.
//! - [`functor`]: groupoid morphisms and pullback of representations.
//! - [`sympow`]: strict symmetric powers with the Koszul sign rule.
//! - [`homotopy`]: contractions, geometric-series homotopies, inversion of
//!   quasi-isomorphisms and transfer to cohomology.
//! - [`spectral`]: the cocycle-degree spectral sequence, the averaging
//!   operator and the vanishing theorem checks.
//! - [`resolution`]: the simplicial resolution by free actions and its
//!   exactness machinery.
//! - [`mod@format`], [`workspace`], [`report`]: the JSON interchange format and
//!   the command layer used by the `ruth` binary.
//!
//! The numeric kernels are generic over a [`Scalar`] field; the concrete
//! aliases below fix the exact rational instantiation used by the CLI and the
//! test suite.

pub mod cochain;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod functor;
pub mod groupoid;
pub mod homotopy;
pub mod linalg;
pub mod morphism;
pub mod rep;
pub mod report;
pub mod resolution;
pub mod scalar;
pub mod spectral;
pub mod sympow;
pub mod workspace;

pub use error::Error;
pub use scalar::Scalar;

/// The exact scalar type used by the CLI and the interchange format.
pub type Rational = num_rational::BigRational;

/// Sparse matrix over exact rationals.
pub type RationalMatrix = linalg::Matrix<Rational>;

/// Echelon-canonical subspace basis over exact rationals.
pub type RationalSubspace = linalg::Subspace<Rational>;

/// Representation up to homotopy over exact rationals.
pub type RationalRep = rep::Rep<Rational>;

/// Morphism of representations up to homotopy over exact rationals.
pub type RationalMorphism = morphism::Morphism<Rational>;

