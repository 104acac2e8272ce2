//! Exact torus-level Hilbert–Mumford stability for tuples of hypersurfaces.
//!
//! A tuple `T = (f_1, ..., f_k)` of linearly independent degree-`d` forms in
//! `n + 1` variables is a point of a Grassmannian. Its stability with respect
//! to the diagonal torus is decided through the affine weight `ω(T, λ)` over a
//! finite set of candidate one-parameter subgroups `λ`. The [`lct`] module
//! provides a Newton-polyhedron log canonical threshold oracle and the
//! lct-based stability criteria built on these weights.
//!
//! All arithmetic is exact: integers for weights, [`Rational`] for
//! coefficients, thresholds and walls.

pub mod assignment;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod lct;
pub mod linalg;
pub mod opssearch;
pub mod weights;

pub use error::{DecompositionFailure, Error, Result};
pub use forms::{HyperplaneForm, HypersurfaceForm, ProjectivePoint, ProjectiveTransform, Transformable, TuplePoint};
pub use lattice::{ExponentVector, NormalizedOps, Permutation};
pub use weights::{Classification, LambdaVerdict, Mode, VgitConfig};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
