//! kronq: exact-arithmetic tools for representations of the graded
//! Kronecker quiver (two vertices, arrows of degree 0 and degree `d`).
//!
//! The crate classifies and decomposes representations into the four
//! indecomposable families, computes the bigraded cohomology of their
//! endomorphism complexes, and, in the `d = 1 - n` model, scans for the
//! unique indecomposable whose cohomology can be that of a closed oriented
//! n-manifold (it is the one-dimensional torsion class, with the dimension
//! profile of the n-sphere).
//!
//! All arithmetic is exact: rationals or a small prime field. The batch
//! entry points (exhaustive oracle checks, admissibility scans, per-chain
//! reductions) run data-parallel under the default `parallel` feature and
//! sequentially without it; results are identical either way.

pub mod decompose;
pub mod ext;
pub mod graded;
pub mod matrix;
pub mod model;
pub mod oracle;
mod par;
pub mod rep;
pub mod scalar;

pub use decompose::{decompose, Decomposition};
pub use ext::{closed_form, cohomology, hom_between, BigradedDims};
pub use graded::{GradedMap, GradedVectorSpace};
pub use model::ModelParams;
pub use rep::{normal_form, Family, IndecomposableLabel, Intertwiner, Representation};
pub use scalar::{Scalar, ScalarField};
