//! Exact computation of the Hopf invariant of simplicial maps `S^(2n-1) -> S^n`.
//!
//! The source is a triangulated sphere given by its facets, the target is the boundary of the
//! `(n+1)`-simplex, and the map is a vertex labeling with labels `1..=n+2`. The invariant is
//! obtained by pulling back a degree-`n` cocycle, solving `δθ = f*ω` exactly over the rationals,
//! and pairing `θ ⌣ f*ω` with the fundamental cycle of the source.
//!
//! ```
//! use std::sync::Arc;
//!
//! use hopf_core::{compute_hopf, fixtures, HopfOptions};
//!
//! let (complex, labeling) = fixtures::hopf_fixture();
//! let result = compute_hopf(&Arc::new(complex), &labeling, &HopfOptions::default()).unwrap();
//! assert_eq!(result.hopf.magnitude(), &1u32.into());
//! ```

pub mod cochain;
pub mod complex;
pub mod engine;
pub mod fixtures;
pub mod pullback;
pub mod simplex;
pub mod solver;
pub mod sparse;

pub use cochain::{coboundary_matrix, Chain, Cochain, CochainError};
pub use complex::{AbstractComplex, ComplexError, FundamentalCycle};
pub use engine::{
  compute_hopf, consistency_suite, label_permutation_check, ConsistencyReport, EngineError, HopfOptions,
  HopfResult, HopfStats, Variant,
};
pub use pullback::{Labeling, LabelingError, OmegaChoice, TargetSphere};
pub use simplex::{canonical_sign, OrientedSimplex, SortedSimplex, VertexId};
pub use solver::{kernel_perturbation, LinearSystem, PivotRule, SolveError, SolveReport};
pub use sparse::{MatrixError, SparseRationalMatrix};

/// Arbitrary-precision rational used for all cochain values and matrix entries.
pub type Rational = num_rational::BigRational;

/// Integer as a [`Rational`].
pub fn rat(v: i64) -> Rational {
  Rational::from_integer(v.into())
}
