//! Shared inputs for the benchmarks.

use std::sync::Arc;

use hopf_core::fixtures::{barycentric_subdivision, hopf_fixture};
use hopf_core::{AbstractComplex, Labeling};

/// The Hopf fixture after `levels` barycentric subdivisions.
pub fn subdivided_fixture(levels: usize) -> (Arc<AbstractComplex>, Labeling) {
  let (mut c, mut l) = hopf_fixture();
  for _ in 0..levels {
    (c, l) = barycentric_subdivision(&c, &l).expect("fixture subdivides");
  }
  (Arc::new(c), l)
}
