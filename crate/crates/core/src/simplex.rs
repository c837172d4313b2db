//! Vertex ids and simplices in sorted and oriented form.

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Dense, 0-based vertex id of a normalized complex.
pub type VertexId = u32;

pub(crate) type VertexBuf = SmallVec<[VertexId; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("simplex has a repeated vertex {vertex}")]
pub struct DegenerateSimplex {
  pub vertex: VertexId,
}

/// A simplex stored as a strictly increasing vertex tuple.
///
/// The numeric order of vertex ids is the global order used by the cup product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortedSimplex(VertexBuf);

impl SortedSimplex {
  /// Builds a sorted simplex from vertices that are already strictly increasing.
  ///
  /// Returns `None` if the input is not strictly increasing.
  pub fn from_sorted(vertices: &[VertexId]) -> Option<Self> {
    if vertices.windows(2).all(|w| w[0] < w[1]) {
      Some(Self(vertices.iter().copied().collect()))
    } else {
      None
    }
  }

  /// Sorts `vertices`, discarding orientation.
  pub fn new(vertices: &[VertexId]) -> Result<Self, DegenerateSimplex> {
    canonical_sign(vertices).map(|(s, _)| s)
  }

  pub(crate) fn from_buf_unchecked(buf: VertexBuf) -> Self {
    debug_assert!(buf.windows(2).all(|w| w[0] < w[1]));
    Self(buf)
  }

  pub fn vertices(&self) -> &[VertexId] {
    &self.0
  }

  /// Dimension; the empty simplex is not representable through the public constructors.
  pub fn dim(&self) -> usize {
    self.0.len() - 1
  }

  pub fn len(&self) -> usize {
    self.0.len()
  }

  pub fn is_empty(&self) -> bool {
    self.0.is_empty()
  }

  pub fn contains(&self, v: VertexId) -> bool {
    self.0.binary_search(&v).is_ok()
  }

  /// The face obtained by omitting the vertex at position `i`.
  pub fn omit(&self, i: usize) -> SortedSimplex {
    let mut buf = self.0.clone();
    buf.remove(i);
    SortedSimplex(buf)
  }

  /// The face spanned by positions `range`, e.g. the front or back face used by the cup product.
  pub fn slice(&self, range: std::ops::Range<usize>) -> SortedSimplex {
    SortedSimplex(self.0[range].iter().copied().collect())
  }

  /// Iterator over `(i, face omitting position i)`.
  pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, SortedSimplex)> + '_ {
    (0..self.0.len()).map(move |i| (i, self.omit(i)))
  }
}

impl fmt::Display for SortedSimplex {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (i, v) in self.0.iter().enumerate() {
      if i > 0 {
        write!(f, ",")?;
      }
      write!(f, "{v}")?;
    }
    write!(f, ")")
  }
}

/// A simplex with an explicit vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedSimplex(pub Vec<VertexId>);

impl OrientedSimplex {
  pub fn new(vertices: impl Into<Vec<VertexId>>) -> Self {
    Self(vertices.into())
  }

  /// Sorted representative and the parity of the sorting permutation.
  pub fn canonical(&self) -> Result<(SortedSimplex, i8), DegenerateSimplex> {
    canonical_sign(&self.0)
  }
}

/// Sorts a vertex tuple and reports the sign of the sorting permutation.
///
/// Fails if a vertex repeats.
pub fn canonical_sign(vertices: &[VertexId]) -> Result<(SortedSimplex, i8), DegenerateSimplex> {
  let mut buf: VertexBuf = vertices.iter().copied().collect();
  let sign = permutation_parity(&mut buf);
  if let Some(w) = buf.windows(2).find(|w| w[0] == w[1]) {
    return Err(DegenerateSimplex { vertex: w[0] });
  }
  Ok((SortedSimplex(buf), sign))
}

/// Sorts `items` in place with insertion sort and returns the parity of the swaps performed.
///
/// Tuples here are short (at most a few dozen entries), so quadratic is fine.
pub(crate) fn permutation_parity<T: Ord>(items: &mut [T]) -> i8 {
  let mut sign = 1i8;
  for i in 1..items.len() {
    let mut j = i;
    while j > 0 && items[j - 1] > items[j] {
      items.swap(j - 1, j);
      sign = -sign;
      j -= 1;
    }
  }
  sign
}

#[cfg(test)]
mod tests {
  use proptest::prelude::*;

  use super::*;

  #[test]
  fn canonical_sign_examples() {
    let (s, sign) = canonical_sign(&[2, 0, 1]).unwrap();
    assert_eq!(s.vertices(), &[0, 1, 2]);
    assert_eq!(sign, 1);

    let (s, sign) = canonical_sign(&[1, 0]).unwrap();
    assert_eq!(s.vertices(), &[0, 1]);
    assert_eq!(sign, -1);

    let (s, sign) = canonical_sign(&[0, 1, 2, 3]).unwrap();
    assert_eq!(s.vertices(), &[0, 1, 2, 3]);
    assert_eq!(sign, 1);
  }

  #[test]
  fn repeated_vertex_is_degenerate() {
    assert_eq!(canonical_sign(&[3, 1, 3]), Err(DegenerateSimplex { vertex: 3 }));
  }

  #[test]
  fn omit_and_slice() {
    let s = SortedSimplex::from_sorted(&[1, 4, 6, 9]).unwrap();
    assert_eq!(s.omit(0).vertices(), &[4, 6, 9]);
    assert_eq!(s.omit(2).vertices(), &[1, 4, 9]);
    assert_eq!(s.slice(0..2).vertices(), &[1, 4]);
    assert_eq!(s.slice(1..4).vertices(), &[4, 6, 9]);
    assert_eq!(s.dim(), 3);
    assert!(SortedSimplex::from_sorted(&[2, 2]).is_none());
  }

  fn inversions(v: &[u32]) -> usize {
    let mut n = 0;
    for i in 0..v.len() {
      for j in i + 1..v.len() {
        if v[i] > v[j] {
          n += 1;
        }
      }
    }
    n
  }

  proptest! {
    #[test]
    fn parity_matches_inversion_count(v in proptest::sample::subsequence((0u32..20).collect::<Vec<_>>(), 1..8).prop_shuffle()) {
      let (s, sign) = canonical_sign(&v).unwrap();
      let expected = if inversions(&v).is_multiple_of(2) { 1 } else { -1 };
      prop_assert_eq!(sign, expected);
      // canonicalization is idempotent
      let (s2, sign2) = canonical_sign(s.vertices()).unwrap();
      prop_assert_eq!(s2, s);
      prop_assert_eq!(sign2, 1);
    }

    #[test]
    fn transposition_flips_sign(v in proptest::sample::subsequence((0u32..20).collect::<Vec<_>>(), 2..8).prop_shuffle(), i in 0usize..7) {
      let i = i % (v.len() - 1);
      let mut w = v.clone();
      w.swap(i, i + 1);
      prop_assert_eq!(canonical_sign(&v).unwrap().1, -canonical_sign(&w).unwrap().1);
    }
  }
}
