//! Finite pure simplicial complexes given by facet lists.
//!
//! [`AbstractComplex::build`] normalizes vertex ids to `0..f0` (keeping the original ids for
//! diagnostics and I/O), enumerates every face, and rejects anything that is not a closed,
//! connected pseudomanifold. Orientability is checked separately by
//! [`AbstractComplex::fundamental_cycle`].

use std::collections::{HashMap, VecDeque};

use smallvec::SmallVec;
use thiserror::Error;

use crate::simplex::{canonical_sign, SortedSimplex, VertexBuf, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
  #[error("facet list is empty")]
  Empty,
  #[error("facet {facet:?} repeats a vertex")]
  DegenerateFacet { facet: Vec<u64> },
  #[error("complex is not pure: facet {facet:?} has dimension {found}, expected {expected}")]
  NotPure {
    facet: Vec<u64>,
    expected: usize,
    found: usize,
  },
  #[error("facet {facet:?} is listed more than once")]
  DuplicateFacet { facet: Vec<u64> },
  #[error("complex is not closed: ridge {ridge:?} lies in {count} facet(s)")]
  NotClosed { ridge: Vec<u64>, count: usize },
  #[error("dual graph is disconnected ({components} components)")]
  Disconnected { components: usize },
  #[error("dimension {k} out of range 0..={max}")]
  DimensionOutOfRange { k: usize, max: usize },
  #[error("complex is not orientable: orientation conflict at facet {facet:?}")]
  NonOrientable { facet: Vec<u64> },
}

/// A closed, connected, pure simplicial pseudomanifold.
#[derive(Debug, Clone)]
pub struct AbstractComplex {
  original_ids: Vec<u64>,
  faces: Vec<Vec<SortedSimplex>>,
  index: Vec<HashMap<SortedSimplex, usize>>,
  /// For each ridge (in lexicographic order), the two facets containing it.
  ridge_facets: Vec<[usize; 2]>,
}

impl PartialEq for AbstractComplex {
  fn eq(&self, other: &Self) -> bool {
    self.original_ids == other.original_ids && self.facets() == other.facets()
  }
}

impl Eq for AbstractComplex {}

impl AbstractComplex {
  /// Builds and validates a complex from facets written in arbitrary non-negative vertex ids.
  pub fn build<I, F>(facets: I) -> Result<Self, ComplexError>
  where
    I: IntoIterator<Item = F>,
    F: AsRef<[u64]>,
  {
    let raw: Vec<Vec<u64>> = facets.into_iter().map(|f| f.as_ref().to_vec()).collect();
    let first = raw.first().ok_or(ComplexError::Empty)?;
    let width = first.len();
    if width == 0 {
      return Err(ComplexError::Empty);
    }
    for f in &raw {
      if f.len() != width {
        return Err(ComplexError::NotPure {
          facet: f.clone(),
          expected: width - 1,
          found: f.len().wrapping_sub(1),
        });
      }
    }

    let mut original_ids: Vec<u64> = raw.iter().flatten().copied().collect();
    original_ids.sort_unstable();
    original_ids.dedup();
    let dense = |id: u64| original_ids.binary_search(&id).unwrap() as VertexId;

    let mut facets = Vec::with_capacity(raw.len());
    for f in &raw {
      let local: VertexBuf = f.iter().map(|&v| dense(v)).collect();
      let (s, _) = canonical_sign(&local).map_err(|_| ComplexError::DegenerateFacet { facet: f.clone() })?;
      facets.push(s);
    }
    facets.sort();
    if let Some(w) = facets.windows(2).find(|w| w[0] == w[1]) {
      return Err(ComplexError::DuplicateFacet {
        facet: w[0]
          .vertices()
          .iter()
          .map(|&v| original_ids[v as usize])
          .collect(),
      });
    }

    let m = width - 1;
    let mut faces: Vec<Vec<SortedSimplex>> = vec![Vec::new(); m + 1];
    for k in 0..m {
      let mut all = Vec::new();
      for f in &facets {
        for_each_subset(f.vertices(), k + 1, |sub| {
          all.push(SortedSimplex::from_buf_unchecked(sub.iter().copied().collect()))
        });
      }
      all.sort_unstable();
      all.dedup();
      faces[k] = all;
    }
    faces[m] = facets;
    let index: Vec<HashMap<SortedSimplex, usize>> = faces
      .iter()
      .map(|fs| fs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
      .collect();

    // Ridges of a 0-dimensional complex are the empty simplex; handle them through the same map.
    let mut incidence: HashMap<SortedSimplex, SmallVec<[usize; 2]>> = HashMap::new();
    for (fi, f) in faces[m].iter().enumerate() {
      for (_, r) in f.boundary_faces() {
        incidence.entry(r).or_default().push(fi);
      }
    }
    let mut ridges: Vec<(SortedSimplex, SmallVec<[usize; 2]>)> = incidence.into_iter().collect();
    ridges.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut ridge_facets = Vec::with_capacity(ridges.len());
    for (r, fs) in &ridges {
      if fs.len() != 2 {
        return Err(ComplexError::NotClosed {
          ridge: r.vertices().iter().map(|&v| original_ids[v as usize]).collect(),
          count: fs.len(),
        });
      }
      ridge_facets.push([fs[0], fs[1]]);
    }

    let complex = AbstractComplex {
      original_ids,
      faces,
      index,
      ridge_facets,
    };
    let components = complex.dual_components();
    if components != 1 {
      return Err(ComplexError::Disconnected { components });
    }
    Ok(complex)
  }

  /// Dimension `m` of the facets.
  pub fn dim(&self) -> usize {
    self.faces.len() - 1
  }

  pub fn num_vertices(&self) -> usize {
    self.original_ids.len()
  }

  pub fn facets(&self) -> &[SortedSimplex] {
    &self.faces[self.dim()]
  }

  /// All `k`-faces in lexicographic order.
  pub fn enumerate_faces(&self, k: usize) -> Result<&[SortedSimplex], ComplexError> {
    self
      .faces
      .get(k)
      .map(Vec::as_slice)
      .ok_or(ComplexError::DimensionOutOfRange { k, max: self.dim() })
  }

  /// Number of `k`-faces, or 0 when `k` exceeds the dimension.
  pub fn count(&self, k: usize) -> usize {
    self.faces.get(k).map_or(0, Vec::len)
  }

  pub fn f_vector(&self) -> Vec<usize> {
    self.faces.iter().map(Vec::len).collect()
  }

  /// Position of `s` in [`Self::enumerate_faces`] for its dimension.
  pub fn face_index(&self, s: &SortedSimplex) -> Option<usize> {
    self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
  }

  pub fn original_ids(&self) -> &[u64] {
    &self.original_ids
  }

  pub fn original_id(&self, v: VertexId) -> u64 {
    self.original_ids[v as usize]
  }

  pub fn vertex_of_original(&self, id: u64) -> Option<VertexId> {
    self.original_ids.binary_search(&id).ok().map(|i| i as VertexId)
  }

  /// A simplex written in original ids, for diagnostics.
  pub fn original_tuple(&self, s: &SortedSimplex) -> Vec<u64> {
    s.vertices().iter().map(|&v| self.original_id(v)).collect()
  }

  pub fn num_ridges(&self) -> usize {
    self.ridge_facets.len()
  }

  pub fn ridge_facets(&self, ridge: usize) -> [usize; 2] {
    self.ridge_facets[ridge]
  }

  fn ridge_index(&self, r: &SortedSimplex) -> usize {
    if r.is_empty() {
      0
    } else {
      self.face_index(r).expect("ridge of a facet is a face")
    }
  }

  fn neighbor_across(&self, facet: usize, ridge: &SortedSimplex) -> usize {
    let [a, b] = self.ridge_facets[self.ridge_index(ridge)];
    if a == facet {
      b
    } else {
      a
    }
  }

  fn dual_components(&self) -> usize {
    let n = self.facets().len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
      if seen[start] {
        continue;
      }
      components += 1;
      seen[start] = true;
      let mut queue = VecDeque::from([start]);
      while let Some(f) = queue.pop_front() {
        for (_, r) in self.facets()[f].boundary_faces() {
          let g = self.neighbor_across(f, &r);
          if !seen[g] {
            seen[g] = true;
            queue.push_back(g);
          }
        }
      }
    }
    components
  }

  /// Propagates an orientation over the dual graph starting from facet 0 (the
  /// lexicographically smallest), which receives `+1`.
  pub fn fundamental_cycle(&self) -> Result<FundamentalCycle, ComplexError> {
    let facets = self.facets();
    let mut eps = vec![0i8; facets.len()];
    eps[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
      for (i, r) in facets[f].boundary_faces() {
        let g = self.neighbor_across(f, &r);
        let j = facets[g]
          .vertices()
          .iter()
          .position(|v| !r.contains(*v))
          .expect("neighbor has an extra vertex");
        // ε_f (-1)^i + ε_g (-1)^j = 0 on the shared ridge
        let want = if (i + j) % 2 == 0 { -eps[f] } else { eps[f] };
        if eps[g] == 0 {
          eps[g] = want;
          queue.push_back(g);
        } else if eps[g] != want {
          return Err(ComplexError::NonOrientable {
            facet: self.original_tuple(&facets[g]),
          });
        }
      }
    }
    Ok(FundamentalCycle { epsilon: eps })
  }
}

/// Calls `f` with every `size`-element subset of `items`, in lexicographic order of positions.
pub(crate) fn for_each_subset<T: Copy>(items: &[T], size: usize, mut f: impl FnMut(&[T])) {
  let n = items.len();
  if size > n {
    return;
  }
  let mut idx: Vec<usize> = (0..size).collect();
  let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
  loop {
    f(&buf);
    let Some(pos) = (0..size).rev().find(|&p| idx[p] != p + n - size) else {
      return;
    };
    idx[pos] += 1;
    for p in pos + 1..size {
      idx[p] = idx[p - 1] + 1;
    }
    for p in pos..size {
      buf[p] = items[idx[p]];
    }
  }
}

/// A coherent ±1 coefficient per facet whose signed sum has zero boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
  epsilon: Vec<i8>,
}

impl FundamentalCycle {
  /// Wraps explicit signs without checking them; see [`Self::is_cycle`].
  pub fn from_signs(epsilon: Vec<i8>) -> Self {
    Self { epsilon }
  }

  pub fn signs(&self) -> &[i8] {
    &self.epsilon
  }

  pub fn sign(&self, facet: usize) -> i8 {
    self.epsilon[facet]
  }

  pub fn reversed(&self) -> Self {
    Self {
      epsilon: self.epsilon.iter().map(|e| -e).collect(),
    }
  }

  /// Expands the boundary of `Σ ε_σ σ` and checks that every ridge cancels.
  pub fn is_cycle(&self, c: &AbstractComplex) -> bool {
    if self.epsilon.len() != c.facets().len() || self.epsilon.iter().any(|e| e.abs() != 1) {
      return false;
    }
    let mut acc: HashMap<SortedSimplex, i64> = HashMap::new();
    for (f, &e) in c.facets().iter().zip(&self.epsilon) {
      for (i, r) in f.boundary_faces() {
        *acc.entry(r).or_default() += if i % 2 == 0 { e as i64 } else { -(e as i64) };
      }
    }
    acc.values().all(|&v| v == 0)
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn all_subsets(n: u64, size: usize) -> Vec<Vec<u64>> {
    let items: Vec<u64> = (0..n).collect();
    let mut out = Vec::new();
    for_each_subset(&items, size, |s| out.push(s.to_vec()));
    out
  }

  #[test]
  fn boundary_of_tetrahedron() {
    let c = AbstractComplex::build(all_subsets(4, 3)).unwrap();
    assert_eq!(c.f_vector(), vec![4, 6, 4]);
    let edges = c.enumerate_faces(1).unwrap();
    assert_eq!(edges.len(), 6);
    assert_eq!(edges[0].vertices(), &[0, 1]);
    assert_eq!(edges[5].vertices(), &[2, 3]);
    assert_eq!(
      c.enumerate_faces(3),
      Err(ComplexError::DimensionOutOfRange { k: 3, max: 2 })
    );
  }

  #[test]
  fn boundary_of_4_simplex() {
    let c = AbstractComplex::build(all_subsets(5, 4)).unwrap();
    assert_eq!(c.f_vector(), vec![5, 10, 10, 5]);
    assert_eq!(c.enumerate_faces(2).unwrap().len(), 10);
  }

  #[test]
  fn sparse_ids_are_normalized_in_order() {
    let c = AbstractComplex::build([[40u64, 7, 100], [7, 100, 9], [9, 40, 7], [100, 9, 40]]).unwrap();
    assert_eq!(c.original_ids(), &[7, 9, 40, 100]);
    assert_eq!(c.vertex_of_original(40), Some(2));
    assert_eq!(c.vertex_of_original(41), None);
    assert_eq!(c.f_vector(), vec![4, 6, 4]);
  }

  #[test]
  fn two_triangles_sharing_an_edge_are_not_closed() {
    let err = AbstractComplex::build([[0u64, 1, 2], [1, 2, 3]]).unwrap_err();
    assert!(matches!(err, ComplexError::NotClosed { count: 1, .. }), "{err:?}");
  }

  #[test]
  fn construction_errors() {
    assert_eq!(
      AbstractComplex::build(Vec::<Vec<u64>>::new()),
      Err(ComplexError::Empty)
    );
    assert!(matches!(
      AbstractComplex::build([vec![0u64, 1, 2], vec![0, 1]]),
      Err(ComplexError::NotPure { .. })
    ));
    assert!(matches!(
      AbstractComplex::build([[0u64, 1, 1]]),
      Err(ComplexError::DegenerateFacet { .. })
    ));
    let mut twice = all_subsets(4, 3);
    twice.push(vec![0, 1, 2]);
    assert!(matches!(
      AbstractComplex::build(twice),
      Err(ComplexError::DuplicateFacet { .. })
    ));
    // two disjoint tetrahedron boundaries
    let mut two = all_subsets(4, 3);
    two.extend(
      all_subsets(4, 3)
        .into_iter()
        .map(|f| f.into_iter().map(|v| v + 10).collect::<Vec<_>>()),
    );
    assert_eq!(
      AbstractComplex::build(two),
      Err(ComplexError::Disconnected { components: 2 })
    );
  }

  #[test]
  fn zero_sphere() {
    let c = AbstractComplex::build([[3u64], [8]]).unwrap();
    assert_eq!(c.dim(), 0);
    let z = c.fundamental_cycle().unwrap();
    assert_eq!(z.signs(), &[1, -1]);
    assert!(matches!(
      AbstractComplex::build([[3u64], [8], [9]]),
      Err(ComplexError::NotClosed { count: 3, .. })
    ));
  }

  #[test]
  fn fundamental_cycle_of_simplex_boundaries() {
    // Lexicographic facet order of ∂Δ³ omits vertex 3, 2, 1, 0 in turn.
    let c = AbstractComplex::build(all_subsets(4, 3)).unwrap();
    let z = c.fundamental_cycle().unwrap();
    assert!(z.is_cycle(&c));
    for (f, &e) in c.facets().iter().zip(z.signs()) {
      let omitted = (0..4).find(|v| !f.contains(*v)).unwrap();
      assert_eq!(e, if omitted % 2 == 0 { -1 } else { 1 }, "facet {f}");
    }

    let c = AbstractComplex::build(all_subsets(5, 4)).unwrap();
    let z = c.fundamental_cycle().unwrap();
    assert!(z.is_cycle(&c));
    assert_eq!(z.sign(0), 1);
    for (f, &e) in c.facets().iter().zip(z.signs()) {
      let omitted = (0..5).find(|v| !f.contains(*v)).unwrap();
      assert_eq!(e as i32, (-1i32).pow(omitted), "facet {f}");
    }
    assert_eq!(c.fundamental_cycle().unwrap(), z);
  }

  #[test]
  fn exactly_two_fundamental_cycles() {
    for c in [
      AbstractComplex::build(all_subsets(4, 3)).unwrap(),
      AbstractComplex::build(all_subsets(5, 4)).unwrap(),
    ] {
      let n = c.facets().len();
      let valid: Vec<Vec<i8>> = (0u32..1 << n)
        .map(|mask| {
          (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect::<Vec<i8>>()
        })
        .filter(|eps| FundamentalCycle::from_signs(eps.clone()).is_cycle(&c))
        .collect();
      assert_eq!(valid.len(), 2);
      let z = c.fundamental_cycle().unwrap();
      assert!(valid.contains(&z.signs().to_vec()));
      assert!(valid.contains(&z.reversed().signs().to_vec()));
    }
  }

  #[test]
  fn projective_plane_is_not_orientable() {
    let rp2 = [
      [1u64, 2, 3],
      [1, 3, 4],
      [1, 4, 5],
      [1, 5, 6],
      [1, 2, 6],
      [2, 3, 5],
      [3, 4, 6],
      [2, 4, 5],
      [3, 5, 6],
      [2, 4, 6],
    ];
    let c = AbstractComplex::build(rp2).unwrap();
    assert!(matches!(
      c.fundamental_cycle(),
      Err(ComplexError::NonOrientable { .. })
    ));
    // brute force: no ±1 assignment kills the boundary
    let n = c.facets().len();
    let any = (0u32..1 << n).any(|mask| {
      FundamentalCycle::from_signs((0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect())
        .is_cycle(&c)
    });
    assert!(!any);
  }
}
