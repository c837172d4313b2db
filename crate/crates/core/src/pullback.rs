//! The target sphere `∂Δ^{n+1}` on labels `1..=n+2`, vertex labelings of a source complex, and
//! the pullback of the single-facet cocycle `ω`.

use std::sync::Arc;

use thiserror::Error;

use crate::cochain::Cochain;
use crate::complex::{for_each_subset, AbstractComplex};
use crate::simplex::{canonical_sign, SortedSimplex, VertexId};
use crate::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
  #[error("source complex has dimension {found}, expected 2n-1 = {expected}")]
  WrongSourceDimension { expected: usize, found: usize },
  #[error("labeling covers {found} vertices, complex has {expected}")]
  LengthMismatch { expected: usize, found: usize },
  #[error("vertex {vertex} has label {label}, outside 1..={max}")]
  LabelOutOfRange { vertex: u64, label: u32, max: u32 },
  #[error("{} facet(s) carry all n+2 labels, first {:?}", .facets.len(), .facets[0])]
  Violations { facets: Vec<Vec<u64>> },
  #[error("{0:?} is not an oriented facet of the target sphere")]
  NotAFacet(Vec<u32>),
  #[error("target dimension must be at least 1")]
  BadTargetDimension,
}

/// `∂Δ^{n+1}` with vertex labels `1..=n+2`, oriented so that the facet omitting label `i`
/// carries sign `(-1)^(i-1)`.
#[derive(Debug, Clone)]
pub struct TargetSphere {
  n: usize,
  complex: Arc<AbstractComplex>,
}

impl TargetSphere {
  pub fn new(n: usize) -> Result<Self, LabelingError> {
    if n == 0 {
      return Err(LabelingError::BadTargetDimension);
    }
    let labels: Vec<u64> = (1..=n as u64 + 2).collect();
    let mut facets = Vec::new();
    for_each_subset(&labels, n + 1, |s| facets.push(s.to_vec()));
    let complex = AbstractComplex::build(facets).expect("simplex boundary is a sphere");
    Ok(Self {
      n,
      complex: Arc::new(complex),
    })
  }

  pub fn n(&self) -> usize {
    self.n
  }

  pub fn num_labels(&self) -> u32 {
    self.n as u32 + 2
  }

  pub fn complex(&self) -> &Arc<AbstractComplex> {
    &self.complex
  }

  /// Coherent orientation sign of the facet whose sorted labels are `facet`.
  pub fn facet_sign(&self, facet: &[u32]) -> i8 {
    let omitted = (1..=self.num_labels())
      .find(|l| !facet.contains(l))
      .expect("facet omits one label");
    if (omitted - 1) % 2 == 0 {
      1
    } else {
      -1
    }
  }

  /// Target vertex id of a label.
  fn vertex(&self, label: u32) -> VertexId {
    label - 1
  }
}

/// A map from source vertices to labels `1..=n+2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
  labels: Vec<u32>,
}

impl Labeling {
  /// Labels indexed by normalized vertex id.
  pub fn new(labels: Vec<u32>) -> Self {
    Self { labels }
  }

  pub fn constant(num_vertices: usize, label: u32) -> Self {
    Self {
      labels: vec![label; num_vertices],
    }
  }

  pub fn get(&self, v: VertexId) -> u32 {
    self.labels[v as usize]
  }

  pub fn as_slice(&self) -> &[u32] {
    &self.labels
  }

  pub fn len(&self) -> usize {
    self.labels.len()
  }

  pub fn is_empty(&self) -> bool {
    self.labels.is_empty()
  }

  /// Post-composes with a permutation of labels: label `l` becomes `perm[l - 1]`.
  pub fn permuted(&self, perm: &[u32]) -> Labeling {
    Labeling {
      labels: self.labels.iter().map(|&l| perm[l as usize - 1]).collect(),
    }
  }

  /// Distinct labels in use, sorted.
  pub fn used_labels(&self) -> Vec<u32> {
    let mut used = self.labels.clone();
    used.sort_unstable();
    used.dedup();
    used
  }
}

/// The oriented target facet `σ̄` on which `ω` is `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaChoice {
  sigma_bar: Vec<u32>,
}

impl OmegaChoice {
  pub fn new(labels: Vec<u32>) -> Self {
    Self { sigma_bar: labels }
  }

  /// `(1, 2, …, n+1)`.
  pub fn default_for(n: usize) -> Self {
    Self {
      sigma_bar: (1..=n as u32 + 1).collect(),
    }
  }

  /// Every target facet in increasing order and with its first two labels swapped.
  pub fn all_for(n: usize) -> Vec<OmegaChoice> {
    let labels: Vec<u32> = (1..=n as u32 + 2).collect();
    let mut out = Vec::new();
    for_each_subset(&labels, n + 1, |s| {
      out.push(OmegaChoice {
        sigma_bar: s.to_vec(),
      });
      let mut swapped = s.to_vec();
      swapped.swap(0, 1);
      out.push(OmegaChoice { sigma_bar: swapped });
    });
    out
  }

  pub fn labels(&self) -> &[u32] {
    &self.sigma_bar
  }
}

/// Checks that labels are in range and that no facet carries all `n+2` labels.
///
/// A facet with `n+2` distinct labels would have to map onto the full simplex `Δ^{n+1}`, which
/// is not part of the target; smaller label sets always span a target face.
pub fn validate_labeling(c: &AbstractComplex, labeling: &Labeling, n: usize) -> Result<(), LabelingError> {
  if n == 0 {
    return Err(LabelingError::BadTargetDimension);
  }
  if c.dim() != 2 * n - 1 {
    return Err(LabelingError::WrongSourceDimension {
      expected: 2 * n - 1,
      found: c.dim(),
    });
  }
  check_labels(c, labeling, n)
}

fn check_labels(c: &AbstractComplex, labeling: &Labeling, n: usize) -> Result<(), LabelingError> {
  if labeling.len() != c.num_vertices() {
    return Err(LabelingError::LengthMismatch {
      expected: c.num_vertices(),
      found: labeling.len(),
    });
  }
  let max = n as u32 + 2;
  for (v, &l) in labeling.labels.iter().enumerate() {
    if l == 0 || l > max {
      return Err(LabelingError::LabelOutOfRange {
        vertex: c.original_id(v as VertexId),
        label: l,
        max,
      });
    }
  }
  let offending: Vec<Vec<u64>> = c
    .facets()
    .iter()
    .filter(|f| {
      let mut seen = 0u64;
      for &v in f.vertices() {
        seen |= 1 << labeling.get(v);
      }
      seen.count_ones() == max
    })
    .map(|f| c.original_tuple(f))
    .collect();
  if offending.is_empty() {
    Ok(())
  } else {
    Err(LabelingError::Violations { facets: offending })
  }
}

/// `ω(σ̄) = +1`, `ω(-σ̄) = -1`, zero elsewhere, as a degree-`n` cochain on the target.
pub fn make_omega(target: &TargetSphere, choice: &OmegaChoice) -> Result<Cochain, LabelingError> {
  let labels = choice.labels();
  let not_a_facet = || LabelingError::NotAFacet(labels.to_vec());
  if labels.len() != target.n + 1 || labels.iter().any(|&l| l == 0 || l > target.num_labels()) {
    return Err(not_a_facet());
  }
  let ids: Vec<VertexId> = labels.iter().map(|&l| target.vertex(l)).collect();
  let (sorted, sign) = canonical_sign(&ids).map_err(|_| not_a_facet())?;
  let mut omega = Cochain::zero(target.complex.clone(), target.n).expect("n-faces exist");
  omega.set(&sorted, rat(sign as i64)).map_err(|_| not_a_facet())?;
  Ok(omega)
}

/// `ω` evaluated on an ordered label tuple; repeated labels give zero.
fn omega_on_labels(target: &TargetSphere, omega: &Cochain, labels: &[u32]) -> Rational {
  let ids: crate::simplex::VertexBuf = labels.iter().map(|&l| target.vertex(l)).collect();
  match canonical_sign(&ids) {
    Ok((sorted, sign)) => {
      let v = omega.value(&sorted);
      if sign < 0 {
        -v
      } else {
        v
      }
    }
    Err(_) => rat(0),
  }
}

/// `(f*ω)[v0..vn] = ω[ℓ(v0)..ℓ(vn)]` on every sorted `n`-face of the source.
pub fn pullback_omega(
  c: &Arc<AbstractComplex>,
  labeling: &Labeling,
  target: &TargetSphere,
  omega: &Cochain,
) -> Result<Cochain, LabelingError> {
  validate_labeling(c, labeling, target.n)?;
  let mut buf: Vec<u32> = Vec::with_capacity(target.n + 1);
  let pulled = Cochain::from_fn(c.clone(), target.n, |s: &SortedSimplex| {
    buf.clear();
    buf.extend(s.vertices().iter().map(|&v| labeling.get(v)));
    omega_on_labels(target, omega, &buf)
  })
  .expect("n <= 2n-1");
  Ok(pulled)
}

#[cfg(test)]
mod tests {
  use num_traits::{Signed, Zero};

  use super::*;
  use crate::cochain::Chain;
  use crate::fixtures;

  #[test]
  fn target_orientation_is_a_cycle() {
    for n in 1..=4 {
      let t = TargetSphere::new(n).unwrap();
      let z = t.complex().fundamental_cycle().unwrap();
      // our sign convention agrees with the propagated cycle up to a global sign
      let ratio: Vec<i8> = t
        .complex()
        .facets()
        .iter()
        .zip(z.signs())
        .map(|(f, &e)| {
          let labels: Vec<u32> = f.vertices().iter().map(|&v| v + 1).collect();
          t.facet_sign(&labels) * e
        })
        .collect();
      assert!(ratio.iter().all(|&r| r == ratio[0]), "n={n}");
    }
  }

  #[test]
  fn omega_examples() {
    let t = TargetSphere::new(2).unwrap();
    let omega = make_omega(&t, &OmegaChoice::new(vec![1, 2, 3])).unwrap();
    let tri = |a: u32, b: u32, c: u32| SortedSimplex::from_sorted(&[a - 1, b - 1, c - 1]).unwrap();
    assert_eq!(omega.value(&tri(1, 2, 3)), rat(1));
    for (a, b, c) in [(1, 2, 4), (1, 3, 4), (2, 3, 4)] {
      assert!(omega.value(&tri(a, b, c)).is_zero());
    }
    let swapped = make_omega(&t, &OmegaChoice::new(vec![2, 1, 3])).unwrap();
    assert_eq!(swapped.value(&tri(1, 2, 3)), rat(-1));

    // pairing with the coherent target cycle gives a generator
    let cycle = Chain::from_fundamental_cycle(t.complex().clone(), &t.complex().fundamental_cycle().unwrap());
    assert_eq!(omega.pair(&cycle).unwrap().abs(), rat(1));

    for bad in [vec![1, 2], vec![1, 2, 5], vec![1, 1, 2], vec![0, 1, 2]] {
      assert!(matches!(
        make_omega(&t, &OmegaChoice::new(bad)),
        Err(LabelingError::NotAFacet(_))
      ));
    }
  }

  #[test]
  fn all_choices_count() {
    assert_eq!(OmegaChoice::all_for(2).len(), 8);
    assert_eq!(OmegaChoice::all_for(3).len(), 10);
    assert_eq!(OmegaChoice::default_for(2).labels(), &[1, 2, 3]);
  }

  #[test]
  fn validation() {
    let c = fixtures::boundary_sphere(3);
    assert!(validate_labeling(&c, &Labeling::constant(5, 1), 2).is_ok());
    let bad = Labeling::new(vec![1, 2, 3, 4, 4]);
    match validate_labeling(&c, &bad, 2) {
      Err(LabelingError::Violations { facets }) => {
        assert!(facets.contains(&vec![0, 1, 2, 3]));
        assert!(facets.contains(&vec![0, 1, 2, 4]));
        assert_eq!(facets.len(), 2);
      }
      other => panic!("{other:?}"),
    }
    assert!(matches!(
      validate_labeling(&c, &Labeling::new(vec![1, 2, 5, 1, 1]), 2),
      Err(LabelingError::LabelOutOfRange {
        vertex: 2,
        label: 5,
        max: 4
      })
    ));
    assert!(matches!(
      validate_labeling(&fixtures::boundary_sphere(2), &Labeling::constant(4, 1), 2),
      Err(LabelingError::WrongSourceDimension {
        expected: 3,
        found: 2
      })
    ));
    assert!(matches!(
      validate_labeling(&c, &Labeling::constant(4, 1), 2),
      Err(LabelingError::LengthMismatch { .. })
    ));
    let (hc, hl) = fixtures::hopf_fixture();
    assert!(validate_labeling(&hc, &hl, 2).is_ok());
  }

  #[test]
  fn pullback_values() {
    // ∂Δ⁴ with labels (1,2,3,1,1): triangle (0,1,2) is labeled (1,2,3)
    let c = Arc::new(fixtures::boundary_sphere(3));
    let t = TargetSphere::new(2).unwrap();
    let omega = make_omega(&t, &OmegaChoice::default_for(2)).unwrap();
    let l = Labeling::new(vec![1, 2, 3, 1, 1]);
    let p = pullback_omega(&c, &l, &t, &omega).unwrap();
    let tri = |a, b, c| SortedSimplex::from_sorted(&[a, b, c]).unwrap();
    assert_eq!(p.value(&tri(0, 1, 2)), rat(1));
    assert_eq!(p.value(&tri(0, 1, 3)), rat(0)); // labels (1,2,1)
    let l2 = Labeling::new(vec![2, 1, 3, 2, 2]);
    let p2 = pullback_omega(&c, &l2, &t, &omega).unwrap();
    assert_eq!(p2.value(&tri(0, 1, 2)), rat(-1));
    let l3 = Labeling::new(vec![1, 2, 2, 1, 1]);
    assert!(pullback_omega(&c, &l3, &t, &omega).unwrap().is_zero());
    assert!(matches!(
      pullback_omega(&c, &Labeling::new(vec![1, 2, 3, 4, 4]), &t, &omega),
      Err(LabelingError::Violations { .. })
    ));
  }

  #[test]
  fn pullback_is_a_cocycle_with_unit_values() {
    let (c, l) = fixtures::hopf_fixture();
    let c = Arc::new(c);
    let t = TargetSphere::new(2).unwrap();
    for choice in OmegaChoice::all_for(2) {
      let omega = make_omega(&t, &choice).unwrap();
      let p = pullback_omega(&c, &l, &t, &omega).unwrap();
      assert!(!p.is_zero());
      assert!(p.iter().all(|(_, v)| *v == rat(1) || *v == rat(-1)));
      assert!(p.coboundary().unwrap().is_zero());
      let constant = pullback_omega(&c, &Labeling::constant(c.num_vertices(), 3), &t, &omega).unwrap();
      assert!(constant.is_zero());
    }
  }
}
