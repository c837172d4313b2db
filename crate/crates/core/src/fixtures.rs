//! Test triangulations and labelings: simplex boundaries, polygons, joins, barycentric
//! subdivision, random labelings, and a 12-vertex simplicial model of the Hopf map.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{for_each_subset, AbstractComplex, ComplexError};
use crate::pullback::{validate_labeling, Labeling, LabelingError};
use crate::simplex::SortedSimplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
  #[error("a polygon needs at least 3 vertices, got {0}")]
  TooFewVertices(usize),
  #[error("no valid labeling found in {attempts} attempts")]
  RetryBudgetExhausted { attempts: usize },
  #[error(transparent)]
  Complex(#[from] ComplexError),
  #[error(transparent)]
  Labeling(#[from] LabelingError),
}

/// Attempts made by [`random_valid_labeling`] before giving up.
pub const LABELING_RETRY_BUDGET: usize = 10_000;

/// A generator description, as accepted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
  BoundarySphere(usize),
  CyclicPolygon(usize),
  Join(Box<GeneratorSpec>, Box<GeneratorSpec>),
  HopfFixture,
}

impl GeneratorSpec {
  pub fn build(&self) -> Result<AbstractComplex, FixtureError> {
    Ok(match self {
      GeneratorSpec::BoundarySphere(d) => boundary_sphere(*d),
      GeneratorSpec::CyclicPolygon(p) => cyclic_polygon(*p)?,
      GeneratorSpec::Join(a, b) => join(&a.build()?, &b.build()?)?,
      GeneratorSpec::HopfFixture => hopf_fixture().0,
    })
  }
}

/// `∂Δ^{d+1}`: every `(d+1)`-subset of `{0, …, d+1}`.
pub fn boundary_sphere(d: usize) -> AbstractComplex {
  let vertices: Vec<u64> = (0..d as u64 + 2).collect();
  let mut facets = Vec::new();
  for_each_subset(&vertices, d + 1, |s| facets.push(s.to_vec()));
  AbstractComplex::build(facets).expect("simplex boundary is a closed pseudomanifold")
}

/// The `p`-gon with edges `(i, i+1 mod p)`.
pub fn cyclic_polygon(p: usize) -> Result<AbstractComplex, FixtureError> {
  if p < 3 {
    return Err(FixtureError::TooFewVertices(p));
  }
  let p = p as u64;
  Ok(AbstractComplex::build((0..p).map(|i| [i, (i + 1) % p]))?)
}

/// Join of two complexes on disjoint vertex sets; `b`'s vertices are shifted past `a`'s.
pub fn join(a: &AbstractComplex, b: &AbstractComplex) -> Result<AbstractComplex, ComplexError> {
  let shift = a.num_vertices() as u64;
  let mut facets = Vec::with_capacity(a.facets().len() * b.facets().len());
  for fa in a.facets() {
    for fb in b.facets() {
      let mut f: Vec<u64> = fa.vertices().iter().map(|&v| v as u64).collect();
      f.extend(fb.vertices().iter().map(|&v| v as u64 + shift));
      facets.push(f);
    }
  }
  AbstractComplex::build(facets)
}

/// Barycentric subdivision with the induced labeling.
///
/// Original vertices keep their ids; the barycenter of every face of dimension ≥ 1 gets a new
/// id, ordered by (dimension, lexicographic). With this numbering the lexicographically smallest
/// new facet lies inside the smallest old facet with the same orientation, so the default
/// source orientation is preserved. The barycenter of a face takes the label of its smallest
/// vertex.
pub fn barycentric_subdivision(
  c: &AbstractComplex,
  labeling: &Labeling,
) -> Result<(AbstractComplex, Labeling), FixtureError> {
  let mut ids: HashMap<&SortedSimplex, u64> = HashMap::new();
  let mut labels: Vec<u32> = Vec::new();
  for k in 0..=c.dim() {
    for s in c.enumerate_faces(k)? {
      ids.insert(s, labels.len() as u64);
      labels.push(labeling.get(s.vertices()[0]));
    }
  }
  let m = c.dim();
  let mut facets = Vec::new();
  let mut order: Vec<usize> = (0..=m).collect();
  let mut chain: Vec<u64> = Vec::with_capacity(m + 1);
  for f in c.facets() {
    let v = f.vertices();
    for_each_permutation(&mut order, &mut |perm| {
      chain.clear();
      let mut prefix: Vec<u32> = Vec::with_capacity(m + 1);
      for &i in perm {
        let pos = prefix.partition_point(|&x| x < v[i]);
        prefix.insert(pos, v[i]);
        let face = SortedSimplex::from_sorted(&prefix).expect("sorted prefix");
        chain.push(ids[&face]);
      }
      facets.push(chain.clone());
    });
  }
  let sub = AbstractComplex::build(facets)?;
  Ok((sub, Labeling::new(labels)))
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
  fn rec(k: usize, items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
      f(items);
      return;
    }
    for i in 0..k {
      rec(k - 1, items, f);
      if k.is_multiple_of(2) {
        items.swap(i, k - 1);
      } else {
        items.swap(0, k - 1);
      }
    }
  }
  let n = items.len();
  rec(n, items, f);
}

pub fn constant_labeling(c: &AbstractComplex, label: u32) -> Labeling {
  Labeling::constant(c.num_vertices(), label)
}

/// Uniform labels in `1..=n+2`, resampled until [`validate_labeling`] passes.
///
/// Gives up after [`LABELING_RETRY_BUDGET`] attempts.
pub fn random_valid_labeling(c: &AbstractComplex, n: usize, seed: u64) -> Result<Labeling, FixtureError> {
  random_labeling_from(c, n, seed, &(1..=n as u32 + 2).collect::<Vec<_>>())
}

/// Like [`random_valid_labeling`] but drawing labels from `alphabet` only.
pub fn random_labeling_from(
  c: &AbstractComplex,
  n: usize,
  seed: u64,
  alphabet: &[u32],
) -> Result<Labeling, FixtureError> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  for _ in 0..LABELING_RETRY_BUDGET {
    let l = Labeling::new(
      (0..c.num_vertices())
        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
        .collect(),
    );
    match validate_labeling(c, &l, n) {
      Ok(()) => return Ok(l),
      Err(LabelingError::Violations { .. }) => continue,
      Err(e) => return Err(e.into()),
    }
  }
  Err(FixtureError::RetryBudgetExhausted {
    attempts: LABELING_RETRY_BUDGET,
  })
}

// A 12-vertex triangulation of S³ with a labeling by {1,2,3,4} that models the Hopf map.
//
// Each label is carried by three vertices spanning an unfilled triangle; these four fibres are
// pairwise linked once. The complex was obtained from a fine simplicial approximation of
// (z, w) ↦ (2 z w̄, |z|² - |w|²) on the second barycentric subdivision of ∂Δ⁴ by contracting
// edges between equally labeled vertices (under the link condition) and applying 2-3 / 3-2
// moves whose five vertices use at most three labels. Neither step changes the homotopy class.
// f-vector (12, 60, 96, 48).
const HOPF_FACETS: [[u64; 4]; 48] = [
  [0, 1, 3, 6],
  [0, 1, 3, 10],
  [0, 1, 4, 10],
  [0, 1, 4, 11],
  [0, 1, 6, 11],
  [0, 2, 3, 8],
  [0, 2, 3, 10],
  [0, 2, 7, 9],
  [0, 2, 7, 10],
  [0, 2, 8, 9],
  [0, 3, 6, 8],
  [0, 4, 10, 11],
  [0, 6, 8, 11],
  [0, 7, 8, 9],
  [0, 7, 8, 11],
  [0, 7, 10, 11],
  [1, 2, 4, 5],
  [1, 2, 4, 9],
  [1, 2, 5, 8],
  [1, 2, 8, 9],
  [1, 3, 4, 6],
  [1, 3, 4, 10],
  [1, 4, 5, 8],
  [1, 4, 6, 7],
  [1, 4, 7, 8],
  [1, 4, 9, 11],
  [1, 6, 7, 9],
  [1, 6, 9, 11],
  [1, 7, 8, 9],
  [2, 3, 5, 8],
  [2, 3, 5, 11],
  [2, 3, 9, 10],
  [2, 3, 9, 11],
  [2, 4, 5, 11],
  [2, 4, 9, 11],
  [2, 7, 9, 10],
  [3, 4, 6, 7],
  [3, 4, 7, 10],
  [3, 5, 8, 11],
  [3, 6, 7, 10],
  [3, 6, 8, 11],
  [3, 6, 9, 10],
  [3, 6, 9, 11],
  [4, 5, 8, 11],
  [4, 7, 8, 10],
  [4, 8, 10, 11],
  [6, 7, 9, 10],
  [7, 8, 10, 11],
];

const HOPF_LABELS: [u32; 12] = [1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4];

/// The 12-vertex simplicial Hopf map `S³ → ∂Δ³`.
pub fn hopf_fixture() -> (AbstractComplex, Labeling) {
  let c = AbstractComplex::build(HOPF_FACETS).expect("fixture is a closed pseudomanifold");
  (c, Labeling::new(HOPF_LABELS.to_vec()))
}
