//! Rational cochains and integer chains on an [`AbstractComplex`], with the coboundary, the
//! front-face/back-face cup product, and the chain pairing.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{AbstractComplex, FundamentalCycle};
use crate::simplex::{canonical_sign, OrientedSimplex, SortedSimplex};
use crate::sparse::SparseRationalMatrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
  #[error("degree {k} out of range 0..={max}")]
  DimensionOutOfRange { k: usize, max: usize },
  #[error("operands live on different complexes")]
  MixedComplexes,
  #[error("degree mismatch: {left} vs {right}")]
  DegreeMismatch { left: usize, right: usize },
  #[error("{simplex} is not a {degree}-face of the complex")]
  NotAFace { simplex: String, degree: usize },
  #[error("vector of length {found} does not match {expected} faces")]
  LengthMismatch { expected: usize, found: usize },
}

fn same_complex(a: &Arc<AbstractComplex>, b: &Arc<AbstractComplex>) -> bool {
  Arc::ptr_eq(a, b) || a == b
}

/// A degree-`k` cochain, stored sparsely by face index. Absent faces are zero.
#[derive(Debug, Clone)]
pub struct Cochain {
  complex: Arc<AbstractComplex>,
  degree: usize,
  values: BTreeMap<usize, Rational>,
}

impl PartialEq for Cochain {
  fn eq(&self, other: &Self) -> bool {
    self.degree == other.degree && self.values == other.values && same_complex(&self.complex, &other.complex)
  }
}

impl Cochain {
  pub fn zero(complex: Arc<AbstractComplex>, degree: usize) -> Result<Self, CochainError> {
    if degree > complex.dim() {
      return Err(CochainError::DimensionOutOfRange {
        k: degree,
        max: complex.dim(),
      });
    }
    Ok(Self {
      complex,
      degree,
      values: BTreeMap::new(),
    })
  }

  /// Builds a cochain from one value per `degree`-face, in face order.
  pub fn from_dense(
    complex: Arc<AbstractComplex>,
    degree: usize,
    values: Vec<Rational>,
  ) -> Result<Self, CochainError> {
    let mut c = Self::zero(complex, degree)?;
    let expected = c.complex.count(degree);
    if values.len() != expected {
      return Err(CochainError::LengthMismatch {
        expected,
        found: values.len(),
      });
    }
    c.values = values
      .into_iter()
      .enumerate()
      .filter(|(_, v)| !v.is_zero())
      .collect();
    Ok(c)
  }

  pub fn from_fn(
    complex: Arc<AbstractComplex>,
    degree: usize,
    mut f: impl FnMut(&SortedSimplex) -> Rational,
  ) -> Result<Self, CochainError> {
    let mut c = Self::zero(complex, degree)?;
    let values = c
      .complex
      .enumerate_faces(degree)
      .expect("degree checked")
      .iter()
      .map(&mut f)
      .collect();
    c = Self::from_dense(c.complex, degree, values)?;
    Ok(c)
  }

  pub fn complex(&self) -> &Arc<AbstractComplex> {
    &self.complex
  }

  pub fn degree(&self) -> usize {
    self.degree
  }

  /// Value on the face with the given index.
  pub fn value_at(&self, index: usize) -> Rational {
    self.values.get(&index).cloned().unwrap_or_else(Rational::zero)
  }

  /// Value on a sorted face; faces outside the complex evaluate to zero.
  pub fn value(&self, s: &SortedSimplex) -> Rational {
    match self.complex.face_index(s) {
      Some(i) if s.dim() == self.degree => self.value_at(i),
      _ => Rational::zero(),
    }
  }

  /// Value on an ordered tuple: the parity of the sorting permutation times the sorted value.
  pub fn eval(&self, s: &OrientedSimplex) -> Result<Rational, CochainError> {
    let (sorted, sign) = canonical_sign(&s.0).map_err(|_| CochainError::NotAFace {
      simplex: format!("{:?}", s.0),
      degree: self.degree,
    })?;
    let v = self.value(&sorted);
    Ok(if sign < 0 { -v } else { v })
  }

  pub fn set(&mut self, s: &SortedSimplex, value: Rational) -> Result<(), CochainError> {
    let idx = self
      .complex
      .face_index(s)
      .filter(|_| s.dim() == self.degree)
      .ok_or_else(|| CochainError::NotAFace {
        simplex: s.to_string(),
        degree: self.degree,
      })?;
    self.set_at(idx, value);
    Ok(())
  }

  pub fn set_at(&mut self, index: usize, value: Rational) {
    if value.is_zero() {
      self.values.remove(&index);
    } else {
      self.values.insert(index, value);
    }
  }

  /// Nonzero entries as `(face index, value)`.
  pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
    self.values.iter().map(|(i, v)| (*i, v))
  }

  pub fn support_len(&self) -> usize {
    self.values.len()
  }

  pub fn is_zero(&self) -> bool {
    self.values.is_empty()
  }

  pub fn to_dense(&self) -> Vec<Rational> {
    (0..self.complex.count(self.degree))
      .map(|i| self.value_at(i))
      .collect()
  }

  pub fn add(&self, other: &Cochain) -> Result<Cochain, CochainError> {
    self.check_compatible(other)?;
    if self.degree != other.degree {
      return Err(CochainError::DegreeMismatch {
        left: self.degree,
        right: other.degree,
      });
    }
    let mut out = self.clone();
    for (i, v) in other.iter() {
      let sum = out.value_at(i) + v;
      out.set_at(i, sum);
    }
    Ok(out)
  }

  pub fn scale(&self, factor: &Rational) -> Cochain {
    let mut out = Cochain {
      complex: self.complex.clone(),
      degree: self.degree,
      values: BTreeMap::new(),
    };
    if !factor.is_zero() {
      out.values = self.values.iter().map(|(i, v)| (*i, v * factor)).collect();
    }
    out
  }

  fn check_compatible(&self, other: &Cochain) -> Result<(), CochainError> {
    if same_complex(&self.complex, &other.complex) {
      Ok(())
    } else {
      Err(CochainError::MixedComplexes)
    }
  }

  /// `(δa)[v0..v_{k+1}] = Σ_i (-1)^i a[v0..v̂_i..v_{k+1}]` on every sorted `(k+1)`-face.
  pub fn coboundary(&self) -> Result<Cochain, CochainError> {
    let c = &self.complex;
    let k1 = self.degree + 1;
    let faces = c
      .enumerate_faces(k1)
      .map_err(|_| CochainError::DimensionOutOfRange { k: k1, max: c.dim() })?;
    let mut out = Cochain {
      complex: c.clone(),
      degree: k1,
      values: BTreeMap::new(),
    };
    if self.is_zero() {
      return Ok(out);
    }
    for (row, s) in faces.iter().enumerate() {
      let mut acc = Rational::zero();
      for (i, face) in s.boundary_faces() {
        let v = self.value(&face);
        if v.is_zero() {
          continue;
        }
        if i % 2 == 0 {
          acc += v;
        } else {
          acc -= v;
        }
      }
      out.set_at(row, acc);
    }
    Ok(out)
  }

  /// `(a ⌣ b)[v0..v_{k+l}] = a[v0..v_k] · b[v_k..v_{k+l}]` on sorted simplices.
  pub fn cup(&self, other: &Cochain) -> Result<Cochain, CochainError> {
    self.check_compatible(other)?;
    let c = &self.complex;
    let (k, l) = (self.degree, other.degree);
    let faces = c
      .enumerate_faces(k + l)
      .map_err(|_| CochainError::DimensionOutOfRange {
        k: k + l,
        max: c.dim(),
      })?;
    let mut out = Cochain {
      complex: c.clone(),
      degree: k + l,
      values: BTreeMap::new(),
    };
    if self.is_zero() || other.is_zero() {
      return Ok(out);
    }
    for (idx, s) in faces.iter().enumerate() {
      let back = other.value(&s.slice(k..k + l + 1));
      if back.is_zero() {
        continue;
      }
      let front = self.value(&s.slice(0..k + 1));
      out.set_at(idx, front * back);
    }
    Ok(out)
  }

  /// `⟨a, z⟩ = Σ z_σ a(σ)`.
  pub fn pair(&self, z: &Chain) -> Result<Rational, CochainError> {
    if !same_complex(&self.complex, &z.complex) {
      return Err(CochainError::MixedComplexes);
    }
    if self.degree != z.degree {
      return Err(CochainError::DegreeMismatch {
        left: self.degree,
        right: z.degree,
      });
    }
    let mut acc = Rational::zero();
    for (i, coeff) in &z.coefficients {
      if let Some(v) = self.values.get(i) {
        acc += v * Rational::from_integer(coeff.clone());
      }
    }
    Ok(acc)
  }
}

/// A degree-`k` chain with integer coefficients, stored sparsely by face index.
#[derive(Debug, Clone)]
pub struct Chain {
  complex: Arc<AbstractComplex>,
  degree: usize,
  coefficients: BTreeMap<usize, BigInt>,
}

impl Chain {
  pub fn new(
    complex: Arc<AbstractComplex>,
    degree: usize,
    coefficients: impl IntoIterator<Item = (SortedSimplex, BigInt)>,
  ) -> Result<Self, CochainError> {
    if degree > complex.dim() {
      return Err(CochainError::DimensionOutOfRange {
        k: degree,
        max: complex.dim(),
      });
    }
    let mut map = BTreeMap::new();
    for (s, coeff) in coefficients {
      let idx = complex
        .face_index(&s)
        .filter(|_| s.dim() == degree)
        .ok_or_else(|| CochainError::NotAFace {
          simplex: s.to_string(),
          degree,
        })?;
      let entry = map.entry(idx).or_insert_with(BigInt::zero);
      *entry += coeff;
    }
    map.retain(|_, v: &mut BigInt| !v.is_zero());
    Ok(Self {
      complex,
      degree,
      coefficients: map,
    })
  }

  /// The top-dimensional chain `Σ ε_σ σ`.
  pub fn from_fundamental_cycle(complex: Arc<AbstractComplex>, cycle: &FundamentalCycle) -> Self {
    let degree = complex.dim();
    let coefficients = cycle
      .signs()
      .iter()
      .enumerate()
      .map(|(i, &e)| (i, BigInt::from(e)))
      .collect();
    Self {
      complex,
      degree,
      coefficients,
    }
  }

  pub fn degree(&self) -> usize {
    self.degree
  }

  pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
    self.coefficients.iter().map(|(i, v)| (*i, v))
  }
}

/// Matrix of `δ: C^k -> C^{k+1}`: rows are `(k+1)`-faces, columns `k`-faces, both in
/// lexicographic order. Each row holds `k+2` entries `±1`.
pub fn coboundary_matrix(c: &AbstractComplex, k: usize) -> Result<SparseRationalMatrix, CochainError> {
  let rows = c
    .enumerate_faces(k + 1)
    .map_err(|_| CochainError::DimensionOutOfRange {
      k: k + 1,
      max: c.dim(),
    })?;
  let n_cols = c.count(k);
  let one = Rational::one();
  let entries = rows.iter().enumerate().flat_map(|(r, s)| {
    let one = one.clone();
    s.boundary_faces().map(move |(i, face)| {
      let col = c.face_index(&face).expect("boundary face belongs to the complex");
      (r, col, if i % 2 == 0 { one.clone() } else { -one.clone() })
    })
  });
  Ok(SparseRationalMatrix::from_triplets(rows.len(), n_cols, entries).expect("indices come from the complex"))
}
