//! Row-major sparse matrices over the rationals.

use num_traits::Zero;
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
  #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
  IndexOutOfRange {
    row: usize,
    col: usize,
    rows: usize,
    cols: usize,
  },
  #[error("duplicate entry at ({row}, {col})")]
  DuplicateEntry { row: usize, col: usize },
  #[error("shape mismatch: {0}")]
  Shape(String),
}

/// Sparse matrix with each row stored as `(column, value)` pairs sorted by column.
///
/// No stored zeros and at most one entry per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
  n_rows: usize,
  n_cols: usize,
  rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseRationalMatrix {
  pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
    Self {
      n_rows,
      n_cols,
      rows: vec![Vec::new(); n_rows],
    }
  }

  pub fn from_triplets(
    n_rows: usize,
    n_cols: usize,
    entries: impl IntoIterator<Item = (usize, usize, Rational)>,
  ) -> Result<Self, MatrixError> {
    let mut rows = vec![Vec::new(); n_rows];
    for (row, col, value) in entries {
      if row >= n_rows || col >= n_cols {
        return Err(MatrixError::IndexOutOfRange {
          row,
          col,
          rows: n_rows,
          cols: n_cols,
        });
      }
      rows[row].push((col, value));
    }
    for (r, row) in rows.iter_mut().enumerate() {
      row.sort_by_key(|e| e.0);
      if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(MatrixError::DuplicateEntry { row: r, col: w[0].0 });
      }
      row.retain(|e| !e.1.is_zero());
    }
    Ok(Self { n_rows, n_cols, rows })
  }

  pub fn n_rows(&self) -> usize {
    self.n_rows
  }

  pub fn n_cols(&self) -> usize {
    self.n_cols
  }

  pub fn row(&self, r: usize) -> &[(usize, Rational)] {
    &self.rows[r]
  }

  pub fn rows(&self) -> impl Iterator<Item = &[(usize, Rational)]> {
    self.rows.iter().map(Vec::as_slice)
  }

  pub fn nnz(&self) -> usize {
    self.rows.iter().map(Vec::len).sum()
  }

  pub fn is_zero(&self) -> bool {
    self.rows.iter().all(Vec::is_empty)
  }

  pub fn get(&self, row: usize, col: usize) -> Rational {
    match self.rows[row].binary_search_by_key(&col, |e| e.0) {
      Ok(i) => self.rows[row][i].1.clone(),
      Err(_) => Rational::zero(),
    }
  }

  pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
    self
      .rows
      .iter()
      .enumerate()
      .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
  }

  pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, MatrixError> {
    if x.len() != self.n_cols {
      return Err(MatrixError::Shape(format!(
        "vector of length {} against {} columns",
        x.len(),
        self.n_cols
      )));
    }
    Ok(
      self
        .rows
        .iter()
        .map(|row| {
          row.iter().fold(Rational::zero(), |acc, (c, v)| {
            if x[*c].is_zero() {
              acc
            } else {
              acc + v * &x[*c]
            }
          })
        })
        .collect(),
    )
  }

  /// `self · rhs`.
  pub fn matmul(&self, rhs: &SparseRationalMatrix) -> Result<SparseRationalMatrix, MatrixError> {
    if self.n_cols != rhs.n_rows {
      return Err(MatrixError::Shape(format!(
        "{}x{} times {}x{}",
        self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
      )));
    }
    let mut rows = Vec::with_capacity(self.n_rows);
    for row in &self.rows {
      let mut acc: std::collections::BTreeMap<usize, Rational> = Default::default();
      for (k, a) in row {
        for (c, b) in &rhs.rows[*k] {
          *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
        }
      }
      rows.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }
    Ok(Self {
      n_rows: self.n_rows,
      n_cols: rhs.n_cols,
      rows,
    })
  }

  pub fn transpose(&self) -> SparseRationalMatrix {
    let mut rows = vec![Vec::new(); self.n_cols];
    for (r, c, v) in self.triplets() {
      rows[c].push((r, v.clone()));
    }
    Self {
      n_rows: self.n_cols,
      n_cols: self.n_rows,
      rows,
    }
  }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::rat;

  #[test]
  fn triplets_validate_and_drop_zeros() {
    let m =
      SparseRationalMatrix::from_triplets(2, 3, [(0, 2, rat(1)), (0, 0, rat(-2)), (1, 1, rat(0))]).unwrap();
    assert_eq!(m.nnz(), 2);
    assert_eq!(m.row(0)[0].0, 0);
    assert_eq!(m.get(0, 2), rat(1));
    assert_eq!(m.get(1, 1), rat(0));
    assert!(matches!(
      SparseRationalMatrix::from_triplets(2, 2, [(2, 0, rat(1))]),
      Err(MatrixError::IndexOutOfRange { .. })
    ));
    assert_eq!(
      SparseRationalMatrix::from_triplets(2, 2, [(0, 1, rat(1)), (0, 1, rat(2))]),
      Err(MatrixError::DuplicateEntry { row: 0, col: 1 })
    );
  }

  #[test]
  fn products() {
    let a =
      SparseRationalMatrix::from_triplets(2, 2, [(0, 0, rat(1)), (0, 1, rat(1)), (1, 1, rat(1))]).unwrap();
    let b =
      SparseRationalMatrix::from_triplets(2, 2, [(0, 0, rat(1)), (0, 1, rat(-1)), (1, 1, rat(1))]).unwrap();
    let ab = a.matmul(&b).unwrap();
    assert_eq!(
      ab.triplets()
        .map(|(r, c, v)| (r, c, v.clone()))
        .collect::<Vec<_>>(),
      vec![(0, 0, rat(1)), (1, 1, rat(1))]
    );
    assert_eq!(a.mul_vec(&[rat(2), rat(3)]).unwrap(), vec![rat(5), rat(3)]);
    assert_eq!(a.transpose().get(1, 0), rat(1));
    assert!(a.mul_vec(&[rat(1)]).is_err());
  }
}
