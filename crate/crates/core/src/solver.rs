//! Exact sparse Gaussian elimination over the rationals.
//!
//! Rows are eliminated one pivot at a time. With [`PivotRule::Markowitz`] the next pivot is the
//! entry minimizing `(row_count - 1) * (col_count - 1)`, ties broken by the lowest column and
//! then the lowest row, tracked with a lazily invalidated heap. [`PivotRule::LeftToRight`] takes
//! columns in order and pivots on the lowest active row containing them.
//!
//! Free (non-pivot) variables are set to zero in particular solutions.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cochain::{coboundary_matrix, Cochain, CochainError};
use crate::complex::AbstractComplex;
use crate::sparse::{MatrixError, SparseRationalMatrix};
use crate::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
  #[error("system is inconsistent (row {row} reduces to 0 = nonzero)")]
  Inconsistent { row: usize },
  #[error(transparent)]
  Matrix(#[from] MatrixError),
  #[error(transparent)]
  Cochain(#[from] CochainError),
  #[error("degree {0} has no coboundary system")]
  DegreeOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
  #[default]
  Markowitz,
  LeftToRight,
}

/// `matrix · x = rhs`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
  pub matrix: SparseRationalMatrix,
  pub rhs: Vec<Rational>,
}

impl LinearSystem {
  pub fn new(matrix: SparseRationalMatrix, rhs: Vec<Rational>) -> Result<Self, SolveError> {
    if rhs.len() != matrix.n_rows() {
      return Err(
        MatrixError::Shape(format!(
          "rhs of length {} for {} rows",
          rhs.len(),
          matrix.n_rows()
        ))
        .into(),
      );
    }
    Ok(Self { matrix, rhs })
  }

  /// `δθ = target` for `θ` of degree `target.degree() - 1`.
  pub fn coboundary_system(target: &Cochain) -> Result<Self, SolveError> {
    let k = target
      .degree()
      .checked_sub(1)
      .ok_or(SolveError::DegreeOutOfRange(0))?;
    let matrix = coboundary_matrix(target.complex(), k)?;
    Self::new(matrix, target.to_dense())
  }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
  pub particular_solution: Vec<Rational>,
  pub rank: usize,
  pub nullity: usize,
  /// Pivot columns in elimination order.
  pub pivot_columns: Vec<usize>,
  /// Entries created by elimination that were zero in the original matrix.
  pub fill: usize,
}

type Row = Vec<(usize, Rational)>;

/// Result of eliminating a matrix: the pivot rows in the order they were chosen.
#[derive(Debug, Clone)]
struct Elimination {
  n_cols: usize,
  /// `(pivot column, reduced row, reduced rhs)`.
  pivots: Vec<(usize, Row, Rational)>,
  inconsistent_row: Option<usize>,
  fill: usize,
}

impl Elimination {
  fn run(matrix: &SparseRationalMatrix, rhs: Option<&[Rational]>, rule: PivotRule) -> Self {
    let mut state = State::new(matrix, rhs);
    match rule {
      PivotRule::Markowitz => state.markowitz(),
      PivotRule::LeftToRight => state.left_to_right(),
    }
    let inconsistent_row = state.inconsistent_row();
    Elimination {
      n_cols: matrix.n_cols(),
      pivots: state.pivots,
      inconsistent_row,
      fill: state.fill,
    }
  }

  fn rank(&self) -> usize {
    self.pivots.len()
  }

  fn pivot_columns(&self) -> Vec<usize> {
    self.pivots.iter().map(|p| p.0).collect()
  }

  fn free_columns(&self) -> Vec<usize> {
    let mut is_pivot = vec![false; self.n_cols];
    for (c, _, _) in &self.pivots {
      is_pivot[*c] = true;
    }
    (0..self.n_cols).filter(|&c| !is_pivot[c]).collect()
  }

  /// Back substitution with the given values on free columns (zero elsewhere).
  fn back_substitute(&self, free: &[(usize, Rational)], homogeneous: bool) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); self.n_cols];
    for (c, v) in free {
      x[*c] = v.clone();
    }
    for (col, row, rhs) in self.pivots.iter().rev() {
      let mut acc = if homogeneous {
        Rational::zero()
      } else {
        rhs.clone()
      };
      let mut pivot = None;
      for (c, a) in row {
        if c == col {
          pivot = Some(a);
        } else if !x[*c].is_zero() {
          acc -= a * &x[*c];
        }
      }
      x[*col] = acc / pivot.expect("pivot entry present");
    }
    x
  }
}

struct State {
  rows: Vec<Row>,
  rhs: Vec<Rational>,
  row_active: Vec<bool>,
  col_rows: Vec<BTreeSet<usize>>,
  col_active: Vec<bool>,
  pivots: Vec<(usize, Row, Rational)>,
  fill: usize,
}

impl State {
  fn new(matrix: &SparseRationalMatrix, rhs: Option<&[Rational]>) -> Self {
    let rows: Vec<Row> = matrix.rows().map(<[_]>::to_vec).collect();
    let mut col_rows = vec![BTreeSet::new(); matrix.n_cols()];
    for (r, row) in rows.iter().enumerate() {
      for (c, _) in row {
        col_rows[*c].insert(r);
      }
    }
    let rhs = match rhs {
      Some(b) => b.to_vec(),
      None => vec![Rational::zero(); rows.len()],
    };
    State {
      row_active: vec![true; rows.len()],
      col_active: vec![true; matrix.n_cols()],
      rows,
      rhs,
      col_rows,
      pivots: Vec::new(),
      fill: 0,
    }
  }

  fn cost(&self, r: usize, c: usize) -> u64 {
    (self.rows[r].len() as u64 - 1) * (self.col_rows[c].len() as u64 - 1)
  }

  fn entry_exists(&self, r: usize, c: usize) -> bool {
    self.rows[r].binary_search_by_key(&c, |e| e.0).is_ok()
  }

  fn markowitz(&mut self) {
    let mut heap = BinaryHeap::new();
    for (r, row) in self.rows.iter().enumerate() {
      for (c, _) in row {
        heap.push(Reverse((self.cost(r, *c), *c, r)));
      }
    }
    while let Some(Reverse((cost, c, r))) = heap.pop() {
      if !self.row_active[r] || !self.col_active[c] || !self.entry_exists(r, c) || self.cost(r, c) != cost {
        continue;
      }
      let (touched_rows, touched_cols) = self.pivot(r, c);
      for &j in &touched_rows {
        for (cc, _) in &self.rows[j] {
          heap.push(Reverse((self.cost(j, *cc), *cc, j)));
        }
      }
      for &cc in &touched_cols {
        for &j in &self.col_rows[cc] {
          heap.push(Reverse((self.cost(j, cc), cc, j)));
        }
      }
    }
  }

  fn left_to_right(&mut self) {
    for c in 0..self.col_active.len() {
      if let Some(&r) = self.col_rows[c].iter().next() {
        self.pivot(r, c);
      }
    }
  }

  /// Eliminates column `c` from every other active row using row `r`, then retires both.
  /// Returns the rows whose contents changed and the columns whose counts changed.
  fn pivot(&mut self, r: usize, c: usize) -> (Vec<usize>, Vec<usize>) {
    let pivot_row = std::mem::take(&mut self.rows[r]);
    let pivot_rhs = std::mem::take(&mut self.rhs[r]);
    let pivot_val = pivot_row
      .iter()
      .find(|e| e.0 == c)
      .expect("pivot entry")
      .1
      .clone();
    self.row_active[r] = false;
    self.col_active[c] = false;
    for (cc, _) in &pivot_row {
      self.col_rows[*cc].remove(&r);
    }
    let targets: Vec<usize> = std::mem::take(&mut self.col_rows[c]).into_iter().collect();
    for &j in &targets {
      let row_j = std::mem::take(&mut self.rows[j]);
      let a_jc = &row_j.iter().find(|e| e.0 == c).expect("column entry").1;
      let factor = a_jc / &pivot_val;
      let (merged, created, removed) = axpy(&row_j, &pivot_row, &factor, c);
      self.fill += created.len();
      for cc in created {
        self.col_rows[cc].insert(j);
      }
      for cc in removed {
        if cc != c {
          self.col_rows[cc].remove(&j);
        }
      }
      if !pivot_rhs.is_zero() {
        let delta = &factor * &pivot_rhs;
        self.rhs[j] -= delta;
      }
      self.rows[j] = merged;
    }
    let touched_cols: Vec<usize> = pivot_row.iter().map(|e| e.0).filter(|&cc| cc != c).collect();
    self.pivots.push((c, pivot_row, pivot_rhs));
    (targets, touched_cols)
  }

  /// First active row that reduced to `0 = nonzero`.
  fn inconsistent_row(&self) -> Option<usize> {
    (0..self.rows.len()).find(|&r| self.row_active[r] && self.rows[r].is_empty() && !self.rhs[r].is_zero())
  }
}

/// `row - factor * pivot`, with column `eliminated` forced out. Returns the merged row, columns
/// that became nonzero, and columns that became zero.
fn axpy(row: &Row, pivot: &Row, factor: &Rational, eliminated: usize) -> (Row, Vec<usize>, Vec<usize>) {
  let mut out = Vec::with_capacity(row.len() + pivot.len());
  let mut created = Vec::new();
  let mut removed = Vec::new();
  let (mut i, mut k) = (0, 0);
  while i < row.len() || k < pivot.len() {
    let ci = row.get(i).map_or(usize::MAX, |e| e.0);
    let ck = pivot.get(k).map_or(usize::MAX, |e| e.0);
    if ci < ck {
      out.push(row[i].clone());
      i += 1;
    } else if ck < ci {
      if ck != eliminated {
        out.push((ck, -(factor * &pivot[k].1)));
        created.push(ck);
      }
      k += 1;
    } else {
      if ci == eliminated {
        removed.push(ci);
      } else {
        let v = &row[i].1 - factor * &pivot[k].1;
        if v.is_zero() {
          removed.push(ci);
        } else {
          out.push((ci, v));
        }
      }
      i += 1;
      k += 1;
    }
  }
  (out, created, removed)
}

/// Exact particular solution with free variables zeroed, using Markowitz pivoting.
pub fn solve_particular(sys: &LinearSystem) -> Result<SolveReport, SolveError> {
  solve_with(sys, PivotRule::Markowitz)
}

pub fn solve_with(sys: &LinearSystem, rule: PivotRule) -> Result<SolveReport, SolveError> {
  let elim = Elimination::run(&sys.matrix, Some(&sys.rhs), rule);
  if let Some(row) = elim.inconsistent_row {
    return Err(SolveError::Inconsistent { row });
  }
  let particular_solution = elim.back_substitute(&[], false);
  Ok(SolveReport {
    rank: elim.rank(),
    nullity: sys.matrix.n_cols() - elim.rank(),
    pivot_columns: elim.pivot_columns(),
    fill: elim.fill,
    particular_solution,
  })
}

/// Exact rank over ℚ.
pub fn rank(mat: &SparseRationalMatrix) -> usize {
  rank_with(mat, PivotRule::Markowitz)
}

pub fn rank_with(mat: &SparseRationalMatrix, rule: PivotRule) -> usize {
  Elimination::run(mat, None, rule).rank()
}

/// A basis of the null space: one vector per free column, with that column set to 1.
pub fn kernel_basis(mat: &SparseRationalMatrix) -> Vec<Vec<Rational>> {
  let elim = Elimination::run(mat, None, PivotRule::Markowitz);
  elim
    .free_columns()
    .into_iter()
    .map(|f| elim.back_substitute(&[(f, Rational::one())], true))
    .collect()
}

/// `δη` for a degree-`(n-2)` cochain `η`.
pub fn gauge_shift(eta: &Cochain) -> Result<Cochain, SolveError> {
  Ok(eta.coboundary()?)
}

/// `δη` for a seeded pseudo-random `η` of degree `n-2` with values in `-3..=3`.
///
/// For `n = 1` there are no `(n-2)`-cochains and the zero cochain of degree 0 is returned.
pub fn kernel_perturbation(c: &Arc<AbstractComplex>, n: usize, seed: u64) -> Result<Cochain, SolveError> {
  if n == 0 || n > c.dim() {
    return Err(SolveError::DegreeOutOfRange(n));
  }
  if n == 1 {
    return Ok(Cochain::zero(c.clone(), 0)?);
  }
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let eta = Cochain::from_fn(c.clone(), n - 2, |_| rat(rng.random_range(-3i64..=3)))?;
  gauge_shift(&eta)
}
