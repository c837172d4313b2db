//! The plain-text instance format.
//!
//! ```text
//! # comment
//! n 2
//! facet 0 1 2 3
//! label 0 1
//! ```
//!
//! One `n <int>` header; `facet` lines with exactly `2n` vertex ids; one `label <vertex> <label>`
//! line per vertex with `1 <= label <= n+2`. Vertex ids are arbitrary non-negative integers.
//! Blank lines and lines starting with `#` are ignored; other lines may appear in any order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hopf_core::pullback::validate_labeling;
use hopf_core::{AbstractComplex, ComplexError, Labeling, LabelingError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
  #[error("line {line}: {message}")]
  Syntax { line: usize, message: String },
  #[error("header: {0}")]
  Header(String),
  #[error("vertex {0} has no label line")]
  MissingLabel(u64),
  #[error("line {line}: vertex {vertex} is labeled more than once")]
  DuplicateLabel { vertex: u64, line: usize },
  #[error("line {line}: vertex {vertex} does not appear in any facet")]
  UnknownVertex { vertex: u64, line: usize },
  #[error("line {line}: label {label} of vertex {vertex} outside 1..={max}")]
  LabelOutOfRange {
    vertex: u64,
    label: u32,
    max: u32,
    line: usize,
  },
  #[error(transparent)]
  Complex(#[from] ComplexError),
  #[error(transparent)]
  Labeling(#[from] LabelingError),
}

/// A syntactically valid file, before any structural checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
  pub n: usize,
  pub facets: Vec<Vec<u64>>,
  /// Original vertex id → (label, line).
  pub labels: BTreeMap<u64, (u32, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
  pub n: usize,
  pub complex: AbstractComplex,
  pub labeling: Labeling,
}

fn syntax(line: usize, message: impl Into<String>) -> InstanceError {
  InstanceError::Syntax {
    line,
    message: message.into(),
  }
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, InstanceError> {
  tok
    .parse()
    .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_raw(text: &str) -> Result<RawInstance, InstanceError> {
  let mut header: Option<(usize, usize)> = None;
  for (i, raw) in text.lines().enumerate() {
    let toks: Vec<&str> = raw.split_whitespace().collect();
    if toks.first() == Some(&"n") {
      let line = i + 1;
      if let Some((_, first)) = header {
        return Err(InstanceError::Header(format!(
          "second header on line {line} (first on line {first})"
        )));
      }
      if toks.len() != 2 {
        return Err(syntax(line, "header must be `n <int>`"));
      }
      let n: usize = parse_int(toks[1], line, "dimension")?;
      if n == 0 {
        return Err(InstanceError::Header(format!(
          "line {line}: n must be at least 1"
        )));
      }
      header = Some((n, line));
    }
  }
  let (n, _) = header.ok_or_else(|| InstanceError::Header("missing `n <int>` line".into()))?;

  let mut facets = Vec::new();
  let mut labels = BTreeMap::new();
  for (i, raw) in text.lines().enumerate() {
    let line = i + 1;
    let toks: Vec<&str> = raw.split_whitespace().collect();
    match toks.first().copied() {
      None | Some("n") => {}
      Some(t) if t.starts_with('#') => {}
      Some("facet") => {
        if toks.len() - 1 != 2 * n {
          return Err(syntax(
            line,
            format!("facet has {} vertices, expected 2n = {}", toks.len() - 1, 2 * n),
          ));
        }
        let f = toks[1..]
          .iter()
          .map(|t| parse_int::<u64>(t, line, "vertex id"))
          .collect::<Result<Vec<_>, _>>()?;
        facets.push(f);
      }
      Some("label") => {
        if toks.len() != 3 {
          return Err(syntax(line, "label line must be `label <vertex> <label>`"));
        }
        let vertex: u64 = parse_int(toks[1], line, "vertex id")?;
        let label: u32 = parse_int(toks[2], line, "label")?;
        let max = n as u32 + 2;
        if label == 0 || label > max {
          return Err(InstanceError::LabelOutOfRange {
            vertex,
            label,
            max,
            line,
          });
        }
        if labels.insert(vertex, (label, line)).is_some() {
          return Err(InstanceError::DuplicateLabel { vertex, line });
        }
      }
      Some(other) => return Err(syntax(line, format!("unknown directive `{other}`"))),
    }
  }
  Ok(RawInstance { n, facets, labels })
}

impl RawInstance {
  /// Labeling in normalized vertex order, checking coverage against `complex`.
  pub fn labeling_for(&self, complex: &AbstractComplex) -> Result<Labeling, InstanceError> {
    for (&vertex, &(_, line)) in &self.labels {
      if complex.vertex_of_original(vertex).is_none() {
        return Err(InstanceError::UnknownVertex { vertex, line });
      }
    }
    let labels = complex
      .original_ids()
      .iter()
      .map(|id| {
        self
          .labels
          .get(id)
          .map(|&(l, _)| l)
          .ok_or(InstanceError::MissingLabel(*id))
      })
      .collect::<Result<Vec<_>, _>>()?;
    Ok(Labeling::new(labels))
  }

  pub fn into_instance(self) -> Result<Instance, InstanceError> {
    let complex = AbstractComplex::build(&self.facets)?;
    let labeling = self.labeling_for(&complex)?;
    validate_labeling(&complex, &labeling, self.n)?;
    Ok(Instance {
      n: self.n,
      complex,
      labeling,
    })
  }
}

/// Parses, normalizes, and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
  parse_raw(text)?.into_instance()
}

/// Canonical text form: header, facets in lexicographic order, then labels by vertex, all in
/// original ids.
pub fn emit(n: usize, complex: &AbstractComplex, labeling: &Labeling) -> String {
  let mut out = String::new();
  writeln!(out, "n {n}").unwrap();
  for f in complex.facets() {
    out.push_str("facet");
    for v in complex.original_tuple(f) {
      write!(out, " {v}").unwrap();
    }
    out.push('\n');
  }
  for (v, &id) in complex.original_ids().iter().enumerate() {
    writeln!(out, "label {id} {}", labeling.get(v as u32)).unwrap();
  }
  out
}

impl Instance {
  pub fn emit(&self) -> String {
    emit(self.n, &self.complex, &self.labeling)
  }
}
