use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use hopf_core::cochain::coboundary_matrix;
use hopf_core::complex::ComplexError;
use hopf_core::engine::{consistency_suite_with, target_dimension};
use hopf_core::fixtures::{self, GeneratorSpec};
use hopf_core::pullback::validate_labeling;
use hopf_core::solver::rank;
use hopf_core::{compute_hopf, AbstractComplex, EngineError, HopfOptions, Labeling, OmegaChoice};
use itertools::Itertools;

use crate::instance::{emit, parse_instance, parse_raw, Instance, InstanceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
  name = "hopf",
  version,
  about = "Exact Hopf invariant of simplicial maps S^(2n-1) -> S^n"
)]
pub struct Cli {
  #[command(subcommand)]
  pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
  /// Print H(f) as a single integer on stdout.
  Hopf(HopfArgs),
  /// Run every structural check and print one line per check.
  Validate { path: PathBuf },
  /// Compare the kernel dimension of the degree-(n-1) coboundary system with the closed formulas.
  RankCheck { path: PathBuf },
  /// Recompute H over all choices of sigma-bar, gauge perturbations, and orientation reversal.
  Consistency(ConsistencyArgs),
  /// Write a generated instance to stdout.
  Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct HopfArgs {
  pub path: PathBuf,
  /// Oriented target facet carrying omega, n+1 labels (default 1..n+1).
  #[arg(long, num_args = 1.., value_delimiter = ',')]
  pub sigma_bar: Option<Vec<u32>>,
  /// Add a seeded coboundary to theta.
  #[arg(long)]
  pub gauge_seed: Option<u64>,
  /// Negate the fundamental cycle of the source.
  #[arg(long)]
  pub reverse_orientation: bool,
  /// Run the full computation even when n is odd.
  #[arg(long)]
  pub no_odd_shortcut: bool,
  /// Print key=value statistics on stderr.
  #[arg(long)]
  pub stats: bool,
  /// Debug: make the pulled-back form non-closed so the linear system has no solution.
  #[arg(long, hide = true)]
  pub inject_omega_fault: bool,
}

#[derive(Debug, Args)]
pub struct ConsistencyArgs {
  pub path: PathBuf,
  #[arg(long, default_value_t = 10)]
  pub trials: usize,
  #[arg(long, default_value_t = 0)]
  pub seed: u64,
  /// Debug: corrupt theta with seeded noise so the suite must fail.
  #[arg(long, hide = true)]
  pub inject_fault: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
  #[command(subcommand)]
  pub kind: GenerateKind,
  /// Label every vertex with this label.
  #[arg(long, global = true, conflicts_with = "random_seed")]
  pub constant_label: Option<u32>,
  /// Draw a random valid labeling with this seed.
  #[arg(long, global = true)]
  pub random_seed: Option<u64>,
  /// Apply this many barycentric subdivisions (labels follow the minimum vertex of each face).
  #[arg(long, global = true, default_value_t = 0)]
  pub subdivide: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum GenerateKind {
  /// The 12-vertex simplicial Hopf map (its own labeling unless overridden).
  Hopf,
  /// Boundary of the (d+1)-simplex, a d-sphere; d must be odd.
  BoundarySphere { d: usize },
  /// A p-gon (a 1-sphere, n = 1).
  Polygon { p: usize },
  /// Join of a p-gon and a q-gon (a 3-sphere).
  JoinPolygons { p: usize, q: usize },
}

/// Dispatches a parsed command line. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  match cli.command {
    Command::Hopf(args) => cmd_hopf(&args, out, err),
    Command::Validate { path } => match read_text(&path, err) {
      Ok(text) => cmd_validate(&text, out, err),
      Err(code) => code,
    },
    Command::RankCheck { path } => match read_text(&path, err) {
      Ok(text) => cmd_rank_check(&text, out, err),
      Err(code) => code,
    },
    Command::Consistency(args) => cmd_consistency(&args, out, err),
    Command::Generate(args) => cmd_generate(&args, out, err),
  }
}

fn read_text(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
  std::fs::read_to_string(path).map_err(|e| {
    let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
    EXIT_INVALID
  })
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Instance, i32> {
  let text = read_text(path, err)?;
  parse_instance(&text).map_err(|e| report_instance_error(&e, err))
}

fn report_instance_error(e: &InstanceError, err: &mut dyn Write) -> i32 {
  let _ = writeln!(err, "error: {e}");
  if let InstanceError::Labeling(hopf_core::LabelingError::Violations { facets }) = e {
    for f in facets {
      let _ = writeln!(err, "  offending facet: {}", f.iter().join(" "));
    }
  }
  EXIT_INVALID
}

fn report_engine_error(e: &EngineError, err: &mut dyn Write) -> i32 {
  let _ = writeln!(err, "error: {e}");
  if e.is_certification_failure() {
    EXIT_CERTIFICATION
  } else {
    EXIT_INVALID
  }
}

pub fn cmd_hopf(args: &HopfArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  let inst = match load(&args.path, err) {
    Ok(i) => i,
    Err(code) => return code,
  };
  let opts = HopfOptions {
    sigma_bar: args.sigma_bar.clone().map(OmegaChoice::new),
    gauge_seed: args.gauge_seed,
    reverse_source_orientation: args.reverse_orientation,
    odd_n_shortcut: !args.no_odd_shortcut,
    corrupt_omega: args.inject_omega_fault,
    ..Default::default()
  };
  match compute_hopf(&Arc::new(inst.complex), &inst.labeling, &opts) {
    Ok(r) => {
      let _ = writeln!(out, "{}", r.hopf);
      if args.stats {
        let s = &r.stats;
        let opt = |v: Option<usize>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
        let _ = writeln!(err, "n={}", r.n);
        let _ = writeln!(err, "f_vector={}", s.f_vector.iter().join(","));
        let _ = writeln!(err, "rank={}", opt(s.rank));
        let _ = writeln!(err, "nullity={}", opt(s.nullity));
        let _ = writeln!(err, "fill={}", s.fill);
        let _ = writeln!(err, "raw_pairing={}", r.raw_pairing);
        let _ = writeln!(err, "shortcut={}", s.shortcut);
        let _ = writeln!(err, "solve_time_ms={:.3}", s.solve_time.as_secs_f64() * 1e3);
        let _ = writeln!(err, "wall_time_ms={:.3}", s.wall_time.as_secs_f64() * 1e3);
      }
      EXIT_OK
    }
    Err(e) => report_engine_error(&e, err),
  }
}

fn check_name(e: &ComplexError) -> &'static str {
  match e {
    ComplexError::Empty
    | ComplexError::DegenerateFacet { .. }
    | ComplexError::NotPure { .. }
    | ComplexError::DuplicateFacet { .. } => "purity",
    ComplexError::NotClosed { .. } => "closedness",
    ComplexError::Disconnected { .. } => "connectivity",
    ComplexError::NonOrientable { .. } | ComplexError::DimensionOutOfRange { .. } => "orientability",
  }
}

const CHECKS: [&str; 5] = [
  "purity",
  "closedness",
  "connectivity",
  "orientability",
  "labeling",
];

pub fn cmd_validate(text: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  let mut lines: Vec<(String, String)> = Vec::new();
  let failed = (|| -> Option<(&'static str, String)> {
    let raw = match parse_raw(text) {
      Ok(r) => r,
      Err(e) => return Some(("parse", e.to_string())),
    };
    lines.push(("parse".into(), "PASS".into()));
    let complex = match AbstractComplex::build(&raw.facets) {
      Ok(c) => c,
      Err(e) => return Some((check_name(&e), e.to_string())),
    };
    for name in ["purity", "closedness", "connectivity"] {
      lines.push((name.into(), "PASS".into()));
    }
    if let Err(e) = complex.fundamental_cycle() {
      return Some(("orientability", e.to_string()));
    }
    lines.push(("orientability".into(), "PASS".into()));
    let labeling = match raw.labeling_for(&complex) {
      Ok(l) => l,
      Err(e) => return Some(("labeling", e.to_string())),
    };
    if let Err(e) = validate_labeling(&complex, &labeling, raw.n) {
      let mut msg = e.to_string();
      if let hopf_core::LabelingError::Violations { facets } = &e {
        msg = format!(
          "{} facet(s) carry all {} labels: {}",
          facets.len(),
          raw.n + 2,
          facets
            .iter()
            .map(|f| format!("[{}]", f.iter().join(" ")))
            .join(" ")
        );
      }
      return Some(("labeling", msg));
    }
    lines.push(("labeling".into(), "PASS".into()));
    None
  })();

  for (name, status) in &lines {
    let _ = writeln!(out, "{name}: {status}");
  }
  match failed {
    None => EXIT_OK,
    Some((name, msg)) => {
      let _ = writeln!(out, "{name}: FAIL {msg}");
      let start = if name == "parse" {
        0
      } else {
        CHECKS.iter().position(|c| *c == name).unwrap() + 1
      };
      for later in &CHECKS[start..] {
        let _ = writeln!(out, "{later}: SKIP");
      }
      let _ = writeln!(err, "error: {name} check failed: {msg}");
      EXIT_INVALID
    }
  }
}

/// `Σ_{j=0}^{top} (-1)^{top-j} f_j + (-1)^{top+1}`, the alternating sum ending in a constant.
pub fn alternating_formula(f: &[usize], top: isize) -> i64 {
  let mut acc: i64 = 0;
  for j in 0..=top {
    let term = f.get(j as usize).copied().unwrap_or(0) as i64;
    acc += if (top - j) % 2 == 0 { term } else { -term };
  }
  acc + if (top + 1) % 2 == 0 { 1 } else { -1 }
}

/// Kernel dimension of `δ: C^{n-1} -> C^n` predicted by exactness: `f_{n-2} - f_{n-3} + … ± 1`.
pub fn derived_nullity_formula(f: &[usize], n: usize) -> i64 {
  alternating_formula(f, n as isize - 2)
}

/// The same sum shifted up one index, `f_{n-1} - f_{n-2} + … ± 1`. It does not match the
/// kernel dimension; `rank-check` reports it alongside for comparison.
pub fn printed_nullity_formula(f: &[usize], n: usize) -> i64 {
  alternating_formula(f, n as isize - 1)
}

pub fn cmd_rank_check(text: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  let inst = match parse_instance(text) {
    Ok(i) => i,
    Err(e) => return report_instance_error(&e, err),
  };
  let c = &inst.complex;
  let n = inst.n;
  if let Err(e) = c.fundamental_cycle() {
    let _ = writeln!(err, "error: {e}");
    return EXIT_INVALID;
  }
  let f = c.f_vector();
  let m = coboundary_matrix(c, n - 1).expect("n - 1 < dim");
  let nullity = m.n_cols() - rank(&m);
  let m0 = coboundary_matrix(c, 0).expect("dim >= 1");
  let nullity0 = m0.n_cols() - rank(&m0);
  let derived = derived_nullity_formula(&f, n);
  let printed = printed_nullity_formula(&f, n);
  let verdict = |v: i64| if v == nullity as i64 { "agree" } else { "MISMATCH" };
  let _ = writeln!(out, "n={n}");
  let _ = writeln!(out, "f_vector={}", f.iter().join(","));
  let _ = writeln!(out, "system={}x{}", m.n_rows(), m.n_cols());
  let _ = writeln!(out, "nullity={nullity}");
  let _ = writeln!(out, "derived_formula={derived} {}", verdict(derived));
  let _ = writeln!(out, "printed_formula={printed} {}", verdict(printed));
  let _ = writeln!(out, "degree0_nullity={nullity0}");
  if derived == nullity as i64 {
    EXIT_OK
  } else {
    let _ = writeln!(
      err,
      "error: computed nullity {nullity} disagrees with the exactness formula {derived}"
    );
    EXIT_INVALID
  }
}

pub fn cmd_consistency(args: &ConsistencyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  let inst = match load(&args.path, err) {
    Ok(i) => i,
    Err(code) => return code,
  };
  let base = HopfOptions {
    corrupt_theta_seed: args.inject_fault,
    ..Default::default()
  };
  let report = match consistency_suite_with(
    &Arc::new(inst.complex),
    &inst.labeling,
    args.trials,
    args.seed,
    &base,
  ) {
    Ok(r) => r,
    Err(e) => return report_engine_error(&e, err),
  };
  for (variant, r) in &report.values {
    let _ = writeln!(out, "{variant} {}", r.hopf);
  }
  if report.pass {
    let _ = writeln!(out, "PASS common={}", report.common.as_ref().unwrap());
    EXIT_OK
  } else {
    let _ = writeln!(out, "FAIL");
    for (variant, r) in report.divergent() {
      let _ = writeln!(err, "divergent: {variant} {}", r.hopf);
    }
    EXIT_INVALID
  }
}

fn generated(args: &GenerateArgs) -> Result<(usize, AbstractComplex, Labeling, String), String> {
  let (spec, description) = match &args.kind {
    GenerateKind::Hopf => (GeneratorSpec::HopfFixture, "hopf".to_string()),
    GenerateKind::BoundarySphere { d } => (GeneratorSpec::BoundarySphere(*d), format!("boundary-sphere {d}")),
    GenerateKind::Polygon { p } => (GeneratorSpec::CyclicPolygon(*p), format!("polygon {p}")),
    GenerateKind::JoinPolygons { p, q } => (
      GeneratorSpec::Join(
        Box::new(GeneratorSpec::CyclicPolygon(*p)),
        Box::new(GeneratorSpec::CyclicPolygon(*q)),
      ),
      format!("join-polygons {p} {q}"),
    ),
  };
  let mut complex = spec.build().map_err(|e| e.to_string())?;
  let n = target_dimension(&complex).map_err(|e| e.to_string())?;
  let mut labeling = match (args.constant_label, args.random_seed, &args.kind) {
    (Some(l), _, _) => {
      if l == 0 || l > n as u32 + 2 {
        return Err(format!("label {l} outside 1..={}", n + 2));
      }
      fixtures::constant_labeling(&complex, l)
    }
    (None, Some(seed), _) => fixtures::random_valid_labeling(&complex, n, seed).map_err(|e| e.to_string())?,
    (None, None, GenerateKind::Hopf) => fixtures::hopf_fixture().1,
    (None, None, _) => fixtures::constant_labeling(&complex, 1),
  };
  validate_labeling(&complex, &labeling, n).map_err(|e| e.to_string())?;
  for _ in 0..args.subdivide {
    (complex, labeling) =
      fixtures::barycentric_subdivision(&complex, &labeling).map_err(|e| e.to_string())?;
  }
  let mut description = description;
  if args.subdivide > 0 {
    description.push_str(&format!(" --subdivide {}", args.subdivide));
  }
  Ok((n, complex, labeling, description))
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
  match generated(args) {
    Ok((n, complex, labeling, description)) => {
      let _ = writeln!(out, "# generated: {description}");
      let _ = out.write_all(emit(n, &complex, &labeling).as_bytes());
      EXIT_OK
    }
    Err(msg) => {
      let _ = writeln!(err, "error: {msg}");
      EXIT_INVALID
    }
  }
}
