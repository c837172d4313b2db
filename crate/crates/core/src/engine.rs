//! End-to-end Hopf invariant computation and the consistency checks that witness its
//! independence from every auxiliary choice.
//!
//! 1. `ω` is `±1` on one oriented target facet `σ̄` and zero elsewhere.
//! 2. `f*ω` is evaluated on the sorted `n`-faces of the source through the labeling.
//! 3. `θ` solves `δθ = f*ω` exactly (free variables zeroed), optionally shifted by `δη`.
//! 4. `H = ⟨θ ⌣ f*ω, Δ⟩` where `Δ` is the fundamental cycle anchored at the lexicographically
//!    smallest facet.
//!
//! Cochains are evaluated in a global vertex order sorted by label (ties by vertex id), so the
//! labeling is order-preserving on every simplex and the cup product commutes with pullback.
//! Under any other order the chain-level value can depend on `σ̄` once the labeling is not
//! monotone. The orientation is carried over through the permutation sign of each facet.
//!
//! The sign of `H` is relative to that source orientation; reversing it negates `H`. Swapping
//! `σ̄` for its opposite negates `ω`, which leaves `H` unchanged because `H` is quadratic in `ω`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cochain::{Chain, Cochain, CochainError};
use crate::complex::{AbstractComplex, ComplexError, FundamentalCycle};
use crate::pullback::{
  make_omega, pullback_omega, validate_labeling, Labeling, LabelingError, OmegaChoice, TargetSphere,
};
use crate::simplex::canonical_sign;
use crate::solver::{kernel_perturbation, solve_with, LinearSystem, PivotRule, SolveError};
use crate::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
  #[error("source complex has even dimension {0}; expected 2n-1")]
  EvenSourceDimension(usize),
  #[error(transparent)]
  Labeling(#[from] LabelingError),
  #[error(transparent)]
  NotOrientable(#[from] ComplexError),
  #[error(transparent)]
  Solve(#[from] SolveError),
  #[error(transparent)]
  Cochain(#[from] CochainError),
  #[error("pairing {0} is not an integer")]
  NonIntegerPairing(Rational),
}

impl EngineError {
  /// Internal certification failures, as opposed to invalid input.
  pub fn is_certification_failure(&self) -> bool {
    matches!(
      self,
      EngineError::NonIntegerPairing(_) | EngineError::Solve(SolveError::Inconsistent { .. })
    )
  }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfOptions {
  /// Defaults to `(1, …, n+1)`.
  pub sigma_bar: Option<OmegaChoice>,
  /// Adds `δη` for a seeded random `η` to `θ`.
  pub gauge_seed: Option<u64>,
  pub reverse_source_orientation: bool,
  /// Return 0 for odd `n` without solving.
  pub odd_n_shortcut: bool,
  pub pivot_rule: PivotRule,
  /// Debug fault injection: adds a seeded random non-closed cochain to `θ`. The result is
  /// wrong by construction; used to show the consistency suite detects a corrupted `θ`.
  pub corrupt_theta_seed: Option<u64>,
  /// Debug fault injection: bumps the pulled-back form on one `n`-simplex so it is no longer
  /// closed. For `n >= 2` the coboundary system becomes inconsistent.
  pub corrupt_omega: bool,
}

impl Default for HopfOptions {
  fn default() -> Self {
    Self {
      sigma_bar: None,
      gauge_seed: None,
      reverse_source_orientation: false,
      odd_n_shortcut: true,
      pivot_rule: PivotRule::Markowitz,
      corrupt_theta_seed: None,
      corrupt_omega: false,
    }
  }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HopfStats {
  pub f_vector: Vec<usize>,
  pub rank: Option<usize>,
  pub nullity: Option<usize>,
  pub fill: usize,
  pub solve_time: Duration,
  pub wall_time: Duration,
  pub shortcut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfResult {
  pub hopf: BigInt,
  pub raw_pairing: Rational,
  pub n: usize,
  pub stats: HopfStats,
}

/// Target dimension `n` of a `(2n-1)`-dimensional source.
pub fn target_dimension(c: &AbstractComplex) -> Result<usize, EngineError> {
  let m = c.dim();
  if m.is_multiple_of(2) {
    return Err(EngineError::EvenSourceDimension(m));
  }
  Ok(m.div_ceil(2))
}

/// Renumbers the vertices of `c` in `(label, id)` order and transports the oriented cycle.
/// Returns `None` when the labeling is already non-decreasing in vertex id.
pub fn label_monotone(
  c: &AbstractComplex,
  labeling: &Labeling,
  cycle: &FundamentalCycle,
) -> Result<Option<(Arc<AbstractComplex>, Labeling, FundamentalCycle)>, EngineError> {
  if labeling.as_slice().windows(2).all(|w| w[0] <= w[1]) {
    return Ok(None);
  }
  let order: Vec<u32> = (0..c.num_vertices() as u32)
    .sorted_by_key(|&v| (labeling.get(v), v))
    .collect();
  let mut new_id = vec![0u32; order.len()];
  for (i, &v) in order.iter().enumerate() {
    new_id[v as usize] = i as u32;
  }
  let mapped: Vec<Vec<u32>> = c
    .facets()
    .iter()
    .map(|f| f.vertices().iter().map(|&v| new_id[v as usize]).collect())
    .collect();
  let renumbered = AbstractComplex::build(
    mapped
      .iter()
      .map(|f| f.iter().map(|&v| v as u64).collect::<Vec<_>>()),
  )
  .map_err(EngineError::NotOrientable)?;
  let mut signs = vec![0i8; mapped.len()];
  for (i, f) in mapped.iter().enumerate() {
    let (sorted, parity) = canonical_sign(f).expect("facets have distinct vertices");
    let j = renumbered
      .face_index(&sorted)
      .expect("facet survives renumbering");
    signs[j] = cycle.sign(i) * parity;
  }
  let labels = Labeling::new(order.iter().map(|&v| labeling.get(v)).collect());
  Ok(Some((
    Arc::new(renumbered),
    labels,
    FundamentalCycle::from_signs(signs),
  )))
}

/// Computes `H(f)` for the map given by `labeling`.
pub fn compute_hopf(
  c: &Arc<AbstractComplex>,
  labeling: &Labeling,
  opts: &HopfOptions,
) -> Result<HopfResult, EngineError> {
  let start = Instant::now();
  let n = target_dimension(c)?;
  validate_labeling(c, labeling, n)?;
  let mut cycle = c.fundamental_cycle()?;
  if opts.reverse_source_orientation {
    cycle = cycle.reversed();
  }
  let reindexed = label_monotone(c, labeling, &cycle)?;
  let (c, labeling, cycle) = match &reindexed {
    Some((c2, l2, z2)) => (c2, l2, z2.clone()),
    None => (c, labeling, cycle),
  };
  let mut stats = HopfStats {
    f_vector: c.f_vector(),
    ..Default::default()
  };

  if opts.odd_n_shortcut && n % 2 == 1 {
    stats.shortcut = true;
    stats.wall_time = start.elapsed();
    return Ok(HopfResult {
      hopf: BigInt::zero(),
      raw_pairing: rat(0),
      n,
      stats,
    });
  }

  let target = TargetSphere::new(n)?;
  let choice = opts
    .sigma_bar
    .clone()
    .unwrap_or_else(|| OmegaChoice::default_for(n));
  let omega = make_omega(&target, &choice)?;
  let mut pulled = pullback_omega(c, labeling, &target, &omega)?;
  if opts.corrupt_omega {
    let bumped = pulled.value_at(0) + rat(1);
    pulled.set_at(0, bumped);
  }

  let system = LinearSystem::coboundary_system(&pulled)?;
  let solve_start = Instant::now();
  let report = solve_with(&system, opts.pivot_rule)?;
  stats.solve_time = solve_start.elapsed();
  stats.rank = Some(report.rank);
  stats.nullity = Some(report.nullity);
  stats.fill = report.fill;

  let mut theta = Cochain::from_dense(c.clone(), n - 1, report.particular_solution)?;
  if let Some(seed) = opts.gauge_seed {
    theta = theta.add(&kernel_perturbation(c, n, seed)?)?;
  }
  if let Some(seed) = opts.corrupt_theta_seed {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Cochain::from_fn(c.clone(), n - 1, |_| rat(rng.random_range(-2i64..=2)))?;
    theta = theta.add(&noise)?;
  }

  let fundamental = Chain::from_fundamental_cycle(c.clone(), &cycle);
  let raw_pairing = theta.cup(&pulled)?.pair(&fundamental)?;
  if !raw_pairing.is_integer() {
    return Err(EngineError::NonIntegerPairing(raw_pairing));
  }
  stats.wall_time = start.elapsed();
  Ok(HopfResult {
    hopf: raw_pairing.to_integer(),
    raw_pairing,
    n,
    stats,
  })
}

/// One recomputation in the consistency suite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
  Base,
  SigmaBar(Vec<u32>),
  Gauge(u64),
  ReversedOrientation,
}

impl std::fmt::Display for Variant {
  fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    match self {
      Variant::Base => write!(f, "base"),
      Variant::SigmaBar(s) => write!(f, "sigma_bar=[{}]", s.iter().join(",")),
      Variant::Gauge(seed) => write!(f, "gauge_seed={seed}"),
      Variant::ReversedOrientation => write!(f, "reversed_orientation"),
    }
  }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
  /// Every computed value, in a deterministic variant order.
  pub values: Vec<(Variant, HopfResult)>,
  /// The value shared by all non-reversed variants, if they agree.
  pub common: Option<BigInt>,
  /// Reversal negated the base value.
  pub reversal_negates: bool,
  pub pass: bool,
}

impl ConsistencyReport {
  /// Variants disagreeing with the base value (reversal is compared against its negation).
  pub fn divergent(&self) -> Vec<&(Variant, HopfResult)> {
    let base = &self.values[0].1.hopf;
    self
      .values
      .iter()
      .filter(|(v, r)| match v {
        Variant::ReversedOrientation => r.hopf != -base,
        _ => &r.hopf != base,
      })
      .collect()
  }
}

/// Recomputes `H` over every oriented `σ̄`, `trials` gauge perturbations seeded from `seed`,
/// and a reversed source orientation. Passes iff all non-reversed values agree and the
/// reversal negates them. The odd-`n` shortcut is always disabled here.
pub fn consistency_suite(
  c: &Arc<AbstractComplex>,
  labeling: &Labeling,
  trials: usize,
  seed: u64,
) -> Result<ConsistencyReport, EngineError> {
  consistency_suite_with(c, labeling, trials, seed, &HopfOptions::default())
}

/// [`consistency_suite`] starting from `base` options. A `corrupt_theta_seed` in `base` is
/// varied per variant so that fault injection is visible.
pub fn consistency_suite_with(
  c: &Arc<AbstractComplex>,
  labeling: &Labeling,
  trials: usize,
  seed: u64,
  base: &HopfOptions,
) -> Result<ConsistencyReport, EngineError> {
  let n = target_dimension(c)?;
  let mut variants = vec![Variant::Base];
  variants.extend(
    OmegaChoice::all_for(n)
      .into_iter()
      .map(|c| Variant::SigmaBar(c.labels().to_vec())),
  );
  variants.extend((0..trials as u64).map(|i| Variant::Gauge(seed.wrapping_add(i))));
  variants.push(Variant::ReversedOrientation);

  let values = variants
    .into_par_iter()
    .enumerate()
    .map(|(i, variant)| {
      let mut opts = base.clone();
      opts.odd_n_shortcut = false;
      opts.corrupt_theta_seed = base.corrupt_theta_seed.map(|s| s.wrapping_add(i as u64));
      match &variant {
        Variant::Base => {}
        Variant::SigmaBar(s) => opts.sigma_bar = Some(OmegaChoice::new(s.clone())),
        Variant::Gauge(g) => opts.gauge_seed = Some(*g),
        Variant::ReversedOrientation => opts.reverse_source_orientation = !base.reverse_source_orientation,
      }
      compute_hopf(c, labeling, &opts).map(|r| (variant, r))
    })
    .collect::<Result<Vec<_>, _>>()?;

  let base_value = values[0].1.hopf.clone();
  let agree = values
    .iter()
    .filter(|(v, _)| *v != Variant::ReversedOrientation)
    .all(|(_, r)| r.hopf == base_value);
  let reversal_negates = values
    .iter()
    .filter(|(v, _)| *v == Variant::ReversedOrientation)
    .all(|(_, r)| r.hopf == -&base_value);
  Ok(ConsistencyReport {
    common: agree.then(|| base_value.clone()),
    reversal_negates,
    pass: agree && reversal_negates,
    values,
  })
}

/// `H(π∘ℓ)` for every permutation `π` of the `n+2` labels, in lexicographic order of `π`.
pub fn label_permutation_check(
  c: &Arc<AbstractComplex>,
  labeling: &Labeling,
  opts: &HopfOptions,
) -> Result<Vec<(Vec<u32>, BigInt)>, EngineError> {
  let n = target_dimension(c)?;
  (1..=n as u32 + 2)
    .permutations(n + 2)
    .collect::<Vec<_>>()
    .into_par_iter()
    .map(|perm| {
      let h = compute_hopf(c, &labeling.permuted(&perm), opts)?.hopf;
      Ok((perm, h))
    })
    .collect()
}
