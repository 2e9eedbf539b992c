//! Topological properties of `G_f0`, checked on finite horizons.
//!
//! - Expansivity with constant 1: distinct points end up at distance at
//!   least 1. When the states agree, the first differing strategy term
//!   flips two different cells, so the distance jumps to 2.
//! - Sensitivity: a neighbour sharing the state and the first `L` strategy
//!   terms is eventually farther than `1 - 10^-L`.
//! - Mixing: from any ball, a point is built that reaches any target point
//!   after `k + |s|` steps, where `k` is the ball's prefix length and `s`
//!   the list of cells to flip.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ci::{g_step, iterate, Negation, PhasePoint, Strategy};
use crate::error::{Error, Result};
use crate::metric::{d_total, DistanceValue, MAX_HORIZON};
use crate::rng::{random_state, random_strategy, random_terms, stream_rng};

/// Expansivity constant.
pub const EPSILON: usize = 1;
const MAX_WITNESSES: usize = 8;

/// A phase point in report form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub state: String,
    pub strategy: Vec<usize>,
}

impl From<&PhasePoint> for PointRecord {
    fn from(p: &PhasePoint) -> Self {
        Self { state: p.state.to_string(), strategy: p.strategy.terms().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub x: PointRecord,
    pub y: PointRecord,
    /// Number of `G_f0` steps after which the distance reached `EPSILON`.
    pub step: usize,
    pub state_distance: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansivityReport {
    pub n_cells: usize,
    pub pairs_tested: usize,
    pub pairs_separated: usize,
    pub epsilon: usize,
    pub max_iterations: usize,
    pub horizon: usize,
    pub seed: u64,
    /// Pairs drawn with equal states.
    pub equal_state_pairs: usize,
    /// Equal-state pairs that separated right after their first differing
    /// strategy term, with state distance at least 2.
    pub equal_state_separated_by_two: usize,
    pub witnesses: Vec<SeparationWitness>,
}

/// First `n <= max_iter` with certified `d(G^n x, G^n y) >= EPSILON`.
///
/// Both strategies need `max_iter + horizon` terms.
pub fn separation_step(x: &PhasePoint, y: &PhasePoint, max_iter: usize, horizon: usize) -> Result<Option<(usize, DistanceValue)>> {
    let (mut p, mut q) = (x.clone(), y.clone());
    for n in 0..=max_iter {
        let d = d_total(&p, &q, horizon)?;
        if d.lower_at_least(EPSILON) {
            return Ok(Some((n, d)));
        }
        if n < max_iter {
            p = g_step(&p, &Negation)?;
            q = g_step(&q, &Negation)?;
        }
    }
    Ok(None)
}

fn check_probe_args(n_cells: usize, max_iter: usize, horizon: usize) -> Result<()> {
    if n_cells == 0 {
        return Err(Error::Config("n_cells must be at least 1".into()));
    }
    if max_iter == 0 {
        return Err(Error::Config("max_iter must be at least 1".into()));
    }
    if horizon > MAX_HORIZON {
        return Err(Error::Config(format!("horizon must be at most {MAX_HORIZON}")));
    }
    Ok(())
}

fn first_difference(a: &Strategy, b: &Strategy) -> Option<usize> {
    a.terms().iter().zip(b.terms()).position(|(x, y)| x != y)
}

struct PairOutcome {
    x: PhasePoint,
    y: PhasePoint,
    separation: Option<(usize, DistanceValue)>,
    equal_states: bool,
    separated_by_two: bool,
}

/// Draws random pairs of points that differ in their state or within the
/// first `max_iter` strategy terms, and checks each pair separates.
pub fn probe_expansivity(n_cells: usize, trials: usize, max_iter: usize, horizon: usize, seed: u64) -> Result<ExpansivityReport> {
    check_probe_args(n_cells, max_iter, horizon)?;
    let len = max_iter + horizon;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<PairOutcome> {
            let mut rng = stream_rng(seed, t as u64);
            let x = PhasePoint::new(random_state(&mut rng, n_cells), random_strategy(&mut rng, n_cells, len))?;
            let y = loop {
                let y = PhasePoint::new(random_state(&mut rng, n_cells), random_strategy(&mut rng, n_cells, len))?;
                let observable = y.state != x.state || y.strategy.terms()[..max_iter] != x.strategy.terms()[..max_iter];
                if observable {
                    break y;
                }
            };
            let separation = separation_step(&x, &y, max_iter, horizon)?;
            let equal_states = x.state == y.state;
            let separated_by_two = equal_states
                && match (separation, first_difference(&x.strategy, &y.strategy)) {
                    (Some((n, d)), Some(n0)) => n == n0 + 1 && d.state_part >= 2,
                    _ => false,
                };
            Ok(PairOutcome { x, y, separation, equal_states, separated_by_two })
        })
        .collect::<Result<Vec<_>>>()?;

    let witnesses = outcomes
        .iter()
        .filter_map(|o| {
            o.separation.map(|(step, d)| SeparationWitness {
                x: (&o.x).into(),
                y: (&o.y).into(),
                step,
                state_distance: d.state_part,
            })
        })
        .take(MAX_WITNESSES)
        .collect();
    Ok(ExpansivityReport {
        n_cells,
        pairs_tested: outcomes.len(),
        pairs_separated: outcomes.iter().filter(|o| o.separation.is_some()).count(),
        epsilon: EPSILON,
        max_iterations: max_iter,
        horizon,
        seed,
        equal_state_pairs: outcomes.iter().filter(|o| o.equal_states).count(),
        equal_state_separated_by_two: outcomes.iter().filter(|o| o.separated_by_two).count(),
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub n_cells: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_ratio: f64,
    /// `1 - 10^-L`.
    pub delta: f64,
    pub horizon: usize,
    /// Largest certified distance lower bound reached by any pair.
    pub max_separation: f64,
    /// Largest initial distance upper bound over all pairs.
    pub max_initial_distance: f64,
    pub seed: u64,
}

/// Result of one neighbour search: `(separated, max lower bound, initial upper bound)`.
pub fn sensitivity_trial(x: &PhasePoint, y: &PhasePoint, horizon: usize, steps: usize) -> Result<(bool, f64, f64)> {
    let scale = 10u128.pow(horizon as u32);
    let (mut p, mut q) = (x.clone(), y.clone());
    let initial = d_total(&p, &q, horizon)?.upper();
    let mut best = 0.0f64;
    let mut separated = false;
    for n in 0..=steps {
        let d = d_total(&p, &q, horizon)?;
        best = best.max(d.lower());
        if d.lower_exceeds(scale - 1, scale) {
            separated = true;
            break;
        }
        if n < steps {
            p = g_step(&p, &Negation)?;
            q = g_step(&q, &Negation)?;
        }
    }
    Ok((separated, best, initial))
}

/// For random `x`, takes a neighbour `y` sharing its state and first `L`
/// strategy terms but differing at term `L`, and looks for a step where the
/// pair is farther apart than `1 - 10^-L`.
pub fn probe_sensitivity(n_cells: usize, trials: usize, horizon: usize, seed: u64) -> Result<SensitivityReport> {
    if n_cells < 2 {
        return Err(Error::Config("sensitivity needs at least 2 cells to build distinct neighbours".into()));
    }
    if horizon == 0 || horizon > MAX_HORIZON {
        return Err(Error::Config(format!("horizon must lie in 1..={MAX_HORIZON}")));
    }
    let steps = horizon + 1;
    let len = steps + horizon;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, f64, f64)> {
            let mut rng = stream_rng(seed, t as u64);
            let state = random_state(&mut rng, n_cells);
            let x_terms = random_terms(&mut rng, n_cells, len);
            let mut y_terms = x_terms.clone();
            let shift = rng.gen_range(1..n_cells);
            y_terms[horizon] = (x_terms[horizon] - 1 + shift) % n_cells + 1;
            for term in &mut y_terms[horizon + 1..] {
                *term = rng.gen_range(1..=n_cells);
            }
            let x = PhasePoint::new(state.clone(), Strategy::new(x_terms, n_cells)?)?;
            let y = PhasePoint::new(state, Strategy::new(y_terms, n_cells)?)?;
            sensitivity_trial(&x, &y, horizon, steps)
        })
        .collect::<Result<Vec<_>>>()?;

    let successes = outcomes.iter().filter(|o| o.0).count();
    Ok(SensitivityReport {
        n_cells,
        trials,
        successes,
        success_ratio: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
        delta: 1.0 - 10f64.powi(-(horizon as i32)),
        horizon,
        max_separation: outcomes.iter().map(|o| o.1).fold(0.0, f64::max),
        max_initial_distance: outcomes.iter().map(|o| o.2).fold(0.0, f64::max),
        seed,
    })
}

/// A point of the ball around `source` (same state, same first `prefix_len`
/// terms) that lands on `target` after `steps` iterations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixingWitness {
    pub source: PhasePoint,
    pub prefix_len: usize,
    pub target: PhasePoint,
    /// Cells where the state after `prefix_len` steps differs from the target state.
    pub flips: Vec<usize>,
    pub constructed: PhasePoint,
    pub steps: usize,
    pub verified: bool,
}

/// Builds the point `(E, S^0..S^{k-1} ++ s ++ target strategy)` and checks
/// by iteration that it lies in the ball and reaches `target` in `k + |s|` steps.
pub fn construct_mixing_witness(source: &PhasePoint, prefix_len: usize, target: &PhasePoint) -> Result<MixingWitness> {
    if source.n_cells() != target.n_cells() {
        return Err(Error::Dimension { left: source.n_cells(), right: target.n_cells() });
    }
    let reached = iterate(&source.state, &source.strategy, &Negation, prefix_len)?;
    let flips = reached.differing_cells(&target.state)?;
    let terms: Vec<usize> = source.strategy.terms()[..prefix_len]
        .iter()
        .chain(&flips)
        .chain(target.strategy.terms())
        .copied()
        .collect();
    let constructed = PhasePoint::new(source.state.clone(), Strategy::new(terms, source.n_cells())?)?;
    let steps = prefix_len + flips.len();

    let in_ball = constructed.state == source.state
        && constructed.strategy.terms()[..prefix_len] == source.strategy.terms()[..prefix_len];
    let mut end = constructed.clone();
    for _ in 0..steps {
        end = g_step(&end, &Negation)?;
    }
    let verified = in_ball && end.state == target.state && end.strategy.terms() == target.strategy.terms();
    Ok(MixingWitness { source: source.clone(), prefix_len, target: target.clone(), flips, constructed, steps, verified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixingReport {
    pub n_cells: usize,
    pub trials: usize,
    pub verified: usize,
    /// Witnesses whose step count equals `prefix_len + |flips|`.
    pub steps_exact: usize,
    pub max_prefix: usize,
    pub seed: u64,
}

/// Random `(source, k, target)` triples with `k <= max_prefix`.
pub fn run_mixing_trials(n_cells: usize, trials: usize, max_prefix: usize, seed: u64) -> Result<MixingReport> {
    if n_cells == 0 {
        return Err(Error::Config("n_cells must be at least 1".into()));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool)> {
            let mut rng = stream_rng(seed, t as u64);
            let source = PhasePoint::new(random_state(&mut rng, n_cells), random_strategy(&mut rng, n_cells, max_prefix))?;
            let k = rng.gen_range(0..=max_prefix);
            let target_len = rng.gen_range(0..=16);
            let target = PhasePoint::new(random_state(&mut rng, n_cells), random_strategy(&mut rng, n_cells, target_len))?;
            let w = construct_mixing_witness(&source, k, &target)?;
            Ok((w.verified, w.steps == k + w.flips.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MixingReport {
        n_cells,
        trials,
        verified: results.iter().filter(|r| r.0).count(),
        steps_exact: results.iter().filter(|r| r.1).count(),
        max_prefix,
        seed,
    })
}
