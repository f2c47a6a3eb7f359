//! PageRank on a column-stochastic transition matrix.
//!
//! The chain is `x(n+1) = d T x(n) + (1 - d) w`, where `w` is the teleport
//! distribution. With `w` uniform this is classic PageRank; weighting `w` by
//! citation or publication counts gives the weighted variant. The fixed point
//! is reached either by iterating the recursion ([`power_iterate`]) or by
//! solving `(I - dT) x = (1 - d) w` directly ([`steady_state_direct`]).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::MarkovMatrix;
use crate::ingest::AuthorStats;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const PRESET_DAMPINGS: [f64; 3] = [0.15, 0.55, 0.85];
pub const DEFAULT_STABILITY_SLACK: f64 = 2.0;

const MIN_DEFAULT_ITER: usize = 100;
const MAX_DEFAULT_ITER: usize = 100_000;
const TELEPORT_SUM_TOLERANCE: f64 = 1e-12;

/// Damping must lie in `[0, 1)`.
pub fn validate_damping(d: f64) -> Result<()> {
    if d.is_finite() && (0.0..1.0).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "damping factor {d} outside [0, 1)"
        )))
    }
}

/// `start, start + step, ..., <= end`, rounded to 10 decimals so that
/// `0.05:0.95:0.1` yields exactly `0.15` rather than `0.15000000000000002`.
pub fn damping_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} must be positive"
        )));
    }
    if end < start {
        return Err(Error::InvalidParameter(format!(
            "grid end {end} below start {start}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let d = ((start + i as f64 * step) * 1e10).round() / 1e10;
            validate_damping(d).map(|_| d)
        })
        .collect()
}

/// 0.05, 0.15, ..., 0.95.
pub fn default_grid() -> Vec<f64> {
    damping_grid(0.05, 0.95, 0.1).expect("static grid is valid")
}

/// `10 * ceil(log(tol) / log(d))`, clamped to `[100, 100000]`.
pub fn default_max_iter(d: f64, tol: f64) -> usize {
    if d <= 0.0 {
        return MIN_DEFAULT_ITER;
    }
    let steps = (tol.ln() / d.ln()).ceil();
    if !steps.is_finite() {
        return MAX_DEFAULT_ITER;
    }
    ((10.0 * steps) as usize).clamp(MIN_DEFAULT_ITER, MAX_DEFAULT_ITER)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightKind {
    Uniform,
    Citations,
    Publications,
    Custom,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Uniform => "uniform",
            WeightKind::Citations => "citations",
            WeightKind::Publications => "publications",
            WeightKind::Custom => "custom",
        })
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightKind::Uniform),
            "citations" => Ok(WeightKind::Citations),
            "publications" => Ok(WeightKind::Publications),
            "custom" => Ok(WeightKind::Custom),
            other => Err(Error::InvalidParameter(format!(
                "unknown weight kind {other:?}"
            ))),
        }
    }
}

/// Where teleport weights come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    Uniform,
    Citations,
    Publications,
    /// Raw per-author weights; normalized on use.
    Custom(HashMap<String, f64>),
}

impl WeightSource {
    pub fn kind(&self) -> WeightKind {
        match self {
            WeightSource::Uniform => WeightKind::Uniform,
            WeightSource::Citations => WeightKind::Citations,
            WeightSource::Publications => WeightKind::Publications,
            WeightSource::Custom(_) => WeightKind::Custom,
        }
    }
}

/// Teleport distribution: nonnegative, sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportVector {
    weights: Vec<f64>,
    kind: WeightKind,
}

impl TeleportVector {
    pub fn uniform(n: usize) -> Self {
        TeleportVector {
            weights: vec![1.0 / n as f64; n],
            kind: WeightKind::Uniform,
        }
    }

    /// Normalizes raw nonnegative weights to sum to one.
    pub fn from_weights(raw: &[f64], kind: WeightKind) -> Result<Self> {
        if let Some(bad) = raw.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "teleport weights must be finite and nonnegative, got {bad}"
            )));
        }
        let total: f64 = raw.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "{kind} weights sum to zero and cannot be normalized"
            )));
        }
        Ok(TeleportVector {
            weights: raw.iter().map(|v| v / total).collect(),
            kind,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Teleport vector over `authors` (in that order) drawn from `source`.
pub fn make_teleport(
    source: &WeightSource,
    stats: &BTreeMap<String, AuthorStats>,
    authors: &[String],
) -> Result<TeleportVector> {
    let stat = |a: &String| {
        stats
            .get(a)
            .ok_or_else(|| Error::InvalidInput(format!("no statistics for author {a:?}")))
    };
    let raw: Vec<f64> = match source {
        WeightSource::Uniform => return Ok(TeleportVector::uniform(authors.len())),
        WeightSource::Citations => authors
            .iter()
            .map(|a| stat(a).map(|s| s.citation_count as f64))
            .collect::<Result<_>>()?,
        WeightSource::Publications => authors
            .iter()
            .map(|a| stat(a).map(|s| s.first_author_pub_count as f64))
            .collect::<Result<_>>()?,
        WeightSource::Custom(map) => authors
            .iter()
            .map(|a| {
                map.get(a).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("no custom weight for author {a:?}"))
                })
            })
            .collect::<Result<_>>()?,
    };
    TeleportVector::from_weights(&raw, source.kind())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Power,
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Power => "power",
            Method::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult {
    pub scores: Vec<f64>,
    pub damping: f64,
    /// `None` for the direct solve.
    pub iterations: Option<usize>,
    /// Final L1 step difference (power) or L1 fixed-point residual (direct).
    pub residual: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// `None` picks [`default_max_iter`] for each damping factor.
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: None,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions {
            tol,
            max_iter: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance {} must be positive",
                self.tol
            )));
        }
        if self.max_iter == Some(0) {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

fn check_dims(t: &MarkovMatrix, w: &TeleportVector) -> Result<()> {
    if t.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: t.len(),
            right: w.len(),
        });
    }
    Ok(())
}

/// Stepwise evaluation of the PageRank recursion.
#[derive(Debug, Clone)]
pub struct PowerIteration<'a> {
    transition: &'a MarkovMatrix,
    damping: f64,
    teleport: &'a [f64],
    state: Vec<f64>,
    scratch: Vec<f64>,
    steps: usize,
}

impl<'a> PowerIteration<'a> {
    pub fn new(
        transition: &'a MarkovMatrix,
        damping: f64,
        teleport: &'a TeleportVector,
        start: Vec<f64>,
    ) -> Result<Self> {
        validate_damping(damping)?;
        check_dims(transition, teleport)?;
        if start.len() != transition.len() {
            return Err(Error::LengthMismatch {
                left: transition.len(),
                right: start.len(),
            });
        }
        let total: f64 = start.iter().sum();
        if start.iter().any(|v| v.is_nan() || *v < 0.0)
            || (total - 1.0).abs() > TELEPORT_SUM_TOLERANCE
        {
            return Err(Error::InvalidInput(
                "initial state must be a probability vector".into(),
            ));
        }
        Ok(PowerIteration {
            transition,
            damping,
            teleport: teleport.weights(),
            scratch: vec![0.0; start.len()],
            state: start,
            steps: 0,
        })
    }

    /// Advances one step and returns the L1 distance to the previous state.
    pub fn step(&mut self) -> f64 {
        self.transition.apply(&self.state, &mut self.scratch);
        let d = self.damping;
        let mut diff = 0.0;
        for ((next, prev), w) in self.scratch.iter_mut().zip(&self.state).zip(self.teleport) {
            *next = d * *next + (1.0 - d) * w;
            diff += (*next - prev).abs();
        }
        std::mem::swap(&mut self.state, &mut self.scratch);
        self.steps += 1;
        diff
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn into_state(self) -> Vec<f64> {
        self.state
    }

    /// Steps until the L1 difference drops below `opts.tol`.
    pub fn run(mut self, opts: SolveOptions) -> Result<PageRankResult> {
        opts.validate()?;
        let max_iter = opts
            .max_iter
            .unwrap_or_else(|| default_max_iter(self.damping, opts.tol));
        let mut residual = f64::INFINITY;
        while self.steps < max_iter {
            residual = self.step();
            if residual < opts.tol {
                return Ok(PageRankResult {
                    damping: self.damping,
                    iterations: Some(self.steps),
                    residual,
                    method: Method::Power,
                    scores: self.state,
                });
            }
        }
        Err(Error::NotConverged {
            damping: self.damping,
            iterations: self.steps,
            residual,
            last: self.state,
        })
    }
}

/// PageRank by power iteration started from the teleport vector.
pub fn power_iterate(
    t: &MarkovMatrix,
    d: f64,
    w: &TeleportVector,
    opts: SolveOptions,
) -> Result<PageRankResult> {
    power_iterate_from(t, d, w, w.weights().to_vec(), opts)
}

/// PageRank by power iteration from an arbitrary probability vector.
pub fn power_iterate_from(
    t: &MarkovMatrix,
    d: f64,
    w: &TeleportVector,
    start: Vec<f64>,
    opts: SolveOptions,
) -> Result<PageRankResult> {
    PowerIteration::new(t, d, w, start)?.run(opts)
}

/// PageRank as the solution of `(I - dT) x = (1 - d) w`, via LU with partial pivoting.
pub fn steady_state_direct(t: &MarkovMatrix, d: f64, w: &TeleportVector) -> Result<PageRankResult> {
    validate_damping(d)?;
    check_dims(t, w)?;
    let n = t.len();
    let system = DMatrix::from_fn(n, n, |j, k| {
        let identity = if j == k { 1.0 } else { 0.0 };
        identity - d * t.get(j, k)
    });
    let rhs = DVector::from_iterator(n, w.weights().iter().map(|v| (1.0 - d) * v));
    let solution = system
        .lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or(Error::Singular { damping: d })?;
    let scores: Vec<f64> = solution.iter().copied().collect();

    let mut image = vec![0.0; n];
    t.apply(&scores, &mut image);
    let residual = image
        .iter()
        .zip(&scores)
        .zip(w.weights())
        .map(|((tx, x), wv)| (d * tx + (1.0 - d) * wv - x).abs())
        .sum();
    Ok(PageRankResult {
        scores,
        damping: d,
        iterations: None,
        residual,
        method: Method::Direct,
    })
}

/// Solves once per damping factor, in the order given.
pub fn damping_sweep(
    t: &MarkovMatrix,
    w: &TeleportVector,
    dampings: &[f64],
    opts: SolveOptions,
    method: Method,
) -> Result<Vec<PageRankResult>> {
    dampings
        .iter()
        .map(|&d| {
            let result = match method {
                Method::Power => power_iterate(t, d, w, opts),
                Method::Direct => steady_state_direct(t, d, w),
            };
            result.map_err(|e| Error::AtDamping {
                damping: d,
                source: Box::new(e),
            })
        })
        .collect()
}

/// How an author's rank moves across a damping sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trajectory {
    Stable,
    /// Rank number went down (better position).
    Increase,
    /// Rank number went up (worse position).
    Drop,
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trajectory::Stable => "stable",
            Trajectory::Increase => "increase",
            Trajectory::Drop => "drop",
        })
    }
}

/// Compares the last rank with the first (1 = best). A change of at most
/// `slack` positions is stable. Fewer than two ranks count as stable.
pub fn classify_trajectory(ranks: &[f64], slack: f64) -> Trajectory {
    let (Some(first), Some(last)) = (ranks.first(), ranks.last()) else {
        return Trajectory::Stable;
    };
    let delta = last - first;
    if delta.abs() <= slack {
        Trajectory::Stable
    } else if delta < 0.0 {
        Trajectory::Increase
    } else {
        Trajectory::Drop
    }
}
