//! Sweep rounding of an eigenvector into a dense, (near-)fair node set.
//!
//! A general sweep sorts the nodes by their eigenvector entries and scans
//! every prefix, keeping the densest prefix whose color imbalance is at most
//! `delta * |S|`. A paired sweep sorts red and blue nodes separately and
//! only looks at sets made of the top `s` nodes of each color, which are
//! fair by construction. Both are run under four sort criteria and the best
//! candidate across all of them wins.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, balance_from_counts, Color, Coloring, LabeledGraph, NodeSet};
use crate::spectral::{dominant_eigenpair, EigenSettings, ProjectedOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ordering {
    NonIncreasing,
    NonDecreasing,
    AbsNonIncreasing,
    AbsNonDecreasing,
}

impl Ordering {
    /// Enumeration order; earlier orderings win density and size ties.
    pub const ALL: [Ordering; 4] =
        [Ordering::NonIncreasing, Ordering::NonDecreasing, Ordering::AbsNonIncreasing, Ordering::AbsNonDecreasing];

    /// Stable sort of `nodes` by this criterion on `v`; ties by ascending id.
    pub fn sort(self, nodes: &mut [usize], v: &[f64]) {
        // `+ 0.0` folds -0.0 into 0.0 so signed zeros tie
        let key = |i: usize| {
            (match self {
                Ordering::NonIncreasing => -v[i],
                Ordering::NonDecreasing => v[i],
                Ordering::AbsNonIncreasing => -v[i].abs(),
                Ordering::AbsNonDecreasing => v[i].abs(),
            }) + 0.0
        };
        nodes.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    }
}

/// Which matrix the eigenvector is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Matrix {
    /// The adjacency matrix `A`.
    Raw,
    /// `(I - ff^T) A (I - ff^T)`.
    Projected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Allowed imbalance per node, `| |S∩Red| - |S∩Blue| | <= delta |S|`.
    pub delta: f64,
    pub eigen: EigenSettings,
    /// Sort criteria to scan. The single `[NonIncreasing]` ordering is the
    /// original one-pass sweep.
    pub orderings: Vec<Ordering>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { delta: 0.0, eigen: EigenSettings::default(), orderings: Ordering::ALL.to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Found,
    NoFeasiblePrefix,
    Unfair,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Found => "Found",
            Status::NoFeasiblePrefix => "NoFeasiblePrefix",
            Status::Unfair => "Unfair",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Found" => Ok(Status::Found),
            "NoFeasiblePrefix" => Ok(Status::NoFeasiblePrefix),
            "Unfair" => Ok(Status::Unfair),
            other => Err(Error::InvalidParameter(format!("unknown status {other:?}"))),
        }
    }
}

/// Output of one algorithm run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionRecord {
    pub algorithm: String,
    pub nodes: NodeSet,
    pub density: f64,
    pub balance: f64,
    pub imbalance: usize,
    pub fair: bool,
    pub size: usize,
    pub n_red: usize,
    pub n_blue: usize,
    pub runtime: Duration,
    pub status: Status,
}

impl SolutionRecord {
    /// Scores `nodes` from scratch. An empty set scores density and balance 0.
    pub fn from_set(
        algorithm: impl Into<String>,
        g: &LabeledGraph,
        coloring: &Coloring,
        nodes: NodeSet,
        status: Status,
    ) -> Result<Self> {
        let (n_red, n_blue) = coloring.counts(&nodes);
        let density = if nodes.is_empty() { 0.0 } else { graph::density(g, &nodes)? };
        Ok(SolutionRecord {
            algorithm: algorithm.into(),
            density,
            balance: balance_from_counts(n_red, n_blue),
            imbalance: n_red.abs_diff(n_blue),
            fair: n_red == n_blue,
            size: nodes.len(),
            n_red,
            n_blue,
            runtime: Duration::ZERO,
            status,
            nodes,
        })
    }

    pub fn with_runtime(mut self, runtime: Duration) -> Self {
        self.runtime = runtime;
        self
    }

    /// True for runs that do not deliver a fair solution.
    pub fn counts_as_unfair(&self) -> bool {
        self.status != Status::Found || !self.fair
    }
}

/// One set examined by a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub ordering: Ordering,
    pub size: usize,
    pub density: f64,
    pub balance: f64,
    pub red: usize,
    pub blue: usize,
}

/// Visits every prefix of `order`, reporting `(size, 2 w(E_S), red, blue)`.
fn scan_prefixes(
    g: &LabeledGraph,
    coloring: &Coloring,
    order: &[usize],
    inside: &mut [bool],
    mut visit: impl FnMut(usize, f64, usize, usize),
) {
    let mut twice_internal = 0.0;
    let (mut red, mut blue) = (0, 0);
    for (k, &i) in order.iter().enumerate() {
        let into_prefix: f64 = g.neighbors(i).filter(|&(j, _)| inside[j]).map(|(_, w)| w).sum();
        twice_internal += 2.0 * into_prefix;
        inside[i] = true;
        match coloring.color(i) {
            Color::Red => red += 1,
            Color::Blue => blue += 1,
        }
        visit(k + 1, twice_internal, red, blue);
    }
    for &i in order {
        inside[i] = false;
    }
}

/// Interleaves the two per-color orders: red_1, blue_1, red_2, blue_2, ...
fn paired_order(g: &LabeledGraph, coloring: &Coloring, v: &[f64], ordering: Ordering) -> Vec<usize> {
    let (mut reds, mut blues): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&i| coloring.color(i) == Color::Red);
    ordering.sort(&mut reds, v);
    ordering.sort(&mut blues, v);
    reds.iter().zip(&blues).flat_map(|(&r, &b)| [r, b]).collect()
}

fn check_inputs(g: &LabeledGraph, coloring: &Coloring, v: &[f64]) -> Result<()> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: v.len() });
    }
    if coloring.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: coloring.len() });
    }
    Ok(())
}

/// Every candidate examined by a general (`paired == false`) or paired sweep,
/// in deterministic order: orderings in the given order, then prefix size.
pub fn sweep_candidates(
    g: &LabeledGraph,
    coloring: &Coloring,
    v: &[f64],
    orderings: &[Ordering],
    paired: bool,
) -> Result<Vec<Candidate>> {
    check_inputs(g, coloring, v)?;
    let mut inside = vec![false; g.n()];
    let mut out = Vec::new();
    for &ordering in orderings {
        let order = if paired {
            paired_order(g, coloring, v, ordering)
        } else {
            let mut order: Vec<usize> = (0..g.n()).collect();
            ordering.sort(&mut order, v);
            order
        };
        scan_prefixes(g, coloring, &order, &mut inside, |size, twice, red, blue| {
            if !paired || size % 2 == 0 {
                out.push(Candidate {
                    ordering,
                    size,
                    density: twice / size as f64,
                    balance: balance_from_counts(red, blue),
                    red,
                    blue,
                });
            }
        });
    }
    Ok(out)
}

fn best_candidate(candidates: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in candidates {
        let better = match &best {
            None => true,
            Some(b) => c.density > b.density || (c.density == b.density && c.size < b.size),
        };
        if better {
            best = Some(c);
        }
    }
    best
}

fn materialize(
    g: &LabeledGraph,
    coloring: &Coloring,
    v: &[f64],
    best: Option<Candidate>,
    paired: bool,
    algorithm: &str,
) -> Result<SolutionRecord> {
    let Some(best) = best else {
        return SolutionRecord::from_set(algorithm, g, coloring, NodeSet::empty(), Status::NoFeasiblePrefix);
    };
    let order = if paired {
        paired_order(g, coloring, v, best.ordering)
    } else {
        let mut order: Vec<usize> = (0..g.n()).collect();
        best.ordering.sort(&mut order, v);
        order
    };
    let nodes = NodeSet::new(order[..best.size].iter().copied());
    SolutionRecord::from_set(algorithm, g, coloring, nodes, Status::Found)
}

/// Densest prefix over the given orderings with imbalance at most `delta |S|`.
pub fn general_sweep_with(
    g: &LabeledGraph,
    coloring: &Coloring,
    v: &[f64],
    delta: f64,
    orderings: &[Ordering],
) -> Result<SolutionRecord> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
    }
    let candidates = sweep_candidates(g, coloring, v, orderings, false)?;
    let feasible = candidates.into_iter().filter(|c| c.red.abs_diff(c.blue) as f64 <= delta * c.size as f64);
    materialize(g, coloring, v, best_candidate(feasible), false, "GSA")
}

/// General sweep over all four orderings.
pub fn general_sweep(g: &LabeledGraph, coloring: &Coloring, v: &[f64], delta: f64) -> Result<SolutionRecord> {
    general_sweep_with(g, coloring, v, delta, &Ordering::ALL)
}

pub fn paired_sweep_with(
    g: &LabeledGraph,
    coloring: &Coloring,
    v: &[f64],
    orderings: &[Ordering],
) -> Result<SolutionRecord> {
    let candidates = sweep_candidates(g, coloring, v, orderings, true)?;
    materialize(g, coloring, v, best_candidate(candidates), true, "PS")
}

/// Densest union of the top `s` red and top `s` blue nodes, over all four
/// orderings and `s = 1..=min(n_red, n_blue)`.
pub fn paired_sweep(g: &LabeledGraph, coloring: &Coloring, v: &[f64]) -> Result<SolutionRecord> {
    paired_sweep_with(g, coloring, v, &Ordering::ALL)
}

/// The four spectral rounding algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAlgorithm {
    /// General sweep on the top eigenvector of `A`.
    SS,
    /// General sweep on the top eigenvector of the projected operator.
    FSS,
    /// Paired sweep on the top eigenvector of `A`.
    PS,
    /// Paired sweep on the top eigenvector of the projected operator.
    FPS,
}

impl SweepAlgorithm {
    pub const ALL: [SweepAlgorithm; 4] =
        [SweepAlgorithm::SS, SweepAlgorithm::FSS, SweepAlgorithm::PS, SweepAlgorithm::FPS];

    pub fn name(self) -> &'static str {
        match self {
            SweepAlgorithm::SS => "SS",
            SweepAlgorithm::FSS => "FSS",
            SweepAlgorithm::PS => "PS",
            SweepAlgorithm::FPS => "FPS",
        }
    }

    pub fn matrix(self) -> Matrix {
        match self {
            SweepAlgorithm::SS | SweepAlgorithm::PS => Matrix::Raw,
            SweepAlgorithm::FSS | SweepAlgorithm::FPS => Matrix::Projected,
        }
    }

    pub fn is_paired(self) -> bool {
        matches!(self, SweepAlgorithm::PS | SweepAlgorithm::FPS)
    }
}

/// Top eigenvector of `A` or of the projected operator.
pub fn main_eigenvector(
    g: &LabeledGraph,
    coloring: &Coloring,
    matrix: Matrix,
    settings: &EigenSettings,
) -> Result<Vec<f64>> {
    let pair = match matrix {
        Matrix::Raw => dominant_eigenpair(g, settings)?,
        Matrix::Projected => dominant_eigenpair(&ProjectedOperator::new(g, coloring)?, settings)?,
    };
    Ok(pair.vector)
}

pub fn run_algorithm(
    algorithm: SweepAlgorithm,
    g: &LabeledGraph,
    coloring: &Coloring,
    cfg: &SweepConfig,
) -> Result<SolutionRecord> {
    let start = Instant::now();
    if coloring.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: coloring.len() });
    }
    let mut record = if g.n() == 0 {
        SolutionRecord::from_set(algorithm.name(), g, coloring, NodeSet::empty(), Status::NoFeasiblePrefix)?
    } else {
        let v = main_eigenvector(g, coloring, algorithm.matrix(), &cfg.eigen)?;
        if algorithm.is_paired() {
            paired_sweep_with(g, coloring, &v, &cfg.orderings)?
        } else {
            general_sweep_with(g, coloring, &v, cfg.delta, &cfg.orderings)?
        }
    };
    record.algorithm = algorithm.name().to_string();
    Ok(record.with_runtime(start.elapsed()))
}

/// `(size, density, balance)` of every candidate the algorithm examines.
pub fn candidate_trace(
    algorithm: SweepAlgorithm,
    g: &LabeledGraph,
    coloring: &Coloring,
    cfg: &SweepConfig,
) -> Result<Vec<(usize, f64, f64)>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let v = main_eigenvector(g, coloring, algorithm.matrix(), &cfg.eigen)?;
    let candidates = sweep_candidates(g, coloring, &v, &cfg.orderings, algorithm.is_paired())?;
    Ok(candidates.into_iter().map(|c| (c.size, c.density, c.balance)).collect())
}
