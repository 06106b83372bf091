//! Planted fair dense subgraphs and recovery measurements.
//!
//! An instance hides a fair, near-regular set `S` of `m` nodes inside a
//! sparse random background. Everything asserted about an instance is
//! computed from the realized graph: the regularity slack `ε`, the degree
//! gap `θ` with `d >= (1 - θ) d_max`, and the expander condition `λ_1 >= 4λ`.
//! Under those conditions the top eigenvector `v̂_1` of the projected
//! operator satisfies `‖χ - v̂_1‖² <= 4(ε + θ)` and a sweep over it with
//! `Δ = 16(ε + θ)` misses at most `16(ε + θ) m` nodes of `S`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, LabeledGraph, NodeSet};
use crate::spectral::{
    dominant_eigenpair, dot, second_eigenvalue, spectral_profile, EigenSettings, ProjectedOperator, SpectralProfile,
};
use crate::sweep::{general_sweep, paired_sweep, SweepAlgorithm};

/// Resampling budget for the internal near-regular graph.
pub const MAX_RETRIES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlantedParams {
    pub n: usize,
    /// Planted set size, even.
    pub m: usize,
    /// Target internal degree.
    pub d: usize,
    /// Allowed internal degree slack.
    pub eps: f64,
    /// Probability of each background pair.
    pub p_bg: f64,
    pub seed: u64,
}

impl PlantedParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.m < 2 || self.m % 2 != 0 {
            return bad(format!("planted size m = {} must be even and at least 2", self.m));
        }
        if self.m > self.n {
            return bad(format!("planted size m = {} exceeds n = {}", self.m, self.n));
        }
        if self.d == 0 || self.d >= self.m {
            return bad(format!("internal degree d = {} must satisfy 1 <= d < m = {}", self.d, self.m));
        }
        if !(0.0..1.0).contains(&self.eps) {
            return bad(format!("eps = {} must lie in [0, 1)", self.eps));
        }
        if !(0.0..=1.0).contains(&self.p_bg) {
            return bad(format!("p_bg = {} must lie in [0, 1]", self.p_bg));
        }
        Ok(())
    }
}

/// Quantities measured on a realized instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Measured {
    pub d_max: f64,
    /// Realized internal degree center `(min + max) / 2`.
    pub d: f64,
    pub theta: f64,
    pub eps_measured: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub lambda: f64,
    /// `λ_1 >= 4λ` and `ε < 1`.
    pub hypotheses_hold: bool,
}

impl Measured {
    pub fn slack(&self) -> f64 {
        self.eps_measured + self.theta
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedInstance {
    pub params: PlantedParams,
    pub graph: LabeledGraph,
    pub coloring: Coloring,
    pub planted_set: NodeSet,
    pub measured: Measured,
}

/// `G(n, p)` with unit weights.
pub fn random_gnp(n: usize, p: f64, rng: &mut impl Rng) -> LabeledGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::from_unweighted(n, edges).expect("ids are in range")
}

/// Random pairing of `d` stubs per node on `m` local nodes. Pairs that would
/// form a self-loop or a repeated edge are rejected and redrawn; when no
/// valid pair is left the leftover stubs are discarded. The sample is kept
/// if every degree lies within `[(1 - eps) d, (1 + eps) d]`.
fn near_regular(m: usize, d: usize, eps: f64, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if d == m - 1 {
        return Ok((0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect());
    }
    let lo = (1.0 - eps) * d as f64;
    let hi = (1.0 + eps) * d as f64;
    for _ in 0..MAX_RETRIES {
        let mut stubs: Vec<usize> = (0..m).flat_map(|u| std::iter::repeat(u).take(d)).collect();
        let mut seen = HashSet::new();
        let mut degrees = vec![0usize; m];
        while stubs.len() >= 2 {
            let mut pick = None;
            for _ in 0..64 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
                if u != v && !seen.contains(&(u, v)) {
                    pick = Some((i, j));
                    break;
                }
            }
            if pick.is_none() {
                // few stubs left: find the valid pairs exhaustively
                let valid: Vec<(usize, usize)> = (0..stubs.len())
                    .flat_map(|i| (i + 1..stubs.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| {
                        let (u, v) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
                        u != v && !seen.contains(&(u, v))
                    })
                    .collect();
                pick = valid.choose(rng).copied();
            }
            let Some((i, j)) = pick else { break };
            let (u, v) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
            seen.insert((u, v));
            degrees[u] += 1;
            degrees[v] += 1;
            stubs.swap_remove(i.max(j));
            stubs.swap_remove(i.min(j));
        }
        if degrees.iter().all(|&k| k as f64 >= lo && k as f64 <= hi) {
            let mut edges: Vec<(usize, usize)> = seen.into_iter().collect();
            edges.sort_unstable();
            return Ok(edges);
        }
    }
    Err(Error::Generation(format!("no ({d}, {eps})-regular sample on {m} nodes within {MAX_RETRIES} attempts")))
}

pub fn generate(params: &PlantedParams) -> Result<PlantedInstance> {
    generate_with(params, &EigenSettings::default().with_seed(params.seed))
}

pub fn generate_with(params: &PlantedParams, eigen: &EigenSettings) -> Result<PlantedInstance> {
    params.validate()?;
    let PlantedParams { n, m, d, eps, p_bg, seed } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut planted: Vec<usize> = rand::seq::index::sample(&mut rng, n, m).into_vec();
    planted.sort_unstable();
    let mut in_planted = vec![false; n];
    for &u in &planted {
        in_planted[u] = true;
    }

    let mut colors = vec![Color::Blue; n];
    let mut shuffled = planted.clone();
    shuffled.shuffle(&mut rng);
    for &u in &shuffled[..m / 2] {
        colors[u] = Color::Red;
    }
    for (k, u) in (0..n).filter(|&u| !in_planted[u]).enumerate() {
        colors[u] = if k % 2 == 0 { Color::Red } else { Color::Blue };
    }

    let mut edges: Vec<(usize, usize)> =
        near_regular(m, d, eps, &mut rng)?.into_iter().map(|(a, b)| (planted[a], planted[b])).collect();
    for u in 0..n {
        for v in u + 1..n {
            if in_planted[u] && in_planted[v] {
                continue;
            }
            if rng.gen::<f64>() < p_bg {
                edges.push((u, v));
            }
        }
    }

    let graph = LabeledGraph::from_unweighted(n, edges)?;
    let coloring = Coloring::new(colors);
    let planted_set = NodeSet::new(planted);
    let measured = measure(&graph, &planted_set, eigen)?;
    Ok(PlantedInstance { params: *params, graph, coloring, planted_set, measured })
}

/// Measures `(d, ε, θ)` on the realized planted subgraph and the adjacency
/// spectrum of the whole graph.
pub fn measure(graph: &LabeledGraph, planted: &NodeSet, eigen: &EigenSettings) -> Result<Measured> {
    let internal: Vec<f64> = planted
        .iter()
        .map(|u| graph.neighbors(u).filter(|&(v, _)| planted.contains(v)).map(|(_, w)| w).sum())
        .collect();
    let lo = internal.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = internal.iter().copied().fold(0.0, f64::max);
    let d = 0.5 * (lo + hi);
    let eps_measured = if hi + lo > 0.0 { (hi - lo) / (hi + lo) } else { 0.0 };
    let d_max = graph.d_max();
    let theta = if d_max > 0.0 { (1.0 - d / d_max).max(0.0) } else { 0.0 };
    let SpectralProfile { lambda1, lambda2, lambda_n, lambda } = spectral_profile(graph, eigen)?;
    Ok(Measured {
        d_max,
        d,
        theta,
        eps_measured,
        lambda1,
        lambda2,
        lambda_n,
        lambda,
        hypotheses_hold: lambda1 >= 4.0 * lambda && eps_measured < 1.0,
    })
}

/// `|planted \ recovered|`.
pub fn recovery_error(planted: &NodeSet, recovered: &NodeSet) -> usize {
    planted.missing_from(recovered)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DeltaPolicy {
    /// `Δ = 16(ε + θ)` from the measured instance.
    Theoretical,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub measured: Measured,
    pub lambda_hat1: f64,
    pub lambda_hat2: f64,
    pub delta: f64,
    pub recovered_size: usize,
    pub error: usize,
    pub error_bound: f64,
    pub distance_sq: f64,
    pub distance_bound: f64,
    /// Nodes on the wrong side of the `1/(2 sqrt m)` threshold on `v̂_1`.
    pub threshold_misclassified: usize,
    /// Hypotheses failed, so the bounds are not asserted.
    pub vacuous: bool,
    pub passed: bool,
}

impl RecoveryReport {
    pub fn error_margin(&self) -> f64 {
        self.error_bound - self.error as f64
    }

    pub fn distance_margin(&self) -> f64 {
        self.distance_bound - self.distance_sq
    }
}

pub fn recovery_experiment(
    params: &PlantedParams,
    algorithm: SweepAlgorithm,
    policy: DeltaPolicy,
) -> Result<RecoveryReport> {
    let eigen = EigenSettings::default().with_seed(params.seed);
    let instance = generate_with(params, &eigen)?;
    recovery_on_instance(&instance, algorithm, policy, &eigen)
}

/// Runs the sweep on an already generated instance and checks both bounds.
pub fn recovery_on_instance(
    instance: &PlantedInstance,
    algorithm: SweepAlgorithm,
    policy: DeltaPolicy,
    eigen: &EigenSettings,
) -> Result<RecoveryReport> {
    let PlantedInstance { graph, coloring, planted_set, measured, params } = instance;
    let slack = measured.slack();
    let m = planted_set.len();

    let projected = ProjectedOperator::new(graph, coloring)?;
    let top = dominant_eigenpair(&projected, eigen)?;
    let second = second_eigenvalue(&projected, &top, eigen)?;

    let chi = planted_set.indicator(graph.n());
    let alignment = dot(&chi, &top.vector);
    // v̂_1 is defined up to sign; compare with the aligned representative
    let distance_sq = (2.0 - 2.0 * alignment.abs()).max(0.0);
    let sign = if alignment < 0.0 { -1.0 } else { 1.0 };
    let threshold = 1.0 / (2.0 * (m as f64).sqrt());
    let threshold_misclassified =
        (0..graph.n()).filter(|&i| (sign * top.vector[i] >= threshold) != planted_set.contains(i)).count();

    let delta = match policy {
        DeltaPolicy::Theoretical => 16.0 * slack,
        DeltaPolicy::Fixed(delta) => delta,
    };
    let sweep_vector = match algorithm.matrix() {
        crate::sweep::Matrix::Projected => top.vector.clone(),
        crate::sweep::Matrix::Raw => dominant_eigenpair(graph, eigen)?.vector,
    };
    let record = if algorithm.is_paired() {
        paired_sweep(graph, coloring, &sweep_vector)?
    } else {
        general_sweep(graph, coloring, &sweep_vector, delta)?
    };

    let error = recovery_error(planted_set, &record.nodes);
    let error_bound = 16.0 * slack * m as f64;
    let distance_bound = 4.0 * slack;
    let vacuous = !measured.hypotheses_hold;
    let passed = vacuous || (error as f64 <= error_bound && distance_sq <= distance_bound);
    Ok(RecoveryReport {
        seed: params.seed,
        n: graph.n(),
        m,
        algorithm: algorithm.name().to_string(),
        measured: *measured,
        lambda_hat1: top.value,
        lambda_hat2: second.value,
        delta,
        recovered_size: record.size,
        error,
        error_bound,
        distance_sq,
        distance_bound,
        threshold_misclassified,
        vacuous,
        passed,
    })
}
