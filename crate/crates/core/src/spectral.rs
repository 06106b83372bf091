//! Fairness projection and a matrix-free symmetric eigensolver.
//!
//! The fairness vector `f` has entries `+1/sqrt(n)` on red nodes and
//! `-1/sqrt(n)` on blue nodes, so an indicator `x` is balanced exactly when
//! `f·x = 0`. The projected operator `B = (I - ff^T) A (I - ff^T)` is never
//! materialized; it is applied as two rank-one corrections around a sparse
//! adjacency product.
//!
//! Eigenpairs come from power iteration on `op + cI`. Every eigenvalue of
//! `A` and `B` lies in `[-d_max, d_max]`, so with `c = d_max` the algebraic
//! top of the spectrum is also the top in magnitude and iteration converges
//! to it. The shift is removed before anything is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, LabeledGraph};

/// A real symmetric linear operator applied without materializing a matrix.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `out = M x` for the unshifted operator.
    fn apply(&self, x: &[f64], out: &mut [f64]);

    /// Shift that makes the algebraic top eigenvalue dominant in magnitude.
    fn default_shift(&self) -> f64;
}

impl SymmetricOperator for LabeledGraph {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.apply_adjacency(x, out);
    }

    fn default_shift(&self) -> f64 {
        self.d_max()
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply(x, out)
    }

    fn default_shift(&self) -> f64 {
        (**self).default_shift()
    }
}

/// Unit vector encoding the balance constraint `f·x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FairnessVector {
    entries: Vec<f64>,
}

impl FairnessVector {
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        dot(&self.entries, x)
    }

    /// In-place `x <- (I - ff^T) x`.
    pub fn project(&self, x: &mut [f64]) {
        let alpha = self.dot(x);
        for (xi, fi) in x.iter_mut().zip(&self.entries) {
            *xi -= alpha * fi;
        }
    }
}

pub fn fairness_vector(coloring: &Coloring) -> FairnessVector {
    let scale = 1.0 / (coloring.len() as f64).sqrt();
    let entries = coloring.colors().iter().map(|&c| if c == Color::Red { scale } else { -scale }).collect();
    FairnessVector { entries }
}

/// `B = (I - ff^T) A (I - ff^T)` with an optional diagonal shift `c`.
#[derive(Clone, Debug)]
pub struct ProjectedOperator<'g> {
    graph: &'g LabeledGraph,
    fairness: FairnessVector,
    shift: f64,
}

impl<'g> ProjectedOperator<'g> {
    pub fn new(graph: &'g LabeledGraph, coloring: &Coloring) -> Result<Self> {
        if coloring.len() != graph.n() {
            return Err(Error::DimensionMismatch { expected: graph.n(), got: coloring.len() });
        }
        Ok(ProjectedOperator { graph, fairness: fairness_vector(coloring), shift: graph.d_max() })
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn graph(&self) -> &LabeledGraph {
        self.graph
    }

    pub fn fairness(&self) -> &FairnessVector {
        &self.fairness
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `P A P x`, plus `c x` when `with_shift` is set.
    pub fn apply_projected(&self, x: &[f64], with_shift: bool) -> Result<Vec<f64>> {
        if x.len() != self.graph.n() {
            return Err(Error::DimensionMismatch { expected: self.graph.n(), got: x.len() });
        }
        let mut out = vec![0.0; x.len()];
        self.apply(x, &mut out);
        if with_shift {
            for (o, xi) in out.iter_mut().zip(x) {
                *o += self.shift * xi;
            }
        }
        Ok(out)
    }
}

impl SymmetricOperator for ProjectedOperator<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut y = x.to_vec();
        self.fairness.project(&mut y);
        self.graph.apply_adjacency(&y, out);
        self.fairness.project(out);
    }

    fn default_shift(&self) -> f64 {
        self.shift
    }
}

/// `d_max I - A`. Its top eigenvalue is `d_max - λ_n`.
#[derive(Clone, Copy, Debug)]
pub struct ReflectedAdjacency<'g> {
    graph: &'g LabeledGraph,
}

impl<'g> ReflectedAdjacency<'g> {
    pub fn new(graph: &'g LabeledGraph) -> Self {
        ReflectedAdjacency { graph }
    }
}

impl SymmetricOperator for ReflectedAdjacency<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.graph.apply_adjacency(x, out);
        let d = self.graph.d_max();
        for (o, xi) in out.iter_mut().zip(x) {
            *o = d * xi - *o;
        }
    }

    // spectrum lies in [0, 2 d_max] already
    fn default_shift(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSettings {
    /// Stop once `‖Mv - λv‖ <= tol * max(|λ|, 1)`.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Overrides the operator's default shift.
    pub shift: Option<f64>,
}

impl Default for EigenSettings {
    fn default() -> Self {
        EigenSettings { tol: 1e-8, max_iters: 100_000, seed: 0, shift: None }
    }
}

impl EigenSettings {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A converged eigenpair of the unshifted operator.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit norm; first entry of non-negligible magnitude is positive.
    pub vector: Vec<f64>,
    /// Achieved `‖Mv - λv‖`, measured on the operator restricted to the
    /// complement of any deflated vectors.
    pub residual: f64,
    pub iterations: usize,
}

impl EigenPair {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.value.abs().max(1.0)
    }
}

/// Largest algebraic eigenpair of `op`.
pub fn dominant_eigenpair<O: SymmetricOperator>(op: &O, settings: &EigenSettings) -> Result<EigenPair> {
    power_iteration(op, settings, &[])
}

/// Second largest algebraic eigenpair, iterating in the orthogonal
/// complement of `first.vector`.
pub fn second_eigenvalue<O: SymmetricOperator>(
    op: &O,
    first: &EigenPair,
    settings: &EigenSettings,
) -> Result<EigenPair> {
    power_iteration(op, settings, &[&first.vector])
}

/// Shifted power iteration, optionally deflated against orthonormal `locked` vectors.
pub fn power_iteration<O: SymmetricOperator>(op: &O, settings: &EigenSettings, locked: &[&[f64]]) -> Result<EigenPair> {
    let n = op.dim();
    if !(settings.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", settings.tol)));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("operator has dimension zero".into()));
    }
    for q in locked {
        if q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: q.len() });
        }
    }
    let shift = settings.shift.unwrap_or_else(|| op.default_shift());

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut x, locked);
    if normalize(&mut x) == 0.0 {
        return Err(Error::InvalidParameter("no direction left after deflation".into()));
    }

    let mut mx = vec![0.0; n];
    let mut best_residual = f64::INFINITY;
    for iteration in 1..=settings.max_iters {
        op.apply(&x, &mut mx);
        orthogonalize(&mut mx, locked);
        let value = dot(&x, &mx);
        let residual = mx.iter().zip(&x).map(|(m, xi)| (m - value * xi).powi(2)).sum::<f64>().sqrt();
        let relative = residual / value.abs().max(1.0);
        best_residual = best_residual.min(relative);
        if relative <= settings.tol {
            if locked.is_empty() {
                fix_sign(&mut x);
                return Ok(EigenPair { value, vector: x, residual, iterations: iteration });
            }
            // locked vectors are only accurate to tol, so the deflated residual
            // understates the true one; accept a Rayleigh-Ritz pair instead
            if let Some((value, mut vector, residual)) = ritz_refine(op, locked, &x, settings.tol) {
                fix_sign(&mut vector);
                return Ok(EigenPair { value, vector, residual, iterations: iteration });
            }
        }
        for (m, xi) in mx.iter_mut().zip(&x) {
            *m += shift * xi;
        }
        orthogonalize(&mut mx, locked);
        if normalize(&mut mx) == 0.0 {
            // x is an eigenvector with eigenvalue exactly -shift
            fix_sign(&mut x);
            return Ok(EigenPair { value: -shift, vector: x, residual: 0.0, iterations: iteration });
        }
        std::mem::swap(&mut x, &mut mx);
    }
    Err(Error::NoConvergence { iterations: settings.max_iters, best_residual })
}

/// Smallest algebraic eigenpair of the adjacency matrix, found as the top of
/// `d_max·I - A`.
pub fn smallest_eigenpair(g: &LabeledGraph, settings: &EigenSettings) -> Result<EigenPair> {
    // the reflected eigenvalue can reach 2·d_max, so its relative residual is
    // tightened until the residual on A itself meets tol
    let tight = EigenSettings { tol: settings.tol / (2.0 * g.d_max()).max(1.0), ..*settings };
    let reflected = dominant_eigenpair(&ReflectedAdjacency::new(g), &tight)?;
    Ok(EigenPair { value: g.d_max() - reflected.value, ..reflected })
}

/// Extreme eigenvalues of the adjacency matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralProfile {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    /// `max(λ_2, |λ_n|)`.
    pub lambda: f64,
}

impl SpectralProfile {
    /// The expander condition `λ_1 >= 4λ`.
    pub fn is_expander(&self) -> bool {
        self.lambda1 >= 4.0 * self.lambda
    }
}

pub fn spectral_profile(g: &LabeledGraph, settings: &EigenSettings) -> Result<SpectralProfile> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter(format!("spectral profile needs n >= 2, got {}", g.n())));
    }
    let first = dominant_eigenpair(g, settings)?;
    let second = second_eigenvalue(g, &first, settings)?;
    let lambda_n = smallest_eigenpair(g, settings)?.value;
    Ok(SpectralProfile {
        lambda1: first.value,
        lambda2: second.value,
        lambda_n,
        lambda: second.value.max(lambda_n.abs()),
    })
}

// Rayleigh-Ritz on span(locked, x), keeping the Ritz vector closest to x.
// Returns it only if its residual on the undeflated operator meets tol.
fn ritz_refine<O: SymmetricOperator>(op: &O, locked: &[&[f64]], x: &[f64], tol: f64) -> Option<(f64, Vec<f64>, f64)> {
    let n = x.len();
    let basis: Vec<&[f64]> = locked.iter().copied().chain(std::iter::once(x)).collect();
    let k = basis.len();
    let images: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut out = vec![0.0; n];
            op.apply(b, &mut out);
            out
        })
        .collect();
    let h: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| 0.5 * (dot(basis[i], &images[j]) + dot(basis[j], &images[i]))).collect())
        .collect();
    let vecs = small_eigenvectors(h);
    let pick = (0..k).max_by(|&a, &b| vecs[a][k - 1].abs().total_cmp(&vecs[b][k - 1].abs()))?;

    let mut y = vec![0.0; n];
    for (coef, b) in vecs[pick].iter().zip(&basis) {
        for (yi, bi) in y.iter_mut().zip(b.iter()) {
            *yi += coef * bi;
        }
    }
    if normalize(&mut y) == 0.0 {
        return None;
    }
    let mut ay = vec![0.0; n];
    op.apply(&y, &mut ay);
    let value = dot(&y, &ay);
    let residual = ay.iter().zip(&y).map(|(a, yi)| (a - value * yi).powi(2)).sum::<f64>().sqrt();
    (residual / value.abs().max(1.0) <= tol).then_some((value, y, residual))
}

// Eigenvectors of a small dense symmetric matrix by cyclic Jacobi rotations,
// returned as rows.
fn small_eigenvectors(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut v: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..64 {
        let off: f64 = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].powi(2))
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..k {
                    let (arp, arq) = (a[r][p], a[r][q]);
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..k {
                    let (apr, aqr) = (a[p][r], a[q][r]);
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    // column j of v is the eigenvector for a[j][j]
    (0..k).map(|j| (0..k).map(|i| v[i][j]).collect()).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        for xi in x.iter_mut() {
            *xi /= norm;
        }
    }
    norm
}

// two passes of classical Gram-Schmidt
fn orthogonalize(x: &mut [f64], locked: &[&[f64]]) {
    for _ in 0..2 {
        for q in locked {
            let alpha = dot(q, x);
            for (xi, qi) in x.iter_mut().zip(q.iter()) {
                *xi -= alpha * qi;
            }
        }
    }
}

fn fix_sign(x: &mut [f64]) {
    if let Some(&first) = x.iter().find(|v| v.abs() > 1e-12) {
        if first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}
