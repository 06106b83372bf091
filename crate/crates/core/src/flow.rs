//! Exact densest subgraph through max-flow, and the fair 2-approximation
//! that pads the densest set with minority-color nodes until it is balanced.
//!
//! For a guess `γ` on the half-density `w(E_S)/|S|` the network has arcs
//! `source -> u` of capacity `d_u`, `u -> sink` of capacity `2γ`, and both
//! directions of every edge with its weight. A cut with source side `S`
//! costs `2 w(E) + 2 (γ|S| - w(E_S))`, so the minimal min-cut source side is
//! non-empty exactly when some set beats `γ`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt::Debug;
use std::ops::{Add, Sub};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{self, Color, Coloring, LabeledGraph, NodeSet};
use crate::sweep::{SolutionRecord, Status};

/// Arc capacity usable by [`max_flow`].
pub trait Capacity: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Debug {
    const ZERO: Self;

    /// Residual capacity large enough to push flow through.
    fn is_positive(self) -> bool;

    fn is_valid(self) -> bool;

    fn to_f64(self) -> f64;
}

impl Capacity for i128 {
    const ZERO: Self = 0;

    fn is_positive(self) -> bool {
        self > 0
    }

    fn is_valid(self) -> bool {
        self >= 0
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Residuals below this are treated as saturated.
pub const FLOAT_EPS: f64 = 1e-11;

impl Capacity for f64 {
    const ZERO: Self = 0.0;

    fn is_positive(self) -> bool {
        self > FLOAT_EPS
    }

    fn is_valid(self) -> bool {
        self.is_finite() && self >= 0.0
    }

    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowNetwork<C> {
    n: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, C)>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { n, source, sink, arcs: Vec::new() }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: C) {
        self.arcs.push((from, to, capacity));
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize, C)] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    fn validate(&self) -> Result<()> {
        if self.source >= self.n || self.sink >= self.n {
            return Err(Error::MalformedNetwork(format!(
                "terminals ({}, {}) out of range for {} nodes",
                self.source, self.sink, self.n
            )));
        }
        if self.source == self.sink {
            return Err(Error::MalformedNetwork("source equals sink".into()));
        }
        for &(u, v, c) in &self.arcs {
            if u >= self.n || v >= self.n {
                return Err(Error::MalformedNetwork(format!("arc ({u}, {v}) out of range")));
            }
            if !c.is_valid() {
                return Err(Error::MalformedNetwork(format!("arc ({u}, {v}) has capacity {c:?}")));
            }
        }
        Ok(())
    }
}

/// Maximum flow value and the source side of a minimum cut.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxFlow<C> {
    pub value: C,
    /// Nodes reachable from the source in the final residual network; this
    /// is the minimal source side among all minimum cuts.
    pub source_side: NodeSet,
}

struct Residual<C> {
    head: Vec<usize>,
    cap: Vec<C>,
    adj: Vec<Vec<usize>>,
}

impl<C: Capacity> Residual<C> {
    fn build(net: &FlowNetwork<C>) -> Self {
        let mut r = Residual { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); net.n] };
        for &(u, v, c) in &net.arcs {
            r.adj[u].push(r.head.len());
            r.head.push(v);
            r.cap.push(c);
            r.adj[v].push(r.head.len());
            r.head.push(u);
            r.cap.push(C::ZERO);
        }
        r
    }

    fn levels(&self, source: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if level[v] == usize::MAX && self.cap[e].is_positive() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    // one blocking flow on the level graph, iterative DFS with current-arc pointers
    fn blocking_flow(&mut self, source: usize, sink: usize, level: &mut [usize]) -> C {
        let mut total = C::ZERO;
        let mut next = vec![0usize; self.adj.len()];
        let mut path: Vec<usize> = Vec::new();
        loop {
            let u = path.last().map_or(source, |&e| self.head[e]);
            if u == sink {
                let mut bottleneck = self.cap[path[0]];
                for &e in &path[1..] {
                    if self.cap[e] < bottleneck {
                        bottleneck = self.cap[e];
                    }
                }
                let mut cut_at = path.len();
                for (k, &e) in path.iter().enumerate() {
                    self.cap[e] = self.cap[e] - bottleneck;
                    self.cap[e ^ 1] = self.cap[e ^ 1] + bottleneck;
                    if cut_at == path.len() && !self.cap[e].is_positive() {
                        cut_at = k;
                    }
                }
                total = total + bottleneck;
                path.truncate(cut_at);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let e = self.adj[u][next[u]];
                let v = self.head[e];
                if self.cap[e].is_positive() && level[v] == level[u].wrapping_add(1) {
                    path.push(e);
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                if u == source {
                    return total;
                }
                level[u] = usize::MAX;
                path.pop();
                let parent = path.last().map_or(source, |&e| self.head[e]);
                next[parent] += 1;
            }
        }
    }
}

/// Dinic's algorithm. Exact for integer capacities; for `f64`, residuals
/// below [`FLOAT_EPS`] count as saturated.
pub fn max_flow<C: Capacity>(net: &FlowNetwork<C>) -> Result<MaxFlow<C>> {
    net.validate()?;
    let mut residual = Residual::build(net);
    let mut value = C::ZERO;
    loop {
        let mut level = residual.levels(net.source);
        if level[net.sink] == usize::MAX {
            let source_side = NodeSet::new((0..net.n).filter(|&v| level[v] != usize::MAX));
            return Ok(MaxFlow { value, source_side });
        }
        value = value + residual.blocking_flow(net.source, net.sink, &mut level);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensestResult {
    pub nodes: NodeSet,
    /// `2 w(E_S) / |S|`.
    pub density: f64,
    /// Max-flow value of the certifying network built at the returned density.
    pub flow_value: f64,
    /// Number of max-flow evaluations.
    pub iterations: usize,
}

/// Graph nodes whose source arc survives in the min cut at half-density
/// `numerator / denominator`, with integer arithmetic throughout.
fn beats_guess_exact(g: &LabeledGraph, numerator: i128, denominator: i128) -> Result<(NodeSet, f64)> {
    let n = g.n();
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::<i128>::new(n + 2, source, sink);
    for u in 0..n {
        let d = g.degree(u) as i128;
        if d > 0 {
            net.add_arc(source, u, denominator * d);
            net.add_arc(u, sink, 2 * numerator);
        }
    }
    for &(u, v, w) in g.edges() {
        let w = w as i128 * denominator;
        net.add_arc(u, v, w);
        net.add_arc(v, u, w);
    }
    let flow = max_flow(&net)?;
    let side = NodeSet::new(flow.source_side.iter().filter(|&v| v < n));
    Ok((side, flow.value.to_f64()))
}

fn beats_guess_float(g: &LabeledGraph, gamma: f64) -> Result<(NodeSet, f64)> {
    let n = g.n();
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::<f64>::new(n + 2, source, sink);
    for u in 0..n {
        let d = g.degree(u);
        if d > 0.0 {
            net.add_arc(source, u, d);
            net.add_arc(u, sink, 2.0 * gamma);
        }
    }
    for &(u, v, w) in g.edges() {
        net.add_arc(u, v, w);
        net.add_arc(v, u, w);
    }
    let flow = max_flow(&net)?;
    let side = NodeSet::new(flow.source_side.iter().filter(|&v| v < n));
    Ok((side, flow.value))
}

fn internal_weight(g: &LabeledGraph, set: &NodeSet) -> f64 {
    graph::density(g, set).map_or(0.0, |d| d * set.len() as f64 / 2.0)
}

/// Densest subgraph by binary search on the half-density guess.
///
/// Integer-weighted graphs are solved exactly: guesses are `j / Q` with
/// `Q = 2n(n-1)`, finer than the smallest gap `1/(n(n-1))` between distinct
/// half-densities. Other graphs search in floating point down to `precision`
/// (default `1e-9 * d_max`). Both finish with a certifying cut at the found
/// density; if it still finds a better set, the search continues from there.
pub fn exact_densest_subgraph(g: &LabeledGraph) -> Result<DensestResult> {
    exact_densest_with_precision(g, None)
}

pub fn exact_densest_with_precision(g: &LabeledGraph, precision: Option<f64>) -> Result<DensestResult> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("densest subgraph of an empty graph".into()));
    }
    if g.edge_count() == 0 {
        let top = (0..n).fold(0, |best, u| if g.degree(u) > g.degree(best) { u } else { best });
        return Ok(DensestResult { nodes: NodeSet::new([top]), density: 0.0, flow_value: 0.0, iterations: 0 });
    }
    if g.has_integer_weights() {
        densest_integer(g)
    } else {
        densest_float(g, precision.unwrap_or(1e-9 * g.d_max()))
    }
}

fn densest_integer(g: &LabeledGraph) -> Result<DensestResult> {
    let n = g.n() as i128;
    let q = (2 * n * (n - 1)).max(2);
    let mut iterations = 0;
    let (mut best, _) = beats_guess_exact(g, 0, q)?;
    iterations += 1;
    // feasible(lo) and !feasible(hi): no set has half-density above d_max / 2
    let (mut lo, mut hi) = (0i128, (g.d_max() as i128 * q + 1) / 2 + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let (side, _) = beats_guess_exact(g, mid, q)?;
        iterations += 1;
        if side.is_empty() {
            hi = mid;
        } else {
            lo = mid;
            best = side;
        }
    }
    loop {
        let twice_internal = (2.0 * internal_weight(g, &best)).round() as i128;
        let size = best.len() as i128;
        // certify at half-density exactly w(E_S) / |S| = twice_internal / (2 size)
        let (side, flow_value) = beats_guess_exact(g, twice_internal, 2 * size)?;
        iterations += 1;
        if side.is_empty() {
            let density = graph::density(g, &best)?;
            return Ok(DensestResult { nodes: best, density, flow_value, iterations });
        }
        best = side;
    }
}

fn densest_float(g: &LabeledGraph, precision: f64) -> Result<DensestResult> {
    if !(precision > 0.0) {
        return Err(Error::InvalidParameter(format!("precision must be positive, got {precision}")));
    }
    let mut iterations = 0;
    let whole = NodeSet::all(g.n());
    let (first, _) = beats_guess_float(g, 0.0)?;
    iterations += 1;
    let mut best =
        if !first.is_empty() && graph::density(g, &first)? > graph::density(g, &whole)? { first } else { whole };
    let (mut lo, mut hi) = (0.0, g.d_max() / 2.0 + precision);
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        let (side, _) = beats_guess_float(g, mid)?;
        iterations += 1;
        if side.is_empty() {
            hi = mid;
        } else {
            lo = mid;
            if graph::density(g, &side)? > graph::density(g, &best)? {
                best = side;
            }
        }
    }
    loop {
        let best_density = graph::density(g, &best)?;
        let (side, flow_value) = beats_guess_float(g, best_density / 2.0)?;
        iterations += 1;
        if side.is_empty() || graph::density(g, &side)? <= best_density {
            return Ok(DensestResult { nodes: best, density: best_density, flow_value, iterations });
        }
        best = side;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct PadKey {
    into_set: f64,
    node: usize,
}

impl Eq for PadKey {}

impl PartialOrd for PadKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PadKey {
    // larger weight first, then smaller id
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.into_set.total_cmp(&other.into_set).then(Reverse(self.node).cmp(&Reverse(other.node)))
    }
}

/// 2-DFSG plus the `(size, density, balance)` trajectory from the densest
/// set through every padding step.
pub fn two_dfsg_with_trace(g: &LabeledGraph, coloring: &Coloring) -> Result<(SolutionRecord, Vec<(usize, f64, f64)>)> {
    let start = Instant::now();
    if coloring.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: coloring.len() });
    }
    if g.n() == 0 {
        let record = SolutionRecord::from_set("2-DFSG", g, coloring, NodeSet::empty(), Status::Unfair)?;
        return Ok((record, Vec::new()));
    }
    let densest = exact_densest_subgraph(g)?;
    let mut inside = vec![false; g.n()];
    for u in densest.nodes.iter() {
        inside[u] = true;
    }
    let (red, blue) = coloring.counts(&densest.nodes);
    let minority = if red < blue { Color::Red } else { Color::Blue };
    let mut missing = red.abs_diff(blue);

    let mut size = densest.nodes.len();
    let mut twice_internal = densest.density * size as f64;
    let (mut r, mut b) = (red, blue);
    let mut trace = vec![(size, densest.density, crate::graph::balance_from_counts(r, b))];

    let mut into_set = vec![0.0; g.n()];
    for u in densest.nodes.iter() {
        for (v, w) in g.neighbors(u) {
            into_set[v] += w;
        }
    }
    let mut heap: BinaryHeap<PadKey> = (0..g.n())
        .filter(|&u| !inside[u] && coloring.color(u) == minority)
        .map(|u| PadKey { into_set: into_set[u], node: u })
        .collect();

    while missing > 0 {
        let Some(top) = heap.pop() else { break };
        if inside[top.node] || top.into_set != into_set[top.node] {
            continue;
        }
        let u = top.node;
        inside[u] = true;
        twice_internal += 2.0 * into_set[u];
        size += 1;
        match minority {
            Color::Red => r += 1,
            Color::Blue => b += 1,
        }
        missing -= 1;
        trace.push((size, twice_internal / size as f64, crate::graph::balance_from_counts(r, b)));
        for (v, w) in g.neighbors(u) {
            into_set[v] += w;
            if !inside[v] && coloring.color(v) == minority {
                heap.push(PadKey { into_set: into_set[v], node: v });
            }
        }
    }
    let status = if missing == 0 { Status::Found } else { Status::Unfair };
    let nodes = NodeSet::new((0..g.n()).filter(|&u| inside[u]));
    let record = SolutionRecord::from_set("2-DFSG", g, coloring, nodes, status)?.with_runtime(start.elapsed());
    Ok((record, trace))
}

/// Densest subgraph padded to balance with the minority color. Padding
/// takes the minority node with the most weight into the current set,
/// ties by ascending id. `Unfair` if the minority pool runs out; the
/// partially padded set is still returned.
pub fn two_dfsg(g: &LabeledGraph, coloring: &Coloring) -> Result<SolutionRecord> {
    two_dfsg_with_trace(g, coloring).map(|(record, _)| record)
}
