//! Colored weighted graphs and the measures used to score node sets.
//!
//! Density is the average weighted degree of the induced subgraph,
//! `2 * w(E_S) / |S|`. Balance is `min(x/y, y/x)` over the red and blue
//! counts of a set, and a set is fair when both counts are equal.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn as_char(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'R' | 'r' => Some(Color::Red),
            'B' | 'b' => Some(Color::Blue),
            _ => None,
        }
    }

    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => f.write_str("red"),
            Color::Blue => f.write_str("blue"),
        }
    }
}

/// Per-node red/blue assignment with cached class sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Color>,
    n_red: usize,
    n_blue: usize,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        let n_red = colors.iter().filter(|&&c| c == Color::Red).count();
        let n_blue = colors.len() - n_red;
        Coloring { colors, n_red, n_blue }
    }

    /// Red for even ids, blue for odd ids.
    pub fn alternating(n: usize) -> Self {
        Coloring::new((0..n).map(|i| if i % 2 == 0 { Color::Red } else { Color::Blue }).collect())
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, node: usize) -> Color {
        self.colors[node]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn n_red(&self) -> usize {
        self.n_red
    }

    pub fn n_blue(&self) -> usize {
        self.n_blue
    }

    /// Whether the whole vertex set is fair.
    pub fn is_fair(&self) -> bool {
        self.n_red == self.n_blue
    }

    /// `(red, blue)` counts inside `set`.
    pub fn counts(&self, set: &NodeSet) -> (usize, usize) {
        let red = set.iter().filter(|&i| self.colors[i] == Color::Red).count();
        (red, set.len() - red)
    }

    /// Coloring of the subgraph induced by `set`, relabeled densely.
    pub fn restrict(&self, set: &NodeSet) -> Coloring {
        Coloring::new(set.iter().map(|i| self.colors[i]).collect())
    }

    pub fn to_string_compact(&self) -> String {
        self.colors.iter().map(|c| c.as_char()).collect()
    }
}

/// A strictly sorted set of node ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        NodeSet { members }
    }

    pub fn empty() -> Self {
        NodeSet::default()
    }

    pub fn all(n: usize) -> Self {
        NodeSet { members: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&id) if id >= n => Err(Error::NodeOutOfRange { id, n }),
            _ => Ok(()),
        }
    }

    /// Normalized indicator: `1/sqrt(m)` on members, `0` elsewhere.
    pub fn indicator(&self, n: usize) -> Vec<f64> {
        let mut chi = vec![0.0; n];
        if self.members.is_empty() {
            return chi;
        }
        let value = 1.0 / (self.members.len() as f64).sqrt();
        for &i in &self.members {
            chi[i] = value;
        }
        chi
    }

    /// Number of members of `self` missing from `other`.
    pub fn missing_from(&self, other: &NodeSet) -> usize {
        self.iter().filter(|&i| !other.contains(i)).count()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.members
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        NodeSet::new(iter)
    }
}

/// Counters reported while canonicalizing an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub merged_duplicates: usize,
    pub self_loops: usize,
}

/// Undirected weighted graph in compressed sparse row form.
///
/// Edges are canonical: `u < v`, sorted, no duplicates. Each adjacency row
/// is sorted by neighbor id.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    d_max: f64,
    node_names: Option<Vec<String>>,
}

impl LabeledGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        Self::from_edges_with_stats(n, edges).map(|(g, _)| g)
    }

    pub fn from_unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Builds the canonical graph. Duplicate edges have their weights summed;
    /// self-loops are dropped and counted.
    pub fn from_edges_with_stats(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<(Self, BuildStats)> {
        let mut stats = BuildStats::default();
        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        for (u, v, w) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { u, v, weight: w });
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            match merged.get_mut(&key) {
                Some(total) => {
                    *total += w;
                    stats.merged_duplicates += 1;
                }
                None => {
                    merged.insert(key, w);
                }
            }
        }
        let mut edges: Vec<(usize, usize, f64)> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        edges.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok((Self::from_canonical(n, edges), stats))
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(u, v, _) in &edges {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        let mut weights = vec![0.0; 2 * edges.len()];
        for &(u, v, w) in &edges {
            targets[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        // edges are sorted by (u, v), so each row is filled in ascending
        // neighbor order except for the reverse half; sort rows explicitly.
        for u in 0..n {
            let (lo, hi) = (offsets[u], offsets[u + 1]);
            let mut row: Vec<(usize, f64)> = (lo..hi).map(|k| (targets[k], weights[k])).collect();
            row.sort_unstable_by_key(|&(t, _)| t);
            for (k, (t, w)) in (lo..hi).zip(row) {
                targets[k] = t;
                weights[k] = w;
            }
        }
        let degrees: Vec<f64> = (0..n).map(|u| weights[offsets[u]..offsets[u + 1]].iter().sum()).collect();
        let d_max = degrees.iter().copied().fold(0.0, f64::max);
        LabeledGraph { n, edges, offsets, targets, weights, degrees, d_max, node_names: None }
    }

    pub fn with_node_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: names.len() });
        }
        self.node_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()].iter().copied().zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// `w(E)`, each undirected edge counted once.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn weight_between(&self, u: usize, v: usize) -> f64 {
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.targets[range.clone()].binary_search(&v) {
            Ok(k) => self.weights[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn node_names(&self) -> Option<&[String]> {
        self.node_names.as_deref()
    }

    /// External name of `u`, falling back to its id.
    pub fn node_name(&self, u: usize) -> String {
        match &self.node_names {
            Some(names) => names[u].clone(),
            None => u.to_string(),
        }
    }

    /// Whether every weight is a small non-negative integer, so flow
    /// computations can run in exact integer arithmetic.
    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|&(_, _, w)| w.fract() == 0.0 && w <= (1u64 << 24) as f64)
    }

    /// `out = A x`, rows reduced in fixed order.
    pub fn apply_adjacency(&self, x: &[f64], out: &mut [f64]) {
        for (u, slot) in out.iter_mut().enumerate() {
            let range = self.offsets[u]..self.offsets[u + 1];
            *slot = self.targets[range.clone()].iter().zip(&self.weights[range]).map(|(&t, &w)| w * x[t]).sum();
        }
    }
}

/// `D_S = 2 w(E ∩ S×S) / |S|`, the average weighted degree inside `set`.
pub fn density(g: &LabeledGraph, set: &NodeSet) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    set.check_bounds(g.n())?;
    let mut inside = vec![false; g.n()];
    for i in set.iter() {
        inside[i] = true;
    }
    let twice_internal: f64 =
        set.iter().map(|i| g.neighbors(i).filter(|&(j, _)| inside[j]).map(|(_, w)| w).sum::<f64>()).sum();
    Ok(twice_internal / set.len() as f64)
}

/// `min(x/y, y/x)` over red and blue counts; `0` when a class is absent.
pub fn balance(set: &NodeSet, coloring: &Coloring) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let (red, blue) = coloring.counts(set);
    Ok(balance_from_counts(red, blue))
}

pub(crate) fn balance_from_counts(red: usize, blue: usize) -> f64 {
    if red == 0 || blue == 0 {
        0.0
    } else {
        red.min(blue) as f64 / red.max(blue) as f64
    }
}

/// `| |S ∩ Red| - |S ∩ Blue| |`.
pub fn imbalance(set: &NodeSet, coloring: &Coloring) -> usize {
    let (red, blue) = coloring.counts(set);
    red.abs_diff(blue)
}

pub fn is_fair(set: &NodeSet, coloring: &Coloring) -> bool {
    imbalance(set, coloring) == 0
}

/// Subgraph induced by `set`, relabeled `0..|S|` in ascending id order.
/// Node names carry the original external names (or original ids).
pub fn induced_subgraph(g: &LabeledGraph, set: &NodeSet) -> Result<LabeledGraph> {
    set.check_bounds(g.n())?;
    let mut new_id = vec![usize::MAX; g.n()];
    for (k, i) in set.iter().enumerate() {
        new_id[i] = k;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v, _)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|&(u, v, w)| (new_id[u], new_id[v], w))
        .collect::<Vec<_>>();
    let names = set.iter().map(|i| g.node_name(i)).collect();
    // relabeling is monotone, so the filtered list is already canonical
    LabeledGraph::from_canonical(set.len(), edges).with_node_names(names)
}
