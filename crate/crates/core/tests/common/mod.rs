//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the solver code paths it is checking.

#![allow(dead_code)]

use fairdsg::flow::FlowNetwork;
use fairdsg::{Color, Coloring, LabeledGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coloring(s: &str) -> Coloring {
    Coloring::new(s.chars().map(|c| Color::from_char(c).unwrap()).collect())
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> LabeledGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::from_unweighted(n, edges).unwrap()
}

/// Integer weights in `1..=max_w`.
pub fn random_int_weighted(rng: &mut impl Rng, n: usize, p: f64, max_w: u32) -> LabeledGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_w) as f64));
            }
        }
    }
    LabeledGraph::from_edges(n, edges).unwrap()
}

/// Real weights in `(0.1, 3)`.
pub fn random_real_weighted(rng: &mut impl Rng, n: usize, p: f64) -> LabeledGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, 0.1 + 2.9 * rng.gen::<f64>()));
            }
        }
    }
    LabeledGraph::from_edges(n, edges).unwrap()
}

pub fn random_coloring(rng: &mut impl Rng, n: usize) -> Coloring {
    Coloring::new((0..n).map(|_| if rng.gen_bool(0.5) { Color::Red } else { Color::Blue }).collect())
}

/// Exactly `n / 2` red nodes at random positions; `n` even.
pub fn balanced_coloring(rng: &mut impl Rng, n: usize) -> Coloring {
    let mut colors: Vec<Color> = (0..n).map(|i| if i < n / 2 { Color::Red } else { Color::Blue }).collect();
    colors.shuffle(rng);
    Coloring::new(colors)
}

/// `2 w(E_S) / |S|` summed directly over the edge list.
pub fn brute_density(g: &LabeledGraph, members: &[usize]) -> f64 {
    let mut inside = vec![false; g.n()];
    for &u in members {
        inside[u] = true;
    }
    let w: f64 = g.edges().iter().filter(|&&(u, v, _)| inside[u] && inside[v]).map(|&(_, _, w)| w).sum();
    2.0 * w / members.len() as f64
}

/// Densest non-empty subset by plain subset enumeration, with the fair
/// constraint optional. `None` if no subset qualifies.
pub fn brute_densest(g: &LabeledGraph, c: &Coloring, fair: bool) -> Option<f64> {
    let n = g.n();
    assert!(n <= 16);
    let mut best: Option<f64> = None;
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if fair {
            let red = members.iter().filter(|&&i| c.color(i) == Color::Red).count();
            if 2 * red != members.len() {
                continue;
            }
        }
        let d = brute_density(g, &members);
        if best.map_or(true, |b| d > b) {
            best = Some(d);
        }
    }
    best
}

pub fn dense_adjacency(g: &LabeledGraph) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; g.n()]; g.n()];
    for &(u, v, w) in g.edges() {
        a[u][v] += w;
        a[v][u] += w;
    }
    a
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for t in 0..k {
            for j in 0..m {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

pub fn fairness_entries(c: &Coloring) -> Vec<f64> {
    let s = 1.0 / (c.len() as f64).sqrt();
    c.colors().iter().map(|&col| if col == Color::Red { s } else { -s }).collect()
}

/// `P A P` with `P = I - f f^T` built as an explicit matrix.
pub fn dense_projected(g: &LabeledGraph, c: &Coloring) -> Vec<Vec<f64>> {
    let n = g.n();
    let f = fairness_entries(c);
    let p: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - f[i] * f[j]).collect()).collect();
    matmul(&matmul(&p, &dense_adjacency(g)), &p)
}

/// Cyclic Jacobi rotations. Returns eigenvalues in descending order and the
/// matching unit eigenvectors.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cos * akp - sin * akq;
                    a[k][q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cos * apk - sin * aqk;
                    a[q][k] = sin * apk + cos * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = cos * vkp - sin * vkq;
                    v[k][q] = sin * vkp + cos * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let values = idx.iter().map(|&i| a[i][i]).collect();
    let vectors = idx.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crit {
    Desc,
    Asc,
    AbsDesc,
    AbsAsc,
}

pub const CRITS: [Crit; 4] = [Crit::Desc, Crit::Asc, Crit::AbsDesc, Crit::AbsAsc];

/// Sorted node list under `crit`, equal keys by ascending id.
pub fn ordered(nodes: impl IntoIterator<Item = usize>, v: &[f64], crit: Crit) -> Vec<usize> {
    let mut nodes: Vec<usize> = nodes.into_iter().collect();
    nodes.sort_by(|&a, &b| {
        let (x, y) = (v[a], v[b]);
        let ord = match crit {
            Crit::Desc => y.partial_cmp(&x),
            Crit::Asc => x.partial_cmp(&y),
            Crit::AbsDesc => y.abs().partial_cmp(&x.abs()),
            Crit::AbsAsc => x.abs().partial_cmp(&y.abs()),
        };
        ord.unwrap().then(a.cmp(&b))
    });
    nodes
}

/// Best prefix over all criteria with `|red - blue| <= delta |S|`; highest
/// density, then smallest size, then earliest criterion.
pub fn rescan_general(g: &LabeledGraph, c: &Coloring, v: &[f64], delta: f64) -> Option<(Vec<usize>, f64)> {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for crit in CRITS {
        let order = ordered(0..g.n(), v, crit);
        for k in 1..=order.len() {
            let prefix = &order[..k];
            let red = prefix.iter().filter(|&&i| c.color(i) == Color::Red).count();
            let blue = k - red;
            if red.abs_diff(blue) as f64 > delta * k as f64 {
                continue;
            }
            let d = brute_density(g, prefix);
            if best.as_ref().map_or(true, |(s, bd)| d > *bd || (d == *bd && k < s.len())) {
                let mut set = prefix.to_vec();
                set.sort_unstable();
                best = Some((set, d));
            }
        }
    }
    best
}

/// Best union of the top `s` red and top `s` blue nodes over all criteria.
pub fn rescan_paired(g: &LabeledGraph, c: &Coloring, v: &[f64]) -> Option<(Vec<usize>, f64)> {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for crit in CRITS {
        let reds = ordered((0..g.n()).filter(|&i| c.color(i) == Color::Red), v, crit);
        let blues = ordered((0..g.n()).filter(|&i| c.color(i) == Color::Blue), v, crit);
        for s in 1..=reds.len().min(blues.len()) {
            let mut set: Vec<usize> = reds[..s].iter().chain(&blues[..s]).copied().collect();
            set.sort_unstable();
            let d = brute_density(g, &set);
            if best.as_ref().map_or(true, |(b, bd)| d > *bd || (d == *bd && set.len() < b.len())) {
                best = Some((set, d));
            }
        }
    }
    best
}

/// Minimum s-t cut by enumerating every partition of the non-terminal nodes.
pub fn brute_min_cut(net: &FlowNetwork<f64>) -> f64 {
    let n = net.node_count();
    let inner: Vec<usize> = (0..n).filter(|&u| u != net.source() && u != net.sink()).collect();
    assert!(inner.len() <= 16);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << inner.len()) {
        let mut side = vec![false; n];
        side[net.source()] = true;
        for (k, &u) in inner.iter().enumerate() {
            side[u] = mask >> k & 1 == 1;
        }
        let cut: f64 = net.arcs().iter().filter(|&&(a, b, _)| side[a] && !side[b]).map(|&(_, _, c)| c).sum();
        best = best.min(cut);
    }
    best
}
