//! Exhaustive densest-subgraph solvers for small graphs.
//!
//! Subsets are visited in Gray-code order so each step toggles one node and
//! the internal weight is updated from that node's adjacency alone.

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, LabeledGraph, NodeSet};

/// Largest graph the oracle accepts.
pub const ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleConstraint {
    Unconstrained,
    /// Equal red and blue counts.
    Fair,
    /// At most `k` nodes, `k >= 1`.
    AtMostK(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub nodes: NodeSet,
    pub density: f64,
    /// No non-empty subset satisfies the constraint.
    pub infeasible: bool,
}

/// Exact maximizer of `2 w(E_S) / |S|` over non-empty subsets satisfying
/// `constraint`. Ties go to the smaller set, then to the lexicographically
/// smallest member sequence.
pub fn brute_force_densest(
    g: &LabeledGraph,
    coloring: &Coloring,
    constraint: OracleConstraint,
) -> Result<OracleResult> {
    let n = g.n();
    if n > ORACLE_CAP {
        return Err(Error::OracleTooLarge { n, cap: ORACLE_CAP });
    }
    if coloring.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: coloring.len() });
    }
    if let OracleConstraint::AtMostK(0) = constraint {
        return Err(Error::InvalidParameter("AtMostK needs k >= 1".into()));
    }

    let red_bits: u32 = (0..n).filter(|&i| coloring.color(i) == Color::Red).map(|i| 1u32 << i).sum();
    let mut mask: u32 = 0;
    let mut internal = 0.0;
    let mut best: Option<(f64, u32)> = None;

    for step in 1u64..(1u64 << n) {
        let node = step.trailing_zeros() as usize;
        let into_set: f64 = g.neighbors(node).filter(|&(j, _)| mask & (1 << j) != 0).map(|(_, w)| w).sum();
        if mask & (1 << node) != 0 {
            mask &= !(1 << node);
            internal -= into_set;
        } else {
            mask |= 1 << node;
            internal += into_set;
        }
        let size = mask.count_ones() as usize;
        let feasible = match constraint {
            OracleConstraint::Unconstrained => true,
            OracleConstraint::Fair => 2 * (mask & red_bits).count_ones() as usize == size,
            OracleConstraint::AtMostK(k) => size <= k,
        };
        if !feasible {
            continue;
        }
        let density = 2.0 * internal / size as f64;
        let better = match best {
            None => true,
            Some((d, m)) => preferred(density, mask, d, m),
        };
        if better {
            best = Some((density, mask));
        }
    }

    Ok(match best {
        Some((_, mask)) => {
            let nodes = NodeSet::new((0..n).filter(|&i| mask & (1 << i) != 0));
            // recompute from scratch so accumulated rounding never leaks out
            let density = crate::graph::density(g, &nodes)?;
            OracleResult { nodes, density, infeasible: false }
        }
        None => OracleResult { nodes: NodeSet::empty(), density: 0.0, infeasible: true },
    })
}

fn preferred(density: f64, mask: u32, best_density: f64, best_mask: u32) -> bool {
    if density != best_density {
        return density > best_density;
    }
    if mask.count_ones() != best_mask.count_ones() {
        return mask.count_ones() < best_mask.count_ones();
    }
    // equal sizes: whichever holds the smallest differing id sorts first
    let first_difference = (mask ^ best_mask).trailing_zeros();
    first_difference < 32 && mask & (1 << first_difference) != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coloring(s: &str) -> Coloring {
        Coloring::new(s.chars().map(|c| Color::from_char(c).unwrap()).collect())
    }

    #[test]
    fn fair_clique() {
        let g = LabeledGraph::from_unweighted(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let res = brute_force_densest(&g, &coloring("RRBB"), OracleConstraint::Fair).unwrap();
        assert_eq!(res.nodes, NodeSet::all(4));
        assert_eq!(res.density, 3.0);
    }

    #[test]
    fn triangle_fair_pair() {
        let g = LabeledGraph::from_unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let res = brute_force_densest(&g, &coloring("RRB"), OracleConstraint::Fair).unwrap();
        assert_eq!(res.nodes.members(), &[0, 2]);
        assert_eq!(res.density, 1.0);
    }

    #[test]
    fn infeasible_fair() {
        let g = LabeledGraph::from_unweighted(2, [(0, 1)]).unwrap();
        let res = brute_force_densest(&g, &coloring("RR"), OracleConstraint::Fair).unwrap();
        assert!(res.infeasible);
        assert!(res.nodes.is_empty());
        assert_eq!(res.density, 0.0);
    }

    #[test]
    fn at_most_k() {
        let g = LabeledGraph::from_unweighted(5, [(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
        let c = coloring("RRRBB");
        let res = brute_force_densest(&g, &c, OracleConstraint::AtMostK(2)).unwrap();
        assert_eq!(res.nodes.members(), &[0, 1]);
        assert_eq!(res.density, 1.0);
        let all = brute_force_densest(&g, &c, OracleConstraint::AtMostK(5)).unwrap();
        let unc = brute_force_densest(&g, &c, OracleConstraint::Unconstrained).unwrap();
        assert_eq!(all, unc);
        assert_eq!(unc.nodes.members(), &[0, 1, 2]);
        assert!(brute_force_densest(&g, &c, OracleConstraint::AtMostK(0)).is_err());
    }

    #[test]
    fn size_cap() {
        let g = LabeledGraph::from_unweighted(21, []).unwrap();
        let err = brute_force_densest(&g, &Coloring::alternating(21), OracleConstraint::Unconstrained).unwrap_err();
        assert!(err.to_string().contains("instance too large for oracle"));
    }
}
