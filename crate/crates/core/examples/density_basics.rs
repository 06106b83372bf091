//! Density, balance and fairness of node sets in a small colored graph.

use fairdsg::graph::{balance, density, imbalance, induced_subgraph, is_fair};
use fairdsg::{Color, Coloring, LabeledGraph, NodeSet};

fn main() -> fairdsg::Result<()> {
    // two triangles joined by one edge; 0-2 red, 3-5 blue
    let g = LabeledGraph::from_unweighted(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])?;
    let c = Coloring::new(vec![Color::Red, Color::Red, Color::Red, Color::Blue, Color::Blue, Color::Blue]);

    for members in [vec![0, 1, 2], vec![2, 3], vec![1, 2, 3, 4], vec![0, 1, 2, 3, 4, 5]] {
        let s = NodeSet::new(members);
        println!(
            "S = {:?}: density {:.3}, balance {:.3}, imbalance {}, fair {}",
            s.members(),
            density(&g, &s)?,
            balance(&s, &c)?,
            imbalance(&s, &c),
            is_fair(&s, &c)
        );
    }

    let sub = induced_subgraph(&g, &NodeSet::new([1, 2, 3, 4]))?;
    println!("induced on {{1,2,3,4}}: {} nodes, {} edges, names {:?}", sub.n(), sub.edge_count(), sub.node_names());
    Ok(())
}
