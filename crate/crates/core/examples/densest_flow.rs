//! Exact densest subgraph by max-flow, its fair padding, and the
//! exhaustive fair optimum for comparison. The coloring is balanced, which
//! is what the padding needs to end fair.

use fairdsg::flow::{exact_densest_subgraph, two_dfsg_with_trace};
use fairdsg::oracle::{brute_force_densest, OracleConstraint};
use fairdsg::{Color, Coloring, LabeledGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fairdsg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 14;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            // denser among the low ids
            let p = if u < 6 && v < 6 { 0.9 } else { 0.1 };
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..4) as f64));
            }
        }
    }
    let g = LabeledGraph::from_edges(n, edges)?;
    let c = Coloring::new((0..n).map(|u| if u < 7 { Color::Red } else { Color::Blue }).collect());

    let best = exact_densest_subgraph(&g)?;
    println!("densest: {:?} density {:.4} ({} cuts)", best.nodes.members(), best.density, best.iterations);

    let (fair, trace) = two_dfsg_with_trace(&g, &c)?;
    println!("2-DFSG: {:?} density {:.4} status {}", fair.nodes.members(), fair.density, fair.status);
    for (size, density, balance) in trace {
        println!("  size {size:>2} density {density:.4} balance {balance:.3}");
    }

    let opt = brute_force_densest(&g, &c, OracleConstraint::Fair)?;
    println!(
        "fair optimum: {:?} density {:.4}, ratio {:.3}",
        opt.nodes.members(),
        opt.density,
        fair.density / opt.density
    );
    Ok(())
}
