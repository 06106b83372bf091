//! The four spectral rounding algorithms on a graph whose densest part is
//! all red, so unconstrained and fair answers differ.

use fairdsg::report::Algorithm;
use fairdsg::sweep::{candidate_trace, SweepAlgorithm, SweepConfig};
use fairdsg::{Color, Coloring, LabeledGraph};

fn main() -> fairdsg::Result<()> {
    let mut edges = Vec::new();
    // red clique on 0..5, a looser mixed block on 5..11
    for u in 0..5 {
        for v in u + 1..5 {
            edges.push((u, v));
        }
    }
    for u in 5..11 {
        for v in u + 1..11 {
            if (u + v) % 3 != 0 {
                edges.push((u, v));
            }
        }
    }
    edges.push((4, 5));
    let g = LabeledGraph::from_unweighted(11, edges)?;
    let colors = (0..11).map(|u| if u < 5 || u % 2 == 0 { Color::Red } else { Color::Blue }).collect();
    let c = Coloring::new(colors);

    for delta in [0.0, 0.5] {
        let cfg = SweepConfig { delta, ..SweepConfig::default() };
        println!("delta = {delta}");
        for a in [Algorithm::Ss, Algorithm::Fss, Algorithm::Ps, Algorithm::Fps] {
            let r = a.run(&g, &c, &cfg)?;
            println!(
                "  {:<4} {:<16} nodes {:?} density {:.3} balance {:.3}",
                r.algorithm,
                r.status,
                r.nodes.members(),
                r.density,
                r.balance
            );
        }
    }

    let trace = candidate_trace(SweepAlgorithm::FPS, &g, &c, &SweepConfig::default())?;
    println!("FPS examined {} candidate sets", trace.len());
    Ok(())
}
