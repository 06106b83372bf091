//! Run every algorithm on a batch of random graphs, then print the
//! per-algorithm Pareto fronts of one instance and the summary table.

use fairdsg::flow::exact_densest_subgraph;
use fairdsg::report::{self, pareto_front, Algorithm, RunRow};
use fairdsg::sweep::SweepConfig;
use fairdsg::{Color, Coloring, LabeledGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> (LabeledGraph, Coloring) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 40;
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.15)).collect();
    let colors = (0..n).map(|_| if rng.gen_bool(0.6) { Color::Red } else { Color::Blue }).collect();
    (LabeledGraph::from_unweighted(n, edges).expect("valid ids"), Coloring::new(colors))
}

fn main() -> fairdsg::Result<()> {
    let cfg = SweepConfig::default();
    let algorithms = [Algorithm::Ss, Algorithm::Fss, Algorithm::Ps, Algorithm::Fps, Algorithm::TwoDfsg];

    let (g, c) = instance(0);
    for a in algorithms {
        let front = pareto_front(&a.points(&g, &c, &cfg)?);
        let pts: Vec<String> = front.iter().map(|p| format!("({:.2}, {:.2})", p.density, p.balance)).collect();
        println!("{:<7} front {}", a.name(), pts.join(" "));
    }

    let mut rows = Vec::new();
    for seed in 0..20 {
        let (g, c) = instance(seed);
        let opt = exact_densest_subgraph(&g)?.density;
        for a in algorithms {
            let r = a.run(&g, &c, &cfg)?;
            let nd = report::normalize_against(&r, opt)?;
            rows.push(RunRow::new(&r, &format!("g{seed}"), &g, &c, nd, seed, false));
        }
    }
    print!("{}", report::summary_table(&report::summary(&rows)));
    Ok(())
}
