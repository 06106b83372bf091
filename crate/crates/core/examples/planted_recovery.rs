//! Plant a fair near-regular block in a sparse random graph and check
//! how well the fair sweep recovers it.
//!
//! cargo run --release --example planted_recovery -- [n m d eps p_bg seed]

use fairdsg::planted::{generate, recovery_on_instance, DeltaPolicy, PlantedParams};
use fairdsg::spectral::EigenSettings;
use fairdsg::sweep::SweepAlgorithm;

fn main() -> fairdsg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let params = PlantedParams {
        n: arg(0, "400").parse().expect("n"),
        m: arg(1, "40").parse().expect("m"),
        d: arg(2, "30").parse().expect("d"),
        eps: arg(3, "0.1").parse().expect("eps"),
        p_bg: arg(4, "0.01").parse().expect("p_bg"),
        seed: arg(5, "1").parse().expect("seed"),
    };
    let inst = generate(&params)?;
    let m = &inst.measured;
    println!(
        "d_max {} d {} eps {:.4} theta {:.4} lambda1 {:.3} lambda {:.3} hypotheses {}",
        m.d_max, m.d, m.eps_measured, m.theta, m.lambda1, m.lambda, m.hypotheses_hold
    );

    let eigen = EigenSettings::default().with_seed(params.seed);
    for algorithm in [SweepAlgorithm::SS, SweepAlgorithm::FSS, SweepAlgorithm::FPS] {
        let r = recovery_on_instance(&inst, algorithm, DeltaPolicy::Theoretical, &eigen)?;
        println!(
            "{:<4} recovered {} error {} (bound {:.1}) |chi - v1|^2 {:.4} (bound {:.4})",
            r.algorithm, r.recovered_size, r.error, r.error_bound, r.distance_sq, r.distance_bound
        );
    }
    Ok(())
}
