//! Acceptance suite. Prints one PASS/FAIL line per criterion straight to
//! stdout, so the lines show up even when the test harness captures output.
//! Criteria 1-9 gate; criterion 10 is recorded only.

mod common;

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fairdsg::flow::{exact_densest_subgraph, two_dfsg};
use fairdsg::ingest::{build_product_graph, category_pair_subgraphs, parse_amazon_jsonl, parse_gml, polbooks_graph};
use fairdsg::oracle::{brute_force_densest, OracleConstraint};
use fairdsg::planted::{generate_with, recovery_on_instance, DeltaPolicy, PlantedParams};
use fairdsg::report::{self, Algorithm};
use fairdsg::spectral::{
    dominant_eigenpair, fairness_vector, second_eigenvalue, smallest_eigenpair, EigenSettings, ProjectedOperator,
    SymmetricOperator,
};
use fairdsg::sweep::{general_sweep, main_eigenvector, paired_sweep, Matrix, Status, SweepAlgorithm, SweepConfig};
use rand::Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Inputs are not available in this environment; reported, not gating.
    Unavailable(String),
}

fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Outcome::Pass(format!("{detail}; {:.1}s", took.as_secs_f64()))
    } else {
        Outcome::Fail(format!("{detail}; took {:.1}s > {}s", took.as_secs_f64(), limit.as_secs()))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn polbooks_ingestion() -> Outcome {
    let path = std::env::var_os("FAIRDSG_POLBOOKS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data/polbooks.gml"));
    let Ok(text) = fs::read_to_string(&path) else {
        return Outcome::Unavailable(format!(
            "political books GML not found at {} (set FAIRDSG_POLBOOKS); parser and filter are covered on fixtures",
            path.display()
        ));
    };
    let start = Instant::now();
    let books = match parse_gml(&text).and_then(|doc| polbooks_graph(&doc)) {
        Ok(b) => b,
        Err(e) => return Outcome::Fail(format!("{}: {e}", path.display())),
    };
    let got = (books.graph.n(), books.graph.edge_count(), books.conservative, books.liberal);
    if got != (92, 362, 49, 43) {
        return Outcome::Fail(format!("nodes/edges/red/blue = {got:?}, want (92, 362, 49, 43)"));
    }
    within(
        Duration::from_secs(1),
        start,
        format!("92 nodes, 362 edges, 49 red, 43 blue ({} neutral dropped)", books.neutral),
    )
}

fn flow_vs_oracle() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..300u64 {
        let mut rng = common::rng(20_000 + seed);
        let n = rng.gen_range(4..=12);
        let p = rng.gen_range(0.3..=0.7);
        let g = common::random_graph(&mut rng, n, p);
        let c = common::random_coloring(&mut rng, n);
        let flow = exact_densest_subgraph(&g).map_err(|e| e.to_string())?.density;
        let oracle = brute_force_densest(&g, &c, OracleConstraint::Unconstrained).map_err(|e| e.to_string())?.density;
        worst = worst.max((flow - oracle).abs());
        check((flow - oracle).abs() <= 1e-9, || format!("seed {seed}: flow {flow} vs oracle {oracle}"))?;
    }
    Ok(within(Duration::from_secs(60), start, format!("300 graphs, max |flow - oracle| = {worst:.1e}")))
}

fn two_dfsg_approximation() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut worst_ratio = f64::INFINITY;
    for seed in 0..300u64 {
        let mut rng = common::rng(30_000 + seed);
        let n = 2 * rng.gen_range(1..=6);
        let p = rng.gen_range(0.2..0.9);
        let g = common::random_graph(&mut rng, n, p);
        let c = common::balanced_coloring(&mut rng, n);
        let r = two_dfsg(&g, &c).map_err(|e| e.to_string())?;
        let opt = brute_force_densest(&g, &c, OracleConstraint::Fair).map_err(|e| e.to_string())?.density;
        check(r.fair && r.status == Status::Found, || format!("seed {seed}: output not fair"))?;
        check(r.density >= 0.5 * opt - 1e-9, || format!("seed {seed}: {} < 0.5 * {opt}", r.density))?;
        if opt > 0.0 {
            worst_ratio = worst_ratio.min(r.density / opt);
        }
    }
    Ok(within(Duration::from_secs(60), start, format!("300 fair graphs, min density/optimum = {worst_ratio:.3}")))
}

fn relative_residual(op: &impl SymmetricOperator, value: f64, v: &[f64]) -> f64 {
    let mut out = vec![0.0; v.len()];
    op.apply(v, &mut out);
    let r: f64 = out.iter().zip(v).map(|(a, x)| (a - value * x).powi(2)).sum::<f64>().sqrt();
    r / value.abs().max(1.0)
}

fn spectral_contracts() -> Result<Outcome, String> {
    let start = Instant::now();
    let s = EigenSettings::default();
    let (mut worst_err, mut worst_res, mut worst_dot) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let mut rng = common::rng(40_000 + seed);
        let n = rng.gen_range(2..=64);
        let p = rng.gen_range(0.05..0.9);
        let g = common::random_graph(&mut rng, n, p);
        let c = common::random_coloring(&mut rng, n);
        let e = |x: fairdsg::Error| format!("seed {seed}: {x}");

        let (a_vals, _) = common::jacobi_eigen(common::dense_adjacency(&g));
        let (b_vals, _) = common::jacobi_eigen(common::dense_projected(&g, &c));

        let top = dominant_eigenpair(&g, &s).map_err(e)?;
        let second = second_eigenvalue(&g, &top, &s).map_err(e)?;
        let bottom = smallest_eigenpair(&g, &s).map_err(e)?;
        let lambda_n = bottom.value;

        let op = ProjectedOperator::new(&g, &c).map_err(e)?;
        let hat1 = dominant_eigenpair(&op, &s).map_err(e)?;
        let hat2 = second_eigenvalue(&op, &hat1, &s).map_err(e)?;

        let pairs = [
            ("lambda1", top.value, a_vals[0]),
            ("lambda2", second.value, a_vals[1]),
            ("lambda_n", lambda_n, a_vals[n - 1]),
            ("hat1", hat1.value, b_vals[0]),
            ("hat2", hat2.value, b_vals[1]),
        ];
        for (name, got, want) in pairs {
            worst_err = worst_err.max((got - want).abs());
            check((got - want).abs() <= 1e-6, || format!("seed {seed} n {n}: {name} {got} vs {want}"))?;
        }
        for (name, res) in [
            ("lambda1", relative_residual(&g, top.value, &top.vector)),
            ("lambda2", relative_residual(&g, second.value, &second.vector)),
            ("lambda_n", relative_residual(&g, lambda_n, &bottom.vector)),
            ("hat1", relative_residual(&op, hat1.value, &hat1.vector)),
            ("hat2", relative_residual(&op, hat2.value, &hat2.vector)),
        ] {
            worst_res = worst_res.max(res);
            check(res <= 1e-8, || format!("seed {seed}: {name} residual {res:.2e}"))?;
        }
        if hat1.value.abs() > 1e-8 {
            let d = fairness_vector(&c).dot(&hat1.vector).abs();
            worst_dot = worst_dot.max(d);
            check(d <= 1e-6, || format!("seed {seed}: |f.v1| = {d:.2e}"))?;
        }
        check(hat1.value <= top.value + 1e-8, || format!("seed {seed}: hat1 {} > lambda1 {}", hat1.value, top.value))?;
    }
    Ok(within(
        Duration::from_secs(120),
        start,
        format!("100 graphs, max eigenvalue error {worst_err:.1e}, max residual {worst_res:.1e}, max |f.v1| {worst_dot:.1e}"),
    ))
}

fn projected_gap() -> Result<Outcome, String> {
    let start = Instant::now();
    let s = EigenSettings::default();
    let (mut held, mut total, mut worst_slack) = (0, 0, f64::INFINITY);
    for seed in 0..40u64 {
        let mut rng = common::rng(50_000 + seed);
        let n = [200, 300, 400][seed as usize % 3];
        let m = 2 * rng.gen_range(10..=30);
        let d = rng.gen_range(m / 2..m);
        let p_bg = [0.005, 0.01, 0.03][(seed / 3) as usize % 3];
        let params = PlantedParams { n, m, d, eps: 0.1, p_bg, seed };
        let inst = generate_with(&params, &s.clone().with_seed(seed)).map_err(|e| format!("seed {seed}: {e}"))?;
        total += 1;
        if !inst.measured.hypotheses_hold {
            continue;
        }
        held += 1;
        let op = ProjectedOperator::new(&inst.graph, &inst.coloring).map_err(|e| e.to_string())?;
        let hat1 = dominant_eigenpair(&op, &s).map_err(|e| e.to_string())?;
        let hat2 = second_eigenvalue(&op, &hat1, &s).map_err(|e| e.to_string())?.value;
        let bound = 0.75 * inst.measured.lambda1 + 1e-6;
        worst_slack = worst_slack.min(bound - hat2);
        check(hat2 <= bound, || format!("seed {seed}: hat2 {hat2} > 0.75 lambda1 = {bound}"))?;
    }
    check(held > 0, || format!("hypotheses held on none of {total} instances"))?;
    Ok(within(
        Duration::from_secs(60),
        start,
        format!(
            "{held}/{total} instances satisfy the expander check, all within the bound (min slack {worst_slack:.3})"
        ),
    ))
}

fn planted_recovery() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut skipped = 0;
    let mut seed = 0u64;
    while reports.len() < 20 && seed < 60 {
        let params = PlantedParams { n: 2000, m: 200, d: 120, eps: 0.05, p_bg: 0.004, seed };
        let eigen = EigenSettings::default().with_seed(seed);
        let inst = generate_with(&params, &eigen).map_err(|e| format!("seed {seed}: {e}"))?;
        seed += 1;
        if !inst.measured.hypotheses_hold {
            skipped += 1;
            continue;
        }
        let r = recovery_on_instance(&inst, SweepAlgorithm::FSS, DeltaPolicy::Theoretical, &eigen)
            .map_err(|e| format!("seed {}: {e}", params.seed))?;
        reports.push(r);
    }
    check(reports.len() == 20, || format!("only {} of {seed} seeds met the hypotheses", reports.len()))?;
    for r in &reports {
        check(r.distance_sq <= r.distance_bound, || {
            format!("seed {}: |chi - v1|^2 = {} > {}", r.seed, r.distance_sq, r.distance_bound)
        })?;
        check(r.error as f64 <= r.error_bound, || format!("seed {}: error {} > {}", r.seed, r.error, r.error_bound))?;
    }
    let min_dm = reports.iter().map(|r| r.distance_margin()).fold(f64::INFINITY, f64::min);
    let min_em = reports.iter().map(|r| r.error_margin()).fold(f64::INFINITY, f64::min);
    let max_err = reports.iter().map(|r| r.error).max().unwrap_or(0);
    Ok(within(
        Duration::from_secs(600),
        start,
        format!(
            "20 instances (n 2000, m 200, d 120; {skipped} seeds failed the hypotheses), max error {max_err}, \
             min distance margin {min_dm:.4}, min error margin {min_em:.1}"
        ),
    ))
}

fn paired_fairness() -> Result<Outcome, String> {
    let start = Instant::now();
    let cfg = SweepConfig::default();
    let mut infeasible = 0;
    for seed in 0..500u64 {
        let mut rng = common::rng(70_000 + seed);
        let n = rng.gen_range(1..=60);
        let p = rng.gen_range(0.02..0.9);
        let g = common::random_graph(&mut rng, n, p);
        let c = if rng.gen_bool(0.1) { common::coloring(&"R".repeat(n)) } else { common::random_coloring(&mut rng, n) };
        for a in [Algorithm::Ps, Algorithm::Fps] {
            let r = a.run(&g, &c, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
            match r.status {
                Status::Found => check(r.fair, || format!("seed {seed}: {a} returned an unfair set"))?,
                Status::NoFeasiblePrefix => infeasible += 1,
                Status::Unfair => return Err(format!("seed {seed}: {a} reported Unfair")),
            }
        }
    }
    Ok(within(Duration::from_secs(60), start, format!("1000 runs, 0% unfair ({infeasible} without a feasible prefix)")))
}

fn sweep_vs_enumeration() -> Result<Outcome, String> {
    let start = Instant::now();
    let s = EigenSettings::default();
    for seed in 0..200u64 {
        let mut rng = common::rng(80_000 + seed);
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.9);
        let g = common::random_graph(&mut rng, n, p);
        let c = common::random_coloring(&mut rng, n);
        let matrix = if seed % 2 == 0 { Matrix::Projected } else { Matrix::Raw };
        let v = main_eigenvector(&g, &c, matrix, &s).map_err(|e| e.to_string())?;
        let delta = [0.0, 0.25, 1.0][seed as usize % 3];

        let gsa = general_sweep(&g, &c, &v, delta).map_err(|e| e.to_string())?;
        match common::rescan_general(&g, &c, &v, delta) {
            Some((set, d)) => check(gsa.nodes.members() == &set[..] && gsa.density == d, || {
                format!("seed {seed}: general sweep {:?} vs rescan {set:?}", gsa.nodes.members())
            })?,
            None => {
                check(gsa.status == Status::NoFeasiblePrefix, || format!("seed {seed}: expected no feasible prefix"))?
            }
        }
        let ps = paired_sweep(&g, &c, &v).map_err(|e| e.to_string())?;
        match common::rescan_paired(&g, &c, &v) {
            Some((set, d)) => check(ps.nodes.members() == &set[..] && ps.density == d, || {
                format!("seed {seed}: paired sweep {:?} vs rescan {set:?}", ps.nodes.members())
            })?,
            None => check(ps.status == Status::NoFeasiblePrefix, || format!("seed {seed}: expected no feasible pair"))?,
        }
    }
    Ok(within(Duration::from_secs(60), start, "200 graphs, general and paired sweeps equal the rescans".into()))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

/// Every file under `dir`, relative path and bytes, sorted.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn cli_determinism() -> Result<Outcome, String> {
    let inputs = tempfile::tempdir().map_err(|e| e.to_string())?;
    let k4 = inputs.path().join("k4.el");
    fs::write(&k4, "4 2 2\nRRBB\n0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n").map_err(|e| e.to_string())?;
    let mut rng = common::rng(90_000);
    let g = common::random_graph(&mut rng, 60, 0.15);
    let c = common::random_coloring(&mut rng, 60);
    let rand_el = inputs.path().join("random.el");
    fs::write(&rand_el, fairdsg::ingest::edge_list_string(&g, &c).unwrap()).map_err(|e| e.to_string())?;
    let pairs = inputs.path().join("pairs");
    let status = Command::new(env!("CARGO_BIN_EXE_fairdsg"))
        .args(["ingest-amazon", "--input", &fixture("products.jsonl"), "--min-nodes", "5", "--out"])
        .arg(&pairs)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || "could not prepare pair inputs".into())?;
    let (k4, rand_el, pairs) = (k4.display().to_string(), rand_el.display().to_string(), pairs.display().to_string());
    let runs_csv = inputs.path().join("runs.csv").display().to_string();
    let status = Command::new(env!("CARGO_BIN_EXE_fairdsg"))
        .args(["run", "--input", &pairs, "--seed", "5", "--out", &runs_csv])
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || "could not prepare run output".into())?;

    let commands: Vec<Vec<String>> = vec![
        vec!["ingest-polbooks", "--input", &fixture("books.gml"), "--out", "{out}/books.el"],
        vec!["ingest-amazon", "--input", &fixture("products.jsonl"), "--min-nodes", "5", "--out", "{out}/pairs"],
        vec!["run", "--algorithm", "fps", "--input", &k4, "--seed", "1", "--out", "{out}/r.csv"],
        vec![
            "run",
            "--input",
            &pairs,
            "--algorithm",
            "ss,fss,ps,fps,2dfsg,exact",
            "--seed",
            "7",
            "--out",
            "{out}/r.csv",
        ],
        vec![
            "run",
            "--input",
            &rand_el,
            "--algorithm",
            "ss,fss",
            "--delta",
            "0.2",
            "--seed",
            "3",
            "--out",
            "{out}/r.csv",
        ],
        vec!["run", "--input", &rand_el, "--jobs", "2", "--seed", "9", "--out", "{out}/r.csv"],
        vec!["pareto", "--input", &format!("{rand_el},{k4}"), "--seed", "2", "--out", "{out}/p.csv"],
        vec!["summary", "--input", &runs_csv, "--out", "{out}/s.csv"],
        vec!["planted", "--n", "300", "--m", "40", "--d", "30", "--seeds", "3", "--seed", "4", "--out", "{out}/pl.csv"],
        vec![
            "planted",
            "--n",
            "200",
            "--m",
            "20",
            "--d",
            "15",
            "--seeds",
            "2",
            "--seed",
            "8",
            "--algorithm",
            "fps",
            "--instances",
            "{out}/inst",
            "--out",
            "{out}/pl.csv",
        ],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();

    for (i, args) in commands.iter().enumerate() {
        let mut snaps = Vec::new();
        for _ in 0..2 {
            let out = tempfile::tempdir().map_err(|e| e.to_string())?;
            let o = out.path().display().to_string();
            let argv: Vec<String> = args.iter().map(|a| a.replace("{out}", &o)).collect();
            let res = Command::new(env!("CARGO_BIN_EXE_fairdsg"))
                .args(&argv)
                .env_remove("FAIRDSG_SEED")
                .output()
                .map_err(|e| e.to_string())?;
            check(res.status.success(), || {
                format!("command {} failed: {}", i + 1, String::from_utf8_lossy(&res.stderr))
            })?;
            let mut snap = snapshot(out.path());
            snap.push(("<stdout>".into(), res.stdout));
            snaps.push(snap);
        }
        check(snaps[0] == snaps[1], || format!("command {} ({}) differs between runs", i + 1, args[0]))?;
        check(snaps[0].len() > 1, || format!("command {} wrote no files", i + 1))?;
    }
    Ok(Outcome::Pass(format!("{} commands, byte-identical outputs on repeat", commands.len())))
}

fn amazon_comparison() -> Outcome {
    let Some(path) = std::env::var_os("FAIRDSG_AMAZON").map(PathBuf::from) else {
        return Outcome::Unavailable("no Amazon metadata snapshot (set FAIRDSG_AMAZON to a JSON-lines file)".into());
    };
    let file = match fs::File::open(&path) {
        Ok(f) => f,
        Err(e) => return Outcome::Unavailable(format!("{}: {e}", path.display())),
    };
    let run = || -> fairdsg::Result<String> {
        let parsed = parse_amazon_jsonl(std::io::BufReader::new(file))?;
        let products = build_product_graph(&parsed.records)?;
        let pairs = category_pair_subgraphs(&products.graph, &products.categories, 100);
        let sizes = (pairs.iter().map(|p| p.graph.n()).min(), pairs.iter().map(|p| p.graph.n()).max());
        let cfg = SweepConfig::default();
        let mut rows = Vec::new();
        for pair in &pairs {
            let opt = exact_densest_subgraph(&pair.graph)?.density;
            for a in [Algorithm::Ss, Algorithm::Fss, Algorithm::Ps, Algorithm::Fps, Algorithm::TwoDfsg] {
                let r = a.run(&pair.graph, &pair.coloring, &cfg)?;
                let nd = report::normalize_against(&r, opt).unwrap_or(0.0);
                rows.push(report::RunRow::new(&r, &pair.name, &pair.graph, &pair.coloring, nd, 0, false));
            }
        }
        let summary = report::summary(&rows);
        let cells: Vec<String> = summary
            .iter()
            .map(|s| format!("{} {:.2}% unfair, median {:.3}", s.algorithm, s.pct_unfair, s.median))
            .collect();
        Ok(format!("{} pairs (sizes {:?}); {}", pairs.len(), sizes, cells.join("; ")))
    };
    match run() {
        Ok(s) => Outcome::Pass(s),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn lift(r: Result<Outcome, String>) -> Outcome {
    r.unwrap_or_else(Outcome::Fail)
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, bool, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "political books ingestion", true, polbooks_ingestion),
        (2, "flow vs exhaustive densest", true, || lift(flow_vs_oracle())),
        (3, "2-DFSG half approximation", true, || lift(two_dfsg_approximation())),
        (4, "spectral contracts vs dense Jacobi", true, || lift(spectral_contracts())),
        (5, "second projected eigenvalue gap", true, || lift(projected_gap())),
        (6, "planted fair subgraph recovery", true, || lift(planted_recovery())),
        (7, "paired sweeps never unfair", true, || lift(paired_fairness())),
        (8, "sweeps vs exhaustive rescan", true, || lift(sweep_vs_enumeration())),
        (9, "CLI determinism", true, || lift(cli_determinism())),
        (10, "Amazon category pairs (recorded)", false, amazon_comparison),
    ];

    let mut failed = Vec::new();
    for (id, name, gating, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome::Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let line = match &outcome {
            Outcome::Pass(d) => format!("criterion {id:>2} PASS {name}: {d}"),
            Outcome::Fail(d) => format!("criterion {id:>2} FAIL {name}: {d}"),
            Outcome::Unavailable(d) => format!("criterion {id:>2} FAIL {name}: unavailable, {d}"),
        };
        say(&line);
        if gating && matches!(outcome, Outcome::Fail(_)) {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "gating criteria failed: {failed:?}");
}
