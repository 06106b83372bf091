use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use fairdsg::flow::exact_densest_subgraph;
use fairdsg::ingest::{
    self, build_product_graph, category_pair_subgraphs, parse_amazon_jsonl, parse_gml, polbooks_graph,
};
use fairdsg::planted::{generate_with, recovery_on_instance, DeltaPolicy, PlantedParams};
use fairdsg::report::{self, fmt_sig, pareto_front, Algorithm, RunManifest, RunRow};
use fairdsg::spectral::EigenSettings;
use fairdsg::sweep::SweepConfig;
use fairdsg::{Coloring, Error, LabeledGraph};

#[derive(Parser)]
#[command(name = "fairdsg", version, about = "Fair densest subgraph discovery on 2-colored graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Solver {
    /// Eigensolver relative residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Seed for every random choice; falls back to FAIRDSG_SEED.
    #[arg(long, env = "FAIRDSG_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record wall-clock runtimes (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

impl Solver {
    fn eigen(&self) -> EigenSettings {
        EigenSettings { tol: self.tol, max_iters: self.max_iters, seed: self.seed, shift: None }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Convert a political books GML file into the edge-list format.
    IngestPolbooks {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract category-pair subgraphs from Amazon metadata JSON lines.
    IngestAmazon {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        min_nodes: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run algorithms on edge-list files or directories of them.
    Run {
        #[arg(long, value_delimiter = ',', required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "ss,fss,ps,fps,2dfsg")]
        algorithm: Vec<Algorithm>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planted fair dense subgraph recovery experiment.
    Planted {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        m: usize,
        #[arg(long, default_value_t = 40)]
        d: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.004)]
        p_bg: f64,
        /// Number of instances; instance i uses seed + i.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value = "fss")]
        algorithm: Algorithm,
        /// Fixed imbalance allowance; defaults to 16(eps + theta) per instance.
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Also write every instance as an edge-list file into this directory.
        #[arg(long)]
        instances: Option<PathBuf>,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pareto fronts in (density, balance) of every set each algorithm examines.
    Pareto {
        #[arg(long, value_delimiter = ',', required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "ss,fss,ps,fps,2dfsg")]
        algorithm: Vec<Algorithm>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-algorithm normalized density quartiles and unfair percentages.
    Summary {
        #[arg(long, value_delimiter = ',', required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display()))),
        None => Ok(io::stdout().write_all(bytes)?),
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Failure::Data(e.to_string()))
}

fn path_list(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

/// Files named directly, plus the `.el` files of named directories in name order.
fn instances(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)?
                .map(|e| e.map(|e| e.path()))
                .collect::<io::Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| p.extension().is_some_and(|x| x == "el"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

fn load(path: &Path) -> CliResult<(String, LabeledGraph, Coloring)> {
    let (g, c) = ingest::read_edge_list(BufReader::new(open(path)?))
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, g, c))
}

fn ingest_polbooks(input: &Path, out: Option<&Path>) -> CliResult {
    let text = fs::read_to_string(input).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
    let books = polbooks_graph(&parse_gml(&text)?)?;
    let mut manifest = RunManifest::new("ingest-polbooks", EigenSettings::default());
    manifest.inputs = vec![input.display().to_string()];
    let mut bytes = manifest.header().into_bytes();
    ingest::write_edge_list(&books.graph, &books.coloring, &mut bytes)?;
    emit(out, &bytes)?;
    eprintln!(
        "nodes {} edges {} red {} blue {} neutral dropped {}",
        books.graph.n(),
        books.graph.edge_count(),
        books.conservative,
        books.liberal,
        books.neutral
    );
    Ok(())
}

fn ingest_amazon(input: &Path, min_nodes: usize, out: &Path, jobs: usize) -> CliResult {
    if min_nodes == 0 {
        return Err(Failure::Usage("--min-nodes must be at least 1".into()));
    }
    let parsed = parse_amazon_jsonl(BufReader::new(open(input)?))?;
    let products = build_product_graph(&parsed.records)?;
    let pairs = pool(jobs)?.install(|| category_pair_subgraphs(&products.graph, &products.categories, min_nodes));
    fs::create_dir_all(out)?;

    let mut manifest = RunManifest::new("ingest-amazon", EigenSettings::default());
    manifest.inputs = vec![input.display().to_string()];
    let mut index = manifest.header().into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut index);
        let csv_err = |e: csv::Error| Failure::Data(e.to_string());
        w.write_record(["file", "name", "red_category", "blue_category", "n", "n_red", "n_blue", "edges"])
            .map_err(csv_err)?;
        for (i, pair) in pairs.iter().enumerate() {
            let file = format!("pair_{i:04}.el");
            let mut bytes = Vec::new();
            ingest::write_edge_list(&pair.graph, &pair.coloring, &mut bytes)?;
            fs::write(out.join(&file), bytes)?;
            w.write_record([
                file,
                pair.name.clone(),
                pair.red_category.clone(),
                pair.blue_category.clone(),
                pair.graph.n().to_string(),
                pair.coloring.n_red().to_string(),
                pair.coloring.n_blue().to_string(),
                pair.graph.edge_count().to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
    }
    fs::write(out.join("pairs.csv"), index)?;
    eprintln!(
        "records {} skipped {} products {} edges {} dangling {} pairs {}",
        parsed.records.len(),
        parsed.skipped,
        products.graph.n(),
        products.graph.edge_count(),
        products.stats.dangling_references,
        pairs.len()
    );
    Ok(())
}

fn sweep_config(delta: f64, solver: &Solver) -> CliResult<SweepConfig> {
    if !(delta >= 0.0) {
        return Err(Failure::Usage(format!("--delta must be non-negative, got {delta}")));
    }
    Ok(SweepConfig { delta, eigen: solver.eigen(), ..SweepConfig::default() })
}

fn run(inputs: &[PathBuf], algorithms: &[Algorithm], delta: f64, solver: &Solver, out: Option<&Path>) -> CliResult {
    let cfg = sweep_config(delta, solver)?;
    let files = instances(inputs)?;
    let per_instance: Vec<CliResult<Vec<RunRow>>> = pool(solver.jobs)?.install(|| {
        files
            .par_iter()
            .map(|path| {
                let (name, g, c) = load(path)?;
                let optimum = if g.n() == 0 { 0.0 } else { exact_densest_subgraph(&g)?.density };
                algorithms
                    .iter()
                    .map(|a| {
                        let record = a.run(&g, &c, &cfg)?;
                        let nd = report::normalize_against(&record, optimum).unwrap_or(0.0);
                        Ok(RunRow::new(&record, &name, &g, &c, nd, solver.seed, solver.timing))
                    })
                    .collect()
            })
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_instance {
        rows.extend(r?);
    }
    let mut manifest = RunManifest::new("run", solver.eigen());
    manifest.inputs = path_list(inputs);
    manifest.algorithms = algorithms.iter().map(|a| a.name().to_string()).collect();
    manifest.delta = Some(delta);
    let mut bytes = Vec::new();
    report::write_runs(&mut bytes, Some(&manifest), &rows)?;
    emit(out, &bytes)
}

#[allow(clippy::too_many_arguments)]
fn planted(
    params: PlantedParams,
    seeds: u64,
    algorithm: Algorithm,
    delta: Option<f64>,
    instances_dir: Option<&Path>,
    solver: &Solver,
    out: Option<&Path>,
) -> CliResult {
    let sweep = algorithm
        .sweep()
        .ok_or_else(|| Failure::Usage(format!("planted needs a sweep algorithm, got {}", algorithm.flag())))?;
    let policy = match delta {
        Some(d) if !(d >= 0.0) => return Err(Failure::Usage(format!("--delta must be non-negative, got {d}"))),
        Some(d) => DeltaPolicy::Fixed(d),
        None => DeltaPolicy::Theoretical,
    };
    params.validate()?;
    if let Some(dir) = instances_dir {
        fs::create_dir_all(dir)?;
    }
    let results: Vec<CliResult<_>> = pool(solver.jobs)?.install(|| {
        (0..seeds)
            .into_par_iter()
            .map(|i| {
                let p = PlantedParams { seed: solver.seed.wrapping_add(i), ..params };
                let eigen = EigenSettings { seed: p.seed, ..solver.eigen() };
                let instance = generate_with(&p, &eigen)?;
                if let Some(dir) = instances_dir {
                    let mut bytes = Vec::new();
                    ingest::write_edge_list(&instance.graph, &instance.coloring, &mut bytes)?;
                    fs::write(dir.join(format!("planted_{}.el", p.seed)), bytes)?;
                }
                Ok(recovery_on_instance(&instance, sweep, policy, &eigen)?)
            })
            .collect()
    });
    let reports = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    let mut manifest = RunManifest::new(
        format!(
            "planted n={} m={} d={} eps={} p_bg={} seeds={}",
            params.n,
            params.m,
            params.d,
            fmt_sig(params.eps),
            fmt_sig(params.p_bg),
            seeds
        ),
        solver.eigen(),
    );
    manifest.algorithms = vec![algorithm.name().to_string()];
    manifest.delta = delta;
    let mut bytes = Vec::new();
    report::write_recovery(&mut bytes, Some(&manifest), &reports)?;
    emit(out, &bytes)?;
    let held = reports.iter().filter(|r| !r.vacuous).count();
    let passed = reports.iter().filter(|r| !r.vacuous && r.passed).count();
    eprintln!("instances {} hypotheses hold {} bounds met {}", reports.len(), held, passed);
    Ok(())
}

fn pareto(inputs: &[PathBuf], algorithms: &[Algorithm], delta: f64, solver: &Solver, out: Option<&Path>) -> CliResult {
    let cfg = sweep_config(delta, solver)?;
    let files = instances(inputs)?;
    let per_instance: Vec<CliResult<Vec<(String, report::ParetoPoint)>>> = pool(solver.jobs)?.install(|| {
        files
            .par_iter()
            .map(|path| {
                let (name, g, c) = load(path)?;
                let mut rows = Vec::new();
                for a in algorithms {
                    for p in pareto_front(&a.points(&g, &c, &cfg)?) {
                        rows.push((name.clone(), p));
                    }
                }
                Ok(rows)
            })
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_instance {
        rows.extend(r?);
    }
    let mut manifest = RunManifest::new("pareto", solver.eigen());
    manifest.inputs = path_list(inputs);
    manifest.algorithms = algorithms.iter().map(|a| a.name().to_string()).collect();
    manifest.delta = Some(delta);
    let mut bytes = Vec::new();
    report::write_pareto(&mut bytes, Some(&manifest), &rows)?;
    emit(out, &bytes)
}

fn summary(inputs: &[PathBuf], out: Option<&Path>) -> CliResult {
    let mut rows = Vec::new();
    for path in inputs {
        rows.extend(report::read_runs(open(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?);
    }
    let stats = report::summary(&rows);
    let mut manifest = RunManifest::new("summary", EigenSettings::default());
    manifest.inputs = path_list(inputs);
    let mut bytes = Vec::new();
    report::write_summary(&mut bytes, Some(&manifest), &stats)?;
    match out {
        Some(path) => {
            emit(Some(path), &bytes)?;
            print!("{}", report::summary_table(&stats));
            Ok(())
        }
        None => emit(None, &bytes),
    }
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::IngestPolbooks { input, out } => ingest_polbooks(&input, out.as_deref()),
        Command::IngestAmazon { input, min_nodes, out, jobs } => ingest_amazon(&input, min_nodes, &out, jobs),
        Command::Run { input, algorithm, delta, solver, out } => {
            run(&input, &algorithm, delta, &solver, out.as_deref())
        }
        Command::Planted { n, m, d, eps, p_bg, seeds, algorithm, delta, instances, solver, out } => planted(
            PlantedParams { n, m, d, eps, p_bg, seed: solver.seed },
            seeds,
            algorithm,
            delta,
            instances.as_deref(),
            &solver,
            out.as_deref(),
        ),
        Command::Pareto { input, algorithm, delta, solver, out } => {
            pareto(&input, &algorithm, delta, &solver, out.as_deref())
        }
        Command::Summary { input, out } => summary(&input, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
