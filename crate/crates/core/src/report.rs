//! Result records, Pareto fronts, normalized density and per-algorithm
//! summaries, with their CSV forms.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::flow::{exact_densest_subgraph, two_dfsg, two_dfsg_with_trace};
use crate::graph::{balance_from_counts, is_fair, Coloring, LabeledGraph};
use crate::oracle::{brute_force_densest, OracleConstraint};
use crate::planted::RecoveryReport;
use crate::spectral::EigenSettings;
use crate::sweep::{candidate_trace, run_algorithm, SolutionRecord, Status, SweepAlgorithm, SweepConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats to 9 significant digits, then prints the shortest decimal form
/// of the rounded value.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let out = rounded.to_string();
    if out == "-0" {
        "0".to_string()
    } else {
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ss,
    Fss,
    Ps,
    Fps,
    TwoDfsg,
    Exact,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Ss,
        Algorithm::Fss,
        Algorithm::Ps,
        Algorithm::Fps,
        Algorithm::TwoDfsg,
        Algorithm::Exact,
        Algorithm::Oracle,
    ];

    /// Name used in output files.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ss => "SS",
            Algorithm::Fss => "FSS",
            Algorithm::Ps => "PS",
            Algorithm::Fps => "FPS",
            Algorithm::TwoDfsg => "2-DFSG",
            Algorithm::Exact => "exact",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Name accepted on the command line.
    pub fn flag(self) -> &'static str {
        match self {
            Algorithm::Ss => "ss",
            Algorithm::Fss => "fss",
            Algorithm::Ps => "ps",
            Algorithm::Fps => "fps",
            Algorithm::TwoDfsg => "2dfsg",
            Algorithm::Exact => "exact",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn sweep(self) -> Option<SweepAlgorithm> {
        match self {
            Algorithm::Ss => Some(SweepAlgorithm::SS),
            Algorithm::Fss => Some(SweepAlgorithm::FSS),
            Algorithm::Ps => Some(SweepAlgorithm::PS),
            Algorithm::Fps => Some(SweepAlgorithm::FPS),
            _ => None,
        }
    }

    /// Runs the algorithm. `exact` ignores fairness; `oracle` is the
    /// exhaustive fair optimum and reports `NoFeasiblePrefix` when no
    /// non-empty fair set exists.
    pub fn run(self, g: &LabeledGraph, coloring: &Coloring, cfg: &SweepConfig) -> Result<SolutionRecord> {
        if let Some(sweep) = self.sweep() {
            return run_algorithm(sweep, g, coloring, cfg);
        }
        let start = std::time::Instant::now();
        let record = match self {
            Algorithm::TwoDfsg => two_dfsg(g, coloring)?,
            Algorithm::Exact => {
                let best = exact_densest_subgraph(g)?;
                let fair = is_fair(&best.nodes, coloring);
                let status = if fair { Status::Found } else { Status::Unfair };
                SolutionRecord::from_set(self.name(), g, coloring, best.nodes, status)?
            }
            Algorithm::Oracle => {
                let best = brute_force_densest(g, coloring, OracleConstraint::Fair)?;
                let status = if best.infeasible { Status::NoFeasiblePrefix } else { Status::Found };
                SolutionRecord::from_set(self.name(), g, coloring, best.nodes, status)?
            }
            _ => unreachable!("sweeps handled above"),
        };
        Ok(record.with_runtime(start.elapsed()))
    }

    /// Every `(density, balance, size)` point the algorithm produces on its
    /// way to the answer: sweep prefixes, 2-DFSG padding steps, or the
    /// single optimum.
    pub fn points(self, g: &LabeledGraph, coloring: &Coloring, cfg: &SweepConfig) -> Result<Vec<ParetoPoint>> {
        let point = |(size, density, balance): (usize, f64, f64)| ParetoPoint {
            density,
            balance,
            size,
            algorithm: self.name().to_string(),
        };
        let trace = if let Some(sweep) = self.sweep() {
            candidate_trace(sweep, g, coloring, cfg)?
        } else if self == Algorithm::TwoDfsg {
            two_dfsg_with_trace(g, coloring)?.1
        } else {
            let r = self.run(g, coloring, cfg)?;
            if r.size == 0 {
                Vec::new()
            } else {
                vec![(r.size, r.density, balance_from_counts(r.n_red, r.n_blue))]
            }
        };
        Ok(trace.into_iter().map(point).collect())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.flag() == lower || a.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// Provenance written as `# key: value` lines at the top of every output.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub algorithms: Vec<String>,
    pub delta: Option<f64>,
    pub eigen: EigenSettings,
    pub seed: u64,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, eigen: EigenSettings) -> Self {
        RunManifest {
            command: command.into(),
            inputs: Vec::new(),
            algorithms: Vec::new(),
            delta: None,
            seed: eigen.seed,
            eigen,
            version: VERSION.to_string(),
        }
    }

    pub fn header(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("# {k}: {v}\n"));
        line("tool", format!("fairdsg {}", self.version));
        line("command", self.command.clone());
        line("input", self.inputs.join(","));
        line("algorithm", self.algorithms.join(","));
        line("delta", self.delta.map_or("-".to_string(), fmt_sig));
        line("tol", fmt_sig(self.eigen.tol));
        line("max_iters", self.eigen.max_iters.to_string());
        line("seed", self.seed.to_string());
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPoint {
    pub density: f64,
    pub balance: f64,
    pub size: usize,
    pub algorithm: String,
}

/// Points not dominated in (density, balance), sorted by descending density.
/// Equal (density, balance) pairs keep the smallest size.
pub fn pareto_front(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut sorted: Vec<&ParetoPoint> = points.iter().collect();
    sorted.sort_by(|a, b| {
        b.density
            .total_cmp(&a.density)
            .then(b.balance.total_cmp(&a.balance))
            .then(a.size.cmp(&b.size))
            .then(a.algorithm.cmp(&b.algorithm))
    });
    let mut front: Vec<ParetoPoint> = Vec::new();
    let mut best_balance = f64::NEG_INFINITY;
    for p in sorted {
        if p.balance > best_balance {
            best_balance = p.balance;
            front.push(p.clone());
        }
    }
    front
}

/// Density relative to a known unconstrained optimum; 0 for runs that do not
/// deliver a fair solution.
pub fn normalize_against(record: &SolutionRecord, optimum: f64) -> Result<f64> {
    if !(optimum > 0.0) {
        return Err(Error::ZeroOptimum);
    }
    if record.counts_as_unfair() {
        return Ok(0.0);
    }
    Ok(record.density / optimum)
}

pub fn normalized_density(record: &SolutionRecord, g: &LabeledGraph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::ZeroOptimum);
    }
    normalize_against(record, exact_densest_subgraph(g)?.density)
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct RunRow {
    pub algorithm: String,
    pub instance: String,
    pub n: usize,
    pub n_red: usize,
    pub n_blue: usize,
    pub edges: usize,
    pub sol_size: usize,
    pub sol_red: usize,
    pub sol_blue: usize,
    pub density: f64,
    pub balance: f64,
    pub normalized_density: f64,
    pub fair: bool,
    pub status: Status,
    pub runtime_ms: u64,
    pub seed: u64,
}

pub const RUN_HEADER: [&str; 16] = [
    "algorithm",
    "instance",
    "n",
    "n_red",
    "n_blue",
    "edges",
    "sol_size",
    "sol_red",
    "sol_blue",
    "density",
    "balance",
    "normalized_density",
    "fair",
    "status",
    "runtime_ms",
    "seed",
];

impl RunRow {
    /// `runtime_ms` is taken from the record when `timing` is set and is 0
    /// otherwise, so untimed output is reproducible byte for byte.
    pub fn new(
        record: &SolutionRecord,
        instance: &str,
        g: &LabeledGraph,
        coloring: &Coloring,
        normalized_density: f64,
        seed: u64,
        timing: bool,
    ) -> Self {
        RunRow {
            algorithm: record.algorithm.clone(),
            instance: instance.to_string(),
            n: g.n(),
            n_red: coloring.n_red(),
            n_blue: coloring.n_blue(),
            edges: g.edge_count(),
            sol_size: record.size,
            sol_red: record.n_red,
            sol_blue: record.n_blue,
            density: record.density,
            balance: record.balance,
            normalized_density,
            fair: record.fair,
            status: record.status,
            runtime_ms: if timing { record.runtime.as_millis() as u64 } else { 0 },
            seed,
        }
    }

    pub fn counts_as_unfair(&self) -> bool {
        self.status != Status::Found || !self.fair
    }

    fn fields(&self) -> [String; 16] {
        [
            self.algorithm.clone(),
            self.instance.clone(),
            self.n.to_string(),
            self.n_red.to_string(),
            self.n_blue.to_string(),
            self.edges.to_string(),
            self.sol_size.to_string(),
            self.sol_red.to_string(),
            self.sol_blue.to_string(),
            fmt_sig(self.density),
            fmt_sig(self.balance),
            fmt_sig(self.normalized_density),
            self.fair.to_string(),
            self.status.to_string(),
            self.runtime_ms.to_string(),
            self.seed.to_string(),
        ]
    }
}

fn csv_writer<W: Write>(mut out: W, header: Option<&RunManifest>) -> Result<csv::Writer<W>> {
    if let Some(m) = header {
        out.write_all(m.header().as_bytes())?;
    }
    Ok(csv::WriterBuilder::new().from_writer(out))
}

pub fn write_runs(out: impl Write, manifest: Option<&RunManifest>, rows: &[RunRow]) -> Result<()> {
    let mut w = csv_writer(out, manifest)?;
    w.write_record(RUN_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_runs`]; `#` lines are skipped.
pub fn read_runs(input: impl Read) -> Result<Vec<RunRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(RUN_HEADER) {
        return Err(Error::parse(1, format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>())));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_pareto(out: impl Write, manifest: Option<&RunManifest>, rows: &[(String, ParetoPoint)]) -> Result<()> {
    let mut w = csv_writer(out, manifest)?;
    w.write_record(["instance", "algorithm", "density", "balance", "size"])?;
    for (instance, p) in rows {
        w.write_record([
            instance.clone(),
            p.algorithm.clone(),
            fmt_sig(p.density),
            fmt_sig(p.balance),
            p.size.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_recovery(out: impl Write, manifest: Option<&RunManifest>, reports: &[RecoveryReport]) -> Result<()> {
    let mut w = csv_writer(out, manifest)?;
    w.write_record([
        "seed",
        "n",
        "m",
        "algorithm",
        "d_max",
        "d",
        "theta",
        "eps_measured",
        "lambda1",
        "lambda2",
        "lambda_n",
        "lambda",
        "hypotheses_hold",
        "lambda_hat1",
        "lambda_hat2",
        "delta",
        "recovered_size",
        "error",
        "error_bound",
        "error_margin",
        "distance_sq",
        "distance_bound",
        "distance_margin",
        "threshold_misclassified",
        "vacuous",
        "passed",
    ])?;
    for r in reports {
        let m = &r.measured;
        w.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.algorithm.clone(),
            fmt_sig(m.d_max),
            fmt_sig(m.d),
            fmt_sig(m.theta),
            fmt_sig(m.eps_measured),
            fmt_sig(m.lambda1),
            fmt_sig(m.lambda2),
            fmt_sig(m.lambda_n),
            fmt_sig(m.lambda),
            m.hypotheses_hold.to_string(),
            fmt_sig(r.lambda_hat1),
            fmt_sig(r.lambda_hat2),
            fmt_sig(r.delta),
            r.recovered_size.to_string(),
            r.error.to_string(),
            fmt_sig(r.error_bound),
            fmt_sig(r.error_margin()),
            fmt_sig(r.distance_sq),
            fmt_sig(r.distance_bound),
            fmt_sig(r.distance_margin()),
            r.threshold_misclassified.to_string(),
            r.vacuous.to_string(),
            r.passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub runs: usize,
    pub unfair: usize,
    pub pct_unfair: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub mean: f64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per-algorithm aggregates, in order of first appearance.
pub fn summary(rows: &[RunRow]) -> Vec<AlgorithmSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.algorithm.as_str()) {
            order.push(&r.algorithm);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let mine: Vec<&RunRow> = rows.iter().filter(|r| r.algorithm == name).collect();
            let unfair = mine.iter().filter(|r| r.counts_as_unfair()).count();
            let mut nd: Vec<f64> = mine.iter().map(|r| r.normalized_density).collect();
            nd.sort_by(f64::total_cmp);
            AlgorithmSummary {
                algorithm: name.to_string(),
                runs: mine.len(),
                unfair,
                pct_unfair: 100.0 * unfair as f64 / mine.len() as f64,
                q1: quantile(&nd, 0.25),
                median: quantile(&nd, 0.5),
                q3: quantile(&nd, 0.75),
                mean: nd.iter().sum::<f64>() / nd.len() as f64,
            }
        })
        .collect()
}

pub fn write_summary(out: impl Write, manifest: Option<&RunManifest>, rows: &[AlgorithmSummary]) -> Result<()> {
    let mut w = csv_writer(out, manifest)?;
    w.write_record(["algorithm", "runs", "unfair", "pct_unfair", "nd_q1", "nd_median", "nd_q3", "nd_mean"])?;
    for s in rows {
        w.write_record([
            s.algorithm.clone(),
            s.runs.to_string(),
            s.unfair.to_string(),
            fmt_sig(s.pct_unfair),
            fmt_sig(s.q1),
            fmt_sig(s.median),
            fmt_sig(s.q3),
            fmt_sig(s.mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn summary_table(rows: &[AlgorithmSummary]) -> String {
    let mut out = format!("{:<8} {:>6} {:>9} {:>9} {:>9} {:>9}\n", "algo", "runs", "%unfair", "q1", "median", "q3");
    for s in rows {
        out.push_str(&format!(
            "{:<8} {:>6} {:>9.2} {:>9.4} {:>9.4} {:>9.4}\n",
            s.algorithm, s.runs, s.pct_unfair, s.q1, s.median, s.q3
        ));
    }
    out
}
