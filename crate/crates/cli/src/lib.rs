//! Experiment harness behind the `submax` binary.
//!
//! Every run loads one problem, builds one matroid constraint, runs one
//! method under a fixed seed and writes a result JSON plus a trace CSV.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use submax::baselines::{greedy, lazy_greedy, random_baseline, stochastic_greedy, GreedyRun};
use submax::facility::{exemplar_objective, ExemplarDataset, FacilityInstance};
use submax::influence::{
    coverage_of_graph, erdos_renyi, pathological_instance, preferential_attachment, DirectedGraph,
    IcModel,
};
use submax::optimizer::{maximize, OptimizerConfig, RunTrace, StepRule, TraceRecord};
use submax::pipage::pipage_round;
use submax::rng::{seeded, substream};
use submax::{DiagonalMetric, FractionalPoint, Matroid, WeightedCoverage};

/// Exit status for malformed input or unsupported options.
pub const EXIT_INPUT: i32 = 2;
/// Exit status for constraints that admit no base.
pub const EXIT_INFEASIBLE: i32 = 3;

/// Maps an error chain to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let infeasible = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<submax::Error>(),
            Some(submax::Error::Infeasible(_))
        )
    });
    if infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_INPUT
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "submax",
    version,
    about = "Stochastic submodular maximization benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Projected stochastic subgradient ascent followed by pipage rounding.
    #[command(args_override_self = true)]
    Maximize(RunArgs),
    /// Greedy baselines over exact or sample-average oracles.
    #[command(args_override_self = true)]
    Greedy(RunArgs),
    /// A uniformly random base of the constraint.
    #[command(args_override_self = true)]
    Random(RunArgs),
    /// Project a vector onto the base polytope.
    #[command(args_override_self = true)]
    Project(ProjectArgs),
    /// Pipage-round a fractional point to a base.
    #[command(args_override_self = true)]
    Round(RoundArgs),
    /// Write a synthetic edge list.
    #[command(args_override_self = true)]
    GenGraph(GenGraphArgs),
    /// Run a method on the two-block instance where greedy is suboptimal.
    #[command(args_override_self = true)]
    Pathological(PathologicalArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `result.json` and `trace.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace CSV path; overrides `<out>/trace.csv`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Samples for the final utility estimate.
    #[arg(long, default_value_t = 1000)]
    pub eval_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Flat `key = value` file of flag defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(id = "problem", required = true, multiple = false)]
pub struct ProblemArgs {
    /// Weighted coverage file.
    #[arg(long, group = "problem")]
    pub wcf: Option<PathBuf>,
    /// Edge list for an independent-cascade model.
    #[arg(long, group = "problem")]
    pub graph: Option<PathBuf>,
    /// Facility weight matrix.
    #[arg(long, group = "problem")]
    pub facility: Option<PathBuf>,
    /// Point cloud CSV for exemplar clustering.
    #[arg(long, group = "problem")]
    pub exemplar: Option<PathBuf>,
    /// Built-in two-block instance of size N.
    #[arg(long, group = "problem", value_name = "N")]
    pub pathological: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ConstraintArgs {
    /// Cardinality constraint.
    #[arg(long, conflicts_with = "partition")]
    pub k: Option<usize>,
    /// Partition constraint, e.g. `0-9:1;10-19:2`.
    #[arg(long)]
    pub partition: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum, default_value_t = Variant::Lazy)]
    pub variant: Variant,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1)]
    pub batch: usize,
    /// Step-size multiplier; defaults per rule.
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Average only the second half of the iterates.
    #[arg(long)]
    pub tail_average: bool,
    /// Edge probability for `--graph`.
    #[arg(long, default_value_t = 0.02)]
    pub p: f64,
    /// Stochastic-greedy accuracy.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Frozen samples behind the greedy oracle.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
    #[command(flatten)]
    pub method: MethodArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PathologicalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 20, value_name = "N")]
    pub size: usize,
    #[command(flatten)]
    pub method: MethodArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ProjectArgs {
    /// Comma-separated point.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub y: Vec<f64>,
    /// Comma-separated diagonal metric; identity when omitted.
    #[arg(long, value_delimiter = ',')]
    pub metric: Option<Vec<f64>>,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RoundArgs {
    /// Comma-separated fractional base.
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GenGraphArgs {
    #[arg(long, value_enum, default_value_t = GraphModel::Pa)]
    pub model: GraphModel,
    #[arg(long)]
    pub nodes: usize,
    /// Average out-degree for `er`, edges per new node for `pa`.
    #[arg(long, default_value_t = 3.0)]
    pub degree: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphModel {
    Er,
    Pa,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sgd,
    Adagrad,
    Adam,
    Greedy,
    Lazy,
    StochasticGreedy,
    Random,
}

impl Method {
    pub fn is_continuous(self) -> bool {
        matches!(self, Method::Sgd | Method::Adagrad | Method::Adam)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Lazy,
    Stochastic,
}

impl From<Variant> for Method {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Plain => Method::Greedy,
            Variant::Lazy => Method::Lazy,
            Variant::Stochastic => Method::StochasticGreedy,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Wcf(PathBuf),
    Graph { path: PathBuf, p: f64 },
    Facility(PathBuf),
    Exemplar(PathBuf),
    Pathological(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintSpec {
    Uniform(usize),
    Partition(String),
    /// The problem supplies its own constraint.
    Builtin,
}

/// Everything one run needs.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub constraint: ConstraintSpec,
    pub method: Method,
    pub iterations: usize,
    pub batch_size: usize,
    pub eta0: Option<f64>,
    pub tail_average: bool,
    pub eps: f64,
    pub samples: usize,
    pub eval_samples: usize,
    pub seed: u64,
    pub threads: usize,
    pub out_dir: Option<PathBuf>,
    pub trace_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(problem: Problem, constraint: ConstraintSpec, method: Method) -> Self {
        ExperimentConfig {
            problem,
            constraint,
            method,
            iterations: 1000,
            batch_size: 1,
            eta0: None,
            tail_average: false,
            eps: 0.1,
            samples: 1000,
            eval_samples: 1000,
            seed: 0,
            threads: 1,
            out_dir: None,
            trace_path: None,
        }
    }

    fn from_run_args(args: &RunArgs, method: Method) -> anyhow::Result<Self> {
        let p = &args.problem;
        let problem = if let Some(f) = &p.wcf {
            Problem::Wcf(f.clone())
        } else if let Some(f) = &p.graph {
            Problem::Graph {
                path: f.clone(),
                p: args.method.p,
            }
        } else if let Some(f) = &p.facility {
            Problem::Facility(f.clone())
        } else if let Some(f) = &p.exemplar {
            Problem::Exemplar(f.clone())
        } else if let Some(n) = p.pathological {
            Problem::Pathological(n)
        } else {
            bail!("exactly one problem source is required");
        };
        let constraint = match (&args.constraint.k, &args.constraint.partition) {
            (Some(k), None) => ConstraintSpec::Uniform(*k),
            (None, Some(s)) => ConstraintSpec::Partition(s.clone()),
            _ => ConstraintSpec::Builtin,
        };
        Ok(Self::with_method_args(
            problem,
            constraint,
            method,
            &args.method,
            &args.common,
        ))
    }

    fn with_method_args(
        problem: Problem,
        constraint: ConstraintSpec,
        method: Method,
        m: &MethodArgs,
        common: &CommonArgs,
    ) -> Self {
        ExperimentConfig {
            iterations: m.iterations,
            batch_size: m.batch,
            eta0: m.eta0,
            tail_average: m.tail_average,
            eps: m.eps,
            samples: m.samples,
            eval_samples: common.eval_samples,
            seed: common.seed,
            threads: common.threads,
            out_dir: common.out.clone(),
            trace_path: common.trace.clone(),
            ..Self::new(problem, constraint, method)
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.eval_samples == 0 {
            bail!("--eval-samples must be at least 1");
        }
        if self.threads == 0 {
            bail!("--threads must be at least 1");
        }
        if let Problem::Graph { p, .. } = self.problem {
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1], got {p}");
            }
        }
        if matches!(
            self.method,
            Method::Greedy | Method::Lazy | Method::StochasticGreedy
        ) && self.samples == 0
        {
            bail!("--samples must be at least 1");
        }
        Ok(())
    }

    fn rule(&self) -> StepRule {
        let mut rule = match self.method {
            Method::Adagrad => StepRule::adagrad(),
            Method::Adam => StepRule::adam(),
            _ => StepRule::sgd(),
        };
        if let Some(e) = self.eta0 {
            match &mut rule {
                StepRule::Sgd { eta0 }
                | StepRule::AdaGrad { eta0, .. }
                | StepRule::Adam { eta0, .. } => *eta0 = e,
            }
        }
        rule
    }
}

/// The result JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub set: Vec<usize>,
    pub value_estimate: f64,
    pub iterations: usize,
    pub seed: u64,
    pub method: Method,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: RunResult,
    pub trace: RunTrace,
}

enum Instance {
    Coverage(WeightedCoverage),
    Influence(IcModel),
    Facility(FacilityInstance),
}

impl Instance {
    fn n(&self) -> usize {
        match self {
            Instance::Coverage(f) => f.n_ground(),
            Instance::Influence(m) => m.n_nodes(),
            Instance::Facility(f) => f.n_facilities(),
        }
    }
}

fn load(problem: &Problem) -> anyhow::Result<(Instance, Option<Matroid>)> {
    Ok(match problem {
        Problem::Wcf(path) => (Instance::Coverage(WeightedCoverage::read_file(path)?), None),
        Problem::Graph { path, p } => {
            let g = DirectedGraph::read_edge_list(path)?;
            (Instance::Influence(IcModel::uniform(g, *p)?), None)
        }
        Problem::Facility(path) => (
            Instance::Facility(FacilityInstance::read_matrix(path)?),
            None,
        ),
        Problem::Exemplar(path) => {
            let data = ExemplarDataset::read_csv(path)?;
            let f = exemplar_objective(&data).with_context(|| path.display().to_string())?;
            (Instance::Facility(f), None)
        }
        Problem::Pathological(n) => {
            let (model, c) = pathological_instance(*n)?;
            (Instance::Influence(model), Some(c))
        }
    })
}

fn build_constraint(
    spec: &ConstraintSpec,
    n: usize,
    builtin: Option<Matroid>,
) -> anyhow::Result<Matroid> {
    Ok(match spec {
        ConstraintSpec::Uniform(k) => Matroid::uniform(n, *k)?,
        ConstraintSpec::Partition(s) => Matroid::parse_partition(n, s)?,
        ConstraintSpec::Builtin => {
            builtin.ok_or_else(|| anyhow!("a constraint is required: pass --k or --partition"))?
        }
    })
}

/// Loads, validates, runs and writes artifacts.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    cfg.validate()?;
    let (instance, builtin) = load(&cfg.problem)?;
    let c = build_constraint(&cfg.constraint, instance.n(), builtin)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()?;
    let outcome = pool.install(|| execute(cfg, &instance, &c))?;
    write_artifacts(cfg, &outcome)?;
    Ok(outcome)
}

fn execute(cfg: &ExperimentConfig, instance: &Instance, c: &Matroid) -> anyhow::Result<Outcome> {
    let mut rng = seeded(cfg.seed);
    let start = Instant::now();
    let (set, iterations, trace) = match cfg.method {
        m if m.is_continuous() => {
            let opt = OptimizerConfig {
                rule: cfg.rule(),
                iterations: cfg.iterations,
                batch_size: cfg.batch_size,
                tail_average: cfg.tail_average,
                threads: cfg.threads,
                ..Default::default()
            };
            let sol = match instance {
                Instance::Coverage(f) => maximize(f, c, &opt, &mut rng)?,
                Instance::Facility(f) => maximize(f, c, &opt, &mut rng)?,
                // A point-mass distribution is optimized through its exact coverage form.
                Instance::Influence(model) if model.is_deterministic() => {
                    maximize(&coverage_of_graph(model.graph())?, c, &opt, &mut rng)?
                }
                Instance::Influence(model) => maximize(model, c, &opt, &mut rng)?,
            };
            (sol.selected, cfg.iterations, sol.trace)
        }
        Method::Random => {
            let set = random_baseline(c, &mut rng);
            (set, 0, RunTrace::new())
        }
        method => {
            let run = match instance {
                Instance::Coverage(f) => run_greedy(f, c, method, cfg.eps, &mut rng)?,
                Instance::Facility(f) => run_greedy(f, c, method, cfg.eps, &mut rng)?,
                Instance::Influence(model) => {
                    let oracle = if model.is_deterministic() {
                        coverage_of_graph(model.graph())?
                    } else {
                        model.sample_average_oracle(cfg.samples, &mut rng)?
                    };
                    run_greedy(&oracle, c, method, cfg.eps, &mut rng)?
                }
            };
            let trace = greedy_trace(&run)?;
            (run.selected(), run.order.len(), trace)
        }
    };
    let mut eval_rng = substream(cfg.seed, u64::MAX, 0);
    let value_estimate = match instance {
        Instance::Coverage(f) => f.eval_set(&set)?,
        Instance::Facility(f) => f.facility_value(&set)?,
        Instance::Influence(model) => {
            model.estimate_influence(&set, cfg.eval_samples, &mut eval_rng)?
        }
    };
    let trace = if cfg.method == Method::Random {
        let mut t = RunTrace::new();
        t.push(record(0, 0.0, 0.0))?;
        t.push(record(1, start.elapsed().as_secs_f64(), value_estimate))?;
        t
    } else {
        trace
    };
    Ok(Outcome {
        result: RunResult {
            set,
            value_estimate,
            iterations,
            seed: cfg.seed,
            method: cfg.method,
        },
        trace,
    })
}

fn record(iteration: usize, seconds: f64, utility: f64) -> TraceRecord {
    TraceRecord {
        iteration,
        seconds,
        utility,
        snapshot: None,
    }
}

fn run_greedy<O: submax::baselines::SetOracle>(
    oracle: &O,
    c: &Matroid,
    method: Method,
    eps: f64,
    rng: &mut submax::rng::SeededRng,
) -> submax::Result<GreedyRun> {
    match method {
        Method::Greedy => greedy(oracle, c),
        Method::Lazy => lazy_greedy(oracle, c),
        _ => stochastic_greedy(oracle, c, eps, rng),
    }
}

fn greedy_trace(run: &GreedyRun) -> submax::Result<RunTrace> {
    let mut t = RunTrace::new();
    t.push(record(0, 0.0, 0.0))?;
    for (i, (v, s)) in run.prefix_values.iter().zip(&run.step_seconds).enumerate() {
        t.push(record(i + 1, *s, *v))?;
    }
    Ok(t)
}

fn write_artifacts(cfg: &ExperimentConfig, outcome: &Outcome) -> anyhow::Result<()> {
    if let Some(dir) = &cfg.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(
            &dir.join("result.json"),
            outcome.result.to_json().as_bytes(),
        )?;
    }
    let trace_path = cfg
        .trace_path
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(|d| d.join("trace.csv")));
    if let Some(path) = trace_path {
        let mut buf = Vec::new();
        outcome.trace.write_csv(&mut buf)?;
        write_file(&path, &buf)?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Reads a flat `key = value` file. `#` starts a comment.
pub fn parse_config(text: &str, origin: &str) -> anyhow::Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{origin}:{}: expected `key = value`", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            bail!("{origin}:{}: empty key", i + 1);
        }
        pairs.push((key, v.trim().to_string()));
    }
    Ok(pairs)
}

/// Splices `--config` file entries in front of the explicit flags so that
/// flags given on the command line win.
pub fn expand_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut config = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| anyhow!("--config needs a path"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
    let mut injected = Vec::new();
    for (k, v) in parse_config(&text, &path)? {
        match v.as_str() {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => {
                injected.push(format!("--{k}"));
                injected.push(v);
            }
        }
    }
    // Program name and subcommand stay in front.
    let head = rest.len().min(2);
    let mut out: Vec<String> = rest[..head].to_vec();
    out.extend(injected);
    out.extend_from_slice(&rest[head..]);
    Ok(out)
}

fn matroid_for(spec: &ConstraintArgs, n: usize) -> anyhow::Result<Matroid> {
    let spec = match (&spec.k, &spec.partition) {
        (Some(k), None) => ConstraintSpec::Uniform(*k),
        (None, Some(s)) => ConstraintSpec::Partition(s.clone()),
        _ => ConstraintSpec::Builtin,
    };
    build_constraint(&spec, n, None)
}

/// Runs a parsed command line and returns what to print on stdout.
pub fn dispatch(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Maximize(args) => {
            let method = args.method.method.unwrap_or(Method::Sgd);
            if !method.is_continuous() {
                bail!("maximize runs sgd, adagrad or adam, not {method}");
            }
            run_to_json(&ExperimentConfig::from_run_args(&args, method)?)
        }
        Command::Greedy(args) => {
            let method = Method::from(args.method.variant);
            run_to_json(&ExperimentConfig::from_run_args(&args, method)?)
        }
        Command::Random(args) => {
            run_to_json(&ExperimentConfig::from_run_args(&args, Method::Random)?)
        }
        Command::Pathological(args) => {
            let method = args.method.method.unwrap_or(Method::Sgd);
            let cfg = ExperimentConfig::with_method_args(
                Problem::Pathological(args.size),
                ConstraintSpec::Builtin,
                method,
                &args.method,
                &args.common,
            );
            run_to_json(&cfg)
        }
        Command::Project(args) => {
            let c = matroid_for(&args.constraint, args.y.len())?;
            let metric = match args.metric {
                Some(m) => DiagonalMetric::new(m)?,
                None => DiagonalMetric::identity(args.y.len()),
            };
            let x = c.project(&args.y, &metric)?;
            Ok(serde_json::to_string(x.as_slice())?)
        }
        Command::Round(args) => {
            let c = matroid_for(&args.constraint, args.x.len())?;
            let x = FractionalPoint::new(args.x)?;
            let r = pipage_round(&x, &c, &mut seeded(args.seed))?;
            Ok(serde_json::to_string(
                &serde_json::json!({ "set": r.selected }),
            )?)
        }
        Command::GenGraph(args) => {
            let mut rng = seeded(args.seed);
            let g = match args.model {
                GraphModel::Er => erdos_renyi(args.nodes, args.degree, &mut rng),
                GraphModel::Pa => {
                    if args.degree < 1.0 || args.degree.fract() != 0.0 {
                        bail!("--degree must be a positive integer for pa");
                    }
                    preferential_attachment(args.nodes, args.degree as usize, &mut rng)
                }
            };
            let text = g.to_edge_list();
            match &args.out {
                Some(path) => {
                    write_file(path, text.as_bytes())?;
                    Ok(format!(
                        "wrote {} nodes, {} edges to {}",
                        g.n_nodes(),
                        g.n_edges(),
                        path.display()
                    ))
                }
                None => Ok(text),
            }
        }
    }
}

fn run_to_json(cfg: &ExperimentConfig) -> anyhow::Result<String> {
    Ok(run_experiment(cfg)?.result.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let pairs = parse_config(
            "# sweep\nseed = 7\neval_samples=20 # inline\n\ntail-average = true\n",
            "c",
        )
        .unwrap();
        assert_eq!(
            pairs,
            vec![
                ("seed".into(), "7".into()),
                ("eval-samples".into(), "20".into()),
                ("tail-average".into(), "true".into())
            ]
        );
        let err = parse_config("seed 7\n", "c.cfg").unwrap_err();
        assert_eq!(err.to_string(), "c.cfg:1: expected `key = value`");
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "seed = 7\nk = 3\ntail_average = true\n").unwrap();
        let argv: Vec<String> = [
            "submax",
            "maximize",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "9",
            "--wcf",
            "f",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let cli = Cli::try_parse_from(expand_config(argv).unwrap()).unwrap();
        let Command::Maximize(args) = cli.command else {
            panic!()
        };
        assert_eq!(args.common.seed, 9);
        assert_eq!(args.constraint.k, Some(3));
        assert!(args.method.tail_average);
    }

    #[test]
    fn exactly_one_problem() {
        assert!(Cli::try_parse_from(["submax", "random", "--k", "2"]).is_err());
        assert!(Cli::try_parse_from([
            "submax", "random", "--k", "2", "--wcf", "a", "--graph", "b"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["submax", "random", "--k", "2", "--wcf", "a"]).is_ok());
    }

    #[test]
    fn exit_codes() {
        let e = anyhow::Error::from(submax::Error::Infeasible("k > n".into())).context("run");
        assert_eq!(exit_code(&e), EXIT_INFEASIBLE);
        assert_eq!(exit_code(&anyhow!("bad flag")), EXIT_INPUT);
    }

    #[test]
    fn method_names() {
        assert_eq!(Method::StochasticGreedy.to_string(), "stochastic-greedy");
        assert_eq!(serde_json::to_string(&Method::Sgd).unwrap(), "\"sgd\"");
    }
}
