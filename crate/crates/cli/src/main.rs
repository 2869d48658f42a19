use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfactor::bounds::{BoundTable, Provider, Regime};
use dfactor::counting::EngineKind;
use dfactor::graph_core::GraphKey;
use dfactor::oracle::{self, DEFAULT_STATE_BUDGET};
use dfactor::regular_gen::{pairing_sample, DEFAULT_RESTART_BUDGET};
use dfactor::samplers::{Algorithm, Sampler, SamplerConfig};
use dfactor::{load_instance, solver, Error, HostInstance, RngStream};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dfactor", version, about = "Sample d-factors of a host graph given by its forbidden edges")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw factors and print them as edge lists.
    Sample(SampleArgs),
    /// Run exhaustive and statistical checks on a small instance.
    Verify(VerifyArgs),
    /// Time samplers over a range of n; prints CSV.
    Bench(BenchArgs),
    /// Solve the FactorUniform parameter system and print the table.
    SolveParams(SolveArgs),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Instance file: JSON {"n", "d", "forbidden": [[u, v], ...]}, or a plain
    /// edge list of forbidden pairs (needs --n and --d).
    #[arg(long, value_name = "FILE")]
    forbidden: Option<PathBuf>,
    /// Number of vertices (generated instance, or with an edge-list file).
    #[arg(long)]
    n: Option<usize>,
    /// Factor degree; overrides the value in a JSON instance file.
    #[arg(long)]
    d: Option<usize>,
    /// Degree of the random regular forbidden graph for generated instances.
    #[arg(long, default_value_t = 0)]
    delta: usize,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    #[arg(long, value_enum, default_value_t = AlgArg::Approx)]
    algorithm: AlgArg,
    #[arg(long = "bound-provider", value_enum, default_value_t = ProviderArg::Analytic)]
    provider: ProviderArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Cached)]
    engine: EngineArg,
    /// Initial draws allowed per output.
    #[arg(long, default_value_t = DEFAULT_RESTART_BUDGET)]
    restart_budget: u64,
    /// Switching steps per attempt [default: 1000 (i1 + 1)].
    #[arg(long)]
    step_budget: Option<u64>,
    /// FactorApprox proposals per step.
    #[arg(long, default_value_t = 10_000_000)]
    proposal_budget: u64,
    /// Backtracking nodes for enumeration (oracle provider, verify suites).
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: u64,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            algorithm: self.algorithm.into(),
            provider: self.provider.into(),
            engine: self.engine.into(),
            restart_budget: self.restart_budget,
            step_budget: self.step_budget,
            proposal_budget: self.proposal_budget,
            state_budget: self.state_budget,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write factors here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write the telemetry JSON here instead of stderr.
    #[arg(long)]
    telemetry: Option<PathBuf>,
    /// Parallel independent trajectories.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Samples for the uniformity suite.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "approx")]
    algorithms: Vec<AlgArg>,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    delta: usize,
    /// Samples per (n, algorithm).
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = EngineArg::Cached)]
    engine: EngineArg,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long = "bound-provider", value_enum, default_value_t = ProviderArg::Analytic)]
    provider: ProviderArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: u64,
    /// csv: decimal table; json: exact rationals plus the validation report.
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Easy,
    Uniform,
    Approx,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Easy => Algorithm::Easy,
            AlgArg::Uniform => Algorithm::Uniform,
            AlgArg::Approx => Algorithm::Approx,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Analytic,
    Oracle,
}

impl From<ProviderArg> for Provider {
    fn from(p: ProviderArg) -> Self {
        match p {
            ProviderArg::Analytic => Provider::Analytic,
            ProviderArg::Oracle => Provider::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Naive,
    Cached,
}

impl From<EngineArg> for EngineKind {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Naive => EngineKind::Naive,
            EngineArg::Cached => EngineKind::Cached,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Expectation,
    Bijection,
    Sandwich,
    Uniformity,
    SolverFixedPoint,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed")]
    Verify,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify => 1,
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExhausted { .. } => 3,
                Error::BoundGuard { .. } | Error::SolverInvariantViolated { .. } => 4,
                Error::InvalidMove | Error::NoValidMove | Error::WrongVariant | Error::UnknownOutcome => 1,
                _ => 2,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Stream for generating the forbidden graph; sample streams start at 0.
const INSTANCE_STREAM: u64 = u64::MAX;

fn load(args: &InstanceArgs, seed: u64) -> Result<HostInstance> {
    match &args.forbidden {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            if text.trim_start().starts_with('{') {
                let h = HostInstance::from_json_str(&text)?;
                if args.n.is_some_and(|n| n != h.n()) {
                    return Err(CliError::Input(format!("--n disagrees with n = {} in {}", h.n(), path.display())));
                }
                Ok(match args.d {
                    Some(d) if d != h.d() => h.with_d(d)?,
                    _ => h,
                })
            } else {
                let (Some(n), Some(d)) = (args.n, args.d) else {
                    return Err(CliError::Input("an edge-list file needs --n and --d".into()));
                };
                Ok(HostInstance::from_edge_list_str(n, d, &text)?)
            }
        }
        None => {
            let (Some(n), Some(d)) = (args.n, args.d) else {
                return Err(CliError::Input("give --forbidden FILE, or --n and --d (with optional --delta)".into()));
            };
            generated(n, d, args.delta, seed)
        }
    }
}

fn generated(n: usize, d: usize, delta: usize, seed: u64) -> Result<HostInstance> {
    let forbidden = if delta == 0 {
        Vec::new()
    } else {
        if delta >= n || n * delta % 2 == 1 {
            return Err(CliError::Input(format!("no {delta}-regular forbidden graph on {n} vertices")));
        }
        pairing_sample(n, delta, &mut RngStream::new(seed, INSTANCE_STREAM))?
    };
    Ok(load_instance(n, d, &forbidden)?)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Core(e.into())
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let host = load(&a.instance, a.seed)?;
    let sampler = Sampler::new(&host, a.sampler.config())?;
    let batch = sampler.sample_map(a.seed, a.samples, a.jobs, |g| g.edges())?;
    let mut out = open_out(&a.output)?;
    match a.format {
        Format::Text => {
            for (k, edges) in batch.outputs.iter().enumerate() {
                if k > 0 {
                    writeln!(out).map_err(io)?;
                }
                for (u, v) in edges {
                    writeln!(out, "{u} {v}").map_err(io)?;
                }
            }
        }
        Format::Json => {
            let all: Vec<Vec<[u32; 2]>> = batch.outputs.iter().map(|e| e.iter().map(|&(u, v)| [u, v]).collect()).collect();
            writeln!(out, "{}", serde_json::to_string(&all).map_err(Error::from)?).map_err(io)?;
        }
    }
    out.flush().map_err(io)?;
    let mut total = batch.total.clone();
    total.wall_ms = (total.wall_ms * 1e3).round() / 1e3;
    let tel = json!({
        "algorithm": sampler.config().algorithm.name(),
        "n": host.n(),
        "d": host.d(),
        "delta": host.delta(),
        "i1": sampler.i1(),
        "seed": a.seed,
        "restart_fraction": total.restart_fraction(),
        "telemetry": total,
    });
    match &a.telemetry {
        Some(p) => fs::write(p, format!("{tel:#}\n")).map_err(io)?,
        None => eprintln!("{tel}"),
    }
    Ok(())
}

struct SuiteResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run_suite(suite: Suite, host: &HostInstance, a: &VerifyArgs) -> Result<SuiteResult> {
    let budget = a.sampler.state_budget;
    Ok(match suite {
        Suite::Expectation => {
            let r = oracle::expectation_check(host, budget)?;
            SuiteResult {
                name: "expectation",
                pass: r.pass,
                detail: format!("{} graphs, mean red edges {} (expected {})", r.graphs, r.mean, r.expected),
            }
        }
        Suite::Bijection => {
            let r = oracle::bijection_check(host, budget)?;
            let bad: Vec<String> =
                r.rows.iter().filter(|x| !x.mismatches.is_empty()).map(|x| format!("{}: {}", x.class, x.mismatches.len())).collect();
            let moves: u128 = r.rows.iter().map(|x| x.moves).sum();
            SuiteResult { name: "bijection", pass: r.pass(), detail: format!("{moves} forward moves; mismatches {bad:?}") }
        }
        Suite::Sandwich => {
            let r = oracle::sandwich_check(host, budget)?;
            SuiteResult {
                name: "sandwich",
                pass: r.pass(),
                detail: format!("{} comparisons, {} skipped; violations {:?}", r.comparisons, r.skipped, r.violations),
            }
        }
        Suite::Uniformity => {
            let support: Vec<GraphKey> =
                oracle::enumerate_d_factors(host, budget)?.iter().map(|e| GraphKey::from_edges(host.n(), e)).collect();
            if support.is_empty() {
                return Err(Error::BudgetExhausted { what: "no d-factor exists".into(), budget: 0 }.into());
            }
            let sampler = Sampler::new(host, a.sampler.config())?;
            let batch = sampler.sample_map(a.seed, a.samples, None, |g| g.key())?;
            let r = oracle::uniformity_test(&batch.outputs, &support, a.seed)?;
            SuiteResult { name: "uniformity", pass: r.p_value >= 1e-3, detail: r.text() }
        }
        Suite::SolverFixedPoint => {
            let t = BoundTable::analytic(host, Regime::Uniform)?;
            let p = solver::solve_parameters(&t)?;
            let fixed = solver::fixed_point_residuals(&p, &t);
            let v = solver::validate_parameters(&p, &t, host);
            SuiteResult {
                name: "solver-fixed-point",
                pass: fixed.is_empty() && v.pass(),
                detail: format!("i1 {}, {} checks; residuals {fixed:?}; failures {:?}", t.i1, v.checks, v.failures),
            }
        }
        Suite::All => unreachable!("expanded by the caller"),
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let host = load(&a.instance, a.seed)?;
    let suites = match a.suite {
        Suite::All => vec![Suite::Expectation, Suite::Bijection, Suite::Sandwich, Suite::Uniformity, Suite::SolverFixedPoint],
        s => vec![s],
    };
    let mut all_pass = true;
    let mut rows = Vec::new();
    for s in suites {
        let r = match run_suite(s, &host, &a) {
            // a single named suite reports its own error; `all` skips suites the instance cannot run
            Err(CliError::Core(Error::NotRegularComplement | Error::BoundGuard { .. } | Error::SolverInvariantViolated { .. }))
                if a.suite == Suite::All =>
            {
                continue;
            }
            r => r?,
        };
        all_pass &= r.pass;
        match a.format {
            Format::Text => println!("{}: {} {}", r.name, if r.pass { "PASS" } else { "FAIL" }, r.detail),
            Format::Json => rows.push(json!({"suite": r.name, "pass": r.pass, "detail": r.detail})),
        }
    }
    if a.format == Format::Json {
        println!("{}", serde_json::Value::Array(rows));
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    println!("algorithm,n,d,delta,samples,mean_ms,median_ms,max_ms,restarts");
    for &n in &a.ns {
        let host = generated(n, a.d, a.delta, a.seed)?;
        for &alg in &a.algorithms {
            let cfg = SamplerConfig { engine: a.engine.into(), ..SamplerConfig::new(alg.into()) };
            let sampler = Sampler::new(&host, cfg)?;
            let batch = sampler.sample_map(a.seed, a.samples, a.jobs, |_| ())?;
            let mut ms: Vec<f64> = batch.per_sample.iter().map(|t| t.wall_ms).collect();
            ms.sort_by(f64::total_cmp);
            let mean = ms.iter().sum::<f64>() / ms.len().max(1) as f64;
            let median = if ms.is_empty() { 0.0 } else { ms[ms.len() / 2] };
            let max = ms.last().copied().unwrap_or(0.0);
            println!(
                "{},{n},{},{},{},{mean:.3},{median:.3},{max:.3},{}",
                sampler.config().algorithm.name(),
                a.d,
                a.delta,
                a.samples,
                batch.total.restarts
            );
        }
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let host = load(&a.instance, a.seed)?;
    let table = match a.provider {
        ProviderArg::Analytic => BoundTable::analytic(&host, Regime::Uniform)?,
        ProviderArg::Oracle => oracle::oracle_bound_table(&host, Regime::Uniform, a.state_budget)?,
    };
    let params = solver::solve_parameters(&table)?;
    match a.format {
        TableFormat::Csv => print!("{}", params.to_csv()),
        TableFormat::Json => {
            let report = solver::validate_parameters(&params, &table, &host);
            println!("{}", json!({ "parameters": params, "validation": report }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::SolveParams(a) => cmd_solve(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verify) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
