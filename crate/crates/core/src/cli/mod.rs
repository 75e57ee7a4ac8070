//! Command-line interface: argument parsing, config-file merging, report
//! assembly, and the exit-code contract.
//!
//! Exit codes: 0 on success, 1 for computational or data failures (a
//! machine-readable error document goes to stdout), 2 for usage problems
//! (bad flags, malformed rules, unknown config keys). Reports and plot
//! data go to stdout; diagnostics go to stderr. Output never depends on
//! clock, locale, or environment, so identical invocations produce
//! identical bytes.

mod config;
mod dataset;
mod report;

pub use dataset::{read_dataset, Dataset, Level};
pub use report::{
    fmt_float, to_canonical_json, CapabilityAssessment, ErrorDocument, Inputs, LevelDecision,
    LevelInterval, McCheck, ReportDocument, SCHEMA_VERSION,
};

use crate::tolerance::IntervalMethod;
use crate::{capability, mcoracle, reconcile, tolerance};
use crate::{Error, Probability};
use clap::{Args, Parser, Subcommand};
use config::FileConfig;
use std::path::PathBuf;

/// Decision-rule toolkit for analytical method risk management.
#[derive(Debug, Parser)]
#[command(name = "methodrisk", version, about)]
struct Cli {
    /// Flat key=value configuration file; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace the capability boundary sigma*(bias) as CSV plot data.
    Region(RegionArgs),
    /// Tabulate a rule's operating characteristic as CSV plot data.
    Oc(OcArgs),
    /// Derive the required per-run quality from a rule and reconcile it
    /// with capability and pre-study evidence in one JSON report.
    Reconcile(ReconcileArgs),
    /// Assess a validation dataset against acceptance limits.
    Validate(ValidateArgs),
    /// Run seeded Monte Carlo cross-checks against the analytic results.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// Acceptance half-width, percent of target.
    #[arg(long)]
    lambda: Option<f64>,
    /// Required capability level; repeat the flag for several curves.
    #[arg(long)]
    beta: Vec<f64>,
    /// Lowest bias in the grid [default: -lambda].
    #[arg(long, allow_negative_numbers = true)]
    min: Option<f64>,
    /// Highest bias in the grid [default: lambda].
    #[arg(long, allow_negative_numbers = true)]
    max: Option<f64>,
    /// Number of evenly spaced grid points [default: 101].
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Args)]
struct OcArgs {
    /// Acceptance rule, k-m-lambda[:constrained[2,2,...]].
    #[arg(long)]
    rule: Option<String>,
    /// Explicit per-run pass probabilities; repeatable, excludes the grid
    /// flags.
    #[arg(long)]
    p: Vec<f64>,
    /// Lowest per-run pass probability in the grid [default: 0].
    #[arg(long)]
    min: Option<f64>,
    /// Highest per-run pass probability in the grid [default: 1].
    #[arg(long)]
    max: Option<f64>,
    /// Number of evenly spaced grid points [default: 101].
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Args)]
struct ReconcileArgs {
    /// Acceptance rule, k-m-lambda[:constrained[2,2,...]].
    #[arg(long)]
    rule: Option<String>,
    /// Consumer protection level for the OC inversion [default: 0.9].
    #[arg(long, alias = "target")]
    gamma: Option<f64>,
    /// Round the required quality up to this granularity (e.g. 0.05).
    #[arg(long)]
    granularity: Option<f64>,
    /// Acceptance half-width; must equal the rule's lambda when given.
    #[arg(long)]
    lambda: Option<f64>,
    /// Validation dataset (CSV) for tolerance-interval evidence.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Interval construction: 'oneway' or 'simple' [default: oneway].
    #[arg(long, alias = "mode")]
    method: Option<String>,
    /// Known bias, to assess a parameter point instead of a dataset.
    #[arg(long, allow_negative_numbers = true)]
    bias: Option<f64>,
    /// Known standard deviation for the parameter point.
    #[arg(long)]
    sigma: Option<f64>,
    /// Lowest per-run quality in the risk table [default: 0.5].
    #[arg(long)]
    min: Option<f64>,
    /// Highest per-run quality in the risk table [default: 1].
    #[arg(long)]
    max: Option<f64>,
    /// Rows in the risk table [default: 26].
    #[arg(long)]
    points: Option<usize>,
    /// Draws per Monte Carlo cross-check [default: 100000].
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo stream id [default: 0].
    #[arg(long)]
    stream: Option<u64>,
    /// Worker threads for Monte Carlo [default: rayon's choice].
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Validation dataset (CSV).
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Required interval content.
    #[arg(long)]
    beta: Option<f64>,
    /// Acceptance half-width, percent of target.
    #[arg(long)]
    lambda: Option<f64>,
    /// Interval construction: 'oneway' or 'simple' [default: oneway].
    #[arg(long, alias = "mode")]
    method: Option<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Bias of the capability point, and of the coverage generating
    /// process [default for coverage: 0].
    #[arg(long, allow_negative_numbers = true)]
    bias: Option<f64>,
    /// Standard deviation of the capability point to check.
    #[arg(long)]
    sigma: Option<f64>,
    /// Acceptance half-width; defaults to the rule's lambda when a rule
    /// is given.
    #[arg(long)]
    lambda: Option<f64>,
    /// Acceptance rule whose OC to check.
    #[arg(long)]
    rule: Option<String>,
    /// Per-run pass probability for the OC check.
    #[arg(long)]
    p: Option<f64>,
    /// Between-series standard deviation of the coverage generating
    /// process.
    #[arg(long)]
    sd_between: Option<f64>,
    /// Within-series standard deviation of the coverage generating
    /// process.
    #[arg(long)]
    sd_within: Option<f64>,
    /// Series count per simulated coverage dataset.
    #[arg(long)]
    series: Option<usize>,
    /// Replicates per series in the coverage experiment.
    #[arg(long)]
    replicates: Option<usize>,
    /// Target interval content for the coverage experiment.
    #[arg(long)]
    beta: Option<f64>,
    /// Interval construction for coverage: 'oneway' or 'simple'
    /// [default: oneway].
    #[arg(long, alias = "mode")]
    method: Option<String>,
    /// Draws per check [default: 200000].
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo stream id [default: 0].
    #[arg(long)]
    stream: Option<u64>,
    /// Worker threads [default: rayon's choice].
    #[arg(long)]
    workers: Option<usize>,
}

enum Failure {
    Usage(String),
    App(Error),
    /// A Monte Carlo agreement check failed; the report was printed.
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::App(err)
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(Failure::App(err)) => match err {
            // Rule-grammar and size problems are usage-class.
            Error::InvalidRule(_) | Error::TooLarge(_) => {
                eprintln!("error: {err}");
                2
            }
            err => {
                if let Ok(doc) = to_canonical_json(&ErrorDocument::from_error(&err)) {
                    println!("{doc}");
                }
                eprintln!("error: {err}");
                1
            }
        },
        Err(Failure::ChecksFailed) => 1,
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = match cli.config {
        None => FileConfig::default(),
        Some(ref path) => FileConfig::load(path).map_err(Failure::Usage)?,
    };
    match cli.command {
        Command::Region(args) => run_region(args, &cfg),
        Command::Oc(args) => run_oc(args, &cfg),
        Command::Reconcile(args) => run_reconcile(args, &cfg),
        Command::Validate(args) => run_validate(args, &cfg),
        Command::Simulate(args) => run_simulate(args, &cfg),
    }
}

// ---------------------------------------------------------------------------
// Shared flag resolution
// ---------------------------------------------------------------------------

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn cfg_f64(cfg: &FileConfig, key: &str) -> Result<Option<f64>, Failure> {
    cfg.get_f64(key).map_err(Failure::Usage)
}

fn cfg_u64(cfg: &FileConfig, key: &str) -> Result<Option<u64>, Failure> {
    cfg.get_u64(key).map_err(Failure::Usage)
}

fn cfg_usize(cfg: &FileConfig, key: &str) -> Result<Option<usize>, Failure> {
    cfg.get_usize(key).map_err(Failure::Usage)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--{flag} is required (flag or config file)")))
}

fn open_probability(value: f64, flag: &str) -> Result<Probability, Failure> {
    if !(value.is_finite() && value > 0.0 && value < 1.0) {
        return Err(usage(format!(
            "--{flag} must be strictly between 0 and 1, got {value}"
        )));
    }
    Ok(Probability::new(value).expect("validated"))
}

fn positive_lambda(value: f64) -> Result<f64, Failure> {
    if !(value.is_finite() && value > 0.0) {
        return Err(usage(format!(
            "--lambda must be a positive finite real, got {value}"
        )));
    }
    Ok(value)
}

fn parse_rule(raw: &str) -> Result<crate::runrules::Rule, Failure> {
    raw.parse::<crate::runrules::Rule>().map_err(Failure::App)
}

fn parse_method(raw: Option<String>) -> Result<(IntervalMethod, String), Failure> {
    let name = raw.unwrap_or_else(|| "oneway".to_string());
    let method = match name.as_str() {
        "oneway" => IntervalMethod::OneWay,
        "simple" => IntervalMethod::Simple,
        other => {
            return Err(usage(format!(
                "--method must be 'oneway' or 'simple', got '{other}'"
            )));
        }
    };
    Ok((method, name))
}

/// Evenly spaced grid, endpoints included; 0 points is an empty grid.
fn linspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>, Failure> {
    // partial_cmp also rejects NaN endpoints, not just an inverted range.
    if points >= 2 && min.partial_cmp(&max) != Some(std::cmp::Ordering::Less) {
        return Err(usage(format!(
            "--min must be below --max for a grid of {points} points, got {min}..{max}"
        )));
    }
    Ok(match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let span = max - min;
            let last = (points - 1) as f64;
            (0..points).map(|i| min + span * i as f64 / last).collect()
        }
    })
}

/// Runs `body` on a dedicated rayon pool when a worker count was asked
/// for. Estimates do not depend on the pool, only wall time does.
fn with_workers<T>(workers: Option<usize>, body: impl FnOnce() -> T + Send) -> Result<T, Failure>
where
    T: Send,
{
    match workers {
        None => Ok(body()),
        Some(0) => Err(usage("--workers must be at least 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| usage(format!("cannot build a {w}-thread pool: {e}")))?;
            Ok(pool.install(body))
        }
    }
}

fn stream_base(stream: u64) -> Result<u64, Failure> {
    // Leave room for the per-check offsets added below.
    if stream > u64::from(u32::MAX) - 64 {
        return Err(usage(format!(
            "--stream must be below 2^32 - 64, got {stream}"
        )));
    }
    Ok(stream)
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

fn run_region(args: RegionArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let lambda = positive_lambda(require(args.lambda.or(cfg_f64(cfg, "lambda")?), "lambda")?)?;
    let beta_values = if args.beta.is_empty() {
        vec![require(cfg_f64(cfg, "beta")?, "beta")?]
    } else {
        args.beta
    };
    let betas = beta_values
        .into_iter()
        .map(|b| open_probability(b, "beta"))
        .collect::<Result<Vec<_>, _>>()?;
    let min = args.min.or(cfg_f64(cfg, "min")?).unwrap_or(-lambda);
    let max = args.max.or(cfg_f64(cfg, "max")?).unwrap_or(lambda);
    let points = args.points.or(cfg_usize(cfg, "points")?).unwrap_or(101);

    let grid = linspace(min, max, points)?;
    let mut out = String::from("beta,bias,sigma_boundary\n");
    for beta in betas {
        for &bias in &grid {
            let sigma =
                capability::region_boundary_sigma(bias, lambda, beta).map_err(Failure::App)?;
            out.push_str(&fmt_float(beta.value()));
            out.push(',');
            out.push_str(&fmt_float(bias));
            out.push(',');
            if let Some(sigma) = sigma {
                out.push_str(&fmt_float(sigma));
            }
            out.push('\n');
        }
    }
    print!("{out}");
    Ok(())
}

// ---------------------------------------------------------------------------
// oc
// ---------------------------------------------------------------------------

fn run_oc(args: OcArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let rule = parse_rule(&require(args.rule.or(cfg.get_string("rule")), "rule")?)?;
    let rows: Vec<(f64, f64)> = if args.p.is_empty() {
        let min = args.min.or(cfg_f64(cfg, "min")?).unwrap_or(0.0);
        let max = args.max.or(cfg_f64(cfg, "max")?).unwrap_or(1.0);
        let points = args.points.or(cfg_usize(cfg, "points")?).unwrap_or(101);
        if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) {
            return Err(usage(format!(
                "--min and --max must lie in [0, 1], got {min}..{max}"
            )));
        }
        let grid = linspace(min, max, points)?;
        rule.oc_curve(&grid)
            .map_err(Failure::App)?
            .into_iter()
            .map(|(p, oc)| (p, oc.value()))
            .collect()
    } else {
        // Explicit points are evaluated in the order given.
        if args.min.is_some() || args.max.is_some() || args.points.is_some() {
            return Err(usage(
                "give either explicit --p values or a --min/--max/--points grid",
            ));
        }
        args.p
            .into_iter()
            .map(|p| {
                if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                    return Err(usage(format!("--p must lie in [0, 1], got {p}")));
                }
                Ok((p, rule.oc(p).map_err(Failure::App)?.value()))
            })
            .collect::<Result<_, Failure>>()?
    };

    let mut out = String::from("p,accept_prob\n");
    for (p, oc) in rows {
        out.push_str(&fmt_float(p));
        out.push(',');
        out.push_str(&fmt_float(oc));
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

// ---------------------------------------------------------------------------
// reconcile
// ---------------------------------------------------------------------------

struct LevelAnalysis {
    capability: CapabilityAssessment,
    interval: LevelInterval,
    decision: LevelDecision,
}

fn analyze_level(
    label: &str,
    groups: &[Vec<f64>],
    method: IntervalMethod,
    beta: Probability,
    lambda: f64,
) -> Result<LevelAnalysis, Error> {
    let components = tolerance::estimate_components(groups)?;
    let interval = tolerance::beta_expectation_interval(groups, method, beta)?;
    let accepted = tolerance::prestudy_accepts(&interval, lambda)?;
    let sigma_ip = components.var_intermediate.sqrt();
    let plug_in = mcoracle::plug_in_content(components.bias, sigma_ip, lambda, None)?.plug_in;
    let capability = capability_row(
        Some(label.to_string()),
        components.bias,
        sigma_ip,
        beta,
        lambda,
    )?;
    Ok(LevelAnalysis {
        capability,
        interval: LevelInterval {
            level: label.to_string(),
            components,
            interval,
            plug_in_content: plug_in,
        },
        decision: LevelDecision {
            level: label.to_string(),
            lambda,
            lower: interval.lower,
            upper: interval.upper,
            accepted,
        },
    })
}

fn capability_row(
    level: Option<String>,
    bias: f64,
    sigma: f64,
    beta: Probability,
    lambda: f64,
) -> Result<CapabilityAssessment, Error> {
    let probability = capability::prob_within(bias, sigma, lambda)?.value();
    let boundary = capability::region_boundary_sigma(bias, lambda, beta)?;
    Ok(CapabilityAssessment {
        level,
        bias,
        sigma,
        beta: beta.value(),
        probability,
        capable: probability >= beta.value(),
        boundary_sigma: boundary,
        margin: boundary.map(|b| b - sigma),
    })
}

fn run_reconcile(args: ReconcileArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let rule_text = require(args.rule.or(cfg.get_string("rule")), "rule")?;
    let rule = parse_rule(&rule_text)?;
    let lambda_flag = args.lambda.or(cfg_f64(cfg, "lambda")?);
    if let Some(l) = lambda_flag {
        positive_lambda(l)?;
    }
    let lambda = reconcile::resolve_lambda(&rule, lambda_flag).map_err(Failure::App)?;
    let gamma = open_probability(
        args.gamma.or(cfg_f64(cfg, "gamma")?).unwrap_or(0.90),
        "gamma",
    )?;
    let granularity = args.granularity.or(cfg_f64(cfg, "granularity")?);
    if let Some(g) = granularity {
        if !(g.is_finite() && g > 0.0 && g < 1.0) {
            return Err(usage(format!(
                "--granularity must be strictly between 0 and 1, got {g}"
            )));
        }
    }
    let (method, method_name) = parse_method(args.method.or(cfg.get_string("method")))?;
    let dataset_path = args
        .dataset
        .or(cfg.get_string("dataset").map(PathBuf::from));
    let bias = args.bias.or(cfg_f64(cfg, "bias")?);
    let sigma = args.sigma.or(cfg_f64(cfg, "sigma")?);
    let min = args.min.or(cfg_f64(cfg, "min")?).unwrap_or(0.5);
    let max = args.max.or(cfg_f64(cfg, "max")?).unwrap_or(1.0);
    let points = args.points.or(cfg_usize(cfg, "points")?).unwrap_or(26);
    let n = args.n.or(cfg_u64(cfg, "n")?).unwrap_or(100_000);
    let seed = args.seed.or(cfg_u64(cfg, "seed")?).unwrap_or(0);
    let stream = stream_base(args.stream.or(cfg_u64(cfg, "stream")?).unwrap_or(0))?;
    let workers = args.workers.or(cfg_usize(cfg, "workers")?);
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) {
        return Err(usage(format!(
            "--min and --max must lie in [0, 1], got {min}..{max}"
        )));
    }
    if bias.is_some() != sigma.is_some() {
        return Err(usage("--bias and --sigma must be provided together"));
    }

    let required = reconcile::required_beta(&rule, gamma, granularity).map_err(Failure::App)?;
    let beta_eff = Probability::new(required.effective).map_err(Failure::App)?;

    let grid = linspace(min, max, points)?;
    let oc_table = reconcile::risk_table(&rule, &grid, required.effective).map_err(Failure::App)?;

    let mut capability_rows = Vec::new();
    let mut intervals = Vec::new();
    let mut decisions = Vec::new();
    if let Some(ref path) = dataset_path {
        let ds = read_dataset(path).map_err(Failure::App)?;
        for level in &ds.levels {
            let analysis = analyze_level(&level.label, &level.groups, method, beta_eff, lambda)
                .map_err(Failure::App)?;
            capability_rows.push(analysis.capability);
            intervals.push(analysis.interval);
            decisions.push(analysis.decision);
        }
    }
    if let (Some(b), Some(s)) = (bias, sigma) {
        capability_rows.push(capability_row(None, b, s, beta_eff, lambda).map_err(Failure::App)?);
    }

    let checks = with_workers(workers, || -> Result<Vec<McCheck>, Error> {
        let mut checks = Vec::new();
        let oc_mc = mcoracle::rule_oc_mc(&rule, required.effective, n, seed, stream)?;
        let oc_analytic = rule.oc(required.effective)?.value();
        checks.push(McCheck::new(
            "oc-at-required",
            seed,
            stream,
            oc_mc,
            oc_analytic,
        ));
        for (i, row) in capability_rows.iter().enumerate() {
            let check_stream = stream + 1 + i as u64;
            let mc = mcoracle::capability_mc(row.bias, row.sigma, lambda, n, seed, check_stream)?;
            let name = match &row.level {
                Some(level) => format!("capability-{level}"),
                None => "capability-point".to_string(),
            };
            checks.push(McCheck::new(name, seed, check_stream, mc, row.probability));
        }
        Ok(checks)
    })?
    .map_err(Failure::App)?;

    let document = ReportDocument {
        schema_version: SCHEMA_VERSION,
        inputs: Inputs {
            command: "reconcile".to_string(),
            rule: Some(rule.to_string()),
            lambda: Some(lambda),
            gamma: Some(gamma.value()),
            granularity,
            method: Some(method_name),
            dataset: dataset_path.map(|p| p.display().to_string()),
            bias,
            sigma,
            n: Some(n),
            seed: Some(seed),
            stream: Some(stream),
            ..Inputs::default()
        },
        required_beta: Some(required),
        capability: (!capability_rows.is_empty()).then_some(capability_rows),
        tolerance_interval: (!intervals.is_empty()).then_some(intervals),
        prestudy_decision: (!decisions.is_empty()).then_some(decisions),
        oc_table: Some(oc_table),
        mc_crosschecks: Some(checks),
    };
    println!("{}", to_canonical_json(&document).map_err(Failure::App)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn run_validate(args: ValidateArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let dataset_path = require(
        args.dataset
            .or(cfg.get_string("dataset").map(PathBuf::from)),
        "dataset",
    )?;
    let beta = open_probability(
        require(args.beta.or(cfg_f64(cfg, "beta")?), "beta")?,
        "beta",
    )?;
    let lambda = positive_lambda(require(args.lambda.or(cfg_f64(cfg, "lambda")?), "lambda")?)?;
    let (method, method_name) = parse_method(args.method.or(cfg.get_string("method")))?;

    let ds = read_dataset(&dataset_path).map_err(Failure::App)?;
    let mut capability_rows = Vec::new();
    let mut intervals = Vec::new();
    let mut decisions = Vec::new();
    for level in &ds.levels {
        let analysis = analyze_level(&level.label, &level.groups, method, beta, lambda)
            .map_err(Failure::App)?;
        capability_rows.push(analysis.capability);
        intervals.push(analysis.interval);
        decisions.push(analysis.decision);
    }

    let document = ReportDocument {
        schema_version: SCHEMA_VERSION,
        inputs: Inputs {
            command: "validate".to_string(),
            lambda: Some(lambda),
            beta: Some(beta.value()),
            method: Some(method_name),
            dataset: Some(dataset_path.display().to_string()),
            ..Inputs::default()
        },
        required_beta: None,
        capability: Some(capability_rows),
        tolerance_interval: Some(intervals),
        prestudy_decision: Some(decisions),
        oc_table: None,
        mc_crosschecks: None,
    };
    println!("{}", to_canonical_json(&document).map_err(Failure::App)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Coverage checks compare the mean interval content to the target
/// content. The construction is only asymptotically exact for the one-way
/// layout (estimated weights in the variance pooling), so the gate is the
/// documented calibration band rather than a standard-error multiple.
const COVERAGE_BAND: f64 = 0.01;

fn run_simulate(args: SimulateArgs, cfg: &FileConfig) -> Result<(), Failure> {
    let rule_text = args.rule.or(cfg.get_string("rule"));
    let rule = rule_text.as_deref().map(parse_rule).transpose()?;
    let p = args.p.or(cfg_f64(cfg, "p")?);
    let bias = args.bias.or(cfg_f64(cfg, "bias")?);
    let sigma = args.sigma.or(cfg_f64(cfg, "sigma")?);
    let lambda_flag = args.lambda.or(cfg_f64(cfg, "lambda")?);
    if let Some(l) = lambda_flag {
        positive_lambda(l)?;
    }
    let lambda = match (&rule, lambda_flag) {
        (Some(rule), flag) => Some(reconcile::resolve_lambda(rule, flag).map_err(Failure::App)?),
        (None, flag) => flag,
    };
    let sd_between = args.sd_between.or(cfg_f64(cfg, "sd-between")?);
    let sd_within = args.sd_within.or(cfg_f64(cfg, "sd-within")?);
    let series = args.series.or(cfg_usize(cfg, "series")?);
    let replicates = args.replicates.or(cfg_usize(cfg, "replicates")?);
    let beta = args.beta.or(cfg_f64(cfg, "beta")?);
    let n = args.n.or(cfg_u64(cfg, "n")?).unwrap_or(200_000);
    let seed = args.seed.or(cfg_u64(cfg, "seed")?).unwrap_or(0);
    let stream = stream_base(args.stream.or(cfg_u64(cfg, "stream")?).unwrap_or(0))?;
    let workers = args.workers.or(cfg_usize(cfg, "workers")?);
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }

    let coverage_requested = sd_between.is_some()
        || sd_within.is_some()
        || series.is_some()
        || replicates.is_some()
        || beta.is_some();
    let coverage_point = if coverage_requested {
        let config = mcoracle::CoverageConfig {
            bias: bias.unwrap_or(0.0),
            sd_between: require(sd_between, "sd-between")?,
            sd_within: require(sd_within, "sd-within")?,
            n_series: require(series, "series")?,
            n_replicates: require(replicates, "replicates")?,
        };
        let beta = open_probability(require(beta, "beta")?, "beta")?;
        let (method, method_name) = parse_method(args.method.or(cfg.get_string("method")))?;
        Some((config, method, method_name, beta))
    } else {
        None
    };

    let capability_point = match (bias, sigma) {
        (Some(b), Some(s)) => {
            let lambda = lambda.ok_or_else(|| {
                usage("--lambda (or a rule that carries one) is required for a capability check")
            })?;
            Some((b, s, lambda))
        }
        (_, None) if coverage_requested => None,
        (None, None) => None,
        (Some(_), None) => return Err(usage("--bias and --sigma must be provided together")),
        (None, Some(_)) => return Err(usage("--bias and --sigma must be provided together")),
    };
    let oc_point = match (&rule, p) {
        (Some(rule), Some(p)) => {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(usage(format!("--p must lie in [0, 1], got {p}")));
            }
            Some((rule.clone(), p))
        }
        (Some(_), None) => {
            return Err(usage(
                "--p is required when a rule is given (the OC point to check)",
            ));
        }
        (None, Some(_)) => {
            return Err(usage("--p needs --rule (the OC curve it refers to)"));
        }
        (None, None) => None,
    };
    if capability_point.is_none() && oc_point.is_none() && coverage_point.is_none() {
        return Err(usage(
            "nothing to simulate: provide --bias/--sigma/--lambda for a capability check, \
             --rule/--p for an OC check, or --sd-between/--sd-within/--series/--replicates/--beta \
             for a coverage check",
        ));
    }

    let coverage_echo = coverage_point
        .as_ref()
        .map(|(c, _, name, b)| (c.bias, *c, name.clone(), b.value()));
    let checks = with_workers(workers, || -> Result<Vec<McCheck>, Error> {
        let mut checks = Vec::new();
        if let Some((bias, sigma, lambda)) = capability_point {
            let mc = mcoracle::capability_mc(bias, sigma, lambda, n, seed, stream)?;
            let analytic = capability::prob_within(bias, sigma, lambda)?.value();
            checks.push(McCheck::new("capability", seed, stream, mc, analytic));
        }
        if let Some((rule, p)) = oc_point {
            let check_stream = stream + 1;
            let mc = mcoracle::rule_oc_mc(&rule, p, n, seed, check_stream)?;
            let analytic = rule.oc(p)?.value();
            checks.push(McCheck::new("oc", seed, check_stream, mc, analytic));
        }
        if let Some((config, method, _, beta)) = coverage_point {
            let check_stream = stream + 2;
            let est = mcoracle::coverage_mc(config, method, beta, n, seed, check_stream)?;
            checks.push(McCheck::with_tolerance(
                "coverage",
                seed,
                check_stream,
                est.n_sim,
                est.mean_content,
                est.se,
                beta.value(),
                COVERAGE_BAND,
            ));
        }
        Ok(checks)
    })?
    .map_err(Failure::App)?;

    let all_pass = checks.iter().all(|c| c.pass);
    let (echo_bias, echo_config, echo_method, echo_beta) = match coverage_echo {
        Some((b, c, name, beta)) => (Some(b), Some(c), Some(name), Some(beta)),
        None => (bias, None, None, None),
    };
    let document = ReportDocument {
        schema_version: SCHEMA_VERSION,
        inputs: Inputs {
            command: "simulate".to_string(),
            rule: rule.as_ref().map(|r| r.to_string()),
            lambda,
            beta: echo_beta,
            method: echo_method,
            bias: echo_bias,
            sigma,
            p,
            sd_between: echo_config.map(|c| c.sd_between),
            sd_within: echo_config.map(|c| c.sd_within),
            series: echo_config.map(|c| c.n_series as u64),
            replicates: echo_config.map(|c| c.n_replicates as u64),
            n: Some(n),
            seed: Some(seed),
            stream: Some(stream),
            ..Inputs::default()
        },
        required_beta: None,
        capability: None,
        tolerance_interval: None,
        prestudy_decision: None,
        oc_table: None,
        mc_crosschecks: Some(checks),
    };
    println!("{}", to_canonical_json(&document).map_err(Failure::App)?);
    if all_pass {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
