//! `biaslab`: generate instances, run present-biased agents and walks,
//! sweep bias grids and run the verification suite.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 a bound failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use biaslab::agent::{run_agent, AgentConfig, Consistency};
use biaslab::analysis::bound_report;
use biaslab::evaluators::{EvaluatorSpec, Restriction};
use biaslab::exact::{int, parse_rational, Rational};
use biaslab::taskgraph::{akerlof_graph, biased_walk, random_dag};
use biaslab::verify::{injected_violation, run_suite, Suite};
use biaslab::{instances, io, Bias, Objective};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "biaslab", version, about = "Present-biased agents on combinatorial tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance or task graph as JSON.
    Generate(GenerateArgs),
    /// Run the agent on an instance and check every bound.
    Run(RunArgs),
    /// Walk a task graph.
    Walk(WalkArgs),
    /// Run the agent over a grid of beta and alpha values, writing CSV.
    Sweep(SweepArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Isc,
    Superfluous,
    Gk,
    KnapsackFamily,
    RandomCover,
    RandomHitting,
    RandomIndependentSet,
    RandomKnapsack,
    Akerlof,
    RandomDag,
}

#[derive(Args)]
struct GenerateArgs {
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Integer base for `gk` and `knapsack-family`.
    #[arg(long)]
    beta: Option<String>,
    /// Per-step arc weight for `akerlof`.
    #[arg(long)]
    x: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sets.
    #[arg(long)]
    m: Option<usize>,
    /// Largest set size.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 9)]
    wmax: u64,
    #[arg(long, default_value_t = 9)]
    lmax: u64,
    /// Arc or edge probability in percent.
    #[arg(long, default_value_t = 40)]
    percent: u32,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvaluatorArg {
    Exact,
    Adversarial,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Trace,
    Report,
    Both,
    None,
}

#[derive(Args)]
struct AgentArgs {
    /// Present bias as `p/q` or an integer.
    #[arg(long)]
    beta: String,
    /// Must agree with the instance when given.
    #[arg(long)]
    objective: Option<String>,
    #[arg(long, default_value = "1")]
    alpha: String,
    /// `none`, `minimal` or `maximal`; defaults to the objective's usual one.
    #[arg(long)]
    restriction: Option<String>,
    #[arg(long, default_value = "free")]
    consistency: String,
    /// Defaults to exact when alpha is one, adversarial otherwise.
    #[arg(long, value_enum)]
    evaluator: Option<EvaluatorArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    instance: PathBuf,
    #[command(flatten)]
    agent: AgentArgs,
    #[arg(long, value_enum, default_value_t = Emit::Both)]
    emit: Emit,
    /// Directory for `<trace-id>.trace.json` and `<trace-id>.report.json`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct WalkArgs {
    dag: PathBuf,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value = "min")]
    objective: String,
    /// Where to write the walk JSON; stdout gets only the summary.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    instance: PathBuf,
    /// Comma-separated rationals; empty for a header-only file.
    #[arg(long)]
    beta_grid: String,
    #[arg(long, default_value = "1")]
    alpha_grid: String,
    #[arg(long)]
    restriction: Option<String>,
    #[arg(long, default_value = "free")]
    consistency: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    suite: String,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    #[arg(long, hide = true)]
    inject_violation: bool,
}

/// A bound failed; carries the summary already printed.
#[derive(Debug)]
struct Violation;

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("a bound failed")
    }
}

impl std::error::Error for Violation {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Run(a) => run(&a),
        Command::Walk(a) => walk(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Verify(a) => verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Violation>() => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn need<T>(value: Option<T>, flag: &str) -> anyhow::Result<T> {
    value.with_context(|| format!("--{flag} is required for this kind"))
}

fn integer_base(text: Option<&str>) -> anyhow::Result<u64> {
    let r = parse_rational(need(text, "beta")?)?;
    if !r.is_integer() || r < int(1) {
        bail!("--beta must be a positive integer here, got {r}");
    }
    r.to_integer().try_into().context("--beta too large")
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn generate(a: &GenerateArgs) -> anyhow::Result<()> {
    let dag = match a.kind {
        Kind::Akerlof => Some(akerlof_graph(need(a.n, "n")?, need(a.x, "x")?, need(a.c, "c")?)?),
        Kind::RandomDag => Some(random_dag(a.seed, need(a.n, "n")?, a.percent, a.wmax)?),
        _ => None,
    };
    if let Some(dag) = dag {
        write(&a.out, &io::dag_to_json(&dag)?)?;
        println!("vertices={} arcs={}", dag.n(), dag.arcs().len());
        return Ok(());
    }
    let inst = match a.kind {
        Kind::Isc => instances::isc(need(a.n, "n")?, need(a.c, "c")?)?,
        Kind::Superfluous => instances::superfluous_cover(need(a.n, "n")?, need(a.c, "c")?)?,
        Kind::Gk => instances::gk(need(a.k, "k")?, integer_base(a.beta.as_deref())?)?,
        Kind::KnapsackFamily => {
            instances::knapsack_family(need(a.k, "k")?, integer_base(a.beta.as_deref())?)?
        }
        Kind::RandomCover => instances::random_d_cover(
            a.seed,
            need(a.n, "n")?,
            need(a.m, "m")?,
            need(a.d, "d")?,
            a.wmax,
        )?,
        Kind::RandomHitting => instances::random_d_hitting(
            a.seed,
            need(a.n, "n")?,
            need(a.m, "m")?,
            need(a.d, "d")?,
            a.wmax,
        )?,
        Kind::RandomIndependentSet => {
            instances::random_independent_set(a.seed, need(a.n, "n")?, a.percent, a.wmax)?
        }
        Kind::RandomKnapsack => instances::random_knapsack(a.seed, need(a.n, "n")?, a.wmax, a.lmax)?,
        Kind::Akerlof | Kind::RandomDag => unreachable!("handled above"),
    };
    write(&a.out, &io::instance_to_json(&inst)?)?;
    println!("digest={}", io::instance_digest(&inst));
    Ok(())
}

fn agent_config(
    objective: Objective,
    beta: Rational,
    alpha: Rational,
    restriction: Option<&str>,
    consistency: &str,
    evaluator: Option<EvaluatorArg>,
    seed: u64,
) -> anyhow::Result<AgentConfig> {
    let evaluator = evaluator.unwrap_or(if alpha == int(1) {
        EvaluatorArg::Exact
    } else {
        EvaluatorArg::Adversarial
    });
    let mut spec = match evaluator {
        EvaluatorArg::Exact => EvaluatorSpec::exact(),
        EvaluatorArg::Adversarial => EvaluatorSpec::adversarial(),
    };
    if let Some(r) = restriction {
        spec = spec.restricted(r.parse::<Restriction>()?);
    }
    Ok(AgentConfig::new(Bias::new(beta, objective, alpha)?)
        .with_evaluator(spec)
        .with_consistency(consistency.parse::<Consistency>()?)
        .with_seed(seed))
}

fn run(a: &RunArgs) -> anyhow::Result<()> {
    let inst = io::instance_from_json(&read(&a.instance)?)?;
    let objective = inst.objective();
    if let Some(o) = &a.agent.objective {
        let wanted: Objective = o.parse()?;
        if wanted != objective {
            bail!("--objective {wanted} does not match the {objective} instance");
        }
    }
    let cfg = agent_config(
        objective,
        parse_rational(&a.agent.beta)?,
        parse_rational(&a.agent.alpha)?,
        a.agent.restriction.as_deref(),
        &a.agent.consistency,
        a.agent.evaluator,
        a.agent.seed,
    )?;
    let trace = run_agent(&inst, &cfg)?;
    let report = bound_report(&trace, &inst)?;
    let id = io::trace_id(&trace);
    if matches!(a.emit, Emit::Trace | Emit::Both) {
        write(&a.out_dir.join(format!("{id}.trace.json")), &io::trace_to_json(&trace)?)?;
    }
    if matches!(a.emit, Emit::Report | Emit::Both) {
        write(&a.out_dir.join(format!("{id}.report.json")), &io::report_to_json(&report)?)?;
    }
    println!(
        "ratio={} steps={} opt={} cost={} bounds={}/{}",
        trace.ratio,
        trace.steps.len(),
        trace.opt,
        trace.final_cost,
        report.passed(),
        report.failed()
    );
    for e in report.applicable().filter(|e| !e.holds) {
        eprintln!("bound {} failed: {}", e.name, e.display.as_deref().unwrap_or(""));
    }
    if report.failed() > 0 {
        return Err(Violation.into());
    }
    Ok(())
}

fn walk(a: &WalkArgs) -> anyhow::Result<()> {
    let dag = io::dag_from_json(&read(&a.dag)?)?;
    let bias = Bias::new(parse_rational(&a.beta)?, a.objective.parse()?, int(1))?;
    let result = biased_walk(&dag, &bias)?;
    let json = serde_json::to_string_pretty(&result)?;
    if let Some(path) = &a.out {
        write(path, &json)?;
    }
    let path: Vec<String> = result.path.iter().map(|v| v.to_string()).collect();
    println!(
        "ratio={} length={} optimum={} path={}",
        result.ratio,
        result.length,
        result.optimum,
        path.join(",")
    );
    Ok(())
}

fn parse_grid(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(Into::into))
        .collect()
}

fn sweep(a: &SweepArgs) -> anyhow::Result<()> {
    let inst = io::instance_from_json(&read(&a.instance)?)?;
    let betas = parse_grid(&a.beta_grid)?;
    let alphas = parse_grid(&a.alpha_grid)?;
    let cells: Vec<(Rational, Rational)> = betas
        .iter()
        .flat_map(|b| alphas.iter().map(move |al| (b.clone(), al.clone())))
        .collect();
    let rows = cells
        .par_iter()
        .map(|(beta, alpha)| -> anyhow::Result<Vec<io::CsvRow>> {
            let cfg = agent_config(
                inst.objective(),
                beta.clone(),
                alpha.clone(),
                a.restriction.as_deref(),
                &a.consistency,
                None,
                a.seed,
            )?;
            let trace = run_agent(&inst, &cfg)?;
            let report = bound_report(&trace, &inst)?;
            Ok(io::csv_rows(&trace, &report))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let rows: Vec<io::CsvRow> = rows.into_iter().flatten().collect();
    let file = fs::File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    io::write_csv(file, &rows)?;
    let failed = rows.iter().filter(|r| !r.holds).count();
    println!("cells={} rows={} failed={failed}", cells.len(), rows.len());
    if failed > 0 {
        return Err(Violation.into());
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> anyhow::Result<()> {
    let suite: Suite = a.suite.parse()?;
    let mut outcomes = run_suite(suite, a.seed);
    if a.inject_violation {
        outcomes.push(injected_violation());
    }
    for o in &outcomes {
        println!("{}", o.line());
    }
    if outcomes.iter().any(|o| !o.passed()) {
        return Err(Violation.into());
    }
    Ok(())
}
