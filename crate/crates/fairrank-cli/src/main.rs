//! `fairrank` — representative re-ranking, fairness audits, and seeded
//! simulation sweeps over candidate files.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors (with a
//! machine-readable `ERROR <code>: <detail>` line on stderr), 1 on
//! internal errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fairrank::error::Error;
use fairrank::estimator::{estimated_individual_rerank, ActivityModel};
use fairrank::ideal::{group_fair_rerank, individual_fair_rerank};
use fairrank::metrics::{fairness_report, AuditOptions};
use fairrank::model::{ratio_from_pool, AttributeValue, CandidatePool, RepresentationRatio};
use fairrank::ranker::{detconst_rank, representative_rank};
use fairrank::rng::SeededRng;
use fairrank::{io, sim};

#[derive(Parser)]
#[command(name = "fairrank", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank a candidate file under a target representation ratio.
    Rank(RankArgs),
    /// Re-rank a platform file against a universe file (full information).
    Ideal(IdealArgs),
    /// Audit a ranking against a reference ranking at one or more cuts.
    Analyze(AnalyzeArgs),
    /// Run the simulation sweeps described by a scenario config.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    /// Round-target merge.
    Round,
    /// Floor/ceiling constrained sort.
    Detconst,
    /// Seeded probabilistic re-ranking under per-group activeness.
    EstimatedIfrr,
}

#[derive(Args)]
struct RankArgs {
    /// Candidate file (CSV `id,attribute,score`, or JSON with `.json`).
    input: PathBuf,
    #[arg(long, value_enum)]
    policy: Policy,
    /// Target proportions, e.g. `b=0.667,g=0.333`. Defaults to the
    /// proportions observed in the input file.
    #[arg(long)]
    ratio: Option<String>,
    /// Per-group active fractions, e.g. `g=0.4,b=1.0`. Required for
    /// `estimated-ifrr`.
    #[arg(long)]
    activeness: Option<String>,
    /// Seed for `estimated-ifrr`; falls back to `FAIRRANK_SEED`, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output ranking file (CSV `rank,id,attribute,score`).
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdealMode {
    /// Projection of the universe ranking onto platform members.
    Ifrr,
    /// Slot substitution with the next same-group platform member.
    Gfrr,
}

#[derive(Args)]
struct IdealArgs {
    /// Universe candidate file.
    universe: PathBuf,
    /// Platform candidate file; ids must be a subset of the universe.
    platform: PathBuf,
    #[arg(long, value_enum)]
    mode: IdealMode,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Ranking under audit (e.g. the platform's own ranking).
    ranking: PathBuf,
    /// Reference ranking (e.g. the universe ranking).
    reference: PathBuf,
    /// Platform candidate file, scoping the unfairness indicator.
    platform: PathBuf,
    /// Cut sizes, e.g. `--k 6,10`.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, default_value_t = 50.0)]
    skew_cap: f64,
    /// Count reference-top-k candidates who never joined as unfair.
    #[arg(long)]
    strict_absent: bool,
    /// Output directory for `analysis.json` and `analysis.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario config (TOML, or JSON with `.json`).
    config: PathBuf,
    /// Output directory for the result CSVs and `manifest.json`.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rank(args) => cmd_rank(&args),
        Command::Ideal(args) => cmd_ideal(&args),
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Simulate(args) => cmd_simulate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERROR {}: {e}", e.code());
            ExitCode::from(2)
        }
    }
}

/// Parses `attr=value,attr=value` pairs.
fn parse_pairs(flag: &'static str, text: &str) -> Result<Vec<(AttributeValue, f64)>, Error> {
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let Some((attr, value)) = part.split_once('=') else {
            return Err(Error::InvalidConfig(format!(
                "--{flag}: expected `attr=value`, got `{part}`"
            )));
        };
        let value: f64 = value.parse().map_err(|_| {
            Error::InvalidConfig(format!("--{flag}: `{value}` is not a number"))
        })?;
        pairs.push((AttributeValue::new(attr.trim()), value));
    }
    Ok(pairs)
}

fn resolve_ratio(
    pool: &CandidatePool,
    flag: Option<&str>,
) -> Result<RepresentationRatio, Error> {
    match flag {
        Some(text) => RepresentationRatio::new(parse_pairs("ratio", text)?),
        None => ratio_from_pool(pool),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("FAIRRANK_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("FAIRRANK_SEED `{text}` is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn cmd_rank(args: &RankArgs) -> Result<(), Error> {
    let pool = io::read_pool(&args.input)?;
    let ratio = resolve_ratio(&pool, args.ratio.as_deref())?;
    let ranking = match args.policy {
        Policy::Round => representative_rank(&pool, &ratio)?,
        Policy::Detconst => detconst_rank(&pool, &ratio)?,
        Policy::EstimatedIfrr => {
            let Some(activeness) = args.activeness.as_deref() else {
                return Err(Error::MissingFlag("--activeness"));
            };
            let activity = ActivityModel::uniform_at_random(parse_pairs("activeness", activeness)?)?;
            let mut rng = SeededRng::new(resolve_seed(args.seed)?);
            estimated_individual_rerank(&pool, &ratio, &activity, &mut rng)?
        }
    };
    io::write_ranking(&args.out, &ranking)
}

fn cmd_ideal(args: &IdealArgs) -> Result<(), Error> {
    let universe = io::read_pool(&args.universe)?;
    let platform = io::read_pool(&args.platform)?;
    if let Some(foreign) = platform
        .candidates()
        .iter()
        .find(|c| !universe.contains_id(&c.id))
    {
        return Err(Error::PlatformNotSubset(foreign.id.to_string()));
    }
    let reference = representative_rank(&universe, &ratio_from_pool(&universe)?)?;
    let ranking = match args.mode {
        IdealMode::Ifrr => individual_fair_rerank(&reference, &platform)?,
        IdealMode::Gfrr => group_fair_rerank(&reference, &platform)?,
    };
    io::write_ranking(&args.out, &ranking)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let ranking = io::read_ranking(&args.ranking)?;
    let reference = io::read_ranking(&args.reference)?;
    let platform = io::read_pool(&args.platform)?;
    let options = AuditOptions {
        skew_cap: args.skew_cap,
        count_absent_as_unfair: args.strict_absent,
    };
    let max_k = ranking.len().min(reference.len());
    let reports: Vec<_> = args
        .k
        .iter()
        .map(|&k| {
            if k > max_k {
                eprintln!(
                    "warning: k = {k} exceeds the shorter ranking ({max_k}); \
                     verdicts computed at full length"
                );
            }
            fairness_report(&reference, &ranking, &platform, k, options)
        })
        .collect();
    ensure_dir(&args.out)?;
    io::write_reports_json(args.out.join("analysis.json"), &reports)?;
    io::write_reports_csv(args.out.join("analysis.csv"), &reports)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Error> {
    let config = io::read_scenario_config(&args.config)?;
    let output = sim::run_all(&config)?;
    ensure_dir(&args.out)?;
    io::write_results_csv(args.out.join("missed_opportunity.csv"), &output.missed_opportunity)?;
    io::write_results_csv(args.out.join("rank_difference.csv"), &output.rank_difference)?;
    io::write_results_csv(args.out.join("skew.csv"), &output.skew)?;
    io::write_manifest(args.out.join("manifest.json"), &output.manifest)
}

fn ensure_dir(path: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}
