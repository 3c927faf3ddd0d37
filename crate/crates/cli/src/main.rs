use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arena_core::policies::{serve, PolicyId};
use arena_core::replay::{compute_stats_from_files, emit_csv, read_replay, replay_files};
use arena_core::worldgen::TEAMS;
use arena_core::GameConfig;
use arena_tournament::{
    load_pool, pve_eval, resimulate, run_campaign, run_match, Cadence, CampaignConfig, MatchSpec, RatingOrder, Slot,
    Stage,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "arena", version, about = "Sixteen-team survival arena: matches, evaluation, tournaments, analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match and write its replay.
    Sim {
        #[arg(long)]
        seed: u64,
        /// Flat TOML game config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sixteen policy ids, or one id for every team.
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        policies: Vec<String>,
        #[arg(long)]
        replay: PathBuf,
    },
    /// Evaluate a candidate against the built-in teams of a stage.
    Pve {
        #[arg(long, value_parser = ["1", "2"])]
        stage: String,
        #[arg(long)]
        candidate: String,
        #[arg(long, default_value_t = 10)]
        rounds: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.4)]
        gate: f64,
        /// Directory to keep the replays in.
        #[arg(long)]
        replays: Option<PathBuf>,
    },
    /// Run a rated campaign over a pool of `*.policy` files.
    Pvp {
        #[arg(long)]
        pool: PathBuf,
        #[arg(long, value_enum)]
        cadence: CadenceArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        parallelism: Option<usize>,
        /// Rate in completion order instead of schedule order.
        #[arg(long)]
        completion_order: bool,
        #[arg(long)]
        no_replays: bool,
        /// Override the per-submission match count of the cadence.
        #[arg(long)]
        matches: Option<u32>,
    },
    /// Aggregate replays into CSV tables.
    Stats {
        #[arg(long)]
        replays: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-simulate a replay and check its events, hash and score.
    Verify { replay: PathBuf },
    /// Answer observations on stdin with a built-in policy.
    #[command(hide = true)]
    Serve {
        #[arg(long)]
        policy: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CadenceArg {
    Daily,
    Weekly,
}

type CliResult = Result<(), String>;

fn load_config(path: Option<&Path>) -> Result<GameConfig, String> {
    match path {
        Some(p) => GameConfig::load(p).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(GameConfig::default()),
    }
}

fn parse_policy(s: &str) -> Result<PolicyId, String> {
    s.parse().map_err(|e: arena_core::policies::PolicyError| e.to_string())
}

fn sim(seed: u64, config: Option<&Path>, policies: &[String], replay: &Path) -> CliResult {
    let config = load_config(config)?;
    let ids: Vec<PolicyId> = policies.iter().map(|p| parse_policy(p)).collect::<Result<_, _>>()?;
    let ids = match ids.len() {
        1 => vec![ids[0].clone(); TEAMS],
        TEAMS => ids,
        n => return Err(format!("expected 1 or {TEAMS} policies, got {n}")),
    };
    let spec = MatchSpec {
        match_id: format!("sim-{seed}"),
        seed,
        config,
        slots: ids.into_iter().map(Slot::builtin).collect(),
        slot_permutation_seed: 0,
    };
    let record = run_match(&spec, Some(replay));
    if let Some(err) = record.error {
        return Err(err);
    }
    let score = record.score.expect("successful match has a score");
    println!("ticks {}  hash {}  {} ms", record.ticks, record.final_state_hash.unwrap_or_default(), record.duration_ms);
    println!("team  policy      defeat  survival  total  rank");
    for (t, slot) in score.teams.iter().zip(&spec.slots) {
        println!(
            "{:>4}  {:<10} {:>7.1} {:>9.2} {:>6.2} {:>5}",
            t.team_id, slot.submission, t.defeat_score, t.survival_score, t.total, t.rank
        );
    }
    println!("replay written to {}", replay.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn pve(stage: &str, candidate: &str, rounds: u32, seed: u64, config: Option<&Path>, gate: f64, replays: Option<&Path>) -> CliResult {
    let config = load_config(config)?;
    let stage = Stage::parse(stage).ok_or("stage must be 1 or 2")?;
    let candidate = parse_policy(candidate)?;
    if let Some(dir) = replays {
        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    }
    let report = pve_eval(&candidate, stage, rounds, seed, &config, gate, replays).map_err(|e| e.to_string())?;
    for (i, (slot, rank)) in report.slots.iter().zip(&report.ranks).enumerate() {
        println!("round {:>2}  slot {:>2}  rank {:>2}", i + 1, slot, rank);
    }
    println!("top-1 ratio {:.2} over {} rounds", report.top1_ratio, report.ranks.len());
    println!("{}", if report.eligible { "eligible for stage 2" } else { "below the stage gate" });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn pvp(
    pool: &Path,
    cadence: CadenceArg,
    out: &Path,
    seed: u64,
    config: Option<&Path>,
    parallelism: Option<usize>,
    completion_order: bool,
    no_replays: bool,
    matches: Option<u32>,
) -> CliResult {
    let submissions = load_pool(pool).map_err(|e| e.to_string())?;
    let cadence = match cadence {
        CadenceArg::Daily => Cadence::Daily,
        CadenceArg::Weekly => Cadence::Weekly,
    };
    let mut cfg = CampaignConfig::new(out);
    cfg.seed = seed;
    cfg.game = load_config(config)?;
    if let Some(p) = parallelism {
        cfg.parallelism = p;
    }
    if completion_order {
        cfg.order = RatingOrder::Completion;
    }
    cfg.keep_replays = !no_replays;
    if let Some(n) = matches {
        cfg.daily_matches = n;
        cfg.weekly_matches = n;
    }
    let report = run_campaign(&cfg, &submissions, cadence).map_err(|e| e.to_string())?;
    println!(
        "{} scheduled, {} played, {} resumed, {} failed",
        report.scheduled, report.played, report.resumed, report.errors
    );
    println!("{:<24} {:>8} {:>8} {:>12} {:>8}", "submission", "mu", "sigma", "conservative", "matches");
    for row in &report.leaderboard {
        println!(
            "{:<24} {:>8.3} {:>8.3} {:>12.3} {:>8}",
            row.submission, row.mu, row.sigma, row.conservative, row.matches
        );
    }
    Ok(())
}

fn stats(replays: &Path, out: &Path) -> CliResult {
    let files = replay_files(replays).map_err(|e| format!("{}: {e}", replays.display()))?;
    let report = compute_stats_from_files(&files).map_err(|e| e.to_string())?;
    emit_csv(&report, out).map_err(|e| e.to_string())?;
    println!("{} replays aggregated into {}", report.replays, out.display());
    Ok(())
}

fn verify(path: &Path) -> CliResult {
    let replay = read_replay(path).map_err(|e| e.to_string())?;
    resimulate(&replay).map_err(|e| e.to_string())?;
    println!("{}: {} ticks reproduced, hash {}", path.display(), replay.ticks.len(), replay.footer.final_state_hash);
    Ok(())
}

fn serve_policy(policy: &str) -> CliResult {
    let mut policy = parse_policy(policy)?.instantiate().map_err(|e| e.to_string())?;
    let stdin = io::stdin().lock();
    let stdout = BufWriter::new(io::stdout().lock());
    serve(policy.as_mut(), stdin, stdout).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sim { seed, config, policies, replay } => sim(*seed, config.as_deref(), policies, replay),
        Command::Pve { stage, candidate, rounds, seed, config, gate, replays } => {
            pve(stage, candidate, *rounds, *seed, config.as_deref(), *gate, replays.as_deref())
        }
        Command::Pvp { pool, cadence, out, seed, config, parallelism, completion_order, no_replays, matches } => pvp(
            pool,
            *cadence,
            out,
            *seed,
            config.as_deref(),
            *parallelism,
            *completion_order,
            *no_replays,
            *matches,
        ),
        Command::Stats { replays, out } => stats(replays, out),
        Command::Verify { replay } => verify(replay),
        Command::Serve { policy } => serve_policy(policy),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("arena: {e}");
            ExitCode::FAILURE
        }
    }
}
