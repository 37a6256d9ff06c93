//! `cyber-range`: batch episode runner, bandit training, controller
//! evaluation, trace explainability and ablation studies over the simulated
//! plant network.
//!
//! All commands are non-interactive and exit nonzero on validation or I/O
//! errors. With a fixed seed, every command's outputs are byte-identical
//! across runs.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use cyber_range_core::{
    bandit_train, build_graph, default_topology, edges_csv, emit_dot, eval_controller_accuracy,
    read_trace, run_ablation, run_episodes, write_traces, Actor, BanditTable, BanditTrainConfig,
    Controller, ControllerName, DefenderSpec, FeatureMask, Granularity, RunConfig,
};

const SEED_ENV: &str = "CYBER_RANGE_SEED";

#[derive(Parser)]
#[command(name = "cyber-range", version, about = "Turn-based network defence simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ControllerArg {
    Heuristic,
    Bandit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ActorArg {
    Red,
    Blue,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GranularityArg {
    Hostname,
    Role,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of episodes from a JSON config and write traces + stats.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Train the bandit controller and write the table as JSON.
    TrainBandit {
        #[arg(long, default_value_t = 15_000)]
        timesteps: u64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a controller's prediction accuracy over 4-step episodes.
    EvalControllers {
        #[arg(long, value_enum)]
        controller: ControllerArg,
        #[arg(long)]
        bandit_table: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000)]
        episodes: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Optional JSON report destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an action-outcome transition graph from trace files.
    Explain {
        /// JSON-lines trace files.
        #[arg(long, required = true, num_args = 1..)]
        traces: Vec<PathBuf>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// DOT output path.
        #[arg(long)]
        dot: PathBuf,
        /// Optional CSV edge-list path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "red")]
        actor: ActorArg,
        #[arg(long, value_enum, default_value = "hostname")]
        granularity: GranularityArg,
    },
    /// Re-run a batch under observation feature masks and compare rewards.
    Ablate {
        /// Comma-separated feature groups: access, scan, prev.
        #[arg(long)]
        mask: String,
        #[arg(long)]
        config: PathBuf,
        /// Optional JSON results destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical network topology as JSON.
    Topology {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Seed resolution: explicit flag wins, then the environment variable, then 0.
fn resolve_seed(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse::<u64>()
            .with_context(|| format!("{SEED_ENV}={text} is not a valid seed")),
        Err(_) => Ok(0),
    }
}

fn load_config(path: &PathBuf) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut cfg = RunConfig::from_json(&text).context("invalid run config")?;
    if cfg.seed.is_none() {
        // Config file wins when it names a seed; the environment is only a
        // fallback.
        cfg.seed = Some(resolve_seed(None)?);
    }
    Ok(cfg)
}

fn load_bandit_table(cfg: &RunConfig, explicit: Option<&PathBuf>) -> anyhow::Result<Option<BanditTable>> {
    let path = match (&cfg.defender, explicit) {
        (_, Some(p)) => Some(p.clone()),
        (DefenderSpec::Hierarchical { controller: ControllerName::Bandit, bandit_table, .. }, None) => {
            bandit_table.clone()
        }
        _ => None,
    };
    match path {
        Some(p) => Ok(Some(
            BanditTable::load(&p).with_context(|| format!("loading bandit table {}", p.display()))?,
        )),
        None => Ok(None),
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let net = default_topology();
    match cli.command {
        Command::Run { config, out_dir } => {
            let cfg = load_config(&config)?;
            let table = load_bandit_table(&cfg, None)?;
            if matches!(
                cfg.defender,
                DefenderSpec::Hierarchical { controller: ControllerName::Bandit, .. }
            ) && table.is_none()
            {
                bail!("bandit defender needs `bandit_table` in the config");
            }
            let (stats, traces) = run_episodes(&cfg, &net, table)?;
            std::fs::create_dir_all(&out_dir)?;
            write_traces(&out_dir.join("traces"), &traces)?;
            let stats_json = serde_json::to_string_pretty(&stats)?;
            std::fs::write(out_dir.join("stats.json"), &stats_json)?;
            print!("{}", stats.table());
            println!("traces + stats.json written to {}", out_dir.display());
        }
        Command::TrainBandit { timesteps, epsilon, seed, out } => {
            let seed = resolve_seed(seed)?;
            let cfg = BanditTrainConfig { timesteps, epsilon, seed, ..Default::default() };
            let table = bandit_train(&net, &cfg)?;
            table.save(&out)?;
            println!(
                "trained bandit table: {} contexts after {} timesteps (epsilon {}, seed {})",
                table.len(),
                timesteps,
                epsilon,
                seed
            );
            println!("written to {}", out.display());
        }
        Command::EvalControllers { controller, bandit_table, episodes, seed, out } => {
            let seed = resolve_seed(seed)?;
            let controller = match controller {
                ControllerArg::Heuristic => Controller::Heuristic,
                ControllerArg::Bandit => {
                    let path = bandit_table
                        .ok_or_else(|| anyhow::anyhow!("--bandit-table is required for the bandit controller"))?;
                    Controller::Bandit(BanditTable::load(&path)?)
                }
            };
            let report = eval_controller_accuracy(
                &controller,
                episodes,
                seed,
                &net,
                &Default::default(),
            )?;
            print!("{}", report.table());
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
                println!("report written to {}", path.display());
            }
        }
        Command::Explain { traces, max_steps, dot, csv, actor, granularity } => {
            let mut parsed = Vec::with_capacity(traces.len());
            for path in &traces {
                parsed.push(read_trace(path).with_context(|| format!("reading {}", path.display()))?);
            }
            let actor = match actor {
                ActorArg::Red => Actor::Red,
                ActorArg::Blue => Actor::Blue,
            };
            let granularity = match granularity {
                GranularityArg::Hostname => Granularity::Hostname,
                GranularityArg::Role => Granularity::Role,
            };
            let graph = build_graph(&parsed, max_steps, actor, granularity);
            std::fs::write(&dot, emit_dot(&graph))?;
            println!(
                "graph: {} nodes, {} edges -> {}",
                graph.node_count(),
                graph.edge_count(),
                dot.display()
            );
            if let Some(path) = csv {
                std::fs::write(&path, edges_csv(&graph))?;
                println!("edge list -> {}", path.display());
            }
        }
        Command::Ablate { mask, config, out } => {
            let cfg = load_config(&config)?;
            let table = load_bandit_table(&cfg, None)?;
            let mut masks = vec![FeatureMask::default()];
            masks.push(FeatureMask::parse(&mask)?);
            let results = run_ablation(&cfg, &net, &masks, table)?;
            let mut report = Vec::new();
            for (label, stats) in &results {
                println!("== mask: {label}");
                print!("{}", stats.table());
                report.push(serde_json::json!({ "mask": label, "stats": stats }));
            }
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
                println!("results written to {}", path.display());
            }
        }
        Command::Topology { out } => {
            let text = serde_json::to_string_pretty(&net)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    println!("topology written to {}", path.display());
                }
                None => println!("{text}"),
            }
        }
    }
    Ok(())
}
