//! Thin command-line front end over the library: environment generation,
//! experiment sweeps, plot-data extraction, and MDP invariant checks.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tabular_ail::envs::{build_random_mdp, build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use tabular_ail::harness;
use tabular_ail::mdp::{evaluate_policy_direct, value_iteration, TabularMdp};

#[derive(Parser)]
#[command(name = "tabular-ail", version, about = "Tabular imitation-learning laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark MDP and write it as JSON.
    GenEnv {
        #[command(subcommand)]
        family: EnvFamily,
    },
    /// Run an experiment sweep described by a TOML config.
    Run {
        /// Config file (see configs/ for the grammar).
        #[arg(long)]
        config: PathBuf,
        /// Parallel cells (TABULAR_AIL_JOBS overrides this flag).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Reduce a results CSV to a gnuplot-ready whitespace table.
    PlotData {
        /// results.csv produced by `run`.
        results: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite against an MDP file.
    Check {
        mdp: PathBuf,
        /// Also verify this abstraction file against the MDP (bisimulation
        /// with the MDP's own optimal policy as the expert).
        #[arg(long)]
        abstraction: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EnvFamily {
    /// The cliff benchmark: one rewarded action, all others absorb.
    ResetCliff(ResetCliffArgs),
    /// A seeded random MDP (flat-Dirichlet rows, uniform rewards).
    Random(RandomArgs),
}

#[derive(Args)]
struct ResetCliffArgs {
    #[arg(long)]
    states: usize,
    #[arg(long)]
    actions: usize,
    #[arg(long)]
    horizon: usize,
    /// Expert trajectory count parameterizing the initial distribution.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    states: usize,
    #[arg(long)]
    actions: usize,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> tabular_ail::Result<ExitCode> {
    match cli.command {
        Command::GenEnv { family } => {
            let expert_value = match family {
                EnvFamily::ResetCliff(args) => {
                    let spec = ResetCliffSpec {
                        num_states: args.states,
                        num_actions: args.actions,
                        horizon: args.horizon,
                        expert_trajectory_count_m: args.m,
                    };
                    let mdp = build_reset_cliff(&spec)?;
                    let expert = reset_cliff_expert(&spec);
                    let value = evaluate_policy_direct(&mdp, &expert, None)?;
                    mdp.save(&args.out)?;
                    println!("wrote {}", args.out.display());
                    value
                }
                EnvFamily::Random(args) => {
                    let mdp = build_random_mdp(args.states, args.actions, args.horizon, args.seed)?;
                    let (_, value) =
                        value_iteration(&mdp, mdp.rewards().expect("random MDPs carry rewards"))?;
                    mdp.save(&args.out)?;
                    println!("wrote {}", args.out.display());
                    value
                }
            };
            println!("expert policy value: {expert_value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, jobs } => {
            let cfg = harness::load_config(&config)?;
            let jobs = harness::effective_jobs(jobs);
            let rows = harness::run_and_write(&cfg, jobs)?;
            let failures = rows.iter().filter(|r| r.error.is_some()).count();
            println!(
                "wrote {} rows to {} ({failures} failed cells)",
                rows.len(),
                cfg.output_dir.display(),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::PlotData { results, out } => {
            let text = std::fs::read_to_string(&results)?;
            let table = harness::plot_data(&text)?;
            match out {
                Some(path) => std::fs::write(path, table)?,
                None => print!("{table}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { mdp, abstraction } => {
            let loaded = TabularMdp::load(&mdp)?;
            let mut all_ok = true;
            for check in harness::check_mdp(&loaded) {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {}", check.name, check.detail);
                all_ok &= check.passed;
            }
            if let Some(path) = abstraction {
                let abs = tabular_ail::abstraction::StateAbstraction::load(&path)?;
                let rewards = loaded
                    .rewards()
                    .ok_or_else(|| tabular_ail::Error::Config(
                        "bisimulation check needs an MDP with rewards".into(),
                    ))?
                    .clone();
                let (expert, _) = value_iteration(&loaded, &rewards)?;
                let check =
                    tabular_ail::abstraction::check_bisimulation(&loaded, &expert, &abs)?;
                match &check.violation {
                    None => println!("PASS bisimulation: {} blocks", abs.num_abstract()),
                    Some(v) => println!("FAIL bisimulation: {v}"),
                }
                all_ok &= check.passes;
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
