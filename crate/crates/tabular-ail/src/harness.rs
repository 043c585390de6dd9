//! Experiment harness: TOML config parsing, seeded sweeps over
//! (algorithm, seed, budget) cells, and CSV/plot-data emission.
//!
//! Runs are fully deterministic: per-cell RNG streams are derived from
//! (master seed, algorithm name, seed), and rows are written in
//! (algorithm, seed, budget) order no matter how the parallel pool
//! schedules them. Wall-times are kept in a separate artifact so the
//! results files are byte-identical across reruns.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::abstraction::{check_bisimulation, StateAbstraction};
use crate::algorithms::{
    run_bc, run_mbtail, run_mbtail_abstract, run_oal, AlgorithmKind, ImitationBudget,
    ImitationResult, MbtailConfig, OalConfig,
};
use crate::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use crate::error::{Error, Result};
use crate::matching::OptimizerConfig;
use crate::mdp::{Policy, TabularMdp};
use crate::rfe::BonusParams;
use crate::rng::derive_seed;
use crate::sim::{EnvSampler, GapOracle};

pub const RESULTS_SCHEMA: &str = "# tabular-ail results v1";
pub const SUMMARY_SCHEMA: &str = "# tabular-ail summary v1";
pub const TIMINGS_SCHEMA: &str = "# tabular-ail timings v1";

const RESULTS_HEADER: &str = "algorithm,seed,budget,interactions,m,imitation_gap,\
rfe_episodes,estimator_rollout_episodes,expert_episodes,rfe_stopped_early,error";

// --- configuration -----------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: ExperimentSection,
    env: EnvSection,
    #[serde(default)]
    algorithms: BTreeMap<String, AlgoSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    master_seed: u64,
    seeds: Vec<u64>,
    budgets: Vec<u64>,
    m: usize,
    #[serde(default)]
    output_dir: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvSection {
    kind: String,
    #[serde(default)]
    states: Option<usize>,
    #[serde(default)]
    actions: Option<usize>,
    #[serde(default)]
    horizon: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    path: Option<String>,
}

/// Flat per-algorithm parameter section; irrelevant keys are simply unused
/// by algorithms that do not read them.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgoSection {
    pub eps: f64,
    pub delta: f64,
    pub iterations: usize,
    pub rfe_fraction: f64,
    pub rfe_bonus_coeff: f64,
    pub rfe_horizon_inflation: bool,
    /// "adaptive" or "constant" (the theoretical constant rate).
    pub step: String,
    pub abstraction: Option<String>,
}

impl Default for AlgoSection {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            delta: 0.05,
            iterations: 500,
            rfe_fraction: 0.8,
            rfe_bonus_coeff: 15.0,
            rfe_horizon_inflation: true,
            step: "adaptive".to_string(),
            abstraction: None,
        }
    }
}

/// A fully validated experiment: environment, expert, grids, algorithms.
pub struct ExperimentConfig {
    pub mdp: TabularMdp,
    pub expert: Policy,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub budgets: Vec<u64>,
    pub m: usize,
    pub output_dir: PathBuf,
    /// Sorted by algorithm name for deterministic row order.
    pub algorithms: Vec<(AlgorithmKind, AlgoSection, Option<StateAbstraction>)>,
}

/// Builds the environment and its expert from an env section. Reset Cliff
/// gets its designated expert action; other environments use the optimal
/// policy for their own rewards.
fn build_env(env: &EnvSection, m: usize, base_dir: &Path) -> Result<(TabularMdp, Policy)> {
    match env.kind.as_str() {
        "reset-cliff" => {
            let spec = ResetCliffSpec {
                num_states: need(env.states, "env.states")?,
                num_actions: need(env.actions, "env.actions")?,
                horizon: need(env.horizon, "env.horizon")?,
                expert_trajectory_count_m: m,
            };
            let mdp = build_reset_cliff(&spec)?;
            let expert = reset_cliff_expert(&spec);
            Ok((mdp, expert))
        }
        "random" => {
            let mdp = crate::envs::build_random_mdp(
                need(env.states, "env.states")?,
                need(env.actions, "env.actions")?,
                need(env.horizon, "env.horizon")?,
                env.seed.unwrap_or(0),
            )?;
            let (expert, _) = crate::mdp::value_iteration(
                &mdp,
                mdp.rewards().expect("random MDPs carry rewards"),
            )?;
            Ok((mdp, expert))
        }
        "file" => {
            let rel = need(env.path.clone(), "env.path")?;
            let mdp = TabularMdp::load(&base_dir.join(rel))?;
            let rewards = mdp
                .rewards()
                .ok_or_else(|| Error::Config("file environment has no rewards".into()))?
                .clone();
            let (expert, _) = crate::mdp::value_iteration(&mdp, &rewards)?;
            Ok((mdp, expert))
        }
        other => Err(Error::Config(format!(
            "unknown env kind '{other}' (expected reset-cliff, random, or file)"
        ))),
    }
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required field {what}")))
}

/// Parses and validates a config document. `base_dir` anchors relative
/// paths (abstraction files, MDP files, output directory).
pub fn load_config_str(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    let file: ConfigFile = toml::from_str(text)?;
    if file.experiment.seeds.is_empty() {
        return Err(Error::Config("experiment.seeds must be nonempty".into()));
    }
    if file.experiment.budgets.is_empty() {
        return Err(Error::Config("experiment.budgets must be nonempty".into()));
    }
    if file.algorithms.is_empty() {
        return Err(Error::Config("no algorithms configured".into()));
    }
    let (mdp, expert) = build_env(&file.env, file.experiment.m, base_dir)?;
    let mut algorithms = Vec::new();
    for (name, section) in &file.algorithms {
        let kind = AlgorithmKind::from_name(name)?;
        let abstraction = match (kind, &section.abstraction) {
            (AlgorithmKind::MbtailAbs, Some(rel)) => {
                let abs = StateAbstraction::load(&base_dir.join(rel))?;
                let check = check_bisimulation(&mdp, &expert, &abs)?;
                if !check.passes {
                    return Err(Error::Config(format!(
                        "abstraction '{rel}' violates bisimulation: {}",
                        check.violation.expect("failed check carries a violation")
                    )));
                }
                Some(abs)
            }
            (AlgorithmKind::MbtailAbs, None) => {
                return Err(Error::Config(
                    "mbtail-abs needs an 'abstraction' file".into(),
                ))
            }
            _ => None,
        };
        algorithms.push((kind, section.clone(), abstraction));
    }
    let output_dir = base_dir.join(
        file.experiment
            .output_dir
            .unwrap_or_else(|| "out".to_string()),
    );
    Ok(ExperimentConfig {
        mdp,
        expert,
        master_seed: file.experiment.master_seed,
        seeds: file.experiment.seeds,
        budgets: file.experiment.budgets,
        m: file.experiment.m,
        output_dir,
        algorithms,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    load_config_str(&text, base)
}

// --- execution ---------------------------------------------------------------

/// One (algorithm, seed, budget) cell of a sweep.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub algorithm: String,
    pub seed: u64,
    pub budget: u64,
    pub interactions: u64,
    pub m: usize,
    pub imitation_gap: f64,
    pub rfe_episodes: u64,
    pub estimator_rollout_episodes: u64,
    pub expert_episodes: u64,
    pub rfe_stopped_early: Option<bool>,
    pub wall_time_ms: u128,
    pub error: Option<String>,
}

fn optimizer_for(section: &AlgoSection, mdp: &TabularMdp) -> Result<OptimizerConfig> {
    match section.step.as_str() {
        "adaptive" => Ok(OptimizerConfig::adaptive(section.iterations)),
        "constant" => Ok(OptimizerConfig::constant_rate(
            section.iterations,
            mdp.num_states(),
            mdp.num_actions(),
        )),
        other => Err(Error::Config(format!(
            "unknown step rule '{other}' (expected adaptive or constant)"
        ))),
    }
}

fn run_cell(
    cfg: &ExperimentConfig,
    kind: AlgorithmKind,
    section: &AlgoSection,
    abstraction: Option<&StateAbstraction>,
    seed: u64,
    budget: u64,
) -> Result<ImitationResult> {
    let oracle = GapOracle::new(&cfg.mdp, &cfg.expert)?;
    let mut env = EnvSampler::new(&cfg.mdp);
    let run_seed = derive_seed(derive_seed(cfg.master_seed, kind.name()), &seed.to_string());
    let budget_cfg = ImitationBudget {
        expert_trajectories_m: cfg.m,
        interactions_total: budget,
        rfe_fraction: section.rfe_fraction,
    };
    let result = match kind {
        AlgorithmKind::Bc => run_bc(&mut env, &cfg.expert, &budget_cfg, &oracle, run_seed)?,
        AlgorithmKind::Oal => run_oal(
            &mut env,
            &cfg.expert,
            &budget_cfg,
            &OalConfig {
                delta: section.delta,
                iterations: section.iterations,
            },
            &oracle,
            run_seed,
        )?,
        AlgorithmKind::Mbtail | AlgorithmKind::MbtailAbs => {
            let mb_cfg = MbtailConfig {
                epsilon: section.eps,
                delta: section.delta,
                optimizer: optimizer_for(section, &cfg.mdp)?,
                rfe_bonus: BonusParams {
                    coeff: section.rfe_bonus_coeff,
                    horizon_inflation: section.rfe_horizon_inflation,
                },
            };
            match kind {
                AlgorithmKind::Mbtail => run_mbtail(
                    &mut env,
                    &cfg.expert,
                    &budget_cfg,
                    &mb_cfg,
                    &oracle,
                    run_seed,
                )?,
                _ => run_mbtail_abstract(
                    &mut env,
                    &cfg.expert,
                    abstraction.ok_or_else(|| {
                        Error::Config("mbtail-abs cell without an abstraction".into())
                    })?,
                    &budget_cfg,
                    &mb_cfg,
                    &oracle,
                    run_seed,
                )?,
            }
        }
    };
    // budget honesty: reported interactions must equal sampled episodes
    debug_assert_eq!(env.env_episodes(), result.diagnostics.interaction_episodes);
    Ok(result)
}

/// Runs every (algorithm, seed, budget) cell. Cells run in parallel across
/// the pool; rows come back in deterministic order. A failing cell becomes a
/// row with its error recorded, and the sweep continues.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Vec<ResultRow>> {
    let mut cells = Vec::new();
    for (kind, section, abstraction) in &cfg.algorithms {
        for &seed in &cfg.seeds {
            for &budget in &cfg.budgets {
                cells.push((*kind, section, abstraction.as_ref(), seed, budget));
            }
        }
    }
    let execute = || -> Vec<ResultRow> {
        cells
            .par_iter()
            .map(|(kind, section, abstraction, seed, budget)| {
                let start = Instant::now();
                let outcome = run_cell(cfg, *kind, section, *abstraction, *seed, *budget);
                let wall_time_ms = start.elapsed().as_millis();
                match outcome {
                    Ok(result) => ResultRow {
                        algorithm: kind.name().to_string(),
                        seed: *seed,
                        budget: *budget,
                        interactions: result.diagnostics.interaction_episodes,
                        m: cfg.m,
                        imitation_gap: result.imitation_gap,
                        rfe_episodes: result.diagnostics.rfe_episodes,
                        estimator_rollout_episodes: result
                            .diagnostics
                            .estimator_rollout_episodes,
                        expert_episodes: result.diagnostics.expert_episodes,
                        rfe_stopped_early: result.diagnostics.rfe_stopped_early,
                        wall_time_ms,
                        error: None,
                    },
                    Err(err) => ResultRow {
                        algorithm: kind.name().to_string(),
                        seed: *seed,
                        budget: *budget,
                        interactions: 0,
                        m: cfg.m,
                        imitation_gap: f64::NAN,
                        rfe_episodes: 0,
                        estimator_rollout_episodes: 0,
                        expert_episodes: 0,
                        rfe_stopped_early: None,
                        wall_time_ms,
                        error: Some(err.to_string()),
                    },
                }
            })
            .collect()
    };
    let rows = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(execute),
        None => execute(),
    };
    Ok(rows)
}

/// Honors the `TABULAR_AIL_JOBS` override before the `--jobs` flag.
pub fn effective_jobs(flag: Option<usize>) -> Option<usize> {
    match std::env::var("TABULAR_AIL_JOBS") {
        Ok(value) => value.parse().ok().or(flag),
        Err(_) => flag,
    }
}

// --- CSV emission --------------------------------------------------------------

fn fmt_opt_bool(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = format!("{RESULTS_SCHEMA}\n{RESULTS_HEADER}\n");
    for r in rows {
        let gap = if r.error.is_some() {
            String::new()
        } else {
            format!("{}", r.imitation_gap)
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.seed,
            r.budget,
            r.interactions,
            r.m,
            gap,
            r.rfe_episodes,
            r.estimator_rollout_episodes,
            r.expert_episodes,
            fmt_opt_bool(r.rfe_stopped_early),
            r.error.as_deref().unwrap_or("").replace(',', ";"),
        ));
    }
    out
}

fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Mean and standard error of the gap per (algorithm, budget), error rows
/// excluded.
pub fn summary_csv(rows: &[ResultRow]) -> String {
    let mut grouped: BTreeMap<(String, u64), Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.error.is_none()) {
        grouped
            .entry((r.algorithm.clone(), r.budget))
            .or_default()
            .push(r.imitation_gap);
    }
    let mut out = format!("{SUMMARY_SCHEMA}\nalgorithm,budget,num_seeds,mean_gap,stderr_gap\n");
    for ((algorithm, budget), gaps) in grouped {
        let (mean, stderr) = mean_stderr(&gaps);
        out.push_str(&format!(
            "{algorithm},{budget},{},{mean},{stderr}\n",
            gaps.len()
        ));
    }
    out
}

pub fn timings_csv(rows: &[ResultRow]) -> String {
    let mut out = format!("{TIMINGS_SCHEMA}\nalgorithm,seed,budget,wall_time_ms\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.algorithm, r.seed, r.budget, r.wall_time_ms
        ));
    }
    out
}

/// Runs a sweep and writes `results.csv`, `summary.csv` and `timings.csv`
/// into the config's output directory.
pub fn run_and_write(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Vec<ResultRow>> {
    let rows = run_experiment(cfg, jobs)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    std::fs::write(cfg.output_dir.join("results.csv"), results_csv(&rows))?;
    std::fs::write(cfg.output_dir.join("summary.csv"), summary_csv(&rows))?;
    std::fs::write(cfg.output_dir.join("timings.csv"), timings_csv(&rows))?;
    Ok(rows)
}

// --- plot data ---------------------------------------------------------------

/// Parsed subset of a results CSV used by `plot-data`.
struct ParsedRow {
    algorithm: String,
    budget: u64,
    gap: Option<f64>,
}

fn parse_results_csv(text: &str) -> Result<Vec<ParsedRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if !line.starts_with("algorithm,") {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected the results header row".into(),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 11 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 11 fields, found {}", fields.len()),
            });
        }
        let budget: u64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad budget '{}'", fields[2]),
        })?;
        let gap = if fields[5].is_empty() {
            None
        } else {
            Some(fields[5].parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad imitation_gap '{}'", fields[5]),
            })?)
        };
        rows.push(ParsedRow {
            algorithm: fields[0].to_string(),
            budget,
            gap,
        });
    }
    Ok(rows)
}

/// Turns a results CSV into a gnuplot-ready whitespace table with one row
/// per budget and (mean, stderr) columns per algorithm.
pub fn plot_data(results_csv_text: &str) -> Result<String> {
    let rows = parse_results_csv(results_csv_text)?;
    let mut algorithms: Vec<String> = rows.iter().map(|r| r.algorithm.clone()).collect();
    algorithms.sort();
    algorithms.dedup();
    let mut budgets: Vec<u64> = rows.iter().map(|r| r.budget).collect();
    budgets.sort_unstable();
    budgets.dedup();

    let mut header = String::from("# interactions");
    for a in &algorithms {
        header.push_str(&format!(" {a}_mean {a}_stderr"));
    }
    let mut out = header;
    out.push('\n');
    for &b in &budgets {
        let mut line = format!("{b}");
        for a in &algorithms {
            let gaps: Vec<f64> = rows
                .iter()
                .filter(|r| r.budget == b && &r.algorithm == a)
                .filter_map(|r| r.gap)
                .collect();
            if gaps.is_empty() {
                line.push_str(" nan nan");
            } else {
                let (mean, stderr) = mean_stderr(&gaps);
                line.push_str(&format!(" {mean} {stderr}"));
            }
        }
        out.push('\n');
        out.insert_str(out.len() - 1, &line);
    }
    Ok(out)
}

// --- invariant checks ("check" subcommand) ------------------------------------

/// One named check with its outcome.
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs the invariant suite against an MDP file's contents.
pub fn check_mdp(mdp: &TabularMdp) -> Vec<CheckOutcome> {
    use crate::mdp::{
        compute_occupancy, evaluate_policy_direct, l1_occupancy_distance, policy_value,
        value_iteration,
    };
    let mut out = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        out.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    };

    // bit-exact round trip
    match mdp.to_json_string() {
        Ok(text) => match TabularMdp::from_json_str(&text) {
            Ok(back) => {
                let same = back == *mdp && back.to_json_string().ok() == Some(text);
                push(
                    "round-trip",
                    same,
                    if same {
                        "serialize/parse/serialize is bit-exact".into()
                    } else {
                        "round trip altered the MDP".into()
                    },
                );
            }
            Err(e) => push("round-trip", false, e.to_string()),
        },
        Err(e) => push("round-trip", false, e.to_string()),
    }

    // occupancy normalization + dual equivalence on random policies
    let mut worst_norm: f64 = 0.0;
    let mut worst_dual: f64 = 0.0;
    let rewards = mdp
        .rewards()
        .cloned()
        .unwrap_or_else(|| ndarray::Array3::zeros((mdp.horizon(), mdp.num_states(), mdp.num_actions())));
    for seed in 0..5u64 {
        let policy = random_policy_for(mdp, seed);
        match compute_occupancy(mdp, &policy) {
            Ok(occ) => {
                for h in 0..mdp.horizon() {
                    let sum: f64 = occ.values().slice(ndarray::s![h, .., ..]).sum();
                    worst_norm = worst_norm.max((sum - 1.0).abs());
                }
                let dual = policy_value(&occ, &rewards).unwrap_or(f64::NAN);
                let direct = evaluate_policy_direct(mdp, &policy, Some(&rewards)).unwrap_or(f64::NAN);
                worst_dual = worst_dual.max((dual - direct).abs());
            }
            Err(e) => {
                push("occupancy", false, e.to_string());
                return out;
            }
        }
    }
    push(
        "occupancy-normalization",
        worst_norm <= 1e-8,
        format!("worst layer deviation {worst_norm:.3e}"),
    );
    push(
        "dual-equivalence",
        worst_dual <= 1e-8,
        format!("worst dual-vs-direct deviation {worst_dual:.3e}"),
    );

    // value iteration dominates random policies
    match value_iteration(mdp, &rewards) {
        Ok((_, v_star)) => {
            let mut dominated = true;
            let mut worst = f64::NEG_INFINITY;
            for seed in 100..150u64 {
                let policy = random_policy_for(mdp, seed);
                let v = evaluate_policy_direct(mdp, &policy, Some(&rewards)).unwrap_or(f64::NAN);
                worst = worst.max(v);
                if v > v_star + 1e-9 {
                    dominated = false;
                }
            }
            push(
                "value-iteration-dominance",
                dominated,
                format!("V* = {v_star}, best probed policy {worst}"),
            );
        }
        Err(e) => push("value-iteration-dominance", false, e.to_string()),
    }

    // distance sanity on two random policies
    let occ_a = compute_occupancy(mdp, &random_policy_for(mdp, 7)).unwrap();
    let occ_b = compute_occupancy(mdp, &random_policy_for(mdp, 8)).unwrap();
    let dist = l1_occupancy_distance(&occ_a, &occ_b).unwrap_or(f64::NAN);
    let bound = 2.0 * mdp.horizon() as f64;
    push(
        "l1-distance-bound",
        (0.0..=bound + 1e-12).contains(&dist),
        format!("distance {dist} within [0, {bound}]"),
    );
    out
}

fn random_policy_for(mdp: &TabularMdp, seed: u64) -> Policy {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    let mut probs = ndarray::Array3::zeros((hn, sn, an));
    for h in 0..hn {
        for s in 0..sn {
            let row = crate::envs::random_simplex_row(&mut rng, an);
            for (a, p) in row.iter().enumerate() {
                probs[[h, s, a]] = *p;
            }
        }
    }
    Policy::new(probs).expect("simplex rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(dir: &Path) -> String {
        let _ = dir;
        r#"
[experiment]
master_seed = 7
seeds = [0, 1]
budgets = [50]
m = 10

[env]
kind = "reset-cliff"
states = 4
actions = 2
horizon = 3

[algorithms.bc]

[algorithms.mbtail]
iterations = 30
rfe_bonus_coeff = 0.001
"#
        .to_string()
    }

    #[test]
    fn config_parses_and_runs_deterministically() {
        let dir = std::env::temp_dir();
        let cfg = load_config_str(&tiny_config(&dir), &dir).unwrap();
        assert_eq!(cfg.algorithms.len(), 2);
        let rows_a = run_experiment(&cfg, Some(2)).unwrap();
        let rows_b = run_experiment(&cfg, Some(1)).unwrap();
        assert_eq!(results_csv(&rows_a), results_csv(&rows_b));
        assert_eq!(rows_a.len(), 4);
        // bc consumes no interactions
        for r in rows_a.iter().filter(|r| r.algorithm == "bc") {
            assert_eq!(r.interactions, 0);
        }
    }

    #[test]
    fn summary_counts_cells() {
        let dir = std::env::temp_dir();
        let cfg = load_config_str(&tiny_config(&dir), &dir).unwrap();
        let rows = run_experiment(&cfg, Some(2)).unwrap();
        let summary = summary_csv(&rows);
        // 2 algorithms x 1 budget = 2 summary rows (+ schema + header)
        assert_eq!(summary.lines().count(), 4);
        for line in summary.lines().skip(2) {
            assert!(line.contains(",2,"), "2 seeds per summary row: {line}");
        }
    }

    #[test]
    fn plot_data_examples() {
        // empty results: header only
        let empty = format!("{RESULTS_SCHEMA}\n{RESULTS_HEADER}\n");
        let table = plot_data(&empty).unwrap();
        assert_eq!(table.lines().count(), 1);
        assert!(table.starts_with("# interactions"));

        let dir = std::env::temp_dir();
        let cfg = load_config_str(&tiny_config(&dir), &dir).unwrap();
        let rows = run_experiment(&cfg, Some(2)).unwrap();
        let table = plot_data(&results_csv(&rows)).unwrap();
        assert_eq!(table.lines().count(), 2); // header + one budget line

        let bad = format!("{RESULTS_SCHEMA}\n{RESULTS_HEADER}\nbc,0,notanumber,0,10,,0,0,10,,\n");
        match plot_data(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_algorithm_is_rejected() {
        let text = r#"
[experiment]
master_seed = 1
seeds = [0]
budgets = [10]
m = 4

[env]
kind = "reset-cliff"
states = 4
actions = 2
horizon = 3

[algorithms.gail]
"#;
        assert!(load_config_str(text, Path::new(".")).is_err());
    }

    #[test]
    fn check_suite_passes_on_a_valid_mdp() {
        let mdp = crate::envs::build_random_mdp(4, 2, 4, 3).unwrap();
        let outcomes = check_mdp(&mdp);
        assert!(outcomes.iter().all(|c| c.passed), "{:?}", outcomes
            .iter()
            .map(|c| (c.name, c.passed))
            .collect::<Vec<_>>());
    }
}
