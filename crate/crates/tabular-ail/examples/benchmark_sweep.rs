//! A desk-scale benchmark sweep through the harness API: gap versus
//! interaction budget, with mean and standard error over seeds, plus the
//! plot-data reduction.
//!
//! ```bash
//! cargo run --release --example benchmark_sweep
//! ```
//!
//! The full 20-seed protocol lives in `configs/reset_cliff_paper.toml` and
//! runs through the CLI: `tabular-ail run --config configs/reset_cliff_paper.toml`.

use std::path::Path;

use tabular_ail::harness::{load_config_str, plot_data, results_csv, run_experiment, summary_csv};

const CONFIG: &str = r#"
[experiment]
master_seed = 20240901
seeds = [0, 1, 2, 3, 4]
budgets = [500, 2000]
m = 100

[env]
kind = "reset-cliff"
states = 20
actions = 5
horizon = 20

[algorithms.bc]

[algorithms.oal]
iterations = 500

[algorithms.mbtail]
iterations = 500
eps = 1e-6
rfe_bonus_coeff = 5e-4
"#;

fn main() -> tabular_ail::Result<()> {
    let cfg = load_config_str(CONFIG, Path::new("."))?;
    let rows = run_experiment(&cfg, None)?;
    println!("summary (gap mean / stderr by algorithm and budget):");
    print!("{}", summary_csv(&rows));
    println!("\nplot-data table:");
    print!("{}", plot_data(&results_csv(&rows))?);
    Ok(())
}
