//! The full transition-aware pipeline on a shrunken cliff, next to the
//! baselines, at a few interaction budgets.
//!
//! ```bash
//! cargo run --release --example mbtail_pipeline
//! ```

use tabular_ail::algorithms::{
    run_bc, run_mbtail, run_oal, ImitationBudget, MbtailConfig, OalConfig,
};
use tabular_ail::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use tabular_ail::matching::OptimizerConfig;
use tabular_ail::rfe::BonusParams;
use tabular_ail::{EnvSampler, GapOracle};

fn main() -> tabular_ail::Result<()> {
    let spec = ResetCliffSpec {
        num_states: 6,
        num_actions: 3,
        horizon: 6,
        expert_trajectory_count_m: 50,
    };
    let mdp = build_reset_cliff(&spec)?;
    let expert = reset_cliff_expert(&spec);
    let oracle = GapOracle::new(&mdp, &expert)?;
    println!("expert value: {:.4}\n", oracle.expert_value());

    let seed = 3;
    let mbtail_cfg = MbtailConfig {
        rfe_bonus: BonusParams::with_coeff(5e-4),
        optimizer: OptimizerConfig::adaptive(500),
        ..MbtailConfig::default()
    };
    let oal_cfg = OalConfig::default();

    println!(
        "{:>12} {:>10} {:>10} {:>10}",
        "interactions", "bc", "oal", "mbtail"
    );
    for &budget in &[200u64, 1000, 4000] {
        let budget_cfg = ImitationBudget::new(50, budget);

        let mut env = EnvSampler::new(&mdp);
        let bc = run_bc(&mut env, &expert, &budget_cfg, &oracle, seed)?;
        let mut env = EnvSampler::new(&mdp);
        let oal = run_oal(&mut env, &expert, &budget_cfg, &oal_cfg, &oracle, seed)?;
        let mut env = EnvSampler::new(&mdp);
        let mbtail = run_mbtail(&mut env, &expert, &budget_cfg, &mbtail_cfg, &oracle, seed)?;
        println!(
            "{budget:>12} {:>10.4} {:>10.4} {:>10.4}",
            bc.imitation_gap, oal.imitation_gap, mbtail.imitation_gap
        );
    }
    println!("\n(gaps are V_expert - V_learned under the true dynamics and rewards)");
    Ok(())
}
