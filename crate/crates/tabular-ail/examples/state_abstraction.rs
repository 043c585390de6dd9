//! State abstractions: bisimulation checking, the abstract MDP, the lifting
//! identities, and the abstract pipeline whose cost tracks the abstract
//! space size rather than the raw one.
//!
//! ```bash
//! cargo run --release --example state_abstraction
//! ```

use tabular_ail::abstraction::{
    abstract_occupancy, build_abstract_mdp, check_bisimulation, duplicate_states, lift_policy,
    StateAbstraction,
};
use tabular_ail::algorithms::{run_mbtail, run_mbtail_abstract, ImitationBudget, MbtailConfig};
use tabular_ail::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use tabular_ail::matching::OptimizerConfig;
use tabular_ail::rfe::BonusParams;
use tabular_ail::{compute_occupancy, evaluate_policy_direct, EnvSampler, GapOracle, Policy};

fn main() -> tabular_ail::Result<()> {
    let spec = ResetCliffSpec {
        num_states: 6,
        num_actions: 3,
        horizon: 6,
        expert_trajectory_count_m: 50,
    };
    let base = build_reset_cliff(&spec)?;
    let base_expert = reset_cliff_expert(&spec);

    // widen the cliff: every state duplicated 4 times, identical rows
    let (wide, abs) = duplicate_states(&base, 4)?;
    let wide_expert = lift_policy(&base_expert, &StateAbstraction::identity(6, 6))
        .and_then(|p| lift_policy(&p, &abs))?;
    let check = check_bisimulation(&wide, &wide_expert, &abs)?;
    println!(
        "24-state duplicate of the 6-state cliff: bisimulation passes = {}",
        check.passes
    );

    // the lifting identities, on a random abstract policy
    let abs_mdp = build_abstract_mdp(&wide, &abs)?;
    let pol = Policy::uniform(6, 6, 3);
    let v_abs = evaluate_policy_direct(&abs_mdp, &pol, None)?;
    let v_conc = evaluate_policy_direct(&wide, &lift_policy(&pol, &abs)?, None)?;
    println!("value lifting: abstract {v_abs:.9} vs lifted-concrete {v_conc:.9}");
    let d_abs = compute_occupancy(&abs_mdp, &pol)?;
    let d_lift = abstract_occupancy(&wide, &lift_policy(&pol, &abs)?, &abs)?;
    let worst = d_abs
        .values()
        .iter()
        .zip(d_lift.values().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("occupancy lifting: worst cell deviation {worst:.2e}");

    // run the pipeline both ways on the wide MDP
    let oracle = GapOracle::new(&wide, &wide_expert)?;
    let budget = ImitationBudget::new(50, 3000);
    let cfg = MbtailConfig {
        rfe_bonus: BonusParams::with_coeff(1e-3),
        optimizer: OptimizerConfig::adaptive(300),
        ..MbtailConfig::default()
    };
    let mut env = EnvSampler::new(&wide);
    let flat = run_mbtail(&mut env, &wide_expert, &budget, &cfg, &oracle, 9)?;
    let mut env = EnvSampler::new(&wide);
    let abstracted =
        run_mbtail_abstract(&mut env, &wide_expert, &abs, &budget, &cfg, &oracle, 9)?;
    println!(
        "pipeline on 24 raw states: gap {:.4}; through the 6-block abstraction: gap {:.4}",
        flat.imitation_gap, abstracted.imitation_gap
    );
    Ok(())
}
