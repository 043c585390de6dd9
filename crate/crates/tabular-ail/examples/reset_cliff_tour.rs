//! A tour of the Reset Cliff benchmark: why one wrong action is fatal and
//! why behavioral cloning stumbles on rarely-started states.
//!
//! ```bash
//! cargo run --example reset_cliff_tour
//! ```

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabular_ail::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use tabular_ail::estimators::bc_policy;
use tabular_ail::{evaluate_policy_direct, imitation_gap, sample_trajectories, Policy};

fn main() -> tabular_ail::Result<()> {
    let spec = ResetCliffSpec {
        num_states: 20,
        num_actions: 5,
        horizon: 20,
        expert_trajectory_count_m: 100,
    };
    let mdp = build_reset_cliff(&spec)?;
    let expert = reset_cliff_expert(&spec);

    println!(
        "expert value: {:.6} (one reward per step, never absorbed)",
        evaluate_policy_direct(&mdp, &expert, None)?
    );
    let defector = Policy::constant(20, 20, 5, 0)?;
    println!(
        "always-defect value: {:.6}",
        evaluate_policy_direct(&mdp, &defector, None)?
    );

    for (seed, m) in [(1u64, 10), (2, 100), (3, 1000)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let demos = sample_trajectories(&mdp, &expert, m, &mut rng);
        let cloned = bc_policy(&demos, 20, 5, 20);
        let gap = imitation_gap(&mdp, &expert, &cloned)?;
        println!("behavioral cloning with m = {m:>4}: imitation gap {gap:.4}");
    }
    Ok(())
}
