//! Comparing the count-based MLE with the transition-aware two-part
//! estimator of the expert's state-action distribution.
//!
//! ```bash
//! cargo run --release --example expert_estimators
//! ```

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabular_ail::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
use tabular_ail::estimators::{bc_policy, mle_estimator, split_dataset, transition_aware_estimator};
use tabular_ail::{compute_occupancy, l1_occupancy_distance, sample_trajectories};

fn main() -> tabular_ail::Result<()> {
    println!("{:>6} {:>12} {:>18}", "m", "mle L1", "transition-aware L1");
    for &m in &[20usize, 60, 200, 600, 2000] {
        let spec = ResetCliffSpec {
            num_states: 6,
            num_actions: 3,
            horizon: 6,
            expert_trajectory_count_m: m,
        };
        let mdp = build_reset_cliff(&spec)?;
        let expert = reset_cliff_expert(&spec);
        let exact = compute_occupancy(&mdp, &expert)?;

        let seeds = 10;
        let (mut mle_err, mut ta_err) = (0.0, 0.0);
        for seed in 0..seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let demos = sample_trajectories(&mdp, &expert, m, &mut rng);
            let mle = mle_estimator(&demos, 6, 6, 3)?;
            mle_err += l1_occupancy_distance(&mle, &exact)?;

            let split = split_dataset(&demos, &mut rng)?;
            let clone = bc_policy(&split.d1, 6, 3, 6);
            let rollouts = sample_trajectories(&mdp, &clone, 10 * m, &mut rng);
            let ta = transition_aware_estimator(&split, &rollouts, 6, 6, 3)?;
            ta_err += l1_occupancy_distance(&ta, &exact)?;
        }
        println!(
            "{m:>6} {:>12.5} {:>18.5}",
            mle_err / seeds as f64,
            ta_err / seeds as f64
        );
    }
    println!("(the two-part estimator rides the transition information in its rollouts)");
    Ok(())
}
