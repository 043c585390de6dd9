//! Reward-free exploration on a random MDP: run the bonus-driven loop to
//! its natural stop, then probe how uniformly accurate the learned model is.
//!
//! ```bash
//! cargo run --release --example reward_free_exploration
//! ```

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabular_ail::envs::build_random_mdp;
use tabular_ail::rfe::{rf_express, uniform_evaluation_error, BonusParams, RfeConfig};
use tabular_ail::EnvSampler;

fn main() -> tabular_ail::Result<()> {
    let mdp = build_random_mdp(4, 2, 4, 42)?;
    let epsilon = 0.5;

    // The theoretical bonus coefficient (15) is far too conservative to stop
    // in any reasonable time at this scale; scale it down for a desk run.
    let mut cfg = RfeConfig::new(epsilon, 0.05, 2_000_000);
    cfg.bonus = BonusParams::with_coeff(0.005);

    let mut env = EnvSampler::new(&mdp);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let outcome = rf_express(&mut env, &cfg, &mut rng)?;
    println!(
        "stopping rule fired after {} episodes (early cutoff: {})",
        outcome.episodes_used, outcome.stopped_early
    );
    println!(
        "least-visited cell count: {}",
        outcome.model.visit_counts().iter().min().unwrap()
    );

    let probed = uniform_evaluation_error(&mdp, &outcome.model, 50, &mut rng)?;
    println!(
        "probed uniform evaluation error: {probed:.5} (target epsilon/2 = {:.3})",
        epsilon / 2.0
    );
    Ok(())
}
