//! Occupancy measures and the two equivalent ways to value a policy.
//!
//! ```bash
//! cargo run --example occupancy_basics
//! ```

use tabular_ail::envs::build_random_mdp;
use tabular_ail::{
    compute_occupancy, evaluate_policy_direct, l1_occupancy_distance, policy_value,
    value_iteration, Policy,
};

fn main() -> tabular_ail::Result<()> {
    let mdp = build_random_mdp(4, 2, 5, 7)?;
    let uniform = Policy::uniform(5, 4, 2);

    let occupancy = compute_occupancy(&mdp, &uniform)?;
    for h in 0..5 {
        let mass: f64 = (0..4)
            .flat_map(|s| (0..2).map(move |a| (s, a)))
            .map(|(s, a)| occupancy.values()[[h, s, a]])
            .sum();
        println!("step {h}: layer mass = {mass:.12}");
    }

    let rewards = mdp.rewards().expect("random MDPs carry rewards");
    let dual = policy_value(&occupancy, rewards)?;
    let direct = evaluate_policy_direct(&mdp, &uniform, None)?;
    println!("uniform policy value: dual form {dual:.9}, backward recursion {direct:.9}");

    let (optimal, v_star) = value_iteration(&mdp, rewards)?;
    println!("optimal value {v_star:.9}");
    let gap_to_uniform = l1_occupancy_distance(&compute_occupancy(&mdp, &optimal)?, &occupancy)?;
    println!("occupancy distance between optimal and uniform: {gap_to_uniform:.6}");
    Ok(())
}
