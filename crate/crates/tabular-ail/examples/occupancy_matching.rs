//! The saddle-point matcher: online projected gradient descent on an
//! adversarial reward against an exact inner planner.
//!
//! ```bash
//! cargo run --example occupancy_matching
//! ```

use tabular_ail::envs::build_random_mdp;
use tabular_ail::matching::{solve_matching, OptimizerConfig, SaddleTrace};
use tabular_ail::{compute_occupancy, l1_occupancy_distance, Policy};

fn main() -> tabular_ail::Result<()> {
    let model = build_random_mdp(4, 3, 5, 11)?;
    // a feasible target: the occupancy of some policy under the same model
    let target = compute_occupancy(&model, &Policy::uniform(5, 4, 3))?;

    for iterations in [50usize, 200, 1000] {
        let cfg = OptimizerConfig::adaptive(iterations);
        let (policy, trace) = solve_matching(&model, &target, &cfg)?;
        let achieved = l1_occupancy_distance(&compute_occupancy(&model, &policy)?, &target)?;
        let regret = trace.measured_regret(&target)?;
        let bound = SaddleTrace::regret_bound(5, 4, 3, iterations);
        println!(
            "T = {iterations:>5}: matching distance {achieved:.5}, \
             regret {regret:>9.4} (bound {bound:.1})"
        );
    }

    let (_, trace) = solve_matching(&model, &target, &OptimizerConfig::adaptive(5))?;
    println!("\nfirst iterations of the trace:");
    print!("{}", trace.to_csv_string());
    Ok(())
}
