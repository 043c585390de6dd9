//! A tabular episodic-MDP imitation-learning laboratory.
//!
//! The crate builds up from exact MDP machinery ([`mdp`]) and benchmark
//! environments ([`envs`]) to reward-free exploration ([`rfe`]), expert
//! state-action-distribution estimators ([`estimators`]), a saddle-point
//! occupancy-matching solver ([`matching`]), complete imitation algorithms
//! ([`algorithms`]), a state-abstraction layer ([`abstraction`]), and a
//! seeded experiment harness ([`harness`]).
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability, from `occupancy_basics` to `benchmark_sweep`.

pub mod abstraction;
pub mod algorithms;
pub mod envs;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod matching;
pub mod mdp;
pub mod rfe;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use mdp::{
    compute_occupancy, evaluate_policy_direct, l1_occupancy_distance, policy_value,
    sample_trajectories, sample_trajectory, value_iteration, OccupancyMeasure, Policy,
    RewardWeights, TabularMdp, Trajectory, TrajectoryDataset,
};
pub use sim::{imitation_gap, EnvSampler, GapOracle};
