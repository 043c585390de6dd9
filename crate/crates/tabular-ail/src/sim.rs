//! Sampling access to an environment, and the exact-evaluation handle used
//! for reporting.
//!
//! Learning code receives the true MDP only through [`EnvSampler`], which
//! exposes dimensions and episode rollouts but not the transition tensor.
//! The handle counts episodes, so reported interaction budgets can be
//! cross-checked against what was actually sampled.

use rand::Rng;

use crate::error::{Error, Result};
use crate::mdp::{
    evaluate_policy_direct, sample_trajectory, Policy, TabularMdp, Trajectory, TrajectoryDataset,
};

pub struct EnvSampler<'a> {
    mdp: &'a TabularMdp,
    env_episodes: u64,
    expert_episodes: u64,
}

impl<'a> EnvSampler<'a> {
    pub fn new(mdp: &'a TabularMdp) -> Self {
        Self {
            mdp,
            env_episodes: 0,
            expert_episodes: 0,
        }
    }

    pub fn num_states(&self) -> usize {
        self.mdp.num_states()
    }

    pub fn num_actions(&self) -> usize {
        self.mdp.num_actions()
    }

    pub fn horizon(&self) -> usize {
        self.mdp.horizon()
    }

    /// Episodes the learner has collected from the environment.
    pub fn env_episodes(&self) -> u64 {
        self.env_episodes
    }

    /// Episodes generated by the expert (charged to the expert sample
    /// budget, not to interactions).
    pub fn expert_episodes(&self) -> u64 {
        self.expert_episodes
    }

    /// One learner episode following `policy`.
    pub fn rollout<R: Rng + ?Sized>(&mut self, policy: &Policy, rng: &mut R) -> Trajectory {
        self.env_episodes += 1;
        sample_trajectory(self.mdp, policy, rng)
    }

    /// One learner episode where the action at `(h, s)` is chosen by `act`.
    /// Used by exploration loops that re-derive a greedy table per episode.
    pub fn rollout_with<R, F>(&mut self, mut act: F, rng: &mut R) -> Trajectory
    where
        R: Rng + ?Sized,
        F: FnMut(usize, usize) -> usize,
    {
        self.env_episodes += 1;
        let hn = self.mdp.horizon();
        let mut steps = Vec::with_capacity(hn);
        let mut s = crate::mdp::sample_index(
            self.mdp.initial_dist().as_slice().expect("contiguous"),
            rng,
        );
        for h in 0..hn {
            let a = act(h, s);
            steps.push((s, a));
            if h + 1 < hn {
                let row = self.mdp.transitions().slice(ndarray::s![h, s, a, ..]);
                s = crate::mdp::sample_index(row.as_slice().expect("contiguous row"), rng);
            }
        }
        Trajectory::new(steps, hn, self.mdp.num_states(), self.mdp.num_actions())
            .expect("rollout produces a valid trajectory")
    }

    pub fn collect<R: Rng + ?Sized>(
        &mut self,
        policy: &Policy,
        count: usize,
        rng: &mut R,
    ) -> TrajectoryDataset {
        TrajectoryDataset::new((0..count).map(|_| self.rollout(policy, rng)).collect())
    }

    /// `count` expert demonstrations.
    pub fn collect_expert<R: Rng + ?Sized>(
        &mut self,
        expert: &Policy,
        count: usize,
        rng: &mut R,
    ) -> TrajectoryDataset {
        self.expert_episodes += count as u64;
        TrajectoryDataset::new(
            (0..count)
                .map(|_| sample_trajectory(self.mdp, expert, rng))
                .collect(),
        )
    }
}

/// Exact gap reporting against the true MDP and true rewards. Kept separate
/// from [`EnvSampler`] so learning code never touches it.
pub struct GapOracle<'a> {
    mdp: &'a TabularMdp,
    expert_value: f64,
}

impl<'a> GapOracle<'a> {
    pub fn new(mdp: &'a TabularMdp, expert: &Policy) -> Result<Self> {
        if mdp.rewards().is_none() {
            return Err(Error::Config("gap oracle needs an MDP with rewards".into()));
        }
        let expert_value = evaluate_policy_direct(mdp, expert, None)?;
        Ok(Self { mdp, expert_value })
    }

    pub fn expert_value(&self) -> f64 {
        self.expert_value
    }

    /// `V^{pi_E} - V^{pi}` under the true dynamics and rewards.
    pub fn gap(&self, policy: &Policy) -> Result<f64> {
        Ok(self.expert_value - evaluate_policy_direct(self.mdp, policy, None)?)
    }
}

/// Exact imitation gap `V^{pi_E} - V^{pi}` of a learned policy.
pub fn imitation_gap(true_mdp: &TabularMdp, expert: &Policy, learned: &Policy) -> Result<f64> {
    let oracle = GapOracle::new(true_mdp, expert)?;
    oracle.gap(learned)
}
