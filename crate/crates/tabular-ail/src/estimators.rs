//! Expert state-action-distribution estimators: the count-based MLE and the
//! transition-aware two-part estimator built from a dataset split plus
//! on-policy rollouts.

use ndarray::Array3;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mdp::{OccupancyMeasure, Policy, Trajectory, TrajectoryDataset};

/// A random equal split of an expert dataset. [`split_dataset`] produces
/// halves of size `m/2`; the constructor itself does not enforce equal
/// sizes so degenerate fixtures can be built directly.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub d1: TrajectoryDataset,
    pub d1c: TrajectoryDataset,
}

impl DatasetSplit {
    pub fn new(d1: TrajectoryDataset, d1c: TrajectoryDataset) -> Self {
        Self { d1, d1c }
    }
}

/// Per-step sets of visited states, the factorized representation of the
/// prefix-covered trajectory set. Membership of a length-h prefix needs only
/// these per-step sets, never the exponential trajectory set itself.
#[derive(Debug, Clone)]
pub struct VisitedStateSets {
    per_step: Vec<Vec<bool>>,
}

impl VisitedStateSets {
    pub fn from_dataset(data: &TrajectoryDataset, horizon: usize, num_states: usize) -> Self {
        let mut per_step = vec![vec![false; num_states]; horizon];
        for tr in data.iter() {
            for (h, (s, _)) in tr.steps().iter().enumerate() {
                per_step[h][*s] = true;
            }
        }
        Self { per_step }
    }

    /// Every state marked visited at every step.
    pub fn full(horizon: usize, num_states: usize) -> Self {
        Self {
            per_step: vec![vec![true; num_states]; horizon],
        }
    }

    pub fn contains(&self, h: usize, s: usize) -> bool {
        self.per_step[h][s]
    }

    pub fn horizon(&self) -> usize {
        self.per_step.len()
    }
}

/// True iff every state of `tr` at steps `0..=step` was visited at the
/// corresponding step. (`step` is 0-based.)
pub fn trajectory_in_tr_set(tr: &Trajectory, step: usize, visited: &VisitedStateSets) -> bool {
    (0..=step).all(|h| visited.contains(h, tr.state(h)))
}

/// Count-based MLE of the expert state-action distribution:
/// `d_h(s,a) = (1/|D|) sum_tr 1{tr_h = (s,a)}`.
pub fn mle_estimator(
    data: &TrajectoryDataset,
    horizon: usize,
    num_states: usize,
    num_actions: usize,
) -> Result<OccupancyMeasure> {
    if data.is_empty() {
        return Err(Error::Config("MLE needs a nonempty dataset".into()));
    }
    let mut values = Array3::zeros((horizon, num_states, num_actions));
    let weight = 1.0 / data.len() as f64;
    for tr in data.iter() {
        for (h, (s, a)) in tr.steps().iter().enumerate() {
            values[[h, *s, *a]] += weight;
        }
    }
    OccupancyMeasure::estimate(values)
}

/// Uniform random partition of an even-sized dataset into two equal halves.
pub fn split_dataset<R: Rng + ?Sized>(
    data: &TrajectoryDataset,
    rng: &mut R,
) -> Result<DatasetSplit> {
    let m = data.len();
    if m % 2 != 0 {
        return Err(Error::Config(format!(
            "dataset split needs an even size, got {m}"
        )));
    }
    let mut indices: Vec<usize> = (0..m).collect();
    // Fisher-Yates
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        indices.swap(i, j);
    }
    let d1 = TrajectoryDataset::new(indices[..m / 2].iter().map(|i| data.get(*i).clone()).collect());
    let d1c =
        TrajectoryDataset::new(indices[m / 2..].iter().map(|i| data.get(*i).clone()).collect());
    Ok(DatasetSplit::new(d1, d1c))
}

/// Count-ratio behavioral cloning: `pi_h(a|s) = n_h(s,a)/n_h(s)` on visited
/// `(h, s)`, uniform elsewhere.
pub fn bc_policy(
    data: &TrajectoryDataset,
    num_states: usize,
    num_actions: usize,
    horizon: usize,
) -> Policy {
    let mut counts = Array3::<f64>::zeros((horizon, num_states, num_actions));
    for tr in data.iter() {
        for (h, (s, a)) in tr.steps().iter().enumerate() {
            counts[[h, *s, *a]] += 1.0;
        }
    }
    let mut probs = Array3::from_elem(
        (horizon, num_states, num_actions),
        1.0 / num_actions as f64,
    );
    for h in 0..horizon {
        for s in 0..num_states {
            let total: f64 = (0..num_actions).map(|a| counts[[h, s, a]]).sum();
            if total > 0.0 {
                for a in 0..num_actions {
                    probs[[h, s, a]] = counts[[h, s, a]] / total;
                }
            }
        }
    }
    Policy::new(probs).expect("count ratios form distributions")
}

/// The rollout half of the transition-aware estimator: empirical frequency
/// over `rollouts` restricted to prefix-covered trajectories.
pub(crate) fn rollout_term(
    rollouts: &TrajectoryDataset,
    visited: &VisitedStateSets,
    values: &mut Array3<f64>,
) {
    let weight = 1.0 / rollouts.len() as f64;
    for tr in rollouts.iter() {
        for (h, (s, a)) in tr.steps().iter().enumerate() {
            if !visited.contains(h, *s) {
                break; // prefix left the covered region; later steps excluded too
            }
            values[[h, *s, *a]] += weight;
        }
    }
}

/// The held-out half: MLE over `d1c` restricted to prefixes that left the
/// covered region.
pub(crate) fn held_out_term(
    d1c: &TrajectoryDataset,
    visited: &VisitedStateSets,
    values: &mut Array3<f64>,
) {
    let weight = 1.0 / d1c.len() as f64;
    for tr in d1c.iter() {
        let mut covered = true;
        for (h, (s, a)) in tr.steps().iter().enumerate() {
            if covered && !visited.contains(h, *s) {
                covered = false;
            }
            if !covered {
                values[[h, *s, *a]] += weight;
            }
        }
    }
}

/// The transition-aware estimator: rollout frequencies on the covered
/// region plus held-out MLE on its complement. Layers need not sum to 1;
/// the result is flagged as an estimate and never renormalized.
///
/// Caller contract: `rollouts` were generated by `bc_policy(&split.d1, ..)`.
pub fn transition_aware_estimator(
    split: &DatasetSplit,
    rollouts: &TrajectoryDataset,
    horizon: usize,
    num_states: usize,
    num_actions: usize,
) -> Result<OccupancyMeasure> {
    if rollouts.is_empty() {
        return Err(Error::Config(
            "transition-aware estimator needs nonempty rollouts".into(),
        ));
    }
    if split.d1c.is_empty() {
        return Err(Error::Config(
            "transition-aware estimator needs a nonempty held-out half".into(),
        ));
    }
    let visited = VisitedStateSets::from_dataset(&split.d1, horizon, num_states);
    let mut values = Array3::zeros((horizon, num_states, num_actions));
    rollout_term(rollouts, &visited, &mut values);
    held_out_term(&split.d1c, &visited, &mut values);
    OccupancyMeasure::estimate(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{build_reset_cliff, reset_cliff_expert, ResetCliffSpec};
    use crate::mdp::{compute_occupancy, l1_occupancy_distance, sample_trajectories};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn traj(steps: Vec<(usize, usize)>) -> Trajectory {
        let h = steps.len();
        Trajectory::new(steps, h, 8, 8).unwrap()
    }

    #[test]
    fn mle_single_trajectory_is_indicator() {
        let data = TrajectoryDataset::new(vec![traj(vec![(0, 1), (2, 0)])]);
        let est = mle_estimator(&data, 2, 3, 2).unwrap();
        assert_eq!(est.values()[[0, 0, 1]], 1.0);
        assert_eq!(est.values()[[1, 2, 0]], 1.0);
        assert_eq!(est.values().sum(), 2.0);
        assert!(est.is_estimate());

        let repeated = TrajectoryDataset::new(vec![
            traj(vec![(0, 1), (2, 0)]),
            traj(vec![(0, 1), (2, 0)]),
            traj(vec![(0, 1), (2, 0)]),
        ]);
        let est2 = mle_estimator(&repeated, 2, 3, 2).unwrap();
        assert_eq!(est.values(), est2.values());
    }

    #[test]
    fn mle_rejects_empty_dataset() {
        assert!(mle_estimator(&TrajectoryDataset::default(), 2, 3, 2).is_err());
    }

    #[test]
    fn mle_error_shrinks_at_root_m_rate() {
        let mdp = crate::envs::build_random_mdp(3, 2, 3, 40).unwrap();
        let expert = crate::mdp::value_iteration(&mdp, mdp.rewards().unwrap())
            .unwrap()
            .0;
        let exact = compute_occupancy(&mdp, &expert).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let ms = [100usize, 1000, 10_000, 100_000];
        let mut errs = Vec::new();
        for m in ms {
            let data = sample_trajectories(&mdp, &expert, m, &mut rng);
            let est = mle_estimator(&data, 3, 3, 2).unwrap();
            errs.push(l1_occupancy_distance(&est, &exact).unwrap());
        }
        // least-squares slope of log err vs log m
        let xs: Vec<f64> = ms.iter().map(|m| (*m as f64).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let xm = xs.iter().sum::<f64>() / 4.0;
        let ym = ys.iter().sum::<f64>() / 4.0;
        let slope = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xm) * (y - ym))
            .sum::<f64>()
            / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
        assert!(
            (-0.6..=-0.4).contains(&slope),
            "MLE slope {slope}, errors {errs:?}"
        );
    }

    #[test]
    fn split_examples() {
        let data = TrajectoryDataset::new(vec![
            traj(vec![(0, 0)]),
            traj(vec![(1, 0)]),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let split = split_dataset(&data, &mut rng).unwrap();
        assert_eq!(split.d1.len(), 1);
        assert_eq!(split.d1c.len(), 1);

        let mut rng_a = ChaCha8Rng::seed_from_u64(4);
        let mut rng_b = ChaCha8Rng::seed_from_u64(4);
        let s1 = split_dataset(&data, &mut rng_a).unwrap();
        let s2 = split_dataset(&data, &mut rng_b).unwrap();
        assert_eq!(s1.d1, s2.d1);
        assert_eq!(s1.d1c, s2.d1c);

        let odd = TrajectoryDataset::new(vec![traj(vec![(0, 0)])]);
        assert!(split_dataset(&odd, &mut rng).is_err());
    }

    #[test]
    fn split_partitions_are_uniform() {
        // 4 distinguishable trajectories; the 2-2 partitions {01|23}, {02|13},
        // {03|12} (unordered) should each appear with frequency 1/3.
        let data = TrajectoryDataset::new((0..4).map(|s| traj(vec![(s, 0)])).collect());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let split = split_dataset(&data, &mut rng).unwrap();
            let mut pair: Vec<usize> = split.d1.iter().map(|t| t.state(0)).collect();
            pair.sort_unstable();
            let partner_of_0 = if pair.contains(&0) {
                pair.iter().copied().find(|s| *s != 0).unwrap()
            } else {
                // 0 is in d1c; its partner there determines the same partition
                let mut other: Vec<usize> = split.d1c.iter().map(|t| t.state(0)).collect();
                other.sort_unstable();
                other.iter().copied().find(|s| *s != 0).unwrap()
            };
            counts[partner_of_0 - 1] += 1;
        }
        let sigma = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!(
                (c as f64 - n as f64 / 3.0).abs() <= 5.0 * sigma,
                "partition counts {counts:?}"
            );
        }
    }

    #[test]
    fn bc_policy_examples() {
        let empty = TrajectoryDataset::default();
        let pol = bc_policy(&empty, 3, 2, 2);
        assert_eq!(pol.probs()[[0, 0, 0]], 0.5);

        // counts n(s, a0) = 3, n(s, a1) = 1 at (h=0, s=0)
        let data = TrajectoryDataset::new(vec![
            traj(vec![(0, 0)]),
            traj(vec![(0, 0)]),
            traj(vec![(0, 0)]),
            traj(vec![(0, 1)]),
        ]);
        let pol = bc_policy(&data, 3, 2, 1);
        assert!((pol.probs()[[0, 0, 0]] - 0.75).abs() < 1e-12);
        assert!((pol.probs()[[0, 0, 1]] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bc_copies_a_deterministic_expert_on_visited_states() {
        let spec = ResetCliffSpec {
            num_states: 5,
            num_actions: 3,
            horizon: 4,
            expert_trajectory_count_m: 20,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let expert = reset_cliff_expert(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let data = sample_trajectories(&mdp, &expert, 20, &mut rng);
        let pol = bc_policy(&data, 5, 3, 4);
        for tr in data.iter() {
            for (h, (s, _)) in tr.steps().iter().enumerate() {
                assert_eq!(pol.probs()[[h, *s, spec.expert_action()]], 1.0);
            }
        }
    }

    #[test]
    fn tr_set_membership() {
        let all = VisitedStateSets::full(3, 4);
        let tr = traj(vec![(0, 0), (1, 0), (2, 0)]);
        assert!(trajectory_in_tr_set(&tr, 2, &all));

        let empty = VisitedStateSets::from_dataset(&TrajectoryDataset::default(), 3, 4);
        assert!(!trajectory_in_tr_set(&tr, 0, &empty));

        // visited = {s0} at every step; tr = (s0, ., s1, .)
        let cover = TrajectoryDataset::new(vec![traj(vec![(0, 0), (0, 0)])]);
        let visited = VisitedStateSets::from_dataset(&cover, 2, 4);
        let tr = traj(vec![(0, 0), (1, 0)]);
        assert!(trajectory_in_tr_set(&tr, 0, &visited)); // spec's h = 1
        assert!(!trajectory_in_tr_set(&tr, 1, &visited)); // spec's h = 2
    }

    #[test]
    fn estimator_with_empty_d1_reduces_to_held_out_mle() {
        let d1c = TrajectoryDataset::new(vec![traj(vec![(0, 0), (1, 1)]), traj(vec![(2, 1), (1, 0)])]);
        let split = DatasetSplit::new(TrajectoryDataset::default(), d1c.clone());
        let rollouts = TrajectoryDataset::new(vec![traj(vec![(0, 0), (0, 0)])]);
        let est = transition_aware_estimator(&split, &rollouts, 2, 3, 2).unwrap();
        let mle = mle_estimator(&d1c, 2, 3, 2).unwrap();
        assert_eq!(est.values(), mle.values());
    }

    #[test]
    fn estimator_with_full_coverage_is_rollout_frequency() {
        // deterministic MDP, d1 covers everything on-path
        let spec = ResetCliffSpec {
            num_states: 4,
            num_actions: 2,
            horizon: 3,
            expert_trajectory_count_m: 4,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let expert = reset_cliff_expert(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let d1 = sample_trajectories(&mdp, &expert, 200, &mut rng);
        let d1c = sample_trajectories(&mdp, &expert, 200, &mut rng);
        let rollouts = sample_trajectories(&mdp, &expert, 50, &mut rng);
        // with 200 expert trajectories every live state is visited at every step
        let split = DatasetSplit::new(d1, d1c);
        let est = transition_aware_estimator(&split, &rollouts, 3, 4, 2).unwrap();
        let freq = mle_estimator(&rollouts, 3, 4, 2).unwrap();
        assert_eq!(est.values(), freq.values());
    }

    #[test]
    fn estimator_rejects_empty_inputs() {
        let data = TrajectoryDataset::new(vec![traj(vec![(0, 0)]), traj(vec![(1, 0)])]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let split = split_dataset(&data, &mut rng).unwrap();
        assert!(transition_aware_estimator(&split, &TrajectoryDataset::default(), 1, 3, 2).is_err());
        let bad = DatasetSplit::new(data.clone(), TrajectoryDataset::default());
        let rollouts = TrajectoryDataset::new(vec![traj(vec![(0, 0)])]);
        assert!(transition_aware_estimator(&bad, &rollouts, 1, 3, 2).is_err());
    }

    #[test]
    fn estimator_is_nonnegative_and_bounded() {
        let spec = ResetCliffSpec {
            num_states: 5,
            num_actions: 3,
            horizon: 4,
            expert_trajectory_count_m: 10,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let expert = reset_cliff_expert(&spec);
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = sample_trajectories(&mdp, &expert, 10, &mut rng);
            let split = split_dataset(&data, &mut rng).unwrap();
            let bc = bc_policy(&split.d1, 5, 3, 4);
            let rollouts = sample_trajectories(&mdp, &bc, 40, &mut rng);
            let est = transition_aware_estimator(&split, &rollouts, 5.min(4), 5, 3).unwrap();
            assert!(est.values().iter().all(|v| *v >= 0.0));
            for h in 0..4 {
                let layer: f64 = est.values().slice(ndarray::s![h, .., ..]).sum();
                assert!(layer <= 2.0 + 1e-12);
            }
        }
    }
}
