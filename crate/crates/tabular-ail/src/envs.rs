//! Benchmark environment constructors: the Reset Cliff family and seeded
//! random MDPs.

use ndarray::{Array1, Array2, Array3, Array4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mdp::{Policy, TabularMdp};

/// Parameters of a Reset Cliff instance. The last state index is the
/// absorbing state `b`, the last action index is the expert action.
/// `expert_trajectory_count_m` parameterizes the initial distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResetCliffSpec {
    pub num_states: usize,
    pub num_actions: usize,
    pub horizon: usize,
    pub expert_trajectory_count_m: usize,
}

impl ResetCliffSpec {
    /// Index of the absorbing state `b`.
    pub fn absorbing_state(&self) -> usize {
        self.num_states - 1
    }

    /// Index of the expert action.
    pub fn expert_action(&self) -> usize {
        self.num_actions - 1
    }
}

/// Builds the Reset Cliff MDP.
///
/// Only the expert action is rewarded (+1 outside `b`); every non-expert
/// action from a live state drops deterministically into `b`, which is
/// absorbing and reward-free. The expert action moves uniformly over the
/// `|S|-1` live states. `rho` puts `1/m` on each of the first `|S|-2`
/// states, the remainder on state `|S|-2`, and nothing on `b`.
pub fn build_reset_cliff(spec: &ResetCliffSpec) -> Result<TabularMdp> {
    let ResetCliffSpec {
        num_states: sn,
        num_actions: an,
        horizon: hn,
        expert_trajectory_count_m: m,
    } = *spec;
    if sn < 3 {
        return Err(Error::Config("Reset Cliff needs at least 3 states".into()));
    }
    if an < 2 {
        return Err(Error::Config("Reset Cliff needs at least 2 actions".into()));
    }
    if hn == 0 {
        return Err(Error::Config("horizon must be positive".into()));
    }
    if m == 0 || sn - 2 > m {
        return Err(Error::Config(format!(
            "initial distribution needs (|S|-2)/m <= 1, got |S|={sn}, m={m}"
        )));
    }
    let b = spec.absorbing_state();
    let expert = spec.expert_action();
    let live = (sn - 1) as f64;

    let mut transitions = Array4::zeros((hn.saturating_sub(1), sn, an, sn));
    for h in 0..hn.saturating_sub(1) {
        for s in 0..sn {
            for a in 0..an {
                if s == b || a != expert {
                    transitions[[h, s, a, b]] = 1.0;
                } else {
                    for s2 in 0..sn - 1 {
                        transitions[[h, s, a, s2]] = 1.0 / live;
                    }
                }
            }
        }
    }

    let mut rewards = Array3::zeros((hn, sn, an));
    for h in 0..hn {
        for s in 0..sn - 1 {
            rewards[[h, s, expert]] = 1.0;
        }
    }

    let mut rho = Array1::zeros(sn);
    for s in 0..sn - 2 {
        rho[s] = 1.0 / m as f64;
    }
    rho[sn - 2] = 1.0 - (sn - 2) as f64 / m as f64;

    TabularMdp::new(sn, an, hn, transitions, Some(rewards), rho)
}

/// The deterministic expert for a Reset Cliff instance: always the expert
/// action.
pub fn reset_cliff_expert(spec: &ResetCliffSpec) -> Policy {
    let actions = Array2::from_elem((spec.horizon, spec.num_states), spec.expert_action());
    Policy::deterministic(&actions, spec.num_actions).expect("expert action in range")
}

pub(crate) fn random_simplex_row<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    // flat Dirichlet via normalized Exp(1) draws
    let mut row: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            -(1.0 - u).ln()
        })
        .collect();
    let sum: f64 = row.iter().sum();
    if sum <= 0.0 {
        return vec![1.0 / n as f64; n];
    }
    for v in &mut row {
        *v /= sum;
    }
    row
}

/// A seeded random MDP: transition rows and `rho` from a flat Dirichlet,
/// rewards uniform on `[0, 1]`. Bitwise deterministic in the seed.
pub fn build_random_mdp(
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    rng_seed: u64,
) -> Result<TabularMdp> {
    if num_states == 0 || num_actions == 0 || horizon == 0 {
        return Err(Error::Config("all dimensions must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut transitions = Array4::zeros((horizon - 1, num_states, num_actions, num_states));
    for h in 0..horizon - 1 {
        for s in 0..num_states {
            for a in 0..num_actions {
                let row = random_simplex_row(&mut rng, num_states);
                for (s2, p) in row.iter().enumerate() {
                    transitions[[h, s, a, s2]] = *p;
                }
            }
        }
    }
    let mut rewards = Array3::zeros((horizon, num_states, num_actions));
    for v in rewards.iter_mut() {
        *v = rng.gen();
    }
    let rho = Array1::from_vec(random_simplex_row(&mut rng, num_states));
    TabularMdp::new(
        num_states,
        num_actions,
        horizon,
        transitions,
        Some(rewards),
        rho,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{compute_occupancy, evaluate_policy_direct, value_iteration, Policy};

    #[test]
    fn appendix_instance_expert_value_is_horizon() {
        let spec = ResetCliffSpec {
            num_states: 20,
            num_actions: 5,
            horizon: 20,
            expert_trajectory_count_m: 100,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let expert = reset_cliff_expert(&spec);
        let v = evaluate_policy_direct(&mdp, &expert, None).unwrap();
        assert!((v - 20.0).abs() < 1e-9);
    }

    #[test]
    fn three_state_h1_instance() {
        let spec = ResetCliffSpec {
            num_states: 3,
            num_actions: 2,
            horizon: 1,
            expert_trajectory_count_m: 100,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let rho = mdp.initial_dist();
        assert!((rho[0] - 0.01).abs() < 1e-12);
        assert!((rho[1] - 0.99).abs() < 1e-12);
        assert_eq!(rho[2], 0.0);
        let v = evaluate_policy_direct(&mdp, &reset_cliff_expert(&spec), None).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_expert_policy_earns_nothing() {
        let spec = ResetCliffSpec {
            num_states: 4,
            num_actions: 3,
            horizon: 5,
            expert_trajectory_count_m: 50,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let always_zero = Policy::constant(5, 4, 3, 0).unwrap();
        let v = evaluate_policy_direct(&mdp, &always_zero, None).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn expert_is_optimal_by_value_iteration() {
        let spec = ResetCliffSpec {
            num_states: 6,
            num_actions: 3,
            horizon: 6,
            expert_trajectory_count_m: 30,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let (_, v_star) = value_iteration(&mdp, mdp.rewards().unwrap()).unwrap();
        let v_expert = evaluate_policy_direct(&mdp, &reset_cliff_expert(&spec), None).unwrap();
        assert!((v_star - v_expert).abs() < 1e-12);
    }

    #[test]
    fn absorbing_mass_never_decreases() {
        let spec = ResetCliffSpec {
            num_states: 5,
            num_actions: 3,
            horizon: 6,
            expert_trajectory_count_m: 20,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let b = spec.absorbing_state();
        for seed in 0..5 {
            let (_, pol) = crate::mdp::tests::random_mdp_and_policy(5, 3, 6, seed);
            let occ = compute_occupancy(&mdp, &pol).unwrap();
            let mut prev = 0.0;
            for h in 0..6 {
                let mass: f64 = (0..3).map(|a| occ.values()[[h, b, a]]).sum();
                assert!(mass >= prev - 1e-12, "h={h}: {mass} < {prev}");
                prev = mass;
            }
        }
    }

    #[test]
    fn one_cliff_step_forfeits_the_future() {
        // H=3 instance evaluated by hand: play expert at h=0, defect at h=1.
        let spec = ResetCliffSpec {
            num_states: 4,
            num_actions: 2,
            horizon: 3,
            expert_trajectory_count_m: 10,
        };
        let mdp = build_reset_cliff(&spec).unwrap();
        let mut actions = Array2::from_elem((3, 4), spec.expert_action());
        for s in 0..4 {
            actions[[1, s]] = 0;
        }
        let pol = Policy::deterministic(&actions, 2).unwrap();
        // reward 1 at h=0 (live start), 0 at h=1 (defect), 0 at h=2 (in b)
        let v = evaluate_policy_direct(&mdp, &pol, None).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn m_too_small_is_rejected() {
        let spec = ResetCliffSpec {
            num_states: 20,
            num_actions: 5,
            horizon: 4,
            expert_trajectory_count_m: 10,
        };
        assert!(build_reset_cliff(&spec).is_err());
    }

    #[test]
    fn random_mdp_is_seed_deterministic() {
        let a = build_random_mdp(4, 3, 5, 123).unwrap();
        let b = build_random_mdp(4, 3, 5, 123).unwrap();
        assert_eq!(a, b);
        let c = build_random_mdp(4, 3, 5, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_state_rows_are_one() {
        let mdp = build_random_mdp(1, 2, 3, 9).unwrap();
        for h in 0..2 {
            for a in 0..2 {
                assert_eq!(mdp.transitions()[[h, 0, a, 0]], 1.0);
            }
        }
    }

    #[test]
    fn dirichlet_rows_have_uniform_mean() {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let k = 4usize;
        let mut mean = vec![0.0; k];
        for _ in 0..n {
            let row = random_simplex_row(&mut rng, k);
            for (m, v) in mean.iter_mut().zip(row.iter()) {
                *m += v;
            }
        }
        // Var of a flat Dirichlet coordinate is (1/k)(1-1/k)/(k+1)
        let var = (1.0 / k as f64) * (1.0 - 1.0 / k as f64) / (k as f64 + 1.0);
        let sigma = (var / n as f64).sqrt();
        for m in &mean {
            let avg = m / n as f64;
            assert!(
                (avg - 1.0 / k as f64).abs() <= 5.0 * sigma,
                "mean {avg} vs {} (sigma {sigma})",
                1.0 / k as f64
            );
        }
    }
}
