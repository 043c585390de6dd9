//! Saddle-point occupancy matching: online projected gradient descent over
//! adversarial rewards with an exact inner planner.
//!
//! Each iteration plans an optimal policy for the current reward iterate,
//! steps the reward against the occupancy gap, and finally derives the
//! output policy from the iterate-average occupancy.

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::mdp::{
    compute_occupancy, value_iteration, OccupancyMeasure, Policy, RewardWeights, TabularMdp,
};

/// Step-size rule for the reward player.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// Fixed eta. The theoretical rate is `sqrt(|S||A| / (8T))`.
    Constant(f64),
    /// `eta_t = D / sqrt(sum_{i<=t} ||grad f^{(i)}||^2)`; `None` uses the
    /// feasible-set diameter `D = sqrt(2 H |S||A|)`.
    Adaptive(Option<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub iterations: usize,
    pub step: StepRule,
}

impl OptimizerConfig {
    /// Adaptive steps with the default diameter.
    pub fn adaptive(iterations: usize) -> Self {
        Self {
            iterations,
            step: StepRule::Adaptive(None),
        }
    }

    /// The constant step size matching the theoretical rate.
    pub fn constant_rate(iterations: usize, num_states: usize, num_actions: usize) -> Self {
        let eta = ((num_states * num_actions) as f64 / (8.0 * iterations as f64)).sqrt();
        Self {
            iterations,
            step: StepRule::Constant(eta),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("optimizer needs at least one iteration".into()));
        }
        match self.step {
            StepRule::Constant(eta) if eta <= 0.0 => {
                Err(Error::InvalidValue("constant step must be > 0".into()))
            }
            StepRule::Adaptive(Some(d)) if d <= 0.0 => {
                Err(Error::InvalidValue("adaptive diameter must be > 0".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Default adaptive diameter `sqrt(2 H |S||A|)`.
pub fn default_diameter(horizon: usize, num_states: usize, num_actions: usize) -> f64 {
    (2.0 * horizon as f64 * (num_states * num_actions) as f64).sqrt()
}

/// One iteration record of the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleRecord {
    pub t: usize,
    /// `f^{(t)}(w^{(t)}) = <w^{(t)}, d^{(t)} - target>`.
    pub f_value: f64,
    pub grad_norm: f64,
    pub step_size: f64,
    /// Value of the inner planner's policy under `w^{(t)}`.
    pub inner_value: f64,
    /// Sup norm of the reward iterate after projection.
    pub w_inf_norm: f64,
    /// `sum_h ||d^{(t)}_h - target_h||_1` for this iterate.
    pub matching_distance: f64,
}

/// Per-iteration diagnostics plus the iterate-average occupancy.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleTrace {
    pub records: Vec<SaddleRecord>,
    pub mean_occupancy: OccupancyMeasure,
}

impl SaddleTrace {
    /// CSV export with the stable column set.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t,f_value,grad_norm,step_size,matching_distance\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.t, r.f_value, r.grad_norm, r.step_size, r.matching_distance
            ));
        }
        out
    }

    pub fn sum_f(&self) -> f64 {
        self.records.iter().map(|r| r.f_value).sum()
    }

    /// Measured OGD regret: `sum_t f^{(t)}(w^{(t)}) - min_w sum_t f^{(t)}(w)`.
    /// By linearity the comparator is `-||sum_t grad_t||_1`, and
    /// `sum_t grad_t = T (mean_occupancy - target)`.
    pub fn measured_regret(&self, target: &OccupancyMeasure) -> Result<f64> {
        let t = self.records.len() as f64;
        let gap = crate::mdp::l1_occupancy_distance(&self.mean_occupancy, target)?;
        Ok(self.sum_f() + t * gap)
    }

    /// The theoretical regret bound `2 H sqrt(2 |S||A| T)`.
    pub fn regret_bound(horizon: usize, num_states: usize, num_actions: usize, iterations: usize) -> f64 {
        2.0 * horizon as f64
            * (2.0 * (num_states * num_actions) as f64 * iterations as f64).sqrt()
    }
}

/// `f(w) = sum_h sum_{s,a} w_h(s,a) (pi_occ_h(s,a) - target_h(s,a))`.
pub fn objective_f(
    w: &RewardWeights,
    pi_occ: &OccupancyMeasure,
    target: &OccupancyMeasure,
) -> Result<f64> {
    if w.values().dim() != pi_occ.dim() || pi_occ.dim() != target.dim() {
        return Err(Error::DimensionMismatch("objective operands".into()));
    }
    Ok(w.values()
        .iter()
        .zip(pi_occ.values().iter().zip(target.values().iter()))
        .map(|(w, (d, t))| w * (d - t))
        .sum())
}

/// Euclidean projection onto the sup-norm unit ball, which factorizes into
/// an elementwise clamp.
pub fn project_to_unit_ball(values: &Array3<f64>) -> RewardWeights {
    RewardWeights::new(values.mapv(|v| v.clamp(-1.0, 1.0))).expect("clamped values are feasible")
}

/// `D / sqrt(sum of squared gradient norms)`; zero history sum means the
/// gradients vanished, so no movement.
pub fn adaptive_step(grad_history_sq_norms: &[f64], diameter: f64) -> f64 {
    let sum: f64 = grad_history_sq_norms.iter().sum();
    if sum <= 0.0 {
        0.0
    } else {
        diameter / sum.sqrt()
    }
}

/// Runs the gradient-based matching loop against `target` under the model
/// `model` (typically an estimated transition function wrapped as an MDP).
/// Returns the occupancy-average policy and the trace. States with zero
/// average occupancy get a uniform action distribution.
pub fn solve_matching(
    model: &TabularMdp,
    target: &OccupancyMeasure,
    cfg: &OptimizerConfig,
) -> Result<(Policy, SaddleTrace)> {
    cfg.validate()?;
    let (hn, sn, an) = (model.horizon(), model.num_states(), model.num_actions());
    if target.dim() != (hn, sn, an) {
        return Err(Error::DimensionMismatch(format!(
            "target shape {:?} does not match model ({hn}, {sn}, {an})",
            target.dim()
        )));
    }
    let diameter = match cfg.step {
        StepRule::Adaptive(Some(d)) => d,
        StepRule::Adaptive(None) => default_diameter(hn, sn, an),
        StepRule::Constant(_) => 0.0,
    };
    let mut w = Array3::<f64>::zeros((hn, sn, an));
    let mut grad_sq_sum = 0.0;
    let mut mean = Array3::<f64>::zeros((hn, sn, an));
    let mut records = Vec::with_capacity(cfg.iterations);
    for t in 0..cfg.iterations {
        let (policy, inner_value) = value_iteration(model, &w)?;
        let occ = compute_occupancy(model, &policy)?;
        mean += occ.values();

        let mut f_value = 0.0;
        let mut grad_sq = 0.0;
        let mut distance = 0.0;
        for ((wv, dv), tv) in w.iter().zip(occ.values().iter()).zip(target.values().iter()) {
            let g = dv - tv;
            f_value += wv * g;
            grad_sq += g * g;
            distance += g.abs();
        }
        grad_sq_sum += grad_sq;
        let eta = match cfg.step {
            StepRule::Constant(eta) => eta,
            StepRule::Adaptive(_) => adaptive_step(&[grad_sq_sum], diameter),
        };
        let mut w_inf: f64 = 0.0;
        for (wv, (dv, tv)) in w
            .iter_mut()
            .zip(occ.values().iter().zip(target.values().iter()))
        {
            *wv = (*wv - eta * (dv - tv)).clamp(-1.0, 1.0);
            w_inf = w_inf.max(wv.abs());
        }
        records.push(SaddleRecord {
            t,
            f_value,
            grad_norm: grad_sq.sqrt(),
            step_size: eta,
            inner_value,
            w_inf_norm: w_inf,
            matching_distance: distance,
        });
    }
    mean /= cfg.iterations as f64;

    let mut probs = Array3::from_elem((hn, sn, an), 1.0 / an as f64);
    for h in 0..hn {
        for s in 0..sn {
            let total: f64 = (0..an).map(|a| mean[[h, s, a]]).sum();
            if total > 0.0 {
                for a in 0..an {
                    probs[[h, s, a]] = mean[[h, s, a]] / total;
                }
            }
        }
    }
    let policy = Policy::new(probs)?;
    let trace = SaddleTrace {
        records,
        mean_occupancy: OccupancyMeasure::estimate(mean)?,
    };
    Ok((policy, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::build_random_mdp;
    use crate::mdp::l1_occupancy_distance;
    use ndarray::array;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_policy(hn: usize, sn: usize, an: usize, seed: u64) -> Policy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut probs = Array3::zeros((hn, sn, an));
        for h in 0..hn {
            for s in 0..sn {
                let row = crate::envs::random_simplex_row(&mut rng, an);
                for (a, p) in row.iter().enumerate() {
                    probs[[h, s, a]] = *p;
                }
            }
        }
        Policy::new(probs).unwrap()
    }

    #[test]
    fn objective_examples() {
        let mdp = build_random_mdp(3, 2, 3, 1).unwrap();
        let occ = compute_occupancy(&mdp, &random_policy(3, 3, 2, 2)).unwrap();
        let w = RewardWeights::new(Array3::from_elem((3, 3, 2), 1.0)).unwrap();
        // matching occupancies cancel for every w
        assert_eq!(objective_f(&w, &occ, &occ).unwrap(), 0.0);
        // all-ones against two unit-mass layers cancels too
        let occ2 = compute_occupancy(&mdp, &random_policy(3, 3, 2, 3)).unwrap();
        assert!(objective_f(&w, &occ, &occ2).unwrap().abs() < 1e-9);
        // estimate with deflated mass shows up linearly
        let deflated = OccupancyMeasure::estimate(occ2.values() * 0.9).unwrap();
        let expected = 3.0 - 0.9 * 3.0;
        assert!((objective_f(&w, &occ, &deflated).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn projection_examples() {
        let inside = array![[[0.5, -0.25]]];
        let p = project_to_unit_ball(&inside);
        assert_eq!(p.values(), &inside);
        let outside = array![[[3.5, -2.0]]];
        let p = project_to_unit_ball(&outside);
        assert_eq!(p.values(), &array![[[1.0, -1.0]]]);
    }

    #[test]
    fn projection_is_euclidean_optimal_against_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let w = Array3::from_shape_fn((2, 2, 2), |_| rng.gen_range(-3.0..3.0));
        let proj = project_to_unit_ball(&w);
        let dist = |z: &Array3<f64>| -> f64 {
            z.iter()
                .zip(w.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        };
        let best = dist(proj.values());
        for _ in 0..1000 {
            let z = Array3::from_shape_fn((2, 2, 2), |_| rng.gen_range(-1.0..=1.0));
            assert!(dist(&z) >= best - 1e-12);
        }
    }

    #[test]
    fn adaptive_step_examples() {
        assert_eq!(adaptive_step(&[1.0], 2.0), 2.0);
        // constant gradient norms g over t steps: D / (g sqrt(t))
        let g = 0.7f64;
        let hist: Vec<f64> = vec![g * g; 9];
        let d = 1.3;
        assert!((adaptive_step(&hist, d) - d / (g * 3.0)).abs() < 1e-12);
        assert_eq!(adaptive_step(&[0.0, 0.0], 5.0), 0.0);
        // default diameter at the benchmark size
        assert!((default_diameter(20, 20, 5) - 4000f64.sqrt()).abs() < 1e-12);
        assert!((default_diameter(20, 20, 5) - 63.245_553).abs() < 1e-6);
    }

    #[test]
    fn feasible_target_is_matched_at_the_lemma_rate() {
        let model = build_random_mdp(3, 2, 4, 21).unwrap();
        let target_policy = random_policy(4, 3, 2, 22);
        let target = compute_occupancy(&model, &target_policy).unwrap();
        let iterations = 2000;
        for cfg in [
            OptimizerConfig::adaptive(iterations),
            OptimizerConfig::constant_rate(iterations, 3, 2),
        ] {
            let (policy, trace) = solve_matching(&model, &target, &cfg).unwrap();
            let achieved =
                l1_occupancy_distance(&compute_occupancy(&model, &policy).unwrap(), &target)
                    .unwrap();
            // feasible target: the optimum is 0, so the achieved distance is
            // bounded by the lemma rate (10% slack)
            let rate = 2.0 * 4.0 * (2.0 * 6.0 / iterations as f64).sqrt();
            assert!(
                achieved <= rate * 1.1,
                "achieved {achieved} vs rate {rate} ({cfg:?})"
            );
            // measured regret within the theoretical bound
            let regret = trace.measured_regret(&target).unwrap();
            let bound = SaddleTrace::regret_bound(4, 3, 2, iterations);
            assert!(regret <= bound, "regret {regret} vs bound {bound}");
            // iterate feasibility
            assert!(trace.records.iter().all(|r| r.w_inf_norm <= 1.0 + 1e-12));
        }
    }

    #[test]
    fn average_occupancy_identity() {
        let model = build_random_mdp(4, 3, 4, 31).unwrap();
        let target_policy = random_policy(4, 4, 3, 32);
        let target = compute_occupancy(&model, &target_policy).unwrap();
        let (policy, trace) = solve_matching(&model, &target, &OptimizerConfig::adaptive(50)).unwrap();
        let induced = compute_occupancy(&model, &policy).unwrap();
        for (a, b) in induced
            .values()
            .iter()
            .zip(trace.mean_occupancy.values().iter())
        {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn unreachable_target_mass_keeps_distance_bounded() {
        let model = build_random_mdp(3, 2, 3, 41).unwrap();
        // target concentrated on a single cell per layer with full mass
        let mut values = Array3::zeros((3, 3, 2));
        for h in 0..3 {
            values[[h, 2, 1]] = 1.0;
        }
        let target = OccupancyMeasure::estimate(values).unwrap();
        let (_, trace) = solve_matching(&model, &target, &OptimizerConfig::adaptive(100)).unwrap();
        let last = trace.records.last().unwrap();
        assert!(last.matching_distance <= 2.0 * 3.0 + 1e-9);
    }

    #[test]
    fn single_cell_model_matches_exactly() {
        let model = build_random_mdp(1, 1, 3, 51).unwrap();
        let mut values = Array3::zeros((3, 1, 1));
        values[[0, 0, 0]] = 0.4;
        values[[1, 0, 0]] = 1.0;
        values[[2, 0, 0]] = 1.3;
        let target = OccupancyMeasure::estimate(values).unwrap();
        let (policy, trace) = solve_matching(&model, &target, &OptimizerConfig::adaptive(10)).unwrap();
        let occ = compute_occupancy(&model, &policy).unwrap();
        let dist = l1_occupancy_distance(&occ, &target).unwrap();
        let expected = (1.0f64 - 0.4).abs() + 0.0 + (1.0f64 - 1.3).abs();
        assert!((dist - expected).abs() < 1e-12);
        assert_eq!(trace.records.len(), 10);
    }

    #[test]
    fn inner_planner_is_exact_against_probe_policies() {
        let model = build_random_mdp(3, 2, 3, 61).unwrap();
        let target = compute_occupancy(&model, &random_policy(3, 3, 2, 62)).unwrap();
        let (_, trace) = solve_matching(&model, &target, &OptimizerConfig::adaptive(5)).unwrap();
        // re-derive the first iterate's reward (w starts at zero, so the
        // first inner value is the best value under the zero reward = 0)
        assert_eq!(trace.records[0].inner_value, 0.0);
        // and for every record the inner value dominates random probes under
        // the same reward; reconstruct w by replaying the updates
        let mut w = Array3::<f64>::zeros((3, 3, 2));
        for r in &trace.records {
            let (_, v) = value_iteration(&model, &w).unwrap();
            assert!((v - r.inner_value).abs() < 1e-12);
            for probe_seed in 0..20 {
                let probe = random_policy(3, 3, 2, 1000 + probe_seed);
                let vp = crate::mdp::evaluate_policy_direct(&model, &probe, Some(&w)).unwrap();
                assert!(v >= vp - 1e-9);
            }
            // replay the update
            let (policy, _) = value_iteration(&model, &w).unwrap();
            let occ = compute_occupancy(&model, &policy).unwrap();
            for (wv, (dv, tv)) in w
                .iter_mut()
                .zip(occ.values().iter().zip(target.values().iter()))
            {
                *wv = (*wv - r.step_size * (dv - tv)).clamp(-1.0, 1.0);
            }
        }
    }
}
