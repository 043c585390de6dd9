//! Exact tabular machinery for episodic MDPs: representation, rollout
//! sampling, occupancy computation, policy evaluation, and value iteration.
//!
//! Conventions used throughout the crate:
//! - steps are indexed `0..H` (so the transition tensor has `H-1` layers;
//!   no transition is taken after the last action),
//! - a state-action table has shape `(H, S, A)`,
//! - all types are immutable after construction; sampling takes an explicit
//!   RNG and everything else is a pure function.

use ndarray::{Array1, Array2, Array3, Array4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validation tolerance for probability vectors.
pub const PROB_TOL: f64 = 1e-9;
/// Tolerance for occupancy-layer normalization.
pub const OCC_TOL: f64 = 1e-8;

fn check_distribution(row: &[f64], what: &str) -> Result<()> {
    if row.iter().any(|p| *p < 0.0) {
        return Err(Error::InvalidValue(format!("{what} has a negative entry")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidDistribution {
            what: what.to_string(),
            sum,
        });
    }
    Ok(())
}

/// Draws an index from a probability row. The row is assumed normalized;
/// accumulated rounding error falls through to the last index.
pub(crate) fn sample_index<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in row.iter().enumerate() {
        acc += *p;
        if u < acc {
            return i;
        }
    }
    row.len() - 1
}

/// An episodic tabular MDP `(S, A, P, r, H, rho)` with non-stationary
/// transitions. Step `H-1` needs no transition row, so `transitions` holds
/// `H-1` layers.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMdp {
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    /// `(H-1, S, A, S)`: `transitions[[h, s, a, s2]] = P_h(s2 | s, a)`.
    transitions: Array4<f64>,
    /// Optional `(H, S, A)` reward table with entries in `[0, 1]`.
    rewards: Option<Array3<f64>>,
    /// Initial state distribution `rho`.
    initial_dist: Array1<f64>,
}

impl TabularMdp {
    /// Strict constructor: every transition row and `rho` must sum to 1
    /// within `PROB_TOL`, rewards (if any) must lie in `[0, 1]`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        horizon: usize,
        transitions: Array4<f64>,
        rewards: Option<Array3<f64>>,
        initial_dist: Array1<f64>,
    ) -> Result<Self> {
        Self::build(
            num_states,
            num_actions,
            horizon,
            transitions,
            rewards,
            initial_dist,
            false,
        )
    }

    /// Like [`TabularMdp::new`] but renormalizes rows that are off by more
    /// than the tolerance instead of rejecting them. Rows are never silently
    /// renormalized elsewhere.
    pub fn new_renormalizing(
        num_states: usize,
        num_actions: usize,
        horizon: usize,
        transitions: Array4<f64>,
        rewards: Option<Array3<f64>>,
        initial_dist: Array1<f64>,
    ) -> Result<Self> {
        Self::build(
            num_states,
            num_actions,
            horizon,
            transitions,
            rewards,
            initial_dist,
            true,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        num_states: usize,
        num_actions: usize,
        horizon: usize,
        mut transitions: Array4<f64>,
        rewards: Option<Array3<f64>>,
        mut initial_dist: Array1<f64>,
        renormalize: bool,
    ) -> Result<Self> {
        if num_states == 0 || num_actions == 0 || horizon == 0 {
            return Err(Error::Config(
                "num_states, num_actions and horizon must be positive".into(),
            ));
        }
        let expected = (horizon - 1, num_states, num_actions, num_states);
        if transitions.dim() != expected {
            return Err(Error::DimensionMismatch(format!(
                "transitions shape {:?}, expected {:?}",
                transitions.dim(),
                expected
            )));
        }
        if initial_dist.len() != num_states {
            return Err(Error::DimensionMismatch(format!(
                "initial_dist length {}, expected {num_states}",
                initial_dist.len()
            )));
        }
        if renormalize {
            for h in 0..horizon - 1 {
                for s in 0..num_states {
                    for a in 0..num_actions {
                        let mut row = transitions.slice_mut(ndarray::s![h, s, a, ..]);
                        let sum = row.sum();
                        if sum > 0.0 {
                            row.mapv_inplace(|p| p / sum);
                        }
                    }
                }
            }
            let sum = initial_dist.sum();
            if sum > 0.0 {
                initial_dist.mapv_inplace(|p| p / sum);
            }
        }
        for h in 0..horizon - 1 {
            for s in 0..num_states {
                for a in 0..num_actions {
                    let row = transitions.slice(ndarray::s![h, s, a, ..]);
                    check_distribution(
                        row.as_slice().expect("contiguous row"),
                        &format!("P_{h}(.|{s},{a})"),
                    )?;
                }
            }
        }
        check_distribution(initial_dist.as_slice().expect("contiguous"), "rho")?;
        if let Some(r) = &rewards {
            if r.dim() != (horizon, num_states, num_actions) {
                return Err(Error::DimensionMismatch(format!(
                    "rewards shape {:?}, expected {:?}",
                    r.dim(),
                    (horizon, num_states, num_actions)
                )));
            }
            if r.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidValue("rewards must lie in [0, 1]".into()));
            }
        }
        Ok(Self {
            num_states,
            num_actions,
            horizon,
            transitions,
            rewards,
            initial_dist,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn transitions(&self) -> &Array4<f64> {
        &self.transitions
    }

    pub fn rewards(&self) -> Option<&Array3<f64>> {
        self.rewards.as_ref()
    }

    pub fn initial_dist(&self) -> &Array1<f64> {
        &self.initial_dist
    }

    fn check_policy(&self, policy: &Policy) -> Result<()> {
        if policy.probs.dim() != (self.horizon, self.num_states, self.num_actions) {
            return Err(Error::DimensionMismatch(format!(
                "policy shape {:?} does not match MDP ({}, {}, {})",
                policy.probs.dim(),
                self.horizon,
                self.num_states,
                self.num_actions
            )));
        }
        Ok(())
    }

    fn check_rewards(&self, rewards: &Array3<f64>) -> Result<()> {
        if rewards.dim() != (self.horizon, self.num_states, self.num_actions) {
            return Err(Error::DimensionMismatch(format!(
                "reward shape {:?} does not match MDP ({}, {}, {})",
                rewards.dim(),
                self.horizon,
                self.num_states,
                self.num_actions
            )));
        }
        Ok(())
    }
}

/// A non-stationary stochastic policy: `probs[[h, s, a]] = pi_h(a|s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    probs: Array3<f64>,
}

impl Policy {
    pub fn new(probs: Array3<f64>) -> Result<Self> {
        let (h, s, _) = probs.dim();
        for hh in 0..h {
            for ss in 0..s {
                let row = probs.slice(ndarray::s![hh, ss, ..]);
                check_distribution(
                    row.as_slice().expect("contiguous row"),
                    &format!("pi_{hh}(.|{ss})"),
                )?;
            }
        }
        Ok(Self { probs })
    }

    /// Uniform policy over `num_actions` at every `(h, s)`.
    pub fn uniform(horizon: usize, num_states: usize, num_actions: usize) -> Self {
        Self {
            probs: Array3::from_elem(
                (horizon, num_states, num_actions),
                1.0 / num_actions as f64,
            ),
        }
    }

    /// Deterministic policy from an `(H, S)` action table.
    pub fn deterministic(actions: &Array2<usize>, num_actions: usize) -> Result<Self> {
        let (h, s) = actions.dim();
        let mut probs = Array3::zeros((h, s, num_actions));
        for hh in 0..h {
            for ss in 0..s {
                let a = actions[[hh, ss]];
                if a >= num_actions {
                    return Err(Error::InvalidValue(format!(
                        "action {a} out of range at (h={hh}, s={ss})"
                    )));
                }
                probs[[hh, ss, a]] = 1.0;
            }
        }
        Ok(Self { probs })
    }

    /// Stationary deterministic policy that plays `action` everywhere.
    pub fn constant(
        horizon: usize,
        num_states: usize,
        num_actions: usize,
        action: usize,
    ) -> Result<Self> {
        let actions = Array2::from_elem((horizon, num_states), action);
        Self::deterministic(&actions, num_actions)
    }

    pub fn probs(&self) -> &Array3<f64> {
        &self.probs
    }

    pub fn horizon(&self) -> usize {
        self.probs.dim().0
    }

    pub fn num_states(&self) -> usize {
        self.probs.dim().1
    }

    pub fn num_actions(&self) -> usize {
        self.probs.dim().2
    }

    /// True when every action distribution puts all mass on one action.
    pub fn is_deterministic(&self) -> bool {
        let (h, s, _) = self.probs.dim();
        (0..h).all(|hh| {
            (0..s).all(|ss| {
                self.probs
                    .slice(ndarray::s![hh, ss, ..])
                    .iter()
                    .any(|p| (*p - 1.0).abs() <= PROB_TOL)
            })
        })
    }

    /// The action with maximal probability at `(h, s)` (lowest index wins).
    pub fn mode_action(&self, h: usize, s: usize) -> usize {
        let row = self.probs.slice(ndarray::s![h, s, ..]);
        let mut best = 0;
        let mut best_p = f64::NEG_INFINITY;
        for (a, p) in row.iter().enumerate() {
            if *p > best_p {
                best_p = *p;
                best = a;
            }
        }
        best
    }

    pub fn sample_action<R: Rng + ?Sized>(&self, h: usize, s: usize, rng: &mut R) -> usize {
        let row = self.probs.slice(ndarray::s![h, s, ..]);
        sample_index(row.as_slice().expect("contiguous row"), rng)
    }
}

/// A per-step state-action distribution `d_h(s, a)`, the central matching
/// object. Exact occupancies have unit layer mass; estimator outputs may not
/// and carry `is_estimate = true`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyMeasure {
    values: Array3<f64>,
    is_estimate: bool,
}

impl OccupancyMeasure {
    /// A true occupancy: nonnegative with every layer summing to 1 within
    /// `OCC_TOL`.
    pub fn exact(values: Array3<f64>) -> Result<Self> {
        if values.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidValue("occupancy has a negative entry".into()));
        }
        let h = values.dim().0;
        for hh in 0..h {
            let sum: f64 = values.slice(ndarray::s![hh, .., ..]).sum();
            if (sum - 1.0).abs() > OCC_TOL {
                return Err(Error::InvalidDistribution {
                    what: format!("occupancy layer {hh}"),
                    sum,
                });
            }
        }
        Ok(Self {
            values,
            is_estimate: false,
        })
    }

    /// An estimator output: nonnegative, layers may sum to anything.
    pub fn estimate(values: Array3<f64>) -> Result<Self> {
        if values.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidValue("occupancy has a negative entry".into()));
        }
        Ok(Self {
            values,
            is_estimate: true,
        })
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn is_estimate(&self) -> bool {
        self.is_estimate
    }

    pub fn dim(&self) -> (usize, usize, usize) {
        self.values.dim()
    }
}

/// A length-`H` state-action sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    steps: Vec<(usize, usize)>,
}

impl Trajectory {
    pub fn new(
        steps: Vec<(usize, usize)>,
        horizon: usize,
        num_states: usize,
        num_actions: usize,
    ) -> Result<Self> {
        if steps.len() != horizon {
            return Err(Error::DimensionMismatch(format!(
                "trajectory length {} != horizon {horizon}",
                steps.len()
            )));
        }
        if steps
            .iter()
            .any(|(s, a)| *s >= num_states || *a >= num_actions)
        {
            return Err(Error::InvalidValue(
                "trajectory contains an out-of-range state or action".into(),
            ));
        }
        Ok(Self { steps })
    }

    /// Internal constructor for steps already known to be in range.
    pub(crate) fn from_steps_unchecked(steps: Vec<(usize, usize)>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn state(&self, h: usize) -> usize {
        self.steps[h].0
    }

    pub fn action(&self, h: usize) -> usize {
        self.steps[h].1
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }
}

/// An ordered list of trajectories.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryDataset {
    trajectories: Vec<Trajectory>,
}

impl TrajectoryDataset {
    pub fn new(trajectories: Vec<Trajectory>) -> Self {
        Self { trajectories }
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Trajectory> {
        self.trajectories.iter()
    }

    pub fn get(&self, i: usize) -> &Trajectory {
        &self.trajectories[i]
    }

    pub fn push(&mut self, tr: Trajectory) {
        self.trajectories.push(tr);
    }
}

/// Adversarial reward iterate: an `(H, S, A)` table confined to the
/// sup-norm unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardWeights {
    values: Array3<f64>,
}

impl RewardWeights {
    pub fn new(values: Array3<f64>) -> Result<Self> {
        if values.iter().any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::InvalidValue(
                "reward weights must lie in [-1, 1]".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn zeros(horizon: usize, num_states: usize, num_actions: usize) -> Self {
        Self {
            values: Array3::zeros((horizon, num_states, num_actions)),
        }
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }
}

/// Exact occupancy of `policy` in `mdp` by forward flow propagation:
/// `d_1(s,a) = rho(s) pi_1(a|s)` and
/// `d_h(s,a) = [sum_{s',a'} d_{h-1}(s',a') P_{h-1}(s|s',a')] pi_h(a|s)`.
pub fn compute_occupancy(mdp: &TabularMdp, policy: &Policy) -> Result<OccupancyMeasure> {
    mdp.check_policy(policy)?;
    let (hn, sn, an) = (mdp.horizon, mdp.num_states, mdp.num_actions);
    let mut values = Array3::zeros((hn, sn, an));
    let mut state_dist: Vec<f64> = mdp.initial_dist.to_vec();
    for h in 0..hn {
        for s in 0..sn {
            let mass = state_dist[s];
            for a in 0..an {
                values[[h, s, a]] = mass * policy.probs[[h, s, a]];
            }
        }
        if h + 1 < hn {
            let mut next = vec![0.0; sn];
            for s in 0..sn {
                for a in 0..an {
                    let w = values[[h, s, a]];
                    if w == 0.0 {
                        continue;
                    }
                    for (s2, entry) in next.iter_mut().enumerate() {
                        *entry += w * mdp.transitions[[h, s, a, s2]];
                    }
                }
            }
            state_dist = next;
        }
    }
    OccupancyMeasure::exact(values)
}

/// Dual form of the policy value: `sum_h sum_{s,a} d_h(s,a) r_h(s,a)`.
pub fn policy_value(occupancy: &OccupancyMeasure, rewards: &Array3<f64>) -> Result<f64> {
    if occupancy.values.dim() != rewards.dim() {
        return Err(Error::DimensionMismatch(format!(
            "occupancy {:?} vs rewards {:?}",
            occupancy.values.dim(),
            rewards.dim()
        )));
    }
    Ok(occupancy
        .values
        .iter()
        .zip(rewards.iter())
        .map(|(d, r)| d * r)
        .sum())
}

/// Policy value by backward recursion. Equals
/// `policy_value(compute_occupancy(mdp, policy), rewards)` within 1e-8.
/// With `rewards = None` the MDP's own reward table is used.
pub fn evaluate_policy_direct(
    mdp: &TabularMdp,
    policy: &Policy,
    rewards: Option<&Array3<f64>>,
) -> Result<f64> {
    mdp.check_policy(policy)?;
    let rewards = match rewards {
        Some(r) => {
            mdp.check_rewards(r)?;
            r
        }
        None => mdp
            .rewards
            .as_ref()
            .ok_or_else(|| Error::Config("MDP has no rewards and none were supplied".into()))?,
    };
    let (hn, sn, an) = (mdp.horizon, mdp.num_states, mdp.num_actions);
    let mut value = vec![0.0; sn];
    for h in (0..hn).rev() {
        let mut layer = vec![0.0; sn];
        for s in 0..sn {
            let mut v = 0.0;
            for a in 0..an {
                let p = policy.probs[[h, s, a]];
                if p == 0.0 {
                    continue;
                }
                let mut q = rewards[[h, s, a]];
                if h + 1 < hn {
                    for (s2, vs) in value.iter().enumerate() {
                        q += mdp.transitions[[h, s, a, s2]] * vs;
                    }
                }
                v += p * q;
            }
            layer[s] = v;
        }
        value = layer;
    }
    Ok(mdp
        .initial_dist
        .iter()
        .zip(value.iter())
        .map(|(p, v)| p * v)
        .sum())
}

/// Exact finite-horizon value iteration for an arbitrary (possibly negative)
/// reward table. Returns a deterministic optimal policy (ties broken toward
/// the lowest action index) and its value.
pub fn value_iteration(mdp: &TabularMdp, rewards: &Array3<f64>) -> Result<(Policy, f64)> {
    mdp.check_rewards(rewards)?;
    let (hn, sn, an) = (mdp.horizon, mdp.num_states, mdp.num_actions);
    let mut value = vec![0.0; sn];
    let mut actions = Array2::zeros((hn, sn));
    for h in (0..hn).rev() {
        let mut layer = vec![0.0; sn];
        for s in 0..sn {
            let mut best_a = 0;
            let mut best_q = f64::NEG_INFINITY;
            for a in 0..an {
                let mut q = rewards[[h, s, a]];
                if h + 1 < hn {
                    for (s2, vs) in value.iter().enumerate() {
                        q += mdp.transitions[[h, s, a, s2]] * vs;
                    }
                }
                if q > best_q {
                    best_q = q;
                    best_a = a;
                }
            }
            actions[[h, s]] = best_a;
            layer[s] = best_q;
        }
        value = layer;
    }
    let optimal = mdp
        .initial_dist
        .iter()
        .zip(value.iter())
        .map(|(p, v)| p * v)
        .sum();
    Ok((Policy::deterministic(&actions, an)?, optimal))
}

/// Samples one episode of `policy` in `mdp`.
pub fn sample_trajectory<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    policy: &Policy,
    rng: &mut R,
) -> Trajectory {
    let hn = mdp.horizon;
    let mut steps = Vec::with_capacity(hn);
    let mut s = sample_index(mdp.initial_dist.as_slice().expect("contiguous"), rng);
    for h in 0..hn {
        let a = policy.sample_action(h, s, rng);
        steps.push((s, a));
        if h + 1 < hn {
            let row = mdp.transitions.slice(ndarray::s![h, s, a, ..]);
            s = sample_index(row.as_slice().expect("contiguous row"), rng);
        }
    }
    Trajectory { steps }
}

/// `count` i.i.d. episodes of `policy` in `mdp`.
pub fn sample_trajectories<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    policy: &Policy,
    count: usize,
    rng: &mut R,
) -> TrajectoryDataset {
    TrajectoryDataset::new(
        (0..count)
            .map(|_| sample_trajectory(mdp, policy, rng))
            .collect(),
    )
}

/// `sum_h ||a_h - b_h||_1`, the per-step L1 distance summed over steps.
pub fn l1_occupancy_distance(a: &OccupancyMeasure, b: &OccupancyMeasure) -> Result<f64> {
    if a.values.dim() != b.values.dim() {
        return Err(Error::DimensionMismatch(format!(
            "occupancy shapes {:?} vs {:?}",
            a.values.dim(),
            b.values.dim()
        )));
    }
    Ok(a.values
        .iter()
        .zip(b.values.iter())
        .map(|(x, y)| (x - y).abs())
        .sum())
}

// --- JSON serialization -----------------------------------------------------

/// Flat JSON schema for an MDP: `num_states, num_actions, horizon, rho,
/// transitions[h][s][a][s'], rewards[h][s][a]`. Round-trips are bit-exact
/// because floats are printed with shortest round-trip formatting.
#[derive(Debug, Serialize, Deserialize)]
pub struct MdpJson {
    pub num_states: usize,
    pub num_actions: usize,
    pub horizon: usize,
    pub rho: Vec<f64>,
    pub transitions: Vec<Vec<Vec<Vec<f64>>>>,
    pub rewards: Option<Vec<Vec<Vec<f64>>>>,
}

impl From<&TabularMdp> for MdpJson {
    fn from(mdp: &TabularMdp) -> Self {
        let (hn, sn, an) = (mdp.horizon, mdp.num_states, mdp.num_actions);
        let transitions = (0..hn.saturating_sub(1))
            .map(|h| {
                (0..sn)
                    .map(|s| {
                        (0..an)
                            .map(|a| (0..sn).map(|s2| mdp.transitions[[h, s, a, s2]]).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let rewards = mdp.rewards.as_ref().map(|r| {
            (0..hn)
                .map(|h| {
                    (0..sn)
                        .map(|s| (0..an).map(|a| r[[h, s, a]]).collect())
                        .collect()
                })
                .collect()
        });
        MdpJson {
            num_states: sn,
            num_actions: an,
            horizon: hn,
            rho: mdp.initial_dist.to_vec(),
            transitions,
            rewards,
        }
    }
}

impl TryFrom<MdpJson> for TabularMdp {
    type Error = Error;

    fn try_from(json: MdpJson) -> Result<Self> {
        let (hn, sn, an) = (json.horizon, json.num_states, json.num_actions);
        if hn == 0 {
            return Err(Error::Config("horizon must be positive".into()));
        }
        let mut transitions = Array4::zeros((hn - 1, sn, an, sn));
        if json.transitions.len() != hn - 1 {
            return Err(Error::DimensionMismatch(format!(
                "transitions has {} layers, expected {}",
                json.transitions.len(),
                hn - 1
            )));
        }
        for (h, layer) in json.transitions.iter().enumerate() {
            if layer.len() != sn {
                return Err(Error::DimensionMismatch(format!(
                    "transitions[{h}] has {} states, expected {sn}",
                    layer.len()
                )));
            }
            for (s, per_action) in layer.iter().enumerate() {
                if per_action.len() != an {
                    return Err(Error::DimensionMismatch(format!(
                        "transitions[{h}][{s}] has {} actions, expected {an}",
                        per_action.len()
                    )));
                }
                for (a, row) in per_action.iter().enumerate() {
                    if row.len() != sn {
                        return Err(Error::DimensionMismatch(format!(
                            "transitions[{h}][{s}][{a}] has {} entries, expected {sn}",
                            row.len()
                        )));
                    }
                    for (s2, p) in row.iter().enumerate() {
                        transitions[[h, s, a, s2]] = *p;
                    }
                }
            }
        }
        let rewards = match json.rewards {
            Some(table) => {
                let mut r = Array3::zeros((hn, sn, an));
                if table.len() != hn {
                    return Err(Error::DimensionMismatch(format!(
                        "rewards has {} layers, expected {hn}",
                        table.len()
                    )));
                }
                for (h, layer) in table.iter().enumerate() {
                    for (s, row) in layer.iter().enumerate() {
                        for (a, v) in row.iter().enumerate() {
                            r[[h, s, a]] = *v;
                        }
                    }
                }
                Some(r)
            }
            None => None,
        };
        TabularMdp::new(
            sn,
            an,
            hn,
            transitions,
            rewards,
            Array1::from_vec(json.rho),
        )
    }
}

impl TabularMdp {
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&MdpJson::from(self))?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: MdpJson = serde_json::from_str(text)?;
        Self::try_from(json)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}
