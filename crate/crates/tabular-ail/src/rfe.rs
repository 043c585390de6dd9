//! Reward-free exploration: the bonus recursion, its stopping rule, the
//! exploration loop, and the empirical transition model it produces.
//!
//! The loop is generic over a state abstraction; the plain tabular variant
//! is the identity-abstraction instance, so abstract and concrete runs share
//! one code path (and identical RNG consumption).

use ndarray::{Array1, Array3, Array4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abstraction::StateAbstraction;
use crate::error::{Error, Result};
use crate::mdp::{TabularMdp, Trajectory};
use crate::sim::EnvSampler;

/// Coefficients of the bonus recursion. The defaults are the theoretical
/// values; they are deliberately loose, so practical runs may scale the
/// leading coefficient down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BonusParams {
    /// Multiplies `H^2 beta(n, delta) / n` in the first term (theory: 15).
    pub coeff: f64,
    /// Apply the `(1 + 1/H)` inflation on the continuation term.
    pub horizon_inflation: bool,
}

impl Default for BonusParams {
    fn default() -> Self {
        Self {
            coeff: 15.0,
            horizon_inflation: true,
        }
    }
}

impl BonusParams {
    pub fn with_coeff(coeff: f64) -> Self {
        Self {
            coeff,
            ..Self::default()
        }
    }
}

/// Exploration-loop configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfeConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Hard cap on collected episodes; hitting it sets `stopped_early`.
    pub max_episodes: u64,
    pub bonus: BonusParams,
}

impl RfeConfig {
    pub fn new(epsilon: f64, delta: f64, max_episodes: u64) -> Self {
        Self {
            epsilon,
            delta,
            max_episodes,
            bonus: BonusParams::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) || self.epsilon <= 0.0 {
            return Err(Error::InvalidValue(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        check_delta(self.delta)?;
        if self.bonus.coeff <= 0.0 {
            return Err(Error::InvalidValue("bonus coefficient must be > 0".into()));
        }
        Ok(())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidValue(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Empirical counts and the transition model they induce. Rows with no
/// visits fall back to the uniform distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel {
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    visit_counts: Array3<u64>,
    transition_counts: Array4<u64>,
    initial_counts: Vec<u64>,
    p_hat: Array4<f64>,
    episodes: u64,
}

impl EmpiricalModel {
    pub fn new(horizon: usize, num_states: usize, num_actions: usize) -> Self {
        let layers = horizon.saturating_sub(1);
        Self {
            num_states,
            num_actions,
            horizon,
            visit_counts: Array3::zeros((horizon, num_states, num_actions)),
            transition_counts: Array4::zeros((layers, num_states, num_actions, num_states)),
            initial_counts: vec![0; num_states],
            p_hat: Array4::from_elem(
                (layers, num_states, num_actions, num_states),
                1.0 / num_states as f64,
            ),
            episodes: 0,
        }
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

    pub fn episodes(&self) -> u64 {
        self.episodes
    }

    pub fn visit_counts(&self) -> &Array3<u64> {
        &self.visit_counts
    }

    pub fn transition_counts(&self) -> &Array4<u64> {
        &self.transition_counts
    }

    pub fn p_hat(&self) -> &Array4<f64> {
        &self.p_hat
    }

    /// Records one trajectory, updating counts and affected model rows.
    pub fn record(&mut self, tr: &Trajectory) {
        debug_assert_eq!(tr.len(), self.horizon);
        self.episodes += 1;
        self.initial_counts[tr.state(0)] += 1;
        for h in 0..self.horizon {
            let (s, a) = (tr.state(h), tr.action(h));
            self.visit_counts[[h, s, a]] += 1;
            if h + 1 < self.horizon {
                let s2 = tr.state(h + 1);
                self.transition_counts[[h, s, a, s2]] += 1;
                let n = self.visit_counts[[h, s, a]] as f64;
                for t in 0..self.num_states {
                    self.p_hat[[h, s, a, t]] = self.transition_counts[[h, s, a, t]] as f64 / n;
                }
            }
        }
    }

    /// Empirical initial distribution (uniform before the first episode).
    pub fn rho_hat(&self) -> Array1<f64> {
        if self.episodes == 0 {
            return Array1::from_elem(self.num_states, 1.0 / self.num_states as f64);
        }
        Array1::from_iter(
            self.initial_counts
                .iter()
                .map(|c| *c as f64 / self.episodes as f64),
        )
    }

    /// The model as a reward-free MDP (`p_hat` plus `rho_hat`).
    pub fn to_mdp(&self) -> Result<TabularMdp> {
        TabularMdp::new(
            self.num_states,
            self.num_actions,
            self.horizon,
            self.p_hat.clone(),
            None,
            self.rho_hat(),
        )
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mdp = TabularMdp::new(
            self.num_states,
            self.num_actions,
            self.horizon,
            self.p_hat.clone(),
            None,
            self.rho_hat(),
        )?;
        let json = ModelJson {
            mdp: crate::mdp::MdpJson::from(&mdp),
            counts: CountsJson {
                episodes: self.episodes,
                initial: self.initial_counts.clone(),
                visits: table3(&self.visit_counts),
                transitions: table4(&self.transition_counts),
            },
        };
        Ok(serde_json::to_string(&json)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: ModelJson = serde_json::from_str(text)?;
        let (hn, sn, an) = (
            json.mdp.horizon,
            json.mdp.num_states,
            json.mdp.num_actions,
        );
        let mut model = Self::new(hn, sn, an);
        model.episodes = json.counts.episodes;
        if json.counts.initial.len() != sn {
            return Err(Error::DimensionMismatch("initial counts length".into()));
        }
        model.initial_counts = json.counts.initial;
        for (h, layer) in json.counts.visits.iter().enumerate() {
            for (s, row) in layer.iter().enumerate() {
                for (a, c) in row.iter().enumerate() {
                    if h >= hn || s >= sn || a >= an {
                        return Err(Error::DimensionMismatch("visit counts shape".into()));
                    }
                    model.visit_counts[[h, s, a]] = *c;
                }
            }
        }
        for (h, layer) in json.counts.transitions.iter().enumerate() {
            for (s, per_a) in layer.iter().enumerate() {
                for (a, row) in per_a.iter().enumerate() {
                    for (s2, c) in row.iter().enumerate() {
                        model.transition_counts[[h, s, a, s2]] = *c;
                    }
                }
            }
        }
        // rebuild p_hat from the counts (they are authoritative)
        for h in 0..hn.saturating_sub(1) {
            for s in 0..sn {
                for a in 0..an {
                    let n = model.visit_counts[[h, s, a]];
                    if n > 0 {
                        for s2 in 0..sn {
                            model.p_hat[[h, s, a, s2]] =
                                model.transition_counts[[h, s, a, s2]] as f64 / n as f64;
                        }
                    }
                }
            }
        }
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    #[serde(flatten)]
    mdp: crate::mdp::MdpJson,
    counts: CountsJson,
}

#[derive(Serialize, Deserialize)]
struct CountsJson {
    episodes: u64,
    initial: Vec<u64>,
    visits: Vec<Vec<Vec<u64>>>,
    transitions: Vec<Vec<Vec<Vec<u64>>>>,
}

fn table3(a: &Array3<u64>) -> Vec<Vec<Vec<u64>>> {
    let (d0, d1, d2) = a.dim();
    (0..d0)
        .map(|i| {
            (0..d1)
                .map(|j| (0..d2).map(|k| a[[i, j, k]]).collect())
                .collect()
        })
        .collect()
}

fn table4(a: &Array4<u64>) -> Vec<Vec<Vec<Vec<u64>>>> {
    let (d0, d1, d2, d3) = a.dim();
    (0..d0)
        .map(|i| {
            (0..d1)
                .map(|j| {
                    (0..d2)
                        .map(|k| (0..d3).map(|l| a[[i, j, k, l]]).collect())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The exploration bonus table `W_h(s, a)`, every entry in `[0, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RfeBonus {
    w_table: Array3<f64>,
}

impl RfeBonus {
    pub fn w_table(&self) -> &Array3<f64> {
        &self.w_table
    }
}

/// `beta(n, delta) = log(3 |S| |A| H / delta) + |S| log(8 e (n + 1))`.
/// Strictly increasing in `n`, decreasing in `delta`.
pub fn beta(
    n: u64,
    delta: f64,
    num_states: usize,
    num_actions: usize,
    horizon: usize,
) -> Result<f64> {
    check_delta(delta)?;
    let s = num_states as f64;
    let a = num_actions as f64;
    let h = horizon as f64;
    Ok((3.0 * s * a * h / delta).ln() + s * (8.0 * std::f64::consts::E * (n as f64 + 1.0)).ln())
}

/// Backward bonus recursion from `W_{H+1} = 0`:
/// `W_h(s,a) = min(H, coeff H^2 beta(n,delta)/n + (1+1/H) sum_s' P_hat max_a' W_{h+1})`,
/// with unvisited cells clamped straight to `H`.
pub fn compute_bonus(
    model: &EmpiricalModel,
    delta: f64,
    params: &BonusParams,
) -> Result<RfeBonus> {
    check_delta(delta)?;
    let (hn, sn, an) = (model.horizon, model.num_states, model.num_actions);
    let hf = hn as f64;
    let inflation = if params.horizon_inflation {
        1.0 + 1.0 / hf
    } else {
        1.0
    };
    let mut w = Array3::zeros((hn, sn, an));
    let mut next_max = vec![0.0; sn]; // max_a W_{h+1}(s, a)
    for h in (0..hn).rev() {
        for s in 0..sn {
            for a in 0..an {
                let n = model.visit_counts[[h, s, a]];
                let value = if n == 0 {
                    hf
                } else {
                    let first =
                        params.coeff * hf * hf * beta(n, delta, sn, an, hn)? / n as f64;
                    let mut cont = 0.0;
                    if h + 1 < hn {
                        for (s2, mx) in next_max.iter().enumerate() {
                            cont += model.p_hat[[h, s, a, s2]] * mx;
                        }
                        cont *= inflation;
                    }
                    (first + cont).min(hf)
                };
                w[[h, s, a]] = value;
            }
        }
        for (s, mx) in next_max.iter_mut().enumerate() {
            *mx = (0..an).map(|a| w[[h, s, a]]).fold(f64::NEG_INFINITY, f64::max);
        }
    }
    Ok(RfeBonus { w_table: w })
}

/// Result of an exploration run.
#[derive(Debug)]
pub struct RfeOutcome {
    pub model: EmpiricalModel,
    pub episodes_used: u64,
    /// True when the episode cap was hit before the stopping rule fired.
    pub stopped_early: bool,
}

/// The greedy exploration policy for one bonus table: per `(h, x)` pick a
/// maximizer of `W`, breaking exact ties uniformly at random.
fn greedy_table<R: Rng + ?Sized>(bonus: &RfeBonus, rng: &mut R) -> Vec<Vec<usize>> {
    let (hn, sn, an) = bonus.w_table.dim();
    let mut table = vec![vec![0usize; sn]; hn];
    let mut ties = Vec::with_capacity(an);
    for h in 0..hn {
        for s in 0..sn {
            let mut best = f64::NEG_INFINITY;
            for a in 0..an {
                let v = bonus.w_table[[h, s, a]];
                if v > best {
                    best = v;
                    ties.clear();
                    ties.push(a);
                } else if v == best {
                    ties.push(a);
                }
            }
            table[h][s] = if ties.len() == 1 {
                ties[0]
            } else {
                ties[rng.gen_range(0..ties.len())]
            };
        }
    }
    table
}

/// RF-Express over an abstract state space: counts, model, bonus and greedy
/// policy all live on `Phi x A`; rollouts lift the greedy policy through the
/// abstraction. Stops when
/// `sum_x rho_hat(x) [3e sqrt(W_1(x, pi(x))) + W_1(x, pi(x))] <= epsilon/2`
/// (the stopping check runs between policy derivation and rollout), or when
/// `max_episodes` is reached (flagged, not an error).
pub fn rf_express_with_abstraction<R: Rng + ?Sized>(
    env: &mut EnvSampler,
    abstraction: &StateAbstraction,
    cfg: &RfeConfig,
    rng: &mut R,
) -> Result<RfeOutcome> {
    cfg.validate()?;
    if abstraction.num_states() != env.num_states() || abstraction.horizon() != env.horizon() {
        return Err(Error::DimensionMismatch(
            "abstraction does not match environment dimensions".into(),
        ));
    }
    let hn = env.horizon();
    let an = env.num_actions();
    let xn = abstraction.num_abstract();
    let three_e = 3.0 * std::f64::consts::E;
    let mut model = EmpiricalModel::new(hn, xn, an);
    let mut episodes = 0u64;
    let stopped_early = loop {
        let bonus = compute_bonus(&model, cfg.delta, &cfg.bonus)?;
        let greedy = greedy_table(&bonus, rng);
        let rho_hat = model.rho_hat();
        let criterion: f64 = (0..xn)
            .map(|x| {
                let w = bonus.w_table[[0, x, greedy[0][x]]];
                rho_hat[x] * (three_e * w.sqrt() + w)
            })
            .sum();
        if criterion <= cfg.epsilon / 2.0 {
            break false;
        }
        if episodes >= cfg.max_episodes {
            break true;
        }
        let tr = env.rollout_with(|h, s| greedy[h][abstraction.map(h, s)], rng);
        model.record(&abstraction.map_trajectory(&tr));
        episodes += 1;
    };
    Ok(RfeOutcome {
        model,
        episodes_used: episodes,
        stopped_early,
    })
}

/// Plain tabular RF-Express (identity abstraction).
pub fn rf_express<R: Rng + ?Sized>(
    env: &mut EnvSampler,
    cfg: &RfeConfig,
    rng: &mut R,
) -> Result<RfeOutcome> {
    let identity = StateAbstraction::identity(env.num_states(), env.horizon());
    rf_express_with_abstraction(env, &identity, cfg, rng)
}

pub(crate) fn evaluation_error_against<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    p_hat: &Array4<f64>,
    probe_count: usize,
    rng: &mut R,
) -> Result<f64> {
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    let model_mdp = TabularMdp::new(sn, an, hn, p_hat.clone(), None, mdp.initial_dist().clone())?;
    let mut worst: f64 = 0.0;
    for _ in 0..probe_count {
        let mut probs = Array3::zeros((hn, sn, an));
        for h in 0..hn {
            for s in 0..sn {
                let row = crate::envs::random_simplex_row(rng, an);
                for (a, p) in row.iter().enumerate() {
                    probs[[h, s, a]] = *p;
                }
            }
        }
        let policy = crate::mdp::Policy::new(probs)?;
        let mut rewards = Array3::zeros((hn, sn, an));
        for v in rewards.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        let v_true = crate::mdp::evaluate_policy_direct(mdp, &policy, Some(&rewards))?;
        let v_model = crate::mdp::evaluate_policy_direct(&model_mdp, &policy, Some(&rewards))?;
        worst = worst.max((v_true - v_model).abs());
    }
    Ok(worst)
}

/// Probed uniform-policy-evaluation error: the max over `probe_count` random
/// (policy, reward in [-1,1]) pairs of `|V^{pi,P,r} - V^{pi,P_hat,r}|`, both
/// sides evaluated exactly. A lower bound on the true supremum. The model
/// side borrows the true initial distribution so the comparison isolates
/// transition error.
pub fn uniform_evaluation_error<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    model: &EmpiricalModel,
    probe_count: usize,
    rng: &mut R,
) -> Result<f64> {
    if probe_count == 0 {
        return Err(Error::Config("probe_count must be >= 1".into()));
    }
    if model.num_states != mdp.num_states()
        || model.num_actions != mdp.num_actions()
        || model.horizon != mdp.horizon()
    {
        return Err(Error::DimensionMismatch(
            "model does not match MDP dimensions".into(),
        ));
    }
    evaluation_error_against(mdp, &model.p_hat, probe_count, rng)
}
