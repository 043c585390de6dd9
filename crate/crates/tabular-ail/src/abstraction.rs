//! Step-indexed state abstractions: bisimulation checking, abstract-MDP
//! construction, policy lifting, and block-summed occupancies.

use ndarray::{Array1, Array3, Array4};

use crate::error::{Error, Result};
use crate::mdp::{
    compute_occupancy, OccupancyMeasure, Policy, TabularMdp, Trajectory, TrajectoryDataset,
    PROB_TOL,
};

/// A family of surjections `phi_h: S -> Phi`, one per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAbstraction {
    /// `maps[h][s]` is the abstract index of state `s` at step `h`.
    maps: Vec<Vec<usize>>,
    num_abstract: usize,
}

impl StateAbstraction {
    pub fn new(maps: Vec<Vec<usize>>, num_abstract: usize) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Config("abstraction needs at least one step".into()));
        }
        let states = maps[0].len();
        if states == 0 {
            return Err(Error::Config("abstraction over an empty state space".into()));
        }
        for (h, layer) in maps.iter().enumerate() {
            if layer.len() != states {
                return Err(Error::DimensionMismatch(format!(
                    "abstraction layer {h} has {} states, expected {states}",
                    layer.len()
                )));
            }
            if layer.iter().any(|x| *x >= num_abstract) {
                return Err(Error::InvalidValue(format!(
                    "abstraction layer {h} maps outside 0..{num_abstract}"
                )));
            }
        }
        Ok(Self { maps, num_abstract })
    }

    /// The identity abstraction (`Phi = S` at every step).
    pub fn identity(num_states: usize, horizon: usize) -> Self {
        Self {
            maps: vec![(0..num_states).collect(); horizon],
            num_abstract: num_states,
        }
    }

    pub fn map(&self, h: usize, s: usize) -> usize {
        self.maps[h][s]
    }

    pub fn num_abstract(&self) -> usize {
        self.num_abstract
    }

    pub fn num_states(&self) -> usize {
        self.maps[0].len()
    }

    pub fn horizon(&self) -> usize {
        self.maps.len()
    }

    /// Members of the block `phi_h^{-1}(x)`.
    pub fn block(&self, h: usize, x: usize) -> Vec<usize> {
        (0..self.num_states())
            .filter(|s| self.maps[h][*s] == x)
            .collect()
    }

    /// Rewrites a concrete trajectory over abstract states.
    pub fn map_trajectory(&self, tr: &Trajectory) -> Trajectory {
        Trajectory::from_steps_unchecked(
            tr.steps()
                .iter()
                .enumerate()
                .map(|(h, (s, a))| (self.maps[h][*s], *a))
                .collect(),
        )
    }

    pub fn map_dataset(&self, data: &TrajectoryDataset) -> TrajectoryDataset {
        TrajectoryDataset::new(data.iter().map(|tr| self.map_trajectory(tr)).collect())
    }

    /// JSON format: a list of `H` arrays, each of length `|S|`, of abstract
    /// indices. The abstract space size is one past the largest index used.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.maps)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let maps: Vec<Vec<usize>> = serde_json::from_str(text)?;
        let num_abstract = maps
            .iter()
            .flat_map(|layer| layer.iter())
            .max()
            .map_or(0, |m| m + 1);
        Self::new(maps, num_abstract)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// One reason an abstraction is not a bisimulation for `(mdp, expert)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BisimulationViolation {
    RewardMismatch {
        h: usize,
        s1: usize,
        s2: usize,
        action: usize,
        r1: f64,
        r2: f64,
    },
    TransitionMismatch {
        h: usize,
        s1: usize,
        s2: usize,
        action: usize,
        target_block: usize,
        p1: f64,
        p2: f64,
    },
    ExpertMismatch {
        h: usize,
        s1: usize,
        s2: usize,
        a1: usize,
        a2: usize,
    },
}

impl std::fmt::Display for BisimulationViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::RewardMismatch {
                h,
                s1,
                s2,
                action,
                r1,
                r2,
            } => write!(
                f,
                "reward mismatch at h={h}: r({s1},{action})={r1} vs r({s2},{action})={r2}"
            ),
            Self::TransitionMismatch {
                h,
                s1,
                s2,
                action,
                target_block,
                p1,
                p2,
            } => write!(
                f,
                "block-transition mismatch at h={h}, action {action}, target block \
                 {target_block}: {p1} from {s1} vs {p2} from {s2}"
            ),
            Self::ExpertMismatch { h, s1, s2, a1, a2 } => write!(
                f,
                "expert mismatch at h={h}: pi_E({s1})={a1} vs pi_E({s2})={a2}"
            ),
        }
    }
}

/// Outcome of a bisimulation check; `violation` holds the first failure.
#[derive(Debug, Clone, PartialEq)]
pub struct BisimulationCheck {
    pub passes: bool,
    pub violation: Option<BisimulationViolation>,
}

/// Verifies reward consistency, block-transition consistency (tolerance
/// 1e-9) and expert-action agreement inside every block. The expert must be
/// deterministic. Returns the first violation instead of erroring.
pub fn check_bisimulation(
    mdp: &TabularMdp,
    expert: &Policy,
    abstraction: &StateAbstraction,
) -> Result<BisimulationCheck> {
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    if abstraction.num_states() != sn || abstraction.horizon() != hn {
        return Err(Error::DimensionMismatch(
            "abstraction does not match MDP dimensions".into(),
        ));
    }
    if !expert.is_deterministic() {
        return Err(Error::Config(
            "bisimulation check requires a deterministic expert".into(),
        ));
    }
    let fail = |violation: BisimulationViolation| {
        Ok(BisimulationCheck {
            passes: false,
            violation: Some(violation),
        })
    };
    for h in 0..hn {
        for x in 0..abstraction.num_abstract() {
            let members = abstraction.block(h, x);
            let Some((&s1, rest)) = members.split_first() else {
                continue;
            };
            for &s2 in rest {
                if let Some(r) = mdp.rewards() {
                    for a in 0..an {
                        let (r1, r2) = (r[[h, s1, a]], r[[h, s2, a]]);
                        if (r1 - r2).abs() > PROB_TOL {
                            return fail(BisimulationViolation::RewardMismatch {
                                h,
                                s1,
                                s2,
                                action: a,
                                r1,
                                r2,
                            });
                        }
                    }
                }
                if h + 1 < hn {
                    for a in 0..an {
                        for x2 in 0..abstraction.num_abstract() {
                            let block_sum = |s: usize| -> f64 {
                                (0..sn)
                                    .filter(|s2| abstraction.map(h + 1, *s2) == x2)
                                    .map(|s2| mdp.transitions()[[h, s, a, s2]])
                                    .sum()
                            };
                            let (p1, p2) = (block_sum(s1), block_sum(s2));
                            if (p1 - p2).abs() > PROB_TOL {
                                return fail(BisimulationViolation::TransitionMismatch {
                                    h,
                                    s1,
                                    s2,
                                    action: a,
                                    target_block: x2,
                                    p1,
                                    p2,
                                });
                            }
                        }
                    }
                }
                let (a1, a2) = (expert.mode_action(h, s1), expert.mode_action(h, s2));
                if a1 != a2 {
                    return fail(BisimulationViolation::ExpertMismatch { h, s1, s2, a1, a2 });
                }
            }
        }
    }
    Ok(BisimulationCheck {
        passes: true,
        violation: None,
    })
}

/// The abstract MDP over `Phi`: block-summed transitions and the
/// lowest-index representative's rewards. Caller contract: the abstraction
/// passed `check_bisimulation`, so the representative choice is immaterial.
pub fn build_abstract_mdp(mdp: &TabularMdp, abstraction: &StateAbstraction) -> Result<TabularMdp> {
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    if abstraction.num_states() != sn || abstraction.horizon() != hn {
        return Err(Error::DimensionMismatch(
            "abstraction does not match MDP dimensions".into(),
        ));
    }
    let xn = abstraction.num_abstract();
    let representative = |h: usize, x: usize| -> Result<usize> {
        (0..sn)
            .find(|s| abstraction.map(h, *s) == x)
            .ok_or_else(|| Error::Config(format!("abstract state {x} has no member at step {h}")))
    };
    let mut transitions = Array4::zeros((hn.saturating_sub(1), xn, an, xn));
    for h in 0..hn.saturating_sub(1) {
        for x in 0..xn {
            let rep = representative(h, x)?;
            for a in 0..an {
                for s2 in 0..sn {
                    let x2 = abstraction.map(h + 1, s2);
                    transitions[[h, x, a, x2]] += mdp.transitions()[[h, rep, a, s2]];
                }
            }
        }
    }
    let rewards = match mdp.rewards() {
        Some(r) => {
            let mut table = Array3::zeros((hn, xn, an));
            for h in 0..hn {
                for x in 0..xn {
                    let rep = representative(h, x)?;
                    for a in 0..an {
                        table[[h, x, a]] = r[[h, rep, a]];
                    }
                }
            }
            Some(table)
        }
        None => {
            // still insist every block is inhabited at every step
            for h in 0..hn {
                for x in 0..xn {
                    representative(h, x)?;
                }
            }
            None
        }
    };
    let mut rho = Array1::zeros(xn);
    for s in 0..sn {
        rho[abstraction.map(0, s)] += mdp.initial_dist()[s];
    }
    TabularMdp::new(xn, an, hn, transitions, rewards, rho)
}

/// Lifts an abstract policy to the concrete space:
/// `pi_h(a|s) = pi^phi_h(a | phi_h(s))`.
pub fn lift_policy(abs_policy: &Policy, abstraction: &StateAbstraction) -> Result<Policy> {
    let (hn, xn, an) = (
        abs_policy.horizon(),
        abs_policy.num_states(),
        abs_policy.num_actions(),
    );
    if xn != abstraction.num_abstract() || hn != abstraction.horizon() {
        return Err(Error::DimensionMismatch(
            "abstract policy does not match abstraction".into(),
        ));
    }
    let sn = abstraction.num_states();
    let mut probs = Array3::zeros((hn, sn, an));
    for h in 0..hn {
        for s in 0..sn {
            let x = abstraction.map(h, s);
            for a in 0..an {
                probs[[h, s, a]] = abs_policy.probs()[[h, x, a]];
            }
        }
    }
    Policy::new(probs)
}

/// Block-summed occupancy of a concrete policy:
/// `d^{pi,phi}_h(x,a) = sum_{s in phi_h^{-1}(x)} d^pi_h(s,a)`.
pub fn abstract_occupancy(
    mdp: &TabularMdp,
    policy: &Policy,
    abstraction: &StateAbstraction,
) -> Result<OccupancyMeasure> {
    if abstraction.num_states() != mdp.num_states() || abstraction.horizon() != mdp.horizon() {
        return Err(Error::DimensionMismatch(
            "abstraction does not match MDP dimensions".into(),
        ));
    }
    let concrete = compute_occupancy(mdp, policy)?;
    let (hn, sn, an) = concrete.dim();
    let mut values = Array3::zeros((hn, abstraction.num_abstract(), an));
    for h in 0..hn {
        for s in 0..sn {
            let x = abstraction.map(h, s);
            for a in 0..an {
                values[[h, x, a]] += concrete.values()[[h, s, a]];
            }
        }
    }
    OccupancyMeasure::exact(values)
}

/// A guaranteed-bisimilar fixture: every state duplicated `copies` times
/// with identical rows; outgoing mass splits evenly among the copies of each
/// target. Returns the widened MDP and the abstraction collapsing it back.
/// Use `copies` that is a power of two to keep block sums bit-exact.
pub fn duplicate_states(
    mdp: &TabularMdp,
    copies: usize,
) -> Result<(TabularMdp, StateAbstraction)> {
    if copies == 0 {
        return Err(Error::Config("copies must be >= 1".into()));
    }
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    let wide = sn * copies;
    let split = copies as f64;
    let mut transitions = Array4::zeros((hn.saturating_sub(1), wide, an, wide));
    for h in 0..hn.saturating_sub(1) {
        for s in 0..sn {
            for j in 0..copies {
                for a in 0..an {
                    for s2 in 0..sn {
                        let p = mdp.transitions()[[h, s, a, s2]] / split;
                        for j2 in 0..copies {
                            transitions[[h, s * copies + j, a, s2 * copies + j2]] = p;
                        }
                    }
                }
            }
        }
    }
    let rewards = mdp.rewards().map(|r| {
        let mut table = Array3::zeros((hn, wide, an));
        for h in 0..hn {
            for s in 0..sn {
                for j in 0..copies {
                    for a in 0..an {
                        table[[h, s * copies + j, a]] = r[[h, s, a]];
                    }
                }
            }
        }
        table
    });
    let mut rho = Array1::zeros(wide);
    for s in 0..sn {
        for j in 0..copies {
            rho[s * copies + j] = mdp.initial_dist()[s] / split;
        }
    }
    let maps = vec![(0..wide).map(|s| s / copies).collect::<Vec<_>>(); hn];
    Ok((
        TabularMdp::new(wide, an, hn, transitions, rewards, rho)?,
        StateAbstraction::new(maps, sn)?,
    ))
}
