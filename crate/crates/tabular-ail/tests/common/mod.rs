//! Independent oracles shared by the integration suites: brute-force
//! enumeration of trajectories and deterministic policies, truncated-path
//! probabilities, and small statistics helpers. Everything here recomputes
//! from first principles, separate from the library's own code paths.

#![allow(dead_code)]

use ndarray::{Array2, Array3};
use tabular_ail::mdp::{Policy, TabularMdp};

/// Occupancy by exhaustive weighted path expansion.
pub fn enumerate_occupancy(mdp: &TabularMdp, policy: &Policy) -> Array3<f64> {
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    let mut occ = Array3::zeros((hn, sn, an));
    let mut frontier: Vec<(f64, usize)> = (0..sn)
        .map(|s| (mdp.initial_dist()[s], s))
        .filter(|(p, _)| *p > 0.0)
        .collect();
    for h in 0..hn {
        let mut next = Vec::new();
        for (p, s) in &frontier {
            for a in 0..an {
                let pa = p * policy.probs()[[h, *s, a]];
                if pa == 0.0 {
                    continue;
                }
                occ[[h, *s, a]] += pa;
                if h + 1 < hn {
                    for s2 in 0..sn {
                        let p2 = pa * mdp.transitions()[[h, *s, a, s2]];
                        if p2 > 0.0 {
                            next.push((p2, s2));
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    occ
}

/// Values of every deterministic policy, by counting action tables in base
/// `|A|`. Only usable when `|A|^(|S| H)` is small.
pub fn enumerate_deterministic_values(mdp: &TabularMdp, rewards: &Array3<f64>) -> Vec<f64> {
    let (hn, sn, an) = (mdp.horizon(), mdp.num_states(), mdp.num_actions());
    let cells = hn * sn;
    let total = (an as u64).pow(cells as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut c = code;
        let mut actions = Array2::zeros((hn, sn));
        for h in 0..hn {
            for s in 0..sn {
                actions[[h, s]] = (c % an as u64) as usize;
                c /= an as u64;
            }
        }
        let policy = Policy::deterministic(&actions, an).expect("valid actions");
        out.push(
            tabular_ail::evaluate_policy_direct(mdp, &policy, Some(rewards)).expect("evaluates"),
        );
    }
    out
}

/// All truncated state-action sequences of length `len`.
pub fn enumerate_truncated(sn: usize, an: usize, len: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * sn * an);
        for prefix in &out {
            for s in 0..sn {
                for a in 0..an {
                    let mut tr = prefix.clone();
                    tr.push((s, a));
                    next.push(tr);
                }
            }
        }
        out = next;
    }
    out
}

/// Probability of a truncated trajectory under a policy.
pub fn truncated_probability(mdp: &TabularMdp, policy: &Policy, tr: &[(usize, usize)]) -> f64 {
    let mut p = mdp.initial_dist()[tr[0].0];
    for (h, (s, a)) in tr.iter().enumerate() {
        p *= policy.probs()[[h, *s, *a]];
        if p == 0.0 {
            return 0.0;
        }
        if h + 1 < tr.len() {
            p *= mdp.transitions()[[h, *s, *a, tr[h + 1].0]];
        }
    }
    p
}

/// Whether every state of the prefix is covered by the per-step sets.
pub fn prefix_covered(tr: &[(usize, usize)], covered: &[Vec<bool>]) -> bool {
    tr.iter().enumerate().all(|(h, (s, _))| covered[h][*s])
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn stderr(values: &[f64]) -> f64 {
    let m = mean(values);
    if values.len() < 2 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() as f64 - 1.0);
    (var / values.len() as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = mean(&lx);
    let my = mean(&ly);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Tie-corrected Spearman correlation with the one-sided p-value for a
/// negative trend (Student-t approximation).
pub fn spearman_negative(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let mx = mean(&rx);
    let my = mean(&ry);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    let rho = cov / (vx * vy).sqrt();
    let t = rho * ((n as f64 - 2.0) / (1.0 - rho * rho).max(1e-12)).sqrt();
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let dist = StudentsT::new(0.0, 1.0, n as f64 - 2.0).expect("valid dof");
    let p = dist.cdf(t); // P(T <= t): small when the trend is negative
    (rho, p)
}
