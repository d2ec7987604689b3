//! Noncentral χ² power approximations and sample sizes.

mod density;

pub use density::{delta_g, Density};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::dist::{chisq_sf, chisq_upper_quantile};
use crate::error::{Error, Result};
use crate::fda::ops::{differentiate_values, norm_sq};
use crate::fda::Grid;
use crate::rng::{derive_seed, stream, tag};
use crate::sim::{ProcessModel, Sampler, DEFAULT_GRID_POINTS};

fn check_thetas(thetas: &[f64]) -> Result<()> {
    if thetas.len() < 2 {
        return Err(Error::param("at least two groups are required"));
    }
    if thetas.iter().any(|&t| !(t > 0.0)) || (thetas.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::param("group proportions must be positive and sum to 1"));
    }
    Ok(())
}

fn tau_real(probs: &[Vec<f64>], thetas: &[f64], sizes: &[f64], n: f64) -> f64 {
    let j = thetas.len();
    let s: f64 = (0..j)
        .map(|a| {
            let inner: f64 = (0..j)
                .filter(|&b| b != a)
                .map(|b| thetas[b] * (probs[a][b] - 0.5))
                .sum();
            sizes[a] * (n * inner).powi(2)
        })
        .sum();
    12.0 / (n * (n + 1.0)) * s
}

fn check_probs(probs: &[Vec<f64>], j: usize) -> Result<()> {
    if probs.len() != j || probs.iter().any(|r| r.len() != j) {
        return Err(Error::param(format!("probability matrix must be {j} x {j}")));
    }
    if probs.iter().flatten().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::param("probabilities must lie in [0, 1]"));
    }
    Ok(())
}

/// Noncentrality `12/(N(N+1)) Σ_j N_j {N Σ_{k≠j} θ_k (P_jk − ½)}²` from
/// pairwise probabilities `P_jk = Pr(D(X_j) ≤ D(X_k))`.
pub fn tau_from_pairwise(probs: &[Vec<f64>], thetas: &[f64], group_sizes: &[usize], n: usize) -> Result<f64> {
    check_thetas(thetas)?;
    check_probs(probs, thetas.len())?;
    if group_sizes.len() != thetas.len() {
        return Err(Error::param("one group size per proportion is required"));
    }
    let sizes: Vec<f64> = group_sizes.iter().map(|&s| s as f64).collect();
    Ok(tau_real(probs, thetas, &sizes, n as f64))
}

/// A Monte Carlo probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub se: f64,
    pub reps: usize,
}

fn norm_sum(v: &[f64], grid: &Grid, order: usize) -> f64 {
    let mut total = norm_sq(v, grid.weights()).sqrt();
    let mut cur = v.to_vec();
    for _ in 0..order {
        cur = differentiate_values(&cur, grid.step());
        total += norm_sq(&cur, grid.weights()).sqrt();
    }
    total
}

/// Monte Carlo estimate of `Pr(Σ_m ‖X_j^(m)‖ ≤ Σ_m ‖X_k^(m)‖)`, summing
/// over derivative orders `m = 0..=order`: the probability that an
/// observation of model `j` is at least as deep as one of model `k` under
/// centred LTR ranks.
pub fn mc_rank_prob(
    model_j: &ProcessModel,
    model_k: &ProcessModel,
    grid: &Grid,
    order: usize,
    reps: usize,
    seed: u64,
) -> Result<McEstimate> {
    if reps == 0 {
        return Err(Error::param("at least one replicate is required"));
    }
    let sj = Sampler::new(model_j, grid)?;
    let sk = Sampler::new(model_k, grid)?;
    let hits: usize = (0..reps)
        .into_par_iter()
        .map(|r| {
            let a = sj.draw(&mut stream(seed, &[tag::POWER, r as u64, 0]));
            let b = sk.draw(&mut stream(seed, &[tag::POWER, r as u64, 1]));
            (norm_sum(a.values(), grid, order) <= norm_sum(b.values(), grid, order)) as usize
        })
        .sum();
    let p = hits as f64 / reps as f64;
    Ok(McEstimate {
        estimate: p,
        se: (p * (1.0 - p) / reps as f64).sqrt(),
        reps,
    })
}

/// Pairwise probability matrix for a list of models, each pair estimated
/// from its own stream; `P_kj = 1 − P_jk`, diagonal ½.
pub fn pairwise_probs(
    models: &[ProcessModel],
    grid: &Grid,
    order: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let j = models.len();
    let mut p = vec![vec![0.5; j]; j];
    for a in 0..j {
        for b in a + 1..j {
            let s = derive_seed(seed, &[a as u64, b as u64]);
            let e = mc_rank_prob(&models[a], &models[b], grid, order, reps, s)?.estimate;
            p[a][b] = e;
            p[b][a] = 1.0 - e;
        }
    }
    Ok(p)
}

/// Deltas, proportions and base density of a local alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalAlternativeSpec {
    pub deltas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub density: Density,
}

/// `12 Δ_G² Σ_j θ_j (δ_j − δ̄)²` with `Δ_G = ∫ z g(z)² dz`.
pub fn local_tau(spec: &LocalAlternativeSpec) -> Result<f64> {
    check_thetas(&spec.thetas)?;
    if spec.deltas.len() != spec.thetas.len() {
        return Err(Error::param("one delta per group is required"));
    }
    let dg = delta_g(&spec.density)?;
    let bar: f64 = spec.deltas.iter().zip(&spec.thetas).map(|(d, t)| d * t).sum();
    let spread: f64 = spec
        .deltas
        .iter()
        .zip(&spec.thetas)
        .map(|(d, t)| t * (d - bar).powi(2))
        .sum();
    Ok(12.0 * dg * dg * spread)
}

/// Upper tail of the noncentral χ² law, as a Poisson mixture of central
/// tails summed outward from the mode until the neglected mass is below
/// 1e−12.
pub fn noncentral_chisq_sf(x: f64, df: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return chisq_sf(x, df);
    }
    let lam = tau / 2.0;
    let weight = |k: usize| (-lam + k as f64 * lam.ln() - ln_gamma(k as f64 + 1.0)).exp();
    let term = |k: usize| chisq_sf(x, df + 2.0 * k as f64);
    let mode = lam.floor() as usize;
    let mut mass = 0.0;
    let mut sum = 0.0;
    for k in (0..=mode).rev() {
        let w = weight(k);
        mass += w;
        sum += w * term(k);
        if w < 1e-16 * mass {
            break;
        }
    }
    let mut k = mode + 1;
    while 1.0 - mass > 1e-12 && k < mode + 100_000 {
        let w = weight(k);
        mass += w;
        sum += w * term(k);
        k += 1;
        if w == 0.0 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Power of the level-`alpha` test with `groups` groups at noncentrality `tau`.
pub fn predicted_power(tau: f64, groups: usize, alpha: f64) -> f64 {
    let df = (groups - 1) as f64;
    noncentral_chisq_sf(chisq_upper_quantile(alpha, df), df, tau).max(alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    pub tau: f64,
    pub predicted_power: f64,
    pub alpha: f64,
    pub groups: usize,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SampleSize {
    Feasible { n: usize, power: f64 },
    Infeasible { reason: String },
}

pub const MIN_SAMPLE_PER_GROUP: usize = 4;
pub const MAX_SAMPLE: usize = 10_000_000;

/// Smallest total sample size in `[4J, 10⁷]` whose predicted power reaches
/// `target`, by bisection on a noncentrality increasing in `N`.
pub fn required_sample_size(
    tau_at: impl Fn(usize) -> f64,
    groups: usize,
    alpha: f64,
    target: f64,
) -> Result<SampleSize> {
    if !(target > alpha && target < 1.0) {
        return Err(Error::param(format!("target power must lie in (alpha, 1), got {target}")));
    }
    let power = |n: usize| predicted_power(tau_at(n), groups, alpha);
    let mut lo = MIN_SAMPLE_PER_GROUP * groups;
    let mut hi = MAX_SAMPLE;
    if power(hi) < target {
        return Ok(SampleSize::Infeasible {
            reason: format!("power {target} is not reached for any N up to {MAX_SAMPLE}"),
        });
    }
    if power(lo) >= target {
        return Ok(SampleSize::Feasible { n: lo, power: power(lo) });
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if power(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SampleSize::Feasible { n: hi, power: power(hi) })
}

fn default_alpha() -> f64 {
    0.05
}

fn default_reps() -> usize {
    10_000
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

/// Alternative hypotheses accepted by [`evaluate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Alternative {
    /// Local alternative; the noncentrality does not depend on `N`.
    Local(LocalAlternativeSpec),
    /// Known pairwise probabilities.
    Pairwise { probs: Vec<Vec<f64>>, thetas: Vec<f64> },
    /// Pairwise probabilities estimated by simulating the group models.
    Models {
        models: Vec<ProcessModel>,
        thetas: Vec<f64>,
        #[serde(default)]
        derivative_order: usize,
        #[serde(default = "default_reps")]
        reps: usize,
        #[serde(default = "default_grid_points")]
        grid_points: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    #[serde(flatten)]
    pub alternative: Alternative,
    /// Total sample size at which to report power (pairwise paths).
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub target_power: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    #[serde(flatten)]
    pub power: PowerResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise_probs: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<SampleSize>,
}

/// Evaluates a [`PowerSpec`]: noncentrality, power, and optionally the
/// sample size needed for `target_power`.
pub fn evaluate(spec: &PowerSpec) -> Result<PowerReport> {
    if !(spec.alpha > 0.0 && spec.alpha < 1.0) {
        return Err(Error::param(format!("alpha must lie in (0, 1), got {}", spec.alpha)));
    }
    match &spec.alternative {
        Alternative::Local(l) => {
            let tau = local_tau(l)?;
            let groups = l.thetas.len();
            if let Some(t) = spec.target_power {
                if !(t > spec.alpha && t < 1.0) {
                    return Err(Error::param(format!("target power must lie in (alpha, 1), got {t}")));
                }
            }
            let sample_size = spec.target_power.map(|t| {
                let p = predicted_power(tau, groups, spec.alpha);
                if p >= t {
                    SampleSize::Feasible { n: MIN_SAMPLE_PER_GROUP * groups, power: p }
                } else {
                    SampleSize::Infeasible {
                        reason: "the local-alternative noncentrality does not grow with N".into(),
                    }
                }
            });
            Ok(PowerReport {
                power: PowerResult {
                    tau,
                    predicted_power: predicted_power(tau, groups, spec.alpha),
                    alpha: spec.alpha,
                    groups,
                    n: spec.n,
                },
                pairwise_probs: None,
                sample_size,
            })
        }
        Alternative::Pairwise { probs, thetas } => pairwise_report(probs.clone(), thetas, spec),
        Alternative::Models {
            models,
            thetas,
            derivative_order,
            reps,
            grid_points,
        } => {
            if models.len() != thetas.len() {
                return Err(Error::param("one model per group is required"));
            }
            let grid = Grid::new(*grid_points)?;
            let probs = pairwise_probs(models, &grid, *derivative_order, *reps, spec.seed)?;
            pairwise_report(probs, thetas, spec)
        }
    }
}

fn pairwise_report(probs: Vec<Vec<f64>>, thetas: &[f64], spec: &PowerSpec) -> Result<PowerReport> {
    check_thetas(thetas)?;
    check_probs(&probs, thetas.len())?;
    let groups = thetas.len();
    let tau_at = |n: usize| {
        let sizes: Vec<f64> = thetas.iter().map(|t| t * n as f64).collect();
        tau_real(&probs, thetas, &sizes, n as f64)
    };
    let n = match (spec.n, spec.target_power) {
        (Some(n), _) => Some(n),
        (None, None) => return Err(Error::param("give a sample size n or a target power")),
        (None, Some(_)) => None,
    };
    let sample_size = spec
        .target_power
        .map(|t| required_sample_size(tau_at, groups, spec.alpha, t))
        .transpose()?;
    let at = n.or(match &sample_size {
        Some(SampleSize::Feasible { n, .. }) => Some(*n),
        _ => None,
    });
    let tau = at.map_or(0.0, tau_at);
    Ok(PowerReport {
        power: PowerResult {
            tau,
            predicted_power: predicted_power(tau, groups, spec.alpha),
            alpha: spec.alpha,
            groups,
            n: at,
        },
        pairwise_probs: Some(probs),
        sample_size,
    })
}

#[cfg(test)]
mod tests;
