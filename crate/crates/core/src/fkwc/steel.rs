//! Pairwise two-sample comparisons on depths recomputed within each pair.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{ranking_scores, DepthSpec};
use crate::dist::normal_sf;
use crate::error::{Error, Result};
use crate::fda::FunctionalDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    #[default]
    Sidak,
    Bonferroni,
    Holm,
}

impl Correction {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sidak" => Some(Self::Sidak),
            "bonferroni" => Some(Self::Bonferroni),
            "holm" => Some(Self::Holm),
            _ => None,
        }
    }

    /// Adjusted p-values for `raw`, treating them as `m` simultaneous tests.
    pub fn adjust(self, raw: &[f64], m: usize) -> Vec<f64> {
        let mf = m as f64;
        match self {
            Correction::Sidak => raw
                .iter()
                .map(|&p| (-(mf * (-p).ln_1p()).exp_m1()).clamp(0.0, 1.0))
                .collect(),
            Correction::Bonferroni => raw.iter().map(|&p| (mf * p).min(1.0)).collect(),
            Correction::Holm => {
                let mut order: Vec<usize> = (0..raw.len()).collect();
                order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
                let mut out = vec![0.0; raw.len()];
                let mut running: f64 = 0.0;
                for (k, &i) in order.iter().enumerate() {
                    let factor = (m.saturating_sub(k)).max(1) as f64;
                    running = running.max((factor * raw[i]).min(1.0));
                    out[i] = running;
                }
                out
            }
        }
    }
}

/// Two-sided normal-approximation Wilcoxon rank-sum test of `x` against
/// `y`, using mid-ranks and the tie-corrected variance. Returns `(z, p)`.
pub fn wilcoxon_rank_sum(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (n1, n2) = (x.len(), y.len());
    let n = n1 + n2;
    let mut all: Vec<(f64, bool)> = x.iter().map(|&v| (v, true)).chain(y.iter().map(|&v| (v, false))).collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && all[j].0 == all[i].0 {
            j += 1;
        }
        let mid = (i + j + 1) as f64 / 2.0;
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        rank_sum += mid * all[i..j].iter().filter(|e| e.1).count() as f64;
        i = j;
    }
    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let mean = n1f * (nf + 1.0) / 2.0;
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if var <= 0.0 {
        return (0.0, 1.0);
    }
    let z = (rank_sum - mean) / var.sqrt();
    (z, (2.0 * normal_sf(z.abs())).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    /// One-based group labels.
    pub groups: (usize, usize),
    pub z: f64,
    pub raw_p: f64,
    pub adjusted_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCResult {
    pub pairwise_raw_p: Vec<Vec<f64>>,
    pub pairwise_adjusted_p: Vec<Vec<f64>>,
    pub num_comparisons: usize,
    pub correction: Correction,
    pub comparisons: Vec<PairComparison>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Pairwise Wilcoxon comparisons of depth values computed on each
/// two-group restriction of `ds`, adjusted over `correction_count` tests
/// (default: the number of pairs).
pub fn steel_mc(
    ds: &FunctionalDataset,
    spec: &DepthSpec,
    correction: Correction,
    correction_count: Option<usize>,
) -> Result<MCResult> {
    spec.validate()?;
    let j = ds.num_groups();
    if j < 2 {
        return Err(Error::param("at least two groups are required"));
    }
    let pairs: Vec<(usize, usize)> = (0..j).flat_map(|a| (a + 1..j).map(move |b| (a, b))).collect();
    let m = correction_count.unwrap_or(pairs.len());
    if m < pairs.len() {
        return Err(Error::param(format!(
            "correction count {m} is smaller than the {} comparisons performed",
            pairs.len()
        )));
    }
    let tests: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let sub = ds.restrict(&[a, b])?;
            let scores = ranking_scores(&sub, spec)?;
            let na = ds.group_sizes()[a];
            Ok(wilcoxon_rank_sum(&scores[..na], &scores[na..]))
        })
        .collect::<Result<_>>()?;
    let raw: Vec<f64> = tests.iter().map(|t| t.1).collect();
    let adj = correction.adjust(&raw, m);
    let mut raw_m = vec![vec![1.0; j]; j];
    let mut adj_m = vec![vec![1.0; j]; j];
    let mut comparisons = Vec::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        raw_m[a][b] = raw[k];
        raw_m[b][a] = raw[k];
        adj_m[a][b] = adj[k];
        adj_m[b][a] = adj[k];
        comparisons.push(PairComparison {
            groups: (a + 1, b + 1),
            z: tests[k].0,
            raw_p: raw[k],
            adjusted_p: adj[k],
        });
    }
    let warnings = ds
        .group_sizes()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 4)
        .map(|(g, s)| format!("group {} has only {s} observations; the normal approximation is poor", g + 1))
        .collect();
    Ok(MCResult {
        pairwise_raw_p: raw_m,
        pairwise_adjusted_p: adj_m,
        num_comparisons: m,
        correction,
        comparisons,
        warnings,
    })
}
