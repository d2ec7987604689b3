//! Kruskal–Wallis type tests on depth ranks and pairwise comparisons.

mod statistic;
mod steel;

pub use statistic::{
    group_mean_ranks, kw_statistic, percentile_statistic, permutation_statistics, StatisticKind,
};
pub use steel::{steel_mc, wilcoxon_rank_sum, Correction, MCResult, PairComparison};

use serde::{Deserialize, Serialize};

use crate::depth::{depth_ranks, DepthSpec, RankVector};
use crate::dist::chisq_sf;
use crate::error::{Error, Result};
use crate::fda::FunctionalDataset;

fn default_alpha() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub depth_spec: DepthSpec,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Use the percentile-modified statistic with this fraction of the
    /// least deep observations.
    #[serde(default)]
    pub percentile_r: Option<f64>,
}

impl TestConfig {
    pub fn new(depth_spec: DepthSpec) -> Self {
        Self {
            depth_spec,
            alpha: default_alpha(),
            percentile_r: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_percentile(mut self, r: f64) -> Self {
        self.percentile_r = Some(r);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if let Some(r) = self.percentile_r {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::param(format!("r must lie in (0, 1], got {r}")));
            }
        }
        self.depth_spec.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub statistic_kind: StatisticKind,
    pub df: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub rejected: bool,
    pub depth: String,
    pub group_sizes: Vec<usize>,
    pub group_mean_ranks: Vec<f64>,
    /// `(mean rank − (N+1)/2)²` per group.
    pub group_deviations: Vec<f64>,
    pub tie_breaks_applied: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Evaluates the test for given ranks and zero-based group labels.
pub fn test_from_ranks(
    ranks: &RankVector,
    groups: &[usize],
    config: &TestConfig,
) -> Result<TestResult> {
    config.validate()?;
    let means = group_mean_ranks(&ranks.ranks, groups)?;
    let j = means.len();
    if j < 2 {
        return Err(Error::param("at least two groups are required"));
    }
    let n = ranks.ranks.len();
    let centre = (n as f64 + 1.0) / 2.0;
    let mut warnings = Vec::new();
    let (statistic, kind) = match config.percentile_r {
        Some(r) => {
            let n_prime = statistic::percentile_count(n, r);
            if n_prime < j {
                warnings.push(format!(
                    "only {n_prime} observations enter the percentile statistic for {j} groups; the statistic is degenerate"
                ));
            }
            (percentile_statistic(&ranks.ranks, groups, r)?, StatisticKind::Percentile)
        }
        None => (kw_statistic(&ranks.ranks, groups)?, StatisticKind::W),
    };
    let df = j - 1;
    let p_value = chisq_sf(statistic, df as f64).clamp(0.0, 1.0);
    let mut sizes = vec![0; j];
    groups.iter().for_each(|&g| sizes[g] += 1);
    Ok(TestResult {
        statistic,
        statistic_kind: kind,
        df,
        p_value,
        alpha: config.alpha,
        rejected: p_value < config.alpha,
        depth: config.depth_spec.label(),
        group_sizes: sizes,
        group_deviations: means.iter().map(|m| (m - centre).powi(2)).collect(),
        group_mean_ranks: means,
        tie_breaks_applied: ranks.tie_breaks_applied,
        warnings,
    })
}

/// Depth ranks of the pooled sample, the statistic and its χ² p-value.
pub fn fkwc_test(ds: &FunctionalDataset, config: &TestConfig) -> Result<TestResult> {
    config.validate()?;
    if ds.num_groups() < 2 {
        return Err(Error::param("at least two groups are required"));
    }
    let ranks = depth_ranks(ds, &config.depth_spec)?;
    test_from_ranks(&ranks, ds.groups(), config)
}
