use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ProcessModel, Sampler, DEFAULT_GRID_POINTS};
use crate::depth::{depth_ranks, DepthSpec};
use crate::error::{Error, Result};
use crate::fda::{FunctionalDataset, Grid};
use crate::fkwc::{test_from_ranks, TestConfig};
use crate::rng::{derive_seed, stream, tag};

/// One parameter point of a study: a model per group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyPoint {
    pub param_name: String,
    pub param_value: f64,
    pub models: Vec<ProcessModel>,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub points: Vec<StudyPoint>,
    pub group_sizes: Vec<usize>,
    pub depths: Vec<DepthSpec>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub percentile_r: Option<f64>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

impl StudySpec {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::param("at least one replication is required"));
        }
        if self.group_sizes.len() < 2 || self.group_sizes.contains(&0) {
            return Err(Error::param("at least two nonempty groups are required"));
        }
        if self.depths.is_empty() {
            return Err(Error::param("no depths to evaluate"));
        }
        for p in &self.points {
            if p.models.len() != self.group_sizes.len() {
                return Err(Error::param(format!(
                    "point {} = {} has {} models for {} groups",
                    p.param_name,
                    p.param_value,
                    p.models.len(),
                    self.group_sizes.len()
                )));
            }
        }
        for d in &self.depths {
            TestConfig {
                depth_spec: d.clone(),
                alpha: self.alpha,
                percentile_r: self.percentile_r,
            }
            .validate()?;
        }
        Ok(())
    }
}

/// Rejection rate of one depth at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub depth: String,
    pub family: String,
    pub param_name: String,
    pub param_value: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub rate: f64,
    pub se: f64,
    #[serde(rename = "R")]
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
}

impl StudyResult {
    pub fn rate(&self, depth: &str, param_value: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.depth == depth && r.param_value == param_value)
            .map(|r| r.rate)
    }
}

fn family(models: &[ProcessModel]) -> String {
    let mut names: Vec<&str> = models.iter().map(|m| m.family_name()).collect();
    names.dedup();
    names.join("/")
}

/// Replicated FKWC tests: per replicate the groups are drawn from streams
/// keyed by `(seed, point, replicate, group)` and every depth is tested on
/// the same data. Results do not depend on the thread count.
pub fn run_study(spec: &StudySpec) -> Result<StudyResult> {
    spec.validate()?;
    let grid = Grid::new(spec.grid_points)?;
    let mut rows = Vec::new();
    for (pi, point) in spec.points.iter().enumerate() {
        let samplers = point
            .models
            .iter()
            .map(|m| Sampler::new(m, &grid))
            .collect::<Result<Vec<_>>>()?;
        let rejections: Vec<Vec<bool>> = (0..spec.replications)
            .into_par_iter()
            .map(|r| {
                let groups = samplers
                    .iter()
                    .zip(&spec.group_sizes)
                    .enumerate()
                    .map(|(g, (s, &n))| {
                        s.draw_n(n, &mut stream(spec.seed, &[tag::SAMPLE, pi as u64, r as u64, g as u64]))
                    })
                    .collect();
                let ds = FunctionalDataset::from_groups(grid.clone(), groups)?;
                spec.depths
                    .iter()
                    .enumerate()
                    .map(|(di, d)| {
                        let mut d = d.clone();
                        d.rng_seed = derive_seed(spec.seed, &[tag::DEPTH, pi as u64, r as u64, di as u64]);
                        let cfg = TestConfig {
                            depth_spec: d.clone(),
                            alpha: spec.alpha,
                            percentile_r: spec.percentile_r,
                        };
                        let ranks = depth_ranks(&ds, &d)?;
                        Ok(test_from_ranks(&ranks, ds.groups(), &cfg)?.rejected)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let reps = spec.replications as f64;
        for (di, d) in spec.depths.iter().enumerate() {
            let k = rejections.iter().filter(|r| r[di]).count() as f64;
            let rate = k / reps;
            rows.push(StudyRow {
                depth: d.label(),
                family: family(&point.models),
                param_name: point.param_name.clone(),
                param_value: point.param_value,
                n: spec.group_sizes.iter().sum(),
                rate,
                se: (rate * (1.0 - rate) / reps).sqrt(),
                replications: spec.replications,
            });
        }
    }
    Ok(StudyResult { rows })
}

/// Tidy CSV: `depth,family,param_name,param_value,N,rate,se,R`.
pub fn write_study_csv<W: Write>(out: W, result: &StudyResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &result.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
