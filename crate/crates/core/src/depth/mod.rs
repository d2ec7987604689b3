//! Functional data depths and depth-based ranks of a pooled sample.
//!
//! Every depth is evaluated for a set of *evaluation* curves against a
//! *reference* sample; the dataset-level entry points use the pooled
//! dataset as both. Larger depth means more central.

mod band;
mod halfspace;
mod ltr;
mod projection;
mod rank;
mod spatial;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fda::FunctionalDataset;

pub use band::{mbd, mbd_depth};
pub use halfspace::{mfhd, mfhd_depth, mfhd_bivariate, tukey_depth_2d};
pub use ltr::{ltr_depth, ltr_depth_of, ltr_rank_scores};
pub use projection::{directions, rp_depth, rp_depth_deriv};
pub use rank::{depth_table, ranks_from_scores, write_depth_csv, DepthRow, RankVector};
pub use spatial::{ksd_depth, ksd_of, median_heuristic, spatial_depth, spatial_of};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthKind {
    /// L²-root depth.
    Ltr,
    /// Random projection depth.
    Rp,
    /// Multivariate functional halfspace depth.
    Mfhd,
    /// Modified band depth.
    Mbd,
    /// Functional spatial depth.
    Spatial,
    /// Kernelized spatial depth.
    Ksd,
}

impl DepthKind {
    pub const ALL: [DepthKind; 6] = [
        DepthKind::Ltr,
        DepthKind::Rp,
        DepthKind::Mfhd,
        DepthKind::Mbd,
        DepthKind::Spatial,
        DepthKind::Ksd,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ltr" => Some(Self::Ltr),
            "rp" => Some(Self::Rp),
            "mfhd" => Some(Self::Mfhd),
            "mbd" => Some(Self::Mbd),
            "spatial" | "sd" => Some(Self::Spatial),
            "ksd" => Some(Self::Ksd),
            _ => None,
        }
    }
}

/// Bandwidth of the Gaussian kernel used by kernelized spatial depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    /// σ² = median of the pairwise squared L² distances of the reference sample.
    #[default]
    MedianHeuristic,
    /// Fixed σ > 0.
    Fixed(f64),
}

fn default_projections() -> usize {
    20
}

fn default_band_order() -> usize {
    2
}

fn default_weights() -> [f64; 2] {
    [0.5, 0.5]
}

/// Which depth to compute and with which options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSpec {
    pub kind: DepthKind,
    /// Use the pair (curve, first derivative): the primed variants.
    #[serde(default)]
    pub use_derivatives: bool,
    /// Number of random directions (RP only).
    #[serde(default = "default_projections")]
    pub num_projections: usize,
    /// Largest band size K (MBD only).
    #[serde(default = "default_band_order")]
    pub band_order: usize,
    /// Channel weights (curve, derivative) for the derivative variants that
    /// average per-channel quantities.
    #[serde(default = "default_weights")]
    pub channel_weights: [f64; 2],
    #[serde(default)]
    pub kernel_bandwidth: Bandwidth,
    /// Seed for projection draws and tie-breaking.
    #[serde(default)]
    pub rng_seed: u64,
}

impl DepthSpec {
    pub fn new(kind: DepthKind) -> Self {
        Self {
            kind,
            use_derivatives: false,
            num_projections: default_projections(),
            band_order: default_band_order(),
            channel_weights: default_weights(),
            kernel_bandwidth: Bandwidth::default(),
            rng_seed: 0,
        }
    }

    pub fn primed(kind: DepthKind) -> Self {
        Self::new(kind).with_derivatives(true)
    }

    pub fn with_derivatives(mut self, on: bool) -> Self {
        self.use_derivatives = on;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_projections(mut self, m: usize) -> Self {
        self.num_projections = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_projections < 1 {
            return Err(Error::param("number of projections must be at least 1"));
        }
        if self.band_order < 2 {
            return Err(Error::param("band order must be at least 2"));
        }
        let [a, b] = self.channel_weights;
        if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() || (a + b - 1.0).abs() > 1e-12 {
            return Err(Error::param(format!(
                "channel weights must be nonnegative and sum to 1, got ({a}, {b})"
            )));
        }
        if let Bandwidth::Fixed(s) = self.kernel_bandwidth {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::param(format!("kernel bandwidth must be positive, got {s}")));
            }
        }
        Ok(())
    }

    /// Short display label, e.g. `RP20'` or `MBD`.
    pub fn label(&self) -> String {
        let base = match self.kind {
            DepthKind::Ltr => "LTR".to_string(),
            DepthKind::Rp => format!("RP{}", self.num_projections),
            DepthKind::Mfhd => "MFHD".to_string(),
            DepthKind::Mbd if self.band_order == 2 => "MBD".to_string(),
            DepthKind::Mbd => format!("MBD{}", self.band_order),
            DepthKind::Spatial => "SD".to_string(),
            DepthKind::Ksd => "KSD".to_string(),
        };
        if self.use_derivatives {
            base + "'"
        } else {
            base
        }
    }
}

/// Depth of every curve of a dataset with respect to the pooled sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthVector {
    pub values: Vec<f64>,
    pub spec: DepthSpec,
}

/// Depth of every curve of `ds` with respect to the pooled empirical distribution.
pub fn compute_depth(ds: &FunctionalDataset, spec: &DepthSpec) -> Result<DepthVector> {
    spec.validate()?;
    let values = match spec.kind {
        DepthKind::Ltr => ltr_depth(ds, spec.use_derivatives as usize, spec.channel_weights),
        DepthKind::Rp if spec.use_derivatives => rp_depth_deriv(ds, spec),
        DepthKind::Rp => rp_depth(ds, spec),
        DepthKind::Mfhd => mfhd_depth(ds, spec.use_derivatives),
        DepthKind::Mbd => mbd_depth(ds, spec),
        DepthKind::Spatial => spatial_depth(ds, spec),
        DepthKind::Ksd => ksd_depth(ds, spec)?,
    };
    Ok(DepthVector {
        values,
        spec: spec.clone(),
    })
}

/// Scores whose ascending order is the depth order (larger = deeper).
///
/// For LTR these are the negated [`ltr_rank_scores`], which give the ranks
/// of the depth with respect to a centred population without estimating it.
pub fn ranking_scores(ds: &FunctionalDataset, spec: &DepthSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    match spec.kind {
        DepthKind::Ltr => Ok(ltr::ltr_rank_scores_weighted(ds, spec.use_derivatives, spec.channel_weights)
            .into_iter()
            .map(|s| -s)
            .collect()),
        _ => Ok(compute_depth(ds, spec)?.values),
    }
}

/// Depth-based ranks of the pooled sample: rank `N` is the deepest curve.
/// Exact ties are broken by a seeded uniform shuffle.
pub fn depth_ranks(ds: &FunctionalDataset, spec: &DepthSpec) -> Result<RankVector> {
    let scores = ranking_scores(ds, spec)?;
    Ok(ranks_from_scores(
        &scores,
        crate::rng::derive_seed(spec.rng_seed, &[crate::rng::tag::TIES]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(DepthSpec::new(DepthKind::Rp).validate().is_ok());
        assert!(DepthSpec::new(DepthKind::Rp).with_projections(0).validate().is_err());
        let mut s = DepthSpec::new(DepthKind::Mbd);
        s.band_order = 1;
        assert!(s.validate().is_err());
        let mut s = DepthSpec::new(DepthKind::Mbd);
        s.channel_weights = [0.7, 0.4];
        assert!(s.validate().is_err());
        let mut s = DepthSpec::new(DepthKind::Ksd);
        s.kernel_bandwidth = Bandwidth::Fixed(0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(DepthSpec::primed(DepthKind::Rp).label(), "RP20'");
        assert_eq!(DepthSpec::new(DepthKind::Mfhd).label(), "MFHD");
    }

    #[test]
    fn spec_json_defaults() {
        let s: DepthSpec = serde_json::from_str(r#"{"kind": "rp"}"#).unwrap();
        assert_eq!(s, DepthSpec::new(DepthKind::Rp));
    }
}
