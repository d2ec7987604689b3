//! Spatial depth and kernelized spatial depth.

use rayon::prelude::*;

use super::{Bandwidth, DepthSpec};
use crate::error::Result;
use crate::fda::ops::{dist_sq, norm_sq};
use crate::fda::{Curve, FunctionalDataset, Grid};

/// Spatial depth `1 − ‖mean_j s(x − X_j)‖` with `s(v) = v/‖v‖`, `s(0) = 0`.
pub fn spatial_of(eval: &[Curve], reference: &[Curve], grid: &Grid) -> Vec<f64> {
    let w = grid.weights();
    let n = reference.len() as f64;
    eval.par_iter()
        .map(|x| {
            let xv = x.values();
            let mut acc = vec![0.0; xv.len()];
            for y in reference {
                let d = dist_sq(xv, y.values(), w).sqrt();
                if d > 0.0 {
                    for ((a, xi), yi) in acc.iter_mut().zip(xv).zip(y.values()) {
                        *a += (xi - yi) / d;
                    }
                }
            }
            (1.0_f64 - norm_sq(&acc, w).sqrt() / n).max(0.0)
        })
        .collect()
}

/// Median of the pairwise squared L² distances of `reference`; falls back
/// to their positive mean, then to 1, for degenerate samples.
pub fn median_heuristic(reference: &[Curve], grid: &Grid) -> f64 {
    let w = grid.weights();
    let mut d: Vec<f64> = Vec::new();
    for (i, a) in reference.iter().enumerate() {
        for b in &reference[i + 1..] {
            d.push(dist_sq(a.values(), b.values(), w));
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    d.sort_by(f64::total_cmp);
    let k = d.len();
    let med = if k % 2 == 1 { d[k / 2] } else { 0.5 * (d[k / 2 - 1] + d[k / 2]) };
    if med > 0.0 {
        return med;
    }
    let pos: Vec<f64> = d.into_iter().filter(|&v| v > 0.0).collect();
    if pos.is_empty() {
        1.0
    } else {
        pos.iter().sum::<f64>() / pos.len() as f64
    }
}

/// Kernelized spatial depth with Gaussian kernel `exp(−‖x − z‖²/σ²)`,
/// where `sigma_sq` is σ².
pub fn ksd_of(eval: &[Curve], reference: &[Curve], sigma_sq: f64, grid: &Grid) -> Vec<f64> {
    let w = grid.weights();
    let n = reference.len();
    let kern = |a: &Curve, b: &Curve| (-dist_sq(a.values(), b.values(), w) / sigma_sq).exp();
    let gram: Vec<Vec<f64>> = reference
        .par_iter()
        .map(|a| reference.iter().map(|b| kern(a, b)).collect())
        .collect();
    eval.par_iter()
        .map(|x| {
            let g: Vec<f64> = reference.iter().map(|y| kern(x, y)).collect();
            // a_j = 1/‖φ(x) − φ(X_j)‖, zero for coincident points
            let a: Vec<f64> = g
                .iter()
                .map(|&gj| {
                    let d2 = 2.0 - 2.0 * gj;
                    if d2 > 0.0 {
                        1.0 / d2.sqrt()
                    } else {
                        0.0
                    }
                })
                .collect();
            let sum_a: f64 = a.iter().sum();
            let sum_ga: f64 = a.iter().zip(&g).map(|(x, y)| x * y).sum();
            let quad: f64 = (0..n)
                .filter(|&j| a[j] > 0.0)
                .map(|j| a[j] * gram[j].iter().zip(&a).map(|(gk, ak)| gk * ak).sum::<f64>())
                .sum();
            let sq = (sum_a * sum_a - 2.0 * sum_a * sum_ga + quad).max(0.0);
            (1.0_f64 - sq.sqrt() / n as f64).clamp(0.0, 1.0)
        })
        .collect()
}

fn sigma_sq(bw: Bandwidth, reference: &[Curve], grid: &Grid) -> f64 {
    match bw {
        Bandwidth::MedianHeuristic => median_heuristic(reference, grid),
        Bandwidth::Fixed(s) => s * s,
    }
}

fn combine(d0: Vec<f64>, d1: Vec<f64>, w: [f64; 2]) -> Vec<f64> {
    d0.iter().zip(&d1).map(|(a, b)| w[0] * a + w[1] * b).collect()
}

/// Spatial depth of every curve of `ds`; with derivatives, the weighted
/// average of the channel depths.
pub fn spatial_depth(ds: &FunctionalDataset, spec: &DepthSpec) -> Vec<f64> {
    let d0 = spatial_of(ds.curves(), ds.curves(), ds.grid());
    if !spec.use_derivatives {
        return d0;
    }
    let der = ds.derivative_curves();
    combine(d0, spatial_of(&der, &der, ds.grid()), spec.channel_weights)
}

/// Kernelized spatial depth of every curve of `ds`, with the bandwidth
/// chosen per channel.
pub fn ksd_depth(ds: &FunctionalDataset, spec: &DepthSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let g = ds.grid();
    let s0 = sigma_sq(spec.kernel_bandwidth, ds.curves(), g);
    let d0 = ksd_of(ds.curves(), ds.curves(), s0, g);
    if !spec.use_derivatives {
        return Ok(d0);
    }
    let der = ds.derivative_curves();
    let s1 = sigma_sq(spec.kernel_bandwidth, &der, g);
    Ok(combine(d0, ksd_of(&der, &der, s1, g), spec.channel_weights))
}
