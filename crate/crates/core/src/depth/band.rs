//! Modified band depth of order K and its curve/derivative average.

use rayon::prelude::*;

use super::DepthSpec;
use crate::fda::{Curve, FunctionalDataset, Grid};

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// MBD of order `order` of each `eval` curve against `reference`.
///
/// For each band size `k = 2..=order` this is the time-averaged fraction
/// of `k`-subsets of the reference whose band (weak inequalities) contains
/// the curve; the sizes are summed.
pub fn mbd(eval: &[Curve], reference: &[Curve], order: usize, grid: &Grid) -> Vec<f64> {
    let m = grid.m();
    let n = reference.len();
    let w = grid.weights();
    let sorted: Vec<Vec<f64>> = (0..m)
        .map(|t| {
            let mut col: Vec<f64> = reference.iter().map(|c| c.values()[t]).collect();
            col.sort_by(f64::total_cmp);
            col
        })
        .collect();
    let totals: Vec<f64> = (2..=order).map(|k| binom(n, k)).collect();
    eval.par_iter()
        .map(|x| {
            (0..m)
                .map(|t| {
                    let v = x.values()[t];
                    let col = &sorted[t];
                    let below = col.partition_point(|&y| y < v);
                    let above = n - col.partition_point(|&y| y <= v);
                    let frac: f64 = (2..=order)
                        .zip(&totals)
                        .filter(|(k, _)| *k <= n)
                        .map(|(k, &tot)| (tot - binom(below, k) - binom(above, k)) / tot)
                        .sum();
                    w[t] * frac
                })
                .sum()
        })
        .collect()
}

/// MBD of every curve of `ds`; with derivatives, the weighted average of
/// the curve and derivative channel depths.
pub fn mbd_depth(ds: &FunctionalDataset, spec: &DepthSpec) -> Vec<f64> {
    let k = spec.band_order;
    let d0 = mbd(ds.curves(), ds.curves(), k, ds.grid());
    if !spec.use_derivatives {
        return d0;
    }
    let der = ds.derivative_curves();
    let d1 = mbd(&der, &der, k, ds.grid());
    let [w0, w1] = spec.channel_weights;
    d0.iter().zip(&d1).map(|(a, b)| w0 * a + w1 * b).collect()
}
