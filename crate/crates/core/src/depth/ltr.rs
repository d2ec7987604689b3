//! L²-root depth: `(1 + E‖x − X‖²^{1/2})^{-1}`, and its derivative extension
//! averaging the root mean squared distances of the curve and derivative
//! channels.

use rayon::prelude::*;

use crate::fda::ops::{dist_sq, norm_sq};
use crate::fda::{Curve, FunctionalDataset, Grid};

/// LTR depth of each `eval` point against `reference`, over one or more
/// channels combined with `weights` (one weight per channel).
pub fn ltr_depth_of(
    eval: &[&[Curve]],
    reference: &[&[Curve]],
    weights: &[f64],
    grid: &Grid,
) -> Vec<f64> {
    assert_eq!(eval.len(), reference.len());
    assert_eq!(eval.len(), weights.len());
    let n_eval = eval[0].len();
    let n_ref = reference[0].len() as f64;
    let w = grid.weights();
    (0..n_eval)
        .into_par_iter()
        .map(|i| {
            let spread: f64 = (0..eval.len())
                .map(|k| {
                    let x = eval[k][i].values();
                    let msd = reference[k]
                        .iter()
                        .map(|y| dist_sq(x, y.values(), w))
                        .sum::<f64>()
                        / n_ref;
                    weights[k] * msd.sqrt()
                })
                .sum();
            1.0 / (1.0 + spread)
        })
        .collect()
}

/// Sample LTR depth of every curve of `ds`; `p` is 0 (curves only) or 1
/// (curves and first derivatives).
pub fn ltr_depth(ds: &FunctionalDataset, p: usize, weights: [f64; 2]) -> Vec<f64> {
    assert!(p <= 1, "only the first derivative is supported");
    if p == 0 {
        let c = ds.curves();
        ltr_depth_of(&[c], &[c], &[1.0], ds.grid())
    } else {
        let c = ds.curves();
        let d = ds.derivative_curves();
        ltr_depth_of(&[c, &d], &[c, &d], &weights, ds.grid())
    }
}

/// Outlyingness scores whose descending order is the ascending LTR depth
/// order for a sample centred at zero.
///
/// Without derivatives this is `‖x‖²`. With derivatives it is
/// `½ Σ_k (‖x^(k)‖² + mean_j ‖X_j^(k)‖²)^{1/2}`, i.e. the root mean squared
/// distance to a centred sample, evaluated from norms alone.
pub fn ltr_rank_scores(ds: &FunctionalDataset, p: usize) -> Vec<f64> {
    assert!(p <= 1, "only the first derivative is supported");
    ltr_rank_scores_weighted(ds, p == 1, [0.5, 0.5])
}

pub(crate) fn ltr_rank_scores_weighted(
    ds: &FunctionalDataset,
    derivatives: bool,
    weights: [f64; 2],
) -> Vec<f64> {
    let w = ds.grid().weights();
    let norms = |cs: &[Curve]| cs.iter().map(|c| norm_sq(c.values(), w)).collect::<Vec<_>>();
    let n0 = norms(ds.curves());
    if !derivatives {
        return n0;
    }
    let n1 = norms(&ds.derivative_curves());
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m0, m1) = (mean(&n0), mean(&n1));
    n0.iter()
        .zip(&n1)
        .map(|(a, b)| weights[0] * (a + m0).sqrt() + weights[1] * (b + m1).sqrt())
        .collect()
}
