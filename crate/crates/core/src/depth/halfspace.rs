//! Integrated halfspace depths: pointwise univariate depth for curves, and
//! exact bivariate Tukey depth of (curve, derivative) pairs.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::fda::{Curve, FunctionalDataset, Grid};

/// Integrated univariate halfspace depth of each `eval` curve against `reference`.
pub fn mfhd(eval: &[Curve], reference: &[Curve], grid: &Grid) -> Vec<f64> {
    let m = grid.m();
    let n = reference.len() as f64;
    let w = grid.weights();
    // per grid point sorted reference values
    let sorted: Vec<Vec<f64>> = (0..m)
        .map(|t| {
            let mut col: Vec<f64> = reference.iter().map(|c| c.values()[t]).collect();
            col.sort_by(f64::total_cmp);
            col
        })
        .collect();
    eval.par_iter()
        .map(|x| {
            (0..m)
                .map(|t| {
                    let v = x.values()[t];
                    let col = &sorted[t];
                    let le = col.partition_point(|&y| y <= v);
                    let ge = col.len() - col.partition_point(|&y| y < v);
                    w[t] * le.min(ge) as f64 / n
                })
                .sum()
        })
        .collect()
}

/// Integrated exact bivariate Tukey depth of `(x(t), x'(t))` against the
/// reference pairs at each grid point.
pub fn mfhd_bivariate(
    eval: (&[Curve], &[Curve]),
    reference: (&[Curve], &[Curve]),
    grid: &Grid,
) -> Vec<f64> {
    let m = grid.m();
    let n = reference.0.len() as f64;
    let w = grid.weights();
    let pts: Vec<Vec<(f64, f64)>> = (0..m)
        .map(|t| {
            reference
                .0
                .iter()
                .zip(reference.1)
                .map(|(a, b)| (a.values()[t], b.values()[t]))
                .collect()
        })
        .collect();
    (0..eval.0.len())
        .into_par_iter()
        .map(|i| {
            let (x, dx) = (eval.0[i].values(), eval.1[i].values());
            (0..m)
                .map(|t| w[t] * tukey_depth_2d((x[t], dx[t]), &pts[t]) as f64 / n)
                .sum()
        })
        .collect()
}

/// MFHD of every curve of `ds` against the pooled sample.
pub fn mfhd_depth(ds: &FunctionalDataset, use_derivatives: bool) -> Vec<f64> {
    if use_derivatives {
        let d = ds.derivative_curves();
        mfhd_bivariate((ds.curves(), &d), (ds.curves(), &d), ds.grid())
    } else {
        mfhd(ds.curves(), ds.curves(), ds.grid())
    }
}

/// `a·b − c·d` with the rounding error of both products recovered.
fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let p = a * b;
    let q = c * d;
    let e = a.mul_add(b, -p);
    let f = c.mul_add(d, -q);
    (p - q) + (e - f)
}

fn cross(u: (f64, f64), v: (f64, f64)) -> f64 {
    diff_of_products(u.0, v.1, u.1, v.0)
}

fn upper(v: (f64, f64)) -> bool {
    v.1 > 0.0 || (v.1 == 0.0 && v.0 > 0.0)
}

fn angle_cmp(u: (f64, f64), v: (f64, f64)) -> Ordering {
    match (upper(u), upper(v)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => 0.0.partial_cmp(&cross(u, v)).unwrap_or(Ordering::Equal),
    }
}

/// Whether `v` lies at an angle in `[0, π)` counter-clockwise from `u`.
fn in_window(u: (f64, f64), v: (f64, f64)) -> bool {
    let c = cross(u, v);
    c > 0.0 || (c == 0.0 && u.0 * v.0 + u.1 * v.1 > 0.0)
}

/// Tukey depth of `p` in a bivariate sample: the minimum number of sample
/// points in a closed halfplane whose boundary passes through `p`.
pub fn tukey_depth_2d(p: (f64, f64), sample: &[(f64, f64)]) -> usize {
    let n = sample.len();
    let mut v: Vec<(f64, f64)> = sample
        .iter()
        .map(|&(x, y)| (x - p.0, y - p.1))
        .filter(|&(x, y)| x != 0.0 || y != 0.0)
        .collect();
    let k = v.len();
    if k == 0 {
        return n;
    }
    v.sort_by(|&a, &b| angle_cmp(a, b));
    // largest number of points in an open halfplane through p
    let mut best = 0;
    let mut end = 0;
    for i in 0..k {
        end = end.max(i + 1);
        while end < i + k && in_window(v[i], v[end % k]) {
            end += 1;
        }
        best = best.max(end - i);
    }
    n - best
}
