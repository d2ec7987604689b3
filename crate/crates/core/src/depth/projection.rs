//! Random projection depth and its bivariate (curve, derivative) variant.
//!
//! Directions are smoothed Gaussian curves of unit L² norm. Before
//! projecting, each channel is standardised pointwise by the pooled
//! sample's median absolute deviation, so that projections are unchanged
//! when every curve is multiplied by the same positive function.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::DepthSpec;
use crate::fda::ops::{dot, norm_sq};
use crate::fda::{Curve, FunctionalDataset, Grid};
use crate::rng::{stream, tag};

/// `count` unit-norm direction curves; direction `d` depends only on
/// `(seed, d)`.
pub fn directions(grid: &Grid, count: usize, seed: u64) -> Vec<Curve> {
    let m = grid.m();
    (0..count)
        .map(|d| {
            let mut rng = stream(seed, &[tag::DIRECTIONS, d as u64]);
            let raw: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let smooth: Vec<f64> = (0..m)
                .map(|i| {
                    let lo = i.saturating_sub(2);
                    let hi = (i + 2).min(m - 1);
                    raw[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
                })
                .collect();
            let norm = norm_sq(&smooth, grid.weights()).sqrt();
            Curve::from_vec_unchecked(smooth.into_iter().map(|v| v / norm).collect())
        })
        .collect()
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Pointwise reciprocal robust scale of a sample: 1/MAD, falling back to
/// 1/(mean absolute deviation), and 0 where the sample is constant.
fn inverse_scales(curves: &[Curve]) -> Vec<f64> {
    let m = curves[0].len();
    let mut col = Vec::with_capacity(curves.len());
    (0..m)
        .map(|t| {
            col.clear();
            col.extend(curves.iter().map(|c| c.values()[t]));
            col.sort_by(f64::total_cmp);
            let med = median(&col);
            let mut dev: Vec<f64> = col.iter().map(|v| (v - med).abs()).collect();
            dev.sort_by(f64::total_cmp);
            let mad = median(&dev);
            let s = if mad > 0.0 {
                mad
            } else {
                dev.iter().sum::<f64>() / dev.len() as f64
            };
            if s > 0.0 {
                1.0 / s
            } else {
                0.0
            }
        })
        .collect()
}

/// Projections `⟨x/s, u⟩` of every curve on every direction, direction-major.
fn project(curves: &[Curve], dirs: &[Curve], grid: &Grid) -> Vec<Vec<f64>> {
    let inv = inverse_scales(curves);
    let w: Vec<f64> = grid.weights().iter().zip(&inv).map(|(a, b)| a * b).collect();
    dirs.par_iter()
        .map(|u| curves.iter().map(|c| dot(c.values(), u.values(), &w)).collect())
        .collect()
}

/// Mid-rank empirical CDF of each sample value within the sample.
pub(crate) fn mid_rank_cdf(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // i values below, j - i + 1 equal
        let f = (i as f64 + 0.5 * (j - i + 1) as f64) / n as f64;
        for &k in &order[i..=j] {
            out[k] = f;
        }
        i = j + 1;
    }
    out
}

fn dir_seed(spec: &DepthSpec) -> u64 {
    spec.rng_seed
}

/// RP depth: mean over directions of `F(1 − F)` of the projected values.
pub fn rp_depth(ds: &FunctionalDataset, spec: &DepthSpec) -> Vec<f64> {
    let dirs = directions(ds.grid(), spec.num_projections, dir_seed(spec));
    let proj = project(ds.curves(), &dirs, ds.grid());
    let per_dir: Vec<Vec<f64>> = proj
        .par_iter()
        .map(|p| mid_rank_cdf(p).into_iter().map(|f| f * (1.0 - f)).collect())
        .collect();
    average(&per_dir, ds.n())
}

fn average(per_dir: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for d in per_dir {
        for (o, v) in out.iter_mut().zip(d) {
            *o += v;
        }
    }
    let k = per_dir.len() as f64;
    out.iter_mut().for_each(|o| *o /= k);
    out
}

fn sample_sd(v: &[f64]) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / n as f64;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn kde_1d(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len() as f64;
    v.iter()
        .map(|&a| {
            v.iter()
                .map(|&b| {
                    let z = (a - b) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * INV_SQRT_2PI
                / (n * h)
        })
        .collect()
}

/// Product-Gaussian kernel density of each point of a bivariate sample at
/// itself, with Scott bandwidths. A constant coordinate is dropped; if both
/// are constant every point gets the same value.
pub(crate) fn kde_depth_2d(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let factor = (n as f64).powf(-1.0 / 6.0);
    let (ha, hb) = (factor * sample_sd(a), factor * sample_sd(b));
    match (ha > 0.0, hb > 0.0) {
        (false, false) => vec![1.0; n],
        (true, false) => kde_1d(a, ha),
        (false, true) => kde_1d(b, hb),
        (true, true) => {
            let norm = INV_SQRT_2PI * INV_SQRT_2PI / (n as f64 * ha * hb);
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let za = (a[i] - a[j]) / ha;
                            let zb = (b[i] - b[j]) / hb;
                            (-0.5 * (za * za + zb * zb)).exp()
                        })
                        .sum::<f64>()
                        * norm
                })
                .collect()
        }
    }
}

/// RP′ depth: for each direction, the kernel density of the pair of
/// projections (curve, derivative) at each observation, averaged over
/// directions.
pub fn rp_depth_deriv(ds: &FunctionalDataset, spec: &DepthSpec) -> Vec<f64> {
    let dirs = directions(ds.grid(), spec.num_projections, dir_seed(spec));
    let p0 = project(ds.curves(), &dirs, ds.grid());
    let p1 = project(&ds.derivative_curves(), &dirs, ds.grid());
    let per_dir: Vec<Vec<f64>> = p0
        .par_iter()
        .zip(&p1)
        .map(|(a, b)| kde_depth_2d(a, b))
        .collect();
    average(&per_dir, ds.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{ranks_from_scores, DepthKind};
    use crate::fda::l2_norm;

    fn grid() -> Grid {
        Grid::new(41).unwrap()
    }

    fn sample(g: &Grid, n: usize) -> Vec<Curve> {
        (0..n)
            .map(|i| {
                let a = ((i * 7 + 3) % 11) as f64 / 5.0 - 1.0;
                let b = ((i * 5 + 1) % 13) as f64 / 6.0 - 1.0;
                Curve::from_fn(g, move |t| a * (3.0 * t).sin() + b * t * t + 0.1 * i as f64 * t)
            })
            .collect()
    }

    #[test]
    fn directions_have_unit_norm_and_are_reproducible() {
        let g = grid();
        let d = directions(&g, 5, 9);
        for u in &d {
            assert!((l2_norm(u, &g) - 1.0).abs() < 1e-12);
        }
        assert_eq!(d, directions(&g, 5, 9));
        assert_ne!(d, directions(&g, 5, 10));
        // a longer draw extends a shorter one
        assert_eq!(d[..3], directions(&g, 3, 9)[..]);
    }

    #[test]
    fn mid_rank_cdf_handles_ties() {
        assert_eq!(mid_rank_cdf(&[3.0, 1.0, 2.0]), vec![5.0 / 6.0, 1.0 / 6.0, 0.5]);
        assert_eq!(mid_rank_cdf(&[1.0, 1.0]), vec![0.5, 0.5]);
    }

    #[test]
    fn median_of_odd_sample_is_near_quarter() {
        let v: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let f = mid_rank_cdf(&v)[4];
        assert!((f * (1.0 - f) - 0.25).abs() < 1.0 / 9.0);
    }

    #[test]
    fn identical_curves_have_equal_depths() {
        let g = grid();
        let c = Curve::from_fn(&g, |t| t.sin());
        let ds = FunctionalDataset::new(g, vec![c; 5], vec![1; 5]).unwrap();
        let spec = DepthSpec::new(DepthKind::Rp);
        for d in [rp_depth(&ds, &spec), rp_depth_deriv(&ds, &spec)] {
            assert!(d.iter().all(|&v| v == d[0]));
        }
    }

    #[test]
    fn spread_group_is_shallower_under_rp_prime() {
        let g = grid();
        let base = sample(&g, 15);
        let mut curves = base.clone();
        curves.extend(base.iter().map(|c| c.scaled(10.0)));
        let mut labels = vec![1; 15];
        labels.extend(vec![2; 15]);
        let ds = FunctionalDataset::new(g, curves, labels).unwrap();
        let d = rp_depth_deriv(&ds, &DepthSpec::primed(DepthKind::Rp));
        let m1: f64 = d[..15].iter().sum::<f64>() / 15.0;
        let m2: f64 = d[15..].iter().sum::<f64>() / 15.0;
        assert!(m2 < m1, "{m1} {m2}");
    }

    #[test]
    fn permutation_equivariance() {
        let g = grid();
        let ds = FunctionalDataset::new(g.clone(), sample(&g, 9), vec![1; 9]).unwrap();
        let perm = [4, 2, 8, 0, 1, 7, 3, 6, 5];
        let pds = ds.permuted(&perm);
        let spec = DepthSpec::new(DepthKind::Rp).with_seed(3);
        for f in [rp_depth, rp_depth_deriv] {
            let d = f(&ds, &spec);
            let pd = f(&pds, &spec);
            for (i, &p) in perm.iter().enumerate() {
                assert!((pd[i] - d[p]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn more_projections_reduce_rerun_variance() {
        let g = grid();
        let ds = FunctionalDataset::new(g.clone(), sample(&g, 12), vec![1; 12]).unwrap();
        let spread = |m: usize| {
            let vals: Vec<f64> = (0..50)
                .map(|s| rp_depth(&ds, &DepthSpec::new(DepthKind::Rp).with_projections(m).with_seed(s))[0])
                .collect();
            let mean = vals.iter().sum::<f64>() / 50.0;
            vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 49.0
        };
        assert!(spread(40) < spread(2));
    }

    #[test]
    fn ranks_invariant_under_positive_function_scaling() {
        let g = grid();
        let ds = FunctionalDataset::new(g.clone(), sample(&g, 11), vec![1; 11]).unwrap();
        let a = Curve::from_fn(&g, |t| 1.0 + 0.5 * (2.0 * std::f64::consts::PI * t).sin());
        let moved = ds.map_curves(|_, c| c.times(&a), |_, c| c.clone());
        let spec = DepthSpec::new(DepthKind::Rp).with_seed(1);
        assert_eq!(
            ranks_from_scores(&rp_depth(&ds, &spec), 0).ranks,
            ranks_from_scores(&rp_depth(&moved, &spec), 0).ranks
        );
    }
}
