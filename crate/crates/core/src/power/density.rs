use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fda::ops::norm_sq;
use crate::fda::Grid;
use crate::rng::{stream, tag};
use crate::sim::{ProcessModel, Sampler, DEFAULT_GRID_POINTS};

fn one() -> f64 {
    1.0
}

fn default_draws() -> usize {
    20_000
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

/// Base density `g` of a local alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Density {
    /// `scale · χ²_df`.
    ChiSquared {
        df: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Exponential {
        #[serde(default = "one")]
        rate: f64,
    },
    /// Density values `g` on increasing abscissae `z`.
    Tabulated { z: Vec<f64>, g: Vec<f64> },
    /// Draws from `g`, summarised by a Freedman–Diaconis histogram.
    Samples { values: Vec<f64> },
    /// Draws of `‖X‖²` simulated from a process model.
    Model {
        model: ProcessModel,
        #[serde(default = "default_draws")]
        draws: usize,
        #[serde(default = "default_grid_points")]
        grid_points: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn trapezoid(z: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..z.len()).map(|i| 0.5 * (z[i] - z[i - 1]) * (f(i) + f(i - 1))).sum()
}

fn histogram_delta(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 4 {
        return Err(Error::param("at least four draws are needed for a histogram"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("draws must be finite"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = p * (n - 1) as f64;
        let i = h.floor() as usize;
        let f = h - i as f64;
        v[i] + f * (v[(i + 1).min(n - 1)] - v[i])
    };
    let iqr = q(0.75) - q(0.25);
    if !(iqr > 0.0) {
        return Err(Error::param("draws have zero interquartile range"));
    }
    let width = 2.0 * iqr / (n as f64).cbrt();
    let lo = v[0];
    let bins = (((v[n - 1] - lo) / width).floor() as usize + 1).max(1);
    let mut counts = vec![0usize; bins];
    for &x in &v {
        counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(b, &c)| {
            let g = c as f64 / (n as f64 * width);
            (lo + (b as f64 + 0.5) * width) * g * g * width
        })
        .sum())
}

/// `Δ_G = ∫ z g(z)² dz`. It is invariant under rescaling the argument of `g`.
pub fn delta_g(density: &Density) -> Result<f64> {
    match density {
        Density::ChiSquared { df, scale } => {
            if !(*df > 0.0 && *scale > 0.0) {
                return Err(Error::param("chi-squared df and scale must be positive"));
            }
            // ∫ z^{k−1} e^{−z} dz / (2^k Γ(k/2)²)
            Ok((ln_gamma(*df) - df * std::f64::consts::LN_2 - 2.0 * ln_gamma(df / 2.0)).exp())
        }
        Density::Exponential { rate } => {
            if !(*rate > 0.0) {
                return Err(Error::param("exponential rate must be positive"));
            }
            Ok(0.25)
        }
        Density::Tabulated { z, g } => {
            if z.len() != g.len() || z.len() < 2 {
                return Err(Error::param("tabulated density needs matching z and g of length at least 2"));
            }
            if z.windows(2).any(|w| !(w[1] > w[0])) || g.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::param("tabulated z must increase and g must be nonnegative"));
            }
            let mass = trapezoid(z, |i| g[i]);
            if (mass - 1.0).abs() > 1e-3 {
                return Err(Error::param(format!("tabulated density integrates to {mass}, not 1")));
            }
            Ok(trapezoid(z, |i| z[i] * g[i] * g[i]))
        }
        Density::Samples { values } => histogram_delta(values),
        Density::Model {
            model,
            draws,
            grid_points,
            seed,
        } => {
            let grid = Grid::new(*grid_points)?;
            let s = Sampler::new(model, &grid)?;
            let mut rng = stream(*seed, &[tag::POWER]);
            let v: Vec<f64> = (0..*draws)
                .map(|_| norm_sq(s.draw(&mut rng).values(), grid.weights()))
                .collect();
            histogram_delta(&v)
        }
    }
}
