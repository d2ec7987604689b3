use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fda::{Curve, Grid};

fn default_shape() -> f64 {
    4.0
}

/// A zero-mean process on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProcessModel {
    /// Gaussian process with squared-exponential kernel `β exp(−(s−t)²/(2α²))`.
    Gaussian { alpha: f64, beta: f64 },
    /// Student-t process with one degree of freedom: a Gaussian path divided
    /// by the root of one χ²₁ draw per curve.
    StudentT1 { alpha: f64, beta: f64 },
    /// Skewed Gaussian process `δ|Z₁| + √(1−δ²) Z₂`, `δ = a/√(1+a²)`,
    /// centred by its mean.
    SkewGaussian {
        alpha: f64,
        beta: f64,
        #[serde(default = "default_shape")]
        shape: f64,
    },
    /// Gaussian process `Σ_k √λ_k ξ_k φ_k` on the Fourier basis
    /// `1, √2 sin(2πt), √2 cos(2πt), √2 sin(4πt), ...`.
    Eigen { eigenvalues: Vec<f64> },
}

impl ProcessModel {
    pub fn family_name(&self) -> &'static str {
        match self {
            ProcessModel::Gaussian { .. } => "gaussian",
            ProcessModel::StudentT1 { .. } => "student_t1",
            ProcessModel::SkewGaussian { .. } => "skew_gaussian",
            ProcessModel::Eigen { .. } => "eigen",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let kernel = |alpha: f64, beta: f64| {
            if alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!(
                    "kernel parameters must be positive, got alpha = {alpha}, beta = {beta}"
                )))
            }
        };
        match *self {
            ProcessModel::Gaussian { alpha, beta } | ProcessModel::StudentT1 { alpha, beta } => kernel(alpha, beta),
            ProcessModel::SkewGaussian { alpha, beta, shape } => {
                kernel(alpha, beta)?;
                if shape.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("skew shape must be finite"))
                }
            }
            ProcessModel::Eigen { ref eigenvalues } => {
                if eigenvalues.is_empty() {
                    return Err(Error::param("at least one eigenvalue is required"));
                }
                if eigenvalues.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
                    return Err(Error::param("eigenvalues must be finite and nonnegative"));
                }
                Ok(())
            }
        }
    }
}

/// Squared-exponential kernel `β exp(−(s−t)²/(2α²))`.
pub fn se_kernel(s: f64, t: f64, alpha: f64, beta: f64) -> f64 {
    beta * (-(s - t).powi(2) / (2.0 * alpha * alpha)).exp()
}

/// Fourier basis function `k` (zero-based): `1`, then `√2 sin(2πit)` and
/// `√2 cos(2πit)` alternately for `i = 1, 2, ...`.
pub fn fourier_basis(k: usize, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let i = k.div_ceil(2) as f64;
    let arg = 2.0 * std::f64::consts::PI * i * t;
    if k % 2 == 1 {
        std::f64::consts::SQRT_2 * arg.sin()
    } else {
        std::f64::consts::SQRT_2 * arg.cos()
    }
}

/// Lower-triangular Cholesky factor of the kernel matrix on `grid`, with
/// diagonal jitter escalated through `1e−10, 1e−8, 1e−6` times `β`.
pub fn kernel_cholesky(grid: &Grid, alpha: f64, beta: f64) -> Result<Vec<Vec<f64>>> {
    let m = grid.m();
    let p = grid.points();
    for jitter in [1e-10, 1e-8, 1e-6] {
        let k = DMatrix::from_fn(m, m, |i, j| {
            se_kernel(p[i], p[j], alpha, beta) + if i == j { jitter * beta } else { 0.0 }
        });
        if let Some(ch) = k.cholesky() {
            let l = ch.l();
            return Ok((0..m).map(|i| (0..=i).map(|j| l[(i, j)]).collect()).collect());
        }
    }
    Err(Error::Numerical(format!(
        "kernel matrix with alpha = {alpha}, beta = {beta} is not positive definite after jitter"
    )))
}

/// A model prepared for repeated sampling on a fixed grid.
#[derive(Debug, Clone)]
pub struct Sampler {
    model: ProcessModel,
    grid: Grid,
    /// Cholesky rows (kernel families) or basis columns scaled by `√λ`.
    factor: Vec<Vec<f64>>,
}

impl Sampler {
    pub fn new(model: &ProcessModel, grid: &Grid) -> Result<Self> {
        model.validate()?;
        let factor = match *model {
            ProcessModel::Gaussian { alpha, beta }
            | ProcessModel::StudentT1 { alpha, beta }
            | ProcessModel::SkewGaussian { alpha, beta, .. } => kernel_cholesky(grid, alpha, beta)?,
            ProcessModel::Eigen { ref eigenvalues } => eigenvalues
                .iter()
                .enumerate()
                .map(|(k, l)| grid.points().iter().map(|&t| l.sqrt() * fourier_basis(k, t)).collect())
                .collect(),
        };
        Ok(Self {
            model: model.clone(),
            grid: grid.clone(),
            factor,
        })
    }

    pub fn model(&self) -> &ProcessModel {
        &self.model
    }

    fn gaussian_path<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let m = self.grid.m();
        let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        self.factor
            .iter()
            .map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// One curve.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Curve {
        let values = match self.model {
            ProcessModel::Gaussian { .. } => self.gaussian_path(rng),
            ProcessModel::StudentT1 { .. } => {
                let z = self.gaussian_path(rng);
                let w = loop {
                    let g: f64 = rng.sample(StandardNormal);
                    if g * g >= 1e-300 {
                        break g * g;
                    }
                };
                let s = w.sqrt();
                z.into_iter().map(|v| v / s).collect()
            }
            ProcessModel::SkewGaussian { beta, shape, .. } => {
                let delta = shape / (1.0 + shape * shape).sqrt();
                let z1 = self.gaussian_path(rng);
                let z2 = self.gaussian_path(rng);
                let mean = delta * (2.0 / std::f64::consts::PI).sqrt() * beta.sqrt();
                let c = (1.0 - delta * delta).sqrt();
                z1.iter().zip(&z2).map(|(a, b)| delta * a.abs() + c * b - mean).collect()
            }
            ProcessModel::Eigen { .. } => {
                let m = self.grid.m();
                let mut out = vec![0.0; m];
                for col in &self.factor {
                    let xi: f64 = rng.sample(StandardNormal);
                    for (o, v) in out.iter_mut().zip(col) {
                        *o += xi * v;
                    }
                }
                out
            }
        };
        Curve::from_vec_unchecked(values)
    }

    pub fn draw_n<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<Curve> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}
