//! Generative process models and replicated size/power studies.

mod model;
mod study;

pub use model::{fourier_basis, kernel_cholesky, se_kernel, ProcessModel, Sampler};
pub use study::{run_study, write_study_csv, StudyPoint, StudyResult, StudyRow, StudySpec};

use crate::error::{Error, Result};
use crate::fda::{Curve, Grid};
use crate::rng::{stream, tag};

/// Default number of grid points for simulated curves.
pub const DEFAULT_GRID_POINTS: usize = 101;

fn generate(model: &ProcessModel, expect: &str, grid: &Grid, n: usize, seed: u64) -> Result<Vec<Curve>> {
    if model.family_name() != expect {
        return Err(Error::param(format!(
            "expected a {expect} model, got {}",
            model.family_name()
        )));
    }
    let s = Sampler::new(model, grid)?;
    Ok(s.draw_n(n, &mut stream(seed, &[tag::SAMPLE])))
}

/// `n` Gaussian process curves.
pub fn gen_gp(model: &ProcessModel, grid: &Grid, n: usize, seed: u64) -> Result<Vec<Curve>> {
    generate(model, "gaussian", grid, n, seed)
}

/// `n` Student-t₁ process curves.
pub fn gen_t1(model: &ProcessModel, grid: &Grid, n: usize, seed: u64) -> Result<Vec<Curve>> {
    generate(model, "student_t1", grid, n, seed)
}

/// `n` skewed Gaussian process curves.
pub fn gen_skew_gp(model: &ProcessModel, grid: &Grid, n: usize, seed: u64) -> Result<Vec<Curve>> {
    generate(model, "skew_gaussian", grid, n, seed)
}

/// `n` curves of an eigenvalue model.
pub fn gen_eigen(model: &ProcessModel, grid: &Grid, n: usize, seed: u64) -> Result<Vec<Curve>> {
    generate(model, "eigen", grid, n, seed)
}

/// Eigenvalues `(λ₁, λ₂)` of the two groups in eigenvalue scenario `id` (1–6).
pub fn scenario_eigenvalues(id: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let short = || (1..=3).map(|k| k as f64).collect::<Vec<_>>();
    let long = || (1..=11).map(|k| k as f64).collect::<Vec<_>>();
    let expo = || (1..=11).map(|k| 2f64.powi(k)).collect::<Vec<_>>();
    let scaled = |v: &[f64]| v.iter().map(|l| 1.5 * l).collect::<Vec<_>>();
    Ok(match id {
        1 => (short(), (1..=3).map(|k| (4 - k) as f64).collect()),
        2 => (long(), (1..=11).map(|k| (12 - k) as f64).collect()),
        3 => (expo(), (1..=11).map(|k| 2f64.powi(12 - k)).collect()),
        4 => (short(), scaled(&short())),
        5 => (long(), scaled(&long())),
        6 => (expo(), scaled(&expo())),
        _ => return Err(Error::param(format!("scenario must be between 1 and 6, got {id}"))),
    })
}

/// The two group models of eigenvalue scenario `id`.
pub fn scenario_models(id: usize) -> Result<[ProcessModel; 2]> {
    let (a, b) = scenario_eigenvalues(id)?;
    Ok([
        ProcessModel::Eigen { eigenvalues: a },
        ProcessModel::Eigen { eigenvalues: b },
    ])
}
