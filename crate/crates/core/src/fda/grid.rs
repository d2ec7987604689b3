use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ENDPOINT_TOL: f64 = 1e-12;
const SPACING_TOL: f64 = 1e-9;

/// Equispaced evaluation points `0 = t_0 < ... < t_{m-1} = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid {
    points: Vec<f64>,
    step: f64,
    weights: Vec<f64>,
}

impl Grid {
    /// Builds the canonical grid with `m` points.
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::param(format!("grid needs at least 3 points, got {m}")));
        }
        let step = 1.0 / (m - 1) as f64;
        let points = (0..m).map(|i| i as f64 * step).collect::<Vec<_>>();
        Ok(Self::assemble(points, step))
    }

    /// Validates externally supplied grid points (e.g. from a CSV header).
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        let m = points.len();
        if m < 3 {
            return Err(Error::input(format!("grid needs at least 3 points, got {m}")));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::input("grid points must be finite"));
        }
        if points[0].abs() > ENDPOINT_TOL || (points[m - 1] - 1.0).abs() > ENDPOINT_TOL {
            return Err(Error::input(format!(
                "grid must span [0, 1]; got [{}, {}]",
                points[0],
                points[m - 1]
            )));
        }
        let step = 1.0 / (m - 1) as f64;
        for (i, w) in points.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::input(format!(
                    "grid points must be strictly increasing (points {} and {})",
                    i + 1,
                    i + 2
                )));
            }
            if ((w[1] - w[0]) - step).abs() > SPACING_TOL {
                return Err(Error::input(format!(
                    "grid is not equispaced: gap between points {} and {} is {}, expected {}",
                    i + 1,
                    i + 2,
                    w[1] - w[0],
                    step
                )));
            }
        }
        Ok(Self::assemble(points, step))
    }

    fn assemble(points: Vec<f64>, step: f64) -> Self {
        let m = points.len();
        let mut weights = vec![step; m];
        weights[0] = step / 2.0;
        weights[m - 1] = step / 2.0;
        Self {
            points,
            step,
            weights,
        }
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Trapezoid quadrature weights; they sum to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Grid::from_points(points)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(g: Grid) -> Self {
        g.points
    }
}
