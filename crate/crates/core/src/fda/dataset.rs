use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::ops::differentiate_values;
use super::Grid;
use crate::error::{Error, Result};

/// Function values of one observation at the grid points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Curve(Vec<f64>);

impl Curve {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("curve value {} is not finite", i + 1)));
        }
        Ok(Curve(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        Curve(values)
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Curve(grid.points().iter().map(|&t| f(t)).collect())
    }

    pub fn zeros(m: usize) -> Self {
        Curve(vec![0.0; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn scaled(&self, c: f64) -> Curve {
        Curve(self.0.iter().map(|v| v * c).collect())
    }

    /// Pointwise product with another curve.
    pub fn times(&self, other: &Curve) -> Curve {
        Curve(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn plus(&self, other: &Curve) -> Curve {
        Curve(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Curve) -> Curve {
        Curve(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// `N` curves on a common grid, each carrying a group label.
///
/// Group indices are stored zero-based (`0..J`); files and user-facing
/// output use the labels `1..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDataset {
    grid: Grid,
    curves: Vec<Curve>,
    groups: Vec<usize>,
    derivatives: Option<Vec<Curve>>,
    group_sizes: Vec<usize>,
}

impl FunctionalDataset {
    /// `labels` are one-based group labels; every label in `1..=J` must occur.
    pub fn new(grid: Grid, curves: Vec<Curve>, labels: Vec<usize>) -> Result<Self> {
        if curves.len() != labels.len() {
            return Err(Error::Dimension {
                expected: curves.len(),
                found: labels.len(),
            });
        }
        if curves.is_empty() {
            return Err(Error::input("dataset has no curves"));
        }
        for (i, c) in curves.iter().enumerate() {
            if c.len() != grid.m() {
                return Err(Error::input_at(
                    i + 1,
                    None,
                    format!("curve has {} values but the grid has {}", c.len(), grid.m()),
                ));
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == 0) {
            return Err(Error::input_at(i + 1, None, "group labels start at 1"));
        }
        let num_groups = *labels.iter().max().expect("non-empty");
        let mut group_sizes = vec![0usize; num_groups];
        for &l in &labels {
            group_sizes[l - 1] += 1;
        }
        if let Some(j) = group_sizes.iter().position(|&n| n == 0) {
            return Err(Error::input(format!(
                "group labels must be contiguous 1..={num_groups}; label {} has no curves",
                j + 1
            )));
        }
        Ok(Self {
            grid,
            curves,
            groups: labels.into_iter().map(|l| l - 1).collect(),
            derivatives: None,
            group_sizes,
        })
    }

    /// Builds a dataset from zero-based group indices (one entry per curve).
    pub fn from_groups(grid: Grid, groups: Vec<Vec<Curve>>) -> Result<Self> {
        let mut curves = Vec::new();
        let mut labels = Vec::new();
        for (j, g) in groups.into_iter().enumerate() {
            labels.extend(std::iter::repeat_n(j + 1, g.len()));
            curves.extend(g);
        }
        Self::new(grid, curves, labels)
    }

    /// Attaches externally computed derivative curves.
    pub fn with_derivatives(mut self, derivatives: Vec<Curve>) -> Result<Self> {
        if derivatives.len() != self.curves.len() {
            return Err(Error::Dimension {
                expected: self.curves.len(),
                found: derivatives.len(),
            });
        }
        if let Some(i) = derivatives.iter().position(|d| d.len() != self.grid.m()) {
            return Err(Error::input_at(
                i + 1,
                None,
                "derivative curve length differs from the grid",
            ));
        }
        self.derivatives = Some(derivatives);
        Ok(self)
    }

    pub fn without_derivatives(mut self) -> Self {
        self.derivatives = None;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    /// Zero-based group index of every curve.
    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    /// One-based labels, as written to files.
    pub fn labels(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g + 1).collect()
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn num_groups(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn supplied_derivatives(&self) -> Option<&[Curve]> {
        self.derivatives.as_deref()
    }

    /// Derivative curves: the supplied ones if present, finite differences otherwise.
    pub fn derivative_curves(&self) -> Cow<'_, [Curve]> {
        match &self.derivatives {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(
                self.curves
                    .iter()
                    .map(|c| Curve::from_vec_unchecked(differentiate_values(c.values(), self.grid.step())))
                    .collect(),
            ),
        }
    }

    /// Indices of the curves in group `j` (zero-based).
    pub fn members(&self, j: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.groups[i] == j).collect()
    }

    /// Restricts to the listed zero-based groups, relabelled `1..` in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut curves = Vec::new();
        let mut labels = Vec::new();
        let mut derivs = self.derivatives.as_ref().map(|_| Vec::new());
        for (new_label, &j) in keep.iter().enumerate() {
            if j >= self.num_groups() {
                return Err(Error::param(format!("group {} does not exist", j + 1)));
            }
            for i in self.members(j) {
                curves.push(self.curves[i].clone());
                labels.push(new_label + 1);
                if let (Some(out), Some(src)) = (derivs.as_mut(), self.derivatives.as_ref()) {
                    out.push(src[i].clone());
                }
            }
        }
        let ds = Self::new(self.grid.clone(), curves, labels)?;
        match derivs {
            Some(d) => ds.with_derivatives(d),
            None => Ok(ds),
        }
    }

    /// Applies `f` to every curve (and to supplied derivatives with `fd`).
    pub fn map_curves(
        &self,
        f: impl Fn(usize, &Curve) -> Curve,
        fd: impl Fn(usize, &Curve) -> Curve,
    ) -> Self {
        Self {
            grid: self.grid.clone(),
            curves: self.curves.iter().enumerate().map(|(i, c)| f(i, c)).collect(),
            groups: self.groups.clone(),
            derivatives: self
                .derivatives
                .as_ref()
                .map(|d| d.iter().enumerate().map(|(i, c)| fd(i, c)).collect()),
            group_sizes: self.group_sizes.clone(),
        }
    }

    /// Reorders the observations: row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let curves: Vec<_> = perm.iter().map(|&i| self.curves[i].clone()).collect();
        let groups: Vec<_> = perm.iter().map(|&i| self.groups[i]).collect();
        Self {
            grid: self.grid.clone(),
            curves,
            groups,
            derivatives: self
                .derivatives
                .as_ref()
                .map(|d| perm.iter().map(|&i| d[i].clone()).collect()),
            group_sizes: self.group_sizes.clone(),
        }
    }

    /// Same curves with new one-based labels.
    pub fn relabelled(&self, labels: Vec<usize>) -> Result<Self> {
        let ds = Self::new(self.grid.clone(), self.curves.clone(), labels)?;
        match &self.derivatives {
            Some(d) => ds.with_derivatives(d.clone()),
            None => Ok(ds),
        }
    }
}
