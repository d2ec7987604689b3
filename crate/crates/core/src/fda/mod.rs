//! Grid-based functional data: curves sampled on a shared equispaced grid
//! over [0, 1], their L² geometry, derivatives and file formats.

mod center;
mod dataset;
mod grid;
pub mod io;
pub(crate) mod ops;

pub use center::center_by_deepest;
pub use dataset::{Curve, FunctionalDataset};
pub use grid::Grid;
pub use ops::{differentiate, inner_product, l2_norm, l2_norm_sq};
