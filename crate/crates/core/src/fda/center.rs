use super::FunctionalDataset;
use crate::depth::{compute_depth, DepthSpec};
use crate::error::Result;

/// Subtracts, within each group, the group's deepest curve (depth computed
/// with respect to that group alone) from every curve of the group.
///
/// Ties for the maximum go to the lowest curve index. Supplied derivative
/// curves are shifted by the deepest curve's derivative.
pub fn center_by_deepest(ds: &FunctionalDataset, spec: &DepthSpec) -> Result<FunctionalDataset> {
    let mut centre = vec![0usize; ds.num_groups()];
    for (j, c) in centre.iter_mut().enumerate() {
        let members = ds.members(j);
        let group = ds.restrict(&[j])?;
        let depth = compute_depth(&group, spec)?;
        let mut best = 0;
        for (k, &d) in depth.values.iter().enumerate() {
            if d > depth.values[best] {
                best = k;
            }
        }
        *c = members[best];
    }
    let groups = ds.groups().to_vec();
    let curves = ds.curves().to_vec();
    let derivs = ds.supplied_derivatives().map(|d| d.to_vec());
    Ok(ds.map_curves(
        |i, c| c.minus(&curves[centre[groups[i]]]),
        |i, d| d.minus(&derivs.as_ref().expect("derivatives present")[centre[groups[i]]]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::DepthKind;
    use crate::fda::{Curve, Grid};

    fn constant(grid: &Grid, v: f64) -> Curve {
        Curve::from_fn(grid, |_| v)
    }

    #[test]
    fn single_curve_group_becomes_zero() {
        let g = Grid::new(5).unwrap();
        let ds = FunctionalDataset::new(
            g.clone(),
            vec![constant(&g, 3.0), constant(&g, 1.0), constant(&g, 2.0)],
            vec![1, 2, 2],
        )
        .unwrap();
        let out = center_by_deepest(&ds, &DepthSpec::new(DepthKind::Mbd)).unwrap();
        assert!(out.curves()[0].values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn middle_of_ordered_constants_is_subtracted() {
        let g = Grid::new(7).unwrap();
        let ds = FunctionalDataset::new(
            g.clone(),
            vec![constant(&g, 0.0), constant(&g, 1.0), constant(&g, 2.0)],
            vec![1, 1, 1],
        )
        .unwrap();
        let out = center_by_deepest(&ds, &DepthSpec::new(DepthKind::Mbd)).unwrap();
        let firsts: Vec<f64> = out.curves().iter().map(|c| c.values()[0]).collect();
        assert_eq!(firsts, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn every_group_gets_a_zero_curve_and_recentring_keeps_one() {
        let g = Grid::new(11).unwrap();
        let curves: Vec<Curve> = (0..8)
            .map(|i| Curve::from_fn(&g, |t| (i as f64 * 0.7).sin() + t * (i as f64 - 3.5)))
            .collect();
        let ds = FunctionalDataset::new(g, curves, vec![1, 2, 1, 2, 1, 2, 1, 2]).unwrap();
        let spec = DepthSpec::new(DepthKind::Ltr);
        let once = center_by_deepest(&ds, &spec).unwrap();
        let twice = center_by_deepest(&once, &spec).unwrap();
        for out in [&once, &twice] {
            for j in 0..2 {
                assert!(out
                    .members(j)
                    .iter()
                    .any(|&i| out.curves()[i].values().iter().all(|&v| v == 0.0)));
            }
        }
    }

    #[test]
    fn supplied_derivatives_are_shifted() {
        let g = Grid::new(5).unwrap();
        let ds = FunctionalDataset::new(
            g.clone(),
            vec![constant(&g, 0.0), constant(&g, 1.0), constant(&g, 2.0)],
            vec![1, 1, 1],
        )
        .unwrap()
        .with_derivatives(vec![constant(&g, 5.0), constant(&g, 6.0), constant(&g, 7.0)])
        .unwrap();
        let out = center_by_deepest(&ds, &DepthSpec::new(DepthKind::Mbd)).unwrap();
        let d = out.supplied_derivatives().unwrap();
        assert_eq!(d[1].values()[0], 0.0);
        assert_eq!(d[2].values()[0], 1.0);
    }
}
