use super::{Curve, Grid};
use crate::error::{Error, Result};

fn check_len(grid: &Grid, c: &Curve) -> Result<()> {
    if c.len() != grid.m() {
        return Err(Error::Dimension {
            expected: grid.m(),
            found: c.len(),
        });
    }
    Ok(())
}

/// Trapezoid-rule approximation of ∫ f g dt over [0, 1].
pub fn inner_product(f: &Curve, g: &Curve, grid: &Grid) -> Result<f64> {
    check_len(grid, f)?;
    check_len(grid, g)?;
    Ok(dot(f.values(), g.values(), grid.weights()))
}

pub(crate) fn dot(f: &[f64], g: &[f64], w: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(w)
        .map(|((a, b), w)| a * b * w)
        .sum()
}

pub(crate) fn norm_sq(f: &[f64], w: &[f64]) -> f64 {
    f.iter().zip(w).map(|(a, w)| a * a * w).sum()
}

pub(crate) fn dist_sq(f: &[f64], g: &[f64], w: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(w)
        .map(|((a, b), w)| {
            let d = a - b;
            d * d * w
        })
        .sum()
}

/// Squared L² norm of `f`.
pub fn l2_norm_sq(f: &Curve, grid: &Grid) -> f64 {
    debug_assert_eq!(f.len(), grid.m());
    norm_sq(f.values(), grid.weights())
}

/// L² norm of `f`.
pub fn l2_norm(f: &Curve, grid: &Grid) -> f64 {
    l2_norm_sq(f, grid).sqrt()
}

/// First derivative by finite differences: central differences inside,
/// second-order one-sided differences at both endpoints.
pub fn differentiate(f: &Curve, grid: &Grid) -> Curve {
    Curve::from_vec_unchecked(differentiate_values(f.values(), grid.step()))
}

pub(crate) fn differentiate_values(v: &[f64], h: f64) -> Vec<f64> {
    let m = v.len();
    assert!(m >= 3, "differentiation needs at least 3 grid points");
    let mut d = vec![0.0; m];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[m - 1] = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h);
    for i in 1..m - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn curve(grid: &Grid, f: impl Fn(f64) -> f64) -> Curve {
        Curve::from_fn(grid, f)
    }

    #[test]
    fn constant_one_integrates_to_one() {
        for m in [3, 10, 101] {
            let g = Grid::new(m).unwrap();
            let one = curve(&g, |_| 1.0);
            assert!((inner_product(&one, &one, &g).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_integrand_is_exact() {
        let g = Grid::new(101).unwrap();
        let t = curve(&g, |t| t);
        let one = curve(&g, |_| 1.0);
        assert!((inner_product(&t, &one, &g).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fourier_pair_is_orthogonal() {
        let g = Grid::new(201).unwrap();
        let s = curve(&g, |t| (2.0 * PI * t).sin());
        let c = curve(&g, |t| (2.0 * PI * t).cos());
        assert!(inner_product(&s, &c, &g).unwrap().abs() < 1e-8);
    }

    #[test]
    fn mismatched_grid_is_a_dimension_error() {
        let g = Grid::new(5).unwrap();
        let a = Curve::new(vec![0.0; 5]).unwrap();
        let b = Curve::new(vec![0.0; 4]).unwrap();
        assert!(matches!(
            inner_product(&a, &b, &g),
            Err(Error::Dimension { expected: 5, found: 4 })
        ));
    }

    #[test]
    fn norms() {
        let g = Grid::new(201).unwrap();
        assert_eq!(l2_norm(&curve(&g, |_| 0.0), &g), 0.0);
        assert!((l2_norm(&curve(&g, |_| -3.5), &g) - 3.5).abs() < 1e-14);
        let f = curve(&g, |t| 2f64.sqrt() * (2.0 * PI * t).sin());
        assert!((l2_norm(&f, &g) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_of_polynomials() {
        let g = Grid::new(101).unwrap();
        let c = differentiate(&curve(&g, |_| 4.2), &g);
        assert!(c.values().iter().all(|v| v.abs() < 1e-12));
        let lin = differentiate(&curve(&g, |t| t), &g);
        assert!(lin.values().iter().all(|v| (v - 1.0).abs() < 1e-10));
        let quad = differentiate(&curve(&g, |t| t * t), &g);
        for (i, &t) in g.points().iter().enumerate() {
            // one-sided second-order stencils are exact on quadratics as well
            assert!((quad.values()[i] - 2.0 * t).abs() < 1e-10, "t = {t}");
        }
    }

    fn values(m: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0..100.0f64, m)
    }

    proptest! {
        #[test]
        fn inner_product_symmetric(f in values(17), g in values(17)) {
            let grid = Grid::new(17).unwrap();
            let (f, g) = (Curve::new(f).unwrap(), Curve::new(g).unwrap());
            prop_assert_eq!(inner_product(&f, &g, &grid).unwrap(), inner_product(&g, &f, &grid).unwrap());
        }

        #[test]
        fn triangle_inequality(f in values(17), g in values(17)) {
            let grid = Grid::new(17).unwrap();
            let sum = Curve::new(f.iter().zip(&g).map(|(a, b)| a + b).collect()).unwrap();
            let (f, g) = (Curve::new(f).unwrap(), Curve::new(g).unwrap());
            prop_assert!(l2_norm(&sum, &grid) <= l2_norm(&f, &grid) + l2_norm(&g, &grid) + 1e-12);
        }

        #[test]
        fn differentiation_is_linear(
            f in prop::collection::vec(-1.0..1.0f64, 11),
            g in prop::collection::vec(-1.0..1.0f64, 11),
            a in -1.0..1.0f64,
            b in -1.0..1.0f64,
        ) {
            let grid = Grid::new(11).unwrap();
            let comb = Curve::new(f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect()).unwrap();
            let (f, g) = (Curve::new(f).unwrap(), Curve::new(g).unwrap());
            let lhs = differentiate(&comb, &grid);
            let (df, dg) = (differentiate(&f, &grid), differentiate(&g, &grid));
            for i in 0..11 {
                let rhs = a * df.values()[i] + b * dg.values()[i];
                prop_assert!((lhs.values()[i] - rhs).abs() <= 1e-12);
            }
        }
    }
}
