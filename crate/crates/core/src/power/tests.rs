use super::*;
use proptest::prelude::*;

/// Noncentral χ² density from its Bessel-series form
/// `½ e^{−(x+τ)/2} (x/τ)^{(k−2)/4} I_{k/2−1}(√(τx))`.
fn ncx2_pdf(x: f64, k: f64, tau: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let nu = k / 2.0 - 1.0;
    let z = (tau * x).sqrt();
    // I_ν(z) = Σ_m (z/2)^{2m+ν} / (m! Γ(m+ν+1)), summed in logs
    let mut bessel = 0.0;
    for m in 0..400 {
        let m = m as f64;
        let ln = (2.0 * m + nu) * (z / 2.0).ln() - ln_gamma(m + 1.0) - ln_gamma(m + nu + 1.0);
        let t = ln.exp();
        bessel += t;
        if m > z && t < 1e-18 * bessel {
            break;
        }
    }
    0.5 * (-(x + tau) / 2.0).exp() * (x / tau).powf(nu / 2.0) * bessel
}

/// `1 − ∫₀^x f`, integrating in `u = √x` (smooth at the origin) with
/// composite Simpson.
fn ncx2_sf_oracle(x: f64, k: f64, tau: f64) -> f64 {
    let n = 20_000;
    let b = x.sqrt();
    let h = b / n as f64;
    // the integrand has a finite limit at 0 that the series cannot evaluate
    let f = |u: f64| {
        let u = u.max(1e-9 * b);
        2.0 * u * ncx2_pdf(u * u, k, tau)
    };
    let mut s = f(0.0) + f(b);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    1.0 - s * h / 3.0
}

#[test]
fn tau_zero_at_null() {
    let probs = vec![vec![0.5; 3]; 3];
    let t = tau_from_pairwise(&probs, &[0.2, 0.3, 0.5], &[20, 30, 50], 100).unwrap();
    assert_eq!(t, 0.0);
}

#[test]
fn tau_two_group_reduction() {
    let (n, eps) = (100usize, 0.05);
    let probs = vec![vec![0.5, 0.5 + eps], vec![0.5 - eps, 0.5]];
    let t = tau_from_pairwise(&probs, &[0.5, 0.5], &[50, 50], n).unwrap();
    let nf = n as f64;
    // direct substitution into the display
    assert!((t - 3.0 * nf * nf * eps * eps / (nf + 1.0)).abs() < 1e-12);
    assert!((t - 0.742_574_257_425_742_6).abs() < 1e-12);
}

#[test]
fn tau_relabelling_symmetry() {
    let probs = vec![vec![0.5, 0.6, 0.7], vec![0.4, 0.5, 0.55], vec![0.3, 0.45, 0.5]];
    let th = [0.2, 0.3, 0.5];
    let t = tau_from_pairwise(&probs, &th, &[20, 30, 50], 100).unwrap();
    let perm = [2, 0, 1];
    let p2: Vec<Vec<f64>> = perm.iter().map(|&a| perm.iter().map(|&b| probs[a][b]).collect()).collect();
    let th2: Vec<f64> = perm.iter().map(|&a| th[a]).collect();
    let s2: Vec<usize> = perm.iter().map(|&a| [20, 30, 50][a]).collect();
    let t2 = tau_from_pairwise(&p2, &th2, &s2, 100).unwrap();
    assert!((t - t2).abs() < 1e-9);
}

#[test]
fn tau_is_locally_lipschitz() {
    let base = vec![vec![0.5, 0.6], vec![0.4, 0.5]];
    let t0 = tau_from_pairwise(&base, &[0.5, 0.5], &[50, 50], 100).unwrap();
    for eps in [1e-3, 1e-4, 1e-5] {
        let mut p = base.clone();
        p[0][1] += eps;
        let t1 = tau_from_pairwise(&p, &[0.5, 0.5], &[50, 50], 100).unwrap();
        // derivative bound 12/(N(N+1)) · N_j · 2 N² θ |P − ½| θ ≈ 60
        assert!((t1 - t0).abs() <= 100.0 * eps);
    }
}

#[test]
fn central_cases() {
    assert!((noncentral_chisq_sf(3.8415, 1.0, 0.0) - 0.05).abs() < 1e-4);
    assert!((noncentral_chisq_sf(5.9915, 2.0, 0.0) - 0.05).abs() < 1e-4);
    assert!((noncentral_chisq_sf(5.9915, 2.0, 0.0) - (-5.9915f64 / 2.0).exp()).abs() < 1e-12);
    assert!((predicted_power(0.0, 2, 0.05) - 0.05).abs() < 1e-12);
}

#[test]
fn monotone_in_tau() {
    let mut prev = 0.0;
    for i in 0..60 {
        let v = noncentral_chisq_sf(6.0, 2.0, i as f64 * 2.0);
        assert!(v >= prev - 1e-12, "{i}: {v} < {prev}");
        prev = v;
    }
    assert!(prev > 0.999_999);
}

#[test]
fn matches_density_integration() {
    for df in 1..=6 {
        for &tau in &[0.5, 1.0, 5.0, 12.0, 20.0] {
            for &x in &[0.5, 2.0, 5.0, 10.0, 20.0, 40.0] {
                let a = noncentral_chisq_sf(x, df as f64, tau);
                let b = ncx2_sf_oracle(x, df as f64, tau);
                assert!((a - b).abs() < 1e-6, "df {df} tau {tau} x {x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn exponential_delta_is_quarter_for_any_rate() {
    for rate in [0.5, 1.0, 3.0] {
        // independent quadrature of ∫ z (λe^{−λz})² dz
        let z: Vec<f64> = (0..=200_000).map(|i| i as f64 * 40.0 / rate / 200_000.0).collect();
        let g: Vec<f64> = z.iter().map(|&z| rate * (-rate * z).exp()).collect();
        let q = delta_g(&Density::Tabulated { z, g }).unwrap();
        assert!((q - 0.25).abs() < 1e-6);
        assert_eq!(delta_g(&Density::Exponential { rate }).unwrap(), 0.25);
    }
}

#[test]
fn exponential_local_tau() {
    let spec = LocalAlternativeSpec {
        deltas: vec![0.0, 1.0],
        thetas: vec![0.5, 0.5],
        density: Density::Exponential { rate: 1.0 },
    };
    assert!((local_tau(&spec).unwrap() - 0.1875).abs() < 1e-15);
}

#[test]
fn chi_squared_delta_matches_quadrature() {
    for df in [3.0, 5.0, 8.0] {
        for scale in [1.0, 2.5] {
            let n = 400_000;
            let top = 200.0 * scale;
            let z: Vec<f64> = (0..=n).map(|i| i as f64 * top / n as f64).collect();
            let g: Vec<f64> = z
                .iter()
                .map(|&z| crate::dist::chisq_pdf(z / scale, df) / scale)
                .collect();
            let q = delta_g(&Density::Tabulated { z, g }).unwrap();
            let c = delta_g(&Density::ChiSquared { df, scale }).unwrap();
            assert!((q - c).abs() < 1e-6, "{df} {scale}: {q} vs {c}");
        }
    }
    // Γ(5)/(2⁵ Γ(5/2)²) = 24/(32 · 9π/16)
    let c = delta_g(&Density::ChiSquared { df: 5.0, scale: 1.0 }).unwrap();
    assert!((c - 24.0 / (32.0 * 9.0 * std::f64::consts::PI / 16.0)).abs() < 1e-14);
}

#[test]
fn unnormalised_table_is_rejected() {
    let d = Density::Tabulated { z: vec![0.0, 1.0, 2.0], g: vec![1.0, 1.0, 1.0] };
    assert!(delta_g(&d).is_err());
}

#[test]
fn histogram_estimate_of_exponential() {
    let mut rng = stream(3, &[0]);
    use rand::Rng;
    let v: Vec<f64> = (0..200_000).map(|_| -(1.0 - rng.random::<f64>()).ln() * 2.0).collect();
    let d = delta_g(&Density::Samples { values: v }).unwrap();
    assert!((d - 0.25).abs() < 0.01, "{d}");
}

#[test]
fn model_density_of_equal_eigenvalues() {
    let d = delta_g(&Density::Model {
        model: ProcessModel::Eigen { eigenvalues: vec![2.0; 5] },
        draws: 100_000,
        grid_points: 101,
        seed: 1,
    })
    .unwrap();
    let c = delta_g(&Density::ChiSquared { df: 5.0, scale: 2.0 }).unwrap();
    assert!((d - c).abs() < 0.02, "{d} {c}");
}

#[test]
fn sample_size_round_trip() {
    let probs = vec![vec![0.5, 0.56], vec![0.44, 0.5]];
    let spec = PowerSpec {
        alternative: Alternative::Pairwise { probs, thetas: vec![0.5, 0.5] },
        n: None,
        alpha: 0.05,
        target_power: Some(0.8),
        seed: 0,
    };
    let r = evaluate(&spec).unwrap();
    let Some(SampleSize::Feasible { n, power }) = r.sample_size else {
        panic!("expected a feasible size");
    };
    assert!(power >= 0.8);
    let at = |n: usize| {
        evaluate(&PowerSpec { n: Some(n), target_power: None, ..spec.clone() })
            .unwrap()
            .power
            .predicted_power
    };
    assert!(at(n) >= 0.8);
    assert!(at(n - 1) < 0.8);
}

#[test]
fn null_alternative_is_infeasible() {
    let r = required_sample_size(|_| 0.0, 2, 0.05, 0.8).unwrap();
    assert!(matches!(r, SampleSize::Infeasible { .. }));
    assert!(required_sample_size(|_| 0.0, 2, 0.05, 0.01).is_err());
}

#[test]
fn rank_probabilities() {
    let g = Grid::new(51).unwrap();
    let gp = |beta: f64| ProcessModel::Gaussian { alpha: 0.1, beta };
    let same = mc_rank_prob(&gp(1.0), &gp(1.0), &g, 0, 10_000, 1).unwrap();
    assert!((same.estimate - 0.5).abs() < 3.0 * 0.005);
    let bigger = mc_rank_prob(&gp(1.0), &gp(2.0), &g, 0, 10_000, 2).unwrap();
    assert!(bigger.estimate - 0.5 > 3.0 * bigger.se);
    let with_derivs = mc_rank_prob(&gp(1.0), &gp(2.0), &g, 1, 2_000, 3).unwrap();
    assert!((0.0..=1.0).contains(&with_derivs.estimate));
}

#[test]
fn power_spec_json() {
    let s: PowerSpec = serde_json::from_str(
        r#"{"type": "local", "deltas": [0, 5], "thetas": [0.5, 0.5],
            "density": {"type": "chi_squared", "df": 5}}"#,
    )
    .unwrap();
    let r = evaluate(&s).unwrap();
    assert!((r.power.tau - 12.0 * 0.424_413_181_578_387_6f64.powi(2) * 6.25).abs() < 1e-9);
    assert!(r.power.predicted_power > 0.9);
}

proptest! {
    #[test]
    fn local_tau_shift_invariant(d1 in -5.0f64..5.0, d2 in -5.0f64..5.0, c in -10.0f64..10.0, th in 0.1f64..0.9) {
        let mk = |s: f64| LocalAlternativeSpec {
            deltas: vec![d1 + s, d2 + s],
            thetas: vec![th, 1.0 - th],
            density: Density::ChiSquared { df: 4.0, scale: 1.0 },
        };
        let a = local_tau(&mk(0.0)).unwrap();
        let b = local_tau(&mk(c)).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn power_at_least_alpha(tau in 0.0f64..50.0, alpha in 0.01f64..0.2) {
        prop_assert!(predicted_power(tau, 3, alpha) >= alpha - 1e-9);
    }
}
