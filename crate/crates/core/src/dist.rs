//! Central χ² and normal tail functions.

use statrs::function::{erf, gamma};

/// Upper tail `Pr(χ²_df > x)`.
pub fn chisq_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    gamma::gamma_ur(df / 2.0, x / 2.0).clamp(0.0, 1.0)
}

/// Density of χ²_df at `x`.
pub fn chisq_pdf(x: f64, df: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return match df {
            d if d < 2.0 => f64::INFINITY,
            d if d == 2.0 => 0.5,
            _ => 0.0,
        };
    }
    let k = df / 2.0;
    ((k - 1.0) * x.ln() - x / 2.0 - k * std::f64::consts::LN_2 - gamma::ln_gamma(k)).exp()
}

/// Upper quantile: the `x` with `Pr(χ²_df > x) = upper`.
pub fn chisq_upper_quantile(upper: f64, df: f64) -> f64 {
    assert!(upper > 0.0 && upper < 1.0, "tail probability must lie in (0, 1)");
    let mut lo = 0.0;
    let mut hi = df.max(1.0);
    while chisq_sf(hi, df) > upper {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chisq_sf(mid, df) > upper {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Upper tail of the standard normal.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erf::erfc(z / std::f64::consts::SQRT_2)
}
