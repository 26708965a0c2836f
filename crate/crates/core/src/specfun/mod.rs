//! Special functions: Bessel functions of the first kind, their zeros, and
//! the adaptive quadrature used to cross-check closed forms.

pub mod bessel;
pub mod cache;
pub mod quadrature;
pub mod zeros;

pub use bessel::{bessel_j, bessel_j_prime};
pub use cache::CacheOutcome;
pub use quadrature::{integrate, integrate_simpson, QuadratureSpec};
pub use zeros::{bessel_zero, build_zero_table, build_zero_table_with, BesselZeroTable, ZERO_ACCURACY};

use crate::error::Result;

/// Numerically integrates the radial energy weight of mode `(m, n)`,
///
/// ```text
/// ∫₀^a [ (x/a)² J'_m(xρ/a)² + m²/ρ² J_m(xρ/a)² ] ρ dρ,   x = x_{mn},
/// ```
///
/// whose closed form is `x²/2 · J_{m+1}(x)²` independently of `a`.
pub fn normalization_integral(m: u32, n: u32) -> Result<f64> {
    normalization_integral_scaled(m, n, 1.0)
}

/// [`normalization_integral`] on a cavity of radius `a`.
pub fn normalization_integral_scaled(m: u32, n: u32, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(crate::Error::InvalidParameter(format!("radius must be positive, got {a}")));
    }
    let x = bessel_zero(m, n)?;
    let k = x / a;
    let mf = f64::from(m);
    let integrand = |rho: f64| {
        let t = k * rho;
        let (jm, jm1) = bessel::j_pair(m, t);
        let dj = if m == 0 { -jm1 } else { mf / t * jm - jm1 };
        let angular = if m == 0 { 0.0 } else { mf * mf / (rho * rho) * jm * jm };
        (k * k * dj * dj + angular) * rho
    };
    // Split at the interior zeros of J_m so each piece is smooth and
    // single-humped.
    let spec = QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_depth: 50,
    };
    let mut edges = vec![0.0];
    for j in 1..n {
        edges.push(bessel_zero(m, j)? / k);
    }
    edges.push(a);
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(integrand, w[0], w[1], &spec)?;
    }
    Ok(total)
}

/// Right-hand side of the normalization identity, `x²/2 · J_{m+1}(x)²`.
pub fn normalization_closed_form(m: u32, n: u32) -> Result<f64> {
    let x = bessel_zero(m, n)?;
    let j = bessel_j(m + 1, x)?;
    Ok(0.5 * x * x * j * j)
}
