//! Limiting geometries of the cavity.
//!
//! * Long cylinder (`b ≫ a`): energy per unit height
//!   `(1/a²) Σ η x² ln(1 + λ_p²a²/x²)` over a 2-D truncation of Bessel
//!   zeros. Only the `a`-dependence is meaningful; values are bare sums
//!   without physical prefactors.
//! * Parallel plates (`a ≫ b`): energy per area `−I(p)/b³` with the cutoff
//!   number `I(p) = ∫₀^p s³ (e^s + 1)/(e^s − 1) ds`, hence pressure
//!   `−3I(p)/b⁴` at fixed `p`.

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::specfun::{integrate, integrate_simpson, BesselZeroTable, QuadratureSpec};
use crate::sum_engine::{self, TruncationOrder};

/// Inputs of the long-cylinder sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongCylinderParams {
    /// Radius, m.
    pub a: f64,
    /// Cutoff wavenumber, 1/m.
    pub lambda_p: f64,
    pub m2: u32,
    pub n2: u32,
}

/// Default 2-D truncation `M2 = N2`.
pub const DEFAULT_LONG_CYLINDER_TRUNCATION: u32 = 200;

impl LongCylinderParams {
    pub fn new(a: f64, lambda_p: f64, m2: u32, n2: u32) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && lambda_p > 0.0 && lambda_p.is_finite()) || n2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "long cylinder needs a > 0, lambda_p > 0, N2 ≥ 1 (got {a}, {lambda_p}, {n2})"
            )));
        }
        Ok(Self { a, lambda_p, m2, n2 })
    }

    pub fn with_radius(&self, a: f64) -> Result<Self> {
        Self::new(a, self.lambda_p, self.m2, self.n2)
    }

    fn check(&self, zeros: &BesselZeroTable) -> Result<()> {
        if !zeros.covers(self.m2, self.n2) {
            return Err(Error::Range(format!(
                "long-cylinder truncation ({}, {}) exceeds zero table ({}, {})",
                self.m2,
                self.n2,
                zeros.max_order(),
                zeros.max_index()
            )));
        }
        Ok(())
    }
}

/// `ln(1 + e) − e/(1 + e)`, accurate for small `e`.
fn log_excess(e: f64) -> f64 {
    if e < 0.1 {
        // Σ_{k≥2} (−1)^k (k−1)/k e^k
        let mut power = e * e;
        let mut sum = 0.0;
        let mut k = 2.0;
        loop {
            let term = (k - 1.0) / k * power;
            sum += term;
            if term.abs() <= 1e-17 * sum {
                break;
            }
            power *= -e;
            k += 1.0;
        }
        sum
    } else {
        e.ln_1p() - e / (1.0 + e)
    }
}

fn sum_2d<F>(params: &LongCylinderParams, zeros: &BesselZeroTable, term: F) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    params.check(zeros)?;
    let trunc = TruncationOrder::new(params.m2, params.n2, 1)?;
    let (s, _) = sum_engine::box_sum(trunc, |m, n, _| (term(zeros.zero(m, n)), 0.0), Exec::default());
    Ok(s)
}

/// `(1/a²) Σ_{m ≤ M2, n ≤ N2} η_m x² ln(1 + λ_p²a²/x²)`.
pub fn long_cylinder_energy_per_length(params: &LongCylinderParams, zeros: &BesselZeroTable) -> Result<f64> {
    let la2 = (params.lambda_p * params.a).powi(2);
    let s = sum_2d(params, zeros, |x| x * x * (la2 / (x * x)).ln_1p())?;
    Ok(s / (params.a * params.a))
}

/// `−∂/∂a` of [`long_cylinder_energy_per_length`]:
/// `(2/a³) Σ η x² [ln(1 + ε) − ε/(1 + ε)]`, `ε = λ_p²a²/x²`.
pub fn long_cylinder_force_per_length(params: &LongCylinderParams, zeros: &BesselZeroTable) -> Result<f64> {
    let la2 = (params.lambda_p * params.a).powi(2);
    let s = sum_2d(params, zeros, |x| x * x * log_excess(la2 / (x * x)))?;
    Ok(2.0 * s / params.a.powi(3))
}

/// Least-squares slope of `ln f(x)` against `ln x`.
pub fn scaling_exponent<F: Fn(f64) -> f64>(f: F, points: &[f64]) -> Result<f64> {
    let values: Vec<f64> = points.iter().map(|&x| f(x)).collect();
    log_log_slope(points, &values)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 matching points (got {} and {})",
            xs.len(),
            ys.len()
        )));
    }
    if let Some((x, y)) = xs.iter().zip(ys).find(|(x, y)| !(**x > 0.0 && **y > 0.0)) {
        return Err(Error::Domain(format!("log-log fit needs positive values (x = {x}, f = {y})")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae are all equal".into()));
    }
    Ok(sxy / sxx)
}

/// One radius of a long-cylinder scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub a: f64,
    /// Force per unit height (bare sum).
    pub force_per_length: f64,
    /// Local `d ln F / d ln a` from neighbouring points.
    pub local_slope: f64,
}

/// Long-cylinder scan over radii, with the least-squares exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub fitted_slope: f64,
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Evaluates the long-cylinder force at each radius and fits the exponent.
pub fn long_cylinder_scan(base: &LongCylinderParams, radii: &[f64], zeros: &BesselZeroTable) -> Result<ScanReport> {
    let forces = radii
        .iter()
        .map(|&a| long_cylinder_force_per_length(&base.with_radius(a)?, zeros))
        .collect::<Result<Vec<_>>>()?;
    let fitted_slope = log_log_slope(radii, &forces)?;
    let last = radii.len() - 1;
    let points = (0..radii.len())
        .map(|i| {
            let (i0, i1) = (i.saturating_sub(1), (i + 1).min(last));
            let local_slope = (forces[i1] / forces[i0]).ln() / (radii[i1] / radii[i0]).ln();
            ScanPoint {
                a: radii[i],
                force_per_length: forces[i],
                local_slope,
            }
        })
        .collect();
    Ok(ScanReport { points, fitted_slope })
}

/// Radii spanning one decade in which every truncated mode lies far below
/// the cutoff: `λ_p a` from `10·x_max` to `100·x_max`, with `x_max` the
/// largest zero of the truncation. This is where the force approaches the
/// `1/a³` law (up to a logarithmic correction).
pub fn power_law_regime(base: &LongCylinderParams, zeros: &BesselZeroTable, count: usize) -> Result<Vec<f64>> {
    base.check(zeros)?;
    let x_max = (0..=base.m2).map(|m| zeros.zero(m, base.n2)).fold(0.0, f64::max);
    let lo = 10.0 * x_max / base.lambda_p;
    Ok(log_space(lo, 10.0 * lo, count))
}

/// Parallel-plate limit inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateParams {
    /// Plate separation, m.
    pub b: f64,
    /// Dimensionless cutoff `p = 2β_p b`.
    pub p: f64,
}

impl PlateParams {
    pub fn new(b: f64, p: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite() && p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "plate parameters must be positive (b = {b}, p = {p})"
            )));
        }
        Ok(Self { b, p })
    }

    /// From the cutoff wavenumber `β_p`.
    pub fn from_cutoff(b: f64, beta_p: f64) -> Result<Self> {
        Self::new(b, 2.0 * beta_p * b)
    }
}

/// `s/tanh(s/2) = s (e^s + 1)/(e^s − 1)`, finite at `s = 0`.
pub(crate) fn s_coth_half(s: f64) -> f64 {
    if s < 1e-4 {
        2.0 + s * s / 6.0
    } else {
        s / (0.5 * s).tanh()
    }
}

/// Below this point the plate integrand is integrated from its series.
const PLATE_SERIES_EDGE: f64 = 1e-2;

fn plate_series(s0: f64) -> f64 {
    // ∫₀^{s0} (2s² + s⁴/6 − s⁶/360 + s⁸/15120) ds
    let s3 = s0 * s0 * s0;
    let s2 = s0 * s0;
    s3 * (2.0 / 3.0 + s2 * (1.0 / 30.0 + s2 * (-1.0 / 2520.0 + s2 / 136_080.0)))
}

fn plate_integral_by<Q>(p: f64, rule: Q) -> Result<f64>
where
    Q: Fn(&dyn Fn(f64) -> f64, f64, f64, &QuadratureSpec) -> Result<f64>,
{
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("cutoff p must be positive, got {p}")));
    }
    let edge = p.min(PLATE_SERIES_EDGE);
    let mut total = plate_series(edge);
    if p > edge {
        let spec = QuadratureSpec {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            max_depth: 60,
        };
        total += rule(&|s: f64| s * s * s_coth_half(s), edge, p, &spec)?;
    }
    Ok(total)
}

/// `I(p) = ∫₀^p s³ (e^s + 1)/(e^s − 1) ds` (Gauss–Kronrod).
pub fn plate_cutoff_integral(p: f64) -> Result<f64> {
    plate_integral_by(p, |f, lo, hi, spec| integrate(f, lo, hi, spec))
}

/// [`plate_cutoff_integral`] by adaptive Simpson, for cross-checking.
pub fn plate_cutoff_integral_simpson(p: f64) -> Result<f64> {
    plate_integral_by(p, |f, lo, hi, spec| integrate_simpson(f, lo, hi, spec))
}

/// Energy per area `−I(p)/b³` in units of the omitted prefactor.
pub fn plate_energy_per_area(params: &PlateParams) -> Result<f64> {
    Ok(-plate_cutoff_integral(params.p)? / params.b.powi(3))
}

/// Pressure `−3I(p)/b⁴` (negative = attractive), at fixed `p`.
pub fn plate_pressure(b: f64, p: f64) -> Result<f64> {
    let params = PlateParams::new(b, p)?;
    Ok(-3.0 * plate_cutoff_integral(params.p)? / b.powi(4))
}
