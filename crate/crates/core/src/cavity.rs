//! Regularized Casimir energy and wall forces of a perfectly conducting
//! cylindrical cavity of radius `a` and height `b`.
//!
//! Modes are labelled by `(m, n, l)` with wavenumber
//! `A = sqrt(x_{mn}²/a² + (lπ/b)²)`. Integrating the per-mode frequency
//! weight up to the plasma cutoff `u_p = ω_p/c` gives
//! `4A·atan(u_p/A) − 3u_p`; the `−3u_p` pieces and all modes beyond the
//! truncation box do not depend on `a` or `b` and are dropped. What remains
//! is the *regularized truncated energy*
//!
//! ```text
//! E = (ħc/π) Σ η_m A·atan(u_p/A)
//! ```
//!
//! and the forces `F_a = −∂E/∂a`, `F_b = −∂E/∂b` taken at fixed `u_p`.
//! Both forces are positive (repulsive) term by term.

use std::f64::consts::PI;

use crate::constants::{HBAR_C, REFERENCE_CUTOFF_WAVENUMBER, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::specfun::BesselZeroTable;
use crate::sum_engine::{self, ConvergenceReport, Pair, TruncationOrder};

/// Radius, height and their ratio `a/b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    a: f64,
    b: f64,
    alpha_ratio: f64,
}

impl CavityGeometry {
    /// `a` and `b` in metres.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cavity dimensions must be positive and finite (a = {a}, b = {b})"
            )));
        }
        Ok(Self { a, b, alpha_ratio: a / b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Aspect ratio `a/b`.
    pub fn alpha_ratio(&self) -> f64 {
        self.alpha_ratio
    }

    /// Same shape, all lengths multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.a * s, self.b * s)
    }
}

/// Sharp plasma-frequency cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaCutoff {
    omega_p: f64,
    u_p: f64,
}

impl PlasmaCutoff {
    /// `omega_p` in rad/s.
    pub fn new(omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "plasma frequency must be positive, got {omega_p}"
            )));
        }
        Ok(Self {
            omega_p,
            u_p: omega_p / SPEED_OF_LIGHT,
        })
    }

    /// From the cutoff wavenumber `u_p = ω_p/c` in 1/m.
    pub fn from_wavenumber(u_p: f64) -> Result<Self> {
        if !(u_p > 0.0 && u_p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cutoff wavenumber must be positive, got {u_p}"
            )));
        }
        Ok(Self {
            omega_p: u_p * SPEED_OF_LIGHT,
            u_p,
        })
    }

    /// From the dimensionless cutoff `y_p = u_p·a` of a given geometry.
    pub fn from_y_p(y_p: f64, geom: &CavityGeometry) -> Result<Self> {
        Self::from_wavenumber(y_p / geom.a())
    }

    /// The cutoff the published reference tables correspond to.
    pub fn reference() -> Self {
        Self::from_wavenumber(REFERENCE_CUTOFF_WAVENUMBER).expect("positive constant")
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn u_p(&self) -> f64 {
        self.u_p
    }

    /// `y_p = u_p·a`.
    pub fn y_p(&self, geom: &CavityGeometry) -> f64 {
        self.u_p * geom.a()
    }
}

/// Mode labels with the azimuthal degeneracy factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
    pub l: u32,
}

impl ModeIndex {
    pub fn new(m: u32, n: u32, l: u32) -> Result<Self> {
        if n == 0 || l == 0 {
            return Err(Error::InvalidParameter(format!(
                "mode indices n and l start at 1 (got n = {n}, l = {l})"
            )));
        }
        Ok(Self { m, n, l })
    }

    pub fn eta(&self) -> u32 {
        if self.m == 0 {
            1
        } else {
            2
        }
    }
}

/// Mode wavenumber `A_{mnl}` in 1/m.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ModeWavenumber(pub f64);

pub fn mode_wavenumber(idx: ModeIndex, geom: &CavityGeometry, zeros: &BesselZeroTable) -> Result<ModeWavenumber> {
    let x = zeros.get(idx.m, idx.n)?;
    let kz = f64::from(idx.l) * PI / geom.b();
    Ok(ModeWavenumber((x * x / (geom.a() * geom.a()) + kz * kz).sqrt()))
}

/// Frequency weight of one mode, `(−3u² + A²)/(u² + A²)` with `u = ω/c`.
pub fn energy_integrand(u: f64, a_mode: f64) -> f64 {
    let u2 = u * u;
    let a2 = a_mode * a_mode;
    (a2 - 3.0 * u2) / (u2 + a2)
}

/// Integral of [`energy_integrand`] over `[0, u_p]`, split into its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEnergy {
    /// `4A·atan(u_p/A) − 3u_p`.
    pub full: f64,
    /// `A·atan(u_p/A)`, the part that depends on the geometry.
    pub geometric: f64,
}

pub fn mode_energy_closed(a_mode: f64, u_p: f64) -> ModeEnergy {
    let geometric = a_mode * (u_p / a_mode).atan();
    ModeEnergy {
        full: 4.0 * geometric - 3.0 * u_p,
        geometric,
    }
}

/// `(atan(y/S) − (y/S)/(1 + (y/S)²)) / S`, accurate for small `y/S`.
///
/// This is the common factor of every force term, in either physical
/// (`y = u_p`, `S = A`) or dimensionless (`y = y_p`, `S = A·a`) variables.
#[inline]
pub fn force_kernel(y: f64, s: f64) -> f64 {
    let t = y / s;
    let t2 = t * t;
    let bracket = if t < 0.25 {
        // atan t − t/(1+t²) = Σ_{k≥1} (−1)^{k+1} 2k/(2k+1) t^{2k+1}
        let mut power = t * t2;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let term = 2.0 * k / (2.0 * k + 1.0) * power;
            sum += term;
            if term.abs() <= 1e-17 * sum {
                break;
            }
            power *= -t2;
            k += 1.0;
        }
        sum
    } else {
        t.atan() - t / (1.0 + t2)
    };
    bracket / s
}

fn check_zero_range(trunc: TruncationOrder, zeros: &BesselZeroTable) -> Result<()> {
    if !zeros.covers(trunc.m_max, trunc.n_max) {
        return Err(Error::Range(format!(
            "truncation (M = {}, N = {}) exceeds zero table (m ≤ {}, n ≤ {})",
            trunc.m_max,
            trunc.n_max,
            zeros.max_order(),
            zeros.max_index()
        )));
    }
    Ok(())
}

fn check_dimensionless(alpha_ratio: f64, y_p: f64) -> Result<()> {
    if !(alpha_ratio > 0.0 && alpha_ratio.is_finite() && y_p > 0.0 && y_p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha_ratio and y_p must be positive (got {alpha_ratio}, {y_p})"
        )));
    }
    Ok(())
}

/// The pair of dimensionless force sums `(I_a, I_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSums {
    pub i_a: f64,
    pub i_b: f64,
}

impl ForceSums {
    /// Converts to forces in newtons for a cavity of radius `a`:
    /// `F = ħc·I/(π a²)`.
    pub fn to_forces(&self, a: f64) -> CasimirForces {
        let unit = HBAR_C / (PI * a * a);
        CasimirForces {
            radial: unit * self.i_a,
            axial: unit * self.i_b,
        }
    }
}

fn dimensionless_term(alpha_ratio: f64, y_p: f64, zeros: &BesselZeroTable) -> impl Fn(u32, u32, u32) -> Pair + Sync + Send + '_ {
    let axial = PI * alpha_ratio;
    move |m, n, l| {
        let x = zeros.zero(m, n);
        let lf = f64::from(l);
        let kz = lf * axial;
        let s = (x * x + kz * kz).sqrt();
        let k = force_kernel(y_p, s);
        (x * x * k, lf * lf * k)
    }
}

/// `I_a = Σ η x² T` and `I_b = π²α³ Σ η l² T` with
/// `T = atan(y_p/S)/S − y_p/(y_p² + S²)`, `S = sqrt(x² + (lπα)²)`.
pub fn dimensionless_force_sums(
    alpha_ratio: f64,
    y_p: f64,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<ForceSums> {
    dimensionless_force_sums_with(alpha_ratio, y_p, trunc, zeros, Exec::default())
}

pub fn dimensionless_force_sums_with(
    alpha_ratio: f64,
    y_p: f64,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
    exec: Exec,
) -> Result<ForceSums> {
    check_dimensionless(alpha_ratio, y_p)?;
    check_zero_range(trunc, zeros)?;
    let (a, b) = sum_engine::box_sum(trunc, dimensionless_term(alpha_ratio, y_p, zeros), exec);
    Ok(ForceSums {
        i_a: a,
        i_b: PI * PI * alpha_ratio.powi(3) * b,
    })
}

/// [`dimensionless_force_sums`] for the given geometry and cutoff.
pub fn force_sums_for(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<ForceSums> {
    dimensionless_force_sums(geom.alpha_ratio(), cutoff.y_p(geom), trunc, zeros)
}

/// `(I_a, I_b)` at every checkpoint `k` (cube `M = N = L = k`) in one pass.
pub fn checkpoint_force_sums(
    alpha_ratio: f64,
    y_p: f64,
    checkpoints: &[usize],
    zeros: &BesselZeroTable,
) -> Result<ConvergenceReport> {
    checkpoint_force_sums_with(alpha_ratio, y_p, checkpoints, zeros, Exec::default())
}

pub fn checkpoint_force_sums_with(
    alpha_ratio: f64,
    y_p: f64,
    checkpoints: &[usize],
    zeros: &BesselZeroTable,
    exec: Exec,
) -> Result<ConvergenceReport> {
    check_dimensionless(alpha_ratio, y_p)?;
    sum_engine::validate_checkpoints(checkpoints)?;
    let k = *checkpoints.last().unwrap() as u32;
    check_zero_range(TruncationOrder::cube(k)?, zeros)?;
    let report = sum_engine::shell_sum(dimensionless_term(alpha_ratio, y_p, zeros), checkpoints, exec)?;
    Ok(report.scale_b(PI * PI * alpha_ratio.powi(3)))
}

/// Radial and axial Casimir forces in newtons (positive = repulsive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirForces {
    pub radial: f64,
    pub axial: f64,
}

/// Both forces in physical units, from one pass over the box:
///
/// ```text
/// F_a = ħc/(π a³) Σ η x² K,   F_b = πħc/b³ Σ η l² K,
/// K = atan(u_p/A)/A − u_p/(u_p² + A²).
/// ```
pub fn forces(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<CasimirForces> {
    forces_with(geom, cutoff, trunc, zeros, Exec::default())
}

pub fn forces_with(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
    exec: Exec,
) -> Result<CasimirForces> {
    check_zero_range(trunc, zeros)?;
    let (a, b) = (geom.a(), geom.b());
    let u_p = cutoff.u_p();
    let inv_a2 = 1.0 / (a * a);
    let kz_unit = PI / b;
    let term = |m: u32, n: u32, l: u32| {
        let x = zeros.zero(m, n);
        let lf = f64::from(l);
        let kz = lf * kz_unit;
        let big_a = (x * x * inv_a2 + kz * kz).sqrt();
        let k = force_kernel(u_p, big_a);
        (x * x * k, lf * lf * k)
    };
    let (sa, sb) = sum_engine::box_sum(trunc, term, exec);
    Ok(CasimirForces {
        radial: HBAR_C / (PI * a * a * a) * sa,
        axial: PI * HBAR_C / (b * b * b) * sb,
    })
}

/// `F_a = −∂E/∂a` in newtons.
pub fn force_radial(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<f64> {
    forces(geom, cutoff, trunc, zeros).map(|f| f.radial)
}

/// `F_b = −∂E/∂b` in newtons.
pub fn force_axial(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<f64> {
    forces(geom, cutoff, trunc, zeros).map(|f| f.axial)
}

/// Regularized truncated energy in joules, additive constant dropped:
/// `(ħc/π) Σ η A·atan(u_p/A)`.
pub fn casimir_energy(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
) -> Result<f64> {
    check_zero_range(trunc, zeros)?;
    let inv_a2 = 1.0 / (geom.a() * geom.a());
    let kz_unit = PI / geom.b();
    let u_p = cutoff.u_p();
    let term = |m: u32, n: u32, l: u32| {
        let x = zeros.zero(m, n);
        let kz = f64::from(l) * kz_unit;
        let big_a = (x * x * inv_a2 + kz * kz).sqrt();
        (big_a * (u_p / big_a).atan(), 0.0)
    };
    let (sum, _) = sum_engine::box_sum(trunc, term, Exec::default());
    Ok(HBAR_C / PI * sum)
}

/// Which wall a finite-difference force refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    /// Lateral surface, `−∂E/∂a`.
    Radial,
    /// End caps, `−∂E/∂b`.
    Axial,
}

/// Central difference `−(E(x+h) − E(x−h))/(2h)` of [`casimir_energy`] in
/// `x ∈ {a, b}` at fixed `u_p`.
pub fn force_finite_difference(
    geom: &CavityGeometry,
    cutoff: &PlasmaCutoff,
    trunc: TruncationOrder,
    zeros: &BesselZeroTable,
    which: Wall,
    h: f64,
) -> Result<f64> {
    let x = match which {
        Wall::Radial => geom.a(),
        Wall::Axial => geom.b(),
    };
    if !(h > 0.0 && h.is_finite()) || h > 0.1 * x || x + h == x {
        return Err(Error::InvalidParameter(format!(
            "step {h} is degenerate for a dimension of {x}"
        )));
    }
    let shifted = |d: f64| match which {
        Wall::Radial => CavityGeometry::new(geom.a() + d, geom.b()),
        Wall::Axial => CavityGeometry::new(geom.a(), geom.b() + d),
    };
    let hi = casimir_energy(&shifted(h)?, cutoff, trunc, zeros)?;
    let lo = casimir_energy(&shifted(-h)?, cutoff, trunc, zeros)?;
    Ok(-(hi - lo) / (2.0 * h))
}

/// Default finite-difference step for `which`: `1e-6` of the dimension.
pub fn default_step(geom: &CavityGeometry, which: Wall) -> f64 {
    match which {
        Wall::Radial => 1e-6 * geom.a(),
        Wall::Axial => 1e-6 * geom.b(),
    }
}
