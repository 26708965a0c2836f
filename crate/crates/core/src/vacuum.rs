//! Vacuum-energy regularization by a bound on virtual-photon frequencies.
//!
//! A virtual particle confined to a region of size `D` is assigned a
//! maximal frequency `α c / (2D)`, where `α = O(1)` is the uncertainty
//! constant. With this bound the free-vacuum energy and the energy density
//! outside a pair of plates vanish as `D → ∞`, and the plate Casimir
//! energy becomes `−(π²ħc/1440 d³)·I(α)` with a cutoff number `I(α)` equal
//! to one at `α ≈ 1.8333`.
//!
//! The free-energy and tail-density expressions carry no fixed absolute
//! normalization; they are returned exactly as written, in units of J/m³
//! up to that normalization.

use std::f64::consts::PI;

use crate::asymptotics::s_coth_half;
use crate::constants::{HBAR_C, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::specfun::{integrate, integrate_simpson, QuadratureSpec};

/// The uncertainty constant `α` bounding `(Eτ)` of virtual particles by `αħ/2`.
///
/// Unrelated to the cavity aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyConstant(f64);

impl UncertaintyConstant {
    /// Accepts `alpha_u ≥ 0`; zero is the degenerate no-vacuum case.
    pub fn new(alpha_u: f64) -> Result<Self> {
        if !(alpha_u >= 0.0 && alpha_u.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "uncertainty constant must be finite and non-negative, got {alpha_u}"
            )));
        }
        Ok(Self(alpha_u))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Linear size `D` of a free region, in metres. May be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceExtent(f64);

impl FreeSpaceExtent {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 0.0) || d.is_nan() {
            return Err(Error::InvalidParameter(format!("extent must be positive, got {d}")));
        }
        Ok(Self(d))
    }

    pub fn infinite() -> Self {
        Self(f64::INFINITY)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Largest virtual-photon angular frequency, `α c / (2D)`, rad/s.
pub fn virtual_frequency_bound(alpha_u: UncertaintyConstant, extent: FreeSpaceExtent) -> f64 {
    alpha_u.0 * SPEED_OF_LIGHT / (2.0 * extent.0)
}

/// Wavenumber bound `α / (2D)`, 1/m.
fn wavenumber_bound(alpha_u: UncertaintyConstant, extent: f64) -> f64 {
    alpha_u.0 / (2.0 * extent)
}

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-14,
        max_depth: 60,
    }
}

/// Free-vacuum energy in the closed form `πħc α⁴ / (8D⁴)`; zero for `D = ∞`.
///
/// The closed form is four times `2πħc ∫₀^{α/2D} k³ dk`
/// ([`free_vacuum_energy_integral`]); both are kept.
pub fn free_vacuum_energy(alpha_u: UncertaintyConstant, extent: FreeSpaceExtent) -> f64 {
    if extent.0.is_infinite() {
        return 0.0;
    }
    PI * HBAR_C * alpha_u.0.powi(4) / (8.0 * extent.0.powi(4))
}

/// `2πħc ∫₀^{α/2D} k³ dk` by quadrature.
pub fn free_vacuum_energy_integral(alpha_u: UncertaintyConstant, extent: FreeSpaceExtent) -> Result<f64> {
    cubic_mode_integral(wavenumber_bound(alpha_u, extent.0))
}

/// Free-vacuum term of a plate pair with outer regions of size `D`:
/// `2πħc ∫₀^{α/(2(2D+d))} k³ dk`.
pub fn free_vacuum_energy_with_plates(alpha_u: UncertaintyConstant, extent: FreeSpaceExtent, d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("plate separation must be positive, got {d}")));
    }
    cubic_mode_integral(wavenumber_bound(alpha_u, 2.0 * extent.0 + d))
}

fn cubic_mode_integral(k_max: f64) -> Result<f64> {
    if k_max == 0.0 {
        return Ok(0.0);
    }
    // k = k_max·s
    let unit = integrate(|s| s * s * s, 0.0, 1.0, &tight())?;
    Ok(2.0 * PI * HBAR_C * k_max.powi(4) * unit)
}

/// Which outer region a tail density refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `z ≤ 0`, left of the plate at `z = 0`.
    Left,
    /// `z ≥ d`, right of the plate at `z = d`.
    Right,
}

/// Energy density outside the plates with the frequency bound of an outer
/// region of size `D`:
///
/// ```text
/// right: −ħc/(12π²) ∫₀^{α/2D} λ³ (1 + 2e^{−2λ(z−d)}) dλ
/// left:  −ħc/(12π²) ∫₀^{α/2D} λ³ (2e^{2λz} + 1) dλ
/// ```
pub fn tail_energy_density(
    z: f64,
    d: f64,
    extent: FreeSpaceExtent,
    alpha_u: UncertaintyConstant,
    side: Side,
) -> Result<f64> {
    if !(d > 0.0 && d.is_finite() && z.is_finite()) {
        return Err(Error::InvalidParameter(format!("need d > 0 and finite z (d = {d}, z = {z})")));
    }
    let depth = match side {
        Side::Right if z >= d => z - d,
        Side::Left if z <= 0.0 => -z,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "z = {z} is not in the {side:?} region of plates at 0 and {d}"
            )))
        }
    };
    let k_max = wavenumber_bound(alpha_u, extent.0);
    if k_max == 0.0 {
        return Ok(0.0);
    }
    // λ = k_max·s; both sides reduce to 1 + 2e^{−2λ·depth}.
    let decay = 2.0 * k_max * depth;
    let unit = integrate(|s| s * s * s * (1.0 + 2.0 * (-decay * s).exp()), 0.0, 1.0, &tight())?;
    Ok(-HBAR_C / (12.0 * PI * PI) * k_max.powi(4) * unit)
}

const CUTOFF_PREFACTOR: f64 = 7.5 / (PI * PI * PI * PI);

fn cutoff_integrand(x: f64) -> f64 {
    x * x * (s_coth_half(x) + 4.0)
}

fn cutoff_number_by<Q>(alpha_u: f64, rule: Q) -> Result<f64>
where
    Q: Fn(&dyn Fn(f64) -> f64, f64, f64, &QuadratureSpec) -> Result<f64>,
{
    if !(alpha_u >= 0.0 && alpha_u.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be non-negative, got {alpha_u}")));
    }
    if alpha_u == 0.0 {
        return Ok(0.0);
    }
    Ok(CUTOFF_PREFACTOR * rule(&cutoff_integrand, 0.0, alpha_u, &tight())?)
}

/// `I(α) = (7.5/π⁴) ∫₀^α x² ( x (e^x + 1)/(e^x − 1) + 4 ) dx`.
pub fn cutoff_number(alpha_u: f64) -> Result<f64> {
    cutoff_number_by(alpha_u, |f, lo, hi, spec| integrate(f, lo, hi, spec))
}

/// [`cutoff_number`] by adaptive Simpson, for cross-checking.
pub fn cutoff_number_simpson(alpha_u: f64) -> Result<f64> {
    cutoff_number_by(alpha_u, |f, lo, hi, spec| integrate_simpson(f, lo, hi, spec))
}

/// `dI/dα`.
pub fn cutoff_number_derivative(alpha_u: f64) -> f64 {
    CUTOFF_PREFACTOR * cutoff_integrand(alpha_u)
}

/// The root of `I(α) = 1`, refined until `|I(α) − 1| < 1e-10`.
pub fn solve_alpha_for_unit_cutoff() -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 4.0f64);
    let g = |a: f64| cutoff_number(a).map(|v| v - 1.0);
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x)?;
        if gx.abs() < 1e-13 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / cutoff_number_derivative(x);
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo < 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    if g(x)?.abs() < 1e-10 {
        Ok(x)
    } else {
        Err(Error::Bracket { lo, hi })
    }
}

/// Plate energy per area via both routes, J/m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateEnergy {
    /// `−(π²ħc / 1440 d³)·I(α)`.
    pub via_cutoff_number: f64,
    /// `−ħc/(3(2π)²) ∫₀^{α/2d} λ² (λd coth(λd) + 2) dλ`.
    pub via_direct_integral: f64,
}

/// `t coth t`, finite at `t = 0`.
fn t_coth(t: f64) -> f64 {
    if t < 1e-4 {
        1.0 + t * t / 3.0
    } else {
        t / t.tanh()
    }
}

pub fn plate_energy_per_area(d: f64, alpha_u: UncertaintyConstant) -> Result<PlateEnergy> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("plate separation must be positive, got {d}")));
    }
    let via_cutoff_number = -PI * PI * HBAR_C / (1440.0 * d.powi(3)) * cutoff_number(alpha_u.0)?;
    let lambda_max = alpha_u.0 / (2.0 * d);
    let direct = if lambda_max == 0.0 {
        0.0
    } else {
        integrate(|l: f64| l * l * (t_coth(l * d) + 2.0), 0.0, lambda_max, &tight())?
    };
    Ok(PlateEnergy {
        via_cutoff_number,
        via_direct_integral: -HBAR_C / (3.0 * 4.0 * PI * PI) * direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn alpha(v: f64) -> UncertaintyConstant {
        UncertaintyConstant::new(v).unwrap()
    }

    #[test]
    fn frequency_bound() {
        let d = FreeSpaceExtent::new(SPEED_OF_LIGHT).unwrap();
        assert_eq!(virtual_frequency_bound(alpha(2.0), d), 1.0);
        let a = virtual_frequency_bound(alpha(1.0), FreeSpaceExtent::new(1e-6).unwrap());
        let b = virtual_frequency_bound(alpha(1.0), FreeSpaceExtent::new(2e-6).unwrap());
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-15);
        let w = virtual_frequency_bound(alpha(1.833308), FreeSpaceExtent::new(1e-7).unwrap());
        assert!((w / 2.748e15 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn free_energy_limits() {
        let d0 = FreeSpaceExtent::new(1e-6).unwrap();
        assert_eq!(free_vacuum_energy(alpha(0.0), d0), 0.0);
        assert_eq!(free_vacuum_energy(alpha(1.0), FreeSpaceExtent::infinite()), 0.0);
        let e0 = free_vacuum_energy(alpha(1.0), d0);
        let e1 = free_vacuum_energy(alpha(1.0), FreeSpaceExtent::new(1e-6 * 1e9).unwrap());
        assert_relative_eq!(e1, e0 * 1e-36, max_relative = 1e-12);
        assert_eq!(free_vacuum_energy_integral(alpha(1.0), FreeSpaceExtent::infinite()).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_is_four_times_integral() {
        let d0 = FreeSpaceExtent::new(3e-7).unwrap();
        let a = alpha(1.7);
        let q = free_vacuum_energy_integral(a, d0).unwrap();
        let k: f64 = 1.7 / (2.0 * 3e-7);
        assert_relative_eq!(q, 2.0 * PI * HBAR_C * k.powi(4) / 4.0, max_relative = 1e-12);
        assert_relative_eq!(free_vacuum_energy(a, d0), 4.0 * q, max_relative = 1e-12);
    }

    #[test]
    fn tail_density() {
        let d = 1e-7;
        let ext = FreeSpaceExtent::new(1e-5).unwrap();
        let a = alpha(1.5);
        let at_plate = tail_energy_density(d, d, ext, a, Side::Right).unwrap();
        let k: f64 = 1.5 / (2.0 * 1e-5);
        assert_relative_eq!(at_plate, -HBAR_C / (12.0 * PI * PI) * 0.75 * k.powi(4), max_relative = 1e-12);
        let further = tail_energy_density(d + 1e-5, d, ext, a, Side::Right).unwrap();
        assert!(further.abs() < at_plate.abs());
        let left = tail_energy_density(-1e-5, d, ext, a, Side::Left).unwrap();
        assert_relative_eq!(left, further, max_relative = 1e-12);
        assert!(tail_energy_density(0.5 * d, d, ext, a, Side::Right).is_err());
        assert!(tail_energy_density(0.5 * d, d, ext, a, Side::Left).is_err());
        assert_eq!(tail_energy_density(d, d, FreeSpaceExtent::infinite(), a, Side::Right).unwrap(), 0.0);
    }

    #[test]
    fn cutoff_number_small_alpha() {
        assert_eq!(cutoff_number(0.0).unwrap(), 0.0);
        for a in [0.1, 0.05, 0.01] {
            let series = CUTOFF_PREFACTOR * 2.0 * a * a * a;
            assert!((cutoff_number(a).unwrap() / series - 1.0).abs() < 0.01);
        }
        assert!(cutoff_number(-0.1).is_err());
    }

    #[test]
    fn unit_cutoff_root() {
        let a = solve_alpha_for_unit_cutoff().unwrap();
        assert!((a - 1.833308).abs() < 1e-5);
        assert!((cutoff_number(a).unwrap() - 1.0).abs() < 1e-10);
        assert!(a > 0.0 && a < 4.0);
    }

    #[test]
    fn plate_energy_routes() {
        for d in [1e-8, 1e-7, 3e-6] {
            for a in [0.5, 1.0, 1.833308, 3.0] {
                let e = plate_energy_per_area(d, alpha(a)).unwrap();
                assert_relative_eq!(e.via_cutoff_number, e.via_direct_integral, max_relative = 1e-9);
            }
        }
        let e1 = plate_energy_per_area(1e-7, alpha(1.0)).unwrap();
        let e2 = plate_energy_per_area(2e-7, alpha(1.0)).unwrap();
        assert_relative_eq!(e2.via_cutoff_number, e1.via_cutoff_number / 8.0, max_relative = 1e-14);
    }
}
