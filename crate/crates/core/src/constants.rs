//! Physical constants (CODATA 2018 exact/recommended values).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// ħc, J·m.
pub const HBAR_C: f64 = HBAR * SPEED_OF_LIGHT;

/// Cavity radius of the reference nanoscale cavity, m.
pub const REFERENCE_RADIUS: f64 = 1e-7;

/// Nominal plasma frequency of a good conductor, rad/s.
pub const REFERENCE_OMEGA_P: f64 = 1e16;

/// Cutoff wavenumber the published tables were computed with, 1/m.
///
/// This is `1e16 / 3e8`: the nominal plasma frequency divided by the
/// speed of light rounded to `3e8`. Using the exact speed of light instead
/// shifts every tabulated sum by about 0.2%.
pub const REFERENCE_CUTOFF_WAVENUMBER: f64 = 1e16 / 3e8;

/// Dimensionless cutoff `u_p · a` of the published tables (exactly 10/3).
pub const REFERENCE_Y_P: f64 = REFERENCE_CUTOFF_WAVENUMBER * REFERENCE_RADIUS;

/// `ω_p a / c` for the nominal plasma frequency and the exact speed of light.
pub const NOMINAL_Y_P: f64 = REFERENCE_OMEGA_P * REFERENCE_RADIUS / SPEED_OF_LIGHT;
