//! Units and physical constants.
//!
//! Internally time is in µs, length in µm, angular frequencies in rad/µs and
//! wavevectors in rad/µm. A velocity in m/s is numerically identical to µm/µs,
//! so `k·v` lands directly in rad/µs. User-facing Rabi frequencies are quoted as
//! Ω/2π in MHz.

use crate::scalar::{lit, Real};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539e-27;
/// Mass of ⁸⁷Rb, kg.
pub const MASS_RB87: f64 = 86.909_18 * ATOMIC_MASS_UNIT;
/// Mass of ¹³³Cs, kg.
pub const MASS_CS133: f64 = 132.905_45 * ATOMIC_MASS_UNIT;

/// Ω/2π in MHz → Ω in rad/µs.
#[inline]
pub fn mhz_to_rad_per_us<T: Real>(f_mhz: T) -> T {
    f_mhz * T::TAU()
}

/// Ω in rad/µs → Ω/2π in MHz.
#[inline]
pub fn rad_per_us_to_mhz<T: Real>(omega: T) -> T {
    omega / T::TAU()
}

/// Wavenumber 1/λ in nm⁻¹ → angular wavevector in rad/µm.
#[inline]
pub fn inv_nm_to_rad_per_um<T: Real>(inv_nm: T) -> T {
    inv_nm * T::TAU() * lit(1.0e3)
}

/// Angular wavevector in rad/µm → wavenumber in nm⁻¹.
#[inline]
pub fn rad_per_um_to_inv_nm<T: Real>(k: T) -> T {
    k / (T::TAU() * lit(1.0e3))
}

/// Single-photon wavevector 2π/λ for λ in nm, in rad/µm.
#[inline]
pub fn wavevector_from_nm<T: Real>(lambda_nm: T) -> T {
    inv_nm_to_rad_per_um(T::one() / lambda_nm)
}

/// m/s → µm/µs (identity by construction).
#[inline]
pub fn mps_to_um_per_us<T: Real>(v: T) -> T {
    v
}

/// One-dimensional thermal speed √(k_B T / m) in m/s for T in µK.
pub fn thermal_speed(temperature_uk: f64, mass_kg: f64) -> f64 {
    (BOLTZMANN * temperature_uk * 1e-6 / mass_kg).sqrt()
}
