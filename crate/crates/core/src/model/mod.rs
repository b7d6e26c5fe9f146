//! Atom species, laser wavevectors, Rydberg interactions and run parameters.

mod presets;

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::{lit, Real};
use crate::units::BOLTZMANN;

pub use presets::{builtin_configs, find_preset, load_presets, parse_presets, PresetFile, PresetSpec};

/// Atomic species constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpecies {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Rydberg lifetime, µs
    pub tau: f64,
}

impl AtomSpecies {
    pub fn new(name: impl Into<String>, mass: f64, tau: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(domain(format!("lifetime must be positive, got {tau}")));
        }
        Ok(Self {
            name: name.into(),
            mass,
            tau,
        })
    }

    /// ⁸⁷Rb with a 787 µs Rydberg lifetime.
    pub fn rubidium87() -> Self {
        Self::new("Rb-87", crate::units::MASS_RB87, 787.0).unwrap()
    }

    /// Thermal velocity spread √(k_B T / m) in m/s.
    pub fn thermal_speed(&self, temperature_uk: f64) -> f64 {
        crate::units::thermal_speed(temperature_uk, self.mass)
    }
}

/// Effective wavevectors for excitation and for the infrared gap transition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavevectorSet {
    pub label: String,
    /// rad/µm
    pub k_excite: f64,
    /// rad/µm
    pub k_wait: f64,
}

impl WavevectorSet {
    pub fn new(label: impl Into<String>, k_excite: f64, k_wait: f64) -> Result<Self> {
        if !k_excite.is_finite() || !k_wait.is_finite() || k_excite == 0.0 {
            return Err(domain("wavevectors must be finite with k_excite ≠ 0"));
        }
        Ok(Self {
            label: label.into(),
            k_excite,
            k_wait,
        })
    }

    /// `|1 − k_wait / k_excite|`.
    pub fn mismatch(&self) -> f64 {
        (1.0 - self.k_wait / self.k_excite).abs()
    }
}

/// Effective two-photon wavevector 2π(1/λ_upper ∓ 1/λ_lower) in rad/µm.
/// Counter-propagating beams take the difference.
pub fn two_photon_wavevector(lambda_lower_nm: f64, lambda_upper_nm: f64, counterpropagating: bool) -> f64 {
    let s = if counterpropagating { -1.0 } else { 1.0 };
    TAU * 1e3 * (1.0 / lambda_upper_nm + s / lambda_lower_nm)
}

/// `k₋` for the ⁸⁷Rb 474 nm / 795 nm ladder.
pub fn k_minus() -> f64 {
    two_photon_wavevector(795.0, 474.0, true)
}

/// `k₊` for the same ladder with co-propagating beams.
pub fn k_plus() -> f64 {
    two_photon_wavevector(795.0, 474.0, false)
}

/// C₆ coefficients in THz·µm⁶ keyed by unordered pairs of principal quantum
/// numbers, plus the interatomic separation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionTable {
    entries: BTreeMap<(u32, u32), f64>,
    /// µm
    pub separation: f64,
    /// Principal quantum numbers of `r1`, `r2`, `r3`.
    pub levels: [u32; 3],
}

fn pair(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

impl InteractionTable {
    pub fn new(separation: f64, levels: [u32; 3]) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(domain(format!("separation must be positive, got {separation}")));
        }
        Ok(Self {
            entries: BTreeMap::new(),
            separation,
            levels,
        })
    }

    /// Table used for the two-qubit gate: r1, r2, r3 = 95, 97, 99 at L = 7 µm.
    pub fn rubidium_default() -> Self {
        let mut t = Self::new(7.0, [95, 97, 99]).unwrap();
        t.insert(95, 95, -14.0);
        t.insert(95, 97, -21.0);
        t.insert(95, 99, 29.0);
        t.insert(97, 97, -18.0);
        t.insert(97, 99, -26.0);
        t
    }

    pub fn insert(&mut self, a: u32, b: u32, c6_thz_um6: f64) {
        self.entries.insert(pair(a, b), c6_thz_um6);
    }

    pub fn c6(&self, a: u32, b: u32) -> Result<f64> {
        self.entries
            .get(&pair(a, b))
            .copied()
            .ok_or_else(|| Error::Lookup(format!("no C6 entry for pair ({a}, {b})")))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        let mut t = Self::new(separation, self.levels)?;
        t.entries = self.entries.clone();
        Ok(t)
    }
}

/// Interaction shift `V = 2π·C₆/L⁶` in rad/µs, with C₆ read as an ordinary
/// frequency in THz·µm⁶.
pub fn interaction_shift(c6_thz_um6: f64, separation_um: f64) -> f64 {
    TAU * c6_thz_um6 * 1e6 / separation_um.powi(6)
}

/// Every tabulated pair mapped to its shift in rad/µs.
pub fn interaction_shifts(table: &InteractionTable) -> BTreeMap<(u32, u32), f64> {
    table
        .entries()
        .map(|(k, c6)| (k, interaction_shift(c6, table.separation)))
        .collect()
}

/// The five shifts entering the nine-level gate Hamiltonian, rad/µs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateShifts<T> {
    pub v11: T,
    pub v12: T,
    pub v13: T,
    pub v22: T,
    pub v23: T,
}

impl<T: Real> GateShifts<T> {
    pub fn from_table(table: &InteractionTable) -> Result<Self> {
        let [r1, r2, r3] = table.levels;
        let v = |a, b| -> Result<T> { Ok(lit(interaction_shift(table.c6(a, b)?, table.separation))) };
        Ok(Self {
            v11: v(r1, r1)?,
            v12: v(r1, r2)?,
            v13: v(r1, r3)?,
            v22: v(r2, r2)?,
            v23: v(r2, r3)?,
        })
    }

    /// Shift for control level `rc` and target level `rt`, both in 1..=3.
    /// The target is never in `r3`.
    pub fn pair(&self, rc: usize, rt: usize) -> T {
        match (rc.min(rt), rc.max(rt)) {
            (1, 1) => self.v11,
            (1, 2) => self.v12,
            (1, 3) => self.v13,
            (2, 2) => self.v22,
            (2, 3) => self.v23,
            _ => T::zero(),
        }
    }
}

/// Blockade-limited rotation error `(√2Ω / V₁₁)² / 8`.
pub fn blockade_floor<T: Real>(omega: T, v11: T) -> T {
    let x = T::SQRT_2() * omega / v11;
    x * x / lit(8.0)
}

/// Unnormalized one-dimensional Maxwell weight `exp(−m v² / 2 k_B T)`.
pub fn maxwell_weight<T: Real>(v: T, temperature_uk: T, species: &AtomSpecies) -> Result<T> {
    let t = temperature_uk.to_f64().unwrap_or(f64::NAN);
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("temperature must be positive, got {t} µK")));
    }
    let beta: T = lit(species.mass / (2.0 * BOLTZMANN * t * 1e-6));
    Ok((-beta * v * v).exp())
}

/// Single-atom run parameters. Rabi frequencies are angular (rad/µs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimulationParams<T> {
    pub omega: T,
    pub omega_dp: T,
    pub omega_if: T,
    pub omega_t: T,
    /// µm
    pub z0: T,
    /// m/s
    pub v: T,
    /// µs
    pub t_wait: T,
    pub n_gap_cycles: u32,
    /// µK
    pub temperature: T,
}

impl<T: Real> SimulationParams<T> {
    /// Parameters from Ω/2π values in MHz. The gap length follows from
    /// `n_gap_cycles` and `Ω_IF` (zero cycles means no gap).
    pub fn from_mhz(omega: f64, omega_dp: f64, omega_if: f64, n_gap_cycles: u32) -> Result<Self> {
        let mut p = Self {
            omega: lit(TAU * omega),
            omega_dp: lit(TAU * omega_dp),
            omega_if: lit(TAU * omega_if),
            omega_t: lit(TAU * omega),
            z0: T::zero(),
            v: T::zero(),
            t_wait: T::zero(),
            n_gap_cycles,
            temperature: T::zero(),
        };
        p.t_wait = p.gap_time();
        p.validate()?;
        Ok(p)
    }

    pub fn with_motion(mut self, z0: T, v: T) -> Self {
        self.z0 = z0;
        self.v = v;
        self
    }

    /// `4nπ / (√2 Ω_IF)`.
    pub fn gap_time(&self) -> T {
        if self.n_gap_cycles == 0 {
            return T::zero();
        }
        lit::<T>(4.0 * self.n_gap_cycles as f64) * T::PI() / (T::SQRT_2() * self.omega_if)
    }

    /// `π / (√2 Ω)`.
    pub fn excite_time(&self) -> T {
        T::PI() / (T::SQRT_2() * self.omega)
    }

    /// `3π / (√2 |Ω_dp|)`.
    pub fn deexcite_time(&self) -> T {
        lit::<T>(3.0) * T::PI() / (T::SQRT_2() * self.omega_dp.abs())
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega,
            self.omega_dp,
            self.omega_if,
            self.omega_t,
            self.z0,
            self.v,
            self.t_wait,
            self.temperature,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(domain("non-finite parameter"));
        }
        if self.omega <= T::zero() {
            return Err(domain("Ω must be positive"));
        }
        if self.omega_dp == T::zero() {
            return Err(domain("Ω_dp must be nonzero"));
        }
        if self.t_wait < T::zero() {
            return Err(domain("t_wait must be non-negative"));
        }
        if self.temperature < T::zero() {
            return Err(domain("temperature must be non-negative"));
        }
        if self.n_gap_cycles > 0 {
            if self.omega_if <= T::zero() {
                return Err(domain("Ω_IF must be positive when the gap is active"));
            }
            if self.t_wait != self.gap_time() {
                return Err(domain("t_wait must equal 4nπ/(√2 Ω_IF) when the gap is active"));
            }
        }
        Ok(())
    }
}

/// Species, wavevectors and (optionally) an interaction table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomLaserConfig {
    pub name: String,
    pub species: AtomSpecies,
    pub wavevectors: WavevectorSet,
    /// Mismatch quoted for this configuration when it cannot be recomputed
    /// from tabulated wavelengths.
    pub reported_mismatch: Option<f64>,
    pub interactions: Option<InteractionTable>,
}

impl AtomLaserConfig {
    pub fn interactions(&self) -> Result<&InteractionTable> {
        self.interactions
            .as_ref()
            .ok_or_else(|| Error::Lookup(format!("preset {} has no interaction table", self.name)))
    }
}
