//! Two-qubit controlled-Z blockade gate: per-input amplitudes, rotation and
//! decay errors, velocity-grid averaging and the single-rail baseline.

mod grid;
mod sim;

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::model::{AtomLaserConfig, GateShifts, WavevectorSet};
use crate::propagator::Solver;
use crate::scalar::{lit, Real, C};

pub use grid::{averaged_rotation_error, fidelity, FidelityReport, GateGrid};
pub use sim::{simulate_full_two_atom, simulate_gate, simulate_gate_input, InputResult};

/// Which gate protocol to simulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMethod {
    /// Dual-rail control with the infrared gap and a dual-rail target train.
    DualRail,
    /// Single-rail π – 2π – π.
    Traditional,
}

impl std::str::FromStr for GateMethod {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dual-rail" | "dual_rail" | "ours" => Ok(Self::DualRail),
            "traditional" => Ok(Self::Traditional),
            o => Err(domain(format!("unknown gate method {o:?}"))),
        }
    }
}

/// Computational input `|control target⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateInput {
    #[serde(rename = "00")]
    I00,
    #[serde(rename = "01")]
    I01,
    #[serde(rename = "10")]
    I10,
    #[serde(rename = "11")]
    I11,
}

impl GateInput {
    pub const ALL: [GateInput; 4] = [GateInput::I00, GateInput::I01, GateInput::I10, GateInput::I11];
}

/// Gate configuration. Rabi frequencies are angular (rad/µs).
#[derive(Clone, Debug, Serialize)]
pub struct GateParams<T: Real> {
    /// Control excitation.
    pub omega: T,
    /// Control deexcitation (signed).
    pub omega_dp: T,
    /// Target first π pulse.
    pub omega_t: T,
    /// Target 3π pulse (signed).
    pub omega_t_dp: T,
    /// Infrared Rabi frequency during the gap.
    pub omega_if: T,
    pub n_gap_cycles: u32,
    pub wavevectors: WavevectorSet,
    pub shifts: GateShifts<T>,
    /// Rydberg lifetime, µs.
    pub tau: T,
    /// µm
    pub z0c: T,
    pub z0t: T,
    /// Rabi frequency of the single-rail baseline, `√2 Ω`.
    pub omega_traditional: T,
    #[serde(skip)]
    pub solver: Solver<T>,
}

impl<T: Real> GateParams<T> {
    /// Parameters in MHz for Ω/2π, Ω_dp/2π, Ω_t/2π and Ω_IF/2π. The target
    /// 3π pulse uses `−Ω_t`, the baseline `√2 Ω`.
    pub fn from_mhz(config: &AtomLaserConfig, omega: f64, omega_dp: f64, omega_t: f64, omega_if: f64, n_gap_cycles: u32) -> Result<Self> {
        let shifts = GateShifts::from_table(config.interactions()?)?;
        let p = Self {
            omega: lit(TAU * omega),
            omega_dp: lit(TAU * omega_dp),
            omega_t: lit(TAU * omega_t),
            omega_t_dp: lit(-TAU * omega_t),
            omega_if: lit(TAU * omega_if),
            n_gap_cycles,
            wavevectors: config.wavevectors.clone(),
            shifts,
            tau: lit(config.species.tau),
            z0c: T::zero(),
            z0t: T::zero(),
            omega_traditional: lit(TAU * omega * std::f64::consts::SQRT_2),
            solver: Solver::Exact,
        };
        p.validate()?;
        Ok(p)
    }

    /// `Ω/2π = Ω_t/2π = Ω_IF/2π = 2 MHz`, `Ω_dp/2π = −2.0339 MHz`.
    pub fn reference(config: &AtomLaserConfig, n_gap_cycles: u32) -> Result<Self> {
        Self::from_mhz(config, 2.0, -2.0339, 2.0, 2.0, n_gap_cycles)
    }

    /// `4nπ / (√2 Ω_IF)`.
    pub fn t_wait(&self) -> T {
        lit::<T>(4.0 * self.n_gap_cycles as f64) * T::PI() / (T::SQRT_2() * self.omega_if)
    }

    pub fn excite_time(&self) -> T {
        T::PI() / (T::SQRT_2() * self.omega)
    }

    pub fn deexcite_time(&self) -> T {
        lit::<T>(3.0) * T::PI() / (T::SQRT_2() * self.omega_dp.abs())
    }

    /// Durations of the target π and 3π pulses.
    pub fn target_times(&self) -> (T, T) {
        (
            T::PI() / (T::SQRT_2() * self.omega_t),
            lit::<T>(3.0) * T::PI() / (T::SQRT_2() * self.omega_t_dp.abs()),
        )
    }

    pub fn k(&self) -> T {
        lit(self.wavevectors.k_excite)
    }

    pub fn k_wait(&self) -> T {
        lit(self.wavevectors.k_wait)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [self.omega, self.omega_t, self.omega_if, self.tau, self.omega_traditional];
        if pos.iter().any(|x| !(*x > T::zero()) || !x.is_finite()) {
            return Err(domain("Ω, Ω_t, Ω_IF, Ω′ and τ must be positive"));
        }
        if self.omega_dp == T::zero() || self.omega_t_dp == T::zero() {
            return Err(domain("deexcitation Rabi frequencies must be nonzero"));
        }
        if self.n_gap_cycles == 0 {
            return Err(domain("the gate needs at least one gap cycle"));
        }
        let (t1, t3) = self.target_times();
        if t1 + t3 > self.t_wait() * lit(1.0 + 1e-12) {
            return Err(domain("target pulses must fit inside the wait time"));
        }
        Ok(())
    }
}

/// Gate duration in µs.
pub fn gate_duration<T: Real>(params: &GateParams<T>, method: GateMethod) -> T {
    match method {
        GateMethod::DualRail => params.excite_time() + params.t_wait() + params.deexcite_time(),
        GateMethod::Traditional => lit::<T>(2.0) * T::PI() / params.omega_traditional + params.t_wait(),
    }
}

/// `E_ro = 1 − [|Tr(U†𝒰)|² + Tr(U†𝒰𝒰†U)]/20` with `𝒰 = diag(1, a, b, c)`,
/// `U = diag(1, −1, −1, −1)`.
pub fn rotation_error<T: Real>(a: C<T>, b: C<T>, c: C<T>) -> T {
    let one = C::new(T::one(), T::zero());
    let tr = one - a - b - c;
    let tr2 = T::one() + a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
    T::one() - (tr.norm_sqr() + tr2) / lit(20.0)
}

/// `E_decay = [T_r(01) + T_r(10) + T_r(11)] / (4τ)`.
pub fn decay_error<T: Real>(t_r01: T, t_r10: T, t_r11: T, tau: T) -> Result<T> {
    if !(tau > T::zero()) {
        return Err(domain("τ must be positive"));
    }
    Ok((t_r01 + t_r10 + t_r11) / (lit::<T>(4.0) * tau))
}

/// `7√2π / (4Ωτ)`.
pub fn decay_error_analytic<T: Real>(omega: T, tau: T) -> T {
    lit::<T>(7.0) * T::SQRT_2() * T::PI() / (lit::<T>(4.0) * omega * tau)
}

/// Amplitudes, errors and timing of one gate run.
#[derive(Clone, Debug, Serialize)]
pub struct GateReport<T: Real> {
    pub method: GateMethod,
    pub vc: T,
    pub vt: T,
    pub a: C<T>,
    pub b: C<T>,
    pub c: C<T>,
    pub e_ro: T,
    pub e_decay: T,
    pub e_decay_analytic: T,
    pub duration: T,
    /// `T_r` for inputs 01, 10, 11, µs.
    pub t_r: [T; 3],
}
