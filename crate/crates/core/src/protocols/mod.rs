//! Single-atom protocols: excitation, restoration, the gap protocol, the
//! single-rail baseline, phase analysis, Ω_dp optimization and velocity
//! averaging.

mod analytic;
mod average;
mod optimize;

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{dual_rail, four_field, gap_stage, single_rail, DriveHamiltonian, DriveStage, StageKind};
use crate::model::{SimulationParams, WavevectorSet};
use crate::propagator::{run_segments, run_sequence, Segment, SequenceOptions, Solver, TrajectoryResult};
use crate::scalar::{arg, lit, to_f64, Real, C};
use crate::state::{ComplexState, LevelBasis};

pub use analytic::{analytic_w, AnalyticAmplitudes};
pub use average::{maxwell_average, AveragedOutcome, VelocityGrid};
pub use optimize::{brent_minimize, Minimum};

/// Final ground-state observables of a single-atom protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolOutcome<T> {
    /// `|⟨1|ψ⟩|²`
    pub ground_population: T,
    /// `1 − |⟨1|ψ⟩|²`
    pub population_error: T,
    /// `arg⟨1|ψ⟩` on (−π, π]
    pub ground_phase: T,
    /// Population in `r3` at the end of the gap, gap protocol only.
    pub r3_leak: Option<T>,
    /// µs
    pub rydberg_time: T,
    /// Population outside `|1⟩`, computed without cancellation.
    pub leaked: T,
}

impl<T: Real> ProtocolOutcome<T> {
    /// Outcome read from the final state of a trajectory.
    pub fn from_trajectory(traj: &TrajectoryResult<T>, r3_leak: Option<T>) -> Result<Self> {
        let s = &traj.final_state;
        let g = s.amplitude("1")?;
        let gi = s.basis.index_of("1")?;
        let leaked = s.amps.iter().enumerate().filter(|&(i, _)| i != gi).map(|(_, z)| z.norm_sqr()).sum();
        let pop = g.norm_sqr();
        Ok(Self {
            ground_population: pop,
            population_error: T::one() - pop,
            ground_phase: arg(g),
            r3_leak,
            rydberg_time: traj.rydberg_time,
            leaked,
        })
    }

    /// `|arg⟨1|ψ⟩| − π`, zero for an ideal sign flip.
    pub fn phase_offset_from_pi(&self) -> T {
        self.ground_phase.abs() - T::PI()
    }
}

/// Drive used by [`run_excite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExciteModel {
    SingleRail,
    DualRail,
    FourField,
}

impl std::str::FromStr for ExciteModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-rail" => Ok(Self::SingleRail),
            "dual-rail" => Ok(Self::DualRail),
            "four-field" => Ok(Self::FourField),
            o => Err(Error::Domain(format!("unknown model {o:?}"))),
        }
    }
}

/// Continuous drive from `|1⟩` for `duration` µs.
pub fn run_excite<T: Real>(
    model: ExciteModel,
    omega: T,
    k: T,
    z0: T,
    v: T,
    duration: T,
    opts: &SequenceOptions<T>,
) -> Result<TrajectoryResult<T>> {
    let (h, basis) = match model {
        ExciteModel::SingleRail => (single_rail(omega, k, z0, v), LevelBasis::single_rail()),
        ExciteModel::DualRail => (dual_rail(omega, k, z0, v), LevelBasis::dual_rail()),
        ExciteModel::FourField => (four_field(omega, k, z0, v), LevelBasis::dual_rail()),
    };
    let g = ComplexState::basis_state(basis, "1")?;
    run_segments(&g, &[Segment { hamiltonian: h, duration }], opts)
}

/// Phase `φ` at the end of a dual-rail π pulse from `|1⟩` with `z0 = 0`,
/// defined by `C_r1 = −i C_r e^{iφ}`, `C_r2 = −i C_r e^{−iφ}`. Returned as the
/// half-difference of the two rail phases.
pub fn extract_phase_phi<T: Real>(omega: T, k: T, v: T, solver: &Solver<T>) -> Result<T> {
    let t = T::PI() / (T::SQRT_2() * omega);
    let traj = run_excite(ExciteModel::DualRail, omega, k, T::zero(), v, t, &SequenceOptions::quiet(*solver))?;
    let s = &traj.final_state;
    let (c1, c2) = (s.amplitude("r1")?, s.amplitude("r2")?);
    let floor: T = lit(1e-6);
    if c1.norm() < floor || c2.norm() < floor {
        return Err(Error::Extraction("Rydberg amplitude vanishes; φ undefined".into()));
    }
    let i = C::new(T::zero(), T::one());
    let p1 = arg(i * c1);
    let p2 = arg(i * c2);
    Ok(crate::scalar::wrap_phase(p1 - p2) * lit(0.5))
}

/// `φ / (2πkv/Ω)` sampled over a set of velocities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseFit<T> {
    /// Mean ratio.
    pub slope_ratio: T,
    /// Largest deviation of any ratio from the mean.
    pub residual: T,
    /// `max − min` of the ratio.
    pub drift: T,
    pub velocities: Vec<T>,
    pub phases: Vec<T>,
    pub ratios: Vec<T>,
}

pub fn fit_phase_linearity<T: Real>(omega: T, k: T, velocities: &[T], solver: &Solver<T>) -> Result<PhaseFit<T>> {
    if velocities.is_empty() || velocities.iter().any(|v| *v == T::zero()) {
        return Err(Error::Domain("phase fit needs nonzero velocities".into()));
    }
    let mut phases = Vec::with_capacity(velocities.len());
    let mut ratios = Vec::with_capacity(velocities.len());
    for &v in velocities {
        let phi = extract_phase_phi(omega, k, v, solver)?;
        phases.push(phi);
        ratios.push(phi / (T::TAU() * k * v / omega));
    }
    let mean = ratios.iter().copied().sum::<T>() / lit(ratios.len() as f64);
    let residual = ratios.iter().map(|r| (*r - mean).abs()).fold(T::zero(), T::max);
    let hi = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = ratios.iter().copied().fold(T::infinity(), T::min);
    Ok(PhaseFit {
        slope_ratio: mean,
        residual,
        drift: hi - lo,
        velocities: velocities.to_vec(),
        phases,
        ratios,
    })
}

/// Stages of the no-gap restoration: π excite at `Ω`, 3π deexcite at `Ω_dp`.
pub fn restore_stages<T: Real>(params: &SimulationParams<T>, k: T) -> Vec<DriveStage<T>> {
    vec![
        DriveStage::dual_rail(StageKind::Excite, params.excite_time(), params.omega, k),
        DriveStage::dual_rail(StageKind::Deexcite, params.deexcite_time(), params.omega_dp, k),
    ]
}

/// Stages of the gap protocol: π excite, `4nπ` infrared wait, 3π deexcite.
/// With `n_gap_cycles = 0` the wait is dropped.
pub fn gap_stages<T: Real>(params: &SimulationParams<T>, wavevectors: &WavevectorSet) -> Vec<DriveStage<T>> {
    let mut st = vec![gap_stage(StageKind::Excite, params.excite_time(), params, wavevectors)];
    if params.n_gap_cycles > 0 {
        st.push(gap_stage(StageKind::WaitWithInfrared, params.gap_time(), params, wavevectors));
    }
    st.push(gap_stage(StageKind::Deexcite, params.deexcite_time(), params, wavevectors));
    st
}

/// Stages of the single-rail baseline: π at `Ω`, idle `t_wait`, π at `Ω`.
pub fn traditional_stages<T: Real>(params: &SimulationParams<T>, k: T) -> Vec<DriveStage<T>> {
    let t_pi = T::PI() / params.omega;
    let mut st = vec![DriveStage::single_rail(StageKind::Excite, t_pi, params.omega, k)];
    if params.t_wait > T::zero() {
        st.push(DriveStage::idle(params.t_wait));
    }
    st.push(DriveStage::single_rail(StageKind::Deexcite, t_pi, params.omega, k));
    st
}

pub fn restore_trajectory<T: Real>(params: &SimulationParams<T>, k: T, opts: &SequenceOptions<T>) -> Result<TrajectoryResult<T>> {
    params.validate()?;
    let g = ComplexState::basis_state(LevelBasis::dual_rail(), "1")?;
    run_sequence(&g, &restore_stages(params, k), params, opts)
}

/// No-gap restoration over `{r2, r1, 1}`.
pub fn run_excite_restore<T: Real>(params: &SimulationParams<T>, k: T, opts: &SequenceOptions<T>) -> Result<ProtocolOutcome<T>> {
    ProtocolOutcome::from_trajectory(&restore_trajectory(params, k, opts)?, None)
}

pub fn gap_trajectory<T: Real>(
    params: &SimulationParams<T>,
    wavevectors: &WavevectorSet,
    opts: &SequenceOptions<T>,
) -> Result<TrajectoryResult<T>> {
    params.validate()?;
    let g = ComplexState::basis_state(LevelBasis::gap(), "1")?;
    run_sequence(&g, &gap_stages(params, wavevectors), params, opts)
}

/// Gap protocol over `{1, r1, r2, r3}`; `r3_leak` is read at the end of the wait.
pub fn run_gap_protocol<T: Real>(
    params: &SimulationParams<T>,
    wavevectors: &WavevectorSet,
    opts: &SequenceOptions<T>,
) -> Result<ProtocolOutcome<T>> {
    let traj = gap_trajectory(params, wavevectors, opts)?;
    let leak = if params.n_gap_cycles > 0 {
        Some(traj.segment_ends[1].population("r3")?)
    } else {
        None
    };
    ProtocolOutcome::from_trajectory(&traj, leak)
}

pub fn traditional_trajectory<T: Real>(params: &SimulationParams<T>, k: T, opts: &SequenceOptions<T>) -> Result<TrajectoryResult<T>> {
    if !(params.omega > T::zero()) || params.t_wait < T::zero() {
        return Err(Error::Domain("single-rail baseline needs Ω > 0 and t_wait ≥ 0".into()));
    }
    let g = ComplexState::basis_state(LevelBasis::single_rail(), "1")?;
    run_sequence(&g, &traditional_stages(params, k), params, opts)
}

/// Single-rail π, wait, π over `{1, r1}`. `params.omega` is the single-rail
/// Rabi frequency.
pub fn run_traditional_restore<T: Real>(params: &SimulationParams<T>, k: T, opts: &SequenceOptions<T>) -> Result<ProtocolOutcome<T>> {
    ProtocolOutcome::from_trajectory(&traditional_trajectory(params, k, opts)?, None)
}

/// Result of the Ω_dp search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeexcitationOptimum {
    /// Signed Ω_dp/2π, MHz.
    pub omega_dp_mhz: f64,
    /// Ω_dp / Ω.
    pub ratio: f64,
    /// `1 − |⟨1|ψ⟩|²` at the optimum and `v_ref`.
    pub error: f64,
    pub evaluations: usize,
}

/// Objective spread below which the optimizer treats the bracket as flat.
const FLAT_OBJECTIVE: f64 = 1e-14;

/// Finds `|Ω_dp|` minimizing the leaked population of the no-gap restoration
/// at `v_ref`, with the sign fixed by `sign`. The search bracket is
/// `|Ω|·(1 ± bracket)`.
pub fn optimize_deexcitation<T: Real>(
    omega: T,
    k: T,
    v_ref: T,
    sign: i32,
    bracket: f64,
    solver: &Solver<T>,
) -> Result<DeexcitationOptimum> {
    if sign != 1 && sign != -1 {
        return Err(Error::Domain("sign must be ±1".into()));
    }
    if !(bracket > 0.0 && bracket < 1.0) {
        return Err(Error::Domain("bracket must lie in (0, 1)".into()));
    }
    let om = to_f64(omega);
    let opts = SequenceOptions::quiet(*solver);
    let objective = |mag: f64| -> Result<f64> {
        let mut p = SimulationParams::<T>::from_mhz(om / TAU, sign as f64 * mag / TAU, 1.0, 0)?;
        p.omega = omega;
        p = p.with_motion(T::zero(), v_ref);
        Ok(to_f64(run_excite_restore(&p, k, &opts)?.leaked))
    };
    let (a, b) = (om * (1.0 - bracket), om * (1.0 + bracket));
    // 1e-6 MHz resolution on Ω_dp/2π.
    let mut m = brent_minimize(objective, a, b, TAU * 1e-6 / 2.0, 500)?;
    // Without Doppler shift every 3π pulse restores exactly; the objective is
    // flat and the undisturbed drive |Ω| is returned.
    let spread = objective(a)?.max(objective(b)?).max(m.fx);
    if spread < FLAT_OBJECTIVE {
        m.x = om;
    }
    let edge = TAU * 1e-5;
    if spread >= FLAT_OBJECTIVE && (m.x - a < edge || b - m.x < edge) {
        return Err(Error::Optimization(format!(
            "minimum at bracket edge ({:.6} MHz); widen the bracket",
            sign as f64 * m.x / TAU
        )));
    }
    let mut p = SimulationParams::<T>::from_mhz(om / TAU, sign as f64 * m.x / TAU, 1.0, 0)?;
    p.omega = omega;
    let out = run_excite_restore(&p.with_motion(T::zero(), v_ref), k, &opts)?;
    Ok(DeexcitationOptimum {
        omega_dp_mhz: sign as f64 * m.x / TAU,
        ratio: sign as f64 * m.x / om,
        error: to_f64(out.population_error),
        evaluations: m.evaluations,
    })
}

/// Hamiltonian segments of the gap protocol, for callers that need to splice
/// them into larger sequences.
pub fn gap_segments<T: Real>(params: &SimulationParams<T>, wavevectors: &WavevectorSet) -> Result<Vec<Segment<T, DriveHamiltonian<T>>>> {
    let basis = LevelBasis::gap();
    gap_stages(params, wavevectors)
        .iter()
        .map(|s| {
            Ok(Segment {
                hamiltonian: s.hamiltonian(&basis, params.z0, params.v)?,
                duration: s.duration,
            })
        })
        .collect()
}
