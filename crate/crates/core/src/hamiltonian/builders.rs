use std::sync::Arc;

use super::{DriveHamiltonian, DriveStage, Hamiltonian, StageKind};
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::model::{GateShifts, SimulationParams, WavevectorSet};
use crate::scalar::{lit, Real, C};
use crate::state::LevelBasis;

/// `{1, r1}` with `⟨r1|H|1⟩ = (Ω/2)e^{ik(z0+vt)}`.
pub fn single_rail<T: Real>(omega: T, k: T, z0: T, v: T) -> DriveHamiltonian<T> {
    let mut h = DriveHamiltonian::new(LevelBasis::single_rail());
    h.couple(1, 0, C::new(omega * lit(0.5), T::zero()), k, z0, v);
    h
}

/// `{r2, r1, 1}` with `⟨r1|H|1⟩ = (Ω/2)e^{+ik(z0+vt)}` and
/// `⟨r2|H|1⟩ = (Ω/2)e^{−ik(z0+vt)}`.
pub fn dual_rail<T: Real>(omega: T, k: T, z0: T, v: T) -> DriveHamiltonian<T> {
    let mut h = DriveHamiltonian::new(LevelBasis::dual_rail());
    let a = C::new(omega * lit(0.5), T::zero());
    h.couple(1, 2, a, k, z0, v);
    h.couple(0, 2, a, -k, z0, v);
    h
}

/// `{r2, r1, 1}` with `⟨r1|H|1⟩ = Ω cos θ` and `⟨r2|H|1⟩ = iΩ sin θ`,
/// `θ = k(z0+vt)`. Each element is stored as its two travelling-wave halves.
pub fn four_field<T: Real>(omega: T, k: T, z0: T, v: T) -> DriveHamiltonian<T> {
    let mut h = DriveHamiltonian::new(LevelBasis::dual_rail());
    let a = C::new(omega * lit(0.5), T::zero());
    h.couple(1, 2, a, k, z0, v);
    h.couple(1, 2, a, -k, z0, v);
    h.couple(0, 2, a, k, z0, v);
    h.couple(0, 2, -a, -k, z0, v);
    h
}

/// Stage of the gap protocol over `{1, r1, r2, r3}`. Excitation uses `Ω`,
/// deexcitation `Ω_dp`, the infrared wait `Ω_IF` with `±k_wait`.
pub fn gap_stage<T: Real>(kind: StageKind, duration: T, params: &SimulationParams<T>, wavevectors: &WavevectorSet) -> DriveStage<T> {
    let k: T = lit(wavevectors.k_excite);
    match kind {
        StageKind::Excite => DriveStage::dual_rail(kind, duration, params.omega, k),
        StageKind::Deexcite => DriveStage::dual_rail(kind, duration, params.omega_dp, k),
        StageKind::WaitWithInfrared => DriveStage::infrared(duration, params.omega_if, lit(wavevectors.k_wait)),
        StageKind::WaitIdle => DriveStage::idle(duration),
    }
}

/// Control/target drive for the nine-level wait Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct GateNineDrive<T> {
    /// Signed target Rabi frequency, rad/µs.
    pub omega_t: T,
    /// Infrared Rabi frequency on the control, rad/µs.
    pub omega_if: T,
    pub k: T,
    pub k_wait: T,
    pub z0c: T,
    pub vc: T,
    pub z0t: T,
    pub vt: T,
}

/// Nine-level Hamiltonian over `LevelBasis::gate_nine()`, index `3c + t` with
/// control `c ∈ (r3, r2, r1)` and target `t ∈ (r2, r1, 1)`.
///
/// Diagonal `(V23, V13, 0, V22, V12, 0, V12, V11, 0)`. The target is driven
/// within each control row (`1→r1` at `+k z_t`, `1→r2` at `−k z_t`), the control
/// within each target column (`r3→r1` at `+k_w z_c`, `r3→r2` at `−k_w z_c`).
pub fn gate_nine<T: Real>(drive: &GateNineDrive<T>, shifts: &GateShifts<T>) -> DriveHamiltonian<T> {
    let z = T::zero();
    let s = shifts;
    let diag = vec![s.v23, s.v13, z, s.v22, s.v12, z, s.v12, s.v11, z];
    let mut h = DriveHamiltonian::new(LevelBasis::gate_nine()).with_diag(diag);
    let at = C::new(drive.omega_t * lit(0.5), T::zero());
    let ai = C::new(drive.omega_if * lit(0.5), T::zero());
    for c in 0..3 {
        h.couple(3 * c + 1, 3 * c + 2, at, drive.k, drive.z0t, drive.vt);
        h.couple(3 * c, 3 * c + 2, at, -drive.k, drive.z0t, drive.vt);
    }
    for t in 0..3 {
        h.couple(6 + t, t, ai, drive.k_wait, drive.z0c, drive.vc);
        h.couple(3 + t, t, ai, -drive.k_wait, drive.z0c, drive.vc);
    }
    h
}

/// Two single-rail atoms over `{11, 1r, r1, rr}` (control first) with the
/// blockade shift on `rr`.
pub fn two_atom_single_rail<T: Real>(control: &DriveHamiltonian<T>, target: &DriveHamiltonian<T>, v_rr: T) -> DriveHamiltonian<T> {
    let h = DriveHamiltonian::product(control, target, |i, j| if i == 1 && j == 1 { v_rr } else { T::zero() });
    relabel(h, LevelBasis::two_atom_single_rail())
}

fn relabel<T: Real>(h: DriveHamiltonian<T>, basis: Arc<LevelBasis>) -> DriveHamiltonian<T> {
    let mut out = DriveHamiltonian::new(basis).with_diag(h.diag().to_vec());
    for c in h.terms() {
        out.couple(c.row, c.col, c.amp, c.k, c.z0, c.v);
    }
    out
}

/// `H(t)` of [`single_rail`] as a matrix.
pub fn h_single_rail<T: Real>(t: T, omega: T, k: T, z0: T, v: T) -> CMatrix<T> {
    single_rail(omega, k, z0, v).at(t)
}

/// `H(t)` of [`dual_rail`] as a matrix.
pub fn h_dual_rail<T: Real>(t: T, omega: T, k: T, z0: T, v: T) -> CMatrix<T> {
    dual_rail(omega, k, z0, v).at(t)
}

/// `H(t)` of [`four_field`] as a matrix.
pub fn h_four_field<T: Real>(t: T, omega: T, k: T, z0: T, v: T) -> CMatrix<T> {
    four_field(omega, k, z0, v).at(t)
}

/// `H(t)` of one gap-protocol stage for an atom at `params.z0 + params.v t`.
pub fn h_gap_four_level<T: Real>(t: T, kind: StageKind, params: &SimulationParams<T>, wavevectors: &WavevectorSet) -> Result<CMatrix<T>> {
    let stage = gap_stage(kind, T::one(), params, wavevectors);
    Ok(stage.hamiltonian(&LevelBasis::gap(), params.z0, params.v)?.at(t))
}

/// `H(t)` of [`gate_nine`] as a matrix.
pub fn h_gate_nine<T: Real>(t: T, drive: &GateNineDrive<T>, shifts: &GateShifts<T>) -> CMatrix<T> {
    gate_nine(drive, shifts).at(t)
}

/// Rotation `|r±⟩ = (|r1⟩ ± |r2⟩)/√2` written in the `{r2, r1, 1}` order, mapping
/// `r+` to the `r1` slot and `r−` to the `r2` slot.
pub fn rail_rotation<T: Real>() -> CMatrix<T> {
    let s = T::FRAC_1_SQRT_2();
    let mut r = CMatrix::zeros(3);
    // row r− (slot r2) = (r1 − r2)/√2, row r+ (slot r1) = (r1 + r2)/√2
    r[(0, 0)] = C::new(-s, T::zero());
    r[(0, 1)] = C::new(s, T::zero());
    r[(1, 0)] = C::new(s, T::zero());
    r[(1, 1)] = C::new(s, T::zero());
    r[(2, 2)] = C::new(T::one(), T::zero());
    r
}
