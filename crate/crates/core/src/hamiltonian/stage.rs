use std::str::FromStr;
use std::sync::Arc;

use super::DriveHamiltonian;
use crate::error::{domain, Error, Result};
use crate::scalar::{lit, Real, C};
use crate::state::LevelBasis;

/// What a stage of a pulse sequence does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    Excite,
    WaitWithInfrared,
    WaitIdle,
    Deexcite,
}

impl StageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StageKind::Excite => "excite",
            StageKind::WaitWithInfrared => "wait_with_infrared",
            StageKind::WaitIdle => "wait_idle",
            StageKind::Deexcite => "deexcite",
        }
    }
}

impl FromStr for StageKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "excite" => Ok(StageKind::Excite),
            "wait_with_infrared" => Ok(StageKind::WaitWithInfrared),
            "wait_idle" => Ok(StageKind::WaitIdle),
            "deexcite" => Ok(StageKind::Deexcite),
            other => Err(domain(format!("unknown stage kind {other:?}"))),
        }
    }
}

/// `⟨upper|H|lower⟩ = (rabi/2)·e^{ik(z0+vt)}` during a stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCoupling<T> {
    pub upper: String,
    pub lower: String,
    /// Signed Rabi frequency, rad/µs.
    pub rabi: T,
    /// Signed wavevector, rad/µm.
    pub k: T,
}

/// One contiguous segment of a single-atom pulse sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveStage<T> {
    pub kind: StageKind,
    /// µs
    pub duration: T,
    pub couplings: Vec<StageCoupling<T>>,
}

fn coupling<T>(upper: &str, lower: &str, rabi: T, k: T) -> StageCoupling<T> {
    StageCoupling {
        upper: upper.into(),
        lower: lower.into(),
        rabi,
        k,
    }
}

impl<T: Real> DriveStage<T> {
    /// Dual-rail optical pair: `1→r1` at `+k`, `1→r2` at `−k`.
    pub fn dual_rail(kind: StageKind, duration: T, rabi: T, k: T) -> Self {
        Self {
            kind,
            duration,
            couplings: vec![coupling("r1", "1", rabi, k), coupling("r2", "1", rabi, -k)],
        }
    }

    /// Infrared pair: `r3→r1` at `+k_w`, `r3→r2` at `−k_w`.
    pub fn infrared(duration: T, rabi: T, k_wait: T) -> Self {
        Self {
            kind: StageKind::WaitWithInfrared,
            duration,
            couplings: vec![coupling("r1", "r3", rabi, k_wait), coupling("r2", "r3", rabi, -k_wait)],
        }
    }

    /// Single-rail `1→r1` pulse.
    pub fn single_rail(kind: StageKind, duration: T, rabi: T, k: T) -> Self {
        Self {
            kind,
            duration,
            couplings: vec![coupling("r1", "1", rabi, k)],
        }
    }

    pub fn idle(duration: T) -> Self {
        Self {
            kind: StageKind::WaitIdle,
            duration,
            couplings: Vec::new(),
        }
    }

    /// Checks the duration and that only couplings allowed by the kind are present.
    pub fn validate(&self, basis: &LevelBasis) -> Result<()> {
        if !(self.duration > T::zero() && self.duration.is_finite()) {
            return Err(domain(format!("stage {} needs a positive duration", self.kind.as_str())));
        }
        for c in &self.couplings {
            basis.index_of(&c.upper)?;
            basis.index_of(&c.lower)?;
            let ok = match self.kind {
                StageKind::Excite | StageKind::Deexcite => c.lower == "1" && c.upper != "r3",
                StageKind::WaitWithInfrared => c.lower == "r3" && c.upper != "1",
                StageKind::WaitIdle => false,
            };
            if !ok {
                return Err(domain(format!(
                    "coupling {}→{} not allowed in a {} stage",
                    c.lower,
                    c.upper,
                    self.kind.as_str()
                )));
            }
        }
        Ok(())
    }

    /// Hamiltonian of this stage for an atom at `z0 + v t`.
    pub fn hamiltonian(&self, basis: &Arc<LevelBasis>, z0: T, v: T) -> Result<DriveHamiltonian<T>> {
        let mut h = DriveHamiltonian::new(basis.clone());
        let half: T = lit(0.5);
        for c in &self.couplings {
            let (u, l) = (basis.index_of(&c.upper)?, basis.index_of(&c.lower)?);
            h.couple(u, l, C::new(half * c.rabi, T::zero()), c.k, z0, v);
        }
        Ok(h)
    }
}
