//! Level bases and complex state vectors.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::vec_norm;
use crate::scalar::{arg, Real, C};

/// Ordered set of level labels, with a flag marking which levels count as
/// Rydberg residence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBasis {
    labels: Vec<String>,
    rydberg: Vec<bool>,
}

impl LevelBasis {
    pub fn new<S: AsRef<str>>(labels: &[S], rydberg: &[bool]) -> Result<Self> {
        if labels.len() != rydberg.len() {
            return Err(Error::Domain("label and rydberg-flag lengths differ".into()));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Domain(format!("duplicate level label {l}")));
            }
        }
        Ok(Self {
            labels,
            rydberg: rydberg.to_vec(),
        })
    }

    /// `{1, r1}` for a single-rail two-level atom.
    pub fn single_rail() -> Arc<Self> {
        Arc::new(Self::new(&["1", "r1"], &[false, true]).unwrap())
    }

    /// `{r2, r1, 1}`, the order used for the dual-rail and four-field models.
    pub fn dual_rail() -> Arc<Self> {
        Arc::new(Self::new(&["r2", "r1", "1"], &[true, true, false]).unwrap())
    }

    /// `{1, r1, r2, r3}` for the gap protocol.
    pub fn gap() -> Arc<Self> {
        Arc::new(Self::new(&["1", "r1", "r2", "r3"], &[false, true, true, true]).unwrap())
    }

    /// The nine control–target states used during the gate wait, index
    /// `3·c + t` with control `c ∈ (r3, r2, r1)` and target `t ∈ (r2, r1, 1)`.
    /// Only the single-Rydberg states `r31, r21, r11` count as Rydberg
    /// residence; doubly excited states are left out of the decay budget.
    pub fn gate_nine() -> Arc<Self> {
        let labels = ["r3r2", "r3r1", "r31", "r2r2", "r2r1", "r21", "r1r2", "r1r1", "r11"];
        let ryd = [false, false, true, false, false, true, false, false, true];
        Arc::new(Self::new(&labels, &ryd).unwrap())
    }

    /// Two-atom basis `{11, 1r, r1, rr}` (control first) for the single-rail gate.
    /// Only singly excited states count as Rydberg residence.
    pub fn two_atom_single_rail() -> Arc<Self> {
        Arc::new(Self::new(&["11", "1r", "r1", "rr"], &[false, true, true, false]).unwrap())
    }

    /// Tensor product `a ⊗ b`, labels joined with `|`. A product level counts
    /// as Rydberg residence when exactly one factor is Rydberg.
    pub fn product(a: &LevelBasis, b: &LevelBasis) -> Self {
        let mut labels = Vec::with_capacity(a.len() * b.len());
        let mut ryd = Vec::with_capacity(a.len() * b.len());
        for (la, &ra) in a.labels.iter().zip(&a.rydberg) {
            for (lb, &rb) in b.labels.iter().zip(&b.rydberg) {
                labels.push(format!("{la}|{lb}"));
                ryd.push(ra ^ rb);
            }
        }
        Self { labels, rydberg: ryd }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_rydberg(&self, i: usize) -> bool {
        self.rydberg[i]
    }

    pub fn rydberg_mask(&self) -> &[bool] {
        &self.rydberg
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Lookup(format!("no level {label} in basis {:?}", self.labels)))
    }
}

/// Complex amplitude vector over a [`LevelBasis`].
#[derive(Clone, Debug)]
pub struct ComplexState<T: Real> {
    pub basis: Arc<LevelBasis>,
    pub amps: Vec<C<T>>,
}

impl<T: Real> ComplexState<T> {
    pub fn new(basis: Arc<LevelBasis>, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != basis.len() {
            return Err(Error::Domain(format!(
                "{} amplitudes for a basis of {} levels",
                amps.len(),
                basis.len()
            )));
        }
        Ok(Self { basis, amps })
    }

    /// Basis vector on `label`.
    pub fn basis_state(basis: Arc<LevelBasis>, label: &str) -> Result<Self> {
        let i = basis.index_of(label)?;
        let mut amps = vec![C::zero(); basis.len()];
        amps[i] = C::new(T::one(), T::zero());
        Ok(Self { basis, amps })
    }

    pub fn norm(&self) -> T {
        vec_norm(&self.amps)
    }

    pub fn amplitude(&self, label: &str) -> Result<C<T>> {
        Ok(self.amps[self.basis.index_of(label)?])
    }

    pub fn population(&self, label: &str) -> Result<T> {
        Ok(self.amplitude(label)?.norm_sqr())
    }

    pub fn populations(&self) -> Vec<T> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Phases on (−π, π].
    pub fn phases(&self) -> Vec<T> {
        self.amps.iter().map(|&z| arg(z)).collect()
    }

    /// Total population in levels flagged as Rydberg.
    pub fn rydberg_population(&self) -> T {
        self.amps
            .iter()
            .zip(self.basis.rydberg_mask())
            .filter(|(_, &r)| r)
            .map(|(z, _)| z.norm_sqr())
            .sum()
    }
}
