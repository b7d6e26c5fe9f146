//! Time-dependent Hamiltonians built from laser couplings.
//!
//! Every Hamiltonian here is a sum of terms `a·e^{ik(z0+vt)}` on off-diagonal
//! elements plus a static diagonal. When each element carries a single term
//! and the phases are consistent around every loop, `H(t) = P(t) H0 P(t)†`
//! with `P(t)` diagonal; [`RotatingFrame`] exposes that decomposition so the
//! propagator can step exactly.

mod builders;
mod stage;

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_traits::Zero;

use crate::linalg::CMatrix;
use crate::scalar::{cis, lit, Real, C};
use crate::state::LevelBasis;

pub use builders::*;
pub use stage::{DriveStage, StageCoupling, StageKind};

/// Off-diagonal term `⟨row|H|col⟩ += amp·e^{ik(z0+vt)}` (Hermitian partner implied).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling<T: Real> {
    pub row: usize,
    pub col: usize,
    pub amp: C<T>,
    /// rad/µm
    pub k: T,
    /// µm
    pub z0: T,
    /// µm/µs
    pub v: T,
}

impl<T: Real> Coupling<T> {
    #[inline]
    pub fn phase(&self, t: T) -> T {
        self.k * (self.z0 + self.v * t)
    }

    #[inline]
    pub fn value(&self, t: T) -> C<T> {
        self.amp * cis(self.phase(t))
    }
}

/// Diagonal frame `P(t) = diag(e^{i(φ_j + ω_j t)})` with `H(t) = P H0 P†`.
#[derive(Clone, Debug)]
pub struct RotatingFrame<T: Real> {
    pub h0: CMatrix<T>,
    pub phase0: Vec<T>,
    pub rate: Vec<T>,
}

impl<T: Real> RotatingFrame<T> {
    /// Diagonal entries of `P(t)`.
    pub fn phases_at(&self, t: T) -> Vec<C<T>> {
        self.phase0.iter().zip(&self.rate).map(|(&p, &w)| cis(p + w * t)).collect()
    }
}

/// A Hermitian, time-dependent Hamiltonian over a fixed basis.
pub trait Hamiltonian<T: Real>: Send + Sync {
    fn basis(&self) -> &Arc<LevelBasis>;

    fn dim(&self) -> usize {
        self.basis().len()
    }

    /// Writes `H(t)` into `out`.
    fn eval(&self, t: T, out: &mut CMatrix<T>);

    fn at(&self, t: T) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.dim());
        self.eval(t, &mut m);
        m
    }

    /// `out = H(t)·psi`.
    fn apply(&self, t: T, psi: &[C<T>], out: &mut [C<T>]) {
        self.at(t).mul_vec_into(psi, out);
    }

    /// Exact diagonal-frame decomposition when one exists.
    fn frame(&self) -> Option<RotatingFrame<T>> {
        None
    }
}

/// Static diagonal plus a list of travelling-wave couplings.
#[derive(Clone, Debug)]
pub struct DriveHamiltonian<T: Real> {
    basis: Arc<LevelBasis>,
    diag: Vec<T>,
    terms: Vec<Coupling<T>>,
}

impl<T: Real> DriveHamiltonian<T> {
    pub fn new(basis: Arc<LevelBasis>) -> Self {
        let n = basis.len();
        Self {
            basis,
            diag: vec![T::zero(); n],
            terms: Vec::new(),
        }
    }

    pub fn with_diag(mut self, diag: Vec<T>) -> Self {
        assert_eq!(diag.len(), self.basis.len());
        self.diag = diag;
        self
    }

    /// Adds `⟨row|H|col⟩ += amp·e^{ik(z0+vt)}`. Zero amplitudes are dropped.
    pub fn couple(&mut self, row: usize, col: usize, amp: C<T>, k: T, z0: T, v: T) -> &mut Self {
        assert!(row != col && row < self.basis.len() && col < self.basis.len());
        if !amp.is_zero() {
            self.terms.push(Coupling { row, col, amp, k, z0, v });
        }
        self
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn terms(&self) -> &[Coupling<T>] {
        &self.terms
    }

    /// Two-atom Hamiltonian `a ⊗ 1 + 1 ⊗ b + diag(shift(i, j))`.
    pub fn product(a: &Self, b: &Self, shift: impl Fn(usize, usize) -> T) -> Self {
        let (na, nb) = (a.basis.len(), b.basis.len());
        let basis = Arc::new(LevelBasis::product(&a.basis, &b.basis));
        let mut diag = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                diag.push(a.diag[i] + b.diag[j] + shift(i, j));
            }
        }
        let mut h = Self::new(basis).with_diag(diag);
        for c in &a.terms {
            for j in 0..nb {
                h.terms.push(Coupling {
                    row: c.row * nb + j,
                    col: c.col * nb + j,
                    ..*c
                });
            }
        }
        for c in &b.terms {
            for i in 0..na {
                h.terms.push(Coupling {
                    row: i * nb + c.row,
                    col: i * nb + c.col,
                    ..*c
                });
            }
        }
        h
    }
}

impl<T: Real> Hamiltonian<T> for DriveHamiltonian<T> {
    fn basis(&self) -> &Arc<LevelBasis> {
        &self.basis
    }

    fn eval(&self, t: T, out: &mut CMatrix<T>) {
        out.fill_zero();
        for (i, &d) in self.diag.iter().enumerate() {
            out[(i, i)] = C::new(d, T::zero());
        }
        for c in &self.terms {
            let x = c.value(t);
            out[(c.row, c.col)] += x;
            out[(c.col, c.row)] += x.conj();
        }
    }

    fn apply(&self, t: T, psi: &[C<T>], out: &mut [C<T>]) {
        for ((o, &d), &p) in out.iter_mut().zip(&self.diag).zip(psi) {
            *o = p * d;
        }
        for c in &self.terms {
            let x = c.value(t);
            out[c.row] += x * psi[c.col];
            out[c.col] += x.conj() * psi[c.row];
        }
    }

    fn frame(&self) -> Option<RotatingFrame<T>> {
        let n = self.basis.len();
        // One term per unordered element.
        let mut seen = BTreeMap::new();
        for (idx, c) in self.terms.iter().enumerate() {
            if seen.insert((c.row.min(c.col), c.row.max(c.col)), idx).is_some() {
                return None;
            }
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (idx, c) in self.terms.iter().enumerate() {
            adj[c.row].push((c.col, idx));
            adj[c.col].push((c.row, idx));
        }

        let mut phase0: Vec<Option<T>> = vec![None; n];
        let mut rate: Vec<T> = vec![T::zero(); n];
        let tol: T = lit(1e-9);
        let close = |a: T, b: T| (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()));
        for root in 0..n {
            if phase0[root].is_some() {
                continue;
            }
            phase0[root] = Some(T::zero());
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let (pu, ru) = (phase0[u].unwrap(), rate[u]);
                for &(w, idx) in &adj[u] {
                    let c = &self.terms[idx];
                    // φ_row − φ_col = k z0, ω_row − ω_col = k v
                    let (dp, dr) = (c.k * c.z0, c.k * c.v);
                    let (pw, rw) = if c.row == w { (pu + dp, ru + dr) } else { (pu - dp, ru - dr) };
                    match phase0[w] {
                        None => {
                            phase0[w] = Some(pw);
                            rate[w] = rw;
                            queue.push_back(w);
                        }
                        Some(existing) => {
                            let dphi = crate::scalar::wrap_phase(existing - pw);
                            if !close(rate[w], rw) || dphi.abs() > tol * (T::one() + pw.abs()) {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        let phase0: Vec<T> = phase0.into_iter().map(|p| p.unwrap()).collect();
        let mut h0 = CMatrix::zeros(n);
        for (i, &d) in self.diag.iter().enumerate() {
            h0[(i, i)] = C::new(d, T::zero());
        }
        for c in &self.terms {
            h0[(c.row, c.col)] = c.amp;
            h0[(c.col, c.row)] = c.amp.conj();
        }
        Some(RotatingFrame { h0, phase0, rate })
    }
}

/// Sum of Hamiltonians over the same basis.
impl<T: Real> std::ops::Add for DriveHamiltonian<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.basis, rhs.basis);
        for (d, r) in self.diag.iter_mut().zip(&rhs.diag) {
            *d += *r;
        }
        self.terms.extend(rhs.terms);
        self
    }
}

/// Zero Hamiltonian over `basis`.
pub fn idle<T: Real>(basis: Arc<LevelBasis>) -> DriveHamiltonian<T> {
    DriveHamiltonian::new(basis)
}
