//! Time-ordered propagation of complex states.
//!
//! Three independent routes are provided: an adaptive Dormand–Prince 5(4)
//! stepper (the default), a midpoint matrix-exponential product used as an
//! oracle, and an exact stepper for Hamiltonians that admit a diagonal
//! rotating frame.

mod dopri;
mod sequence;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, RotatingFrame};
use crate::linalg::CMatrix;
use crate::scalar::{lit, Real, C};
use crate::state::ComplexState;

pub use dopri::{integrate, Step, StepStats, Tolerance};
pub use sequence::{run_segments, run_sequence, write_trajectory_csv, Sample, Segment, SequenceOptions, TrajectoryResult};

/// How a segment is propagated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Solver<T> {
    /// Adaptive Dormand–Prince 5(4).
    Adaptive(Tolerance<T>),
    /// Exact exponential in the co-moving diagonal frame; requires
    /// [`Hamiltonian::frame`].
    Exact,
    /// Midpoint matrix-exponential product with a fixed number of slices.
    Oracle { steps: usize },
}

impl<T: Real> Default for Solver<T> {
    fn default() -> Self {
        Solver::Adaptive(Tolerance::default())
    }
}

fn check_dims<T: Real, H: Hamiltonian<T> + ?Sized>(state: &ComplexState<T>, h: &H) -> Result<()> {
    if state.basis.as_ref() != h.basis().as_ref() {
        return Err(Error::Consistency(format!(
            "state basis {:?} does not match Hamiltonian basis {:?}",
            state.basis.labels(),
            h.basis().labels()
        )));
    }
    Ok(())
}

/// Adaptive propagation of `state` from `t0` to `t1`.
pub fn evolve<T: Real, H: Hamiltonian<T> + ?Sized>(
    state: &ComplexState<T>,
    h: &H,
    t0: T,
    t1: T,
    tol: &Tolerance<T>,
) -> Result<ComplexState<T>> {
    check_dims(state, h)?;
    let mut psi = state.amps.clone();
    integrate(h, &mut psi, t0, t1, tol, &mut |_| {})?;
    Ok(ComplexState {
        basis: state.basis.clone(),
        amps: psi,
    })
}

/// Product of `exp(−i H(t_mid) Δt)` over `steps` uniform slices.
pub fn evolve_oracle<T: Real, H: Hamiltonian<T> + ?Sized>(
    state: &ComplexState<T>,
    h: &H,
    t0: T,
    t1: T,
    steps: usize,
) -> Result<ComplexState<T>> {
    check_dims(state, h)?;
    if steps == 0 {
        return Err(Error::Domain("oracle needs at least one slice".into()));
    }
    if t1 < t0 {
        return Err(Error::Domain("integration interval must have t1 ≥ t0".into()));
    }
    let n = h.dim();
    let dt = (t1 - t0) / lit(steps as f64);
    let mut psi = state.amps.clone();
    let mut tmp = vec![C::zero(); n];
    let mut hm = CMatrix::zeros(n);
    let minus_i_dt = C::new(T::zero(), -dt);
    for j in 0..steps {
        let tm = t0 + dt * (lit::<T>(j as f64) + lit(0.5));
        h.eval(tm, &mut hm);
        hm.scale(minus_i_dt).expm().mul_vec_into(&psi, &mut tmp);
        std::mem::swap(&mut psi, &mut tmp);
    }
    Ok(ComplexState {
        basis: state.basis.clone(),
        amps: psi,
    })
}

/// Generator `−i(H0 + diag ω)` of the co-moving frame.
pub(crate) fn frame_generator<T: Real>(frame: &RotatingFrame<T>) -> CMatrix<T> {
    let n = frame.h0.dim();
    let mut a = frame.h0.clone();
    for i in 0..n {
        a[(i, i)] += C::new(frame.rate[i], T::zero());
    }
    a.scale(C::new(T::zero(), -T::one()))
}

/// `ψ(t1) = P(t1) exp(−i(H0 + diag ω)(t1 − t0)) P(t0)† ψ(t0)`.
pub fn evolve_frame<T: Real>(frame: &RotatingFrame<T>, psi: &[C<T>], t0: T, t1: T) -> Vec<C<T>> {
    let p0 = frame.phases_at(t0);
    let p1 = frame.phases_at(t1);
    let inner: Vec<C<T>> = psi.iter().zip(&p0).map(|(&x, &p)| x * p.conj()).collect();
    let u = frame_generator(frame).scale(C::new(t1 - t0, T::zero())).expm();
    u.mul_vec(&inner).into_iter().zip(&p1).map(|(x, &p)| x * p).collect()
}

/// Exact propagation for Hamiltonians with a diagonal rotating frame.
pub fn evolve_exact<T: Real, H: Hamiltonian<T> + ?Sized>(state: &ComplexState<T>, h: &H, t0: T, t1: T) -> Result<ComplexState<T>> {
    check_dims(state, h)?;
    let frame = h
        .frame()
        .ok_or_else(|| Error::Domain("Hamiltonian has no diagonal rotating frame".into()))?;
    Ok(ComplexState {
        basis: state.basis.clone(),
        amps: evolve_frame(&frame, &state.amps, t0, t1),
    })
}

/// Propagates with the chosen solver.
pub fn evolve_with<T: Real, H: Hamiltonian<T> + ?Sized>(
    state: &ComplexState<T>,
    h: &H,
    t0: T,
    t1: T,
    solver: &Solver<T>,
) -> Result<ComplexState<T>> {
    match solver {
        Solver::Adaptive(tol) => evolve(state, h, t0, t1, tol),
        Solver::Exact => evolve_exact(state, h, t0, t1),
        Solver::Oracle { steps } => evolve_oracle(state, h, t0, t1, *steps),
    }
}

/// `∫_{t0}^{t1} Σ_{j∈mask} |ψ_j(t)|² dt` for exact frame evolution, computed
/// in closed form from a block exponential.
pub(crate) fn frame_occupation_integral<T: Real>(frame: &RotatingFrame<T>, psi0: &[C<T>], t0: T, t1: T, mask: &[bool]) -> T {
    let n = frame.h0.dim();
    let b = frame_generator(frame);
    let mut big = CMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = b[(i, j)];
            big[(n + i, n + j)] = b[(i, j)];
        }
        if mask[i] {
            big[(i, n + i)] = C::new(T::one(), T::zero());
        }
    }
    let e = big.scale(C::new(t1 - t0, T::zero())).expm();
    // ∫ e^{B†s} Π e^{Bs} ds = F22† F12
    let f12 = CMatrix::from_fn(n, |i, j| e[(i, n + j)]);
    let f22 = CMatrix::from_fn(n, |i, j| e[(n + i, n + j)]);
    let m = f22.adjoint().matmul(&f12);
    let p0 = frame.phases_at(t0);
    let inner: Vec<C<T>> = psi0.iter().zip(&p0).map(|(&x, &p)| x * p.conj()).collect();
    let mi = m.mul_vec(&inner);
    inner.iter().zip(&mi).map(|(a, b)| (a.conj() * b).re).sum::<T>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{dual_rail, single_rail, DriveHamiltonian};
    use crate::state::LevelBasis;
    use std::f64::consts::{PI, TAU};

    fn ground_dual() -> ComplexState<f64> {
        ComplexState::basis_state(LevelBasis::dual_rail(), "1").unwrap()
    }

    #[test]
    fn pi_pulse_at_rest() {
        let om = TAU * 2.0;
        let h = dual_rail(om, 5.35, 0.0, 0.0);
        let t = PI / (2f64.sqrt() * om);
        let s = evolve(&ground_dual(), &h, 0.0, t, &Tolerance::default()).unwrap();
        assert!(s.population("1").unwrap() < 1e-10);
        let e = evolve_exact(&ground_dual(), &h, 0.0, t).unwrap();
        assert!(e.population("1").unwrap() < 1e-24);
    }

    #[test]
    fn zero_drive_is_identity() {
        let h = dual_rail(0.0, 5.35, 0.0, 0.1);
        let mut s = ground_dual();
        s.amps[0] = C::new(0.6, 0.0);
        s.amps[2] = C::new(0.0, 0.8);
        let out = evolve(&s, &h, 0.0, 3.0, &Tolerance::default()).unwrap();
        assert_eq!(out.amps, s.amps);
    }

    #[test]
    fn two_level_closed_form() {
        let (om, k, z0) = (3.0, 5.0, 0.17);
        let h = single_rail(om, k, z0, 0.0);
        let g = ComplexState::basis_state(LevelBasis::single_rail(), "1").unwrap();
        let th: f64 = k * z0;
        for &t in &[0.1, 0.77, 2.3] {
            let want0 = C::new((om * t / 2.0).cos(), 0.0);
            let want1 = C::new(0.0, -1.0) * C::from_polar(1.0, th) * (om * t / 2.0).sin();
            for s in [
                evolve(&g, &h, 0.0, t, &Tolerance::default()).unwrap(),
                evolve_oracle(&g, &h, 0.0, t, 3).unwrap(),
                evolve_exact(&g, &h, 0.0, t).unwrap(),
            ] {
                assert!((s.amps[0] - want0).norm() < 1e-9);
                assert!((s.amps[1] - want1).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn diagonal_is_exact_for_any_slicing() {
        let b = LevelBasis::gap();
        let h = DriveHamiltonian::<f64>::new(b.clone()).with_diag(vec![0.0, 1.0, -2.5, 40.0]);
        let s = ComplexState::new(b, vec![C::new(0.5, 0.0); 4]).unwrap();
        let t = 0.731;
        let o = evolve_oracle(&s, &h, 0.0, t, 1).unwrap();
        for (i, &d) in [0.0, 1.0, -2.5, 40.0].iter().enumerate() {
            let want = C::new(0.5, 0.0) * C::from_polar(1.0, -d * t);
            assert!((o.amps[i] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn occupation_integral_matches_closed_form() {
        // Resonant π pulse at rest: ∫ sin²(Ω' t/2) dt over [0, π/Ω'] = π/(2Ω').
        let om = TAU * 2.0;
        let h = dual_rail(om, 5.35, 0.0, 0.0);
        let f = h.frame().unwrap();
        let t = PI / (2f64.sqrt() * om);
        let ryd = frame_occupation_integral(&f, &ground_dual().amps, 0.0, t, &[true, true, false]);
        assert!((ryd - t / 2.0).abs() < 1e-13);
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let h = single_rail(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            evolve(&ground_dual(), &h, 0.0, 1.0, &Tolerance::default()),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn reversed_interval_is_rejected() {
        let h = dual_rail(1.0, 1.0, 0.0, 0.0);
        assert!(evolve(&ground_dual(), &h, 1.0, 0.0, &Tolerance::default()).is_err());
        assert!(evolve_oracle(&ground_dual(), &h, 0.0, 1.0, 0).is_err());
    }
}
