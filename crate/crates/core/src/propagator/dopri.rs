//! Dormand–Prince 5(4) on `dψ/dt = −i H(t) ψ` with cubic Hermite dense output.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::scalar::{lit, to_f64, Real, C};

/// Error-control settings for the adaptive stepper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
    /// Smallest step accepted before giving up, µs.
    pub h_min: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rtol: lit(1e-11),
            atol: lit(1e-13),
            h_min: lit(1e-14),
            max_steps: 5_000_000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn with_rtol(rtol: T) -> Self {
        Self {
            rtol,
            atol: rtol * lit(1e-2),
            ..Self::default()
        }
    }
}

/// An accepted step, enough to interpolate anywhere inside it.
pub struct Step<'a, T: Real> {
    pub t0: T,
    pub t1: T,
    pub y0: &'a [C<T>],
    pub y1: &'a [C<T>],
    pub f0: &'a [C<T>],
    pub f1: &'a [C<T>],
}

impl<T: Real> Step<'_, T> {
    /// Cubic Hermite interpolant at `t ∈ [t0, t1]`.
    pub fn interpolate(&self, t: T, out: &mut [C<T>]) {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let one = T::one();
        let two: T = lit(2.0);
        for (i, o) in out.iter_mut().enumerate() {
            let dy = self.y1[i] - self.y0[i];
            let bracket = dy * (one - two * th) + self.f0[i] * ((th - one) * h) + self.f1[i] * (th * h);
            *o = self.y0[i] * (one - th) + self.y1[i] * th + bracket * (th * (th - one));
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[inline]
fn rhs<T: Real, H: Hamiltonian<T> + ?Sized>(h: &H, t: T, y: &[C<T>], out: &mut [C<T>]) {
    h.apply(t, y, out);
    for z in out.iter_mut() {
        // −i·z
        *z = C::new(z.im, -z.re);
    }
}

/// Integrates `psi` in place from `t0` to `t1`, calling `observe` on every
/// accepted step.
pub fn integrate<T: Real, H: Hamiltonian<T> + ?Sized>(
    h: &H,
    psi: &mut [C<T>],
    t0: T,
    t1: T,
    tol: &Tolerance<T>,
    observe: &mut dyn FnMut(&Step<'_, T>),
) -> Result<StepStats> {
    let n = psi.len();
    let mut stats = StepStats::default();
    if t1 == t0 {
        return Ok(stats);
    }
    if t1 < t0 {
        return Err(Error::Domain("integration interval must have t1 ≥ t0".into()));
    }

    let c2: T = lit(1.0 / 5.0);
    let c3: T = lit(3.0 / 10.0);
    let c4: T = lit(4.0 / 5.0);
    let c5: T = lit(8.0 / 9.0);
    let a21: T = lit(1.0 / 5.0);
    let (a31, a32): (T, T) = (lit(3.0 / 40.0), lit(9.0 / 40.0));
    let (a41, a42, a43): (T, T, T) = (lit(44.0 / 45.0), lit(-56.0 / 15.0), lit(32.0 / 9.0));
    let (a51, a52, a53, a54): (T, T, T, T) = (
        lit(19372.0 / 6561.0),
        lit(-25360.0 / 2187.0),
        lit(64448.0 / 6561.0),
        lit(-212.0 / 729.0),
    );
    let (a61, a62, a63, a64, a65): (T, T, T, T, T) = (
        lit(9017.0 / 3168.0),
        lit(-355.0 / 33.0),
        lit(46732.0 / 5247.0),
        lit(49.0 / 176.0),
        lit(-5103.0 / 18656.0),
    );
    let (b1, b3, b4, b5, b6): (T, T, T, T, T) = (
        lit(35.0 / 384.0),
        lit(500.0 / 1113.0),
        lit(125.0 / 192.0),
        lit(-2187.0 / 6784.0),
        lit(11.0 / 84.0),
    );
    // b5 − b4 (embedded)
    let (e1, e3, e4, e5, e6, e7): (T, T, T, T, T, T) = (
        lit(35.0 / 384.0 - 5179.0 / 57600.0),
        lit(500.0 / 1113.0 - 7571.0 / 16695.0),
        lit(125.0 / 192.0 - 393.0 / 640.0),
        lit(-2187.0 / 6784.0 + 92097.0 / 339200.0),
        lit(11.0 / 84.0 - 187.0 / 2100.0),
        lit(-1.0 / 40.0),
    );

    let zero = C::<T>::zero();
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut ytmp = vec![zero; n];
    let mut ynew = vec![zero; n];

    let mut t = t0;
    rhs(h, t, psi, &mut k1);

    // Initial step from the derivative scale.
    let fnorm = k1.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let span = t1 - t0;
    let mut step = if fnorm > T::zero() {
        (tol.rtol.powf(lit(0.2)) / fnorm * lit(0.5)).min(span)
    } else {
        span
    };

    let safety: T = lit(0.9);
    let fac_min: T = lit(0.2);
    let fac_max: T = lit(5.0);
    let mut last_rejected = false;

    while t < t1 {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Err(Error::Integration {
                t: to_f64(t),
                step: to_f64(step),
                reason: format!("exceeded {} steps", tol.max_steps),
            });
        }
        let mut hstep = step;
        let last = t + hstep >= t1 || (t1 - (t + hstep)) < hstep * lit(1e-6);
        if last {
            hstep = t1 - t;
        }

        macro_rules! stage {
            ($dst:ident, $c:expr, $($a:expr, $k:ident),+) => {{
                for i in 0..n {
                    let mut acc = zero;
                    $( acc += $k[i] * $a; )+
                    ytmp[i] = psi[i] + acc * hstep;
                }
                rhs(h, t + $c * hstep, &ytmp, &mut $dst);
            }};
        }
        stage!(k2, c2, a21, k1);
        stage!(k3, c3, a31, k1, a32, k2);
        stage!(k4, c4, a41, k1, a42, k2, a43, k3);
        stage!(k5, c5, a51, k1, a52, k2, a53, k3, a54, k4);
        stage!(k6, T::one(), a61, k1, a62, k2, a63, k3, a64, k4, a65, k5);
        for i in 0..n {
            let acc = k1[i] * b1 + k3[i] * b3 + k4[i] * b4 + k5[i] * b5 + k6[i] * b6;
            ynew[i] = psi[i] + acc * hstep;
        }
        let tnew = if last { t1 } else { t + hstep };
        rhs(h, tnew, &ynew, &mut k7);

        let mut err2 = T::zero();
        for i in 0..n {
            let e = (k1[i] * e1 + k3[i] * e3 + k4[i] * e4 + k5[i] * e5 + k6[i] * e6 + k7[i] * e7) * hstep;
            let sc = tol.atol + tol.rtol * psi[i].norm().max(ynew[i].norm());
            let r = e.norm() / sc;
            err2 += r * r;
        }
        let err = (err2 / lit(n as f64)).sqrt();

        if err <= T::one() {
            stats.accepted += 1;
            observe(&Step {
                t0: t,
                t1: tnew,
                y0: psi,
                y1: &ynew,
                f0: &k1,
                f1: &k7,
            });
            psi.copy_from_slice(&ynew);
            std::mem::swap(&mut k1, &mut k7);
            t = tnew;
            let mut fac = if err > T::zero() { safety * err.powf(lit(-0.2)) } else { fac_max };
            fac = fac.min(fac_max).max(fac_min);
            if last_rejected {
                fac = fac.min(T::one());
            }
            last_rejected = false;
            if !last {
                step = hstep * fac;
            }
        } else {
            stats.rejected += 1;
            last_rejected = true;
            let fac = (safety * err.powf(lit(-0.2))).max(fac_min);
            step = hstep * fac;
            if step < tol.h_min {
                return Err(Error::Integration {
                    t: to_f64(t),
                    step: to_f64(step),
                    reason: format!("step size underflow (error ratio {:e})", to_f64(err)),
                });
            }
        }
    }
    Ok(stats)
}
