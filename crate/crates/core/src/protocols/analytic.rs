use crate::scalar::{lit, Real, C};

/// Amplitudes `w1`, `w2` on `r1`, `r2` for the four-field drive, valid for
/// `kv ≪ Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticAmplitudes<T> {
    pub w1: C<T>,
    pub w2: C<T>,
    /// False when `|kv|/Ω > 0.1`, where the closed form is no longer reliable.
    pub within_validity: bool,
}

/// `w_α(t) = i^{2−α} Ω Σ_{η=±} [f_α(kz0) − f_α(kz0 + (kv + ηΩ)t)] / (2(kv + ηΩ))`
/// with `(f1, f2) = (sin, cos)`.
pub fn analytic_w<T: Real>(t: T, omega: T, k: T, z0: T, v: T) -> AnalyticAmplitudes<T> {
    let kv = k * v;
    let kz = k * z0;
    let two: T = lit(2.0);
    let mut s1 = T::zero();
    let mut s2 = T::zero();
    for eta in [T::one(), -T::one()] {
        let den = two * (kv + eta * omega);
        let arg = kz + (kv + eta * omega) * t;
        s1 += (kz.sin() - arg.sin()) / den;
        s2 += (kz.cos() - arg.cos()) / den;
    }
    AnalyticAmplitudes {
        w1: C::new(T::zero(), omega * s1),
        w2: C::new(omega * s2, T::zero()),
        within_validity: kv.abs() <= omega * lit(0.1),
    }
}
