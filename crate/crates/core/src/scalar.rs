//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the simulator is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Default + Debug + Display + LowerExp + Sum + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a `T` back to `f64` for reporting and serialization.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Wraps an angle onto the branch (−π, π].
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut x = phi % two_pi;
    if x > pi {
        x -= two_pi;
    }
    if x <= -pi {
        x += two_pi;
    }
    x
}

/// Argument of a complex number on the branch (−π, π].
#[inline]
pub fn arg<T: Real>(z: C<T>) -> T {
    wrap_phase(z.im.atan2(z.re))
}
