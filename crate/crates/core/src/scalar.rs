//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point type the engine is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a literal constant. Panics only if the target type cannot
    /// represent it, which never happens for the constants used here.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in target float")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for a literal in the generic scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Reduces an angle to the principal interval (-pi, pi].
pub fn wrap_phase<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * ((x + T::PI()) / two_pi).floor();
    // y is now in [-pi, pi); move the left boundary to +pi
    if y <= -T::PI() {
        y = y + two_pi;
    }
    if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Shifts `x` by a multiple of 2pi so that it lies as close as possible to `reference`.
pub fn lift_near<T: Real>(x: T, reference: T) -> T {
    reference + wrap_phase(x - reference)
}

/// Principal argument in (-pi, pi].
#[inline]
pub fn arg<T: Real>(z: Complex<T>) -> T {
    wrap_phase(z.arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_maps_minus_pi_to_pi() {
        assert_eq!(wrap_phase(-PI), PI);
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_phase(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lift_picks_nearest_image() {
        let x = lift_near(0.1, 6.2);
        assert!((x - (0.1 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn arg_of_negative_real_is_pi() {
        assert_eq!(arg(Complex::new(-1.0f64, -0.0)), PI);
    }
}
