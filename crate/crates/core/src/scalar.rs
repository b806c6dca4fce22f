//! Scalar abstraction: every numerical routine in this crate is generic over
//! the real floating-point type through [`Real`].

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Real scalar type: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for a lossless-enough conversion from f64 literals.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal not representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate's real scalar.
pub type C<T> = Complex<T>;

/// `0 + 0i`.
pub fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

/// `1 + 0i`.
pub fn cone<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

/// `0 + 1i`.
pub fn ci<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// Real constant lifted to the complex plane.
pub fn cre<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// `exp(i phi)`.
pub fn cis<T: Real>(phi: T) -> C<T> {
    C::new(phi.cos(), phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cis_is_unit_modulus() {
        let z = cis(0.7f64);
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z.re - 0.7f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn works_for_f32_too() {
        let z: C<f32> = cis(0.5f32) * cre(2.0f32);
        assert!((z.norm() - 2.0).abs() < 1e-6);
    }
}
