//! Scalar abstraction for the linear-algebra kernels.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, NumAssign, Signed};

/// Field of scalars the kernels compute over.
///
/// Everything downstream assumes exact field arithmetic: equality tests are
/// literal (`is_zero`), elimination divides by any nonzero pivot.  The
/// canonical instantiation is [`num_rational::BigRational`]; `f32`/`f64`
/// satisfy the bounds as well for callers who accept rounding.
pub trait Scalar: NumAssign + Signed + FromPrimitive + Clone + Debug + Display + 'static {
    /// Embeds a small integer.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer embeds into scalar")
    }

    /// Multiplicative inverse; panics on zero (callers check first).
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Scalar for T where T: NumAssign + Signed + FromPrimitive + Clone + Debug + Display + 'static {}

/// `(-1)^n` as a scalar.
pub fn sign<T: Scalar>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
