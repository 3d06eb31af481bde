//! The scalar field abstraction shared by the exact and floating-point code paths.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational; `num-rational` keeps it reduced with a positive denominator.
pub type ExactRational = BigRational;

/// Gaussian rationals `re + i im`.
pub type GaussianRational = Complex<BigRational>;

/// A commutative field as used by the geometry and polynomial layers.
///
/// Exact fields compare with `==`; floating fields are compared by callers with tolerances.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Size used for pivot selection. Must be zero exactly when `is_zero` holds for exact fields.
    fn magnitude(&self) -> f64;
    /// True for fields where `==` is exact equality.
    fn is_exact() -> bool;
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite double into a rational.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

impl Field for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
}

impl Field for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_exact() -> bool {
        false
    }
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            rational_to_f64(&self.abs()).max(f64::MIN_POSITIVE)
        }
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for GaussianRational {
    fn from_i64(n: i64) -> Self {
        Complex::new(rat_int(n), BigRational::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            let r = rational_to_f64(&self.re);
            let i = rational_to_f64(&self.im);
            r.hypot(i).max(f64::MIN_POSITIVE)
        }
    }
    fn is_exact() -> bool {
        true
    }
}

/// Complex conjugation on Gaussian rationals.
pub fn gaussian_conj(z: &GaussianRational) -> GaussianRational {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// Lift to complex doubles.
pub trait ToComplex {
    fn to_c64(&self) -> Complex64;
}

impl ToComplex for f64 {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}
impl ToComplex for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
}
impl ToComplex for BigRational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}
impl ToComplex for GaussianRational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}
