//! Elements `a + b·√Δ` of a quadratic extension of the rationals.
//!
//! The radicand is carried by each element. Elements with `b = 0` are plain
//! rationals and combine with any radicand; two genuinely irrational elements
//! over different radicands are refused.

use super::field::{rational_to_f64, Field};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Clone, PartialEq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
    radicand: Option<Arc<BigRational>>,
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            Some(d) if !self.b.is_zero() => write!(f, "({} + {}*sqrt({}))", self.a, self.b, d),
            _ => write!(f, "{}", self.a),
        }
    }
}

/// Rational square root, if one exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl QuadExt {
    pub fn rational(a: BigRational) -> Self {
        QuadExt { a, b: BigRational::zero(), radicand: None }
    }

    /// `a + b√Δ`. A perfect-square radicand collapses to a rational.
    pub fn new(a: BigRational, b: BigRational, radicand: &BigRational) -> Self {
        if b.is_zero() {
            return QuadExt::rational(a);
        }
        if let Some(r) = rational_sqrt(radicand) {
            return QuadExt::rational(a + b * r);
        }
        QuadExt { a, b, radicand: Some(Arc::new(radicand.clone())) }
    }

    /// The element `√Δ` itself.
    pub fn sqrt_of(radicand: &BigRational) -> Self {
        QuadExt::new(BigRational::zero(), BigRational::one(), radicand)
    }

    pub fn radicand(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            None
        } else {
            self.radicand.as_deref()
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `a − b√Δ`.
    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), radicand: self.radicand.clone() }
    }

    /// `a² − b²Δ`.
    pub fn norm(&self) -> BigRational {
        match self.radicand() {
            None => self.a.clone() * self.a.clone(),
            Some(d) => self.a.clone() * self.a.clone() - self.b.clone() * self.b.clone() * d.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.radicand() {
            None => rational_to_f64(&self.a),
            Some(d) => {
                let df = rational_to_f64(d);
                rational_to_f64(&self.a) + rational_to_f64(&self.b) * df.max(0.0).sqrt()
            }
        }
    }

    /// Combined radicand, refusing two distinct irrational radicands.
    pub fn try_common(&self, other: &Self) -> Result<Option<Arc<BigRational>>, crate::LandauError> {
        match (self.radicand(), other.radicand()) {
            (None, None) => Ok(None),
            (Some(_), None) => Ok(self.radicand.clone()),
            (None, Some(_)) => Ok(other.radicand.clone()),
            (Some(x), Some(y)) => {
                if x == y {
                    Ok(self.radicand.clone())
                } else {
                    Err(crate::LandauError::Domain(format!(
                        "mixed radicands {} and {} in quadratic extension arithmetic",
                        x, y
                    )))
                }
            }
        }
    }

    fn common(&self, other: &Self) -> Option<Arc<BigRational>> {
        self.try_common(other).unwrap_or_else(|e| panic!("{}", e))
    }

    fn build(a: BigRational, b: BigRational, radicand: Option<Arc<BigRational>>) -> Self {
        if b.is_zero() {
            QuadExt::rational(a)
        } else {
            QuadExt { a, b, radicand }
        }
    }

    pub fn try_mul(&self, other: &Self) -> crate::Result<Self> {
        let r = self.try_common(other)?;
        Ok(self.mul_with(other, r))
    }

    pub fn try_add(&self, other: &Self) -> crate::Result<Self> {
        let r = self.try_common(other)?;
        Ok(QuadExt::build(self.a.clone() + other.a.clone(), self.b.clone() + other.b.clone(), r))
    }

    fn mul_with(&self, other: &Self, r: Option<Arc<BigRational>>) -> Self {
        match &r {
            None => QuadExt::rational(self.a.clone() * other.a.clone()),
            Some(d) => {
                let a = self.a.clone() * other.a.clone() + self.b.clone() * other.b.clone() * (**d).clone();
                let b = self.a.clone() * other.b.clone() + self.b.clone() * other.a.clone();
                QuadExt::build(a, b, r)
            }
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        let r = self.common(&o);
        QuadExt::build(self.a + o.a, self.b + o.b, r)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        let r = self.common(&o);
        QuadExt::build(self.a - o.a, self.b - o.b, r)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        let r = self.common(&o);
        self.mul_with(&o, r)
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, o: QuadExt) -> QuadExt {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in quadratic extension");
        let inv = QuadExt::build(o.a.clone() / n.clone(), -o.b.clone() / n, o.radicand.clone());
        self * inv
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, radicand: self.radicand }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(BigRational::one())
    }
}

impl Field for QuadExt {
    fn from_i64(n: i64) -> Self {
        QuadExt::rational(BigRational::from_integer(n.into()))
    }
    fn from_rational(q: &BigRational) -> Self {
        QuadExt::rational(q.clone())
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_f64().abs().max(f64::MIN_POSITIVE)
        }
    }
    fn is_exact() -> bool {
        true
    }
}

impl super::field::ToComplex for QuadExt {
    fn to_c64(&self) -> num_complex::Complex64 {
        let a = rational_to_f64(&self.a);
        match self.radicand() {
            None => num_complex::Complex64::new(a, 0.0),
            Some(d) => {
                let b = rational_to_f64(&self.b);
                let s = num_complex::Complex64::new(rational_to_f64(d), 0.0).sqrt();
                num_complex::Complex64::new(a, 0.0) + s * b
            }
        }
    }
}
