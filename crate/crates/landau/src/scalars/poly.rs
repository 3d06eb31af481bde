//! Dense univariate polynomials, coefficients stored low-to-high.

use super::field::Field;
use super::linalg::{det, Matrix};
use crate::{LandauError, Result};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePolynomial<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> UnivariatePolynomial<F> {
    /// Builds from low-to-high coefficients, stripping trailing exact zeros.
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear factor `x − r`.
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Self::constant(F::one()), |acc, r| acc * Self::linear_root(r.clone()))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UnivariatePolynomial<G> {
        UnivariatePolynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Sylvester matrix of `self` (degree m) and `other` (degree n), size m+n.
    pub fn sylvester(&self, other: &Self) -> Matrix<F> {
        let m = self.degree().unwrap_or(0);
        let n = other.degree().unwrap_or(0);
        let size = m + n;
        let mut s = vec![vec![F::zero(); size]; size];
        for i in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                s[n + i][i + k] = c.clone();
            }
        }
        s
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &Self) -> F {
        if self.is_zero() || other.is_zero() {
            return F::zero();
        }
        if self.degree() == Some(0) && other.degree() == Some(0) {
            return F::one();
        }
        det(&self.sylvester(other))
    }

    /// `(−1)^{d(d−1)/2} Res(p, p′) / lc(p)`.
    pub fn discriminant(&self) -> Result<F> {
        let d = match self.degree() {
            None => return Err(LandauError::Domain("discriminant of the zero polynomial".into())),
            Some(d) => d,
        };
        if d < 2 {
            return Err(LandauError::Domain(format!("discriminant needs degree >= 2, got {}", d)));
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        Ok(if (d * (d - 1) / 2) % 2 == 1 { -r } else { r })
    }

    /// Quotient and remainder of division by `d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); rem.len() - dd];
        let lc = d.leading();
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }
}

impl<F: Field> Add for UnivariatePolynomial<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Field> Sub for UnivariatePolynomial<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Field> Neg for UnivariatePolynomial<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field> Mul for UnivariatePolynomial<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

/// Exact interpolation through `samples` with degree at most `d`.
///
/// Extra samples beyond `d + 1` are used as a consistency check; on failure the
/// largest deviation is reported.
pub fn interpolate_exact<F: Field>(samples: &[(F, F)], d: usize) -> Result<UnivariatePolynomial<F>> {
    if samples.len() < d + 1 {
        return Err(LandauError::Domain(format!(
            "need at least {} samples for degree {}, got {}",
            d + 1,
            d,
            samples.len()
        )));
    }
    for i in 0..samples.len() {
        for j in 0..i {
            let diff = samples[i].0.clone() - samples[j].0.clone();
            if diff.is_zero() {
                return Err(LandauError::Domain("duplicate sample abscissae".into()));
            }
        }
    }
    let base = &samples[..d + 1];
    // Newton divided differences.
    let xs: Vec<F> = base.iter().map(|s| s.0.clone()).collect();
    let mut dd: Vec<F> = base.iter().map(|s| s.1.clone()).collect();
    for lvl in 1..=d {
        for i in (lvl..=d).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - lvl].clone());
        }
    }
    let mut p = UnivariatePolynomial::constant(dd[d].clone());
    for i in (0..d).rev() {
        p = p * UnivariatePolynomial::linear_root(xs[i].clone()) + UnivariatePolynomial::constant(dd[i].clone());
    }
    let mut worst = 0.0f64;
    let mut bad = false;
    for (x, y) in &samples[d + 1..] {
        let r = p.eval(x) - y.clone();
        if F::is_exact() {
            if !r.is_zero() {
                bad = true;
                worst = worst.max(r.magnitude());
            }
        } else {
            let scale = 1.0 + y.magnitude();
            if r.magnitude() > 1e-8 * scale {
                bad = true;
                worst = worst.max(r.magnitude());
            }
        }
    }
    if bad {
        return Err(LandauError::Consistency { max_deviation: worst });
    }
    Ok(p)
}
