//! Sparse integer polynomials in `Z[t_1..t_ℓ]/(t_i^cap)`.

use crate::{LandauError, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_CAP: u32 = 6;

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedMultiPoly {
    nvars: usize,
    cap: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl fmt::Debug for TruncatedMultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    format!("{}", c)
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TruncatedMultiPoly {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        TruncatedMultiPoly { nvars, cap, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, cap: u32, c: BigInt) -> Self {
        let mut p = Self::zero(nvars, cap);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(nvars, cap, BigInt::one())
    }

    /// The variable `t_i` (0-based index).
    pub fn var(nvars: usize, cap: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, cap);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn monomial(nvars: usize, cap: u32, exps: Vec<u32>, c: BigInt) -> Self {
        let mut p = Self::zero(nvars, cap);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Adds `c·t^e`, discarding it if some exponent reaches the cap.
    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() || e.iter().any(|&k| k >= self.cap) {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common total degree, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |a, c| a + c)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.cap != other.cap {
            return Err(LandauError::Dimension(format!(
                "truncated polynomials over ({} vars, cap {}) and ({} vars, cap {})",
                self.nvars, self.cap, other.nvars, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product with every monomial carrying an exponent `>= cap` discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, self.cap);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// Evaluation at integer points, ignoring the truncation.
    pub fn eval(&self, t: &[i64]) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, (e, c)| {
            let mut m = c.clone();
            for (ti, &k) in t.iter().zip(e) {
                m *= BigInt::from(*ti).pow(k);
            }
            acc + m
        })
    }
}

/// `poly_mul_truncated` under its contract name.
pub fn poly_mul_truncated(p: &TruncatedMultiPoly, q: &TruncatedMultiPoly) -> Result<TruncatedMultiPoly> {
    p.mul(q)
}
