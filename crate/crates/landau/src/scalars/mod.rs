//! Fields, polynomials and root finding.

pub mod field;
pub mod linalg;
pub mod multipoly;
pub mod poly;
pub mod quadratic;
pub mod roots;

pub use field::{gaussian_conj, rat, rat_int, rational_from_f64, rational_to_f64, ExactRational, Field, GaussianRational, ToComplex};
pub use multipoly::{poly_mul_truncated, TruncatedMultiPoly, DEFAULT_CAP};
pub use poly::{interpolate_exact, UnivariatePolynomial};
pub use quadratic::{rational_sqrt, QuadExt};
pub use roots::{find_real_and_complex_roots, find_roots, Root, RootOptions};

/// Discriminant of a univariate polynomial under its contract name.
pub fn univariate_discriminant<F: Field>(p: &UnivariatePolynomial<F>) -> crate::Result<F> {
    p.discriminant()
}
