mod common;

use landau::scalars::*;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use proptest::prelude::*;

type Q = ExactRational;

fn qpoly(c: &[i64]) -> UnivariatePolynomial<Q> {
    UnivariatePolynomial::new(c.iter().map(|&x| rat_int(x)).collect())
}

#[test]
fn truncated_product_examples() {
    let t1 = TruncatedMultiPoly::var(2, 6, 0);
    let t2 = TruncatedMultiPoly::var(2, 6, 1);
    let t15 = TruncatedMultiPoly::monomial(2, 6, vec![5, 0], BigInt::one());
    assert!(poly_mul_truncated(&t1, &t15).unwrap().is_zero());
    let s = t1.add(&t2).unwrap();
    assert_eq!(poly_mul_truncated(&s, &TruncatedMultiPoly::one(2, 6)).unwrap(), s);
    let four = TruncatedMultiPoly::monomial(2, 6, vec![1, 1], BigInt::from(4));
    let p = poly_mul_truncated(&four, &s).unwrap();
    assert_eq!(p.num_terms(), 2);
    assert_eq!(p.coeff(&[2, 1]), BigInt::from(4));
    assert_eq!(p.coeff(&[1, 2]), BigInt::from(4));
    let other = TruncatedMultiPoly::var(3, 6, 0);
    assert!(matches!(poly_mul_truncated(&t1, &other), Err(landau::LandauError::Dimension(_))));
    assert!(TruncatedMultiPoly::var(2, 3, 0).mul(&t1).is_err());
}

#[test]
fn root_examples() {
    let o = RootOptions::default();
    let r = find_real_and_complex_roots(&[-1.0, 0.0, 1.0], &o).unwrap();
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|x| x.is_real));
    assert!((r[0].value.re + 1.0).abs() < 1e-12 && (r[1].value.re - 1.0).abs() < 1e-12);
    let r = find_real_and_complex_roots(&[1.0, 0.0, 1.0], &o).unwrap();
    assert!(r.iter().all(|x| !x.is_real && (x.value.im.abs() - 1.0).abs() < 1e-12));
    // (x-2)^2 (x-3) = x^3 - 7x^2 + 16x - 12
    let r = find_real_and_complex_roots(&[-12.0, 16.0, -7.0, 1.0], &o).unwrap();
    let twos: Vec<_> = r.iter().filter(|x| (x.value.re - 2.0).abs() < 1e-4).collect();
    assert_eq!(twos.len(), 2);
    assert!(twos.iter().all(|x| x.multiplicity == 2 && x.is_real));
    let three: Vec<_> = r.iter().filter(|x| (x.value.re - 3.0).abs() < 1e-9).collect();
    assert_eq!(three.len(), 1);
    assert!(matches!(
        find_real_and_complex_roots(&[1.0, 1.0, 1e-20], &o),
        Err(landau::LandauError::IllConditioned(_))
    ));
}

#[test]
fn discriminant_examples() {
    // b^2 - 4ac for 2x^2 + 3x + 5
    assert_eq!(univariate_discriminant(&qpoly(&[5, 3, 2])).unwrap(), rat_int(9 - 40));
    // (x-1)^2 (x+5) = x^3 + 3x^2 - 9x + 5
    assert!(univariate_discriminant(&qpoly(&[5, -9, 3, 1])).unwrap().is_zero());
    // The classical value for x^4 + 1 is +256.
    assert_eq!(univariate_discriminant(&qpoly(&[1, 0, 0, 0, 1])).unwrap(), rat_int(256));
    assert!(univariate_discriminant(&UnivariatePolynomial::<Q>::zero()).is_err());
}

#[test]
fn interpolation_examples() {
    let s = vec![(rat_int(0), rat_int(1)), (rat_int(1), rat_int(2)), (rat_int(2), rat_int(5))];
    assert_eq!(interpolate_exact(&s, 2).unwrap(), qpoly(&[1, 0, 1]));
    let c: Vec<_> = (0..4).map(|i| (rat_int(i), rat_int(7))).collect();
    assert_eq!(interpolate_exact(&c, 3).unwrap().degree(), Some(0));
    let p = qpoly(&[3, -1, 4, 1, -5, 9, 2, 6, -5, 3, 5, 8, -9, 7, 9, 3, 2]);
    assert_eq!(p.degree(), Some(16));
    let xs: Vec<_> = (0..20).map(|i| (rat(i, 3), p.eval(&rat(i, 3)))).collect();
    assert_eq!(interpolate_exact(&xs[..17], 16).unwrap(), p);
    assert_eq!(interpolate_exact(&xs, 16).unwrap(), p);
    let mut bad = xs.clone();
    bad[19].1 = bad[19].1.clone() + rat_int(1);
    assert!(matches!(interpolate_exact(&bad, 16), Err(landau::LandauError::Consistency { .. })));
    let dup = vec![(rat_int(1), rat_int(1)), (rat_int(1), rat_int(2))];
    assert!(matches!(interpolate_exact(&dup, 1), Err(landau::LandauError::Domain(_))));
}

#[test]
fn quadratic_extension_refuses_mixed_radicands() {
    let a = QuadExt::sqrt_of(&rat_int(2));
    let b = QuadExt::sqrt_of(&rat_int(3));
    assert!(a.try_add(&b).is_err());
    assert!(a.try_mul(&b).is_err());
    assert_eq!(a.clone() * a.clone(), QuadExt::rational(rat_int(2)));
    assert!(QuadExt::sqrt_of(&rat_int(4)).is_rational());
    let x = QuadExt::new(rat_int(1), rat_int(1), &rat_int(-1));
    assert!((x.to_c64() - Complex64::new(1.0, 1.0)).norm() < 1e-15);
}

#[test]
fn resultant_of_linear_factors() {
    let p = UnivariatePolynomial::from_roots(&[rat_int(2)]);
    let q = UnivariatePolynomial::from_roots(&[rat_int(5)]);
    assert_eq!(p.resultant(&q), rat_int(-3));
}

fn arb_q() -> impl Strategy<Value = Q> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
    (arb_q(), arb_q()).prop_map(|(a, b)| Complex::new(a, b))
}

fn arb_quad() -> impl Strategy<Value = QuadExt> {
    (arb_q(), arb_q()).prop_map(|(a, b)| QuadExt::new(a, b, &rat_int(7)))
}

fn field_laws<F: Field>(a: F, b: F, c: F) -> Result<(), TestCaseError> {
    prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
    prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
    prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    if !a.is_zero() {
        prop_assert_eq!(a.clone() * (F::one() / a.clone()), F::one());
    }
    prop_assert_eq!(a.clone() - a, F::zero());
    Ok(())
}

fn arb_sparse() -> impl Strategy<Value = TruncatedMultiPoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..5, 3), -5i64..=5), 0..6).prop_map(|ts| {
        let mut p = TruncatedMultiPoly::zero(3, 6);
        for (e, c) in ts {
            p.add_term(e, BigInt::from(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rational_field_laws(a in arb_q(), b in arb_q(), c in arb_q()) {
        field_laws(a, b, c)?;
    }

    #[test]
    fn gaussian_field_laws(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
        prop_assert_eq!(gaussian_conj(&gaussian_conj(&a)), a.clone());
        field_laws(a, b, c)?;
    }

    #[test]
    fn quadratic_field_laws(a in arb_quad(), b in arb_quad(), c in arb_quad()) {
        field_laws(a, b, c)?;
    }

    #[test]
    fn quadratic_norm(a in arb_q(), b in arb_q(), d in (2i64..50).prop_filter("non-square", |d| rational_sqrt(&rat_int(*d)).is_none())) {
        let x = QuadExt::new(a.clone(), b.clone(), &rat_int(d));
        let n = x.clone() * x.conj();
        prop_assert!(n.is_rational());
        prop_assert_eq!(n.a, a.clone() * a - b.clone() * b * rat_int(d));
    }

    #[test]
    fn truncation_matches_full_product(p in arb_sparse(), q in arb_sparse()) {
        let big_p = {
            let mut x = TruncatedMultiPoly::zero(3, 20);
            for (e, c) in p.terms() { x.add_term(e.clone(), c.clone()); }
            x
        };
        let big_q = {
            let mut x = TruncatedMultiPoly::zero(3, 20);
            for (e, c) in q.terms() { x.add_term(e.clone(), c.clone()); }
            x
        };
        let full = big_p.mul(&big_q).unwrap();
        let mut trunc = TruncatedMultiPoly::zero(3, 6);
        for (e, c) in full.terms() { trunc.add_term(e.clone(), c.clone()); }
        prop_assert_eq!(poly_mul_truncated(&p, &q).unwrap(), trunc);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planted_roots_recovered(roots in proptest::collection::vec(-3.0f64..3.0, 1..=20)) {
        let mut rs = roots.clone();
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // keep planted roots separated so each is well conditioned
        rs.dedup_by(|a, b| (*a - *b).abs() < 0.25);
        let p = UnivariatePolynomial::from_roots(&rs.iter().map(|&r| Complex64::new(r, 0.0)).collect::<Vec<_>>());
        let found = find_roots(p.coeffs(), &RootOptions::default()).unwrap();
        prop_assert_eq!(found.len(), rs.len());
        for r in &rs {
            let best = found.iter().map(|f| (f.value - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-8, "planted {} missed by {}", r, best);
        }
    }
}
