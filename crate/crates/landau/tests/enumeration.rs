use landau::diagram::families::*;
use landau::diagram::InternalGraph;
use landau::enumeration::*;
use landau::LandauError;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

fn b(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn multidegree_examples() {
    let k3 = multidegree_complete_intersection(&complete(3)).unwrap();
    assert_eq!(k3.gamma(&[3, 3, 3]), BigInt::from(16));
    assert_eq!(k3.dim(), 9);
    let k2 = multidegree_complete_intersection(&path(2)).unwrap();
    assert_eq!(k2.poly.num_terms(), 2);
    assert_eq!(k2.gamma(&[4, 3]), BigInt::from(4));
    assert_eq!(k2.gamma(&[3, 4]), BigInt::from(4));
    let p5 = multidegree_complete_intersection(&triangulated_pentagon()).unwrap();
    assert_eq!(p5.poly.num_terms(), 82);
    assert_eq!(p5.poly.homogeneous_degree(), Some(12));
    assert_eq!(p5.poly.coefficient_sum(), BigInt::from(4096));
    let k4 = complete(4);
    assert!(matches!(multidegree_complete_intersection(&k4), Err(LandauError::Unsupported(_))));
}

#[test]
fn ls_degree_examples() {
    assert_eq!(ls_degree(&cycle(5), &[3, 3, 3, 3, 3]).unwrap(), BigInt::from(64));
    assert_eq!(multidegree_complete_intersection(&cycle(5)).unwrap().poly.num_terms(), 31);
    assert_eq!(ls_degree(&fibonacci(6), &[3, 3, 2, 3, 2, 2]).unwrap(), BigInt::from(512));
    assert_eq!(ls_degree(&path(2), &[5, 2]).unwrap(), BigInt::from(0));
    assert!(matches!(ls_degree(&path(2), &[4, 4]), Err(LandauError::Dimension(_))));
    assert_eq!(ls_degree(&cycle(5), &[2, 3, 3, 3, 4]).unwrap(), BigInt::from(32));
}

#[test]
fn sls_examples() {
    assert_eq!(sls_degree_vector(&single(), &[5]).unwrap(), b(&[2]));
    assert_eq!(sls_degree_vector(&path(2), &[4, 4]).unwrap(), b(&[4, 4]));
    let v = sls_degree_vector(&complete(3), &[4, 3, 3]).unwrap();
    assert_eq!(v, b(&[16, 8, 8]));
    assert_eq!(per_line_degrees(&[4, 3, 3], &v), b(&[16, 16, 16, 16, 8, 8, 8, 8, 8, 8]));
    assert!(sls_degree_vector(&path(2), &[4, 3]).is_err());
}

#[test]
fn pentagon_components_add_up() {
    let g = triangulated_pentagon();
    let rows = pentagon_component_rows();
    let us = [[2, 3, 3, 3, 3], [3, 2, 3, 3, 3], [3, 3, 2, 3, 3], [3, 3, 3, 2, 3], [3, 3, 3, 3, 2]];
    // the column recorded in prose
    let col: Vec<u32> = (0..5).map(|i| 2 * rows.iter().map(|r| r.sls_degrees[2][i]).sum::<u32>()).collect();
    assert_eq!(col, vec![160, 64, 64, 128, 96]);
    for (k, u) in us.iter().enumerate() {
        let full = sls_degree_vector(&g, u).unwrap();
        let sum: Vec<i64> = (0..5).map(|i| 2 * rows.iter().map(|r| r.sls_degrees[k][i] as i64).sum::<i64>()).collect();
        assert_eq!(full, b(&sum), "column u = {:?}", u);
    }
}

#[test]
fn k3_components_share_multidegree() {
    let c = k3_component_multidegree();
    let full = multidegree_complete_intersection(&complete(3)).unwrap();
    assert_eq!(c.poly.add(&c.poly).unwrap(), full.poly);
    assert_eq!(c.gamma(&[3, 3, 3]), BigInt::from(8));
}

#[test]
fn expected_degree_examples() {
    let t = GenusTable::builtin();
    assert_eq!(expected_disc_degree(&path(2), &[4, 3], &t).unwrap(), vec![8, 4]);
    assert_eq!(expected_disc_degree(&cycle(5), &[3, 3, 3, 3, 3], &t).unwrap(), vec![256; 5]);
    assert_eq!(expected_disc_degree(&cycle(5), &[2, 3, 3, 3, 4], &t).unwrap(), vec![32, 64, 96, 128, 192]);
    match expected_disc_degree(&path(3), &[4, 4, 2], &t) {
        Err(LandauError::MissingGenus(v)) => assert_eq!(v.iter().sum::<u32>(), 9),
        other => panic!("{:?}", other),
    }
}

#[test]
fn literal_formula_is_experimental() {
    // the literal reading gives a negative first entry for K₂, not (8, 4)
    let v = expected_disc_degree_literal(&path(2), &[4, 3]).unwrap();
    assert_ne!(v, vec![8, 4]);
}

#[test]
fn total_degree_is_power_of_two() {
    for g in [complete(3), path(4), cycle(5), triangulated_pentagon(), fibonacci(6)] {
        let m = multidegree_complete_intersection(&g).unwrap();
        let total: BigInt = m.poly.eval(&vec![1; g.ell()]);
        assert_eq!(total, BigInt::from(1u64 << (g.ell() + g.num_edges())), "{:?}", g);
    }
}

#[test]
fn trees_have_gamma_two_to_ell() {
    for n in 1..=5 {
        for t in all_trees(n) {
            let m = multidegree_complete_intersection(&t).unwrap();
            for (u, c) in m.table() {
                assert_eq!(u.iter().sum::<u32>(), m.dim());
                assert_eq!(c, BigInt::from(1u64 << n), "tree {:?} u {:?}", t, u);
            }
        }
    }
}

#[test]
fn gamma_symmetric_under_automorphisms() {
    let c5 = cycle(5);
    let m = multidegree_complete_intersection(&c5).unwrap();
    for (u, c) in m.table() {
        let rot: Vec<u32> = (0..5).map(|i| u[(i + 1) % 5]).collect();
        let refl: Vec<u32> = (0..5).map(|i| u[(5 - i) % 5]).collect();
        assert_eq!(m.gamma(&rot), c);
        assert_eq!(m.gamma(&refl), c);
    }
}

#[test]
fn fibonacci_law() {
    // γ(T_ℓ) / 2^ℓ against Fibonacci numbers with F₀ = 0, F₁ = 1
    let fib = |n: usize| -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            let c = a + b;
            a = b;
            b = c;
        }
        a
    };
    for ell in 3..=9 {
        let g: InternalGraph = fibonacci(ell);
        let gamma = ls_degree(&g, &fibonacci_u(ell)).unwrap().to_u64().unwrap();
        assert_eq!(gamma, (1u64 << ell) * fib(ell), "ℓ = {}", ell);
    }
}
