mod common;

use common::*;
use landau::diagram::{build_h_triangle, families, InternalGraph, LandauDiagram};
use landau::discriminant::{ls_disc_box, sls_res_penta};
use landau::geometry::{bracket, join_points, Line, Point};
use landau::positivity::*;
use landau::scalars::{rat, ExactRational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn vandermonde(ts: &[i64]) -> Vec<Point<ExactRational>> {
    ts.iter()
        .map(|&t| {
            let t = rat(t, 1);
            Point::new([rat(1, 1), t.clone(), t.clone() * t.clone(), t.clone() * t.clone() * t])
        })
        .collect()
}

fn pairs<F: landau::scalars::Field>(cols: &[Point<F>], k: usize) -> Vec<Line<F>> {
    (0..k).map(|i| join_points(&cols[2 * i], &cols[2 * i + 1])).collect()
}

#[test]
fn minor_is_the_bracket() {
    let mut r = rng(1);
    for _ in 0..20 {
        let p: Vec<Point<ExactRational>> = (0..4).map(|_| rand_point(&mut r)).collect();
        assert_eq!(minor(&p, [0, 1, 2, 3]), bracket(&p[0], &p[1], &p[2], &p[3]));
    }
}

#[test]
fn explicit_z10_at_unit_parameters() {
    let one = rat(1, 1);
    let z = explicit_z10(&std::array::from_fn(|_| one.clone()));
    let rep = minor_report(&z);
    assert_eq!(rep.checked, 210);
    assert!(rep.totally_positive, "{:?}", rep.nonpositive);
    let m: [Line<ExactRational>; 5] = pairs(&z, 5).try_into().unwrap();
    assert!(sls_res_penta(&m) > ExactRational::zero());
}

#[test]
fn explicit_z10_random_parameters() {
    let mut r = rng(2);
    for _ in 0..20 {
        let t: [ExactRational; 24] = std::array::from_fn(|_| rat(r.gen_range(1..=30), r.gen_range(1..=5)));
        let z = explicit_z10(&t);
        assert!(is_totally_positive(&z));
        let m: [Line<ExactRational>; 5] = pairs(&z, 5).try_into().unwrap();
        assert!(sls_res_penta(&m) > ExactRational::zero());
    }
}

#[test]
fn vandermonde_is_totally_positive_and_a_negated_column_is_not() {
    let z = vandermonde(&[1, 2, 3, 5, 7, 8, 11, 12]);
    assert!(is_totally_positive(&z));
    let m = TotallyPositiveMatrix::from_columns(z);
    for j in 0..m.n() {
        let neg = m.negate_column(j);
        let rep = minor_report(&neg.columns);
        assert!(!rep.totally_positive);
        // exactly the minors through column j change sign
        assert_eq!(rep.nonpositive_count, 35);
    }
    // one inversion among the nodes flips the sign; reversal has six and does not
    assert!(!is_totally_positive(&vandermonde(&[1, 3, 2, 4])));
    assert!(is_totally_positive(&vandermonde(&[4, 3, 2, 1])));
}

#[test]
fn top_cell_word_is_totally_positive() {
    let mut r = rng(3);
    for n in 4..=10 {
        let t: Vec<ExactRational> = (0..parameter_count(n)).map(|_| rat(r.gen_range(1..=20), r.gen_range(1..=4))).collect();
        let z = tp_from_parameters(n, &t).unwrap();
        assert!(is_totally_positive(&z.columns), "n = {}", n);
    }
    let mut t: Vec<ExactRational> = vec![rat(1, 1); parameter_count(6)];
    t[3] = rat(0, 1);
    assert!(matches!(tp_from_parameters(6, &t), Err(landau::LandauError::Domain(_))));
    assert!(tp_from_parameters::<ExactRational>(3, &[]).is_err());
}

#[test]
fn samplers_pass_the_exhaustive_test() {
    for n in [4, 5, 8, 10, 15] {
        let z = sample_tp_matrix_exact(n, n as u64).unwrap();
        assert!(is_totally_positive(&z.columns));
    }
    for n in [8, 18, 21, 24] {
        for seed in 0..5 {
            let z = sample_tp_matrix(n, seed, ParameterDistribution::default()).unwrap();
            assert!(minor_report(&z.columns).totally_positive);
        }
    }
    let unit = sample_tp_matrix(10, 0, ParameterDistribution::Unit).unwrap();
    assert!(unit.params.iter().skip(10).all(|&t| t == 1.0));
    assert!(matches!(
        sample_tp_matrix(8, 0, ParameterDistribution::LogUniform { lo: -1.0, hi: 2.0 }),
        Err(landau::LandauError::Domain(_))
    ));
    // same seed, same matrix
    assert_eq!(sample_tp_matrix(12, 9, ParameterDistribution::default()).unwrap(), sample_tp_matrix(12, 9, ParameterDistribution::default()).unwrap());
}

#[test]
fn column_pairs_share_columns_at_incidences() {
    let d = build_h_triangle(&families::complete(3), &[3, 3, 3]).unwrap();
    let p = column_pairs(&d).unwrap();
    assert_eq!(p, vec![(1, 2), (2, 3), (4, 5), (6, 7), (7, 8), (9, 10), (11, 12), (12, 13), (14, 15)]);
    assert_eq!(columns_needed(&d).unwrap(), 15);
    let g = LandauDiagram::new(families::complete(3), vec![3, 3, 3]).unwrap();
    assert_eq!(columns_needed(&g).unwrap(), 18);
    // the H△ data read from columns agrees with the meets of the lines
    let z = sample_tp_matrix_exact(15, 4).unwrap();
    let cfg = PositiveLineConfiguration::for_diagram(&d, z.clone()).unwrap();
    let via_cols = cfg.triangle_data(&d).unwrap();
    let via_lines = landau::rational::ExternalTriangleData::for_diagram(&d, &cfg.lines()).unwrap();
    for (a, b) in via_cols.iter().zip(&via_lines) {
        assert!(join_points(&a.p, &b.p).is_zero());
        assert_eq!(a.free, b.free);
    }
    assert!(PositiveLineConfiguration::for_diagram(&d, sample_tp_matrix_exact(14, 1).unwrap()).is_err());
}

#[test]
fn box_reality_on_positive_data() {
    let d = LandauDiagram::new(families::single(), vec![4]).unwrap();
    let rep = reality_experiment(&d, &RealityOptions::new(1000, 1)).unwrap();
    assert_eq!(rep.all_real, 1000, "{:?}", rep.failures().first());
    assert_eq!(rep.counts, vec![(2, 1000)]);
}

#[test]
fn box_with_negative_discriminant_has_a_complex_pair() {
    let d = LandauDiagram::new(families::single(), vec![4]).unwrap();
    let mut r = rng(5);
    let opts = RealityOptions::new(1, 0);
    let mut seen = 0;
    while seen < 5 {
        let m: Vec<Line<f64>> = (0..4).map(|_| rand_line_f64(&mut r)).collect();
        let delta = ls_disc_box(&[m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()]);
        let t = fiber_reality(&d, &m, &opts, 0).unwrap();
        if delta < -1e-6 {
            seen += 1;
            assert_eq!(t.status, TrialStatus::NotReal);
            assert_eq!(t.real_count, 0);
        } else if delta > 1e-6 {
            assert_eq!(t.status, TrialStatus::AllReal);
        }
    }
}

fn tree_cases() -> Vec<LandauDiagram> {
    let star = InternalGraph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
    vec![
        LandauDiagram::new(families::path(2), vec![4, 3]).unwrap(),
        LandauDiagram::new(families::path(2), vec![3, 4]).unwrap(),
        LandauDiagram::new(families::path(3), vec![4, 2, 4]).unwrap(),
        LandauDiagram::new(families::path(3), vec![4, 3, 3]).unwrap(),
        LandauDiagram::new(families::path(3), vec![3, 4, 3]).unwrap(),
        LandauDiagram::new(families::path(4), vec![4, 2, 3, 4]).unwrap(),
        LandauDiagram::new(families::path(4), vec![4, 3, 3, 3]).unwrap(),
        LandauDiagram::new(star.clone(), vec![1, 4, 4, 4]).unwrap(),
        LandauDiagram::new(star, vec![2, 3, 4, 4]).unwrap(),
    ]
}

#[test]
fn trees_are_real_on_positive_data() {
    for d in tree_cases() {
        let rep = reality_experiment(&d, &RealityOptions::new(200, 11)).unwrap();
        assert_eq!(rep.all_real, 200, "tree {:?} u {:?}: {:?}", d.graph.edges(), d.u, rep.failures().first());
        assert_eq!(rep.counts, vec![(rep.expected, 200)]);
    }
}

#[test]
fn degenerate_diagrams_are_real_on_positive_data() {
    for d in [
        build_h_triangle(&families::complete(3), &[3, 3, 3]).unwrap(),
        build_h_triangle(&families::path(3), &[4, 2, 4]).unwrap(),
    ] {
        let rep = reality_experiment(&d, &RealityOptions::new(200, 12)).unwrap();
        assert_eq!(rep.all_real, 200, "{:?}", rep.failures().first());
        assert!(rep.component_counts.iter().all(|(_, k)| k == &vec![1]));
    }
}

#[test]
fn reality_report_is_deterministic() {
    let d = LandauDiagram::new(families::path(2), vec![4, 3]).unwrap();
    let a = reality_experiment(&d, &RealityOptions::new(30, 3)).unwrap();
    let b = reality_experiment(&d, &RealityOptions::new(30, 3)).unwrap();
    let key = |r: &RealityReport| r.records.iter().map(|t| (t.seed, t.count, t.margin.to_bits())).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    assert_ne!(trial_seed(3, 0), trial_seed(3, 1));
}

#[test]
fn box_and_pentagon_are_copositive() {
    for ev in [CopositivityEvaluator::BoxDiscriminant, CopositivityEvaluator::PentagonResultant] {
        let rep = copositivity_experiment(ev, 10_000, 21, ParameterDistribution::default()).unwrap();
        assert_eq!(rep.sign_violations, 0, "{:?}", rep.violations.first());
        assert!(rep.min_value > 0.0);
    }
}

#[test]
fn mixed_triangle_factors_change_sign() {
    let rep = copositivity_experiment(CopositivityEvaluator::TriangleMixed, 2000, 22, ParameterDistribution::default()).unwrap();
    assert_eq!(rep.factors.len(), 8);
    assert!(rep.sign_changes());
    assert!(rep.sign_violations > 0);
    let v = &rep.violations[0];
    assert!(!v.params.is_empty());
}

#[test]
fn exact_evaluation_agrees_in_sign() {
    let z = sample_tp_matrix_exact(15, 8).unwrap();
    let zf = z.to_f64();
    for ev in [CopositivityEvaluator::TriangleMixed, CopositivityEvaluator::TriangleComponent] {
        let exact = ev.evaluate(&z).unwrap();
        let float = ev.evaluate(&zf).unwrap();
        for ((l1, a), (l2, b)) in exact.iter().zip(&float) {
            assert_eq!(l1, l2);
            let a = landau::scalars::rational_to_f64(a);
            assert!(a.signum() == b.signum(), "{} {} {}", l1, a, b);
        }
    }
}

#[test]
fn box_promotion_is_positive() {
    for seed in 0..10 {
        let z = sample_tp_matrix(14, seed, ParameterDistribution::default()).unwrap();
        for branch in 0..2 {
            let rep = &promotion_positivity_check(&z, Promotion::Box { branch }).unwrap()[0];
            assert!(rep.real);
            assert!(rep.totally_positive, "seed {} branch {}", seed, branch);
        }
        // a negated retained column breaks it
        let bad = z.negate_column(10);
        let rep = &promotion_positivity_check(&bad, Promotion::Box { branch: 0 }).unwrap()[0];
        assert!(!rep.totally_positive);
    }
    let z = sample_tp_matrix(7, 0, ParameterDistribution::default()).unwrap();
    assert!(promotion_positivity_check(&z, Promotion::Box { branch: 0 }).is_err());
}

#[test]
fn triangle_promotion_is_positive() {
    for seed in 0..5 {
        let z = sample_tp_matrix(21, seed, ParameterDistribution::default()).unwrap();
        let reps = promotion_positivity_check(&z, Promotion::Triangle).unwrap();
        assert_eq!(reps.len(), 16);
        for r in &reps {
            assert!(r.real && r.totally_positive && r.first_coordinate_rule, "{} {:?}", r.label, r.report);
        }
        let bad = z.negate_column(19);
        let reps = promotion_positivity_check(&bad, Promotion::Triangle).unwrap();
        assert!(reps.iter().all(|r| !r.totally_positive));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_samples_are_totally_positive(n in 4usize..13, seed in any::<u64>()) {
        let z = sample_tp_matrix_exact(n, seed).unwrap();
        prop_assert!(is_totally_positive(&z.columns));
    }

    #[test]
    fn top_cell_minors_positive(n in 4usize..9, ks in proptest::collection::vec(1i64..50, 20)) {
        let t: Vec<ExactRational> = (0..parameter_count(n)).map(|i| rat(ks[i % ks.len()], 7)).collect();
        prop_assert!(is_totally_positive(&tp_from_parameters(n, &t).unwrap().columns));
    }

    #[test]
    fn positive_box_discriminant(seed in any::<u64>()) {
        let z = sample_tp_matrix_exact(8, seed).unwrap();
        let m: [Line<ExactRational>; 4] = pairs(&z.columns, 4).try_into().unwrap();
        prop_assert!(ls_disc_box(&m) > ExactRational::zero());
    }
}

#[test]
fn triangle_is_real_on_positive_data() {
    let d = LandauDiagram::new(families::complete(3), vec![3, 3, 3]).unwrap();
    let rep = reality_experiment(&d, &RealityOptions::new(200, 13)).unwrap();
    assert_eq!(rep.all_real, 200, "{:?}", rep.failures().first());
    assert_eq!(rep.counts, vec![(16, 200)]);
    assert_eq!(rep.component_counts, vec![("b".to_string(), vec![8]), ("w".to_string(), vec![8])]);
}
