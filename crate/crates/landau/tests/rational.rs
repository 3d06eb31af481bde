mod common;

use common::*;
use landau::diagram::{all_bicolorings, build_h_triangle, families, Color, LandauDiagram};
use landau::discriminant::ls_disc_box;
use landau::geometry::{dual_line, join_points, line_pairing, meet_line_plane, Line, Point};
use landau::rational::*;
use landau::scalars::{rat, ExactRational, Field};
use landau::schubert::fiber::verify_fiber;
use landau::schubert::{proportional, solve_cycle, solve_tree, transport_fiber};
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

/// External lines of an `H△` diagram: per vertex `(p a, p b, free…)`.
fn h_data(d: &LandauDiagram, r: &mut ChaCha8Rng) -> Vec<Line<ExactRational>> {
    let mut m = vec![];
    for i in 1..=d.ell() {
        let p = rand_point(r);
        m.push(join_points(&p, &rand_point(r)));
        m.push(join_points(&p, &rand_point(r)));
        for _ in 2..d.u[i - 1] {
            m.push(rand_line(r));
        }
    }
    m
}

fn moment_point(t: &ExactRational) -> Point<ExactRational> {
    Point::new([rat(1, 1), t.clone(), t.clone() * t.clone(), t.clone() * t.clone() * t.clone()])
}

fn triangle() -> LandauDiagram {
    build_h_triangle(&families::complete(3), &[3, 3, 3]).unwrap()
}

#[test]
fn three_mass_box_incidences_are_exact() {
    let mut r = rng(1);
    for _ in 0..10 {
        let p = rand_point(&mut r);
        let m1 = join_points(&p, &rand_point(&mut r));
        let m2 = join_points(&p, &rand_point(&mut r));
        let (m3, m4) = (rand_line(&mut r), rand_line(&mut r));
        let data = ExternalTriangleData::from_lines(&m1, &m2, vec![m3.clone(), m4.clone()]).unwrap();
        let (lb, lw) = three_mass_box_lines(&data.p, &data.plane, &m3, &m4).unwrap();
        for l in [&lb, &lw] {
            for m in [&m1, &m2, &m3, &m4] {
                assert!(line_pairing(l, m).is_zero());
            }
            assert!(l.quadric().is_zero());
        }
    }
}

#[test]
fn three_mass_box_lines_collide_on_the_discriminant() {
    let mut r = rng(2);
    let p = rand_point(&mut r);
    let m1 = join_points(&p, &rand_point(&mut r));
    let m2 = join_points(&p, &rand_point(&mut r));
    let m3 = rand_line(&mut r);
    // M₄(t) = x (y₀ + t y₁): the Gram factor is linear in t
    let (x, y0, y1) = (rand_point(&mut r), rand_point(&mut r), rand_point(&mut r));
    let m4 = |t: &ExactRational| join_points(&x, &y0.add(&y1.scale(t)));
    let s = |m4: &Line<ExactRational>| {
        line_pairing(&m2, &m3) * line_pairing(&m1, m4) - line_pairing(&m1, &m3) * line_pairing(&m2, m4)
    };
    let (s0, s1) = (s(&m4(&rat(0, 1))), s(&m4(&rat(1, 1))));
    let t = -s0.clone() / (s1 - s0);
    let m4t = m4(&t);
    assert!(ls_disc_box(&[m1.clone(), m2.clone(), m3.clone(), m4t.clone()]).is_zero());
    let data = ExternalTriangleData::from_lines(&m1, &m2, vec![]).unwrap();
    let (lb, lw) = three_mass_box_lines(&data.p, &data.plane, &m3, &m4t).unwrap();
    assert!(proportional(&lb, &lw));
    let (lb, lw) = three_mass_box_lines(&data.p, &data.plane, &m3, &m4(&rat(3, 7))).unwrap();
    assert!(!proportional(&lb, &lw));
}

#[test]
fn cluster_factor_squares_to_the_box_gram() {
    let mut r = rng(3);
    for _ in 0..10 {
        let z: [Point<ExactRational>; 7] = std::array::from_fn(|_| rand_point(&mut r));
        let c = cluster_factor_3mb(&z);
        assert_eq!(ls_disc_box(&three_mass_box_external(&z)), c.clone() * c);
    }
    // moment-curve columns are totally positive
    let z: [Point<ExactRational>; 7] = std::array::from_fn(|i| moment_point(&rat(i as i64 + 1, 1)));
    assert!(cluster_factor_3mb(&z) > ExactRational::zero());
    // z₁ = z₃: the first two lines coincide and the factor vanishes
    let mut z: [Point<ExactRational>; 7] = std::array::from_fn(|_| rand_point(&mut r));
    z[2] = z[0].clone();
    assert!(cluster_factor_3mb(&z).is_zero());
}

#[test]
fn triangle_fibers_are_exact_and_distinct() {
    let d = triangle();
    let mut r = rng(4);
    for _ in 0..3 {
        let m = h_data(&d, &mut r);
        let sols = triangle_rational_fibers(&d, &m).unwrap();
        assert_eq!(sols.len(), 16);
        for s in &sols {
            let rep = verify_fiber(&d, &m, s, 0.0);
            assert!(rep.exact_zero, "residuals {:?}", rep.residuals);
            assert_eq!(rep.classification_ok, Some(true));
        }
        for i in 0..16 {
            for j in i + 1..16 {
                assert!((0..3).any(|k| !proportional(&sols[i].lines[k], &sols[j].lines[k])));
            }
        }
    }
}

#[test]
fn triangle_duality() {
    let d = triangle();
    let mut r = rng(5);
    let m = h_data(&d, &mut r);
    let dual: Vec<Line<ExactRational>> = m.iter().map(dual_line).collect();
    for s in all_bicolorings(&d.colorable_triangles()) {
        let flipped: landau::diagram::Bicoloring = s.iter().map(|(t, c)| (*t, c.flip())).collect();
        let a = triangle_rational_fiber(&d, &m, &s).unwrap();
        let b = triangle_rational_fiber(&d, &dual, &flipped).unwrap();
        for k in 0..3 {
            assert!(proportional(&dual_line(&a.lines[k]), &b.lines[k]));
        }
    }
}

#[test]
fn triangle_rational_matches_numeric() {
    let d = triangle();
    let plain = LandauDiagram::new(families::complete(3), vec![3, 3, 3]).unwrap();
    let mut r = rng(6);
    let m = h_data(&d, &mut r);
    let exact = triangle_rational_fibers(&d, &m).unwrap();
    // the cycle parametrization degenerates on H△ data, so move a generic fiber there
    let m0: Vec<Line<num_complex::Complex64>> = (0..9).map(|_| rand_line_c64(&mut r)).collect();
    let start = solve_cycle(&plain, &m0, None, 1e-8).unwrap();
    assert_eq!(start.solutions.len(), 16);
    let moved = transport_fiber(&plain, &start.solutions, &m0, &to_c64(&m), &mut r);
    let num: Vec<_> = moved.into_iter().map(|s| s.unwrap()).collect();
    for e in &exact {
        let lines: Vec<_> = e.lines.iter().map(|l| l.map(|c| landau::scalars::ToComplex::to_c64(c))).collect();
        let best = num
            .iter()
            .map(|s| (0..3).map(|k| landau::geometry::line_distance(&s.lines[k], &lines[k])).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8, "no numeric match, distance {}", best);
    }
}

fn trivalent_tree_cases() -> Vec<(LandauDiagram, usize)> {
    let mut out = vec![];
    for ell in 1..=4 {
        for g in families::all_trees(ell) {
            if (1..=ell).any(|v| g.degree(v) > 3) {
                continue;
            }
            let total = 3 * ell + 1;
            // every u with u_i ≥ 2 summing to 3ℓ + 1 that propagates
            let mut u = vec![2u32; ell];
            loop {
                if u.iter().sum::<u32>() as usize == total && u.iter().all(|&x| x <= 4) {
                    let d = build_h_triangle(&g, &u).unwrap();
                    if landau::schubert::tree_orientation(&d).is_ok() {
                        out.push((d, ell));
                    }
                }
                let mut k = 0;
                while k < ell && u[k] == 4 {
                    u[k] = 2;
                    k += 1;
                }
                if k == ell {
                    break;
                }
                u[k] += 1;
            }
        }
    }
    out
}

#[test]
fn tree_propagation_is_exact() {
    let cases = trivalent_tree_cases();
    assert!(cases.len() >= 8);
    let mut r = rng(7);
    for (d, ell) in cases {
        let m = h_data(&d, &mut r);
        let sols = tree_rational_fibers(&d, &m).unwrap();
        assert_eq!(sols.len(), 1 << ell);
        for s in &sols {
            let rep = verify_fiber(&d, &m, s, 0.0);
            assert!(rep.exact_zero, "{:?} {:?}", d.u, rep.residuals);
            assert_eq!(rep.classification_ok, Some(true));
        }
        // the numeric tree solver finds the same points
        let num = solve_tree(&d, &to_c64(&m)).unwrap();
        for s in &sols {
            let lines: Vec<_> = s.lines.iter().map(|l| l.map(|c| landau::scalars::ToComplex::to_c64(c))).collect();
            let best = num
                .iter()
                .map(|n| (0..ell).map(|k| landau::geometry::line_distance(&n.lines[k], &lines[k])).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8);
        }
    }
}

#[test]
fn single_vertex_tree_is_the_three_mass_box() {
    let d = build_h_triangle(&families::single(), &[4]).unwrap();
    let mut r = rng(8);
    let m = h_data(&d, &mut r);
    let sols = tree_rational_fibers(&d, &m).unwrap();
    let data = ExternalTriangleData::from_lines(&m[0], &m[1], vec![]).unwrap();
    let (lb, lw) = three_mass_box_lines(&data.p, &data.plane, &m[2], &m[3]).unwrap();
    let got: Vec<_> = sols.iter().map(|s| s.lines[0].clone()).collect();
    assert!(got.iter().any(|l| proportional(l, &lb)));
    assert!(got.iter().any(|l| proportional(l, &lw)));
}

fn triangle_vertex_data(m: &[Line<ExactRational>]) -> [ExternalTriangleData<ExactRational>; 3] {
    let d = triangle();
    ExternalTriangleData::for_diagram(&d, m).unwrap().try_into().unwrap()
}

#[test]
fn triangle_factors_generic() {
    let d = triangle();
    let mut r = rng(9);
    let m = h_data(&d, &mut r);
    let data = triangle_vertex_data(&m);
    for c in [Color::Black, Color::White] {
        let (comp, mixed) = tr_rat_factors(&data, c).unwrap();
        assert_eq!(comp.len(), 12);
        assert_eq!(mixed.len(), 8);
        assert!(comp.iter().chain(&mixed).all(|f| !f.value.is_zero()));
    }
}

#[test]
fn triangle_factors_are_multihomogeneous() {
    let d = triangle();
    let mut r = rng(10);
    let m = h_data(&d, &mut r);
    let (base, mixed) = tr_rat_factors(&triangle_vertex_data(&m), Color::Black).unwrap();
    for line in 0..9 {
        let mut degs = vec![];
        for lam in [2i64, 3] {
            let mut s = m.clone();
            s[line] = s[line].scale(&ExactRational::from_i64(lam));
            let (c, x) = tr_rat_factors(&triangle_vertex_data(&s), Color::Black).unwrap();
            let k: Vec<u32> = c
                .iter()
                .chain(&x)
                .zip(base.iter().chain(&mixed))
                .map(|(a, b)| {
                    let q = a.value.clone() / b.value.clone();
                    let mut k = 0;
                    let mut v = ExactRational::from_i64(1);
                    while v != q {
                        v = v * ExactRational::from_i64(lam);
                        k += 1;
                        assert!(k < 40, "not a power of λ");
                    }
                    k
                })
                .collect();
            degs.push(k);
        }
        assert_eq!(degs[0], degs[1]);
    }
}

#[test]
fn mixed_factor_vanishes_when_components_collide() {
    // p^(bbb) on P^(bbb): choose q in the plane p₁p₂p₃ and each M_i meeting p_i q
    let mut r = rng(11);
    let ps: Vec<Point<ExactRational>> = (0..3).map(|_| rand_point(&mut r)).collect();
    let q = ps[0].add(&ps[1].scale(&rat(2, 3))).add(&ps[2].scale(&rat(-5, 4)));
    let mut m = vec![];
    for p in &ps {
        m.push(join_points(p, &rand_point(&mut r)));
        m.push(join_points(p, &rand_point(&mut r)));
        let on = p.add(&q.scale(&rand_rat(&mut r)));
        m.push(join_points(&on, &rand_point(&mut r)));
    }
    let data = triangle_vertex_data(&m);
    let (_, mixed) = tr_rat_factors(&data, Color::Black).unwrap();
    assert!(mixed[0].value.is_zero());
    assert!(mixed[1..].iter().all(|f| !f.value.is_zero()));
    let bb = [Color::Black; 3];
    let lb = triangle_lines_raw(&data, Color::Black, bb).unwrap();
    let lw = triangle_lines_raw(&data, Color::White, bb).unwrap();
    for k in 0..3 {
        assert!(proportional(&lb[k], &lw[k]));
    }
}

#[test]
fn component_factor_vanishes_when_lines_coincide() {
    // q on N = p₁ (M₁ ⋆ P₁) and M₂, M₃ meeting p₂q, p₃q: the bbb and wbb points share L₁
    let mut r = rng(12);
    let p1 = rand_point(&mut r);
    let m11 = join_points(&p1, &rand_point(&mut r));
    let m12 = join_points(&p1, &rand_point(&mut r));
    let m13 = rand_line(&mut r);
    let v1 = ExternalTriangleData::from_lines(&m11, &m12, vec![m13.clone()]).unwrap();
    let n1 = meet_line_plane(&m13, &v1.plane);
    let q = p1.add(&n1.scale(&rat(3, 2)));
    let mut m = vec![m11, m12, m13];
    for _ in 0..2 {
        let p = rand_point(&mut r);
        m.push(join_points(&p, &rand_point(&mut r)));
        m.push(join_points(&p, &rand_point(&mut r)));
        m.push(join_points(&p.add(&q.scale(&rand_rat(&mut r))), &rand_point(&mut r)));
    }
    let data = triangle_vertex_data(&m);
    let (comp, _) = tr_rat_factors(&data, Color::Black).unwrap();
    let bbb = [Color::Black; 3];
    let wbb = [Color::White, Color::Black, Color::Black];
    let la = triangle_lines_raw(&data, Color::Black, bbb).unwrap();
    let lb = triangle_lines_raw(&data, Color::Black, wbb).unwrap();
    assert!(proportional(&la[0], &lb[0]));
    let label = format!("L1 {}|{}", landau::diagram::coloring_word(&triangle_sigma(Color::Black, bbb)), landau::diagram::coloring_word(&triangle_sigma(Color::Black, wbb)));
    for f in &comp {
        assert_eq!(f.value.is_zero(), f.label == label, "{}", f.label);
    }
}

#[test]
fn primitive_normalisation() {
    let v = [rat(-1, 2), rat(0, 1), rat(3, 4), rat(1, 6), rat(0, 1), rat(-2, 3)];
    let p = primitive(&v);
    assert_eq!(p, vec![rat(6, 1), rat(0, 1), rat(-9, 1), rat(-2, 1), rat(0, 1), rat(8, 1)]);
}
