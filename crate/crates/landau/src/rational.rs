//! Rational fibers under the `H△` degeneration and exact cluster-factor identities.
//!
//! At a vertex whose external lines `M₁, M₂` meet, write `p = M₁ ∩ M₂` and
//! `P = M₁ ∨ M₂`. A black triangle forces `L ∋ p`, a white one `L ⊂ P`, and each
//! leaves a two-parameter family cut down to one line by two more incidences.

use crate::diagram::{coloring_word, Bicoloring, Color, LandauDiagram, Triangle};
use crate::geometry::{
    bracket, intersect_lines, join_point_line, join_points, join_three_points, line_pairing, meet_line_plane,
    meet_planes, meet_three_planes, point_plane, span_lines, transversal_in_plane, transversal_through_point, Line,
    Plane, Point,
};
use crate::scalars::{ExactRational, Field};
use crate::schubert::fiber::normalized_residuals;
use crate::schubert::{tree_orientation, FiberSolution};
use crate::schubert::tree::topological_order;
use crate::{LandauError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The `H△` data at one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ExternalTriangleData<F: Field> {
    /// `M₁ ∩ M₂`.
    pub p: Point<F>,
    /// `M₁ ∨ M₂`.
    pub plane: Plane<F>,
    /// The external lines not in the pair.
    pub free: Vec<Line<F>>,
}

impl<F: Field> ExternalTriangleData<F> {
    pub fn from_lines(m1: &Line<F>, m2: &Line<F>, free: Vec<Line<F>>) -> Result<Self> {
        if F::is_exact() && !line_pairing(m1, m2).is_zero() {
            return Err(LandauError::Precondition("the H△ pair must be incident".into()));
        }
        Ok(ExternalTriangleData { p: intersect_lines(m1, m2)?, plane: span_lines(m1, m2)?, free })
    }

    /// Per-vertex data of an `H△` diagram.
    pub fn for_diagram(d: &LandauDiagram, m: &[Line<F>]) -> Result<Vec<Self>> {
        if !d.h_triangle {
            return Err(LandauError::Precondition("diagram carries no H△ degeneration".into()));
        }
        (1..=d.ell())
            .map(|i| {
                let (a, b) = d.h_pair_at(i).ok_or_else(|| LandauError::Domain(format!("no H△ pair at vertex {}", i)))?;
                let free = d.externals_at(i).into_iter().filter(|&x| x != a && x != b).map(|x| m[x - 1].clone()).collect();
                Self::from_lines(&m[a - 1], &m[b - 1], free)
            })
            .collect()
    }
}

fn nonzero_line<F: Field>(l: Line<F>, what: &str) -> Result<Line<F>> {
    if l.is_zero() {
        Err(LandauError::Domain(format!("degenerate meet or join: {}", what)))
    } else {
        Ok(l)
    }
}

fn nonzero_point<F: Field>(p: Point<F>, what: &str) -> Result<Point<F>> {
    if p.is_zero() {
        Err(LandauError::Domain(format!("degenerate meet or join: {}", what)))
    } else {
        Ok(p)
    }
}

fn nonzero_plane<F: Field>(p: Plane<F>, what: &str) -> Result<Plane<F>> {
    if p.is_zero() {
        Err(LandauError::Domain(format!("degenerate meet or join: {}", what)))
    } else {
        Ok(p)
    }
}

/// The box with `M₁ M₂` incident: `L_b = (p M₃) ⋆ (p M₄)`, `L_w = (P ⋆ M₃)(P ⋆ M₄)`.
pub fn three_mass_box_lines<F: Field>(p: &Point<F>, plane: &Plane<F>, m3: &Line<F>, m4: &Line<F>) -> Result<(Line<F>, Line<F>)> {
    let lb = nonzero_line(transversal_through_point(p, m3, m4), "(p M₃) ⋆ (p M₄)")?;
    let lw = nonzero_line(transversal_in_plane(plane, m3, m4), "(P ⋆ M₃)(P ⋆ M₄)")?;
    Ok((lb, lw))
}

/// Colours of the triangle and its three external triangles, internal first.
fn triangle_colors(sigma: &Bicoloring) -> Result<(Color, [Color; 3])> {
    let get = |t: Triangle| sigma.get(&t).copied().ok_or_else(|| LandauError::Precondition(format!("σ misses {}", t.id())));
    Ok((get(Triangle::Internal([1, 2, 3]))?, [get(Triangle::External(1))?, get(Triangle::External(2))?, get(Triangle::External(3))?]))
}

/// The concurrency point of the black triangle: `⋆_i (p_i M_i)` or `P_i`.
fn black_point<F: Field>(data: &[ExternalTriangleData<F>; 3], ext: [Color; 3]) -> Result<Point<F>> {
    let planes: Vec<Plane<F>> = (0..3)
        .map(|i| match ext[i] {
            Color::Black => nonzero_plane(join_point_line(&data[i].p, &data[i].free[0]), "p_i M_i"),
            Color::White => Ok(data[i].plane.clone()),
        })
        .collect::<Result<_>>()?;
    nonzero_point(meet_three_planes(&planes[0], &planes[1], &planes[2]), "concurrency point")
}

/// The common plane of the white triangle, joining `p_i` or `M_i ⋆ P_i`.
fn white_plane<F: Field>(data: &[ExternalTriangleData<F>; 3], ext: [Color; 3]) -> Result<Plane<F>> {
    let pts: Vec<Point<F>> = (0..3)
        .map(|i| match ext[i] {
            Color::Black => Ok(data[i].p.clone()),
            Color::White => nonzero_point(meet_line_plane(&data[i].free[0], &data[i].plane), "M_i ⋆ P_i"),
        })
        .collect::<Result<_>>()?;
    nonzero_plane(join_three_points(&pts[0], &pts[1], &pts[2]), "coplanarity plane")
}

/// Unnormalised lines of the triangle fiber point for `σ`, as polynomials in the data.
pub fn triangle_lines_raw<F: Field>(data: &[ExternalTriangleData<F>; 3], sigma_int: Color, ext: [Color; 3]) -> Result<[Line<F>; 3]> {
    if data.iter().any(|v| v.free.len() != 1) {
        return Err(LandauError::Precondition("the triangle needs u = (3,3,3)".into()));
    }
    let mut out = vec![];
    match sigma_int {
        Color::Black => {
            let q = black_point(data, ext)?;
            for i in 0..3 {
                let through = match ext[i] {
                    Color::Black => data[i].p.clone(),
                    Color::White => nonzero_point(meet_line_plane(&data[i].free[0], &data[i].plane), "M_i ⋆ P_i")?,
                };
                out.push(nonzero_line(join_points(&through, &q), "line through q")?);
            }
        }
        Color::White => {
            let qp = white_plane(data, ext)?;
            for i in 0..3 {
                let l = match ext[i] {
                    Color::Black => join_points(&data[i].p, &meet_line_plane(&data[i].free[0], &qp)),
                    Color::White => meet_planes(&data[i].plane, &qp),
                };
                out.push(nonzero_line(l, "line in Q")?);
            }
        }
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Clears denominators and content; the first nonzero entry becomes positive.
pub fn primitive(v: &[ExactRational]) -> Vec<ExactRational> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * ExactRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| if x.is_negative() { -BigInt::one() } else { BigInt::one() }).unwrap();
    ints.iter().map(|x| ExactRational::from_integer(x / &g * &sign)).collect()
}

pub fn primitive_line(l: &Line<ExactRational>) -> Line<ExactRational> {
    Line::raw(primitive(&l.p).try_into().unwrap())
}

/// The triangle bicoloring with internal colour `c` and external colours `ext`.
pub fn triangle_sigma(c: Color, ext: [Color; 3]) -> Bicoloring {
    let mut s = Bicoloring::new();
    s.insert(Triangle::Internal([1, 2, 3]), c);
    for i in 0..3 {
        s.insert(Triangle::External(i + 1), ext[i]);
    }
    s
}

fn exact_solution(d: &LandauDiagram, m: &[Line<ExactRational>], lines: Vec<Line<ExactRational>>, sigma: Bicoloring) -> FiberSolution<ExactRational> {
    let residuals = normalized_residuals(d, m, &lines);
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    FiberSolution {
        lines,
        residuals,
        max_residual,
        is_real: true,
        max_imag: 0.0,
        component: Some(sigma),
        warnings: vec![],
    }
}

fn check_triangle_diagram(d: &LandauDiagram) -> Result<()> {
    if d.ell() != 3 || d.graph.num_edges() != 3 || d.u != vec![3, 3, 3] || !d.h_triangle {
        return Err(LandauError::Precondition("expects K₃ with u = (3,3,3) and H△".into()));
    }
    Ok(())
}

/// The fiber point on the component `σ` of the degenerate triangle, exactly.
pub fn triangle_rational_fiber(d: &LandauDiagram, m: &[Line<ExactRational>], sigma: &Bicoloring) -> Result<FiberSolution<ExactRational>> {
    check_triangle_diagram(d)?;
    let data = ExternalTriangleData::for_diagram(d, m)?;
    let data: [ExternalTriangleData<ExactRational>; 3] = data.try_into().unwrap();
    let (c, ext) = triangle_colors(sigma)?;
    let lines = triangle_lines_raw(&data, c, ext)?;
    Ok(exact_solution(d, m, lines.iter().map(primitive_line).collect(), sigma.clone()))
}

/// All `16` fiber points of the degenerate triangle.
pub fn triangle_rational_fibers(d: &LandauDiagram, m: &[Line<ExactRational>]) -> Result<Vec<FiberSolution<ExactRational>>> {
    crate::diagram::all_bicolorings(&d.colorable_triangles())
        .iter()
        .map(|s| triangle_rational_fiber(d, m, s))
        .collect()
}

/// Propagates the unique solution of component `σ` through a tree with `H△`.
pub fn tree_rational_fiber(d: &LandauDiagram, m: &[Line<ExactRational>], sigma: &Bicoloring) -> Result<FiberSolution<ExactRational>> {
    let lines = tree_lines_raw(d, m, sigma)?;
    Ok(exact_solution(d, m, lines.iter().map(primitive_line).collect(), sigma.clone()))
}

pub fn tree_lines_raw<F: Field>(d: &LandauDiagram, m: &[Line<F>], sigma: &Bicoloring) -> Result<Vec<Line<F>>> {
    if !d.h_triangle || !d.graph.is_tree() {
        return Err(LandauError::Precondition("expects a tree with H△".into()));
    }
    let data = ExternalTriangleData::for_diagram(d, m)?;
    let arcs = tree_orientation(d).map_err(|e| LandauError::Infeasible(format!("not processable by propagation: {}", e)))?;
    let order = topological_order(d.ell(), &arcs);
    let mut lines: Vec<Option<Line<F>>> = vec![None; d.ell()];
    for &v in &order {
        let mut known: Vec<Line<F>> = data[v - 1].free.clone();
        for &(a, b) in &arcs {
            if b == v {
                known.push(lines[a - 1].clone().expect("topological order"));
            }
        }
        if known.len() != 2 {
            return Err(LandauError::Infeasible(format!("vertex {} sees {} constraints besides its triangle", v, known.len())));
        }
        let color = sigma
            .get(&Triangle::External(v))
            .ok_or_else(|| LandauError::Precondition(format!("σ misses the triangle at vertex {}", v)))?;
        let (lb, lw) = three_mass_box_lines(&data[v - 1].p, &data[v - 1].plane, &known[0], &known[1])?;
        lines[v - 1] = Some(if *color == Color::Black { lb } else { lw });
    }
    Ok(lines.into_iter().map(|l| l.unwrap()).collect())
}

/// All `2^ℓ` propagated solutions of a tree with `H△`.
pub fn tree_rational_fibers(d: &LandauDiagram, m: &[Line<ExactRational>]) -> Result<Vec<FiberSolution<ExactRational>>> {
    crate::diagram::all_bicolorings(&d.colorable_triangles())
        .iter()
        .map(|s| tree_rational_fiber(d, m, s))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TriangleFactor<F: Field> {
    pub label: String,
    pub value: F,
}

/// The `12` component factors `⟨L_i^{(σ₁)} L_i^{(σ₂)}⟩` for `σ_int` and the `8` mixed
/// factors `⟨p^{(σ)} P^{(σ)}⟩`.
///
/// Factors use the unnormalised constructions, so they are polynomials in the data
/// and scale with it.
pub fn tr_rat_factors<F: Field>(data: &[ExternalTriangleData<F>; 3], sigma_int: Color) -> Result<(Vec<TriangleFactor<F>>, Vec<TriangleFactor<F>>)> {
    let colorings: Vec<[Color; 3]> = (0..8)
        .map(|k: usize| std::array::from_fn(|i| if (k >> i) & 1 == 0 { Color::Black } else { Color::White }))
        .collect();
    let word = |c: Color, e: &[Color; 3]| coloring_word(&triangle_sigma(c, *e));
    let mut comp = vec![];
    for i in 0..3 {
        for e1 in &colorings {
            if e1[i] != Color::Black {
                continue;
            }
            let mut e2 = *e1;
            e2[i] = Color::White;
            let l1 = triangle_lines_raw(data, sigma_int, *e1)?;
            let l2 = triangle_lines_raw(data, sigma_int, e2)?;
            comp.push(TriangleFactor {
                label: format!("L{} {}|{}", i + 1, word(sigma_int, e1), word(sigma_int, &e2)),
                value: line_pairing(&l1[i], &l2[i]),
            });
        }
    }
    let mut mixed = vec![];
    for e in &colorings {
        let p = black_point(data, *e)?;
        let q = white_plane(data, *e)?;
        mixed.push(TriangleFactor { label: format!("p·P {}", word(Color::Black, e)), value: point_plane(&p, &q) });
    }
    Ok((comp, mixed))
}

/// `⟨245|13|267⟩ = ⟨2451⟩⟨3672⟩ − ⟨2453⟩⟨1672⟩` for the lines `12, 23, 45, 67`.
pub fn cluster_factor_3mb<F: Field>(z: &[Point<F>; 7]) -> F {
    let b = |i: usize, j: usize, k: usize, l: usize| bracket(&z[i - 1], &z[j - 1], &z[k - 1], &z[l - 1]);
    b(2, 4, 5, 1) * b(3, 6, 7, 2) - b(2, 4, 5, 3) * b(1, 6, 7, 2)
}

/// The external lines `(z₁z₂, z₂z₃, z₄z₅, z₆z₇)` of the three-mass box.
pub fn three_mass_box_external<F: Field>(z: &[Point<F>; 7]) -> [Line<F>; 4] {
    [join_points(&z[0], &z[1]), join_points(&z[1], &z[2]), join_points(&z[3], &z[4]), join_points(&z[5], &z[6])]
}

/// Lines as integer Plücker vectors for JSON output.
pub fn line_to_strings(l: &Line<ExactRational>) -> Vec<String> {
    primitive_line(l).p.iter().map(|x| x.to_string()).collect()
}
