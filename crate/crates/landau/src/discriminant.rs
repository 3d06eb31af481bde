//! LS discriminants and SLS resultants.
//!
//! Closed forms are Gram determinants of pairings. The pentabox discriminant is
//! available exactly through a `10 × 10` Bézoutian resultant and by recursion over
//! the two box branches; the double box NLS discriminant is the discriminant of
//! `det(U + tV)` for the quadrics through two line triples.

use crate::diagram::{reducibility_split, LandauDiagram, Split};
use crate::geometry::{chain_polynomial, gram_matrix, join_point_line, line_pairing, Line, Point};
use crate::scalars::{linalg, ExactRational, Field, QuadExt, UnivariatePolynomial};
use crate::schubert::box4::box_quadratic_with;
use crate::{LandauError, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};

pub use crate::schubert::collision_indicator;

/// `det` of the `4 × 4` Gram form of the box.
pub fn ls_disc_box<F: Field>(m: &[Line<F>; 4]) -> F {
    linalg::det(&gram_matrix(m))
}

/// `det` of the `5 × 5` Gram form of the pentagon.
pub fn sls_res_penta<F: Field>(m: &[Line<F>; 5]) -> F {
    linalg::det(&gram_matrix(m))
}

/// Output of [`pentabox_resultant_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct PentaboxResultant<F: Field> {
    /// `Res_{1,1,1,1,2,2}` of the four linear forms and two quadrics.
    pub res: F,
    /// `det 𝒢` for the basis `A, B, C, D, E, G`.
    pub det_gram: F,
    /// `Res / det(𝒢)²`.
    pub delta: F,
}

/// The linear forms `T`, and the quadrics `U` (the Plücker relation) and `V`
/// (coinciding transversals of `E, F, G, X`) in the coordinates `X = Σ x_k b_k`,
/// `b = (A, B, C, D, E, G)`.
fn pentabox_system<F: Field>(m: &[Line<F>; 7]) -> (Vec<Vec<F>>, Vec<Vec<F>>, Vec<Vec<F>>, Vec<Vec<F>>) {
    let [a, b, c, d, e, f, g] = m;
    let basis = [a, b, c, d, e, g];
    let big: Vec<Vec<F>> = basis.iter().map(|x| basis.iter().map(|y| line_pairing(x, y)).collect()).collect();
    let t: Vec<Vec<F>> = big[..4].to_vec();
    let half = F::one() / F::from_i64(2);
    let u: Vec<Vec<F>> = big.iter().map(|r| r.iter().map(|z| z.clone() * half.clone()).collect()).collect();
    // det [[G₃, w], [wᵀ, 0]] = −wᵀ adj(G₃) w with w = P x
    let efg = [e, f, g];
    let g3 = gram_matrix(&[e.clone(), f.clone(), g.clone()]);
    let adj = linalg::adjugate(&g3);
    let p: Vec<Vec<F>> = efg.iter().map(|x| basis.iter().map(|y| line_pairing(x, y)).collect()).collect();
    let v: Vec<Vec<F>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let mut s = F::zero();
                    for r in 0..3 {
                        for q in 0..3 {
                            s = s + p[r][i].clone() * adj[r][q].clone() * p[q][j].clone();
                        }
                    }
                    -s
                })
                .collect()
        })
        .collect();
    (big, t, u, v)
}

/// Divided-difference column of a quadric `xᵀQx` as coefficients over `(x₁..x₆, y₁..y₆)`.
fn divided_difference<F: Field>(q: &[Vec<F>], i: usize) -> Vec<F> {
    let two = F::from_i64(2);
    let mut c = vec![F::zero(); 12];
    c[i] = q[i][i].clone();
    c[6 + i] = q[i][i].clone();
    for k in 0..6 {
        if k < i {
            c[6 + k] = c[6 + k].clone() + two.clone() * q[i][k].clone();
        } else if k > i {
            c[k] = c[k].clone() + two.clone() * q[i][k].clone();
        }
    }
    c
}

/// `Res_{1,1,1,1,2,2}(T, U, V) = det [[B, Tᵀ], [T, 0]]` with `B` the Bézoutian.
pub fn resultant_1111_22<F: Field>(t: &[Vec<F>], u: &[Vec<F>], v: &[Vec<F>]) -> F {
    let c5: Vec<Vec<F>> = (0..6).map(|i| divided_difference(u, i)).collect();
    let c6: Vec<Vec<F>> = (0..6).map(|i| divided_difference(v, i)).collect();
    // k[a][b]: det(Δ) with the two quadric columns replaced by unit vectors e_a, e_b
    let mut k = vec![vec![F::zero(); 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            if a == b {
                continue;
            }
            let mut m = linalg::zeros::<F>(6, 6);
            for i in 0..6 {
                for j in 0..4 {
                    m[i][j] = t[j][i].clone();
                }
            }
            m[a][4] = F::one();
            m[b][5] = F::one();
            k[a][b] = linalg::det(&m);
        }
    }
    let mut big = linalg::zeros::<F>(10, 10);
    for i in 0..6 {
        for j in 0..6 {
            let mut s = F::zero();
            for a in 0..6 {
                for b in 0..6 {
                    if a == b {
                        continue;
                    }
                    let w = c5[a][i].clone() * c6[b][6 + j].clone() + c5[a][6 + j].clone() * c6[b][i].clone();
                    if !w.is_zero() {
                        s = s + k[a][b].clone() * w;
                    }
                }
            }
            big[i][j] = s;
        }
    }
    for r in 0..4 {
        for i in 0..6 {
            big[i][6 + r] = t[r][i].clone();
            big[6 + r][i] = t[r][i].clone();
        }
    }
    linalg::det(&big)
}

/// `Δ_{K₂,(4,3)}` from [`pentabox_resultant_exact`] divided by the box branch product
/// of [`box_branch_product_exact`]. Fixed by comparing both routes on rational fixtures;
/// the resultant formula pins degrees but neither sign nor scale.
pub fn pentabox_calibration() -> ExactRational {
    ExactRational::new((-1).into(), 16.into())
}

/// The pentabox `G = {12}`, `u = (4, 3)`, lines `(A, B, C, D; E, F, G)`.
pub fn pentabox_resultant_exact<F: Field>(m: &[Line<F>; 7]) -> Result<PentaboxResultant<F>> {
    let (big, t, u, v) = pentabox_system(m);
    let det_gram = linalg::det(&big);
    if det_gram.is_zero() || (!F::is_exact() && det_gram.magnitude() < 1e-300) {
        return Err(LandauError::Domain("A, B, C, D, E, G are linearly dependent: det 𝒢 = 0".into()));
    }
    let res = resultant_1111_22(&t, &u, &v);
    let delta = res.clone() / (det_gram.clone() * det_gram.clone());
    Ok(PentaboxResultant { res, det_gram, delta })
}

/// Spanning points of `D` rescaled so that `d₁ ∧ d₂ = D` exactly.
fn exact_span<F: Field>(d: &Line<F>) -> Result<(Point<F>, Point<F>)> {
    let (d1, d2) = d.spanning_points()?;
    let k = (0..6).find(|&k| !d.p[k].is_zero()).unwrap();
    let prod = crate::geometry::join_points(&d1, &d2);
    let s = d.p[k].clone() / prod.p[k].clone();
    Ok((d1, d2.scale(&s)))
}

/// `ε⁴ = 16 a₂⁴ / (⟨BC⟩⟨BD⟩⟨CD⟩)²`, the normalisation of both box branches.
fn epsilon4<F: Field>(a2: &F, b: &Line<F>, c: &Line<F>, d: &Line<F>) -> F {
    let den = line_pairing(b, c) * line_pairing(b, d) * line_pairing(c, d);
    let a4 = a2.clone() * a2.clone() * a2.clone() * a2.clone();
    F::from_i64(16) * a4 / (den.clone() * den)
}

/// `∏_± det Gram(L±, rest)` for the box `(A, B, C, D)`, exactly.
///
/// The branches live in `Q(√Δ)`; the product is rational. `L± = ε X±` with
/// `ε = 2a₂ / √(⟨BC⟩⟨BD⟩⟨CD⟩)` so that the branches have degree one in each box line.
pub fn box_branch_product_exact(m1: &[Line<ExactRational>; 4], rest: &[Line<ExactRational>]) -> Result<ExactRational> {
    let [a, b, c, d] = m1;
    let (d1, d2) = exact_span(d)?;
    let q = box_quadratic_with(a, b, c, d1, d2);
    let [_, a1, a2] = q.a.clone();
    if a2.is_zero() {
        return Err(LandauError::Domain("a₂ = 0: a box branch sits at infinity on D".into()));
    }
    let disc = q.discriminant();
    let lift = |x: &ExactRational| QuadExt::rational(x.clone());
    let root = QuadExt::sqrt_of(&disc);
    let two_a2 = lift(&(ExactRational::from_i64(2) * a2.clone()));
    let mut prod = QuadExt::one();
    for sign in [1i64, -1] {
        let x = (lift(&(-a1.clone())) + root.clone() * QuadExt::from_i64(sign)) / two_a2.clone();
        let xl = q.x[0]
            .map(lift)
            .add(&q.x[1].map(lift).scale(&x))
            .add(&q.x[2].map(lift).scale(&(x.clone() * x.clone())));
        let mut lines = vec![xl];
        lines.extend(rest.iter().map(|l| l.map(lift)));
        prod = prod * linalg::det(&gram_matrix(&lines));
    }
    if !prod.is_rational() {
        return Err(LandauError::Consistency { max_deviation: prod.to_f64().abs() });
    }
    Ok(epsilon4(&a2, b, c, d) * prod.a)
}

/// Which closed form sits at the end of a box recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecursionBase {
    /// `det` of the `4 × 4` Gram (LS discriminant of the box).
    BoxGram,
    /// `det` of the `5 × 5` Gram (SLS resultant of the pentagon).
    PentaGram,
}

#[derive(Clone, Debug)]
pub struct RecursionValue {
    pub value: Complex64,
    /// Number of substituted branches multiplied together.
    pub branches: usize,
    /// Vertices peeled off as boxes, in order (original labels).
    pub peeled: Vec<usize>,
}

/// The two normalised box branches `L± = ε X±` in complex doubles.
fn box_branches_c64(m1: &[Line<Complex64>; 4]) -> Result<[Line<Complex64>; 2]> {
    let [a, b, c, d] = m1;
    let (d1, d2) = exact_span(d)?;
    let q = box_quadratic_with(a, b, c, d1, d2);
    let [_, a1, a2] = q.a;
    if a2.norm() == 0.0 {
        return Err(LandauError::Domain("a₂ = 0: a box branch sits at infinity on D".into()));
    }
    let sq = q.discriminant().sqrt();
    let den = line_pairing(b, c) * line_pairing(b, d) * line_pairing(c, d);
    let eps = 2.0 * a2 / den.sqrt();
    let out = [1.0, -1.0].map(|s| {
        let x = (-a1 + s * sq) / (2.0 * a2);
        q.x[0].add(&q.x[1].scale(&x)).add(&q.x[2].scale(&(x * x))).scale(&eps)
    });
    Ok(out)
}

/// LS discriminant or SLS resultant of a diagram that reduces to one vertex by
/// repeatedly peeling a leaf box (`u_i = 4`), as the product over all box branches.
///
/// A peeled line enters the next vertex after its own externals. Beyond one level
/// the square roots in `ε` make the value well defined only up to sign.
pub fn disc_via_recursion(d: &LandauDiagram, m: &[Line<Complex64>], base: RecursionBase) -> Result<RecursionValue> {
    if m.len() != d.d() {
        return Err(LandauError::Dimension(format!("{} external lines for d = {}", m.len(), d.d())));
    }
    let labels: Vec<usize> = (1..=d.ell()).collect();
    let mut peeled = vec![];
    let values = recurse(d, m.to_vec(), &labels, base, &mut peeled)?;
    let value: Complex64 = values.iter().product();
    if m.iter().all(|l| l.p.iter().all(|z| z.im == 0.0)) {
        let scale = values.iter().map(|v| v.norm()).product::<f64>().max(f64::MIN_POSITIVE);
        let im = value.im.abs();
        if im > 1e-6 * scale {
            return Err(LandauError::Consistency { max_deviation: im / scale });
        }
    }
    Ok(RecursionValue { value, branches: values.len(), peeled })
}

fn recurse(
    d: &LandauDiagram,
    m: Vec<Line<Complex64>>,
    labels: &[usize],
    base: RecursionBase,
    peeled: &mut Vec<usize>,
) -> Result<Vec<Complex64>> {
    if d.ell() == 1 {
        return match (base, d.u[0]) {
            (RecursionBase::BoxGram, 4) => Ok(vec![ls_disc_box(&[m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()])]),
            (RecursionBase::PentaGram, 5) => {
                Ok(vec![sls_res_penta(&[m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone(), m[4].clone()])])
            }
            (_, u) => Err(LandauError::Precondition(format!("recursion ends at a vertex with u = {} for base {:?}", u, base))),
        };
    }
    let leaf = (1..=d.ell()).find(|&v| d.u[v - 1] == 4 && d.graph.degree(v) == 1).ok_or_else(|| {
        LandauError::Unsupported("no leaf box (u_i = 4, degree 1) to peel".into())
    })?;
    let Split::Reducible { second, v2, .. } = reducibility_split(d, &[leaf])? else {
        return Err(LandauError::Precondition("leaf box is not reducible".into()));
    };
    let nb = d.graph.neighbours(leaf)[0];
    let ext = d.externals_at(leaf);
    let m1 = [m[ext[0] - 1].clone(), m[ext[1] - 1].clone(), m[ext[2] - 1].clone(), m[ext[3] - 1].clone()];
    let branches = box_branches_c64(&m1)?;
    peeled.push(labels[leaf - 1]);
    let new_labels: Vec<usize> = v2.iter().map(|&v| labels[v - 1]).collect();
    let mut out = vec![];
    for (bi, l) in branches.iter().enumerate() {
        let mut m2 = vec![];
        for &v in &v2 {
            m2.extend(d.externals_at(v).iter().map(|&a| m[a - 1].clone()));
            if v == nb {
                m2.push(l.clone());
            }
        }
        let mut sub_peeled = vec![];
        let vals = recurse(&second, m2, &new_labels, base, &mut sub_peeled)?;
        if bi == 0 {
            peeled.extend(sub_peeled);
        }
        out.extend(vals);
    }
    Ok(out)
}

/// Symmetric `U` with `xᵀUx = ⟨Ax|B|Cx⟩`, the quadric containing `A, B, C`.
///
/// `⟨Ax|B|Cx⟩` uses spanning points `b₁ ∧ b₂ = B`; the polarization is scaled by two
/// so that the entries are integral in the Plücker coordinates (`u₁₁ = 2a₂₃b₂₄c₃₄ − …`).
pub fn quadric_through_three_lines<F: Field>(a: &Line<F>, b: &Line<F>, c: &Line<F>) -> Result<QuadricMatrix4<F>> {
    let (b1, b2) = exact_span(b)?;
    let q = |x: &Point<F>| -> F {
        let pa = join_point_line(x, a);
        let pc = join_point_line(x, c);
        chain_polynomial(&pa, &b1, &b2, &pc)
    };
    let e = |i: usize| Point::new(std::array::from_fn(|k| if k == i { F::one() } else { F::zero() }));
    let diag: Vec<F> = (0..4).map(|i| q(&e(i))).collect();
    let two = F::from_i64(2);
    let mut u = [[F::zero(), F::zero(), F::zero(), F::zero()], [F::zero(), F::zero(), F::zero(), F::zero()], [F::zero(), F::zero(), F::zero(), F::zero()], [F::zero(), F::zero(), F::zero(), F::zero()]];
    for i in 0..4 {
        u[i][i] = two.clone() * diag[i].clone();
        for j in i + 1..4 {
            let s = Point::new(std::array::from_fn(|k| if k == i || k == j { F::one() } else { F::zero() }));
            let v = q(&s) - diag[i].clone() - diag[j].clone();
            u[i][j] = v.clone();
            u[j][i] = v;
        }
    }
    let m: Vec<Vec<F>> = u.iter().map(|r| r.to_vec()).collect();
    let rank = linalg::rank(&m, 1e-10);
    Ok(QuadricMatrix4 { u, degenerate: rank < 4 })
}

/// A symmetric `4 × 4` matrix; `xᵀUx` vanishes on the three defining lines.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricMatrix4<F: Field> {
    pub u: [[F; 4]; 4],
    /// Rank below four: the three lines were not pairwise disjoint.
    pub degenerate: bool,
}

impl<F: Field> QuadricMatrix4<F> {
    pub fn eval(&self, x: &Point<F>) -> F {
        let mut s = F::zero();
        for i in 0..4 {
            for j in 0..4 {
                s = s + x.x[i].clone() * self.u[i][j].clone() * x.x[j].clone();
            }
        }
        s
    }

    pub fn to_matrix(&self) -> Vec<Vec<F>> {
        self.u.iter().map(|r| r.to_vec()).collect()
    }
}

/// `f(t) = det(U + tV)` by exact interpolation at `t = 0..4`.
pub fn pencil_quartic<F: Field>(u: &QuadricMatrix4<F>, v: &QuadricMatrix4<F>) -> Result<UnivariatePolynomial<F>> {
    let samples: Vec<(F, F)> = (0..5)
        .map(|k| {
            let t = F::from_i64(k);
            let m: Vec<Vec<F>> = (0..4)
                .map(|i| (0..4).map(|j| u.u[i][j].clone() + t.clone() * v.u[i][j].clone()).collect())
                .collect();
            (t, linalg::det(&m))
        })
        .collect();
    crate::scalars::interpolate_exact(&samples, 4)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NlsDiscriminant<F: Field> {
    pub value: F,
    pub quartic: UnivariatePolynomial<F>,
    /// `det(U + tV)` has degree below four (or the quadrics were degenerate).
    pub degenerate: bool,
}

/// NLS discriminant of the double box: the discriminant of the quartic `det(U + tV)`.
///
/// When the quartic drops degree the value is the discriminant of the degree-4
/// coefficient vector anyway (zero leading term), and `degenerate` is set.
pub fn nls_disc_doublebox<F: Field>(lines: &[Line<F>; 6]) -> Result<NlsDiscriminant<F>> {
    let [a, b, c, e, f, g] = lines;
    let u = quadric_through_three_lines(a, b, c)?;
    let v = quadric_through_three_lines(e, f, g)?;
    let quartic = pencil_quartic(&u, &v)?;
    let deg = quartic.degree();
    let degenerate = deg != Some(4) || u.degenerate || v.degenerate;
    let value = if deg == Some(4) {
        quartic.discriminant()?
    } else {
        quartic_discriminant_formal(&quartic)
    };
    Ok(NlsDiscriminant { value, quartic, degenerate })
}

/// Discriminant of `c₀ + c₁t + … + c₄t⁴` read as a binary quartic, valid when `c₄ = 0`.
fn quartic_discriminant_formal<F: Field>(p: &UnivariatePolynomial<F>) -> F {
    let c: Vec<F> = (0..5).map(|i| p.coeff(i)).collect();
    let (a, b, cc, d, e) = (c[4].clone(), c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone());
    let n = |k: i64| F::from_i64(k);
    let p2 = |x: &F| x.clone() * x.clone();
    let p3 = |x: &F| x.clone() * x.clone() * x.clone();
    n(256) * p3(&a) * p3(&e) - n(192) * p2(&a) * b.clone() * d.clone() * p2(&e) - n(128) * p2(&a) * p2(&cc) * p2(&e)
        + n(144) * p2(&a) * cc.clone() * p2(&d) * e.clone()
        - n(27) * p2(&a) * p2(&d) * p2(&d)
        + n(144) * a.clone() * p2(&b) * cc.clone() * p2(&e)
        - n(6) * a.clone() * p2(&b) * p2(&d) * e.clone()
        - n(80) * a.clone() * b.clone() * p2(&cc) * d.clone() * e.clone()
        + n(18) * a.clone() * b.clone() * cc.clone() * p3(&d)
        + n(16) * a.clone() * p2(&cc) * p2(&cc) * e.clone()
        - n(4) * a.clone() * p3(&cc) * p2(&d)
        - n(27) * p2(&b) * p2(&b) * p2(&e)
        + n(18) * p3(&b) * cc.clone() * d.clone() * e.clone()
        - n(4) * p3(&b) * p3(&d)
        - n(4) * p2(&b) * p3(&cc) * e.clone()
        + p2(&b) * p2(&cc) * p2(&d)
}
