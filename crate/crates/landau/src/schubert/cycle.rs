//! Cycles `C_ℓ` with `u = (3, …, 3)`, including the triangle `K₃`.
//!
//! `L_ℓ(x)` runs over the transversals of `M^{(ℓ)}_2, M^{(ℓ)}_3` through the point
//! `d₁ + x d₂` of `M^{(ℓ)}_1`. Vertices `1, …, ℓ−2` follow by box solves and the
//! closing vertex `ℓ−1` must see five lines with a common transversal, a Gram
//! determinant condition. Clearing the branch denominators gives the cycle polynomial
//! `f_ℓ(x)` of degree `2^{ℓ+1}`.

use super::box4::{box_quadratic_with, transversal_of_five, BoxQuadratic};
use super::fiber::{dedupe, make_solution, newton_refine, FiberSolution};
use crate::diagram::LandauDiagram;
use crate::geometry::{gram_matrix, Line, Point};
use crate::scalars::{find_roots, interpolate_exact, linalg, ExactRational, Field, QuadExt, RootOptions, ToComplex, UnivariatePolynomial};
use crate::{LandauError, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::f64::consts::PI;

fn check_cycle(d: &LandauDiagram) -> Result<usize> {
    let ell = d.ell();
    let is_cycle = ell >= 3 && d.graph.num_edges() == ell && (1..=ell).all(|v| d.graph.degree(v) == 2) && d.graph.is_connected();
    if !is_cycle {
        return Err(LandauError::Precondition("cycle polynomial needs the cycle graph C_ℓ, ℓ ≥ 3".into()));
    }
    if d.u.iter().any(|&x| x != 3) {
        return Err(LandauError::Precondition(format!("cycle polynomial needs u = (3, …, 3), got {:?}", d.u)));
    }
    // vertex i must be joined to i+1 around the cycle
    if !(1..=ell).all(|i| d.graph.has_edge(i, if i == ell { 1 } else { i + 1 })) {
        return Err(LandauError::Precondition("cycle vertices must be labelled consecutively".into()));
    }
    Ok(ell)
}

/// Per-vertex transversal families `X(s, t) = s²X₀ + st X₁ + t²X₂` along `M^{(k)}_1`.
struct Families<F: Field> {
    fam: Vec<BoxQuadratic<F>>,
    m: Vec<[Line<F>; 3]>,
}

fn families<F: Field>(d: &LandauDiagram, m: &[Line<F>], spans: Option<Vec<(Point<F>, Point<F>)>>) -> Result<Families<F>> {
    let ell = d.ell();
    let mut fam = vec![];
    let mut mm = vec![];
    for k in 1..=ell {
        let e = d.externals_at(k);
        let l: [Line<F>; 3] = [m[e[0] - 1].clone(), m[e[1] - 1].clone(), m[e[2] - 1].clone()];
        let (d1, d2) = match &spans {
            Some(s) => s[k - 1].clone(),
            None => l[0].spanning_points()?,
        };
        // the pairing coefficients are filled in per incoming line; use l[0] as a placeholder
        fam.push(box_quadratic_with(&l[0], &l[1], &l[2], d1, d2));
        mm.push(l);
    }
    Ok(Families { fam, m: mm })
}

fn gram5<F: Field>(lines: [&Line<F>; 5]) -> F {
    let v: Vec<Line<F>> = lines.iter().map(|l| (*l).clone()).collect();
    linalg::det(&gram_matrix(&v))
}

fn pair<F: Field>(a: &Line<F>, x: &[Line<F>; 3]) -> [F; 3] {
    [
        crate::geometry::line_pairing(a, &x[0]),
        crate::geometry::line_pairing(a, &x[1]),
        crate::geometry::line_pairing(a, &x[2]),
    ]
}

/// Homogeneous roots `(s₁,t₁) = (a₂, q)`, `(s₂,t₂) = (q, a₀)` and the value `q`.
fn homogeneous_roots(a: [Complex64; 3]) -> ([(Complex64, Complex64); 2], Complex64) {
    let [a0, a1, a2] = a;
    let sq = (a1 * a1 - 4.0 * a0 * a2).sqrt();
    let (qa, qb) = (a1 + sq, a1 - sq);
    let q = -0.5 * if qa.norm() >= qb.norm() { qa } else { qb };
    ([(a2, q), (q, a0)], q)
}

struct NumericCycle {
    f: Families<Complex64>,
    ell: usize,
}

/// Numeric families built from spanning points computed in the input field, so
/// rational input gives the same parameter `x` as the exact polynomial.
fn numeric_cycle<F: Field + ToComplex>(d: &LandauDiagram, m: &[Line<F>]) -> Result<(NumericCycle, Vec<Line<Complex64>>)> {
    let ell = check_cycle(d)?;
    let mc: Vec<Line<Complex64>> = m.iter().map(|l| l.map(|c| c.to_c64())).collect();
    let mut spans = vec![];
    for k in 1..=ell {
        let (a, b) = m[d.externals_at(k)[0] - 1].spanning_points()?;
        spans.push((a.map(|c| c.to_c64()), b.map(|c| c.to_c64())));
    }
    Ok((NumericCycle { f: families(d, &mc, Some(spans))?, ell }, mc))
}

impl NumericCycle {
    fn l_last(&self, x: Complex64) -> Line<Complex64> {
        self.f.fam[self.ell - 1].line_at(&Complex64::new(1.0, 0.0), &x)
    }

    /// `R_k(A)` with the closing line `last`; vertex indices are 1-based.
    fn r(&self, k: usize, a: &Line<Complex64>, last: &Line<Complex64>) -> Complex64 {
        let ell = self.ell;
        if k == ell - 1 {
            let m = &self.f.m[k - 1];
            return gram5([&m[0], &m[1], &m[2], a, last]);
        }
        let fam = &self.f.fam[k - 1];
        let coeffs = pair(a, &fam.x);
        let (roots, q) = homogeneous_roots(coeffs);
        let delta = 1u32 << (ell - 1 - k); // degree of R_{k+1} in its line argument
        let r1 = self.r(k + 1, &fam.line_at(&roots[0].0, &roots[0].1), last);
        let r2 = self.r(k + 1, &fam.line_at(&roots[1].0, &roots[1].1), last);
        r1 * r2 / q.powu(2 * delta)
    }

    fn eval(&self, x: Complex64) -> Complex64 {
        let last = self.l_last(x);
        self.r(1, &last, &last)
    }
}

/// Degree of the cycle polynomial.
pub fn cycle_polynomial_degree(ell: usize) -> usize {
    1 << (ell + 1)
}

/// Evaluates `f_ℓ` at a complex point.
pub fn cycle_polynomial_eval<F: Field + ToComplex>(d: &LandauDiagram, m: &[Line<F>], x: Complex64) -> Result<Complex64> {
    let (nc, _) = numeric_cycle(d, m)?;
    Ok(nc.eval(x))
}

/// Coefficients of `f_ℓ` (low to high) by sampling on the circle `|x| = radius` and an
/// inverse DFT.
pub fn build_cycle_polynomial<F: Field + ToComplex>(
    d: &LandauDiagram,
    m: &[Line<F>],
    radius: f64,
) -> Result<UnivariatePolynomial<Complex64>> {
    let (nc, _) = numeric_cycle(d, m)?;
    Ok(dft_poly(&|x| nc.eval(x), cycle_polynomial_degree(nc.ell), radius))
}

fn dft_poly(f: &dyn Fn(Complex64) -> Complex64, deg: usize, radius: f64) -> UnivariatePolynomial<Complex64> {
    let n = 2 * deg + 2;
    let rot = Complex64::from_polar(1.0, 0.37);
    let samples: Vec<Complex64> = (0..n)
        .map(|j| f(rot * Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64)))
        .collect();
    let coeffs: Vec<Complex64> = (0..=deg)
        .map(|k| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                .sum();
            s / (n as f64) / (rot * radius).powu(k as u32)
        })
        .collect();
    UnivariatePolynomial::new(coeffs)
}

/// Exact `f₃` for rational data, interpolated from rational samples. Each sample is
/// `a₂⁴ · G₅(X₊) · G₅(X₋)`, computed in `Q(√Δ)`.
///
/// Longer cycles need nested square roots and are only available numerically.
pub fn build_cycle_polynomial_exact(d: &LandauDiagram, m: &[Line<ExactRational>]) -> Result<UnivariatePolynomial<ExactRational>> {
    let ell = check_cycle(d)?;
    if ell != 3 {
        return Err(LandauError::Unsupported(format!(
            "exact cycle polynomial needs a single quadratic extension; ℓ = {} nests square roots",
            ell
        )));
    }
    let f = families(d, m, None)?;
    let deg = cycle_polynomial_degree(3);
    let mut samples = vec![];
    let mut k: i64 = 0;
    while samples.len() < deg + 4 {
        let x = ExactRational::from_i64(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        k += 1;
        if let Some(v) = exact_sample(&f, &x)? {
            samples.push((x, v));
        }
        if k > 400 {
            return Err(LandauError::Numerical("too many degenerate samples".into()));
        }
    }
    let fit = interpolate_exact(&samples[..deg + 1], deg)?;
    for (x, v) in &samples[deg + 1..] {
        if &fit.eval(x) != v {
            return Err(LandauError::Consistency { max_deviation: f64::NAN });
        }
    }
    Ok(fit)
}

fn exact_sample(f: &Families<ExactRational>, x: &ExactRational) -> Result<Option<ExactRational>> {
    let l3 = f.fam[2].line_at(&ExactRational::one(), x);
    let [a0, a1, a2] = pair(&l3, &f.fam[0].x);
    if a2.is_zero() {
        return Ok(None);
    }
    let disc = a1.clone() * a1.clone() - ExactRational::from_i64(4) * a0 * a2.clone();
    let lift = |v: &ExactRational| QuadExt::rational(v.clone());
    let root = QuadExt::sqrt_of(&disc);
    let two_a2 = lift(&(ExactRational::from_i64(2) * a2.clone()));
    let ys = [(lift(&(-a1.clone())) + root.clone()) / two_a2.clone(), (lift(&(-a1)) - root) / two_a2];
    let fam: [Line<QuadExt>; 3] = [f.fam[0].x[0].map(lift), f.fam[0].x[1].map(lift), f.fam[0].x[2].map(lift)];
    let m2: Vec<Line<QuadExt>> = f.m[1].iter().map(|l| l.map(lift)).collect();
    let l3q = l3.map(lift);
    let mut prod = QuadExt::one();
    for y in ys {
        let x1 = fam[0].add(&fam[1].scale(&y)).add(&fam[2].scale(&(y.clone() * y.clone())));
        prod = prod * gram5([&m2[0], &m2[1], &m2[2], &x1, &l3q]);
    }
    if !prod.is_rational() {
        return Err(LandauError::Consistency { max_deviation: f64::NAN });
    }
    let a4 = a2.clone() * a2.clone() * a2.clone() * a2;
    Ok(Some(a4 * prod.a))
}

/// Reconstructs full cycle solutions from roots of `f_ℓ` by following, at every
/// vertex, the branch whose closing Gram determinant is smallest.
fn solutions_from_roots(
    d: &LandauDiagram,
    m: &[Line<Complex64>],
    nc: &NumericCycle,
    roots: &[Complex64],
) -> Vec<FiberSolution> {
    let ell = nc.ell;
    let mut out = vec![];
    for &x in roots {
        let last = nc.l_last(x);
        // enumerate branches
        let mut partial: Vec<Vec<Line<Complex64>>> = vec![vec![last.clone()]];
        for k in 1..=ell - 2 {
            let mut next = vec![];
            for p in &partial {
                let fam = &nc.f.fam[k - 1];
                let (rts, _) = homogeneous_roots(pair(p.last().unwrap(), &fam.x));
                for (s, t) in rts {
                    let mut q = p.clone();
                    q.push(fam.line_at(&s, &t));
                    next.push(q);
                }
            }
            partial = next;
        }
        let mc = &nc.f.m[ell - 2];
        let score = |p: &Vec<Line<Complex64>>| {
            let a = p.last().unwrap();
            let g = gram5([&mc[0], &mc[1], &mc[2], a, &last]).norm();
            let s: f64 = [&mc[0], &mc[1], &mc[2], a, &last]
                .iter()
                .map(|l| l.p.iter().map(|z| z.norm_sqr()).sum::<f64>())
                .product();
            g / s
        };
        let best = partial
            .iter()
            .min_by(|a, b| score(a).partial_cmp(&score(b)).unwrap_or(std::cmp::Ordering::Equal))
            .cloned();
        let Some(best) = best else { continue };
        let closing = match transversal_of_five(&[mc[0].clone(), mc[1].clone(), mc[2].clone(), best.last().unwrap().clone(), last.clone()]) {
            Ok(l) => l,
            Err(_) => continue,
        };
        // order: L_1..L_{ℓ−2} from best[1..], then L_{ℓ−1}, then L_ℓ
        let mut lines: Vec<Line<Complex64>> = best[1..].to_vec();
        lines.push(closing);
        lines.push(last.clone());
        if let Ok((refined, _)) = newton_refine(d, m, &lines, 30) {
            out.push(make_solution(d, m, refined));
        }
    }
    out
}

/// The parameter `x` of `f_ℓ` belonging to a fiber point: `L_ℓ` meets
/// `M^{(ℓ)}_1` at `d₁ + x d₂`, with the spanning points used by the polynomial.
///
/// Reading `x` off a refined fiber point avoids root finding on the coefficients
/// of `f_ℓ`, whose roots cluster and are poorly conditioned in the monomial basis.
pub fn cycle_parameter<F: Field + ToComplex>(d: &LandauDiagram, m: &[Line<F>], lines: &[Line<Complex64>]) -> Result<Complex64> {
    let ell = check_cycle(d)?;
    let (a, b) = m[d.externals_at(ell)[0] - 1].spanning_points()?;
    let (a, b) = (a.map(|c| c.to_c64()), b.map(|c| c.to_c64()));
    let last = &lines[ell - 1];
    let p1 = crate::geometry::join_point_line(&a, last).c;
    let p2 = crate::geometry::join_point_line(&b, last).c;
    let den: f64 = p2.iter().map(|z| z.norm_sqr()).sum();
    if den == 0.0 {
        return Err(LandauError::Numerical("fiber point passes through d₂".into()));
    }
    let num: Complex64 = p1.iter().zip(&p2).map(|(u, v)| u * v.conj()).sum();
    Ok(-num / den)
}

#[derive(Clone, Debug)]
pub struct CycleSolve {
    pub solutions: Vec<FiberSolution>,
    pub polynomial: UnivariatePolynomial<Complex64>,
    pub roots: Vec<Complex64>,
    /// Solutions passing the residual check; equal to `2^{ℓ+1}` on success.
    pub expected: usize,
}

/// All points of the fiber of a cycle, from the roots of `f_ℓ`.
///
/// When `exact` is given (the output of [`build_cycle_polynomial_exact`] for the same
/// rational `m`) the first attempt takes its roots; otherwise, and on later attempts,
/// roots come from the sampled polynomial. Several sampling radii are tried and
/// their verified solutions merged until the expected count is reached.
pub fn solve_cycle<F: Field + ToComplex>(
    d: &LandauDiagram,
    m: &[Line<F>],
    exact: Option<&UnivariatePolynomial<ExactRational>>,
    tol: f64,
) -> Result<CycleSolve> {
    let (nc, mc) = numeric_cycle(d, m)?;
    let m = &mc[..];
    let ell = nc.ell;
    let deg = cycle_polynomial_degree(ell);
    let mut found: Vec<FiberSolution> = vec![];
    let mut last_poly = None;
    let mut all_roots = vec![];
    let radii = [1.0, 0.5, 2.0, 0.2, 5.0, 0.05, 20.0];
    for (attempt, &r) in radii.iter().enumerate() {
        let poly = match (exact, attempt) {
            (Some(p), 0) => p.map(|c| Complex64::new(crate::scalars::rational_to_f64(c), 0.0)),
            _ => dft_poly(&|x| nc.eval(x), deg, r),
        };
        let roots = match find_roots(poly.coeffs(), &RootOptions { tol: 1e-4, ..Default::default() }) {
            Ok(rs) => rs.into_iter().map(|r| r.value).collect::<Vec<_>>(),
            Err(_) => continue,
        };
        let sols = solutions_from_roots(d, m, &nc, &roots);
        found.extend(sols.into_iter().filter(|s| s.max_residual <= tol));
        found = dedupe(found, 1e-6);
        all_roots = roots;
        last_poly = Some(poly);
        if found.len() >= deg {
            break;
        }
    }
    let polynomial = last_poly.ok_or_else(|| LandauError::Numerical("no usable cycle polynomial".into()))?;
    Ok(CycleSolve { solutions: found, polynomial, roots: all_roots, expected: deg })
}
