//! Parameter homotopy and monodromy on the square incidence system.
//!
//! Unknowns are affine Grassmannian chart coordinates, four per internal line;
//! equations are the `|G| + d = 4ℓ` incidences. External lines enter linearly, so
//! moving them along a path in
//! `(C⁶)^d` gives a polynomial homotopy. Monodromy preserves the component `V_{G,σ}`
//! a start point lies on, which is what makes per-`σ` fiber counts computable.

use super::fiber::{make_solution, solution_distance, FiberSolution};
use crate::diagram::{Bicoloring, Color, LandauDiagram, Triangle};
use crate::geometry::{intersect_lines, join_points, line_pairing, span_lines, Line, Plane, Point};
use crate::{LandauError, Result};
use num_complex::Complex64;
use crate::scalars::linalg;
use rand::Rng;
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

type C = Complex64;

/// A path of external lines `m(t) = (1−t)a + tb + t(1−t)γw`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub a: Vec<Line<C>>,
    pub b: Vec<Line<C>>,
    pub twist: Option<(C, Vec<Line<C>>)>,
}

impl Segment {
    pub fn straight(a: &[Line<C>], b: &[Line<C>]) -> Self {
        Segment { a: a.to_vec(), b: b.to_vec(), twist: None }
    }

    pub fn at(&self, t: f64) -> Vec<Line<C>> {
        let mut out: Vec<Line<C>> = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a.scale(&C::new(1.0 - t, 0.0)).add(&b.scale(&C::new(t, 0.0))))
            .collect();
        if let Some((g, w)) = &self.twist {
            let s = g * (t * (1.0 - t));
            for (o, wi) in out.iter_mut().zip(w) {
                *o = o.add(&wi.scale(&s));
            }
        }
        out
    }

    pub fn velocity(&self, t: f64) -> Vec<Line<C>> {
        let mut out: Vec<Line<C>> = self.a.iter().zip(&self.b).map(|(a, b)| b.add(&a.scale(&C::new(-1.0, 0.0)))).collect();
        if let Some((g, w)) = &self.twist {
            let s = g * (1.0 - 2.0 * t);
            for (o, wi) in out.iter_mut().zip(w) {
                *o = o.add(&wi.scale(&s));
            }
        }
        out
    }

    pub fn reversed(&self) -> Self {
        Segment { a: self.b.clone(), b: self.a.clone(), twist: self.twist.clone() }
    }
}

/// The square system in affine charts: line `i` is the row span of `[I | A_i]` in a
/// random frame `u_{i,0..3}`, so the Plücker relation holds identically and the
/// unknowns are the four entries of each `A_i`.
pub struct System<'a> {
    pub d: &'a LandauDiagram,
    frames: Vec<[Point<C>; 4]>,
    inverses: Vec<Vec<Vec<C>>>,
}

impl<'a> System<'a> {
    pub fn new(d: &'a LandauDiagram, rng: &mut ChaCha8Rng) -> Self {
        let mut frames = vec![];
        let mut inverses = vec![];
        for _ in 0..d.ell() {
            let f: [Point<C>; 4] = std::array::from_fn(|_| rand_point(rng));
            // columns are the frame vectors
            let u: Vec<Vec<C>> = (0..4).map(|r| (0..4).map(|c| f[c].x[r]).collect()).collect();
            let adj = linalg::adjugate(&u);
            let det = linalg::det(&u);
            inverses.push(adj.iter().map(|row| row.iter().map(|z| z / det).collect()).collect());
            frames.push(f);
        }
        System { d, frames, inverses }
    }

    fn n(&self) -> usize {
        4 * self.d.ell()
    }

    /// Chart coordinates of lines (generic lines lie in every chart).
    pub fn to_chart(&self, lines: &[Line<C>]) -> Vec<C> {
        let mut x = vec![];
        for (i, l) in lines.iter().enumerate() {
            let (p, q) = l.spanning_points().expect("nonzero line");
            let inv = &self.inverses[i];
            let c = |v: &Point<C>| -> [C; 4] { std::array::from_fn(|r| (0..4).map(|k| inv[r][k] * v.x[k]).sum()) };
            let (cp, cq) = (c(&p), c(&q));
            let det = cp[0] * cq[1] - cp[1] * cq[0];
            // B⁻¹ applied to the last two columns
            let bi = [[cq[1] / det, -cp[1] / det], [-cq[0] / det, cp[0] / det]];
            for row in 0..2 {
                for col in 2..4 {
                    x.push(bi[row][0] * cp[col] + bi[row][1] * cq[col]);
                }
            }
        }
        x
    }

    fn rows(&self, i: usize, a: &[C]) -> (Point<C>, Point<C>) {
        let f = &self.frames[i];
        let r1 = f[0].add(&f[2].scale(&a[0])).add(&f[3].scale(&a[1]));
        let r2 = f[1].add(&f[2].scale(&a[2])).add(&f[3].scale(&a[3]));
        (r1, r2)
    }

    pub fn lines(&self, x: &[C]) -> Vec<Line<C>> {
        x.chunks(4).enumerate().map(|(i, a)| {
            let (r1, r2) = self.rows(i, a);
            join_points(&r1, &r2)
        }).collect()
    }

    /// Partial derivatives of line `i` with respect to its four chart entries.
    fn tangents(&self, i: usize, a: &[C]) -> [Line<C>; 4] {
        let f = &self.frames[i];
        let (r1, r2) = self.rows(i, a);
        [join_points(&f[2], &r2), join_points(&f[3], &r2), join_points(&r1, &f[2]), join_points(&r1, &f[3])]
    }

    /// Residual vector and row-major Jacobian in the unknowns.
    fn eval(&self, x: &[C], m: &[Line<C>]) -> (Vec<C>, Vec<C>) {
        let d = self.d;
        let n = self.n();
        let ls = self.lines(x);
        let tg: Vec<[Line<C>; 4]> = (0..d.ell()).map(|i| self.tangents(i, &x[4 * i..4 * i + 4])).collect();
        let mut f = Vec::with_capacity(n);
        let mut jac = vec![C::new(0.0, 0.0); n * n];
        let mut r = 0;
        for (i, j) in d.graph.edges() {
            let (a, b) = (i - 1, j - 1);
            f.push(line_pairing(&ls[a], &ls[b]));
            for k in 0..4 {
                jac[r * n + 4 * a + k] = line_pairing(&tg[a][k], &ls[b]);
                jac[r * n + 4 * b + k] = line_pairing(&ls[a], &tg[b][k]);
            }
            r += 1;
        }
        for i in 1..=d.ell() {
            for e in d.externals_at(i) {
                f.push(line_pairing(&ls[i - 1], &m[e - 1]));
                for k in 0..4 {
                    jac[r * n + 4 * (i - 1) + k] = line_pairing(&tg[i - 1][k], &m[e - 1]);
                }
                r += 1;
            }
        }
        (f, jac)
    }

    /// `∂F/∂t` when the external lines move with velocity `dm`.
    fn dt(&self, x: &[C], dm: &[Line<C>]) -> Vec<C> {
        let d = self.d;
        let ls = self.lines(x);
        let mut out = vec![C::new(0.0, 0.0); d.graph.num_edges()];
        for i in 1..=d.ell() {
            for e in d.externals_at(i) {
                out.push(line_pairing(&ls[i - 1], &dm[e - 1]));
            }
        }
        out
    }

    /// Newton iterations; returns the final step norm relative to `|x|`.
    fn newton(&self, x: &mut [C], m: &[Line<C>], iters: usize) -> Option<f64> {
        let mut rel = f64::INFINITY;
        for _ in 0..iters {
            let (f, mut j) = self.eval(x, m);
            let mut dx: Vec<C> = f.iter().map(|v| -v).collect();
            if !lu_solve(&mut j, &mut dx) {
                return None;
            }
            let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in x.iter_mut().zip(&dx) {
                *a += b;
            }
            let xn = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
            rel = step / xn;
            if !rel.is_finite() {
                return None;
            }
            if rel < 1e-13 {
                break;
            }
        }
        Some(rel)
    }

    /// Tracks one solution along the straight segment from `m0` to `m1`.
    pub fn track(&self, start: &[C], m0: &[Line<C>], m1: &[Line<C>]) -> Result<Vec<C>> {
        self.track_path(start, &Segment::straight(m0, m1))
    }

    /// Tracks one solution along a segment, `t ∈ [0, 1]`.
    pub fn track_path(&self, start: &[C], seg: &Segment) -> Result<Vec<C>> {
        let at = |t: f64| seg.at(t);
        let m1 = &seg.b;
        let mut x = start.to_vec();
        let mut t: f64 = 0.0;
        let mut h: f64 = 0.02;
        let mut steps = 0;
        while t < 1.0 {
            steps += 1;
            if steps > 20000 || h < 1e-12 {
                return Err(LandauError::Numerical(format!("path tracking stalled at t = {:.6}", t)));
            }
            let h_eff = h.min(1.0 - t);
            // RK4 predictor on dx/dt = −J⁻¹ ∂F/∂t
            let vel = |x: &[C], t: f64| -> Option<Vec<C>> {
                let mt = at(t);
                let (_, mut j) = self.eval(x, &mt);
                let mut r: Vec<C> = self.dt(x, &seg.velocity(t)).iter().map(|v| -v).collect();
                lu_solve(&mut j, &mut r).then_some(r)
            };
            let step = (|| {
                let k1 = vel(&x, t)?;
                let x2: Vec<C> = x.iter().zip(&k1).map(|(a, k)| a + k * (h_eff / 2.0)).collect();
                let k2 = vel(&x2, t + h_eff / 2.0)?;
                let x3: Vec<C> = x.iter().zip(&k2).map(|(a, k)| a + k * (h_eff / 2.0)).collect();
                let k3 = vel(&x3, t + h_eff / 2.0)?;
                let x4: Vec<C> = x.iter().zip(&k3).map(|(a, k)| a + k * h_eff).collect();
                let k4 = vel(&x4, t + h_eff)?;
                Some(
                    (0..x.len())
                        .map(|i| x[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h_eff / 6.0))
                        .collect::<Vec<C>>(),
                )
            })();
            let Some(mut pred) = step else {
                h /= 2.0;
                continue;
            };
            let mt = at(t + h_eff);
            // corrector: accept only fast contraction
            let ok = {
                let mut good = false;
                let mut prev = f64::INFINITY;
                for it in 0..4 {
                    match self.newton(&mut pred, &mt, 1) {
                        // a large first correction means the predictor may have left the path
                        Some(r) if it == 0 && r > 1e-3 => break,
                        Some(r) if r < prev * 0.125 || r < 1e-11 => {
                            prev = r;
                            if r < 1e-9 {
                                good = true;
                                break;
                            }
                        }
                        _ => break,
                    }
                }
                good
            };
            if ok {
                x = pred;
                t += h_eff;
                h = (h * 1.5).min(0.1);
            } else {
                h /= 2.0;
            }
        }
        self.newton(&mut x, m1, 6)
            .ok_or_else(|| LandauError::Numerical("endpoint Newton failed".into()))?;
        Ok(x)
    }
}

/// Gaussian elimination with partial pivoting on a row-major square matrix; the
/// solution overwrites `b`.
fn lu_solve(a: &mut [C], b: &mut [C]) -> bool {
    let n = b.len();
    for c in 0..n {
        let mut p = c;
        let mut best = a[c * n + c].norm_sqr();
        for r in c + 1..n {
            let v = a[r * n + c].norm_sqr();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if p != c {
            for k in 0..n {
                a.swap(c * n + k, p * n + k);
            }
            b.swap(c, p);
        }
        let inv = 1.0 / a[c * n + c];
        for r in c + 1..n {
            let f = a[r * n + c] * inv;
            if f == C::new(0.0, 0.0) {
                continue;
            }
            for k in c..n {
                let t = a[c * n + k];
                a[r * n + k] -= f * t;
            }
            let t = b[c];
            b[r] -= f * t;
        }
    }
    for c in (0..n).rev() {
        let mut s = b[c];
        for k in c + 1..n {
            s -= a[c * n + k] * b[k];
        }
        b[c] = s / a[c * n + c];
    }
    true
}

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rand_point(rng: &mut ChaCha8Rng) -> Point<C> {
    Point::new(std::array::from_fn(|_| rand_c(rng)))
}

fn rand_external(rng: &mut ChaCha8Rng, d: usize) -> Vec<Line<C>> {
    (0..d).map(|_| join_points(&rand_point(rng), &rand_point(rng))).collect()
}

fn point_on(l: &Line<C>, rng: &mut ChaCha8Rng) -> Result<Point<C>> {
    let (a, b) = l.spanning_points()?;
    Ok(a.scale(&rand_c(rng)).add(&b.scale(&rand_c(rng))))
}

fn point_in(p: &Plane<C>, rng: &mut ChaCha8Rng) -> Point<C> {
    // project a random point onto the plane along a fixed direction
    let x = rand_point(rng);
    let k = (0..4).max_by(|&a, &b| p.c[a].norm().partial_cmp(&p.c[b].norm()).unwrap()).unwrap();
    let v = p.eval(&x) / p.c[k];
    let mut y = x;
    y.x[k] -= v;
    y
}

/// Vertex order in which each vertex has at most two earlier neighbours.
fn build_order(d: &LandauDiagram) -> Result<Vec<usize>> {
    let ell = d.ell();
    let mut placed: Vec<usize> = vec![];
    while placed.len() < ell {
        let cand = (1..=ell)
            .filter(|v| !placed.contains(v))
            .map(|v| (d.graph.neighbours(v).iter().filter(|w| placed.contains(w)).count(), v))
            .filter(|&(c, _)| c <= 2)
            .max_by_key(|&(c, v)| (c, std::cmp::Reverse(v)));
        match cand {
            Some((_, v)) => placed.push(v),
            None => {
                return Err(LandauError::Unsupported(
                    "start points need an order with at most two earlier neighbours per vertex".into(),
                ))
            }
        }
    }
    Ok(placed)
}

/// A random point of `V_{G,σ}` together with external lines through it.
pub fn random_component_point(
    d: &LandauDiagram,
    sigma: &Bicoloring,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Line<C>>, Vec<Line<C>>)> {
    if !d.h.is_empty() {
        return Err(LandauError::Unsupported("monodromy start points with external incidences".into()));
    }
    let order = build_order(d)?;
    let ell = d.ell();
    let mut lines: Vec<Option<Line<C>>> = vec![None; ell];
    for &v in &order {
        let prior: Vec<usize> = d.graph.neighbours(v).into_iter().filter(|w| lines[w - 1].is_some()).collect();
        let l = match prior.as_slice() {
            [] => join_points(&rand_point(rng), &rand_point(rng)),
            [j] => join_points(&point_on(lines[j - 1].as_ref().unwrap(), rng)?, &rand_point(rng)),
            [i, j] => {
                let (li, lj) = (lines[i - 1].clone().unwrap(), lines[j - 1].clone().unwrap());
                if d.graph.has_edge(*i, *j) {
                    let mut t = [*i, *j, v];
                    t.sort();
                    let colour = sigma.get(&Triangle::Internal(t)).copied().unwrap_or(Color::Black);
                    match colour {
                        Color::Black => join_points(&intersect_lines(&li, &lj)?, &rand_point(rng)),
                        Color::White => {
                            let p = span_lines(&li, &lj)?;
                            join_points(&point_in(&p, rng), &point_in(&p, rng))
                        }
                    }
                } else {
                    join_points(&point_on(&li, rng)?, &point_on(&lj, rng)?)
                }
            }
            _ => unreachable!(),
        };
        lines[v - 1] = Some(l);
    }
    let lines: Vec<Line<C>> = lines.into_iter().map(|l| l.unwrap()).collect();
    let mut m = vec![];
    for a in 1..=d.d() {
        let o = d.owner(a);
        m.push(join_points(&point_on(&lines[o - 1], rng)?, &rand_point(rng)));
    }
    Ok((lines, m))
}

#[derive(Clone, Debug)]
pub struct MonodromyResult {
    /// External lines of the base fiber.
    pub base: Vec<Line<C>>,
    pub solutions: Vec<FiberSolution>,
    /// Edges of the monodromy graph used.
    pub edges: usize,
    pub tracks: usize,
    /// Both nodes of the monodromy graph ended with the same number of solutions.
    pub balanced: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct MonodromyOptions {
    /// Twisted segments joining the two parameter nodes at the start.
    pub edges: usize,
    /// After closure, edges keep being added until this many in a row bring nothing new.
    pub stall_edges: usize,
    pub max_edges: usize,
    pub max_tracks: usize,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions { edges: 3, stall_edges: 2, max_edges: 12, max_tracks: 200_000 }
    }
}

fn random_edge(a: &[Line<C>], b: &[Line<C>], rng: &mut ChaCha8Rng) -> Segment {
    let g = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)) * 2.0;
    Segment { a: a.to_vec(), b: b.to_vec(), twist: Some((g, rand_external(rng, a.len()))) }
}

/// Fills the fiber over a random base point of the component `σ` by monodromy.
///
/// Two parameter nodes are joined by several twisted segments; every solution known
/// at a node is tracked once along every edge and the endpoints are added to the other
/// node, until both solution sets are closed. Endpoints with the wrong component
/// tag are path jumps and are dropped.
pub fn monodromy_component(
    d: &LandauDiagram,
    sigma: &Bicoloring,
    rng: &mut ChaCha8Rng,
    opts: &MonodromyOptions,
) -> Result<MonodromyResult> {
    let (start, m0) = random_component_point(d, sigma, rng)?;
    let m1 = rand_external(rng, d.d());
    let sys = System::new(d, rng);
    let nodes = [m0.clone(), m1];
    let mut edges: Vec<Segment> = (0..opts.edges).map(|_| random_edge(&nodes[0], &nodes[1], rng)).collect();
    // per node: chart coordinates, solutions, edges already followed
    let mut xs: [Vec<Vec<C>>; 2] = [vec![sys.to_chart(&start)], vec![]];
    let mut sols: [Vec<FiberSolution>; 2] = [vec![make_solution(d, &m0, start)], vec![]];
    let mut done: [Vec<Vec<bool>>; 2] = [vec![vec![false; edges.len()]], vec![]];
    let mut tracks = 0;
    let mut quiet_edges = 0;
    let mut last_count = 0;
    loop {
        let mut jobs = vec![];
        for node in 0..2 {
            for (i, flags) in done[node].iter().enumerate() {
                for (e, &f) in flags.iter().enumerate() {
                    if !f {
                        jobs.push((node, i, e));
                    }
                }
            }
        }
        if jobs.is_empty() {
            let count = sols[0].len().max(sols[1].len());
            quiet_edges = if count > last_count { 0 } else { quiet_edges + 1 };
            last_count = count;
            let settled = sols[0].len() == sols[1].len() && quiet_edges > opts.stall_edges;
            if settled || edges.len() >= opts.max_edges {
                break;
            }
            edges.push(random_edge(&nodes[0], &nodes[1], rng));
            for node in 0..2 {
                for f in done[node].iter_mut() {
                    f.push(false);
                }
            }
            continue;
        }
        if tracks + jobs.len() > opts.max_tracks {
            return Err(LandauError::Numerical(format!("monodromy exceeded {} path tracks", opts.max_tracks)));
        }
        tracks += jobs.len();
        let ends: Vec<(usize, Result<Vec<C>>)> = jobs
            .par_iter()
            .map(|&(node, i, e)| {
                let seg = if node == 0 { edges[e].clone() } else { edges[e].reversed() };
                (1 - node, sys.track_path(&xs[node][i], &seg))
            })
            .collect();
        for &(node, i, e) in &jobs {
            done[node][i][e] = true;
        }
        for (target, end) in ends {
            let Ok(y) = end else { continue };
            let cand = make_solution(d, &nodes[target], sys.lines(&y));
            if cand.max_residual > 1e-8 || cand.component.as_ref().is_some_and(|c| c != sigma) {
                continue;
            }
            if !sols[target].iter().any(|z| solution_distance(z, &cand) < 1e-6) {
                xs[target].push(y);
                sols[target].push(cand);
                done[target].push(vec![false; edges.len()]);
            }
        }
    }
    let balanced = sols[0].len() == sols[1].len();
    let [s0, _] = sols;
    Ok(MonodromyResult { base: m0, solutions: s0, edges: edges.len(), tracks, balanced })
}

/// Moves a full fiber from `from` to `to` along a straight segment.
pub fn transport_fiber(
    d: &LandauDiagram,
    sols: &[FiberSolution],
    from: &[Line<C>],
    to: &[Line<C>],
    rng: &mut ChaCha8Rng,
) -> Vec<Result<FiberSolution>> {
    let sys = System::new(d, rng);
    sols.iter()
        .map(|s| {
            let x = sys.to_chart(&s.lines);
            sys.track(&x, from, to).map(|y| make_solution(d, to, sys.lines(&y)))
        })
        .collect()
}
