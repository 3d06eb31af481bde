//! Totally positive data, positive line configurations, and the reality and
//! copositivity experiments run on them.
//!
//! Totally positive `4 × n` matrices are built as products with elementary
//! bidiagonal factors `x_i(t)` (column `i+1` gains `t` times column `i`, or the
//! transpose) at positive `t`. [`tp_from_parameters`] is the top-cell word on
//! `[I₄ | 0]`, exact but badly conditioned in floating point; the samplers start
//! from a Vandermonde matrix instead.

use crate::diagram::LandauDiagram;
use crate::discriminant::{ls_disc_box, sls_res_penta};
use crate::enumeration::ls_degree;
use crate::geometry::{intersect_lines, join_points, join_three_points, Line, Point};
use crate::rational::{tr_rat_factors, ExternalTriangleData};
use crate::scalars::{ExactRational, Field};
use crate::schubert::fiber::{collision_indicator, lines_to_c64};
use crate::schubert::{solve_box4, solve_fiber, solve_triangle};
use crate::{LandauError, Result};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Largest `n` for which constructors check every maximal minor.
pub const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct TotallyPositiveMatrix<F: Field> {
    pub columns: Vec<Point<F>>,
    /// Generator parameters, in the order the factors were applied. Empty when the
    /// matrix was given directly.
    pub params: Vec<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ParameterDistribution {
    /// `exp` of a uniform variable on `[ln lo, ln hi]`.
    LogUniform { lo: f64, hi: f64 },
    /// Every parameter equal to one.
    Unit,
}

impl Default for ParameterDistribution {
    fn default() -> Self {
        ParameterDistribution::LogUniform { lo: 0.1, hi: 10.0 }
    }
}

impl ParameterDistribution {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ParameterDistribution::LogUniform { lo, hi } => rng.gen_range(lo.ln()..=hi.ln()).exp(),
            ParameterDistribution::Unit => 1.0,
        }
    }
}

fn det4<F: Field>(c: [&Point<F>; 4]) -> F {
    // Laplace along the first two rows
    let m = |r: usize, k: usize| c[k].x[r].clone();
    let mut acc = F::zero();
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        let (c2, d2) = pairs[5 - idx];
        let top = m(0, a) * m(1, b) - m(0, b) * m(1, a);
        let bot = m(2, c2) * m(3, d2) - m(2, d2) * m(3, c2);
        // sign of the permutation (a b c2 d2)
        let inv = [a, b, c2, d2];
        let mut s = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if inv[i] > inv[j] {
                    s += 1;
                }
            }
        }
        let t = top * bot;
        acc = if s % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

/// The maximal minor `⟨z_a z_b z_c z_d⟩` (0-based column indices).
pub fn minor<F: Field>(cols: &[Point<F>], idx: [usize; 4]) -> F {
    det4([&cols[idx[0]], &cols[idx[1]], &cols[idx[2]], &cols[idx[3]]])
}

fn column_quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorReport {
    pub n: usize,
    pub checked: usize,
    /// Offending column quadruples (1-based) with their minors, at most 20 listed.
    pub nonpositive: Vec<([usize; 4], f64)>,
    pub nonpositive_count: usize,
    /// Smallest minor after scaling every column to unit length.
    pub min_normalized: f64,
    pub totally_positive: bool,
}

/// Exhaustive test that every maximal minor is strictly positive.
pub fn minor_report<F: Field + PartialOrd>(cols: &[Point<F>]) -> MinorReport {
    let norms: Vec<f64> = cols.iter().map(|p| p.x.iter().map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt()).collect();
    let mut rep = MinorReport {
        n: cols.len(),
        checked: 0,
        nonpositive: vec![],
        nonpositive_count: 0,
        min_normalized: f64::INFINITY,
        totally_positive: cols.len() >= 4,
    };
    for q in column_quadruples(cols.len()) {
        let v = minor(cols, q);
        rep.checked += 1;
        let sign = if v > F::zero() { 1.0 } else if v < F::zero() { -1.0 } else { 0.0 };
        let scale: f64 = q.iter().map(|&i| norms[i]).product();
        rep.min_normalized = rep.min_normalized.min(sign * v.magnitude() / scale);
        if !(v > F::zero()) {
            rep.totally_positive = false;
            rep.nonpositive_count += 1;
            if rep.nonpositive.len() < 20 {
                rep.nonpositive.push((q.map(|i| i + 1), sign * v.magnitude()));
            }
        }
    }
    rep
}

pub fn is_totally_positive<F: Field + PartialOrd>(cols: &[Point<F>]) -> bool {
    cols.len() >= 4 && column_quadruples(cols.len()).all(|q| minor(cols, q) > F::zero())
}

/// Number of generator parameters for `n` columns.
pub fn parameter_count(n: usize) -> usize {
    4 * n.saturating_sub(4)
}

/// The matrix `[I₄ | 0] · ∏ x_i(t)` for the parameters `t`, in the factor order
/// `r = 4, 3, 2, 1` and `i = r, …, r + n − 5` within each `r`.
pub fn tp_from_parameters<F: Field + PartialOrd>(n: usize, params: &[F]) -> Result<TotallyPositiveMatrix<F>> {
    if n < 4 {
        return Err(LandauError::Precondition(format!("need n ≥ 4 columns, got {}", n)));
    }
    if params.len() != parameter_count(n) {
        return Err(LandauError::Dimension(format!("{} parameters for n = {}, expected {}", params.len(), n, parameter_count(n))));
    }
    if let Some(k) = params.iter().position(|t| !(*t > F::zero())) {
        return Err(LandauError::Domain(format!("parameter {} is not positive", k)));
    }
    let mut cols: Vec<Point<F>> = (0..n)
        .map(|j| Point::new(std::array::from_fn(|r| if r == j { F::one() } else { F::zero() })))
        .collect();
    let mut it = params.iter();
    for r in (0..4).rev() {
        for i in r..r + n - 4 {
            let t = it.next().unwrap();
            cols[i + 1] = cols[i + 1].add(&cols[i].scale(t));
        }
    }
    Ok(TotallyPositiveMatrix { columns: cols, params: params.to_vec() })
}

fn verified<F: Field + PartialOrd>(m: TotallyPositiveMatrix<F>) -> Result<TotallyPositiveMatrix<F>> {
    if m.n() <= EXHAUSTIVE_LIMIT {
        let rep = minor_report(&m.columns);
        if !rep.totally_positive {
            return Err(LandauError::Numerical(format!(
                "{} of {} minors failed the positivity check",
                rep.nonpositive_count, rep.checked
            )));
        }
    }
    Ok(m)
}

/// Factors per column pair in [`tp_from_nodes`]: two sweeps of upper and lower
/// bidiagonal factors.
pub const SWEEPS: usize = 2;

/// Parameters of [`tp_from_nodes`] for `n` columns: the nodes, then the factors.
pub fn sample_parameter_count(n: usize) -> usize {
    n + 2 * SWEEPS * n.saturating_sub(1)
}

/// Vandermonde columns `(1, s, s², s³)` at increasing nodes `s`, multiplied on the
/// right by [`SWEEPS`] rounds of elementary bidiagonal factors: first column `i+1`
/// gains `t` times column `i`, then column `i` gains `t` times column `i+1`.
///
/// Each factor is totally nonnegative with unit diagonal, so by Cauchy–Binet every
/// maximal minor only grows. Unlike the top-cell word this keeps floating-point
/// minors well away from zero.
pub fn tp_from_nodes<F: Field + PartialOrd>(nodes: &[F], factors: &[F]) -> Result<TotallyPositiveMatrix<F>> {
    let n = nodes.len();
    if n < 4 {
        return Err(LandauError::Precondition(format!("need n ≥ 4 columns, got {}", n)));
    }
    if factors.len() != 2 * SWEEPS * (n - 1) {
        return Err(LandauError::Dimension(format!("{} factor parameters for n = {}", factors.len(), n)));
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LandauError::Domain("Vandermonde nodes must increase".into()));
    }
    if let Some(k) = factors.iter().position(|t| !(*t > F::zero())) {
        return Err(LandauError::Domain(format!("factor parameter {} is not positive", k)));
    }
    let mut cols: Vec<Point<F>> = nodes
        .iter()
        .map(|s| Point::new([F::one(), s.clone(), s.clone() * s.clone(), s.clone() * s.clone() * s.clone()]))
        .collect();
    let mut it = factors.iter();
    for _ in 0..SWEEPS {
        for i in (0..n - 1).rev() {
            cols[i + 1] = cols[i + 1].add(&cols[i].scale(it.next().unwrap()));
        }
        for i in 0..n - 1 {
            cols[i] = cols[i].add(&cols[i + 1].scale(it.next().unwrap()));
        }
    }
    let mut params = nodes.to_vec();
    params.extend(factors.iter().cloned());
    Ok(TotallyPositiveMatrix { columns: cols, params })
}

/// A random totally positive `4 × n` matrix in floating point.
///
/// Nodes are spread over `[−1, 1]` with log-uniform gaps, factor parameters follow
/// `dist`. Columns are scaled to unit length, which keeps the lines and the minor
/// signs. For `n ≤ 24` every minor is checked.
pub fn sample_tp_matrix(n: usize, seed: u64, dist: ParameterDistribution) -> Result<TotallyPositiveMatrix<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_tp_matrix_with(n, &mut rng, dist)
}

pub fn sample_tp_matrix_with(n: usize, rng: &mut ChaCha8Rng, dist: ParameterDistribution) -> Result<TotallyPositiveMatrix<f64>> {
    if let ParameterDistribution::LogUniform { lo, hi } = dist {
        if !(lo > 0.0 && hi >= lo) {
            return Err(LandauError::Domain(format!("log-uniform range [{}, {}] must be positive", lo, hi)));
        }
    }
    if n < 4 {
        return Err(LandauError::Precondition(format!("need n ≥ 4 columns, got {}", n)));
    }
    let gaps: Vec<f64> = (0..n - 1).map(|_| dist.sample(rng)).collect();
    let total: f64 = gaps.iter().sum();
    let mut nodes = vec![-1.0];
    for g in &gaps {
        let last = *nodes.last().unwrap();
        nodes.push(last + 2.0 * g / total);
    }
    let factors: Vec<f64> = (0..2 * SWEEPS * (n - 1)).map(|_| dist.sample(rng)).collect();
    let mut m = tp_from_nodes(&nodes, &factors)?;
    for c in m.columns.iter_mut() {
        let s = c.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        *c = c.scale(&(1.0 / s));
    }
    verified(m)
}

/// A random totally positive matrix over `Q`: integer nodes with gaps in `1..=4`,
/// factor parameters `k/4` for `k ∈ 1..=40`.
pub fn sample_tp_matrix_exact(n: usize, seed: u64) -> Result<TotallyPositiveMatrix<ExactRational>> {
    if n < 4 {
        return Err(LandauError::Precondition(format!("need n ≥ 4 columns, got {}", n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = vec![crate::scalars::rat_int(-(n as i64))];
    for _ in 1..n {
        let last = nodes.last().unwrap().clone();
        nodes.push(last + crate::scalars::rat_int(rng.gen_range(1..=4)));
    }
    let factors: Vec<ExactRational> =
        (0..2 * SWEEPS * (n - 1)).map(|_| crate::scalars::rat(rng.gen_range(1..=40), 4)).collect();
    verified(tp_from_nodes(&nodes, &factors)?)
}

/// The `4 × 10` parametrization of `Gr_{>0}(4,10)` by 24 parameters `a, …, x`,
/// whose maximal minors are subtraction-free.
pub fn explicit_z10<F: Field>(t: &[F; 24]) -> Vec<Point<F>> {
    let v = |c: char| t[(c as u8 - b'a') as usize].clone();
    let [a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r, s, tt, u, vv, w, x] =
        ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's', 't', 'u', 'v', 'w', 'x']
            .map(v);
    let (z, one) = (F::zero(), F::one());
    // first coordinates
    let g1 = g.clone() + k.clone();
    let g2 = g1.clone() + o.clone();
    let g3 = g2.clone() + s.clone();
    let g4 = g3.clone() + vv.clone();
    let h1 = g.clone() * h.clone() + g1.clone() * l.clone();
    let h2 = h1.clone() + g2.clone() * p.clone();
    let h3 = h2.clone() + g3.clone() * tt.clone();
    let i1 = g.clone() * h.clone() * i.clone() + h1.clone() * m.clone();
    let i2 = i1.clone() + h2.clone() * q.clone();
    // second coordinates
    let d1 = d.clone() + h.clone();
    let d2 = d1.clone() + l.clone();
    let d3 = d2.clone() + p.clone();
    let d4 = d3.clone() + tt.clone();
    let e1 = d.clone() * e.clone() + d1.clone() * i.clone();
    let e2 = e1.clone() + d2.clone() * m.clone();
    let e3 = e2.clone() + d3.clone() * q.clone();
    // third coordinates
    let b1 = b.clone() + e.clone();
    let b2 = b1.clone() + i.clone();
    let b3 = b2.clone() + m.clone();
    let b4 = b3.clone() + q.clone();
    let cols = [
        [one.clone(), z.clone(), z.clone(), z.clone()],
        [g4.clone() + x.clone(), one.clone(), z.clone(), z.clone()],
        [h3.clone() + g4.clone() * w.clone(), d4.clone() + w.clone(), one.clone(), z.clone()],
        [i2.clone() + h3.clone() * u.clone(), e3.clone() + d4.clone() * u.clone(), b4.clone() + u.clone(), one.clone()],
        [i2.clone() * r.clone(), e3.clone() * r.clone(), b4.clone() * r.clone(), r.clone()],
        [i1.clone() * n.clone(), e2.clone() * n.clone(), b3.clone() * n.clone(), n.clone()],
        [g.clone() * h.clone() * i.clone() * j.clone(), e1.clone() * j.clone(), b2.clone() * j.clone(), j.clone()],
        [z.clone(), d.clone() * e.clone() * f.clone(), b1.clone() * f.clone(), f.clone()],
        [z.clone(), z.clone(), b.clone() * c.clone(), c.clone()],
        [z.clone(), z.clone(), z.clone(), a.clone()],
    ];
    cols.into_iter().map(Point::new).collect()
}

impl<F: Field> TotallyPositiveMatrix<F> {
    pub fn from_columns(columns: Vec<Point<F>>) -> Self {
        TotallyPositiveMatrix { columns, params: vec![] }
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    /// Copy with column `j` (0-based) negated.
    pub fn negate_column(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.columns[j] = out.columns[j].scale(&(-F::one()));
        out
    }

    /// Rows of the `4 × n` matrix.
    pub fn rows(&self) -> Vec<Vec<F>> {
        (0..4).map(|r| self.columns.iter().map(|c| c.x[r].clone()).collect()).collect()
    }
}

impl TotallyPositiveMatrix<ExactRational> {
    pub fn to_f64(&self) -> TotallyPositiveMatrix<f64> {
        let f = |q: &ExactRational| q.to_f64().unwrap_or(f64::NAN);
        TotallyPositiveMatrix { columns: self.columns.iter().map(|c| c.map(f)).collect(), params: self.params.iter().map(f).collect() }
    }
}

/// External lines spanned by pairs of consecutive columns of a totally positive matrix.
#[derive(Clone, Debug)]
pub struct PositiveLineConfiguration<F: Field> {
    pub z: TotallyPositiveMatrix<F>,
    /// `(p_i, p_i + 1)` per external line, 1-based.
    pub pairs: Vec<(usize, usize)>,
}

/// Starting columns `p_1 = 1 < p_2 < …`: an external line incident to its successor
/// shares a column with it, any other pair of neighbours is disjoint.
pub fn column_pairs(d: &LandauDiagram) -> Result<Vec<(usize, usize)>> {
    for &(a, b) in &d.h {
        if a.abs_diff(b) != 1 {
            return Err(LandauError::Unsupported(format!(
                "incident external lines {} and {} are not cyclic neighbours",
                a, b
            )));
        }
    }
    let mut out = vec![(1, 2)];
    for a in 1..d.d() {
        let p = out[a - 1].0;
        let step = if d.h.contains(&(a, a + 1)) || d.h.contains(&(a + 1, a)) { 1 } else { 2 };
        out.push((p + step, p + step + 1));
    }
    Ok(out)
}

/// Columns a positive configuration for `d` uses.
pub fn columns_needed(d: &LandauDiagram) -> Result<usize> {
    Ok(column_pairs(d)?.last().map(|p| p.1).unwrap_or(0))
}

impl<F: Field> PositiveLineConfiguration<F> {
    /// Uses the leading columns of `z`; the rest are left for promotion checks.
    pub fn for_diagram(d: &LandauDiagram, z: TotallyPositiveMatrix<F>) -> Result<Self> {
        let pairs = column_pairs(d)?;
        let need = pairs.last().map(|p| p.1).unwrap_or(0);
        if z.n() < need {
            return Err(LandauError::Dimension(format!("diagram needs {} columns, matrix has {}", need, z.n())));
        }
        Ok(PositiveLineConfiguration { z, pairs })
    }

    pub fn lines(&self) -> Vec<Line<F>> {
        self.pairs.iter().map(|&(a, b)| join_points(&self.z.columns[a - 1], &self.z.columns[b - 1])).collect()
    }

    /// `H△` data read off the columns: the shared column is `p`, the three columns
    /// of the pair span `P`. Everything built from it stays polynomial in `Z`.
    pub fn triangle_data(&self, d: &LandauDiagram) -> Result<Vec<ExternalTriangleData<F>>> {
        if !d.h_triangle {
            return Err(LandauError::Precondition("diagram carries no H△ degeneration".into()));
        }
        let m = self.lines();
        let col = |k: usize| self.z.columns[k - 1].clone();
        (1..=d.ell())
            .map(|i| {
                let (a, b) = d.h_pair_at(i).ok_or_else(|| LandauError::Domain(format!("no H△ pair at vertex {}", i)))?;
                let (a, b) = (a.min(b), a.max(b));
                let (pa, pb) = (self.pairs[a - 1], self.pairs[b - 1]);
                let free = d.externals_at(i).into_iter().filter(|&x| x != a && x != b).map(|x| m[x - 1].clone()).collect();
                Ok(ExternalTriangleData {
                    p: col(pb.0),
                    plane: join_three_points(&col(pa.0), &col(pb.0), &col(pb.1)),
                    free,
                })
            })
            .collect()
    }
}

/// Seed of trial `i`, independent of scheduling.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial as u64);
    r.gen()
}

fn parallel_map<T: Send>(trials: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(f).collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RealityOptions {
    pub trials: usize,
    pub seed: u64,
    pub dist: ParameterDistribution,
    /// A solution is real when the largest imaginary part of its normalized lines is below this.
    pub imag_tol: f64,
    pub residual_tol: f64,
}

impl RealityOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        RealityOptions { trials, seed, dist: ParameterDistribution::default(), imag_tol: 1e-6, residual_tol: 1e-7 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TrialStatus {
    AllReal,
    /// Some fiber point is not real: a counterexample candidate.
    NotReal,
    /// The solver failed or returned the wrong number of points.
    Inconclusive(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct RealityTrial {
    pub trial: usize,
    pub seed: u64,
    pub count: usize,
    pub real_count: usize,
    pub max_imag: f64,
    pub max_residual: f64,
    /// Smallest distance between two fiber points.
    pub margin: f64,
    pub status: TrialStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealityReport {
    pub trials: usize,
    pub expected: usize,
    pub all_real: usize,
    pub not_real: usize,
    pub inconclusive: usize,
    pub max_imag: f64,
    pub min_margin: f64,
    pub max_residual: f64,
    /// Fiber sizes seen in conclusive trials, with multiplicities.
    pub counts: Vec<(usize, usize)>,
    /// Per component, the fiber sizes seen (components only for diagrams with triangles).
    pub component_counts: Vec<(String, Vec<usize>)>,
    pub records: Vec<RealityTrial>,
}

impl RealityReport {
    pub fn failures(&self) -> Vec<&RealityTrial> {
        self.records.iter().filter(|r| r.status != TrialStatus::AllReal).collect()
    }
}

/// Number of fiber points the experiment expects for `d`.
pub fn expected_count(d: &LandauDiagram) -> Result<usize> {
    if d.h_triangle {
        return Ok(1usize << d.colorable_triangles().len());
    }
    ls_degree(&d.graph, &d.u)?.to_usize().ok_or_else(|| LandauError::Size("LS degree does not fit".into()))
}

/// Solves the fiber over one real configuration and classifies it.
pub fn fiber_reality(d: &LandauDiagram, m: &[Line<f64>], opts: &RealityOptions, solver_seed: u64) -> Result<RealityTrial> {
    Ok(fiber_reality_with_components(d, m, expected_count(d)?, opts, solver_seed).0)
}

fn fiber_reality_with_components(
    d: &LandauDiagram,
    m: &[Line<f64>],
    expected: usize,
    opts: &RealityOptions,
    solver_seed: u64,
) -> (RealityTrial, Vec<(String, usize)>) {
    let mut rec = RealityTrial {
        trial: 0,
        seed: solver_seed,
        count: 0,
        real_count: 0,
        max_imag: 0.0,
        max_residual: 0.0,
        margin: f64::INFINITY,
        status: TrialStatus::AllReal,
    };
    let sols = match solve_fiber(d, &lines_to_c64(m), solver_seed) {
        Ok((_, s)) => s,
        Err(e) => {
            rec.status = TrialStatus::Inconclusive(e.to_string());
            return (rec, vec![]);
        }
    };
    let sols: Vec<_> = sols.into_iter().filter(|s| s.max_residual <= opts.residual_tol).collect();
    rec.count = sols.len();
    rec.real_count = sols.iter().filter(|s| s.max_imag <= opts.imag_tol).count();
    rec.max_imag = sols.iter().map(|s| s.max_imag).fold(0.0, f64::max);
    rec.max_residual = sols.iter().map(|s| s.max_residual).fold(0.0, f64::max);
    rec.margin = collision_indicator(&sols);
    let mut comps = std::collections::BTreeMap::<String, usize>::new();
    for s in &sols {
        if let Some(c) = &s.component {
            *comps.entry(crate::diagram::coloring_word(c)).or_default() += 1;
        }
    }
    rec.status = if rec.real_count < rec.count {
        TrialStatus::NotReal
    } else if rec.count != expected {
        TrialStatus::Inconclusive(format!("found {} of {} fiber points", rec.count, expected))
    } else {
        TrialStatus::AllReal
    };
    (rec, comps.into_iter().collect())
}

/// Solves the fiber over positive configurations and records whether it is fully real.
///
/// A trial whose solver fails or returns the wrong number of points is kept as
/// inconclusive; only a fiber with a non-real point counts against reality.
pub fn reality_experiment(d: &LandauDiagram, opts: &RealityOptions) -> Result<RealityReport> {
    let expected = expected_count(d)?;
    let n = columns_needed(d)?;
    let run = |trial: usize| -> (RealityTrial, Vec<(String, usize)>) {
        let seed = trial_seed(opts.seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = sample_tp_matrix_with(n, &mut rng, opts.dist).and_then(|z| PositiveLineConfiguration::for_diagram(d, z));
        let (mut rec, comps) = match cfg {
            Ok(cfg) => fiber_reality_with_components(d, &cfg.lines(), expected, opts, rng.gen()),
            Err(e) => (
                RealityTrial {
                    trial,
                    seed,
                    count: 0,
                    real_count: 0,
                    max_imag: 0.0,
                    max_residual: 0.0,
                    margin: f64::INFINITY,
                    status: TrialStatus::Inconclusive(e.to_string()),
                },
                vec![],
            ),
        };
        rec.trial = trial;
        rec.seed = seed;
        (rec, comps)
    };
    let results = parallel_map(opts.trials, run);
    let mut rep = RealityReport {
        trials: opts.trials,
        expected,
        all_real: 0,
        not_real: 0,
        inconclusive: 0,
        max_imag: 0.0,
        min_margin: f64::INFINITY,
        max_residual: 0.0,
        counts: vec![],
        component_counts: vec![],
        records: vec![],
    };
    let mut counts = std::collections::BTreeMap::<usize, usize>::new();
    let mut comp = std::collections::BTreeMap::<String, std::collections::BTreeSet<usize>>::new();
    for (r, cs) in results {
        match r.status {
            TrialStatus::AllReal => rep.all_real += 1,
            TrialStatus::NotReal => rep.not_real += 1,
            TrialStatus::Inconclusive(_) => rep.inconclusive += 1,
        }
        if !matches!(r.status, TrialStatus::Inconclusive(_)) {
            *counts.entry(r.count).or_default() += 1;
            rep.max_imag = rep.max_imag.max(r.max_imag);
            rep.min_margin = rep.min_margin.min(r.margin);
            rep.max_residual = rep.max_residual.max(r.max_residual);
            for (w, k) in cs {
                comp.entry(w).or_default().insert(k);
            }
        }
        rep.records.push(r);
    }
    rep.counts = counts.into_iter().collect();
    rep.component_counts = comp.into_iter().map(|(w, s)| (w, s.into_iter().collect())).collect();
    Ok(rep)
}

/// Closed forms the copositivity experiment can evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CopositivityEvaluator {
    /// `Δ_{K₁,(4)}` on four lines from a `4 × 8` matrix.
    BoxDiscriminant,
    /// `R_{K₁,(5)}` on five lines from a `4 × 10` matrix.
    PentagonResultant,
    /// The eight mixed factors `⟨p P⟩` of the degenerate triangle, on a `4 × 15` matrix.
    TriangleMixed,
    /// The twelve component factors `⟨L L′⟩` of the degenerate triangle.
    TriangleComponent,
}

impl CopositivityEvaluator {
    pub fn columns(&self) -> usize {
        match self {
            CopositivityEvaluator::BoxDiscriminant => 8,
            CopositivityEvaluator::PentagonResultant => 10,
            _ => 15,
        }
    }

    /// The box discriminant and the pentagon resultant are expected to be
    /// strictly positive on positive data; the triangle factors are not.
    pub fn conjectured_positive(&self) -> bool {
        matches!(self, CopositivityEvaluator::BoxDiscriminant | CopositivityEvaluator::PentagonResultant)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "box" | "ls_disc_box" => Ok(CopositivityEvaluator::BoxDiscriminant),
            "penta" | "sls_res_penta" => Ok(CopositivityEvaluator::PentagonResultant),
            "tr_mixed" | "mixed" => Ok(CopositivityEvaluator::TriangleMixed),
            "tr_component" | "component" => Ok(CopositivityEvaluator::TriangleComponent),
            _ => Err(LandauError::Parse(format!("unknown evaluator {:?}", s))),
        }
    }

    /// Labelled values on the lines spanned by consecutive column pairs of `z`.
    pub fn evaluate<F: Field>(&self, z: &TotallyPositiveMatrix<F>) -> Result<Vec<(String, F)>> {
        let pair = |i: usize| join_points(&z.columns[2 * i], &z.columns[2 * i + 1]);
        match self {
            CopositivityEvaluator::BoxDiscriminant => {
                Ok(vec![("Δ box".into(), ls_disc_box(&std::array::from_fn(pair)))])
            }
            CopositivityEvaluator::PentagonResultant => {
                Ok(vec![("R penta".into(), sls_res_penta(&std::array::from_fn(pair)))])
            }
            CopositivityEvaluator::TriangleMixed | CopositivityEvaluator::TriangleComponent => {
                let d = triangle_h_diagram();
                let cfg = PositiveLineConfiguration::for_diagram(&d, z.clone())?;
                let data: [ExternalTriangleData<F>; 3] = cfg.triangle_data(&d)?.try_into().unwrap();
                let mut out = vec![];
                if *self == CopositivityEvaluator::TriangleMixed {
                    let (_, mixed) = tr_rat_factors(&data, crate::diagram::Color::Black)?;
                    out.extend(mixed.into_iter().map(|f| (f.label, f.value)));
                } else {
                    for c in [crate::diagram::Color::Black, crate::diagram::Color::White] {
                        let (comp, _) = tr_rat_factors(&data, c)?;
                        out.extend(comp.into_iter().map(|f| (format!("{} {}", c.letter(), f.label), f.value)));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn triangle_h_diagram() -> LandauDiagram {
    crate::diagram::build_h_triangle(&crate::diagram::families::complete(3), &[3, 3, 3]).unwrap()
}

#[derive(Clone, Debug, Serialize)]
pub struct CopositivityViolation {
    pub trial: usize,
    pub seed: u64,
    pub label: String,
    pub value: f64,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorSigns {
    pub label: String,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CopositivityReport {
    pub evaluator: CopositivityEvaluator,
    pub trials: usize,
    pub seed: u64,
    /// Smallest value over all factors and trials.
    pub min_value: f64,
    /// Nonpositive values found, over all factors.
    pub sign_violations: usize,
    /// The first 20 violations, with the generator parameters that produced them.
    pub violations: Vec<CopositivityViolation>,
    pub factors: Vec<FactorSigns>,
    /// Per-trial smallest value, in trial order.
    pub per_trial_min: Vec<f64>,
}

impl CopositivityReport {
    /// Some factor took both signs.
    pub fn sign_changes(&self) -> bool {
        self.factors.iter().any(|f| f.positive > 0 && f.negative > 0)
    }
}

/// Evaluates a closed form on random positive configurations.
pub fn copositivity_experiment(ev: CopositivityEvaluator, trials: usize, seed: u64, dist: ParameterDistribution) -> Result<CopositivityReport> {
    let n = ev.columns();
    let results = parallel_map(trials, |trial| {
        let s = trial_seed(seed, trial);
        let z = sample_tp_matrix(n, s, dist)?;
        Ok::<_, LandauError>((s, z.params.clone(), ev.evaluate(&z)?))
    });
    let mut rep = CopositivityReport {
        evaluator: ev,
        trials,
        seed,
        min_value: f64::INFINITY,
        sign_violations: 0,
        violations: vec![],
        factors: vec![],
        per_trial_min: vec![],
    };
    for (trial, r) in results.into_iter().enumerate() {
        let (s, params, vals) = r?;
        if rep.factors.is_empty() {
            rep.factors = vals
                .iter()
                .map(|(l, _)| FactorSigns { label: l.clone(), positive: 0, negative: 0, zero: 0, min: f64::INFINITY, max: f64::NEG_INFINITY })
                .collect();
        }
        let mut tmin = f64::INFINITY;
        for (k, (label, v)) in vals.into_iter().enumerate() {
            let f = &mut rep.factors[k];
            f.min = f.min.min(v);
            f.max = f.max.max(v);
            if v > 0.0 {
                f.positive += 1;
            } else if v < 0.0 {
                f.negative += 1;
            } else {
                f.zero += 1;
            }
            tmin = tmin.min(v);
            if !(v > 0.0) {
                rep.sign_violations += 1;
                if rep.violations.len() < 20 {
                    rep.violations.push(CopositivityViolation { trial, seed: s, label, value: v, params: params.clone() });
                }
            }
        }
        rep.min_value = rep.min_value.min(tmin);
        rep.per_trial_min.push(tmin);
    }
    Ok(rep)
}

/// Which substitution a promotion check applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Promotion {
    /// Four-mass box on `M₁..M₄`, transversal `branch ∈ {0, 1}`.
    Box { branch: usize },
    /// Triangle `K₃`, `u = (3,3,3)` on `M₁..M₉`, every fiber point.
    Triangle,
}

#[derive(Clone, Debug, Serialize)]
pub struct PromotionReport {
    pub label: String,
    /// Largest imaginary part among the substituted points.
    pub max_imag: f64,
    pub real: bool,
    /// The matrix is totally positive with every substituted point normalized to a
    /// positive first nonzero coordinate.
    pub first_coordinate_rule: bool,
    /// Order of the substituted columns that was used.
    pub order: String,
    /// Signs of the substituted columns giving the report below; the first-coordinate
    /// representatives when no sign pattern works.
    pub signs: Vec<i8>,
    pub report: Option<MinorReport>,
    /// Some choice of representatives of the substituted points gives a totally
    /// positive matrix, so the promoted line configuration is positive.
    pub totally_positive: bool,
}

/// Fixes the sign of a real point so its first nonzero coordinate is positive.
pub fn sign_normalize(p: &Point<f64>) -> Point<f64> {
    let scale = p.x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    match p.x.iter().find(|v| v.abs() > 1e-12 * scale) {
        Some(v) if *v < 0.0 => p.scale(&-1.0),
        _ => p.clone(),
    }
}

fn real_point(p: &Point<Complex64>) -> (Point<f64>, f64) {
    // rotate so the largest coordinate is real, then drop the imaginary parts
    let big = p.x.iter().cloned().fold(Complex64::zero(), |a, v| if v.norm() > a.norm() { v } else { a });
    let ph = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex64::new(1.0, 0.0) };
    let q: Vec<Complex64> = p.x.iter().map(|v| v * ph).collect();
    let nrm = q.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let imag = q.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / nrm;
    (Point::new(std::array::from_fn(|k| q[k].re / nrm)), imag)
}

/// Tests the substituted columns, in each candidate order, with every sign pattern.
/// The first candidate under the first-coordinate rule decides `first_coordinate_rule`.
fn promoted(label: String, candidates: Vec<(String, Vec<Point<Complex64>>)>, rest: &[Point<f64>], tol: f64) -> PromotionReport {
    let mut orders = vec![];
    let mut max_imag: f64 = 0.0;
    for (name, pts) in &candidates {
        let mut base = vec![];
        for p in pts {
            let (r, im) = real_point(p);
            max_imag = max_imag.max(im);
            base.push(sign_normalize(&r));
        }
        orders.push((name.clone(), base));
    }
    let k = orders[0].1.len();
    let real = max_imag <= tol;
    let mut out = PromotionReport {
        label,
        max_imag,
        real,
        first_coordinate_rule: false,
        order: orders[0].0.clone(),
        signs: vec![1; k],
        report: None,
        totally_positive: false,
    };
    if !real {
        return out;
    }
    let with_signs = |base: &[Point<f64>], mask: usize| {
        let mut cols: Vec<Point<f64>> =
            base.iter().enumerate().map(|(i, p)| if (mask >> i) & 1 == 1 { p.scale(&-1.0) } else { p.clone() }).collect();
        cols.extend(rest.iter().cloned());
        minor_report(&cols)
    };
    let signs = |mask: usize| (0..k).map(|i| if (mask >> i) & 1 == 1 { -1 } else { 1 }).collect::<Vec<i8>>();
    let first = with_signs(&orders[0].1, 0);
    out.first_coordinate_rule = first.totally_positive;
    out.totally_positive = first.totally_positive;
    out.report = Some(first);
    if out.totally_positive {
        return out;
    }
    for (name, base) in &orders {
        for mask in 0..1usize << k {
            let rep = with_signs(base, mask);
            if rep.totally_positive {
                out.order = name.clone();
                out.signs = signs(mask);
                out.report = Some(rep);
                out.totally_positive = true;
                return out;
            }
        }
    }
    out
}

/// Substitutes the fiber of a box or triangle into `z` and tests the resulting
/// matrix for total positivity.
///
/// Box: `[v | w | z₉ … z_n]` with `v = X ∩ M₁`, `w = X ∩ M₂`, for one transversal
/// `X` of `M₁..M₄`. Triangle: `[x | p | y | z₁₉ … z_n]` with `x = L₁ ∩ M₁`,
/// `p = L₁ ∩ L₃`, `y = L₃ ∩ M₉`, where `L₁` and `L₃` carry `M₁` and `M₉`.
/// Substituted points start from the first-nonzero-coordinate-positive sign. Since
/// they are projective, every other sign pattern is tried before declaring failure,
/// and for the box also the order `[w | v]`: both orders span the same line `X`.
pub fn promotion_positivity_check(z: &TotallyPositiveMatrix<f64>, kind: Promotion) -> Result<Vec<PromotionReport>> {
    let c64: Vec<Point<Complex64>> = z.columns.iter().map(|p| p.map(|v| Complex64::new(*v, 0.0))).collect();
    let m = |i: usize| join_points(&c64[2 * i], &c64[2 * i + 1]);
    let tol = 1e-7;
    match kind {
        Promotion::Box { branch } => {
            if z.n() < 8 {
                return Err(LandauError::Precondition(format!("box promotion needs n ≥ 8, got {}", z.n())));
            }
            if branch > 1 {
                return Err(LandauError::Domain(format!("box branch {} is not 0 or 1", branch)));
            }
            let ms: [Line<Complex64>; 4] = std::array::from_fn(m);
            let sol = solve_box4(&ms[0], &ms[1], &ms[2], &ms[3])?;
            let x = &sol.lines[branch];
            let v = intersect_lines(x, &ms[0])?;
            let w = intersect_lines(x, &ms[1])?;
            let cands = vec![("v w".to_string(), vec![v.clone(), w.clone()]), ("w v".to_string(), vec![w, v])];
            Ok(vec![promoted(format!("box branch {}", branch), cands, &z.columns[8..], tol)])
        }
        Promotion::Triangle => {
            if z.n() < 21 {
                return Err(LandauError::Precondition(format!("triangle promotion needs n ≥ 21, got {}", z.n())));
            }
            let d = LandauDiagram::new(crate::diagram::families::complete(3), vec![3, 3, 3])?;
            let ms: Vec<Line<Complex64>> = (0..9).map(m).collect();
            let sols = solve_triangle(&d, &ms)?;
            let (a, b) = (d.owner(1), d.owner(9));
            let mut out = vec![];
            for s in &sols {
                let label = s.component.as_ref().map(crate::diagram::coloring_word).unwrap_or_default();
                let (la, lb) = (&s.lines[a - 1], &s.lines[b - 1]);
                let pts = [intersect_lines(la, &ms[0]), intersect_lines(la, lb), intersect_lines(lb, &ms[8])];
                match pts {
                    [Ok(x), Ok(p), Ok(y)] => out.push(promoted(label, vec![("x p y".to_string(), vec![x, p, y])], &z.columns[18..], tol)),
                    _ => return Err(LandauError::Numerical(format!("degenerate intersection on component {}", label))),
                }
            }
            Ok(out)
        }
    }
}
