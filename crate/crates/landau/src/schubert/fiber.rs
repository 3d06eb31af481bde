//! Fiber solutions, incidence residuals, component classification and Newton
//! refinement of the square Landau system.

use crate::diagram::{Bicoloring, Color, LandauDiagram, Triangle};
use crate::geometry::{imaginary_part, intersect_lines, join_point_line, line_pairing, meet_line_plane, span_lines, Line};
use crate::scalars::{linalg, Field, ToComplex};
use crate::{LandauError, Result};
use num_complex::Complex64;

/// One point of a Landau-map fiber.
#[derive(Clone, Debug)]
pub struct FiberSolution<F: Field = Complex64> {
    /// Internal lines `L₁..L_ℓ`.
    pub lines: Vec<Line<F>>,
    /// Normalized residuals in the order of [`equation_labels`].
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub is_real: bool,
    /// Largest imaginary part after normalizing each line.
    pub max_imag: f64,
    pub component: Option<Bicoloring>,
    pub warnings: Vec<String>,
}

/// Labels of the incidence equations: edges, pendants, then Plücker quadrics.
pub fn equation_labels(d: &LandauDiagram) -> Vec<String> {
    let mut out = vec![];
    for (i, j) in d.graph.edges() {
        out.push(format!("<L{} L{}>", i, j));
    }
    for i in 1..=d.ell() {
        for a in d.externals_at(i) {
            out.push(format!("<L{} M{}>", i, a));
        }
    }
    for i in 1..=d.ell() {
        out.push(format!("quadric L{}", i));
    }
    out
}

fn norm2<F: Field + ToComplex>(l: &Line<F>) -> f64 {
    l.p.iter().map(|c| c.to_c64().norm_sqr()).sum::<f64>().sqrt()
}

/// Raw incidence values in the order of [`equation_labels`].
pub fn incidence_values<F: Field>(d: &LandauDiagram, m: &[Line<F>], lines: &[Line<F>]) -> Vec<F> {
    let mut out = vec![];
    for (i, j) in d.graph.edges() {
        out.push(line_pairing(&lines[i - 1], &lines[j - 1]));
    }
    for i in 1..=d.ell() {
        for a in d.externals_at(i) {
            out.push(line_pairing(&lines[i - 1], &m[a - 1]));
        }
    }
    for l in lines {
        out.push(l.quadric());
    }
    out
}

/// Residuals scaled by the norms of the lines involved.
pub fn normalized_residuals<F: Field + ToComplex>(d: &LandauDiagram, m: &[Line<F>], lines: &[Line<F>]) -> Vec<f64> {
    let vals = incidence_values(d, m, lines);
    let mut scales = vec![];
    for (i, j) in d.graph.edges() {
        scales.push(norm2(&lines[i - 1]) * norm2(&lines[j - 1]));
    }
    for i in 1..=d.ell() {
        for a in d.externals_at(i) {
            scales.push(norm2(&lines[i - 1]) * norm2(&m[a - 1]));
        }
    }
    for l in lines {
        scales.push(norm2(l) * norm2(l));
    }
    vals.iter()
        .zip(scales)
        .map(|(v, s)| if s == 0.0 { f64::INFINITY } else { v.to_c64().norm() / s })
        .collect()
}

/// Concurrent (black) or coplanar (white) for three pairwise incident lines, with the
/// ratio of the two defect measures as a confidence margin (large is confident).
pub fn classify_triangle(l1: &Line<Complex64>, l2: &Line<Complex64>, l3: &Line<Complex64>) -> Result<(Color, f64)> {
    let x = intersect_lines(l1, l2)?;
    let xn = x.x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let pl = join_point_line(&x, l3);
    let conc = pl.c.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / (xn * norm2(l3));
    let p = span_lines(l1, l2)?;
    let pn = p.c.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let q = meet_line_plane(l3, &p);
    let copl = q.x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / (pn * norm2(l3));
    if conc <= copl {
        Ok((Color::Black, copl / conc.max(1e-300)))
    } else {
        Ok((Color::White, conc / copl.max(1e-300)))
    }
}

/// Colours every triangle of the diagram (internal 3-cliques and `H△` triangles).
pub fn classify_solution(d: &LandauDiagram, m: &[Line<Complex64>], lines: &[Line<Complex64>]) -> Result<(Bicoloring, f64)> {
    let mut out = Bicoloring::new();
    let mut margin = f64::INFINITY;
    for t in d.colorable_triangles() {
        let (c, mg) = match t {
            Triangle::Internal([a, b, c]) => classify_triangle(&lines[a - 1], &lines[b - 1], &lines[c - 1])?,
            Triangle::External(i) => {
                let (a, b) = d
                    .h_pair_at(i)
                    .ok_or_else(|| LandauError::Domain(format!("no external pair at vertex {}", i)))?;
                classify_triangle(&lines[i - 1], &m[a - 1], &m[b - 1])?
            }
        };
        out.insert(t, c);
        margin = margin.min(mg);
    }
    Ok((out, margin))
}

/// Builds a solution record with residuals, reality flag and (when the diagram has
/// triangles) component tag.
pub fn make_solution(d: &LandauDiagram, m: &[Line<Complex64>], lines: Vec<Line<Complex64>>) -> FiberSolution {
    let residuals = normalized_residuals(d, m, &lines);
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let max_imag = lines.iter().map(imaginary_part).fold(0.0, f64::max);
    let mut warnings = vec![];
    let component = if d.colorable_triangles().is_empty() {
        None
    } else {
        match classify_solution(d, m, &lines) {
            Ok((c, margin)) => {
                if margin < 1e3 {
                    warnings.push(format!("weak component classification (margin {:.1e})", margin));
                }
                Some(c)
            }
            Err(e) => {
                warnings.push(format!("classification failed: {}", e));
                None
            }
        }
    };
    FiberSolution {
        lines,
        residuals,
        max_residual,
        is_real: max_imag <= 1e-8,
        max_imag,
        component,
        warnings,
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub labels: Vec<String>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// All incidences hold exactly; only meaningful over exact fields.
    pub exact_zero: bool,
    pub pass: bool,
    /// `Some(false)` when the stored component tag disagrees with the geometry.
    pub classification_ok: Option<bool>,
}

/// Checks all incidences and Plücker quadrics; exact fields must vanish exactly,
/// floating fields must stay below `tol` after normalization.
pub fn verify_fiber<F: Field + ToComplex>(d: &LandauDiagram, m: &[Line<F>], sol: &FiberSolution<F>, tol: f64) -> ResidualReport {
    let labels = equation_labels(d);
    let residuals = normalized_residuals(d, m, &sol.lines);
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let exact_zero = F::is_exact() && incidence_values(d, m, &sol.lines).iter().all(|v| v.is_zero());
    let pass = if F::is_exact() { exact_zero } else { max_residual <= tol };
    let classification_ok = sol.component.as_ref().map(|tag| {
        let mc: Vec<Line<Complex64>> = m.iter().map(|l| l.map(|c| c.to_c64())).collect();
        let lc: Vec<Line<Complex64>> = sol.lines.iter().map(|l| l.map(|c| c.to_c64())).collect();
        matches!(classify_solution(d, &mc, &lc), Ok((c, _)) if &c == tag)
    });
    ResidualReport { labels, residuals, max_residual, exact_zero, pass, classification_ok }
}

const PAIR_SIGN: [f64; 6] = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];

/// Gradient of `L ↦ ⟨L M⟩`.
fn pairing_row(m: &Line<Complex64>) -> [Complex64; 6] {
    std::array::from_fn(|k| m.p[5 - k] * PAIR_SIGN[k])
}

/// Newton's method on the square system: incidences, quadrics and one affine
/// normalization per line. Returns the refined lines and the final step size.
pub fn newton_refine(
    d: &LandauDiagram,
    m: &[Line<Complex64>],
    start: &[Line<Complex64>],
    max_iter: usize,
) -> Result<(Vec<Line<Complex64>>, f64)> {
    let ell = d.ell();
    let n = 6 * ell;
    let mut x: Vec<Line<Complex64>> = start.to_vec();
    // normalization covectors c_i with c_i · L_i = 1 at the start
    let norms: Vec<[Complex64; 6]> = x
        .iter()
        .map(|l| {
            let s: f64 = l.p.iter().map(|c| c.norm_sqr()).sum();
            std::array::from_fn(|k| l.p[k].conj() / s)
        })
        .collect();
    let count = d.graph.num_edges() + d.d() + 2 * ell;
    if count != n {
        return Err(LandauError::Dimension(format!(
            "Newton needs a square system, got {} equations in {} unknowns",
            count, n
        )));
    }
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iter {
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        let mut row = 0;
        for (i, j) in d.graph.edges() {
            let (a, b) = (i - 1, j - 1);
            rhs[row] = -line_pairing(&x[a], &x[b]);
            let ga = pairing_row(&x[b]);
            let gb = pairing_row(&x[a]);
            for k in 0..6 {
                jac[row][6 * a + k] = ga[k];
                jac[row][6 * b + k] = gb[k];
            }
            row += 1;
        }
        for i in 1..=ell {
            for e in d.externals_at(i) {
                rhs[row] = -line_pairing(&x[i - 1], &m[e - 1]);
                let g = pairing_row(&m[e - 1]);
                for k in 0..6 {
                    jac[row][6 * (i - 1) + k] = g[k];
                }
                row += 1;
            }
        }
        for i in 0..ell {
            rhs[row] = -x[i].quadric();
            let g = pairing_row(&x[i]);
            for k in 0..6 {
                jac[row][6 * i + k] = g[k];
            }
            row += 1;
        }
        for i in 0..ell {
            let v: Complex64 = (0..6).map(|k| norms[i][k] * x[i].p[k]).sum();
            rhs[row] = Complex64::new(1.0, 0.0) - v;
            for k in 0..6 {
                jac[row][6 * i + k] = norms[i][k];
            }
            row += 1;
        }
        let dx = linalg::solve(&jac, &rhs).ok_or_else(|| LandauError::Numerical("singular Newton system".into()))?;
        let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..ell {
            for k in 0..6 {
                x[i].p[k] += dx[6 * i + k];
            }
        }
        last_step = step;
        if !step.is_finite() {
            return Err(LandauError::Numerical("Newton diverged".into()));
        }
        if step < 1e-14 {
            break;
        }
    }
    Ok((x, last_step))
}

/// Removes near-duplicates (normalized Plücker distance below `tol` on every line).
pub fn dedupe(sols: Vec<FiberSolution>, tol: f64) -> Vec<FiberSolution> {
    let mut out: Vec<FiberSolution> = vec![];
    for s in sols {
        let dup = out.iter().any(|o| solution_distance(o, &s) < tol);
        if !dup {
            out.push(s);
        }
    }
    out
}

/// Largest per-line projective distance between two solutions.
pub fn solution_distance(a: &FiberSolution, b: &FiberSolution) -> f64 {
    a.lines
        .iter()
        .zip(&b.lines)
        .map(|(x, y)| crate::geometry::line_distance(x, y))
        .fold(0.0, f64::max)
}

/// Smallest pairwise distance among solutions; small values flag a nearby discriminant.
pub fn collision_indicator(sols: &[FiberSolution]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..sols.len() {
        for j in i + 1..sols.len() {
            best = best.min(solution_distance(&sols[i], &sols[j]));
        }
    }
    best
}

pub fn lines_to_c64<F: Field + ToComplex>(m: &[Line<F>]) -> Vec<Line<Complex64>> {
    m.iter().map(|l| l.map(|c| c.to_c64())).collect()
}
