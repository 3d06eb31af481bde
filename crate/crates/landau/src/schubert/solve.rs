//! One entry point that picks a fiber solver from the shape of the diagram.

use super::cycle::solve_cycle;
use super::fiber::{dedupe, make_solution, FiberSolution};
use super::homotopy::{monodromy_component, transport_fiber, MonodromyOptions};
use super::tree::solve_tree;
use crate::diagram::{all_bicolorings, LandauDiagram};
use crate::geometry::{join_points, Line, Point};
use crate::rational::{tree_lines_raw, triangle_lines_raw, ExternalTriangleData};
use crate::{LandauError, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which solver [`solve_fiber`] used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverRoute {
    Tree,
    Cycle,
    /// Grassmann–Cayley construction of the `H△` fiber.
    Rational,
    /// Per-component monodromy, transported to the requested data.
    Monodromy,
}

fn is_cycle(d: &LandauDiagram) -> bool {
    let ell = d.ell();
    ell >= 3 && d.graph.num_edges() == ell && (1..=ell).all(|i| d.graph.has_edge(i, if i == ell { 1 } else { i + 1 }))
}

pub fn route_for(d: &LandauDiagram) -> SolverRoute {
    if d.h_triangle && (d.graph.is_tree() || (d.ell() == 3 && d.u == vec![3, 3, 3] && is_cycle(d))) {
        SolverRoute::Rational
    } else if d.graph.is_tree() {
        SolverRoute::Tree
    } else if is_cycle(d) && d.u.iter().all(|&x| x == 3) && d.h.is_empty() {
        SolverRoute::Cycle
    } else {
        SolverRoute::Monodromy
    }
}

/// The 16 points of the triangle fiber, `K₃` with `u = (3,3,3)`.
pub fn solve_triangle(d: &LandauDiagram, m: &[Line<Complex64>]) -> Result<Vec<FiberSolution>> {
    if d.ell() != 3 || d.u != vec![3, 3, 3] || !is_cycle(d) {
        return Err(LandauError::Precondition("expects K₃ with u = (3,3,3)".into()));
    }
    if d.h_triangle {
        return rational_fiber(d, m);
    }
    solve_cycle_robust(d, m, 0x7472_6961)
}

fn random_c64_lines(n: usize, rng: &mut ChaCha8Rng) -> Vec<Line<Complex64>> {
    let mut pt = || Point::new(std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    (0..n).map(|_| join_points(&pt(), &pt())).collect()
}

/// The cycle fiber, completed by homotopy when the roots of `f_ℓ` miss points.
///
/// On real data, and on data from totally positive matrices in particular, the
/// sampled cycle polynomial can lose roots. The fallback solves random complex data,
/// where the polynomial is well behaved, and transports that full fiber to `m`.
pub fn solve_cycle_robust(d: &LandauDiagram, m: &[Line<Complex64>], seed: u64) -> Result<Vec<FiberSolution>> {
    let direct = solve_cycle(d, m, None, 1e-8)?;
    if direct.solutions.len() >= direct.expected {
        return Ok(direct.solutions);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = direct.solutions;
    for _ in 0..4 {
        let m0 = random_c64_lines(m.len(), &mut rng);
        let start = solve_cycle(d, &m0, None, 1e-8)?;
        if start.solutions.len() < start.expected {
            continue;
        }
        let ends: Vec<FiberSolution> =
            transport_fiber(d, &start.solutions, &m0, m, &mut rng).into_iter().filter_map(|r| r.ok()).collect();
        let mut merged = best.clone();
        merged.extend(ends.into_iter().filter(|s| s.max_residual <= 1e-8));
        best = dedupe(merged, 1e-6);
        if best.len() >= start.expected {
            break;
        }
    }
    Ok(best)
}

fn rational_fiber(d: &LandauDiagram, m: &[Line<Complex64>]) -> Result<Vec<FiberSolution>> {
    let mut out = vec![];
    for sigma in all_bicolorings(&d.colorable_triangles()) {
        let lines = if d.graph.is_tree() {
            tree_lines_raw(d, m, &sigma)?
        } else {
            let data: [ExternalTriangleData<Complex64>; 3] = ExternalTriangleData::for_diagram(d, m)?.try_into().unwrap();
            let c = |t| sigma[&t];
            use crate::diagram::Triangle::{External, Internal};
            triangle_lines_raw(&data, c(Internal([1, 2, 3])), [c(External(1)), c(External(2)), c(External(3))])?.to_vec()
        };
        let lines = lines.iter().map(|l| Line::raw(crate::geometry::normalize_c64(&l.p).try_into().unwrap())).collect();
        let mut s = make_solution(d, m, lines);
        s.component = Some(sigma);
        out.push(s);
    }
    Ok(out)
}

/// All fiber points over `m`.
///
/// Trees go through box solves, `C_ℓ` with `u = (3,…,3)` through the cycle
/// polynomial, `H△` diagrams through the rational construction. Anything else is
/// filled by monodromy on each component and transported to `m`, which is slow
/// and seeded by `seed`.
pub fn solve_fiber(d: &LandauDiagram, m: &[Line<Complex64>], seed: u64) -> Result<(SolverRoute, Vec<FiberSolution>)> {
    if m.len() != d.d() {
        return Err(LandauError::Dimension(format!("{} external lines for d = {}", m.len(), d.d())));
    }
    let route = route_for(d);
    let sols = match route {
        SolverRoute::Rational => rational_fiber(d, m)?,
        SolverRoute::Tree => dedupe(solve_tree(d, m)?, 1e-6),
        SolverRoute::Cycle => solve_cycle_robust(d, m, seed)?,
        SolverRoute::Monodromy => {
            if !d.h.is_empty() {
                return Err(LandauError::Unsupported("no solver for this diagram with external incidences".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = vec![];
            let sigmas = all_bicolorings(&d.colorable_triangles());
            for sigma in &sigmas {
                let res = monodromy_component(d, sigma, &mut rng, &MonodromyOptions::default())?;
                for s in transport_fiber(d, &res.solutions, &res.base, m, &mut rng) {
                    let mut s = s?;
                    if sigmas.len() > 1 {
                        s.component = Some(sigma.clone());
                    }
                    out.push(s);
                }
            }
            out
        }
    };
    Ok((route, sols))
}
