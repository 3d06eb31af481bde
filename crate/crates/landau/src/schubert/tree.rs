//! Trees: every vertex sees exactly four known lines once the edges are oriented
//! with in-degree `4 − u_i`, so the fiber is built from box solves in topological order.

use super::box4::solve_box4;
use super::fiber::{make_solution, newton_refine, FiberSolution};
use crate::diagram::LandauDiagram;
use crate::geometry::Line;
use crate::{LandauError, Result};
use num_complex::Complex64;

/// Orientation of the tree edges as `(from, to)` pairs with in-degree `4 − u_i` at
/// every vertex; [`LandauError::Infeasible`] when no such orientation exists
/// (then `γ_u = 0`).
pub fn tree_orientation(d: &LandauDiagram) -> Result<Vec<(usize, usize)>> {
    let g = &d.graph;
    if !g.is_tree() {
        return Err(LandauError::Precondition("tree solver needs a tree".into()));
    }
    let ell = d.ell();
    let mut need: Vec<i64> = d.u.iter().map(|&x| 4 - x as i64).collect();
    if need.iter().any(|&x| x < 0) {
        return Err(LandauError::Infeasible(format!("some u_i exceeds 4: {:?}", d.u)));
    }
    // Peel leaves: a leaf still needing one incoming edge takes it from its
    // neighbour, a leaf needing none sends it.
    let mut alive = vec![true; ell];
    let mut deg: Vec<usize> = (1..=ell).map(|v| g.degree(v)).collect();
    let mut out = vec![];
    for _ in 0..ell.saturating_sub(1) {
        let leaf = (0..ell)
            .find(|&v| alive[v] && deg[v] == 1)
            .ok_or_else(|| LandauError::Consistency { max_deviation: f64::NAN })?;
        let nb = g.neighbours(leaf + 1).into_iter().map(|x| x - 1).find(|&w| alive[w]).unwrap();
        match need[leaf] {
            1 => {
                out.push((nb + 1, leaf + 1));
            }
            0 => {
                out.push((leaf + 1, nb + 1));
                need[nb] -= 1;
                if need[nb] < 0 {
                    return Err(LandauError::Infeasible(format!("vertex {} receives too many lines", nb + 1)));
                }
            }
            k => return Err(LandauError::Infeasible(format!("leaf {} would need {} incoming lines", leaf + 1, k))),
        }
        alive[leaf] = false;
        deg[nb] -= 1;
    }
    let last = (0..ell).find(|&v| alive[v]).unwrap();
    if need[last] != 0 {
        return Err(LandauError::Infeasible(format!("vertex {} is under-determined", last + 1)));
    }
    Ok(out)
}

/// Vertices in an order where every in-neighbour comes first.
pub fn topological_order(ell: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut indeg = vec![0usize; ell + 1];
    for &(_, b) in arcs {
        indeg[b] += 1;
    }
    let mut ready: Vec<usize> = (1..=ell).filter(|&v| indeg[v] == 0).collect();
    let mut order = vec![];
    while let Some(v) = ready.pop() {
        order.push(v);
        for &(a, b) in arcs {
            if a == v {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    order
}

/// All `2^ℓ` points of a tree fiber, Newton-polished on the full system.
pub fn solve_tree(d: &LandauDiagram, m: &[Line<Complex64>]) -> Result<Vec<FiberSolution>> {
    if m.len() != d.d() {
        return Err(LandauError::Dimension(format!("{} external lines for d = {}", m.len(), d.d())));
    }
    let arcs = tree_orientation(d)?;
    let order = topological_order(d.ell(), &arcs);
    let ell = d.ell();
    let mut partial: Vec<Vec<Option<Line<Complex64>>>> = vec![vec![None; ell]];
    for &v in &order {
        let mut next = vec![];
        for sol in &partial {
            let mut known: Vec<Line<Complex64>> = d.externals_at(v).iter().map(|&a| m[a - 1].clone()).collect();
            for &(a, b) in &arcs {
                if b == v {
                    known.push(sol[a - 1].clone().expect("topological order"));
                }
            }
            debug_assert_eq!(known.len(), 4);
            let bx = solve_box4(&known[0], &known[1], &known[2], &known[3])?;
            for l in bx.lines {
                let mut s = sol.clone();
                s[v - 1] = Some(l);
                next.push(s);
            }
        }
        partial = next;
    }
    let mut out = vec![];
    for p in partial {
        let lines: Vec<Line<Complex64>> = p.into_iter().map(|x| x.unwrap()).collect();
        let lines = match newton_refine(d, m, &lines, 4) {
            Ok((l, _)) => l,
            Err(_) => lines,
        };
        out.push(make_solution(d, m, lines));
    }
    Ok(out)
}
