//! Simultaneous root finding (Aberth–Ehrlich) for polynomials with complex double coefficients.

use crate::{LandauError, Result};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Residual tolerance relative to `scale(p)` at the root.
    pub tol: f64,
    /// Reality threshold: `|Im| <= real_tol * (1 + |root|)`.
    pub real_tol: f64,
    /// Roots closer than `cluster_tol * (1 + |root|)` are grouped.
    pub cluster_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { tol: 1e-10, real_tol: 1e-8, cluster_tol: 1e-5, max_iter: 800 }
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub value: Complex64,
    pub is_real: bool,
    /// Number of computed roots in this cluster (multiplicity estimate).
    pub multiplicity: usize,
    /// `|p(root)| / scale(p, root)`.
    pub residual: f64,
}

fn eval_both(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// `Σ |c_i| |z|^i`, the natural scale for residuals.
pub fn residual_scale(c: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut acc = 0.0;
    for a in c.iter().rev() {
        acc = acc * r + a.norm();
    }
    acc
}

/// All `deg(p)` roots of `Σ c_i x^i` (low-to-high coefficients).
///
/// Roots are returned individually (one entry per root, counted with
/// multiplicity); entries of the same cluster share the `multiplicity` count.
pub fn find_roots(coeffs: &[Complex64], opts: &RootOptions) -> Result<Vec<Root>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LandauError::Domain("non-finite coefficient".into()));
    }
    let norm = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return Err(LandauError::Domain("zero polynomial".into()));
    }
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Err(LandauError::Domain("constant polynomial has no roots".into()));
    }
    if c[deg].norm() < 1e-14 * norm {
        return Err(LandauError::IllConditioned(format!(
            "leading coefficient {:e} small against norm {:e}",
            c[deg].norm(),
            norm
        )));
    }
    // Roots at zero are split off exactly.
    let mut zero_roots = 0;
    while c[0].norm() == 0.0 && c.len() > 1 {
        c.remove(0);
        zero_roots += 1;
    }
    let d = c.len() - 1;
    let mut z = initial_guesses(&c);
    let mut done = vec![false; d];
    for _ in 0..opts.max_iter {
        let mut all = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp) = eval_both(&c, z[k]);
            let sc = residual_scale(&c, z[k]);
            if p.norm() <= 1e-15 * sc {
                done[k] = true;
                continue;
            }
            all = false;
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        s += 1.0 / diff;
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 1e-16 * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
        if all {
            break;
        }
    }
    // Newton polish on each root.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_both(&c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *zk - step;
            let (pc, _) = eval_both(&c, cand);
            if pc.norm() < p.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    let mut values: Vec<Complex64> = z;
    values.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zero_roots));
    let full = coeffs.to_vec();
    let mut roots: Vec<Root> = values
        .iter()
        .map(|&v| {
            let (p, _) = eval_both(&full, v);
            let sc = residual_scale(&full, v).max(f64::MIN_POSITIVE);
            Root { value: v, is_real: false, multiplicity: 1, residual: p.norm() / sc }
        })
        .collect();
    // Clusters.
    let n = roots.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        label[i] = next;
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if label[b] == usize::MAX {
                    let dist = (roots[a].value - roots[b].value).norm();
                    if dist <= opts.cluster_tol * (1.0 + roots[a].value.norm()) {
                        label[b] = next;
                        stack.push(b);
                    }
                }
            }
        }
        next += 1;
    }
    for cl in 0..next {
        let members: Vec<usize> = (0..n).filter(|&i| label[i] == cl).collect();
        let mean: Complex64 = members.iter().map(|&i| roots[i].value).sum::<Complex64>() / members.len() as f64;
        let real = mean.im.abs() <= opts.real_tol * (1.0 + mean.norm());
        for &i in &members {
            roots[i].multiplicity = members.len();
            roots[i].is_real = if members.len() == 1 {
                roots[i].value.im.abs() <= opts.real_tol * (1.0 + roots[i].value.norm())
            } else {
                real
            };
        }
    }
    for r in &roots {
        // Clustered roots of multiplicity m only reach eps^(1/m) accuracy; the residual is still tiny.
        if r.residual > opts.tol.max(1e-6) {
            return Err(LandauError::Numerical(format!(
                "root {} failed residual check ({:e})",
                r.value, r.residual
            )));
        }
    }
    roots.sort_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap().then(a.value.im.partial_cmp(&b.value.im).unwrap()));
    Ok(roots)
}

/// Real-coefficient convenience wrapper.
pub fn find_real_and_complex_roots(coeffs: &[f64], opts: &RootOptions) -> Result<Vec<Root>> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    find_roots(&c, opts)
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    // Radius from the geometric mean of |c0/cd|, bounded by a Cauchy-type estimate.
    let r = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
    (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            Complex64::from_polar(r, theta)
        })
        .collect()
}
