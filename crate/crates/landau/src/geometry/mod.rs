//! Projective 3-space: points, planes, Plücker lines, Grassmann–Cayley
//! operations, Gram matrices, and the momentum-twistor map.

mod extensor;
mod twistor;

pub use extensor::*;
pub use twistor::{twistor_from_dual_point, DualPoint4};

use crate::scalars::{Field, ToComplex};
use crate::{LandauError, Result};
use num_complex::Complex64;

pub type ProjectivePoint<F> = Point<F>;
pub type ProjectivePlane<F> = Plane<F>;
pub type PlueckerLine<F> = Line<F>;
pub type LineConfiguration<F> = Vec<Line<F>>;

fn argmax<F: Field>(cands: Vec<(F, usize)>) -> Option<usize> {
    // exact: first nonzero, floating: largest magnitude
    if F::is_exact() {
        cands.iter().find(|(v, _)| !v.is_zero()).map(|c| c.1)
    } else {
        let mut best = None;
        let mut bm = 0.0;
        for (v, k) in &cands {
            if v.magnitude() > bm {
                bm = v.magnitude();
                best = Some(*k);
            }
        }
        best
    }
}

/// Intersection point of two incident lines.
///
/// Meets `l` with the planes `m ∨ e_k` and keeps the best-conditioned one.
pub fn intersect_lines<F: Field>(l: &Line<F>, m: &Line<F>) -> Result<Point<F>> {
    let pts: Vec<Point<F>> = (0..4)
        .map(|k| meet_line_plane(l, &join_point_line(&Point::basis(k), m)))
        .collect();
    let mags: Vec<(F, usize)> = pts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let n = p.x.iter().fold(F::zero(), |a, c| if c.magnitude() > a.magnitude() { c.clone() } else { a });
            (n, k)
        })
        .collect();
    let k = argmax(mags).ok_or_else(|| LandauError::Domain("lines coincide; no unique intersection point".into()))?;
    Ok(pts[k].clone())
}

/// Plane spanned by two incident lines.
pub fn span_lines<F: Field>(l: &Line<F>, m: &Line<F>) -> Result<Plane<F>> {
    let (c, d) = m.spanning_points()?;
    let p1 = join_point_line(&c, l);
    let p2 = join_point_line(&d, l);
    let n1 = p1.c.iter().fold(F::zero(), |a, x| if x.magnitude() > a.magnitude() { x.clone() } else { a });
    let n2 = p2.c.iter().fold(F::zero(), |a, x| if x.magnitude() > a.magnitude() { x.clone() } else { a });
    let k = argmax(vec![(n1, 0), (n2, 1)]).ok_or_else(|| LandauError::Domain("lines coincide; no unique span".into()))?;
    Ok(if k == 0 { p1 } else { p2 })
}

fn unit(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / n).collect()
}

/// Sine of the angle between two projective points of `C^n`; 0 iff equal up to scale.
pub fn projective_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ua = unit(a);
    let ub = unit(b);
    let ip: Complex64 = ua.iter().zip(&ub).map(|(x, y)| x.conj() * y).sum();
    // norm of the component of b orthogonal to a; avoids the cancellation in 1 − cos²
    ua.iter().zip(&ub).map(|(x, y)| (y - x * ip).norm_sqr()).sum::<f64>().sqrt()
}

pub fn line_distance<F: Field + ToComplex>(l: &Line<F>, m: &Line<F>) -> f64 {
    let a: Vec<Complex64> = l.p.iter().map(|c| c.to_c64()).collect();
    let b: Vec<Complex64> = m.p.iter().map(|c| c.to_c64()).collect();
    projective_distance(&a, &b)
}

/// Rescales so the largest coordinate has modulus one and is real positive.
pub fn normalize_c64(v: &[Complex64]) -> Vec<Complex64> {
    let mut best = Complex64::new(0.0, 0.0);
    for z in v {
        if z.norm() > best.norm() {
            best = *z;
        }
    }
    if best.norm() == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / best).collect()
}

pub fn line_to_c64<F: Field + ToComplex>(l: &Line<F>) -> Line<Complex64> {
    l.map(|c| c.to_c64())
}

pub fn point_to_c64<F: Field + ToComplex>(p: &Point<F>) -> Point<Complex64> {
    p.map(|c| c.to_c64())
}

/// Largest `|Im|` of the normalized coordinates; 0 for real lines.
pub fn imaginary_part(l: &Line<Complex64>) -> f64 {
    normalize_c64(&l.p).iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Real representative of a numerically real complex line.
pub fn real_part(l: &Line<Complex64>) -> Line<f64> {
    let n = normalize_c64(&l.p);
    Line { p: std::array::from_fn(|i| n[i].re) }
}

pub fn line_max_abs<F: Field>(l: &Line<F>) -> f64 {
    l.p.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
}
