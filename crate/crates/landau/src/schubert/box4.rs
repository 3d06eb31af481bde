//! Lines meeting four given lines.
//!
//! Points of `D` are written `p = s·d₁ + t·d₂` with `(d₁, d₂)` the echelon spanning
//! points. The transversal through `p` of `B` and `C` is `X = (p∨B) ∧ (p∨C)`, which is
//! quadratic in `p`: `X = s²X₀ + st X₁ + t²X₂`. It meets `A` exactly when
//! `a₀s² + a₁st + a₂t² = 0` with `a_k = ⟨A X_k⟩`.

use crate::geometry::{chain_with_line, join_point_line, line_pairing, meet_planes, Line, Point};
use crate::scalars::{linalg, ExactRational, Field, QuadExt};
use crate::{LandauError, Result};
use num_complex::Complex64;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct BoxQuadratic<F: Field> {
    /// `[a₀, a₁, a₂]`.
    pub a: [F; 3],
    pub d1: Point<F>,
    pub d2: Point<F>,
    /// `X₀, X₁, X₂`.
    pub x: [Line<F>; 3],
}

impl<F: Field> BoxQuadratic<F> {
    pub fn discriminant(&self) -> F {
        let [a0, a1, a2] = self.a.clone();
        a1.clone() * a1 - F::from_i64(4) * a0 * a2
    }

    /// `s²X₀ + st X₁ + t²X₂`.
    pub fn line_at(&self, s: &F, t: &F) -> Line<F> {
        self.x[0]
            .scale(&(s.clone() * s.clone()))
            .add(&self.x[1].scale(&(s.clone() * t.clone())))
            .add(&self.x[2].scale(&(t.clone() * t.clone())))
    }
}

/// The box quadratic for lines meeting `a, b, c, d`, parametrized along `d`.
pub fn box_quadratic<F: Field>(a: &Line<F>, b: &Line<F>, c: &Line<F>, d: &Line<F>) -> Result<BoxQuadratic<F>> {
    let (d1, d2) = d.spanning_points()?;
    Ok(box_quadratic_with(a, b, c, d1, d2))
}

pub fn box_quadratic_with<F: Field>(a: &Line<F>, b: &Line<F>, c: &Line<F>, d1: Point<F>, d2: Point<F>) -> BoxQuadratic<F> {
    let p1 = join_point_line(&d1, b);
    let p2 = join_point_line(&d2, b);
    let q1 = join_point_line(&d1, c);
    let q2 = join_point_line(&d2, c);
    let x0 = meet_planes(&p1, &q1);
    let x1 = meet_planes(&p1, &q2).add(&meet_planes(&p2, &q1));
    let x2 = meet_planes(&p2, &q2);
    let av = [line_pairing(a, &x0), line_pairing(a, &x1), line_pairing(a, &x2)];
    BoxQuadratic { a: av, d1, d2, x: [x0, x1, x2] }
}

/// Coefficients written with chain polynomials: `a₀ = ⟨d₁A|B|d₁C⟩`,
/// `a₁ = ⟨d₁A|B|d₂C⟩ + ⟨d₂A|B|d₁C⟩`, `a₂ = ⟨d₂A|B|d₂C⟩`.
///
/// These differ from [`box_quadratic`] by a nonzero constant for fixed lines.
pub fn box_chain_coefficients<F: Field>(a: &Line<F>, b: &Line<F>, c: &Line<F>, d: &Line<F>) -> Result<[F; 3]> {
    let (d1, d2) = d.spanning_points()?;
    let pa1 = join_point_line(&d1, a);
    let pa2 = join_point_line(&d2, a);
    let pc1 = join_point_line(&d1, c);
    let pc2 = join_point_line(&d2, c);
    Ok([
        chain_with_line(&pa1, b, &pc1)?,
        chain_with_line(&pa1, b, &pc2)? + chain_with_line(&pa2, b, &pc1)?,
        chain_with_line(&pa2, b, &pc2)?,
    ])
}

#[derive(Clone, Debug)]
pub struct BoxSolution {
    pub lines: [Line<Complex64>; 2],
    pub coefficients: [Complex64; 3],
    pub discriminant: Complex64,
}

fn unit_line(l: Line<Complex64>) -> Line<Complex64> {
    let m = l.p.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        l
    } else {
        l.scale(&Complex64::new(1.0 / m, 0.0))
    }
}

/// The two transversals of four lines, in complex doubles.
///
/// Roots are taken in homogeneous form with the cancellation-free quadratic formula,
/// so a root at `t/s = ∞` needs no special treatment.
pub fn solve_box4(a: &Line<Complex64>, b: &Line<Complex64>, c: &Line<Complex64>, d: &Line<Complex64>) -> Result<BoxSolution> {
    let q = box_quadratic(a, b, c, d)?;
    let [a0, a1, a2] = q.a;
    let scale = a0.norm().max(a1.norm()).max(a2.norm());
    let xs = q.x.iter().map(|l| l.p.iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
    let an = a.p.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale <= 1e-13 * xs * an {
        return Err(LandauError::Domain("degenerate pencil: every point of D gives a transversal".into()));
    }
    let disc = a1 * a1 - 4.0 * a0 * a2;
    let sq = disc.sqrt();
    let qa = a1 + sq;
    let qb = a1 - sq;
    let qq = -0.5 * if qa.norm() >= qb.norm() { qa } else { qb };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (r1, r2) = if qq.norm() <= 1e-15 * scale {
        // a₁ = 0 and a₀a₂ = 0: a double root at whichever end has a vanishing coefficient
        if a2.norm() <= a0.norm() {
            ((zero, one), (zero, one))
        } else {
            ((one, zero), (one, zero))
        }
    } else {
        ((a2, qq), (qq, a0))
    };
    let l1 = unit_line(q.line_at(&r1.0, &r1.1));
    let l2 = unit_line(q.line_at(&r2.0, &r2.1));
    if l1.p.iter().all(|z| z.norm() == 0.0) || l2.p.iter().all(|z| z.norm() == 0.0) {
        return Err(LandauError::Domain("a transversal degenerated; D meets B or C".into()));
    }
    Ok(BoxSolution { lines: [l1, l2], coefficients: [a0, a1, a2], discriminant: disc })
}

#[derive(Clone, Debug)]
pub struct ExactBoxSolution {
    pub lines: [Line<QuadExt>; 2],
    pub coefficients: [ExactRational; 3],
    pub discriminant: ExactRational,
}

/// The two transversals of four rational lines in `Q(√Δ)`, `Δ = a₁² − 4a₀a₂`.
///
/// When `a₂ = 0` the chart flips to `s/t`, which amounts to swapping `d₁` and `d₂`.
pub fn solve_box4_exact(
    a: &Line<ExactRational>,
    b: &Line<ExactRational>,
    c: &Line<ExactRational>,
    d: &Line<ExactRational>,
) -> Result<ExactBoxSolution> {
    let q = box_quadratic(a, b, c, d)?;
    let [a0, a1, a2] = q.a.clone();
    let disc = q.discriminant();
    let lift = |x: &ExactRational| QuadExt::rational(x.clone());
    let qe = BoxQuadratic {
        a: [lift(&a0), lift(&a1), lift(&a2)],
        d1: q.d1.map(lift),
        d2: q.d2.map(lift),
        x: [q.x[0].map(lift), q.x[1].map(lift), q.x[2].map(lift)],
    };
    let root = QuadExt::sqrt_of(&disc);
    let two = ExactRational::from_i64(2);
    let pm = [lift(&(-a1.clone())) + root.clone(), lift(&(-a1.clone())) - root];
    let roots: Vec<(QuadExt, QuadExt)> = if !a2.is_zero() {
        pm.iter().map(|r| (lift(&(two.clone() * a2.clone())), r.clone())).collect()
    } else if !a0.is_zero() {
        pm.iter().map(|r| (r.clone(), lift(&(two.clone() * a0.clone())))).collect()
    } else if !a1.is_zero() {
        vec![(QuadExt::one(), QuadExt::zero()), (QuadExt::zero(), QuadExt::one())]
    } else {
        return Err(LandauError::Domain("degenerate pencil: a₀ = a₁ = a₂ = 0".into()));
    };
    let lines: Vec<Line<QuadExt>> = roots.iter().map(|(s, t)| qe.line_at(s, t)).collect();
    if lines.iter().any(|l| l.is_zero()) {
        return Err(LandauError::Domain("a transversal degenerated; D meets B or C".into()));
    }
    Ok(ExactBoxSolution {
        lines: [lines[0].clone(), lines[1].clone()],
        coefficients: [a0, a1, a2],
        discriminant: disc,
    })
}

use num_traits::One;

const PAIR_SIGN: [i64; 6] = [1, -1, 1, 1, -1, 1];

/// Row vector `r` with `r · L = ⟨L M⟩`.
pub fn pairing_row<F: Field>(m: &Line<F>) -> [F; 6] {
    std::array::from_fn(|k| m.p[5 - k].clone() * F::from_i64(PAIR_SIGN[k]))
}

/// Common transversals by linear algebra: the kernel of the pairing rows
/// restricted to the Plücker quadric.
pub fn transversals_by_elimination(lines: &[Line<Complex64>]) -> Result<Vec<Line<Complex64>>> {
    let m: Vec<Vec<Complex64>> = lines.iter().map(|l| pairing_row(l).to_vec()).collect();
    let k = linalg::kernel(&m, 1e-10);
    match k.len() {
        1 => {
            let l = Line::from_vec(&k[0]);
            Ok(vec![unit_line(l)])
        }
        2 => {
            let k1 = Line::from_vec(&k[0]);
            let k2 = Line::from_vec(&k[1]);
            // Q(s k₁ + t k₂) = s²Q(k₁) + st⟨k₁ k₂⟩ + t²Q(k₂)
            let (c0, c1, c2) = (k1.quadric(), line_pairing(&k1, &k2), k2.quadric());
            let disc = (c1 * c1 - 4.0 * c0 * c2).sqrt();
            let qa = c1 + disc;
            let qb = c1 - disc;
            let qq = -0.5 * if qa.norm() >= qb.norm() { qa } else { qb };
            let sols = [(c2, qq), (qq, c0)];
            Ok(sols.iter().map(|(s, t)| unit_line(k1.scale(s).add(&k2.scale(t)))).collect())
        }
        n => Err(LandauError::Domain(format!("pairing kernel has dimension {}", n))),
    }
}

/// The unique common transversal of five lines sharing one (1-dimensional kernel).
pub fn transversal_of_five(lines: &[Line<Complex64>; 5]) -> Result<Line<Complex64>> {
    let m: Vec<Vec<Complex64>> = lines.iter().map(|l| pairing_row(l).to_vec()).collect();
    // smallest singular direction via normal equations on the 6x6 Gram of rows
    let k = linalg::kernel(&m, 1e-9);
    if k.len() == 1 {
        return Ok(unit_line(Line::from_vec(&k[0])));
    }
    Err(LandauError::Numerical(format!("five-line kernel has dimension {}", k.len())))
}

/// `l` and `m` agree up to a scalar (exact test).
pub fn proportional<F: Field>(l: &Line<F>, m: &Line<F>) -> bool {
    (0..6).all(|i| (0..6).all(|j| l.p[i].clone() * m.p[j].clone() == l.p[j].clone() * m.p[i].clone()))
}
