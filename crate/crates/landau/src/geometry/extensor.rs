//! Points, lines and planes of projective 3-space as extensors of the exterior
//! algebra on four generators, with join (wedge), meet and the Hodge star.
//!
//! Conventions:
//! - Plücker order is `(p12, p13, p14, p23, p24, p34)`.
//! - A plane is stored as the covector `π` with `T ∧ x = π(x)·e1234`, so the
//!   plane spanned by `b, c, d` has `π(x) = det[b; c; d; x]`.
//! - `meet(A, B) = ⋆(⋆A ∧ ⋆B)` with `⋆e_S = sign(S, S^c)·e_{S^c}`. Meets are
//!   projective; the sign fixed here is the one every downstream formula uses.

use crate::scalars::Field;
use crate::{LandauError, Result};

/// Bit masks of the Plücker coordinates in the fixed order.
pub const LINE_MASKS: [usize; 6] = [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100];

fn popcount(x: usize) -> u32 {
    x.count_ones()
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}` (disjoint sets).
fn wedge_sign(s: usize, t: usize) -> i64 {
    let mut inv = 0;
    for i in 0..4 {
        if s & (1 << i) != 0 {
            // elements of t below i
            inv += popcount(t & ((1 << i) - 1));
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A homogeneous element of `Λ(F⁴)`, stored on the 16 basis blades.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<F: Field> {
    pub step: usize,
    pub coef: Vec<F>,
}

impl<F: Field> Multivector<F> {
    pub fn zero(step: usize) -> Self {
        Multivector { step, coef: vec![F::zero(); 16] }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(|c| c.is_zero())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let step = self.step + other.step;
        let mut out = Multivector::zero(step.min(4));
        if step > 4 {
            return out;
        }
        for s in 0..16 {
            if popcount(s) as usize != self.step || self.coef[s].is_zero() {
                continue;
            }
            for t in 0..16 {
                if s & t != 0 || popcount(t) as usize != other.step || other.coef[t].is_zero() {
                    continue;
                }
                let v = self.coef[s].clone() * other.coef[t].clone();
                let v = if wedge_sign(s, t) > 0 { v } else { -v };
                out.coef[s | t] = out.coef[s | t].clone() + v;
            }
        }
        out
    }

    pub fn hodge(&self) -> Self {
        let mut out = Multivector::zero(4 - self.step);
        for s in 0..16 {
            if popcount(s) as usize != self.step || self.coef[s].is_zero() {
                continue;
            }
            let c = 15 ^ s;
            let v = self.coef[s].clone();
            out.coef[c] = if wedge_sign(s, c) > 0 { v } else { -v };
        }
        out
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.hodge().wedge(&other.hodge()).hodge()
    }

    pub fn scalar(&self) -> F {
        match self.step {
            0 => self.coef[0].clone(),
            4 => self.coef[15].clone(),
            _ => panic!("scalar() on an extensor of step {}", self.step),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point<F: Field> {
    pub x: [F; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plane<F: Field> {
    /// Covector coefficients: the plane is `{x : Σ c_k x_k = 0}`.
    pub c: [F; 4],
}

/// A line, or in ambient-P⁵ mode an arbitrary 6-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<F: Field> {
    pub p: [F; 6],
}

fn plane_sign(k: usize) -> bool {
    // e_{S_k} ∧ e_k = (−1)^{3−k} e1234 where S_k is the complement of {k}.
    (3 - k) % 2 == 0
}

impl<F: Field> Point<F> {
    pub fn new(x: [F; 4]) -> Self {
        Point { x }
    }
    pub fn from_vec(v: &[F]) -> Self {
        Point { x: [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()] }
    }
    pub fn basis(i: usize) -> Self {
        let mut x: [F; 4] = std::array::from_fn(|_| F::zero());
        x[i] = F::one();
        Point { x }
    }
    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|c| c.is_zero())
    }
    pub fn scale(&self, s: &F) -> Self {
        Point { x: std::array::from_fn(|i| self.x[i].clone() * s.clone()) }
    }
    pub fn add(&self, o: &Self) -> Self {
        Point { x: std::array::from_fn(|i| self.x[i].clone() + o.x[i].clone()) }
    }
    pub fn sub(&self, o: &Self) -> Self {
        Point { x: std::array::from_fn(|i| self.x[i].clone() - o.x[i].clone()) }
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Point<G> {
        Point { x: std::array::from_fn(|i| f(&self.x[i])) }
    }
    pub fn to_mv(&self) -> Multivector<F> {
        let mut m = Multivector::zero(1);
        for i in 0..4 {
            m.coef[1 << i] = self.x[i].clone();
        }
        m
    }
    pub fn from_mv(m: &Multivector<F>) -> Self {
        assert_eq!(m.step, 1);
        Point { x: std::array::from_fn(|i| m.coef[1 << i].clone()) }
    }
}

impl<F: Field> Plane<F> {
    pub fn new(c: [F; 4]) -> Self {
        Plane { c }
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }
    pub fn eval(&self, x: &Point<F>) -> F {
        (0..4).fold(F::zero(), |a, i| a + self.c[i].clone() * x.x[i].clone())
    }
    pub fn scale(&self, s: &F) -> Self {
        Plane { c: std::array::from_fn(|i| self.c[i].clone() * s.clone()) }
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Plane<G> {
        Plane { c: std::array::from_fn(|i| f(&self.c[i])) }
    }
    pub fn to_mv(&self) -> Multivector<F> {
        let mut m = Multivector::zero(3);
        for k in 0..4 {
            let s = 15 ^ (1 << k);
            let v = self.c[k].clone();
            m.coef[s] = if plane_sign(k) { v } else { -v };
        }
        m
    }
    pub fn from_mv(m: &Multivector<F>) -> Self {
        assert_eq!(m.step, 3);
        Plane {
            c: std::array::from_fn(|k| {
                let v = m.coef[15 ^ (1 << k)].clone();
                if plane_sign(k) {
                    v
                } else {
                    -v
                }
            }),
        }
    }
}

impl<F: Field> Line<F> {
    /// Raw 6-vector; the Plücker quadric is not checked (ambient P⁵ mode).
    pub fn raw(p: [F; 6]) -> Self {
        Line { p }
    }

    /// Checked constructor: rejects vectors off the Plücker quadric (exact
    /// fields) or off it by more than `1e-12` relative (floating fields).
    pub fn from_pluecker(p: [F; 6]) -> Result<Self> {
        let l = Line { p };
        let q = l.quadric();
        let ok = if F::is_exact() {
            q.is_zero()
        } else {
            let n = l.p.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
            q.magnitude() <= 1e-12 * n * n
        };
        if ok {
            Ok(l)
        } else {
            Err(LandauError::Domain("6-vector is not on the Plücker quadric".into()))
        }
    }

    pub fn from_vec(v: &[F]) -> Self {
        Line { p: std::array::from_fn(|i| v[i].clone()) }
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().all(|c| c.is_zero())
    }

    /// `p12 p34 − p13 p24 + p14 p23`.
    pub fn quadric(&self) -> F {
        let p = &self.p;
        p[0].clone() * p[5].clone() - p[1].clone() * p[4].clone() + p[2].clone() * p[3].clone()
    }

    pub fn scale(&self, s: &F) -> Self {
        Line { p: std::array::from_fn(|i| self.p[i].clone() * s.clone()) }
    }
    pub fn add(&self, o: &Self) -> Self {
        Line { p: std::array::from_fn(|i| self.p[i].clone() + o.p[i].clone()) }
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Line<G> {
        Line { p: std::array::from_fn(|i| f(&self.p[i])) }
    }

    pub fn to_mv(&self) -> Multivector<F> {
        let mut m = Multivector::zero(2);
        for (k, &mask) in LINE_MASKS.iter().enumerate() {
            m.coef[mask] = self.p[k].clone();
        }
        m
    }
    pub fn from_mv(m: &Multivector<F>) -> Self {
        assert_eq!(m.step, 2);
        Line { p: std::array::from_fn(|k| m.coef[LINE_MASKS[k]].clone()) }
    }

    /// Coordinate `p_ij` for 0-based `i != j`, with `p_ji = −p_ij`.
    pub fn pij(&self, i: usize, j: usize) -> F {
        if i == j {
            return F::zero();
        }
        let (a, b, s) = if i < j { (i, j, true) } else { (j, i, false) };
        let mask = (1 << a) | (1 << b);
        let k = LINE_MASKS.iter().position(|&m| m == mask).unwrap();
        if s {
            self.p[k].clone()
        } else {
            -self.p[k].clone()
        }
    }

    /// Two points spanning the line in echelon form: the pivot pair is the first
    /// nonzero coordinate for exact fields and the largest one for floating fields.
    /// With pivots `(i, j)` the rows are `r1_k = p_kj / p_ij`, `r2_k = p_ik / p_ij`.
    pub fn spanning_points(&self) -> Result<(Point<F>, Point<F>)> {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let k = if F::is_exact() {
            (0..6).find(|&k| !self.p[k].is_zero())
        } else {
            let mut best = None;
            let mut bm = 0.0;
            for k in 0..6 {
                let m = self.p[k].magnitude();
                if m > bm {
                    bm = m;
                    best = Some(k);
                }
            }
            best
        };
        let k = k.ok_or_else(|| LandauError::Domain("zero line has no spanning points".into()))?;
        let (i, j) = pairs[k];
        let pivot = self.p[k].clone();
        let r1 = Point { x: std::array::from_fn(|c| self.pij(c, j) / pivot.clone()) };
        let r2 = Point { x: std::array::from_fn(|c| self.pij(i, c) / pivot.clone()) };
        Ok((r1, r2))
    }
}

/// `⟨L M⟩ = l12 m34 − l13 m24 + l14 m23 + l23 m14 − l24 m13 + l34 m12`.
pub fn line_pairing<F: Field>(l: &Line<F>, m: &Line<F>) -> F {
    let a = &l.p;
    let b = &m.p;
    a[0].clone() * b[5].clone() - a[1].clone() * b[4].clone() + a[2].clone() * b[3].clone() + a[3].clone() * b[2].clone()
        - a[4].clone() * b[1].clone()
        + a[5].clone() * b[0].clone()
}

/// `p_ij = a_i b_j − a_j b_i`.
pub fn join_points<F: Field>(a: &Point<F>, b: &Point<F>) -> Line<F> {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    Line {
        p: std::array::from_fn(|k| {
            let (i, j) = pairs[k];
            a.x[i].clone() * b.x[j].clone() - a.x[j].clone() * b.x[i].clone()
        }),
    }
}

/// Checked version of [`join_points`].
pub fn line_from_points<F: Field>(a: &Point<F>, b: &Point<F>) -> Result<Line<F>> {
    let l = join_points(a, b);
    if F::is_exact() {
        if l.is_zero() {
            return Err(LandauError::Domain("proportional points do not span a line".into()));
        }
    } else {
        let na = a.x.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        let nb = b.x.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        let nl = l.p.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        if nl <= 1e-14 * na * nb {
            return Err(LandauError::Domain("proportional points do not span a line".into()));
        }
    }
    Ok(l)
}

/// Plane spanned by a point and a line.
pub fn join_point_line<F: Field>(a: &Point<F>, l: &Line<F>) -> Plane<F> {
    Plane::from_mv(&a.to_mv().wedge(&l.to_mv()))
}

/// Plane spanned by three points: `π(x) = det[a; b; c; x]`.
pub fn join_three_points<F: Field>(a: &Point<F>, b: &Point<F>, c: &Point<F>) -> Plane<F> {
    Plane::from_mv(&a.to_mv().wedge(&b.to_mv()).wedge(&c.to_mv()))
}

/// Bracket `⟨abcd⟩`.
pub fn bracket<F: Field>(a: &Point<F>, b: &Point<F>, c: &Point<F>, d: &Point<F>) -> F {
    a.to_mv().wedge(&b.to_mv()).wedge(&c.to_mv()).wedge(&d.to_mv()).scalar()
}

/// `P ∧ x` for a plane and a point.
pub fn plane_point<F: Field>(p: &Plane<F>, x: &Point<F>) -> F {
    p.eval(x)
}

/// `x ∧ P` for a point followed by a plane: `−π(x)`.
pub fn point_plane<F: Field>(x: &Point<F>, p: &Plane<F>) -> F {
    -p.eval(x)
}

pub fn meet_planes<F: Field>(p: &Plane<F>, q: &Plane<F>) -> Line<F> {
    Line::from_mv(&p.to_mv().meet(&q.to_mv()))
}

pub fn meet_line_plane<F: Field>(l: &Line<F>, p: &Plane<F>) -> Point<F> {
    Point::from_mv(&l.to_mv().meet(&p.to_mv()))
}

pub fn meet_three_planes<F: Field>(p: &Plane<F>, q: &Plane<F>, r: &Plane<F>) -> Point<F> {
    let m = p.to_mv().meet(&q.to_mv()).meet(&r.to_mv());
    Point::from_mv(&m)
}

/// Line through `x` meeting the lines `b` and `c`: `(x b) ⋆ (x c)`.
pub fn transversal_through_point<F: Field>(x: &Point<F>, b: &Line<F>, c: &Line<F>) -> Line<F> {
    meet_planes(&join_point_line(x, b), &join_point_line(x, c))
}

/// Line in the plane `p` meeting `b` and `c`: `(p ⋆ b)(p ⋆ c)`.
pub fn transversal_in_plane<F: Field>(p: &Plane<F>, b: &Line<F>, c: &Line<F>) -> Line<F> {
    join_points(&meet_line_plane(b, p), &meet_line_plane(c, p))
}

/// Any extensor of projective 3-space.
#[derive(Clone, Debug, PartialEq)]
pub enum Extensor<F: Field> {
    Scalar(F),
    Point(Point<F>),
    Line(Line<F>),
    Plane(Plane<F>),
    /// Step-4 extensor, i.e. a bracket value.
    Volume(F),
}

impl<F: Field> Extensor<F> {
    pub fn step(&self) -> usize {
        match self {
            Extensor::Scalar(_) => 0,
            Extensor::Point(_) => 1,
            Extensor::Line(_) => 2,
            Extensor::Plane(_) => 3,
            Extensor::Volume(_) => 4,
        }
    }
    pub fn to_mv(&self) -> Multivector<F> {
        match self {
            Extensor::Scalar(s) => {
                let mut m = Multivector::zero(0);
                m.coef[0] = s.clone();
                m
            }
            Extensor::Point(p) => p.to_mv(),
            Extensor::Line(l) => l.to_mv(),
            Extensor::Plane(p) => p.to_mv(),
            Extensor::Volume(v) => {
                let mut m = Multivector::zero(4);
                m.coef[15] = v.clone();
                m
            }
        }
    }
    pub fn from_mv(m: &Multivector<F>) -> Self {
        match m.step {
            0 => Extensor::Scalar(m.coef[0].clone()),
            1 => Extensor::Point(Point::from_mv(m)),
            2 => Extensor::Line(Line::from_mv(m)),
            3 => Extensor::Plane(Plane::from_mv(m)),
            _ => Extensor::Volume(m.coef[15].clone()),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.to_mv().is_zero()
    }
}

/// Result of a meet; degenerate configurations give a zero extensor with the flag set.
#[derive(Clone, Debug, PartialEq)]
pub struct MeetResult<F: Field> {
    pub value: Extensor<F>,
    pub degenerate: bool,
}

/// Join of points, lines and planes. A step-4 result is a bracket.
pub fn gca_join<F: Field>(args: &[Extensor<F>]) -> Result<Extensor<F>> {
    let total: usize = args.iter().map(|a| a.step()).sum();
    if total > 4 {
        return Err(LandauError::Domain(format!("join of total step {} exceeds 4", total)));
    }
    let mut acc = Extensor::Scalar(F::one()).to_mv();
    for a in args {
        acc = acc.wedge(&a.to_mv());
    }
    Ok(Extensor::from_mv(&acc))
}

/// Meet of extensors computed as `⋆(⋆a ∧ ⋆b ∧ …)`.
pub fn gca_meet<F: Field>(args: &[Extensor<F>]) -> Result<MeetResult<F>> {
    let co: usize = args.iter().map(|a| 4 - a.step()).sum();
    if co > 4 {
        return Err(LandauError::Domain(format!("meet of total co-step {} exceeds 4", co)));
    }
    let mut acc = Extensor::Scalar(F::one()).to_mv();
    for a in args {
        acc = acc.wedge(&a.to_mv().hodge());
    }
    let out = acc.hodge();
    let degenerate = out.is_zero();
    Ok(MeetResult { value: Extensor::from_mv(&out), degenerate })
}

pub fn hodge_dual<F: Field>(e: &Extensor<F>) -> Extensor<F> {
    Extensor::from_mv(&e.to_mv().hodge())
}

pub fn dual_line<F: Field>(l: &Line<F>) -> Line<F> {
    Line::from_mv(&l.to_mv().hodge())
}

pub fn dual_point<F: Field>(p: &Point<F>) -> Plane<F> {
    Plane::from_mv(&p.to_mv().hodge())
}

pub fn dual_plane<F: Field>(p: &Plane<F>) -> Point<F> {
    Point::from_mv(&p.to_mv().hodge())
}

/// `⟨P d⟩⟨e Q⟩ − ⟨P e⟩⟨d Q⟩` for planes `P, Q` and points `d, e`.
pub fn chain_polynomial<F: Field>(p: &Plane<F>, d: &Point<F>, e: &Point<F>, q: &Plane<F>) -> F {
    plane_point(p, d) * point_plane(e, q) - plane_point(p, e) * point_plane(d, q)
}

/// Chain polynomial with the middle line given by its Plücker vector.
pub fn chain_with_line<F: Field>(p: &Plane<F>, b: &Line<F>, q: &Plane<F>) -> Result<F> {
    let (d, e) = b.spanning_points()?;
    Ok(chain_polynomial(p, &d, &e, q))
}

/// Gram matrix of pairings; zero on the diagonal for true lines.
pub fn gram_matrix<F: Field>(lines: &[Line<F>]) -> Vec<Vec<F>> {
    lines.iter().map(|a| lines.iter().map(|b| line_pairing(a, b)).collect()).collect()
}
