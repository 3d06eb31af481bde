//! Multidegrees of incidence varieties, LS degrees, SLS degree vectors and
//! expected LS discriminant degrees.
//!
//! The class of `V_G ⊂ (P⁵)^ℓ` lives in `Z[t]/(t_i⁶)`; the LS degree `γ_u` is the
//! coefficient of `∏ t_i^{5−u_i}`.

use crate::diagram::{is_outerplanar, InternalGraph};
use crate::scalars::{TruncatedMultiPoly, DEFAULT_CAP};
use crate::{LandauError, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Multidegree {
    pub poly: TruncatedMultiPoly,
    pub ell: usize,
    /// `ℓ + |G|`.
    pub codim: u32,
}

impl Multidegree {
    /// `dim V_G = 5ℓ − codim`.
    pub fn dim(&self) -> u32 {
        5 * self.ell as u32 - self.codim
    }

    pub fn gamma(&self, u: &[u32]) -> BigInt {
        if u.iter().any(|&x| x > 5) {
            return BigInt::zero();
        }
        let e: Vec<u32> = u.iter().map(|&x| 5 - x).collect();
        self.poly.coeff(&e)
    }

    /// `{u : γ_u ≠ 0}` with the LS degrees.
    pub fn table(&self) -> BTreeMap<Vec<u32>, BigInt> {
        self.poly.terms().map(|(e, c)| (e.iter().map(|&k| 5 - k).collect(), c.clone())).collect()
    }
}

/// `[V_G] = 2^ℓ · t₁⋯t_ℓ · ∏_{ij∈G} (t_i + t_j)`, valid when `V_G` is a complete intersection.
pub fn multidegree_complete_intersection(g: &InternalGraph) -> Result<Multidegree> {
    if !is_outerplanar(g)? {
        return Err(LandauError::Unsupported(
            "the product formula needs an outerplanar graph (complete intersection)".into(),
        ));
    }
    Ok(multidegree_product(g))
}

fn multidegree_product(g: &InternalGraph) -> Multidegree {
    let ell = g.ell();
    let cap = DEFAULT_CAP;
    let mut p = TruncatedMultiPoly::monomial(ell, cap, vec![1; ell], BigInt::from(1u64 << ell));
    for (a, b) in g.edges() {
        let f = TruncatedMultiPoly::var(ell, cap, a - 1).add(&TruncatedMultiPoly::var(ell, cap, b - 1)).unwrap();
        p = p.mul(&f).unwrap();
    }
    Multidegree { poly: p, ell, codim: (ell + g.num_edges()) as u32 }
}

pub fn ls_degree(g: &InternalGraph, u: &[u32]) -> Result<BigInt> {
    let m = multidegree_complete_intersection(g)?;
    check_len(g, u)?;
    let s: u32 = u.iter().sum();
    if s != m.dim() {
        return Err(LandauError::Dimension(format!("|u| = {} but dim V_G = {}", s, m.dim())));
    }
    Ok(m.gamma(u))
}

fn check_len(g: &InternalGraph, u: &[u32]) -> Result<()> {
    if u.len() != g.ell() {
        return Err(LandauError::Dimension(format!("u has {} entries for ℓ = {}", u.len(), g.ell())));
    }
    Ok(())
}

/// `γ_{u−e_i}` for each vertex, the degree of `R_{G,u}` in each external line at vertex `i`.
pub fn sls_degree_vector(g: &InternalGraph, u: &[u32]) -> Result<Vec<BigInt>> {
    let m = multidegree_complete_intersection(g)?;
    check_len(g, u)?;
    let s: u32 = u.iter().sum();
    if s != m.dim() + 1 {
        return Err(LandauError::Dimension(format!("|u| = {} but dim V_G + 1 = {}", s, m.dim() + 1)));
    }
    Ok((0..u.len())
        .map(|i| {
            if u[i] == 0 {
                return BigInt::zero();
            }
            let mut v = u.to_vec();
            v[i] -= 1;
            m.gamma(&v)
        })
        .collect())
}

/// Expands per-vertex degrees to one entry per external line.
pub fn per_line_degrees(u: &[u32], per_vertex: &[BigInt]) -> Vec<BigInt> {
    u.iter().zip(per_vertex).flat_map(|(&k, d)| std::iter::repeat(d.clone()).take(k as usize)).collect()
}

/// NLS genera `g_u` keyed by graph and `u` with `|u| = dim V_G − 1`.
#[derive(Clone, Debug, Default)]
pub struct GenusTable {
    entries: Vec<(InternalGraph, Vec<u32>, i64)>,
}

fn automorphisms(g: &InternalGraph) -> Vec<Vec<usize>> {
    fn rec(g: &InternalGraph, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = g.ell();
        let k = perm.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let ok = (0..k).all(|j| g.has_edge(j + 1, k + 1) == g.has_edge(perm[j] + 1, c + 1));
            if ok && g.degree(k + 1) == g.degree(c + 1) {
                used[c] = true;
                perm.push(c);
                rec(g, perm, used, out);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut out = vec![];
    rec(g, &mut vec![], &mut vec![false; g.ell()], &mut out);
    out
}

impl GenusTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: &InternalGraph, u: Vec<u32>, genus: i64) {
        self.entries.push((g.clone(), u, genus));
    }

    /// Looks up `g_u`, also trying images of `u` under automorphisms of `G`.
    pub fn get(&self, g: &InternalGraph, u: &[u32]) -> Option<i64> {
        let autos = if self.entries.iter().any(|(h, _, _)| h == g) { automorphisms(g) } else { vec![] };
        for (h, v, genus) in &self.entries {
            if h != g {
                continue;
            }
            for p in &autos {
                // v relabelled by the automorphism p
                if (0..u.len()).all(|i| u[p[i]] == v[i]) {
                    return Some(*genus);
                }
            }
        }
        None
    }

    /// Published NLS genera, written in terms of `u` (not of the exponent vector `5 − u`).
    pub fn builtin() -> Self {
        use crate::diagram::families::*;
        let mut t = GenusTable::new();
        // lines meeting three general lines form one ruling of a quadric
        t.insert(&single(), vec![3], 0);
        let k2 = path(2);
        // g(K₂) = t₁⁴ − t₁³t₂ + t₁²t₂² − t₁t₂³ + t₂⁴
        for (u, gg) in [([1, 5], 1), ([2, 4], -1), ([3, 3], 1), ([4, 2], -1), ([5, 1], 1)] {
            t.insert(&k2, u.to_vec(), gg);
        }
        let c5 = cycle(5);
        t.insert(&c5, vec![2, 3, 3, 3, 3], 65);
        t.insert(&c5, vec![2, 3, 3, 2, 4], 33);
        // obtained by inverting b_i = 2(g_{u−e_i} + γ_u − 1) at u = (2,3,3,3,4)
        t.insert(&c5, vec![1, 3, 3, 3, 4], -15);
        t.insert(&c5, vec![2, 2, 3, 3, 4], 1);
        t.insert(&c5, vec![2, 3, 2, 3, 4], 17);
        t.insert(&path(3), vec![3, 3, 3], 5);
        t.insert(&complete(3), vec![3, 3, 2], 9);
        t
    }
}

/// `b_i = 2(g_{u−e_i} + γ_u − 1)`.
pub fn expected_disc_degree(g: &InternalGraph, u: &[u32], table: &GenusTable) -> Result<Vec<i64>> {
    let gamma = ls_degree(g, u)?.to_i64().ok_or_else(|| LandauError::Size("γ_u exceeds i64".into()))?;
    (0..u.len())
        .map(|i| {
            if u[i] == 0 {
                return Err(LandauError::Domain(format!("u_{} = 0 has no u − e_i", i + 1)));
            }
            let mut v = u.to_vec();
            v[i] -= 1;
            let gv = table.get(g, &v).ok_or(LandauError::MissingGenus(v))?;
            Ok(2 * (gv + gamma - 1))
        })
        .collect()
}

/// The upper bound `2γ_u + Σ_j γ_{u+e_i−e_j}(1 − u_j − δ_ij + deg_G(i))` read literally.
///
/// Experimental: this reading does not reproduce the known value `(8, 4)` for
/// `K₂, u = (4,3)`. Use [`expected_disc_degree`] for actual degrees.
pub fn expected_disc_degree_literal(g: &InternalGraph, u: &[u32]) -> Result<Vec<i64>> {
    let m = multidegree_complete_intersection(g)?;
    check_len(g, u)?;
    let ell = u.len();
    let gam = |v: &[i64]| -> i64 {
        if v.iter().any(|&x| !(0..=5).contains(&x)) {
            return 0;
        }
        let w: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        m.gamma(&w).to_i64().unwrap_or(0)
    };
    let ui: Vec<i64> = u.iter().map(|&x| x as i64).collect();
    Ok((0..ell)
        .map(|i| {
            let mut b = 2 * gam(&ui);
            for j in 0..ell {
                let delta = (i == j) as i64;
                if ui[j] + delta > 0 {
                    let mut v = ui.clone();
                    v[i] += 1;
                    v[j] -= 1;
                    b += gam(&v) * (1 - ui[j] - delta + g.degree(i + 1) as i64);
                }
            }
            b
        })
        .collect())
}

/// Multidegree of either component of `V_{K₃}`: `4 t₁t₂t₃(t₁+t₂)(t₁+t₃)(t₂+t₃)`.
pub fn k3_component_multidegree() -> Multidegree {
    let full = multidegree_product(&crate::diagram::families::complete(3));
    let mut half = TruncatedMultiPoly::zero(3, DEFAULT_CAP);
    for (e, c) in full.poly.terms() {
        half.add_term(e.clone(), c / 2);
    }
    Multidegree { poly: half, ell: 3, codim: 6 }
}

/// Components of the fan-triangulated pentagon, one per pair of dual components.
#[derive(Clone, Debug)]
pub struct PentagonComponentRow {
    pub label: char,
    /// Number of terms of `[V_{G,σ}]`.
    pub terms: usize,
    pub coefficients: &'static [u32],
    /// Per-vertex SLS degrees for `u = (2,3,3,3,3), (3,2,3,3,3), …, (3,3,3,3,2)`.
    pub sls_degrees: [[u32; 5]; 5],
}

pub fn pentagon_component_rows() -> Vec<PentagonComponentRow> {
    vec![
        PentagonComponentRow {
            label: 'a',
            terms: 30,
            coefficients: &[4, 8],
            sls_degrees: [[0, 8, 8, 8, 8], [8, 0, 8, 8, 8], [8, 8, 0, 8, 8], [8, 8, 8, 0, 8], [8, 8, 8, 8, 0]],
        },
        PentagonComponentRow {
            label: 'b',
            terms: 56,
            coefficients: &[4, 8, 12, 16, 24],
            sls_degrees: [[16, 8, 24, 16, 16], [8, 0, 8, 8, 8], [24, 8, 16, 16, 16], [16, 8, 16, 0, 8], [16, 8, 16, 8, 0]],
        },
        PentagonComponentRow {
            label: 'c',
            terms: 56,
            coefficients: &[4, 8, 12, 16, 24],
            sls_degrees: [[16, 16, 16, 24, 8], [16, 0, 8, 16, 8], [16, 8, 0, 16, 8], [24, 16, 16, 16, 8], [8, 8, 8, 8, 0]],
        },
        PentagonComponentRow {
            label: 'd',
            terms: 82,
            coefficients: &[4, 8, 12, 16, 20, 24, 32],
            sls_degrees: [[32, 16, 32, 32, 16], [16, 0, 8, 16, 8], [32, 8, 16, 24, 16], [32, 16, 24, 16, 8], [16, 8, 16, 8, 0]],
        },
    ]
}
