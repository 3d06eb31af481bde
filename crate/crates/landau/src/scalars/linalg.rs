//! Dense linear algebra over any [`Field`]: determinants, solves and kernels.
//!
//! Exact fields pivot on the first nonzero entry, floating fields on the entry of
//! largest magnitude.

use super::field::Field;

pub type Matrix<F> = Vec<Vec<F>>;

pub fn zeros<F: Field>(rows: usize, cols: usize) -> Matrix<F> {
    vec![vec![F::zero(); cols]; rows]
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

pub fn transpose<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out: Matrix<F> = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].clone() + a[i][l].clone() * b[l][j].clone();
            }
        }
    }
    out
}

fn pick_pivot<F: Field>(m: &Matrix<F>, col: usize, from: usize) -> Option<usize> {
    if F::is_exact() {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        let mut best = None;
        let mut best_mag = 0.0;
        for (r, row) in m.iter().enumerate().skip(from) {
            let mag = row[col].magnitude();
            if mag > best_mag {
                best_mag = mag;
                best = Some(r);
            }
        }
        best
    }
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    if n == 0 {
        return F::one();
    }
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let p = match pick_pivot(&a, c, c) {
            Some(p) => p,
            None => return F::zero(),
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = d * piv.clone();
        for r in (c + 1)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / piv.clone();
            for k in c..n {
                let t = a[c][k].clone();
                a[r][k] = a[r][k].clone() - f.clone() * t;
            }
        }
    }
    d
}

/// Reduced row echelon form; returns the pivot columns. Entries with
/// magnitude below `tol` are treated as zero (use `0.0` for exact fields).
pub fn rref<F: Field>(m: &mut Matrix<F>, tol: f64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = match pick_pivot(m, c, r) {
            Some(p) if m[p][c].magnitude() > tol => p,
            _ => continue,
        };
        m.swap(p, r);
        let piv = m[r][c].clone();
        for k in 0..cols {
            m[r][k] = m[r][k].clone() / piv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = m[r][k].clone();
                    m[i][k] = m[i][k].clone() - f.clone() * t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>, tol: f64) -> usize {
    let mut a = m.clone();
    rref(&mut a, tol).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>, tol: f64) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let pivots = rref(&mut a, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solve the square system `m x = b`; `None` when singular.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = pick_pivot(&a, c, c)?;
        if a[p][c].is_zero() {
            return None;
        }
        a.swap(p, c);
        let piv = a[c][c].clone();
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone() / piv.clone();
                for k in c..=n {
                    let t = a[c][k].clone();
                    a[r][k] = a[r][k].clone() - f.clone() * t;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n].clone() / a[i][i].clone()).collect())
}

/// Adjugate of a square matrix via cofactors (small sizes only).
pub fn adjugate<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let n = m.len();
    let mut adj = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix<F> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}
