//! Internal graphs, pendant vectors, external degenerations and bicolorings.
//!
//! Internal vertices are labelled `1..=ℓ` and are assumed to be drawn in that
//! cyclic order. External lines are labelled `1..=d` in the same cyclic order:
//! vertex `i` owns the labels `offset(i)+1 ..= offset(i)+u_i`.

use crate::{LandauError, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const MAX_OUTERPLANAR_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalGraph {
    ell: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl InternalGraph {
    pub fn new(ell: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b || a == 0 || b == 0 || a > ell || b > ell {
                return Err(LandauError::Domain(format!("invalid edge {}{} for ℓ = {}", a, b, ell)));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(LandauError::Domain(format!("repeated edge {}{}", a, b)));
            }
        }
        Ok(InternalGraph { ell, edges: set })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (1..=self.ell).filter(|&w| self.has_edge(v, w)).collect()
    }
    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).len()
    }
    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(&(a.min(b), a.max(b)));
        g
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.ell >= 1 && self.num_edges() + 1 == self.ell && self.is_connected()
    }

    pub fn is_connected(&self) -> bool {
        if self.ell == 0 {
            return true;
        }
        let mut seen = vec![false; self.ell + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    /// All 3-cliques, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = vec![];
        for &(a, b) in &self.edges {
            for c in (b + 1)..=self.ell {
                if self.has_edge(a, c) && self.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// True when no two edges interleave in the cyclic order `1..ℓ`, so that
    /// drawing the vertices on a circle in label order is an outerplanar drawing.
    pub fn is_cyclically_outerplanar(&self) -> bool {
        let e = self.edges();
        for (k, &(a, b)) in e.iter().enumerate() {
            for &(c, d) in &e[k + 1..] {
                let inside = |x: usize| a < x && x < b;
                let shared = a == c || a == d || b == c || b == d;
                if !shared && inside(c) != inside(d) {
                    return false;
                }
            }
        }
        true
    }
}

/// Biconnected blocks as edge lists (Hopcroft–Tarjan with an edge stack).
fn blocks(g: &InternalGraph) -> Vec<Vec<(usize, usize)>> {
    let n = g.ell;
    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut time = 0;
    let mut stack: Vec<(usize, usize)> = vec![];
    let mut out = vec![];
    fn dfs(
        g: &InternalGraph,
        v: usize,
        parent: usize,
        disc: &mut [usize],
        low: &mut [usize],
        time: &mut usize,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        *time += 1;
        disc[v] = *time;
        low[v] = *time;
        for w in g.neighbours(v) {
            if disc[w] == 0 {
                stack.push((v, w));
                dfs(g, w, v, disc, low, time, stack, out);
                low[v] = low[v].min(low[w]);
                if low[w] >= disc[v] {
                    let mut comp = vec![];
                    while let Some(e) = stack.pop() {
                        comp.push(e);
                        if e == (v, w) {
                            break;
                        }
                    }
                    out.push(comp);
                }
            } else if w != parent && disc[w] < disc[v] {
                stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        }
    }
    for v in 1..=n {
        if disc[v] == 0 {
            dfs(g, v, 0, &mut disc, &mut low, &mut time, &mut stack, &mut out);
        }
    }
    out
}

/// Searches for a Hamiltonian cycle of a block along which all remaining edges are non-crossing chords.
fn block_outerplanar(edges: &[(usize, usize)]) -> bool {
    let verts: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let verts: Vec<usize> = verts.into_iter().collect();
    let n = verts.len();
    if n <= 3 {
        return true;
    }
    if edges.len() > 2 * n - 3 {
        return false;
    }
    let idx = |v: usize| verts.iter().position(|&x| x == v).unwrap();
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[idx(a)][idx(b)] = true;
        adj[idx(b)][idx(a)] = true;
    }
    let local: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    fn extend(adj: &[Vec<bool>], local: &[(usize, usize)], path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = adj.len();
        if path.len() == n {
            if !adj[*path.last().unwrap()][path[0]] {
                return false;
            }
            let mut pos = vec![0; n];
            for (k, &v) in path.iter().enumerate() {
                pos[v] = k;
            }
            let chords: Vec<(usize, usize)> = local
                .iter()
                .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
                .collect();
            for (k, &(a, b)) in chords.iter().enumerate() {
                for &(c, d) in &chords[k + 1..] {
                    let inside = |x: usize| a < x && x < b;
                    let shared = a == c || a == d || b == c || b == d;
                    if !shared && inside(c) != inside(d) {
                        return false;
                    }
                }
            }
            return true;
        }
        let last = *path.last().unwrap();
        for w in 0..n {
            if adj[last][w] && !used[w] {
                // fix orientation: second vertex smaller than the last one
                if path.len() == n - 1 && path.len() > 1 && w < path[1] {
                    continue;
                }
                used[w] = true;
                path.push(w);
                if extend(adj, local, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(&adj, &local, &mut path, &mut used)
}

/// Outerplanarity (no subdivision of `K₄` or `K₂,₃`).
///
/// A graph is outerplanar iff each biconnected block has a Hamiltonian cycle
/// along which the remaining edges are pairwise non-crossing chords.
pub fn is_outerplanar(g: &InternalGraph) -> Result<bool> {
    if g.ell > MAX_OUTERPLANAR_VERTICES {
        return Err(LandauError::Size(format!(
            "outerplanarity test limited to ℓ ≤ {}, got {}",
            MAX_OUTERPLANAR_VERTICES, g.ell
        )));
    }
    Ok(blocks(g).iter().all(|b| block_outerplanar(b)))
}

/// Triangles of an outerplanar graph and the number `2^τ` of irreducible components.
pub fn triangles_and_components(g: &InternalGraph) -> Result<(Vec<[usize; 3]>, u64)> {
    if !is_outerplanar(g)? {
        return Err(LandauError::Unsupported("component count needs an outerplanar graph".into()));
    }
    let t = g.triangles();
    let n = 1u64 << t.len();
    Ok((t, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "b")]
    Black,
    #[serde(rename = "w")]
    White,
}

impl Color {
    pub fn flip(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
    pub fn letter(self) -> char {
        match self {
            Color::Black => 'b',
            Color::White => 'w',
        }
    }
}

/// A colourable triangle: either a 3-clique of `G` or the external triangle
/// formed at vertex `i` by `L_i` and its two incident external lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Triangle {
    Internal([usize; 3]),
    External(usize),
}

impl Triangle {
    /// Identifier used in JSON: `"1-2-3"` or `"x2"`.
    pub fn id(&self) -> String {
        match self {
            Triangle::Internal([a, b, c]) => format!("{}-{}-{}", a, b, c),
            Triangle::External(i) => format!("x{}", i),
        }
    }
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix('x') {
            return rest
                .parse()
                .map(Triangle::External)
                .map_err(|_| LandauError::Parse(format!("bad triangle id {:?}", s)));
        }
        let parts: Vec<usize> = s
            .split('-')
            .map(|p| p.parse().map_err(|_| LandauError::Parse(format!("bad triangle id {:?}", s))))
            .collect::<Result<_>>()?;
        if parts.len() != 3 {
            return Err(LandauError::Parse(format!("bad triangle id {:?}", s)));
        }
        let mut t = [parts[0], parts[1], parts[2]];
        t.sort();
        Ok(Triangle::Internal(t))
    }
}

pub type Bicoloring = BTreeMap<Triangle, Color>;

/// All `2^τ` colourings of the given triangles.
pub fn all_bicolorings(tris: &[Triangle]) -> Vec<Bicoloring> {
    (0..(1u64 << tris.len()))
        .map(|mask| {
            tris.iter()
                .enumerate()
                .map(|(k, t)| (*t, if mask >> k & 1 == 0 { Color::Black } else { Color::White }))
                .collect()
        })
        .collect()
}

/// Compact string for a colouring in triangle order, e.g. `"bwbb"`.
pub fn coloring_word(s: &Bicoloring) -> String {
    s.values().map(|c| c.letter()).collect()
}

/// Which pair of external lines at a vertex the `H△` degeneration joins.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum TrianglePairChoice {
    /// The first two external lines at each vertex in cyclic order.
    #[default]
    CyclicallyFirst,
    /// Explicit 0-based positions among the vertex's external lines.
    PerVertex(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandauDiagram {
    pub graph: InternalGraph,
    pub u: Vec<u32>,
    /// Incidences between external lines (1-based labels).
    pub h: Vec<(usize, usize)>,
    /// True when `h` is the `H△` degeneration.
    pub h_triangle: bool,
    pub sigma: Option<Bicoloring>,
}

impl LandauDiagram {
    pub fn new(graph: InternalGraph, u: Vec<u32>) -> Result<Self> {
        if u.len() != graph.ell() {
            return Err(LandauError::Dimension(format!(
                "pendant vector has {} entries for ℓ = {}",
                u.len(),
                graph.ell()
            )));
        }
        Ok(LandauDiagram { graph, u, h: vec![], h_triangle: false, sigma: None })
    }

    pub fn ell(&self) -> usize {
        self.graph.ell()
    }

    /// Number of external lines `d = |u|`.
    pub fn d(&self) -> usize {
        self.u.iter().sum::<u32>() as usize
    }

    /// Labels of the external lines at vertex `i` (1-based).
    pub fn externals_at(&self, i: usize) -> Vec<usize> {
        let off: usize = self.u[..i - 1].iter().sum::<u32>() as usize;
        (off + 1..=off + self.u[i - 1] as usize).collect()
    }

    /// Internal vertex owning external line `a`.
    pub fn owner(&self, a: usize) -> usize {
        let mut acc = 0;
        for (i, &ui) in self.u.iter().enumerate() {
            acc += ui as usize;
            if a <= acc {
                return i + 1;
            }
        }
        panic!("external label {} out of range", a)
    }

    /// `dim V_G = 4ℓ − |G|`.
    pub fn dim(&self) -> i64 {
        4 * self.ell() as i64 - self.graph.num_edges() as i64
    }

    /// External triangles of `H△`, one per internal vertex.
    pub fn external_triangles(&self) -> Vec<Triangle> {
        if !self.h_triangle {
            return vec![];
        }
        (1..=self.ell()).map(Triangle::External).collect()
    }

    /// Triangles of `G` followed by the external triangles.
    pub fn colorable_triangles(&self) -> Vec<Triangle> {
        let mut t: Vec<Triangle> = self.graph.triangles().into_iter().map(Triangle::Internal).collect();
        t.extend(self.external_triangles());
        t
    }

    /// The external pair `(a, b)` joined by `H` at vertex `i`, if any.
    pub fn h_pair_at(&self, i: usize) -> Option<(usize, usize)> {
        let ext = self.externals_at(i);
        self.h.iter().copied().find(|&(a, b)| ext.contains(&a) && ext.contains(&b))
    }
}

/// Attaches the `H△` degeneration: at every vertex two of its external lines become incident.
pub fn build_h_triangle(g: &InternalGraph, u: &[u32]) -> Result<LandauDiagram> {
    build_h_triangle_with(g, u, &TrianglePairChoice::CyclicallyFirst)
}

pub fn build_h_triangle_with(g: &InternalGraph, u: &[u32], choice: &TrianglePairChoice) -> Result<LandauDiagram> {
    if let Some(i) = u.iter().position(|&x| x < 2) {
        return Err(LandauError::Precondition(format!("H△ needs u_i ≥ 2, but u_{} = {}", i + 1, u[i])));
    }
    let mut d = LandauDiagram::new(g.clone(), u.to_vec())?;
    for i in 1..=g.ell() {
        let ext = d.externals_at(i);
        let (p, q) = match choice {
            TrianglePairChoice::CyclicallyFirst => (0, 1),
            TrianglePairChoice::PerVertex(v) => {
                let (p, q) = *v.get(i - 1).ok_or_else(|| LandauError::Dimension("pair choice per vertex".into()))?;
                if p == q || p >= ext.len() || q >= ext.len() {
                    return Err(LandauError::Domain(format!("bad external pair ({}, {}) at vertex {}", p, q, i)));
                }
                (p.min(q), p.max(q))
            }
        };
        d.h.push((ext[p], ext[q]));
    }
    d.h_triangle = true;
    Ok(d)
}

/// Outcome of splitting a diagram at a vertex subset.
#[derive(Clone, Debug, PartialEq)]
pub enum Split {
    Reducible {
        /// Induced subdiagram on `V₁` (vertices relabelled in increasing order).
        first: LandauDiagram,
        /// Induced subdiagram on the complement, with each connecting edge turned into a pendant.
        second: LandauDiagram,
        /// Edges of `G` between `V₁` and its complement, original labels.
        connecting: Vec<(usize, usize)>,
        v1: Vec<usize>,
        v2: Vec<usize>,
    },
    NotReducible {
        have: i64,
        need: i64,
    },
}

/// Reducibility test: `Σ_{i∈V₁} u_i = 4|V₁| − |G[V₁]|`.
pub fn reducibility_split(d: &LandauDiagram, v1: &[usize]) -> Result<Split> {
    let ell = d.ell();
    let set: BTreeSet<usize> = v1.iter().copied().collect();
    if set.is_empty() || set.len() >= ell || set.iter().any(|&v| v == 0 || v > ell) {
        return Err(LandauError::Precondition("V₁ must be a nonempty proper vertex subset".into()));
    }
    let v1: Vec<usize> = set.iter().copied().collect();
    let v2: Vec<usize> = (1..=ell).filter(|v| !set.contains(v)).collect();
    let inside = d.graph.edges().iter().filter(|(a, b)| set.contains(a) && set.contains(b)).count() as i64;
    let have: i64 = v1.iter().map(|&v| d.u[v - 1] as i64).sum();
    let need = 4 * v1.len() as i64 - inside;
    if have != need {
        return Ok(Split::NotReducible { have, need });
    }
    let connecting: Vec<(usize, usize)> = d
        .graph
        .edges()
        .into_iter()
        .filter(|(a, b)| set.contains(a) != set.contains(b))
        .collect();
    let induced = |vs: &[usize]| -> Result<InternalGraph> {
        let pos = |v: usize| vs.iter().position(|&x| x == v).map(|p| p + 1);
        let e: Vec<(usize, usize)> = d
            .graph
            .edges()
            .into_iter()
            .filter_map(|(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        InternalGraph::new(vs.len(), &e)
    };
    let first = LandauDiagram::new(induced(&v1)?, v1.iter().map(|&v| d.u[v - 1]).collect())?;
    let u2: Vec<u32> = v2
        .iter()
        .map(|&v| d.u[v - 1] + connecting.iter().filter(|(a, b)| *a == v || *b == v).count() as u32)
        .collect();
    let second = LandauDiagram::new(induced(&v2)?, u2)?;
    Ok(Split::Reducible { first, second, connecting, v1, v2 })
}

/// Standard families used in tests and the CLI.
pub mod families {
    use super::InternalGraph;

    pub fn single() -> InternalGraph {
        InternalGraph::new(1, &[]).unwrap()
    }
    pub fn complete(n: usize) -> InternalGraph {
        let e: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        InternalGraph::new(n, &e).unwrap()
    }
    pub fn path(n: usize) -> InternalGraph {
        let e: Vec<(usize, usize)> = (1..n).map(|a| (a, a + 1)).collect();
        InternalGraph::new(n, &e).unwrap()
    }
    pub fn cycle(n: usize) -> InternalGraph {
        let mut e: Vec<(usize, usize)> = (1..n).map(|a| (a, a + 1)).collect();
        e.push((1, n));
        InternalGraph::new(n, &e).unwrap()
    }
    /// Fan triangulation of the pentagon from vertex 1.
    pub fn triangulated_pentagon() -> InternalGraph {
        InternalGraph::new(5, &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5)]).unwrap()
    }
    /// Zigzag triangulation of the ℓ-gon with diagonals `(2,ℓ), (ℓ,3), (3,ℓ−1), (ℓ−1,4), …`.
    pub fn fibonacci(ell: usize) -> InternalGraph {
        assert!(ell >= 3);
        let mut e: Vec<(usize, usize)> = (1..ell).map(|a| (a, a + 1)).collect();
        e.push((1, ell));
        let (mut lo, mut hi) = (2, ell);
        let mut step_lo = true;
        while e.len() < 2 * ell - 3 {
            e.push((lo, hi));
            if step_lo {
                lo += 1;
            } else {
                hi -= 1;
            }
            step_lo = !step_lo;
        }
        InternalGraph::new(ell, &e).unwrap()
    }
    /// The pendant vector of the Fibonacci family: 3 at vertices 1, 2 and `⌈ℓ/2⌉ + 1`, else 2.
    pub fn fibonacci_u(ell: usize) -> Vec<u32> {
        let v = ell.div_ceil(2) + 1;
        (1..=ell).map(|i| if i == 1 || i == 2 || i == v { 3 } else { 2 }).collect()
    }
    /// All labelled trees on `n` vertices (Prüfer sequences).
    pub fn all_trees(n: usize) -> Vec<InternalGraph> {
        if n == 1 {
            return vec![single()];
        }
        if n == 2 {
            return vec![path(2)];
        }
        let mut out = vec![];
        let total = n.pow((n - 2) as u32);
        for code in 0..total {
            let mut seq = vec![];
            let mut c = code;
            for _ in 0..n - 2 {
                seq.push(c % n + 1);
                c /= n;
            }
            let mut degree = vec![1usize; n + 1];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut edges = vec![];
            for &s in &seq {
                let leaf = (1..=n).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf, s));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            out.push(InternalGraph::new(n, &edges).unwrap());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HJson {
    Edges(Vec<[usize; 2]>),
    Keyword(String),
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    #[serde(default)]
    schema: Option<String>,
    ell: usize,
    #[serde(default)]
    edges: Vec<[usize; 2]>,
    u: Vec<u32>,
    #[serde(default, rename = "H")]
    h: Option<HJson>,
    #[serde(default)]
    sigma: Option<BTreeMap<String, Color>>,
}

pub const DIAGRAM_SCHEMA: &str = "landau.diagram/1";

/// Parses the diagram JSON format
/// `{"ell", "edges": [[i,j]..], "u": [..], "H": [[a,b]..] | "triangle", "sigma": {"1-2-3": "b", "x1": "w"}}`.
pub fn diagram_from_json(s: &str) -> Result<LandauDiagram> {
    let j: DiagramJson = serde_json::from_str(s).map_err(|e| LandauError::Parse(e.to_string()))?;
    let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
    let g = InternalGraph::new(j.ell, &edges)?;
    let mut d = match j.h {
        None => LandauDiagram::new(g, j.u)?,
        Some(HJson::Keyword(k)) if k == "triangle" => build_h_triangle(&g, &j.u)?,
        Some(HJson::Keyword(k)) => return Err(LandauError::Parse(format!("unknown H keyword {:?}", k))),
        Some(HJson::Edges(e)) => {
            let mut d = LandauDiagram::new(g, j.u)?;
            let dd = d.d();
            for [a, b] in e {
                if a == 0 || b == 0 || a > dd || b > dd || a == b {
                    return Err(LandauError::Domain(format!("bad external edge [{}, {}]", a, b)));
                }
                d.h.push((a.min(b), a.max(b)));
            }
            d
        }
    };
    if let Some(sig) = j.sigma {
        let allowed = d.colorable_triangles();
        let mut out = Bicoloring::new();
        for (k, c) in sig {
            let t = Triangle::parse(&k)?;
            if !allowed.contains(&t) {
                return Err(LandauError::Domain(format!("{} is not a triangle of the diagram", k)));
            }
            out.insert(t, c);
        }
        d.sigma = Some(out);
    }
    Ok(d)
}

pub fn diagram_to_json(d: &LandauDiagram) -> serde_json::Value {
    let h = if d.h_triangle {
        Some(HJson::Keyword("triangle".into()))
    } else if d.h.is_empty() {
        None
    } else {
        Some(HJson::Edges(d.h.iter().map(|&(a, b)| [a, b]).collect()))
    };
    let j = DiagramJson {
        schema: Some(DIAGRAM_SCHEMA.into()),
        ell: d.ell(),
        edges: d.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
        u: d.u.clone(),
        h,
        sigma: d.sigma.as_ref().map(|s| s.iter().map(|(t, c)| (t.id(), *c)).collect()),
    };
    serde_json::to_value(j).expect("diagram serializes")
}
