//! Grassmann graphs `𝒢_{G,σ,u}`, their trip permutations and perfect orientations,
//! and the check that positroid intersection numbers match Landau fiber counts.
//!
//! Vertex ids: boundary vertex `i` (1-based label) has id `i − 1`; internal vertices
//! follow. Rotations list neighbour ids in clockwise order, and boundary labels run
//! clockwise around the disk.

use crate::diagram::{all_bicolorings, coloring_word, is_outerplanar, Bicoloring, Color, LandauDiagram, Triangle};
use crate::schubert::{monodromy_component, route_for, solve_fiber, MonodromyOptions, SolverRoute};
use crate::{LandauError, Result};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::f64::consts::{PI, TAU};

/// Largest boundary size for which all source sets are enumerated.
pub const EXHAUSTIVE_BOUNDARY: usize = 20;

/// What an internal vertex stands for in the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Role {
    Boundary(usize),
    /// `v_i`, the internal line `L_i`.
    Line(usize),
    /// The black vertex shared by one black region of `σ`.
    Region(usize),
    /// White tripod of external line `M_j`.
    Tripod(usize),
    /// Degree-one vertex left on a boundary vertex whose column drops out.
    Lollipop,
    /// Black vertex joining the two tripods of an `H△` pair at their shared column.
    Glue(usize),
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlabicVertex {
    pub role: Role,
    pub helicity: usize,
    /// Neighbour ids, clockwise.
    pub rotation: Vec<usize>,
}

impl PlabicVertex {
    pub fn degree(&self) -> usize {
        self.rotation.len()
    }
    /// `'w'` for helicity 1, `'b'` for helicity `deg − 1`, `'h'` otherwise.
    pub fn color(&self) -> char {
        let d = self.degree();
        if self.helicity == 1 && d != 1 {
            'w'
        } else if self.helicity + 1 == d || (d == 1 && self.helicity == 0) {
            'b'
        } else if d == 1 {
            'w'
        } else {
            'h'
        }
    }
}

/// A Grassmann graph: plabic graph whose internal vertices carry helicities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlabicGraph {
    pub n: usize,
    pub vertices: Vec<PlabicVertex>,
}

impl PlabicGraph {
    /// Builds a graph from clockwise neighbour lists of the internal vertices.
    ///
    /// `internal[k]` is vertex `n + k`; ids below `n` are boundary vertices with
    /// labels `id + 1`. Every boundary vertex must have exactly one neighbour.
    pub fn from_rotations(n: usize, internal: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        let total = n + internal.len();
        let mut vertices: Vec<PlabicVertex> =
            (0..n).map(|i| PlabicVertex { role: Role::Boundary(i + 1), helicity: 0, rotation: vec![] }).collect();
        for (h, rot) in internal {
            vertices.push(PlabicVertex { role: Role::Other, helicity: h, rotation: rot });
        }
        for x in n..total {
            for &y in &vertices[x].rotation.clone() {
                if y >= total || y == x {
                    return Err(LandauError::Domain(format!("vertex {} has bad neighbour {}", x, y)));
                }
                if y < n {
                    if !vertices[y].rotation.is_empty() {
                        return Err(LandauError::Domain(format!("boundary vertex {} has degree > 1", y + 1)));
                    }
                    vertices[y].rotation.push(x);
                }
            }
        }
        let g = PlabicGraph { n, vertices };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (x, v) in self.vertices.iter().enumerate() {
            let set: BTreeSet<usize> = v.rotation.iter().copied().collect();
            if set.len() != v.rotation.len() {
                return Err(LandauError::Unsupported(format!("multiple edges at vertex {}", x)));
            }
            if x < self.n && v.rotation.len() != 1 {
                return Err(LandauError::Domain(format!("boundary vertex {} has degree {}", x + 1, v.rotation.len())));
            }
            for &y in &v.rotation {
                if !self.vertices[y].rotation.contains(&x) {
                    return Err(LandauError::Domain(format!("edge {}–{} is not symmetric", x, y)));
                }
            }
            if x >= self.n && v.helicity > v.rotation.len() {
                return Err(LandauError::Infeasible(format!("helicity {} above degree at vertex {}", v.helicity, x)));
            }
        }
        Ok(())
    }

    pub fn internal(&self) -> std::ops::Range<usize> {
        self.n..self.vertices.len()
    }

    /// Edges between two internal vertices.
    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for x in self.internal() {
            for &y in &self.vertices[x].rotation {
                if y > x {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn vertex_of(&self, role: Role) -> Option<usize> {
        self.vertices.iter().position(|v| v.role == role)
    }

    /// `k = Σ h(v) − #internal edges`, the number of sources of any perfect orientation.
    pub fn rank(&self) -> Result<usize> {
        let hs: usize = self.internal().map(|x| self.vertices[x].helicity).sum();
        let e = self.internal_edges().len();
        if hs < e || hs - e > self.n {
            return Err(LandauError::Infeasible(format!("Σh = {} against {} internal edges and n = {}", hs, e, self.n)));
        }
        Ok(hs - e)
    }

    /// `Σ h(v)(deg v − h(v)) − #internal edges`, the dimension of the positroid
    /// cell when the graph is reduced.
    pub fn expected_dimension(&self) -> i64 {
        let s: i64 = self
            .internal()
            .map(|x| {
                let v = &self.vertices[x];
                (v.helicity * (v.degree() - v.helicity)) as i64
            })
            .sum();
        s - self.internal_edges().len() as i64
    }
}

/// A permutation of `[n]` with fixed points marked as loops or coloops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedPermutation {
    /// `pi[i − 1] = π(i)`, 1-based values.
    pub pi: Vec<usize>,
    /// Fixed points lying in every basis.
    pub coloops: BTreeSet<usize>,
}

impl DecoratedPermutation {
    pub fn n(&self) -> usize {
        self.pi.len()
    }
    pub fn apply(&self, i: usize) -> usize {
        self.pi[i - 1]
    }
    pub fn anti_exceedances(&self) -> usize {
        self.pi.iter().enumerate().filter(|(i, &p)| p < i + 1).count()
    }
    /// Anti-exceedances plus coloops.
    pub fn rank(&self) -> usize {
        self.anti_exceedances() + self.coloops.len()
    }
    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.n()];
        self.pi.iter().all(|&p| p >= 1 && p <= self.n() && !std::mem::replace(&mut seen[p - 1], true))
    }
    /// The permutation in one-line notation, `(2,11,4,…)`.
    pub fn one_line(&self) -> String {
        let s: Vec<String> = self.pi.iter().map(|p| p.to_string()).collect();
        format!("({})", s.join(","))
    }
}

/// Follows the trip from every boundary vertex, turning `h(v)` steps clockwise at each vertex.
pub fn trip_permutation(g: &PlabicGraph) -> Result<DecoratedPermutation> {
    let limit = 4 * g.vertices.iter().map(|v| v.degree()).sum::<usize>() + 4;
    let mut pi = vec![0; g.n];
    let mut coloops = BTreeSet::new();
    for i in 0..g.n {
        let (mut prev, mut cur) = (i, g.vertices[i].rotation[0]);
        let mut steps = 0;
        while cur >= g.n {
            let v = &g.vertices[cur];
            let pos = v.rotation.iter().position(|&y| y == prev).expect("rotation is symmetric");
            let next = v.rotation[(pos + v.helicity) % v.degree()];
            prev = cur;
            cur = next;
            steps += 1;
            if steps > limit {
                return Err(LandauError::Precondition(format!("trip from boundary {} does not terminate", i + 1)));
            }
        }
        pi[i] = cur + 1;
        if cur == i {
            let w = g.vertices[i].rotation[0];
            if g.vertices[w].helicity > 0 {
                coloops.insert(i + 1);
            }
        }
    }
    let p = DecoratedPermutation { pi, coloops };
    if !p.is_bijection() {
        return Err(LandauError::Precondition("trips do not form a permutation; malformed embedding".into()));
    }
    Ok(p)
}

struct Flow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl Flow {
    fn new(n: usize) -> Self {
        Flow { adj: vec![vec![]; n], to: vec![], cap: vec![] }
    }
    fn arc(&mut self, a: usize, b: usize, c: u32) -> usize {
        self.adj[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.adj[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
        self.to.len() - 2
    }
    fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut total = 0;
        loop {
            let mut back = vec![usize::MAX; self.adj.len()];
            let mut q = VecDeque::from([s]);
            back[s] = usize::MAX - 1;
            while let Some(x) = q.pop_front() {
                if x == t {
                    break;
                }
                for &a in &self.adj[x] {
                    let y = self.to[a];
                    if self.cap[a] > 0 && back[y] == usize::MAX {
                        back[y] = a;
                        q.push_back(y);
                    }
                }
            }
            if back[t] == usize::MAX {
                return total;
            }
            let mut y = t;
            while y != s {
                let a = back[y];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                y = self.to[a ^ 1];
            }
            total += 1;
        }
    }
}

/// Orientation as `(tail, head)` pairs over all edges, boundary edges included.
pub type Orientation = Vec<(usize, usize)>;

/// A perfect orientation whose source set is `sources` (1-based labels), if one exists.
pub fn perfect_orientation_for(g: &PlabicGraph, sources: &[usize]) -> Option<Orientation> {
    orient(g, Some(&sources.iter().copied().collect()), None)
}

/// Flow model: every edge sends its head to one endpoint, internal vertex `v`
/// absorbs exactly `h(v)` heads. With `sources = None` boundary edges are free and
/// a sink of capacity `n − k` takes the heads landing on the boundary.
fn orient(g: &PlabicGraph, sources: Option<&BTreeSet<usize>>, rng: Option<&mut ChaCha8Rng>) -> Option<Orientation> {
    let k = g.rank().ok()?;
    let mut edges: Vec<(usize, usize)> = g.internal_edges();
    for b in 0..g.n {
        edges.push((b, g.vertices[b].rotation[0]));
    }
    if let Some(rng) = rng {
        edges.shuffle(rng);
    }
    let ne = edges.len();
    let (s, t, bsink) = (ne + g.vertices.len(), ne + g.vertices.len() + 1, ne + g.vertices.len() + 2);
    let mut f = Flow::new(bsink + 1);
    // per edge: (arc to the first candidate head, that head, fallback head)
    let mut choice = vec![];
    let mut routed = 0;
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a < g.n {
            match sources.map(|src| src.contains(&(a + 1))) {
                Some(false) => choice.push((None, a, a)),
                Some(true) => {
                    f.arc(s, e, 1);
                    choice.push((Some(f.arc(e, ne + b, 1)), b, a));
                    routed += 1;
                }
                None => {
                    f.arc(s, e, 1);
                    choice.push((Some(f.arc(e, ne + b, 1)), b, a));
                    f.arc(e, bsink, 1);
                    routed += 1;
                }
            }
        } else {
            f.arc(s, e, 1);
            choice.push((Some(f.arc(e, ne + a, 1)), a, b));
            f.arc(e, ne + b, 1);
            routed += 1;
        }
    }
    for x in g.internal() {
        f.arc(ne + x, t, g.vertices[x].helicity as u32);
    }
    if sources.is_none() {
        f.arc(bsink, t, (g.n - k) as u32);
    }
    let hs: usize = g.internal().map(|x| g.vertices[x].helicity).sum();
    let flow = f.max_flow(s, t) as usize;
    let full = if sources.is_some() { routed == hs && flow == hs } else { flow == routed };
    if !full {
        return None;
    }
    Some(
        choice
            .into_iter()
            .zip(&edges)
            .map(|((arc, first, other), &(p, q))| {
                let head = match arc {
                    Some(id) if f.cap[id] == 0 => first,
                    _ => other,
                };
                (if head == p { q } else { p }, head)
            })
            .collect(),
    )
}

/// Source set (1-based) of an orientation.
pub fn source_set(g: &PlabicGraph, o: &Orientation) -> Vec<usize> {
    let mut s: Vec<usize> = o.iter().filter(|&&(t, _)| t < g.n).map(|&(t, _)| t + 1).collect();
    s.sort();
    s
}

/// True when every internal vertex has exactly `h(v)` incoming edges.
pub fn is_perfect(g: &PlabicGraph, o: &Orientation) -> bool {
    let mut indeg = vec![0; g.vertices.len()];
    for &(_, h) in o {
        indeg[h] += 1;
    }
    o.len() == g.internal_edges().len() + g.n && g.internal().all(|x| indeg[x] == g.vertices[x].helicity)
}

pub fn is_basis(g: &PlabicGraph, s: &[usize]) -> bool {
    perfect_orientation_for(g, s).is_some()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    pub n: usize,
    pub k: usize,
    /// All source sets when `exhaustive`, otherwise distinct samples.
    pub bases: Vec<Vec<usize>>,
    pub exhaustive: bool,
    /// Basis exchange held on every sampled pair.
    pub exchange_ok: bool,
    pub exchange_pairs: usize,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut c: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i + 1) else { break };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
    out
}

/// Source sets of perfect orientations.
///
/// Up to [`EXHAUSTIVE_BOUNDARY`] boundary vertices every `k`-subset is tested;
/// above that `samples` orientations are drawn by randomised flows. Basis exchange
/// is checked on `samples` random pairs in both cases.
pub fn perfect_orientations(g: &PlabicGraph, samples: usize, seed: u64) -> Result<OrientationReport> {
    let k = g.rank()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exhaustive = g.n <= EXHAUSTIVE_BOUNDARY;
    let bases: Vec<Vec<usize>> = if exhaustive {
        subsets(g.n, k).into_iter().filter(|s| is_basis(g, s)).collect()
    } else {
        let mut seen = BTreeSet::new();
        for _ in 0..samples.max(1) * 4 {
            if let Some(o) = orient(g, None, Some(&mut rng)) {
                seen.insert(source_set(g, &o));
            }
            if seen.len() >= samples.max(1) {
                break;
            }
        }
        seen.into_iter().collect()
    };
    if bases.is_empty() {
        return Err(LandauError::Infeasible("no perfect orientation".into()));
    }
    if let Some(b) = bases.iter().find(|b| b.len() != k) {
        return Err(LandauError::Consistency { max_deviation: (b.len() as f64 - k as f64).abs() });
    }
    let known: HashSet<Vec<usize>> = bases.iter().cloned().collect();
    let member = |s: &Vec<usize>| if exhaustive { known.contains(s) } else { known.contains(s) || is_basis(g, s) };
    let pairs = if bases.len() < 2 { 0 } else { samples };
    let mut exchange_ok = true;
    for _ in 0..pairs {
        let a = &bases[rng.gen_range(0..bases.len())];
        let b = &bases[rng.gen_range(0..bases.len())];
        for &x in a.iter().filter(|x| !b.contains(x)) {
            let ok = b.iter().filter(|y| !a.contains(y)).any(|&y| {
                let mut c: Vec<usize> = a.iter().copied().filter(|&z| z != x).collect();
                c.push(y);
                c.sort();
                member(&c)
            });
            exchange_ok &= ok;
        }
    }
    Ok(OrientationReport { n: g.n, k, bases, exhaustive, exchange_ok, exchange_pairs: pairs })
}

// ---------------------------------------------------------------------------
// Construction

#[derive(Clone, Debug)]
struct Node {
    role: Role,
    /// `None`: helicity `deg − 2`, the rule for line vertices.
    helicity: Option<usize>,
    pos: (f64, f64),
    adj: BTreeSet<usize>,
}

/// Planar drawing of `𝒢` with coordinates; rotations are read off the angles.
#[derive(Clone, Debug)]
struct Drawing {
    nodes: Vec<Node>,
    /// Angle just counterclockwise of boundary 1, where labelling starts.
    start: f64,
}

impl Drawing {
    fn add(&mut self, role: Role, helicity: Option<usize>, pos: (f64, f64)) -> usize {
        self.nodes.push(Node { role, helicity, pos, adj: BTreeSet::new() });
        self.nodes.len() - 1
    }
    fn link(&mut self, a: usize, b: usize) {
        self.nodes[a].adj.insert(b);
        self.nodes[b].adj.insert(a);
    }
    fn unlink(&mut self, a: usize, b: usize) {
        self.nodes[a].adj.remove(&b);
        self.nodes[b].adj.remove(&a);
    }
    fn find(&self, role: Role) -> usize {
        self.nodes.iter().position(|n| n.role == role && !n.adj.is_empty()).expect("node present")
    }
    fn finish(&self) -> Result<PlabicGraph> {
        let live: Vec<usize> = (0..self.nodes.len()).filter(|&x| !self.nodes[x].adj.is_empty()).collect();
        let cw = |a: f64| (self.start - a).rem_euclid(TAU);
        let mut bnd: Vec<usize> = live.iter().copied().filter(|&x| matches!(self.nodes[x].role, Role::Boundary(_))).collect();
        bnd.sort_by(|&a, &b| {
            let (pa, pb) = (self.nodes[a].pos, self.nodes[b].pos);
            cw(pa.1.atan2(pa.0)).total_cmp(&cw(pb.1.atan2(pb.0)))
        });
        let inner: Vec<usize> = live.iter().copied().filter(|&x| !matches!(self.nodes[x].role, Role::Boundary(_))).collect();
        let mut id = vec![usize::MAX; self.nodes.len()];
        for (k, &x) in bnd.iter().chain(inner.iter()).enumerate() {
            id[x] = k;
        }
        let mut vertices = vec![];
        for (k, &x) in bnd.iter().chain(inner.iter()).enumerate() {
            let nd = &self.nodes[x];
            let mut nb: Vec<usize> = nd.adj.iter().copied().collect();
            nb.sort_by(|&a, &b| {
                let ang = |y: usize| {
                    let p = self.nodes[y].pos;
                    (-(p.1 - nd.pos.1).atan2(p.0 - nd.pos.0)).rem_euclid(TAU)
                };
                ang(a).total_cmp(&ang(b))
            });
            let deg = nb.len();
            let helicity = if k < bnd.len() {
                0
            } else {
                match nd.helicity {
                    Some(h) => h,
                    None => deg.checked_sub(2).ok_or_else(|| {
                        LandauError::Infeasible(format!("line vertex {:?} has degree {}", nd.role, deg))
                    })?,
                }
            };
            let role = if k < bnd.len() { Role::Boundary(k + 1) } else { nd.role };
            vertices.push(PlabicVertex { role, helicity, rotation: nb.iter().map(|&y| id[y]).collect() });
        }
        let g = PlabicGraph { n: bnd.len(), vertices };
        g.validate()?;
        Ok(g)
    }
}

fn polar(r: f64, a: f64) -> (f64, f64) {
    (r * a.cos(), r * a.sin())
}

fn black_regions(d: &LandauDiagram, sigma: &Bicoloring) -> Vec<BTreeSet<usize>> {
    let black: Vec<[usize; 3]> = d
        .graph
        .triangles()
        .into_iter()
        .filter(|t| sigma.get(&Triangle::Internal(*t)) == Some(&Color::Black))
        .collect();
    let mut parent: Vec<usize> = (0..black.len()).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = root(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in 0..black.len() {
        for b in a + 1..black.len() {
            if black[a].iter().filter(|v| black[b].contains(v)).count() == 2 {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut regions: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for a in 0..black.len() {
        let r = root(&mut parent, a);
        regions.entry(r).or_default().extend(black[a]);
    }
    regions.into_values().collect()
}

fn check_sigma(d: &LandauDiagram, sigma: &Bicoloring) -> Result<()> {
    for t in d.colorable_triangles() {
        if !sigma.contains_key(&t) {
            return Err(LandauError::Precondition(format!("colouring misses triangle {}", t.id())));
        }
    }
    Ok(())
}

/// Position of each vertex on the circle: label order when that drawing is
/// outerplanar, otherwise the first cyclic order (from vertex 1) that is.
fn drawing_order(d: &LandauDiagram) -> Result<Vec<usize>> {
    let ell = d.ell();
    if d.graph.is_cyclically_outerplanar() {
        return Ok((0..ell).collect());
    }
    if ell > 9 {
        return Err(LandauError::Size(format!("no drawing order search for ℓ = {}", ell)));
    }
    let edges = d.graph.edges();
    let works = |slot: &[usize]| {
        edges.iter().enumerate().all(|(k, &(a, b))| {
            let (a, b) = (slot[a - 1].min(slot[b - 1]), slot[a - 1].max(slot[b - 1]));
            edges[k + 1..].iter().all(|&(c, e)| {
                let (c, e) = (slot[c - 1], slot[e - 1]);
                let inside = |x: usize| a < x && x < b;
                [a, b].contains(&c) || [a, b].contains(&e) || inside(c) == inside(e)
            })
        })
    };
    let mut rest: Vec<usize> = (1..ell).collect();
    loop {
        let mut slot = vec![0; ell];
        for (k, &v) in rest.iter().enumerate() {
            slot[v] = k + 1;
        }
        if works(&slot) {
            return Ok(slot);
        }
        // next permutation of the vertices after the first
        let Some(i) = (1..rest.len()).rev().find(|&i| rest[i - 1] < rest[i]) else {
            return Err(LandauError::Unsupported("internal graph is not outerplanar".into()));
        };
        let j = (i..rest.len()).rev().find(|&j| rest[j] > rest[i - 1]).unwrap();
        rest.swap(i - 1, j);
        rest[i..].reverse();
    }
}

/// The drawing of `𝒢_{G,σ,u}` before any `H△` surgery.
fn draw(d: &LandauDiagram, sigma: &Bicoloring) -> Result<Drawing> {
    if !is_outerplanar(&d.graph)? {
        return Err(LandauError::Unsupported("internal graph is not outerplanar".into()));
    }
    check_sigma(d, sigma)?;
    let ell = d.ell();
    let slot = drawing_order(d)?;
    let mut dr = Drawing { nodes: vec![], start: 0.0 };
    let theta = |i: usize| PI / 2.0 - TAU * slot[i - 1] as f64 / ell as f64;
    let width = if ell == 1 { 0.9 * TAU } else { 0.8 * TAU / ell as f64 };
    let centre = |i: usize| if ell == 1 { (0.0, 0.0) } else { polar(1.0, theta(i)) };
    let lines: Vec<usize> = (1..=ell).map(|i| dr.add(Role::Line(i), None, centre(i))).collect();
    for i in 1..=ell {
        let ext = d.externals_at(i);
        let step = width / ext.len().max(1) as f64;
        for (k, &j) in ext.iter().enumerate() {
            let phi = theta(i) + width / 2.0 - step * (k as f64 + 0.5);
            let t = dr.add(Role::Tripod(j), Some(1), polar(2.0, phi));
            let b1 = dr.add(Role::Boundary(2 * j - 1), None, polar(3.0, phi + step / 4.0));
            let b2 = dr.add(Role::Boundary(2 * j), None, polar(3.0, phi - step / 4.0));
            if j == 1 {
                dr.start = phi + step / 4.0 + 1e-9;
            }
            dr.link(lines[i - 1], t);
            dr.link(t, b1);
            dr.link(t, b2);
        }
    }
    let regions = black_regions(d, sigma);
    let mut black_edge = BTreeSet::new();
    for (r, reg) in regions.iter().enumerate() {
        let (sx, sy) = reg.iter().fold((0.0, 0.0), |(x, y), &v| (x + centre(v).0, y + centre(v).1));
        let c = dr.add(Role::Region(r + 1), None, (sx / reg.len() as f64, sy / reg.len() as f64));
        dr.nodes[c].helicity = Some(reg.len() - 1);
        for &v in reg {
            dr.link(c, lines[v - 1]);
        }
    }
    for t in d.graph.triangles() {
        if sigma.get(&Triangle::Internal(t)) == Some(&Color::Black) {
            black_edge.extend([(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]);
        }
    }
    for (a, b) in d.graph.edges() {
        if !black_edge.contains(&(a.min(b), a.max(b))) {
            dr.link(lines[a - 1], lines[b - 1]);
        }
    }
    Ok(dr)
}

/// One `H△` rewrite at vertex `s`, with the trip permutations around it.
#[derive(Clone, Debug, Serialize)]
pub struct SurgeryStep {
    pub vertex: usize,
    pub pair: (usize, usize),
    pub color: Color,
    pub before: DecoratedPermutation,
    pub after: DecoratedPermutation,
}

/// `H△` rewrite on the tripods of the pair `(a, a + 1)` at vertex `s`.
///
/// The two tripods share their inner boundary columns. Black (concurrent): both
/// tripods go, `v_s` is joined to the shared column directly, and the two outer
/// columns keep a loop each. White (coplanar): the two inner legs meet at a new
/// black vertex attached to the shared column.
fn rewrite(dr: &mut Drawing, s: usize, a: usize, color: Color) {
    let ta = dr.find(Role::Tripod(a));
    let tb = dr.find(Role::Tripod(a + 1));
    let b1 = dr.find(Role::Boundary(2 * a - 1));
    let b2 = dr.find(Role::Boundary(2 * a));
    let b3 = dr.find(Role::Boundary(2 * a + 1));
    let b4 = dr.find(Role::Boundary(2 * a + 2));
    let v = dr.find(Role::Line(s));
    let (p2, p3) = (dr.nodes[b2].pos, dr.nodes[b3].pos);
    let ang = ((p2.1 + p3.1).atan2(p2.0 + p3.0), p2.1.hypot(p2.0));
    let shared = dr.add(Role::Boundary(2 * a), None, polar(ang.1, ang.0));
    for (x, y) in [(ta, b2), (tb, b3)] {
        dr.unlink(x, y);
    }
    match color {
        Color::Black => {
            for (x, y) in [(ta, b1), (tb, b4), (v, ta), (v, tb)] {
                dr.unlink(x, y);
            }
            for b in [b1, b4] {
                let p = dr.nodes[b].pos;
                let l = dr.add(Role::Lollipop, Some(0), (p.0 * 5.0 / 6.0, p.1 * 5.0 / 6.0));
                dr.link(l, b);
            }
            dr.link(v, shared);
        }
        Color::White => {
            let g = dr.add(Role::Glue(a), None, polar(2.5, ang.0));
            dr.nodes[g].helicity = Some(2);
            dr.link(g, ta);
            dr.link(g, tb);
            dr.link(g, shared);
        }
    }
}

fn triangle_pairs(d: &LandauDiagram) -> Result<Vec<(usize, usize)>> {
    if d.h.is_empty() {
        return Ok(vec![]);
    }
    if !d.h_triangle {
        return Err(LandauError::Unsupported("plabic graphs for external incidences other than H△".into()));
    }
    let mut out = vec![];
    for s in 1..=d.ell() {
        let Some((a, b)) = d.h_pair_at(s) else { continue };
        if b != a + 1 {
            return Err(LandauError::Unsupported(format!("H△ pair ({}, {}) is not adjacent", a, b)));
        }
        out.push((s, a));
    }
    Ok(out)
}

/// The Grassmann graph of the component `σ`, with the `H△` surgery applied when `d` carries it.
pub fn build_plabic(d: &LandauDiagram, sigma: &Bicoloring) -> Result<PlabicGraph> {
    Ok(build_plabic_logged(d, sigma)?.0)
}

/// [`build_plabic`] together with the trip permutation before and after each `H△` rewrite.
pub fn build_plabic_logged(d: &LandauDiagram, sigma: &Bicoloring) -> Result<(PlabicGraph, Vec<SurgeryStep>)> {
    let pairs = triangle_pairs(d)?;
    let mut dr = draw(d, sigma)?;
    let mut log = vec![];
    for (s, a) in pairs {
        let color = *sigma
            .get(&Triangle::External(s))
            .ok_or_else(|| LandauError::Precondition(format!("colouring misses triangle x{}", s)))?;
        let before = trip_permutation(&dr.finish()?)?;
        rewrite(&mut dr, s, a, color);
        let after = trip_permutation(&dr.finish()?)?;
        log.push(SurgeryStep { vertex: s, pair: (a, a + 1), color, before, after });
    }
    Ok((dr.finish()?, log))
}

// ---------------------------------------------------------------------------
// Moves

fn require_bw(g: &PlabicGraph, x: usize) -> Result<char> {
    let v = &g.vertices[x];
    if x < g.n {
        return Err(LandauError::Precondition(format!("vertex {} is a boundary vertex", x)));
    }
    if v.helicity == 1 {
        Ok('w')
    } else if v.helicity + 1 == v.degree() {
        Ok('b')
    } else {
        Err(LandauError::Precondition(format!("vertex {} is neither white nor black", x)))
    }
}

/// Contracts the edge `x–y` between two white or two black internal vertices.
pub fn contract_edge(g: &PlabicGraph, x: usize, y: usize) -> Result<PlabicGraph> {
    if !g.vertices[x].rotation.contains(&y) {
        return Err(LandauError::Precondition(format!("{} and {} are not adjacent", x, y)));
    }
    let (cx, cy) = (require_bw(g, x)?, require_bw(g, y)?);
    // bivalent vertices are both colours
    let white = |z: usize, c: char| c == 'w' || g.vertices[z].degree() == 2;
    let black = |z: usize, c: char| c == 'b' || g.vertices[z].degree() == 2;
    let merged_white = white(x, cx) && white(y, cy);
    if !merged_white && !(black(x, cx) && black(y, cy)) {
        return Err(LandauError::Precondition("contraction joins vertices of different colours".into()));
    }
    let after = |rot: &[usize], e: usize| {
        let p = rot.iter().position(|&z| z == e).unwrap();
        (1..rot.len()).map(|k| rot[(p + k) % rot.len()]).collect::<Vec<_>>()
    };
    let mut rot = after(&g.vertices[x].rotation, y);
    rot.extend(after(&g.vertices[y].rotation, x));
    let helicity = if merged_white { 1 } else { rot.len() - 1 };
    let mut out = g.clone();
    for &z in &g.vertices[y].rotation {
        if z != x {
            for w in out.vertices[z].rotation.iter_mut() {
                if *w == y {
                    *w = x;
                }
            }
        }
    }
    out.vertices[x] = PlabicVertex { role: g.vertices[x].role, helicity, rotation: rot };
    out.vertices[y].rotation.clear();
    remove_vertex(&mut out, y);
    out.validate()?;
    Ok(out)
}

fn remove_vertex(g: &mut PlabicGraph, y: usize) {
    g.vertices.remove(y);
    for v in g.vertices.iter_mut() {
        for w in v.rotation.iter_mut() {
            if *w > y {
                *w -= 1;
            }
        }
    }
}

/// Splits a white or black vertex: the `len` neighbours starting at rotation
/// position `start` move to a new vertex of the same colour joined to `x`.
pub fn split_vertex(g: &PlabicGraph, x: usize, start: usize, len: usize) -> Result<PlabicGraph> {
    let c = require_bw(g, x)?;
    let rot = g.vertices[x].rotation.clone();
    let d = rot.len();
    if len == 0 || len >= d || start >= d {
        return Err(LandauError::Domain(format!("cannot split {} of {} neighbours", len, d)));
    }
    let moved: Vec<usize> = (0..len).map(|k| rot[(start + k) % d]).collect();
    let kept: Vec<usize> = (len..d).map(|k| rot[(start + k) % d]).collect();
    let y = g.vertices.len();
    let mut out = g.clone();
    let mut rx = kept.clone();
    rx.push(y);
    let mut ry = moved.clone();
    ry.push(x);
    let hel = |r: &Vec<usize>| if c == 'w' { 1 } else { r.len() - 1 };
    out.vertices[x] = PlabicVertex { role: g.vertices[x].role, helicity: hel(&rx), rotation: rx };
    out.vertices.push(PlabicVertex { role: Role::Other, helicity: hel(&ry), rotation: ry });
    for &z in &moved {
        for w in out.vertices[z].rotation.iter_mut() {
            if *w == x {
                *w = y;
            }
        }
    }
    out.validate()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Consistency with the Landau fiber

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub sigma: String,
    pub n: usize,
    /// Rank from perfect orientations.
    pub k: usize,
    /// Rank read from the trip permutation.
    pub trip_rank: usize,
    pub four_k: usize,
    pub dimension: i64,
    pub dimension_matches: bool,
    /// Numeric fiber count on the component, the intersection number of the positroid.
    pub fiber_count: usize,
    pub route: String,
}

/// Numeric size of the fiber on the component `σ`.
pub fn component_fiber_count(d: &LandauDiagram, sigma: &Bicoloring, seed: u64) -> Result<(usize, SolverRoute)> {
    let route = route_for(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if route == SolverRoute::Monodromy {
        let res = monodromy_component(d, sigma, &mut rng, &MonodromyOptions::default())?;
        return Ok((res.solutions.len(), route));
    }
    let m: Vec<_> = (0..d.d())
        .map(|_| {
            let mut pt = || {
                crate::geometry::Point::new(std::array::from_fn(|_| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }))
            };
            crate::geometry::join_points(&pt(), &pt())
        })
        .collect();
    // H△ incidences are imposed on the data by the rational route itself
    let (route, sols) = solve_fiber(d, &m, seed)?;
    let single = d.colorable_triangles().is_empty();
    Ok((sols.iter().filter(|s| single || s.component.as_ref() == Some(sigma)).count(), route))
}

pub fn consistency_report(d: &LandauDiagram, sigma: &Bicoloring, seed: u64) -> Result<ConsistencyReport> {
    let g = build_plabic(d, sigma)?;
    let k = g.rank()?;
    let trip_rank = trip_permutation(&g)?.rank();
    let dimension = g.expected_dimension();
    let (fiber_count, route) = component_fiber_count(d, sigma, seed)?;
    Ok(ConsistencyReport {
        sigma: coloring_word(sigma),
        n: g.n,
        k,
        trip_rank,
        four_k: 4 * k,
        dimension,
        dimension_matches: dimension == 4 * k as i64,
        fiber_count,
        route: format!("{:?}", route),
    })
}

/// Reports for every component together with the LS degree they must add up to.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentSum {
    pub components: Vec<ConsistencyReport>,
    pub total: usize,
    pub expected: usize,
    /// Ranks agree, dimensions equal `4k`, and the counts add up.
    pub consistent: bool,
}

pub fn consistency_all(d: &LandauDiagram, seed: u64) -> Result<ComponentSum> {
    let expected = crate::positivity::expected_count(d)?;
    let mut components = vec![];
    for (k, sigma) in all_bicolorings(&d.colorable_triangles()).iter().enumerate() {
        components.push(consistency_report(d, sigma, seed.wrapping_add(k as u64))?);
    }
    let total = components.iter().map(|c| c.fiber_count).sum();
    let consistent = total == expected && components.iter().all(|c| c.dimension_matches && c.k == c.trip_rank);
    Ok(ComponentSum { components, total, expected, consistent })
}
