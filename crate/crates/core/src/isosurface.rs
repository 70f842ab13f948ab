//! Uniform grids, marching squares and marching cubes.
//!
//! Grid nodes are `x_i = R (2i − (N − 1)) / (N − 1)`, which is exactly
//! antisymmetric about 0. Field values are stored with X fastest:
//! `values[(k N + j) N + i]` in 3D and `values[j N + i]` in 2D.
//!
//! A corner is *inside* when its value is `< iso`. The cube case table is
//! generated from one rule per face: every maximal run of inside corners
//! along the face boundary is cut off by a single segment. Two cells sharing
//! a face therefore agree on its segments, and the mesh is closed away from
//! the domain boundary. The per-face segments of a cube chain into loops.
//! Loops are triangulated without diagonals lying in a cube face, since a
//! triangle inside a face would be emitted by both cells sharing it.
//!
//! Edge crossings start from linear interpolation. When an analytic
//! evaluator is supplied the crossing is polished by Illinois regula falsi
//! on the edge.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Result, SedError};

/// Triangles with area below this are dropped.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;
/// Crossings this close (in edge parameter) to a node are merged into a
/// single vertex at that node.
pub const NODE_SNAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub range: f64,
}

impl Grid {
    pub fn new(n: usize, range: f64) -> Result<Self> {
        if n < 2 {
            return Err(SedError::InvalidParameter(format!("grid size must be at least 2, got {n}")));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(SedError::InvalidParameter(format!("range must be positive, got {range}")));
        }
        Ok(Self { n, range })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.range / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        let m = (self.n - 1) as f64;
        self.range * (2.0 * i as f64 - m) / m
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ScalarField2D {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField2D {
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let xs = grid.coords();
        let values = (0..grid.n)
            .into_par_iter()
            .flat_map_iter(|j| {
                let xs = &xs;
                let f = &f;
                (0..grid.n).map(move |i| f(xs[i], xs[j]))
            })
            .collect();
        Self { grid, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n + i]
    }

    pub fn min_max(&self) -> (f64, f64) {
        min_max(&self.values)
    }
}

#[derive(Debug, Clone)]
pub struct ScalarField3D {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField3D {
    /// Samples `f` at every node; slabs of constant `k` run in parallel and
    /// the result is identical to a sequential fill.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64, f64) -> f64 + Sync) -> Self {
        let n = grid.n;
        let xs = grid.coords();
        let mut values = vec![0.0; n * n * n];
        values.par_chunks_mut(n * n).enumerate().for_each(|(k, slab)| {
            for j in 0..n {
                for i in 0..n {
                    slab[j * n + i] = f(xs[i], xs[j], xs[k]);
                }
            }
        });
        Self { grid, values }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.grid.n;
        self.values[(k * n + j) * n + i]
    }

    pub fn min_max(&self) -> (f64, f64) {
        min_max(&self.values)
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn check_level(lo: f64, hi: f64, iso: f64) -> Result<()> {
    if !(iso > lo && iso < hi) {
        return Err(SedError::InvalidParameter(format!(
            "iso level {iso} must lie strictly between the field minimum {lo} and maximum {hi}"
        )));
    }
    Ok(())
}

/// Crossing parameter `t ∈ [0, 1]` on the segment `pa → pb`.
fn crossing<const D: usize>(
    pa: [f64; D],
    fa: f64,
    pb: [f64; D],
    fb: f64,
    iso: f64,
    refine: Option<&(dyn Fn([f64; D]) -> f64 + Sync)>,
) -> f64 {
    let linear = ((iso - fa) / (fb - fa)).clamp(0.0, 1.0);
    let Some(f) = refine else { return linear };
    let at = |t: f64| -> f64 { f(std::array::from_fn(|d| pa[d] + t * (pb[d] - pa[d]))) - iso };
    let (mut t0, mut g0, mut t1, mut g1) = (0.0, at(0.0), 1.0, at(1.0));
    if g0 == 0.0 {
        return 0.0;
    }
    if g1 == 0.0 {
        return 1.0;
    }
    if g0.signum() == g1.signum() {
        return linear;
    }
    let mut side = 0;
    let mut t = linear;
    for _ in 0..200 {
        t = (t0 * g1 - t1 * g0) / (g1 - g0);
        let g = at(t);
        if g == 0.0 || (t1 - t0) <= 4.0 * f64::EPSILON {
            break;
        }
        if g.signum() == g1.signum() {
            t1 = t;
            g1 = g;
            if side == -1 {
                g0 *= 0.5;
            }
            side = -1;
        } else {
            t0 = t;
            g0 = g;
            if side == 1 {
                g1 *= 0.5;
            }
            side = 1;
        }
    }
    t
}

/// Segments cutting off each maximal run of inside corners of a polygon
/// face, as `(entering edge, leaving edge)`, where edge `k` joins corners
/// `k` and `k + 1`.
fn face_segments(inside: &[bool]) -> Vec<(usize, usize)> {
    let m = inside.len();
    let entering: Vec<usize> = (0..m).filter(|&k| !inside[k] && inside[(k + 1) % m]).collect();
    entering
        .into_iter()
        .map(|e| {
            let mut k = (e + 1) % m;
            while inside[(k + 1) % m] {
                k = (k + 1) % m;
            }
            (e, k)
        })
        .collect()
}

/// Contour segments of a 2D field at `iso`.
#[derive(Debug, Clone, Default)]
pub struct Contour {
    pub segments: Vec<[[f64; 2]; 2]>,
}

impl Contour {
    pub fn vertices(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.segments.iter().flat_map(|s| s.iter().copied())
    }
}

pub fn marching_squares(
    field: &ScalarField2D,
    iso: f64,
    refine: Option<&(dyn Fn([f64; 2]) -> f64 + Sync)>,
) -> Result<Contour> {
    let (lo, hi) = field.min_max();
    check_level(lo, hi, iso)?;
    let g = field.grid;
    let xs = g.coords();
    let segments = (0..g.n - 1)
        .into_par_iter()
        .flat_map_iter(|j| {
            let xs = &xs;
            (0..g.n - 1).flat_map(move |i| {
                let idx = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let vals = idx.map(|(a, b)| field.get(a, b));
                let pts = idx.map(|(a, b)| [xs[a], xs[b]]);
                let inside = vals.map(|v| v < iso);
                let point = |e: usize| {
                    let (a, b) = (e, (e + 1) % 4);
                    let t = crossing(pts[a], vals[a], pts[b], vals[b], iso, refine);
                    [pts[a][0] + t * (pts[b][0] - pts[a][0]), pts[a][1] + t * (pts[b][1] - pts[a][1])]
                };
                face_segments(&inside).into_iter().map(move |(e0, e1)| [point(e0), point(e1)]).collect::<Vec<_>>()
            })
        })
        .collect();
    Ok(Contour { segments })
}

/// Cells `(i, j)` whose four corners are all `< iso`.
pub fn sub_level_cells(field: &ScalarField2D, iso: f64) -> Vec<(usize, usize)> {
    let n = field.grid.n;
    (0..n - 1)
        .flat_map(|j| (0..n - 1).map(move |i| (i, j)))
        .filter(|&(i, j)| {
            [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)].iter().all(|&(a, b)| field.get(a, b) < iso)
        })
        .collect()
}

/// Cube corners are `x + 2y + 4z`; edges are corner pairs differing in one bit.
pub const CUBE_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (2, 3),
    (4, 5),
    (6, 7),
    (0, 2),
    (1, 3),
    (4, 6),
    (5, 7),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 7),
];

fn corner_pos(c: usize) -> [f64; 3] {
    [(c & 1) as f64, ((c >> 1) & 1) as f64, ((c >> 2) & 1) as f64]
}

fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    CUBE_EDGES.iter().position(|&e| e == (a, b)).expect("cube edge")
}

/// Corner cycles of the six faces, counter-clockwise seen from outside.
fn cube_faces() -> [[usize; 4]; 6] {
    let raw: [([usize; 4], [f64; 3]); 6] = [
        ([0, 2, 6, 4], [-1.0, 0.0, 0.0]),
        ([1, 3, 7, 5], [1.0, 0.0, 0.0]),
        ([0, 1, 5, 4], [0.0, -1.0, 0.0]),
        ([2, 3, 7, 6], [0.0, 1.0, 0.0]),
        ([0, 1, 3, 2], [0.0, 0.0, -1.0]),
        ([4, 5, 7, 6], [0.0, 0.0, 1.0]),
    ];
    raw.map(|(mut f, n)| {
        let p = f.map(corner_pos);
        let u = sub3(p[1], p[0]);
        let v = sub3(p[2], p[1]);
        if dot3(cross3(u, v), n) < 0.0 {
            f.reverse();
        }
        f
    })
}

fn edges_share_face(faces: &[[usize; 4]; 6], a: u8, b: u8) -> bool {
    let (p, q) = (CUBE_EDGES[a as usize], CUBE_EDGES[b as usize]);
    faces.iter().any(|f| [p.0, p.1, q.0, q.1].iter().all(|c| f.contains(c)))
}

/// Triangulates a loop of cube edges using only diagonals that join edges
/// on different faces.
fn triangulate_loop(faces: &[[usize; 4]; 6], lp: &[u8]) -> Option<Vec<[u8; 3]>> {
    let m = lp.len();
    if m == 3 {
        return Some(vec![[lp[0], lp[1], lp[2]]]);
    }
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 || edges_share_face(faces, lp[i], lp[j]) {
                continue;
            }
            let left: Vec<u8> = lp[i..=j].to_vec();
            let right: Vec<u8> = lp[j..].iter().chain(&lp[..=i]).copied().collect();
            if let (Some(mut a), Some(b)) = (triangulate_loop(faces, &left), triangulate_loop(faces, &right)) {
                a.extend(b);
                return Some(a);
            }
        }
    }
    None
}

/// Triangles (as cube-edge triples) for each of the 256 corner cases.
pub fn cube_triangle_table() -> &'static [Vec<[u8; 3]>] {
    static TABLE: OnceLock<Vec<Vec<[u8; 3]>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let faces = cube_faces();
        cube_case_table()
            .iter()
            .map(|loops| {
                loops
                    .iter()
                    .flat_map(|lp| triangulate_loop(&faces, lp).expect("every loop has a face-free triangulation"))
                    .collect()
            })
            .collect()
    })
}

/// For each of the 256 corner cases, the closed loops of crossed edges.
pub fn cube_case_table() -> &'static [Vec<Vec<u8>>] {
    static TABLE: OnceLock<Vec<Vec<Vec<u8>>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let faces = cube_faces();
        (0..256usize)
            .map(|case| {
                let inside = |c: usize| case >> c & 1 == 1;
                let mut next = [usize::MAX; 12];
                for f in &faces {
                    let flags: Vec<bool> = f.iter().map(|&c| inside(c)).collect();
                    for (e0, e1) in face_segments(&flags) {
                        let a = edge_index(f[e0], f[(e0 + 1) % 4]);
                        let b = edge_index(f[e1], f[(e1 + 1) % 4]);
                        next[a] = b;
                    }
                }
                let mut seen = [false; 12];
                let mut loops = Vec::new();
                for start in 0..12 {
                    if next[start] == usize::MAX || seen[start] {
                        continue;
                    }
                    let mut lp = Vec::new();
                    let mut e = start;
                    while !seen[e] {
                        seen[e] = true;
                        lp.push(e as u8);
                        e = next[e];
                    }
                    loops.push(lp);
                }
                loops
            })
            .collect()
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Optional per-vertex scalar.
    pub colors: Option<Vec<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Undirected edges not shared by exactly two triangles.
    pub fn open_edges(&self) -> Vec<(usize, usize)> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut open: Vec<_> = count.into_iter().filter(|&(_, c)| c != 2).map(|(e, _)| e).collect();
        open.sort_unstable();
        open
    }

    /// Closed except for edges whose endpoints both satisfy `on_boundary`.
    pub fn is_watertight_except(&self, on_boundary: impl Fn([f64; 3]) -> bool) -> bool {
        self.open_edges().iter().all(|&(a, b)| on_boundary(self.vertices[a]) && on_boundary(self.vertices[b]))
    }

    /// Directed edges used twice in the same direction (orientation clashes).
    pub fn orientation_clashes(&self) -> usize {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *count.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        count.values().filter(|&&c| c > 1).count()
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        0.5 * norm3(cross3(sub3(b, a), sub3(c, a)))
    }

    /// Signed enclosed volume (divergence theorem).
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                dot3(a, cross3(b, c)) / 6.0
            })
            .sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum VertexKey {
    Node(usize),
    Edge(usize),
}

/// Triangles and vertex positions from one k-slab of cells.
type Slab = (Vec<[VertexKey; 3]>, HashMap<VertexKey, [f64; 3]>);

/// Marching cubes at `iso`. With `refine` the vertices are polished against
/// that evaluator; otherwise they are edge-linear.
pub fn marching_cubes(
    field: &ScalarField3D,
    iso: f64,
    refine: Option<&(dyn Fn([f64; 3]) -> f64 + Sync)>,
) -> Result<TriangleMesh> {
    let (lo, hi) = field.min_max();
    check_level(lo, hi, iso)?;
    let g = field.grid;
    let n = g.n;
    let xs = g.coords();
    let table = cube_triangle_table();
    let node = |i: usize, j: usize, k: usize| (k * n + j) * n + i;

    let slabs: Vec<Slab> = (0..n - 1)
        .into_par_iter()
        .map(|k| {
            let mut tris = Vec::new();
            let mut pos: HashMap<VertexKey, [f64; 3]> = HashMap::new();
            for j in 0..n - 1 {
                for i in 0..n - 1 {
                    let corners: [(usize, usize, usize); 8] =
                        std::array::from_fn(|c| (i + (c & 1), j + (c >> 1 & 1), k + (c >> 2 & 1)));
                    let vals = corners.map(|(a, b, c)| field.get(a, b, c));
                    let case = (0..8).filter(|&c| vals[c] < iso).fold(0usize, |acc, c| acc | 1 << c);
                    let tris_here = &table[case];
                    if tris_here.is_empty() {
                        continue;
                    }
                    let mut key_of = |e: u8| -> VertexKey {
                        let (ca, cb) = CUBE_EDGES[e as usize];
                        let (pa, pb) = (corners[ca], corners[cb]);
                        let p = |q: (usize, usize, usize)| [xs[q.0], xs[q.1], xs[q.2]];
                        let t = crossing(p(pa), vals[ca], p(pb), vals[cb], iso, refine);
                        let axis = (cb - ca).trailing_zeros() as usize;
                        let key = if t <= NODE_SNAP {
                            VertexKey::Node(node(pa.0, pa.1, pa.2))
                        } else if t >= 1.0 - NODE_SNAP {
                            VertexKey::Node(node(pb.0, pb.1, pb.2))
                        } else {
                            VertexKey::Edge(node(pa.0, pa.1, pa.2) * 3 + axis)
                        };
                        pos.entry(key).or_insert_with(|| match key {
                            VertexKey::Node(_) => p(if t <= NODE_SNAP { pa } else { pb }),
                            VertexKey::Edge(_) => {
                                let (a, b) = (p(pa), p(pb));
                                std::array::from_fn(|d| a[d] + t * (b[d] - a[d]))
                            }
                        });
                        key
                    };
                    for t in tris_here {
                        tris.push(t.map(&mut key_of));
                    }
                }
            }
            (tris, pos)
        })
        .collect();

    let mut mesh = TriangleMesh::default();
    let mut index: HashMap<VertexKey, usize> = HashMap::new();
    for (tris, pos) in &slabs {
        for tri in tris {
            let t = tri.map(|key| {
                *index.entry(key).or_insert_with(|| {
                    mesh.vertices.push(pos[&key]);
                    mesh.vertices.len() - 1
                })
            });
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || mesh.triangle_area(&t) < MIN_TRIANGLE_AREA {
                continue;
            }
            mesh.triangles.push(t);
        }
    }
    Ok(mesh)
}

pub(crate) fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}
