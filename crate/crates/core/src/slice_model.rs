//! The cyclic slice `v1 = (X, Y, Z, c, 0, 0, 0, 0)`, `v2 = (Y, Z, X, 0, c, 0, 0, 0)`.
//!
//! On it `|v1| = |v2|` and `⟨v1, v2⟩ = Q = XY + YZ + ZX`, so `D2 = 4Q²`. Every
//! field value here goes through the sedenion pipeline (`join`, then
//! [`d2_geometric`]); the closed form serves as a check only.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::cd_algebra::{join, CdElement, OctonionPair, OCTONION_LEVEL};
use crate::error::{Result, SedError};
use crate::invariants::d2_geometric;
use crate::isosurface::{marching_cubes, marching_squares, sub_level_cells, Contour, Grid, ScalarField2D, ScalarField3D, TriangleMesh};
use crate::scalar::Scalar;

/// Largest accepted grid size for volume sampling.
pub const MAX_VOLUME_N: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceParams {
    pub c: f64,
    pub range: f64,
    pub n: usize,
    pub eps: f64,
}

impl Default for SliceParams {
    fn default() -> Self {
        Self { c: 0.5, range: 1.0, n: 81, eps: 0.01 }
    }
}

impl SliceParams {
    pub fn validate(&self) -> Result<Grid> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(SedError::InvalidParameter(format!("slice constant must be positive, got {}", self.c)));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(SedError::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        Grid::new(self.n, self.range)
    }
}

pub fn slice_point<T: Scalar>(x: &T, y: &T, z: &T, c: &T) -> OctonionPair<T> {
    let o = T::zero();
    let v1 = [x, y, z, c, &o, &o, &o, &o].map(Clone::clone);
    let v2 = [y, z, x, &o, c, &o, &o, &o].map(Clone::clone);
    OctonionPair {
        v1: CdElement::new(OCTONION_LEVEL, v1.to_vec()).expect("8 coefficients"),
        v2: CdElement::new(OCTONION_LEVEL, v2.to_vec()).expect("8 coefficients"),
    }
}

/// `D2` of the slice sedenion, through the full pipeline.
pub fn d2_on_slice<T: Scalar>(x: &T, y: &T, z: &T, c: &T) -> T {
    d2_geometric(&join(&slice_point(x, y, z, c))).expect("sedenion")
}

/// `⟨v1, v2⟩` of the slice pair.
pub fn inner_on_slice<T: Scalar>(x: &T, y: &T, z: &T, c: &T) -> T {
    let p = slice_point(x, y, z, c);
    p.v1.inner(&p.v2).expect("octonions")
}

/// `Q = XY + YZ + ZX`.
pub fn quadric<T: Scalar>(x: &T, y: &T, z: &T) -> T {
    x.clone() * y.clone() + y.clone() * z.clone() + z.clone() * x.clone()
}

/// `4 Q²`.
pub fn closed_form<T: Scalar>(x: &T, y: &T, z: &T) -> T {
    let q = quadric(x, y, z);
    T::from_i64(4) * q.clone() * q
}

/// `∇Q = (Y + Z, X + Z, X + Y)`.
pub fn gradient_q(x: f64, y: f64, z: f64) -> [f64; 3] {
    [y + z, x + z, x + y]
}

/// Central differences with step `h`.
pub fn finite_difference_gradient(f: impl Fn([f64; 3]) -> f64, p: [f64; 3], h: f64) -> [f64; 3] {
    std::array::from_fn(|d| {
        let (mut a, mut b) = (p, p);
        a[d] += h;
        b[d] -= h;
        (f(a) - f(b)) / (2.0 * h)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    pub analytic: [f64; 3],
    pub numeric: [f64; 3],
    pub max_error: f64,
}

/// Analytic `∇Q` against central differences (`h = 1e-5`).
pub fn gradient_check(x: f64, y: f64, z: f64) -> GradientCheck {
    let analytic = gradient_q(x, y, z);
    let numeric = finite_difference_gradient(|p| quadric(&p[0], &p[1], &p[2]), [x, y, z], 1e-5);
    let max_error = (0..3).map(|d| (analytic[d] - numeric[d]).abs()).fold(0.0, f64::max);
    GradientCheck { analytic, numeric, max_error }
}

/// `D2(X, Y, 0)` on a grid, with its `eps`-contour.
#[derive(Debug, Clone)]
pub struct PlaneSample {
    pub params: SliceParams,
    pub field: ScalarField2D,
    pub contour: Contour,
}

impl PlaneSample {
    pub fn log1p(&self, i: usize, j: usize) -> f64 {
        self.field.get(i, j).ln_1p()
    }

    /// Cells whose four corners are all below `eps`.
    pub fn sub_eps_cells(&self) -> Vec<(usize, usize)> {
        sub_level_cells(&self.field, self.params.eps)
    }

    pub fn cell_center(&self, (i, j): (usize, usize)) -> [f64; 2] {
        let g = self.field.grid;
        [0.5 * (g.coord(i) + g.coord(i + 1)), 0.5 * (g.coord(j) + g.coord(j + 1))]
    }

    /// Largest `L∞` distance to `{X = 0} ∪ {Y = 0}` over sub-`eps` cell
    /// centers with `|X|, |Y| ≥ min_coord`; `None` when there are none.
    pub fn axis_deviation(&self, min_coord: f64) -> Option<f64> {
        self.sub_eps_cells()
            .into_iter()
            .map(|c| self.cell_center(c))
            .filter(|p| p[0].abs() >= min_coord && p[1].abs() >= min_coord)
            .map(|p| p[0].abs().min(p[1].abs()))
            .reduce(f64::max)
    }

    /// Largest `|D2 − eps|` over contour vertices, re-evaluated through the pipeline.
    pub fn contour_residual(&self) -> f64 {
        let c = self.params.c;
        self.contour
            .vertices()
            .map(|p| (d2_on_slice(&p[0], &p[1], &0.0, &c) - self.params.eps).abs())
            .fold(0.0, f64::max)
    }

    pub fn cross_shape(&self) -> CrossShape {
        CrossShape::of(&self.field.grid, &self.sub_eps_cells())
    }
}

pub fn sample_plane_z0(params: &SliceParams) -> Result<PlaneSample> {
    let grid = params.validate()?;
    let c = params.c;
    let field = ScalarField2D::from_fn(grid, |x, y| d2_on_slice(&x, &y, &0.0, &c));
    let eval = |p: [f64; 2]| d2_on_slice(&p[0], &p[1], &0.0, &c);
    let contour = marching_squares(&field, params.eps, Some(&eval))?;
    Ok(PlaneSample { params: *params, field, contour })
}

/// `D2` over `[-R, R]³`; `N` above [`MAX_VOLUME_N`] is rejected.
pub fn sample_volume(params: &SliceParams) -> Result<ScalarField3D> {
    let grid = params.validate()?;
    if params.n > MAX_VOLUME_N {
        return Err(SedError::InvalidParameter(format!("grid size {} exceeds the volume limit {MAX_VOLUME_N}", params.n)));
    }
    let c = params.c;
    Ok(ScalarField3D::from_fn(grid, |x, y, z| d2_on_slice(&x, &y, &z, &c)))
}

/// The `D2 = eps` isosurface with vertices polished against the pipeline and
/// colored by `⟨v1, v2⟩`.
pub fn isosurface(params: &SliceParams) -> Result<(ScalarField3D, TriangleMesh)> {
    let field = sample_volume(params)?;
    let c = params.c;
    let eval = |p: [f64; 3]| d2_on_slice(&p[0], &p[1], &p[2], &c);
    let mut mesh = marching_cubes(&field, params.eps, Some(&eval))?;
    mesh.colors = Some(mesh.vertices.iter().map(|p| inner_on_slice(&p[0], &p[1], &p[2], &c)).collect());
    Ok((field, mesh))
}

/// Largest `|D2(vertex) − eps|` over the mesh.
pub fn mesh_residual(mesh: &TriangleMesh, params: &SliceParams) -> f64 {
    mesh.vertices
        .iter()
        .map(|p| (d2_on_slice(&p[0], &p[1], &p[2], &params.c) - params.eps).abs())
        .fold(0.0, f64::max)
}

/// Shape summary of a set of grid cells around the coordinate axes.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossShape {
    pub cells: usize,
    /// One 4-connected component.
    pub connected: bool,
    /// Invariant under `X ↦ −X`, `Y ↦ −Y` and `X ↔ Y`.
    pub symmetric: bool,
    /// Largest `max(|X|, |Y|)` over cell centers.
    pub arm_length: f64,
    /// Largest `min(|X|, |Y|)` over cell centers, plus half a cell.
    pub arm_width: f64,
}

impl CrossShape {
    /// Minimum arm length to width ratio for [`CrossShape::is_cross`].
    pub const MIN_ASPECT: f64 = 3.0;

    pub fn of(grid: &Grid, cells: &[(usize, usize)]) -> Self {
        let set: HashSet<(usize, usize)> = cells.iter().copied().collect();
        let last = grid.n - 2;
        let symmetric = cells
            .iter()
            .all(|&(i, j)| set.contains(&(last - i, j)) && set.contains(&(i, last - j)) && set.contains(&(j, i)));
        let mut seen = HashSet::new();
        if let Some(&start) = cells.first() {
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some((i, j)) = queue.pop_front() {
                let nbrs = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                for q in nbrs {
                    if set.contains(&q) && seen.insert(q) {
                        queue.push_back(q);
                    }
                }
            }
        }
        let center = |(i, j): (usize, usize)| {
            [0.5 * (grid.coord(i) + grid.coord(i + 1)), 0.5 * (grid.coord(j) + grid.coord(j + 1))]
        };
        let arm_length = cells.iter().map(|&c| center(c)).map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max);
        let arm_width =
            cells.iter().map(|&c| center(c)).map(|p| p[0].abs().min(p[1].abs())).fold(0.0, f64::max) + 0.5 * grid.step();
        Self { cells: cells.len(), connected: !cells.is_empty() && seen.len() == cells.len(), symmetric, arm_length, arm_width }
    }

    pub fn is_cross(&self) -> bool {
        self.connected && self.symmetric && self.arm_length >= Self::MIN_ASPECT * self.arm_width
    }
}

#[derive(Debug, Clone)]
pub struct StabilityRow {
    pub n: usize,
    pub eps: f64,
    pub vertices: usize,
    /// `vertices / (N − 1)²`.
    pub vertex_density: f64,
    pub cross: CrossShape,
}

/// Mesh size and sub-`eps` shape for every `(N, eps)` combination.
pub fn stability_study(ns: &[usize], epss: &[f64], c: f64, range: f64) -> Result<Vec<StabilityRow>> {
    let mut rows = Vec::new();
    for &eps in epss {
        for &n in ns {
            let params = SliceParams { c, range, n, eps };
            let (_, mesh) = isosurface(&params)?;
            let plane = sample_plane_z0(&params)?;
            rows.push(StabilityRow {
                n,
                eps,
                vertices: mesh.vertices.len(),
                vertex_density: mesh.vertices.len() as f64 / ((n - 1) * (n - 1)) as f64,
                cross: plane.cross_shape(),
            });
        }
    }
    Ok(rows)
}

/// `(max − min) / max` of the vertex densities of the rows with this `eps`.
pub fn density_spread(rows: &[StabilityRow], eps: f64) -> f64 {
    let d: Vec<f64> = rows.iter().filter(|r| r.eps == eps).map(|r| r.vertex_density).collect();
    let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    (hi - lo) / hi
}

/// `X,Y,D2,log1pD2` rows, X fastest.
pub fn plane_csv(s: &PlaneSample) -> String {
    let g = s.field.grid;
    let mut out = String::from("X,Y,D2,log1pD2\n");
    for j in 0..g.n {
        for i in 0..g.n {
            let _ = writeln!(out, "{},{},{},{}", g.coord(i), g.coord(j), s.field.get(i, j), s.log1p(i, j));
        }
    }
    out
}

/// One contour segment per row: `x0,y0,x1,y1`.
pub fn contour_csv(c: &Contour) -> String {
    let mut out = String::from("x0,y0,x1,y1\n");
    for [a, b] in &c.segments {
        let _ = writeln!(out, "{},{},{},{}", a[0], a[1], b[0], b[1]);
    }
    out
}

/// Wavefront OBJ; faces use 1-based indices.
pub fn mesh_obj(mesh: &TriangleMesh, params: &SliceParams) -> String {
    let mut out = format!(
        "# D2 = {} isosurface, N = {}, R = {}, c = {}\n# {} vertices, {} triangles\n",
        params.eps,
        params.n,
        params.range,
        params.c,
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// `vertex_index,inner_product` with 1-based indices matching the OBJ.
pub fn mesh_colors_csv(mesh: &TriangleMesh) -> String {
    let mut out = String::from("vertex_index,inner_product\n");
    for (k, c) in mesh.colors.iter().flatten().enumerate() {
        let _ = writeln!(out, "{},{}", k + 1, c);
    }
    out
}

/// Header `# N R c eps`, then one line per `(j, k)` holding the `N` values
/// along X.
pub fn field_dump(field: &ScalarField3D, params: &SliceParams) -> String {
    let n = field.grid.n;
    let mut out = format!("# N R c eps (X fastest, then Y, then Z)\n{} {} {} {}\n", n, params.range, params.c, params.eps);
    for row in field.values.chunks(n) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
