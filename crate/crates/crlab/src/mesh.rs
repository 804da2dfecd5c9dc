//! The distorted triangulation family `T_{n,m}` of the unit square.
//!
//! `T_{n,m}` is generated by horizontal lines of spacing `1/(2m)` and two
//! slanted line families of slope `+n/m` and `-n/m`. Vertices sit on the grid
//! `(i/(2n), j/(2m))` with even `i` on even rows and `i = 0, 1, 3, ..,
//! 2n-1, 2n` on odd rows. Each horizontal strip of height `1/(2m)` carries
//! `2n + 1` triangles: `n` isoceles triangles based on the full-spacing line,
//! `n - 1` inverted ones based on the opposite line, and one right triangle
//! at each vertical wall.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{midpoint, signed_area_x2, Point};

/// Parameters of `T_{n,m}`: mesh width `1/n` and strip height `1/(2m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeshParams {
    pub n: usize,
    pub m: usize,
}

impl MeshParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 || m < n {
            return Err(Error::InvalidMeshParams { n, m });
        }
        Ok(MeshParams { n, m })
    }

    /// Longest edge length, `1/n`.
    pub fn h_t(self) -> f64 {
        1.0 / self.n as f64
    }

    /// Half column width `h = 1/(2n)`.
    pub fn h(self) -> f64 {
        1.0 / (2.0 * self.n as f64)
    }

    /// Strip height `k = 1/(2m)`.
    pub fn k(self) -> f64 {
        1.0 / (2.0 * self.m as f64)
    }

    /// Distortion measure `kappa = h^2 / k = m / (2 n^2)`.
    pub fn kappa(self) -> f64 {
        self.m as f64 / (2.0 * (self.n * self.n) as f64)
    }

    /// `tan(alpha/2) = m/n` for the maximum interior angle `alpha`.
    pub fn tan_half_alpha(self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// Mesh edge with precomputed geometry and adjacency.
#[derive(Clone, Debug)]
pub struct Edge {
    /// Endpoint vertex indices, `vertices[0] < vertices[1]`.
    pub vertices: [usize; 2],
    pub midpoint: Point,
    pub length: f64,
    /// Unit normal pointing out of `tri_plus` (outward for boundary edges).
    pub normal: Point,
    pub boundary: bool,
    /// Triangle on the side the normal points away from.
    pub tri_plus: usize,
    /// Triangle on the side the normal points into; `None` on the boundary.
    pub tri_minus: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    pub params: MeshParams,
    pub vertices: Vec<Point>,
    /// Integer grid coordinates `(i, j)` with `x = i/(2n)`, `y = j/(2m)`.
    pub vertex_grid: Vec<(usize, usize)>,
    /// Vertex index triples, counterclockwise.
    pub triangles: Vec<[usize; 3]>,
    /// Edges sorted lexicographically by midpoint `(y, x)`.
    pub edges: Vec<Edge>,
    /// Per-triangle edge indices; entry `i` is the edge opposite local vertex `i`.
    pub triangle_edges: Vec<[usize; 3]>,
    /// Indices of interior edges, in edge order.
    pub interior_edges: Vec<usize>,
}

/// Geometry statistics measured from the assembled mesh.
#[derive(Clone, Copy, Debug)]
pub struct MeshStats {
    pub h_t: f64,
    pub tan_half_alpha: f64,
    pub min_area: f64,
    pub max_area: f64,
    pub total_area: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub interior_edge_count: usize,
    pub triangle_count: usize,
}

/// Build `T_{n,m}`.
pub fn build_mesh(params: MeshParams) -> Triangulation {
    let (n, m) = (params.n, params.m);

    // Row-major vertex enumeration: even rows hold n+1 vertices (even i),
    // odd rows n+2 (i = 0, then odd i, then 2n).
    let mut vertices = Vec::new();
    let mut vertex_grid = Vec::new();
    let mut row_start = Vec::with_capacity(2 * m + 1);
    for j in 0..=2 * m {
        row_start.push(vertices.len());
        let is: Vec<usize> = if j % 2 == 0 {
            (0..=n).map(|q| 2 * q).collect()
        } else {
            std::iter::once(0)
                .chain((0..n).map(|q| 2 * q + 1))
                .chain(std::iter::once(2 * n))
                .collect()
        };
        for i in is {
            vertices.push(Point::new(
                i as f64 / (2.0 * n as f64),
                j as f64 / (2.0 * m as f64),
            ));
            vertex_grid.push((i, j));
        }
    }
    let vid = |i: usize, j: usize| -> usize {
        let base = row_start[j];
        if j % 2 == 0 {
            debug_assert!(i % 2 == 0);
            base + i / 2
        } else if i == 0 {
            base
        } else if i == 2 * n {
            base + n + 1
        } else {
            debug_assert!(i % 2 == 1);
            base + (i + 1) / 2
        }
    };

    // Strip s spans rows s-1..s; odd strips have the full-spacing (even) line
    // at the bottom.
    let mut triangles = Vec::with_capacity(2 * m * (2 * n + 1));
    for s in 1..=2 * m {
        let (jb, jt) = (s - 1, s);
        if s % 2 == 1 {
            for q in 0..n {
                // base on the bottom line, apex above
                triangles.push([vid(2 * q, jb), vid(2 * q + 2, jb), vid(2 * q + 1, jt)]);
            }
            for q in 1..n {
                // base on the top line, apex below
                triangles.push([vid(2 * q + 1, jt), vid(2 * q - 1, jt), vid(2 * q, jb)]);
            }
            triangles.push([vid(0, jb), vid(1, jt), vid(0, jt)]);
            triangles.push([vid(2 * n, jt), vid(2 * n - 1, jt), vid(2 * n, jb)]);
        } else {
            for q in 0..n {
                triangles.push([vid(2 * q + 2, jt), vid(2 * q, jt), vid(2 * q + 1, jb)]);
            }
            for q in 1..n {
                triangles.push([vid(2 * q - 1, jb), vid(2 * q + 1, jb), vid(2 * q, jt)]);
            }
            triangles.push([vid(0, jt), vid(0, jb), vid(1, jb)]);
            triangles.push([vid(2 * n, jb), vid(2 * n, jt), vid(2 * n - 1, jb)]);
        }
    }
    for t in triangles.iter_mut() {
        if signed_area_x2(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0.0 {
            t.swap(1, 2);
        }
    }

    // Deduplicate edges by sorted endpoint pair; remember, per triangle, which
    // local slot (opposite vertex) each edge fills.
    let mut acc: BTreeMap<[usize; 2], Vec<(usize, usize)>> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for local in 0..3 {
            let a = tri[(local + 1) % 3];
            let b = tri[(local + 2) % 3];
            let key = [a.min(b), a.max(b)];
            acc.entry(key).or_default().push((t, local));
        }
    }

    // Deterministic global edge order: lexicographic by midpoint (y, x),
    // realized exactly through the integer grid sums.
    let mut keys: Vec<[usize; 2]> = acc.keys().copied().collect();
    keys.sort_by_key(|k| {
        let (i1, j1) = vertex_grid[k[0]];
        let (i2, j2) = vertex_grid[k[1]];
        (j1 + j2, i1 + i2)
    });

    let mut edges = Vec::with_capacity(keys.len());
    let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
    let mut interior_edges = Vec::new();
    for key in keys {
        let owners = &acc[&key];
        debug_assert!(owners.len() == 1 || owners.len() == 2);
        let (a, b) = (key[0], key[1]);
        let mid = midpoint(vertices[a], vertices[b]);
        let tangent = vertices[b] - vertices[a];
        let length = tangent.norm();
        let mut normal = tangent.perp() * (1.0 / length);
        let tri_plus = owners[0].0;
        let centroid = {
            let t = triangles[tri_plus];
            (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) * (1.0 / 3.0)
        };
        if normal.dot(mid - centroid) < 0.0 {
            normal = normal * -1.0;
        }
        let edge_index = edges.len();
        for &(t, local) in owners {
            triangle_edges[t][local] = edge_index;
        }
        if owners.len() == 2 {
            interior_edges.push(edge_index);
        }
        edges.push(Edge {
            vertices: key,
            midpoint: mid,
            length,
            normal,
            boundary: owners.len() == 1,
            tri_plus,
            tri_minus: owners.get(1).map(|&(t, _)| t),
        });
    }

    Triangulation {
        params,
        vertices,
        vertex_grid,
        triangles,
        edges,
        triangle_edges,
        interior_edges,
    }
}

impl Triangulation {
    pub fn build(n: usize, m: usize) -> Result<Self> {
        Ok(build_mesh(MeshParams::new(n, m)?))
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let v = self.triangle_vertices(t);
        0.5 * signed_area_x2(v[0], v[1], v[2])
    }

    pub fn barycenter(&self, t: usize) -> Point {
        let v = self.triangle_vertices(t);
        (v[0] + v[1] + v[2]) * (1.0 / 3.0)
    }

    /// Gradients of the three barycentric coordinates on triangle `t`.
    pub fn grad_lambda(&self, t: usize) -> [Point; 3] {
        let v = self.triangle_vertices(t);
        let a2 = signed_area_x2(v[0], v[1], v[2]);
        let mut out = [Point::new(0.0, 0.0); 3];
        for i in 0..3 {
            let d = v[(i + 2) % 3] - v[(i + 1) % 3];
            out[i] = d.perp() * (1.0 / a2);
        }
        out
    }

    /// Affine coefficients `(a, b, c)` with `lambda_i = a + b x + c y` per
    /// barycentric coordinate of triangle `t`.
    pub fn barycentric_affine(&self, t: usize) -> [[f64; 3]; 3] {
        let v = self.triangle_vertices(t);
        let g = self.grad_lambda(t);
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            // lambda_i vanishes at vertex i+2
            let p = v[(i + 2) % 3];
            out[i] = [-g[i].x * p.x - g[i].y * p.y, g[i].x, g[i].y];
        }
        out
    }

    /// Serialize the mesh as JSON.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct EdgeJson {
            v: [usize; 2],
            boundary: bool,
        }
        #[derive(Serialize)]
        struct MeshJson {
            params: MeshParams,
            vertices: Vec<[f64; 2]>,
            triangles: Vec<[usize; 3]>,
            edges: Vec<EdgeJson>,
        }
        let doc = MeshJson {
            params: self.params,
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
            triangles: self.triangles.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { v: e.vertices, boundary: e.boundary })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("mesh serialization cannot fail")
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_json().as_bytes())
    }
}

/// Measure mesh statistics from the geometry (not from the `(n, m)` formulas,
/// which serve as the test oracle).
pub fn mesh_stats(tri: &Triangulation) -> MeshStats {
    let mut h_t = 0.0f64;
    for e in &tri.edges {
        h_t = h_t.max(e.length);
    }
    let mut tan_half_alpha = 0.0f64;
    let mut min_area = f64::INFINITY;
    let mut max_area = 0.0f64;
    let mut total_area = 0.0;
    for t in 0..tri.triangles.len() {
        let v = tri.triangle_vertices(t);
        for i in 0..3 {
            let u = v[(i + 1) % 3] - v[i];
            let w = v[(i + 2) % 3] - v[i];
            let cos = u.dot(w) / (u.norm() * w.norm());
            let cos = cos.clamp(-1.0, 1.0);
            // tan(alpha/2) via half-angle identity, stable near alpha = pi
            let th = ((1.0 - cos) / (1.0 + cos)).sqrt();
            tan_half_alpha = tan_half_alpha.max(th);
        }
        let area = tri.triangle_area(t);
        min_area = min_area.min(area);
        max_area = max_area.max(area);
        total_area += area;
    }
    MeshStats {
        h_t,
        tan_half_alpha,
        min_area,
        max_area,
        total_area,
        vertex_count: tri.vertices.len(),
        edge_count: tri.edges.len(),
        interior_edge_count: tri.interior_edges.len(),
        triangle_count: tri.triangles.len(),
    }
}
