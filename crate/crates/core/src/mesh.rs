//! Tetrahedral volume meshes with a matched, watertight, outward-oriented
//! boundary triangulation, plus the shipped primitives (reference tet, cube,
//! icosphere ball) and the layered annulus used as an exterior surrogate.
//!
//! File format (ASCII, one record per line, `#` comments allowed):
//!
//! ```text
//! vertices <n>
//! x y z          # n lines, coordinates in meters
//! tets <m>
//! a b c d        # m lines, 0-based vertex indices, positive orientation
//! tris <k>
//! i j k          # k lines, boundary faces oriented outward
//! ```

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

/// Interior tetrahedral mesh of the solid with its boundary triangulation.
#[derive(Debug, Clone)]
pub struct CoupledMesh {
    pub vertices: Vec<Point>,
    pub tets: Vec<[usize; 4]>,
    /// Boundary faces, vertex order chosen so the normal points out of the solid.
    pub boundary_tris: Vec<[usize; 3]>,
    /// Owning tet of each boundary face.
    pub tri_to_tet: Vec<usize>,
    /// Global vertex ids that lie on the boundary, sorted ascending.
    pub boundary_vertices: Vec<usize>,
    /// Maps a global vertex id to its position in `boundary_vertices` (or `usize::MAX`).
    pub boundary_index: Vec<usize>,
}

impl CoupledMesh {
    /// Builds a mesh from raw vertices, tets and oriented boundary faces,
    /// checking every structural invariant eagerly.
    pub fn new(
        vertices: Vec<Point>,
        tets: Vec<[usize; 4]>,
        boundary_tris: Vec<[usize; 3]>,
    ) -> Result<Self> {
        let n_v = vertices.len();
        for (i, t) in tets.iter().enumerate() {
            for &v in t {
                if v >= n_v {
                    return Err(Error::IndexOutOfRange {
                        what: format!("tet {i}"),
                        index: v,
                        n_vertices: n_v,
                    });
                }
            }
        }
        for (i, t) in boundary_tris.iter().enumerate() {
            for &v in t {
                if v >= n_v {
                    return Err(Error::IndexOutOfRange {
                        what: format!("boundary face {i}"),
                        index: v,
                        n_vertices: n_v,
                    });
                }
            }
        }
        for (i, t) in tets.iter().enumerate() {
            if signed_volume(&vertices, t) <= 0.0 {
                return Err(Error::InvertedTet { cell: i });
            }
        }

        // faces that belong to exactly one tet must coincide with the stated boundary
        let mut face_count: HashMap<[usize; 3], (usize, usize)> = HashMap::new();
        for (ti, t) in tets.iter().enumerate() {
            for f in tet_faces(t) {
                let key = sorted3(f);
                let e = face_count.entry(key).or_insert((0, ti));
                e.0 += 1;
                e.1 = ti;
            }
        }
        let mut tri_to_tet = Vec::with_capacity(boundary_tris.len());
        for (fi, f) in boundary_tris.iter().enumerate() {
            match face_count.get(&sorted3(*f)) {
                Some(&(1, ti)) => tri_to_tet.push(ti),
                _ => return Err(Error::OrphanFace { face: fi }),
            }
        }
        let n_single = face_count.values().filter(|&&(c, _)| c == 1).count();
        if n_single != boundary_tris.len() {
            return Err(Error::Invalid(format!(
                "boundary triangulation lists {} faces but the tets expose {}",
                boundary_tris.len(),
                n_single
            )));
        }

        // watertight and orientable: every undirected edge on exactly two
        // faces, every directed edge on exactly one
        let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &boundary_tris {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *directed.entry(e).or_insert(0) += 1;
                let key = (e.0.min(e.1), e.0.max(e.1));
                *undirected.entry(key).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &undirected {
            if count != 2 {
                return Err(Error::OpenEdge { a, b, count });
            }
        }
        for (&(a, b), &count) in &directed {
            if count != 1 {
                return Err(Error::OpenEdge { a, b, count });
            }
        }

        // outward orientation: the face normal must point away from the
        // opposite vertex of the owning tet
        for (fi, f) in boundary_tris.iter().enumerate() {
            let tet = &tets[tri_to_tet[fi]];
            let opposite = tet
                .iter()
                .copied()
                .find(|v| !f.contains(v))
                .expect("boundary face must be a tet face");
            let n = face_normal_unnormalized(&vertices, f);
            let to_face = vertices[f[0]] - vertices[opposite];
            if n.dot(&to_face) <= 0.0 {
                return Err(Error::InwardFace { face: fi });
            }
        }

        let mut boundary_vertices: Vec<usize> =
            boundary_tris.iter().flatten().copied().collect();
        boundary_vertices.sort_unstable();
        boundary_vertices.dedup();
        let mut boundary_index = vec![usize::MAX; n_v];
        for (k, &v) in boundary_vertices.iter().enumerate() {
            boundary_index[v] = k;
        }

        Ok(Self {
            vertices,
            tets,
            boundary_tris,
            tri_to_tet,
            boundary_vertices,
            boundary_index,
        })
    }

    pub fn n_boundary_vertices(&self) -> usize {
        self.boundary_vertices.len()
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        signed_volume(&self.vertices, &self.tets[t])
    }

    pub fn volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }

    pub fn panel_area(&self, f: usize) -> f64 {
        0.5 * face_normal_unnormalized(&self.vertices, &self.boundary_tris[f]).norm()
    }

    pub fn panel_normal(&self, f: usize) -> Point {
        face_normal_unnormalized(&self.vertices, &self.boundary_tris[f]).normalize()
    }

    pub fn panel_centroid(&self, f: usize) -> Point {
        let t = &self.boundary_tris[f];
        (self.vertices[t[0]] + self.vertices[t[1]] + self.vertices[t[2]]) / 3.0
    }

    pub fn panel_diameter(&self, f: usize) -> f64 {
        let t = &self.boundary_tris[f];
        let (a, b, c) = (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
        (a - b).norm().max((b - c).norm()).max((c - a).norm())
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.boundary_tris.len()).map(|f| self.panel_area(f)).sum()
    }

    pub fn centroid(&self) -> Point {
        let mut c = Point::zeros();
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        let c = self.centroid();
        2.0 * self
            .vertices
            .iter()
            .map(|v| (v - c).norm())
            .fold(0.0, f64::max)
    }

    /// Radius of the smallest centroid-centered ball containing the surface.
    pub fn circumscribing_radius(&self) -> f64 {
        let c = self.centroid();
        self.boundary_vertices
            .iter()
            .map(|&v| (self.vertices[v] - c).norm())
            .fold(0.0, f64::max)
    }

    /// Distance from a point to the closest boundary panel centroid corner.
    pub fn distance_to_boundary(&self, p: &Point) -> f64 {
        self.boundary_tris
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&v| (self.vertices[v] - p).norm())
                    .fold(f64::INFINITY, f64::min)
                    .min((self.panel_centroid_of(t) - p).norm())
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn panel_centroid_of(&self, t: &[usize; 3]) -> Point {
        (self.vertices[t[0]] + self.vertices[t[1]] + self.vertices[t[2]]) / 3.0
    }

    /// Point-in-solid test by barycentric membership in any tet.
    pub fn contains(&self, p: &Point) -> bool {
        let tol = -1e-12 * self.diameter();
        self.tets.iter().any(|t| {
            let v0 = self.vertices[t[0]];
            let v1 = self.vertices[t[1]];
            let v2 = self.vertices[t[2]];
            let v3 = self.vertices[t[3]];
            let total = signed_volume(&self.vertices, t);
            let b0 = orient_volume(&p, &v1, &v2, &v3);
            let b1 = orient_volume(&v0, &p, &v2, &v3);
            let b2 = orient_volume(&v0, &v1, &p, &v3);
            let b3 = orient_volume(&v0, &v1, &v2, &p);
            b0 >= tol * total && b1 >= tol * total && b2 >= tol * total && b3 >= tol * total
                && (b0 + b1 + b2 + b3 - total).abs() < 1e-9 * total.abs().max(1e-300)
        })
    }
}

fn sorted3(f: [usize; 3]) -> [usize; 3] {
    let mut s = f;
    s.sort_unstable();
    s
}

fn tet_faces(t: &[usize; 4]) -> [[usize; 3]; 4] {
    [
        [t[1], t[2], t[3]],
        [t[0], t[3], t[2]],
        [t[0], t[1], t[3]],
        [t[0], t[2], t[1]],
    ]
}

fn signed_volume(vertices: &[Point], t: &[usize; 4]) -> f64 {
    orient_volume(
        &vertices[t[0]],
        &vertices[t[1]],
        &vertices[t[2]],
        &vertices[t[3]],
    )
}

fn orient_volume(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

fn face_normal_unnormalized(vertices: &[Point], f: &[usize; 3]) -> Point {
    (vertices[f[1]] - vertices[f[0]]).cross(&(vertices[f[2]] - vertices[f[0]]))
}

/// Derives the outward-oriented boundary triangulation from the tets.
pub fn derive_boundary(vertices: &[Point], tets: &[[usize; 4]]) -> Vec<[usize; 3]> {
    let mut face_count: HashMap<[usize; 3], (usize, usize, [usize; 3])> = HashMap::new();
    for (ti, t) in tets.iter().enumerate() {
        for f in tet_faces(t) {
            let e = face_count.entry(sorted3(f)).or_insert((0, ti, f));
            e.0 += 1;
            e.1 = ti;
            e.2 = f;
        }
    }
    let mut tris = Vec::new();
    for (_, (count, ti, f)) in face_count {
        if count == 1 {
            let t = &tets[ti];
            let opposite = t.iter().copied().find(|v| !f.contains(v)).unwrap();
            let n = face_normal_unnormalized(vertices, &f);
            let outward = n.dot(&(vertices[f[0]] - vertices[opposite])) > 0.0;
            tris.push(if outward { f } else { [f[0], f[2], f[1]] });
        }
    }
    tris.sort_unstable();
    tris
}

// ------------------------------------------------------------------
// shipped primitives
// ------------------------------------------------------------------

/// The reference tetrahedron (unit corner simplex).
pub fn reference_tet() -> CoupledMesh {
    let vertices = vec![
        Point::new(0.0, 0.0, 0.0),
        Point::new(1.0, 0.0, 0.0),
        Point::new(0.0, 1.0, 0.0),
        Point::new(0.0, 0.0, 1.0),
    ];
    let tets = vec![[0, 1, 2, 3]];
    let tris = derive_boundary(&vertices, &tets);
    CoupledMesh::new(vertices, tets, tris).expect("reference tet is valid")
}

/// Unit cube `[0,1]^3` as an `n x n x n` grid of cells, six tets per cell.
pub fn cube_mesh(n: usize) -> Result<CoupledMesh> {
    if n == 0 {
        return Err(Error::Invalid("cube mesh needs n >= 1".into()));
    }
    let np = n + 1;
    let idx = |i: usize, j: usize, k: usize| (i * np + j) * np + k;
    let mut vertices = Vec::with_capacity(np * np * np);
    for i in 0..np {
        for j in 0..np {
            for k in 0..np {
                vertices.push(Point::new(
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                ));
            }
        }
    }
    // Kuhn subdivision of each cell along the main diagonal
    let corner_paths: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let base = [i, j, k];
                for path in &corner_paths {
                    let mut corner = base;
                    let mut quad = [idx(base[0], base[1], base[2]), 0, 0, 0];
                    for (step, &axis) in path.iter().enumerate() {
                        corner[axis] += 1;
                        quad[step + 1] = idx(corner[0], corner[1], corner[2]);
                    }
                    let mut t = quad;
                    if signed_volume(&vertices, &t) < 0.0 {
                        t.swap(2, 3);
                    }
                    tets.push(t);
                }
            }
        }
    }
    let tris = derive_boundary(&vertices, &tets);
    CoupledMesh::new(vertices, tets, tris)
}

/// Triangulated unit sphere: icosahedron subdivided `level` times, vertices
/// projected onto the sphere, faces oriented outward.
pub fn icosphere_surface(level: usize) -> (Vec<Point>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Point::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for e in 0..3 {
                let a = f[e];
                let b = f[(e + 1) % 3];
                let key = (a.min(b), a.max(b));
                mid[e] = *midpoint.entry(key).or_insert_with(|| {
                    let p = ((vertices[a] + vertices[b]) / 2.0).normalize();
                    vertices.push(p);
                    vertices.len() - 1
                });
            }
            new_faces.push([f[0], mid[0], mid[2]]);
            new_faces.push([f[1], mid[1], mid[0]]);
            new_faces.push([f[2], mid[2], mid[1]]);
            new_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = new_faces;
    }
    // orient outward
    for f in &mut faces {
        let n = (vertices[f[1]] - vertices[f[0]]).cross(&(vertices[f[2]] - vertices[f[0]]));
        let c = (vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) / 3.0;
        if n.dot(&c) < 0.0 {
            f.swap(1, 2);
        }
    }
    (vertices, faces)
}

/// Solid unit ball meshed in radial layers over an icosphere boundary.
///
/// `subdiv` controls the surface resolution, `layers` the number of radial
/// shells; `layers = subdiv + 1` keeps elements roughly isotropic.
pub fn ball_mesh(subdiv: usize, layers: usize) -> Result<CoupledMesh> {
    if layers == 0 {
        return Err(Error::Invalid("ball mesh needs at least one layer".into()));
    }
    let (surface, faces) = icosphere_surface(subdiv);
    let ns = surface.len();
    // vertex 0 is the center; layer l (1-based) holds ns vertices at radius l/layers
    let mut vertices = vec![Point::zeros()];
    for l in 1..=layers {
        let r = l as f64 / layers as f64;
        vertices.extend(surface.iter().map(|p| p * r));
    }
    let vid = |layer: usize, k: usize| 1 + (layer - 1) * ns + k;
    let mut tets = Vec::new();
    // innermost fan
    for f in &faces {
        let mut t = [0, vid(1, f[0]), vid(1, f[1]), vid(1, f[2])];
        if signed_volume(&vertices, &t) < 0.0 {
            t.swap(2, 3);
        }
        tets.push(t);
    }
    // prisms between consecutive layers, split consistently by global index
    for l in 1..layers {
        for f in &faces {
            let mut tri = *f;
            tri.sort_unstable();
            let [i, j, k] = tri;
            let (i0, j0, k0) = (vid(l, i), vid(l, j), vid(l, k));
            let (i1, j1, k1) = (vid(l + 1, i), vid(l + 1, j), vid(l + 1, k));
            for raw in [[i0, j0, k0, i1], [j0, k0, i1, j1], [k0, i1, j1, k1]] {
                let mut t = raw;
                if signed_volume(&vertices, &t) < 0.0 {
                    t.swap(2, 3);
                }
                tets.push(t);
            }
        }
    }
    let tris = derive_boundary(&vertices, &tets);
    CoupledMesh::new(vertices, tets, tris)
}

/// Layered shell between a closed surface and a sphere of radius
/// `outer_factor * circumscribing_radius`, used as the truncated stand-in for
/// the unbounded exterior.
pub struct Annulus {
    pub mesh: CoupledMesh,
    /// Annulus vertex id of the k-th boundary vertex of the base mesh.
    pub inner_vertex: Vec<usize>,
}

pub fn annulus_mesh(base: &CoupledMesh, outer_factor: f64, layers: usize) -> Result<Annulus> {
    if layers == 0 {
        return Err(Error::Invalid("annulus needs at least one layer".into()));
    }
    if outer_factor <= 1.0 {
        return Err(Error::Invalid("annulus outer factor must exceed 1".into()));
    }
    let centroid = base.centroid();
    let r_out = outer_factor * base.circumscribing_radius();
    let nb = base.boundary_vertices.len();
    let mut vertices = Vec::with_capacity(nb * (layers + 1));
    for l in 0..=layers {
        let t = l as f64 / layers as f64;
        for &v in &base.boundary_vertices {
            let p = base.vertices[v];
            let dir = p - centroid;
            let rho = dir.norm();
            let target = rho + (r_out - rho) * t;
            vertices.push(centroid + dir * (target / rho));
        }
    }
    // surface triangles in boundary-local indices
    let faces: Vec<[usize; 3]> = base
        .boundary_tris
        .iter()
        .map(|t| {
            [
                base.boundary_index[t[0]],
                base.boundary_index[t[1]],
                base.boundary_index[t[2]],
            ]
        })
        .collect();
    let vid = |layer: usize, k: usize| layer * nb + k;
    let mut tets = Vec::new();
    for l in 0..layers {
        for f in &faces {
            let mut tri = *f;
            tri.sort_unstable();
            let [i, j, k] = tri;
            let (i0, j0, k0) = (vid(l, i), vid(l, j), vid(l, k));
            let (i1, j1, k1) = (vid(l + 1, i), vid(l + 1, j), vid(l + 1, k));
            for raw in [[i0, j0, k0, i1], [j0, k0, i1, j1], [k0, i1, j1, k1]] {
                let mut t = raw;
                if signed_volume(&vertices, &t) < 0.0 {
                    t.swap(2, 3);
                }
                tets.push(t);
            }
        }
    }
    let tris = derive_boundary(&vertices, &tets);
    let mesh = CoupledMesh::new(vertices, tets, tris)?;
    Ok(Annulus {
        mesh,
        inner_vertex: (0..nb).collect(),
    })
}

// ------------------------------------------------------------------
// file i/o
// ------------------------------------------------------------------

pub fn load_mesh(path: &Path) -> Result<CoupledMesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text, &path.display().to_string())
}

pub fn parse_mesh(text: &str, origin: &str) -> Result<CoupledMesh> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Vertices(usize),
        Tets(usize),
        Tris(usize),
    }
    let mut vertices = Vec::new();
    let mut tets: Vec<[usize; 4]> = Vec::new();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    let mut section = Section::None;
    let mut remaining = 0usize;

    let perr = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if remaining == 0 {
            let mut parts = content.split_whitespace();
            let name = parts.next().unwrap();
            let count: usize = parts
                .next()
                .ok_or_else(|| perr(line, format!("section `{name}` needs a count")))?
                .parse()
                .map_err(|_| perr(line, format!("bad count in section `{name}`")))?;
            section = match name {
                "vertices" => Section::Vertices(count),
                "tets" => Section::Tets(count),
                "tris" => Section::Tris(count),
                other => return Err(perr(line, format!("unknown section `{other}`"))),
            };
            remaining = count;
            continue;
        }
        let nums: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::Vertices(_) => {
                if nums.len() != 3 {
                    return Err(perr(line, "vertex record needs 3 coordinates".into()));
                }
                let mut c = [0.0; 3];
                for (k, t) in nums.iter().enumerate() {
                    c[k] = t
                        .parse()
                        .map_err(|_| perr(line, format!("bad coordinate `{t}`")))?;
                }
                vertices.push(Point::new(c[0], c[1], c[2]));
            }
            Section::Tets(_) => {
                if nums.len() != 4 {
                    return Err(perr(line, "tet record needs 4 indices".into()));
                }
                let mut c = [0usize; 4];
                for (k, t) in nums.iter().enumerate() {
                    c[k] = t
                        .parse()
                        .map_err(|_| perr(line, format!("bad index `{t}`")))?;
                }
                tets.push(c);
            }
            Section::Tris(_) => {
                if nums.len() != 3 {
                    return Err(perr(line, "tri record needs 3 indices".into()));
                }
                let mut c = [0usize; 3];
                for (k, t) in nums.iter().enumerate() {
                    c[k] = t
                        .parse()
                        .map_err(|_| perr(line, format!("bad index `{t}`")))?;
                }
                tris.push(c);
            }
            Section::None => unreachable!(),
        }
        remaining -= 1;
    }
    if remaining != 0 {
        return Err(perr(
            text.lines().count(),
            format!("section ended early, {remaining} records missing"),
        ));
    }
    CoupledMesh::new(vertices, tets, tris)
}

pub fn write_mesh(mesh: &CoupledMesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("vertices {}\n", mesh.vertices.len()));
    for v in &mesh.vertices {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v.x, v.y, v.z));
    }
    out.push_str(&format!("tets {}\n", mesh.tets.len()));
    for t in &mesh.tets {
        out.push_str(&format!("{} {} {} {}\n", t[0], t[1], t[2], t[3]));
    }
    out.push_str(&format!("tris {}\n", mesh.boundary_tris.len()));
    for t in &mesh.boundary_tris {
        out.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn reference_tet_is_valid() {
        let m = reference_tet();
        assert_eq!(m.vertices.len(), 4);
        assert_eq!(m.tets.len(), 1);
        assert_eq!(m.boundary_tris.len(), 4);
        assert!((m.volume() - 1.0 / 6.0).abs() < 1e-15);
        // all normals outward relative to the centroid
        let c = m.centroid();
        for f in 0..4 {
            assert!(m.panel_normal(f).dot(&(m.panel_centroid(f) - c)) > 0.0);
        }
    }

    #[test]
    fn cube_euler_characteristic() {
        let m = cube_mesh(1).unwrap();
        assert_eq!(m.vertices.len(), 8);
        assert_eq!(m.tets.len(), 6);
        assert_eq!(m.boundary_tris.len(), 12);
        assert!((m.volume() - 1.0).abs() < 1e-14);
        // V - E + F = 2 on the boundary surface
        let mut edges = HashSet::new();
        for t in &m.boundary_tris {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((e.0.min(e.1), e.0.max(e.1)));
            }
        }
        let v = m.n_boundary_vertices() as i64;
        let e = edges.len() as i64;
        let f = m.boundary_tris.len() as i64;
        assert_eq!(v - e + f, 2);
    }

    #[test]
    fn cube_refinement_keeps_volume() {
        for n in [2, 3] {
            let m = cube_mesh(n).unwrap();
            assert!((m.volume() - 1.0).abs() < 1e-13);
            assert!((m.surface_area() - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverted_tet_is_named() {
        let text = "vertices 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\ntets 1\n0 2 1 3\ntris 4\n0 2 1\n0 1 3\n1 2 3\n0 3 2\n";
        match parse_mesh(text, "inline") {
            Err(Error::InvertedTet { cell }) => assert_eq!(cell, 0),
            other => panic!("expected orientation error, got {other:?}"),
        }
    }

    #[test]
    fn missing_face_reports_open_edge() {
        // drop one boundary face of the reference tet
        let text = "vertices 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\ntets 1\n0 1 2 3\ntris 3\n0 2 1\n0 1 3\n1 2 3\n";
        match parse_mesh(text, "inline") {
            Err(e) => {
                let msg = format!("{e}");
                assert!(
                    msg.contains("watertight") || msg.contains("faces"),
                    "unexpected error {msg}"
                );
            }
            Ok(_) => panic!("expected failure"),
        }
    }

    #[test]
    fn roundtrip_through_file() {
        let m = ball_mesh(0, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ball.mesh");
        write_mesh(&m, &path).unwrap();
        let back = load_mesh(&path).unwrap();
        assert_eq!(back.vertices.len(), m.vertices.len());
        assert_eq!(back.tets, m.tets);
        assert_eq!(back.boundary_tris, m.boundary_tris);
    }

    #[test]
    fn icosphere_ball_volume_approaches_sphere() {
        let m1 = ball_mesh(1, 2).unwrap();
        let m2 = ball_mesh(2, 4).unwrap();
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        let e1 = (m1.volume() - exact).abs();
        let e2 = (m2.volume() - exact).abs();
        assert!(e2 < e1, "refinement must reduce the volume defect");
        assert!(e2 / exact < 0.02);
    }

    #[test]
    fn annulus_inner_layer_matches_boundary() {
        let base = ball_mesh(1, 2).unwrap();
        let ann = annulus_mesh(&base, 2.0, 2).unwrap();
        for (k, &v) in base.boundary_vertices.iter().enumerate() {
            let p = base.vertices[v];
            let q = ann.mesh.vertices[ann.inner_vertex[k]];
            assert!((p - q).norm() < 1e-14);
        }
        // outer shell sits on the prescribed sphere
        let r_out = 2.0 * base.circumscribing_radius();
        let max_r = ann
            .mesh
            .vertices
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!((max_r - r_out).abs() < 1e-12);
    }

    #[test]
    fn point_membership() {
        let m = cube_mesh(2).unwrap();
        assert!(m.contains(&Point::new(0.5, 0.5, 0.5)));
        assert!(!m.contains(&Point::new(1.5, 0.5, 0.5)));
    }
}
