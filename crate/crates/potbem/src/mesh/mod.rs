//! Closed triangulated surfaces: loading, connectivity, orientation,
//! barycentric refinement and terminal tagging.

mod gen;
mod io;
mod refine;

pub use gen::{bar, cylinder, icosphere, merge, translate};
pub use io::{load_mesh, write_gmsh22, write_off, write_stl_ascii, MeshFormat};
pub use refine::BarycentricMesh;

use nalgebra::Vector3;
use thiserror::Error;

/// Triangles with area below this (m²) are rejected.
pub const DEGENERATE_AREA: f64 = 1e-18;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("edge ({0}, {1}) is shared by {2} triangles, expected 2")]
    NonManifoldEdge(usize, usize, usize),
    #[error("surface is open: edge ({0}, {1}) has only one adjacent triangle")]
    OpenSurface(usize, usize),
    #[error("triangle {0} is degenerate (area {1:.3e} m²)")]
    DegenerateTriangle(usize, f64),
    #[error("orientation conflict at triangles {0} and {1} (non-orientable input)")]
    InconsistentOrientation(usize, usize),
    #[error("parse error in {file}: {msg}")]
    Parse { file: String, msg: String },
    #[error("terminal point {0} maps to the same triangle as terminal {1}")]
    AmbiguousTerminal(usize, usize),
    #[error("no triangle centroid within 2ξ of terminal point ({0:.4e}, {1:.4e}, {2:.4e})")]
    NoNearbyTriangle(f64, f64, f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// An interior mesh edge with its two adjacent triangles.
///
/// `verts` is stored with the lower vertex index first. `tri_plus` is the
/// triangle that traverses the edge as `verts[0] -> verts[1]` in its
/// counter-clockwise order; `tri_minus` traverses it the other way. The RWG
/// sign convention and the incidence matrix D both key off this.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub verts: [usize; 2],
    pub tri_plus: usize,
    pub tri_minus: usize,
}

/// A closed, consistently outward-oriented triangulated surface.
///
/// Triangles are counter-clockwise seen from outside. `object_id` labels
/// connected components 1..=n_objects. All quantities in meters.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<Edge>,
    /// Edge indices of each triangle (opposite local vertex 0, 1, 2 order not
    /// guaranteed; query via `edges`).
    pub tri_edges: Vec<[usize; 3]>,
    pub object_id: Vec<usize>,
    pub n_objects: usize,
    pub areas: Vec<f64>,
    pub normals: Vec<Vector3<f64>>,
    pub centroids: Vec<Vector3<f64>>,
    /// Average mesh edge length ξ (m).
    pub avg_edge_length: f64,
    /// Diagonal of the axis-aligned bounding box of all objects (m).
    pub diameter: f64,
}

/// One port terminal pinned to a single mesh triangle.
#[derive(Debug, Clone, Copy)]
pub struct TerminalTag {
    pub terminal_id: usize,
    pub triangle: usize,
    pub area: f64,
    pub port: usize,
    /// 1 or 2 within the owning port.
    pub polarity: u8,
}

fn tri_geometry(v: &[Vector3<f64>; 3]) -> (f64, Vector3<f64>, Vector3<f64>) {
    let cross = (v[1] - v[0]).cross(&(v[2] - v[0]));
    let a2 = cross.norm();
    let area = 0.5 * a2;
    let normal = if a2 > 0.0 { cross / a2 } else { Vector3::zeros() };
    let centroid = (v[0] + v[1] + v[2]) / 3.0;
    (area, normal, centroid)
}

impl Mesh {
    /// Build full connectivity from raw vertices and triangles.
    ///
    /// Orientation is made consistent per connected component and flipped to
    /// outward (positive signed volume). Fails on open or non-manifold input
    /// and on degenerate triangles.
    pub fn build(
        vertices: Vec<Vector3<f64>>,
        mut triangles: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        let nt = triangles.len();
        for (i, t) in triangles.iter().enumerate() {
            let v = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
            let (area, _, _) = tri_geometry(&v);
            if area < DEGENERATE_AREA {
                return Err(MeshError::DegenerateTriangle(i, area));
            }
        }

        // Undirected edge map: sorted vertex pair -> adjacent triangles.
        let mut edge_map: std::collections::HashMap<(usize, usize), Vec<usize>> =
            std::collections::HashMap::new();
        for (i, t) in triangles.iter().enumerate() {
            for l in 0..3 {
                let (a, b) = (t[l], t[(l + 1) % 3]);
                let key = (a.min(b), a.max(b));
                edge_map.entry(key).or_default().push(i);
            }
        }
        for (&(a, b), tris) in &edge_map {
            match tris.len() {
                2 => {}
                1 => return Err(MeshError::OpenSurface(a, b)),
                n => return Err(MeshError::NonManifoldEdge(a, b, n)),
            }
        }

        // Consistent orientation per component: adjacent triangles must
        // traverse their shared edge in opposite directions.
        let neighbor = |t: &[usize; 3], map: &std::collections::HashMap<(usize, usize), Vec<usize>>, i: usize| {
            let mut out = [usize::MAX; 3];
            for l in 0..3 {
                let (a, b) = (t[l], t[(l + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let adj = &map[&key];
                out[l] = if adj[0] == i { adj[1] } else { adj[0] };
            }
            out
        };
        let mut comp = vec![usize::MAX; nt];
        let mut n_objects = 0usize;
        let mut visited = vec![false; nt];
        for seed in 0..nt {
            if visited[seed] {
                continue;
            }
            n_objects += 1;
            let id = n_objects;
            let mut stack = vec![seed];
            visited[seed] = true;
            comp[seed] = id;
            while let Some(i) = stack.pop() {
                let t = triangles[i];
                let nbrs = neighbor(&t, &edge_map, i);
                for l in 0..3 {
                    let j = nbrs[l];
                    let (a, b) = (t[l], t[(l + 1) % 3]);
                    // Does j traverse a->b as well? Then it must be flipped.
                    let tj = triangles[j];
                    let same_dir = (0..3).any(|m| tj[m] == a && tj[(m + 1) % 3] == b);
                    if !visited[j] {
                        if same_dir {
                            triangles[j].swap(1, 2);
                        }
                        visited[j] = true;
                        comp[j] = id;
                        stack.push(j);
                    } else if same_dir {
                        return Err(MeshError::InconsistentOrientation(i, j));
                    }
                }
            }
        }

        // Outward orientation: signed volume of each component must be positive.
        let mut vol = vec![0.0f64; n_objects + 1];
        for (i, t) in triangles.iter().enumerate() {
            let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            vol[comp[i]] += a.cross(&b).dot(&c) / 6.0;
        }
        for (i, t) in triangles.iter_mut().enumerate() {
            if vol[comp[i]] < 0.0 {
                t.swap(1, 2);
            }
        }

        // Edges with T+/T- designation: T+ traverses verts[0] -> verts[1].
        let mut edges = Vec::with_capacity(edge_map.len());
        let mut keys: Vec<(usize, usize)> = edge_map.keys().copied().collect();
        keys.sort_unstable();
        let mut edge_index = std::collections::HashMap::new();
        for key in keys {
            let adj = &edge_map[&key];
            let (a, b) = key;
            let traverses = |ti: usize| {
                let t = triangles[ti];
                (0..3).any(|m| t[m] == a && t[(m + 1) % 3] == b)
            };
            let (tp, tm) = if traverses(adj[0]) {
                (adj[0], adj[1])
            } else {
                (adj[1], adj[0])
            };
            debug_assert!(!traverses(tm));
            edge_index.insert(key, edges.len());
            edges.push(Edge {
                verts: [a, b],
                tri_plus: tp,
                tri_minus: tm,
            });
        }
        let mut tri_edges = vec![[usize::MAX; 3]; nt];
        for (i, t) in triangles.iter().enumerate() {
            for l in 0..3 {
                let (a, b) = (t[l], t[(l + 1) % 3]);
                tri_edges[i][l] = edge_index[&(a.min(b), a.max(b))];
            }
        }

        let mut areas = Vec::with_capacity(nt);
        let mut normals = Vec::with_capacity(nt);
        let mut centroids = Vec::with_capacity(nt);
        for t in &triangles {
            let v = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
            let (area, normal, centroid) = tri_geometry(&v);
            areas.push(area);
            normals.push(normal);
            centroids.push(centroid);
        }

        let avg_edge_length = edges
            .iter()
            .map(|e| (vertices[e.verts[1]] - vertices[e.verts[0]]).norm())
            .sum::<f64>()
            / edges.len() as f64;

        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for v in &vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        let diameter = (hi - lo).norm();

        Ok(Mesh {
            vertices,
            triangles,
            edges,
            tri_edges,
            object_id: comp,
            n_objects,
            areas,
            normals,
            centroids,
            avg_edge_length,
            diameter,
        })
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn tri_vertices(&self, i: usize) -> [Vector3<f64>; 3] {
        let t = self.triangles[i];
        [
            self.vertices[t[0]],
            self.vertices[t[1]],
            self.vertices[t[2]],
        ]
    }

    /// Triangles of object `id` (1-based), ascending.
    pub fn object_triangles(&self, id: usize) -> Vec<usize> {
        (0..self.n_triangles())
            .filter(|&i| self.object_id[i] == id)
            .collect()
    }

    /// Total surface area of object `id` (1-based).
    pub fn object_area(&self, id: usize) -> f64 {
        (0..self.n_triangles())
            .filter(|&i| self.object_id[i] == id)
            .map(|i| self.areas[i])
            .sum()
    }

    /// Signed volume enclosed by object `id`; positive for outward orientation.
    pub fn object_volume(&self, id: usize) -> f64 {
        let mut vol = 0.0;
        for (i, t) in self.triangles.iter().enumerate() {
            if self.object_id[i] == id {
                let (a, b, c) = (
                    self.vertices[t[0]],
                    self.vertices[t[1]],
                    self.vertices[t[2]],
                );
                vol += a.cross(&b).dot(&c) / 6.0;
            }
        }
        vol
    }
}

/// Pin each requested `(point, port, polarity)` to its nearest triangle
/// centroid. Points farther than 2ξ from every centroid and collisions on
/// one triangle are rejected.
pub fn tag_terminals(
    mesh: &Mesh,
    spec: &[(Vector3<f64>, usize, u8)],
) -> Result<Vec<TerminalTag>, MeshError> {
    let mut tags: Vec<TerminalTag> = Vec::with_capacity(spec.len());
    for (id, &(p, port, polarity)) in spec.iter().enumerate() {
        let (mut best, mut best_d2) = (usize::MAX, f64::INFINITY);
        for (i, c) in mesh.centroids.iter().enumerate() {
            let d2 = (c - p).norm_squared();
            if d2 < best_d2 {
                best = i;
                best_d2 = d2;
            }
        }
        let limit = 2.0 * mesh.avg_edge_length;
        if best == usize::MAX || best_d2.sqrt() > limit {
            return Err(MeshError::NoNearbyTriangle(p.x, p.y, p.z));
        }
        if let Some(prev) = tags.iter().find(|t| t.triangle == best) {
            return Err(MeshError::AmbiguousTerminal(id, prev.terminal_id));
        }
        tags.push(TerminalTag {
            terminal_id: id,
            triangle: best,
            area: mesh.areas[best],
            port,
            polarity,
        });
    }
    Ok(tags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = icosphere(0);
        assert_eq!(m.vertices.len(), 12);
        assert_eq!(m.n_triangles(), 20);
        assert_eq!(m.n_edges(), 30);
        assert_eq!(m.n_objects, 1);
    }

    #[test]
    fn outward_orientation_positive_volume() {
        let m = icosphere(1);
        assert!(m.object_volume(1) > 0.0);
        // Flip every triangle; build() must repair back to outward.
        let tris: Vec<[usize; 3]> = m.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect();
        let m2 = Mesh::build(m.vertices.clone(), tris).unwrap();
        assert!(m2.object_volume(1) > 0.0);
    }

    #[test]
    fn edge_incidence_involutive() {
        let m = icosphere(1);
        for (ei, e) in m.edges.iter().enumerate() {
            let count_p = m.tri_edges[e.tri_plus].iter().filter(|&&x| x == ei).count();
            let count_m = m.tri_edges[e.tri_minus].iter().filter(|&&x| x == ei).count();
            assert_eq!(count_p, 1);
            assert_eq!(count_m, 1);
            // T+ traverses verts[0] -> verts[1], T- the reverse.
            let t = m.triangles[e.tri_plus];
            assert!((0..3).any(|l| t[l] == e.verts[0] && t[(l + 1) % 3] == e.verts[1]));
            let t = m.triangles[e.tri_minus];
            assert!((0..3).any(|l| t[l] == e.verts[1] && t[(l + 1) % 3] == e.verts[0]));
        }
    }

    #[test]
    fn xi_is_mean_edge_length() {
        let m = icosphere(1);
        let mean = m
            .edges
            .iter()
            .map(|e| (m.vertices[e.verts[1]] - m.vertices[e.verts[0]]).norm())
            .sum::<f64>()
            / m.n_edges() as f64;
        assert!((m.avg_edge_length - mean).abs() < 1e-15);
    }

    #[test]
    fn open_surface_rejected() {
        let m = icosphere(0);
        let tris = m.triangles[..19].to_vec();
        match Mesh::build(m.vertices.clone(), tris) {
            Err(MeshError::OpenSurface(_, _)) => {}
            other => panic!("expected OpenSurface, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let verts = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(2.0, 0.0, 0.0),
        ];
        match Mesh::build(verts, vec![[0, 1, 2]]) {
            Err(MeshError::DegenerateTriangle(0, _)) => {}
            other => panic!("expected DegenerateTriangle, got {other:?}"),
        }
    }

    #[test]
    fn two_objects_labeled() {
        let a = icosphere(0);
        let b = translate(&icosphere(0), Vector3::new(5.0, 0.0, 0.0));
        let m = merge(&[a, b]);
        assert_eq!(m.n_objects, 2);
        assert_eq!(m.n_triangles(), 40);
        assert!(m.object_id.iter().filter(|&&c| c == 1).count() == 20);
    }

    #[test]
    fn terminal_tagging() {
        let m = bar(1.0, 0.2, 0.2, 10, 2, 2, Vector3::zeros());
        // End-face centers of the bar along x.
        let spec = [
            (Vector3::new(-0.5, 0.0, 0.0), 0usize, 1u8),
            (Vector3::new(0.5, 0.0, 0.0), 0usize, 2u8),
        ];
        let tags = tag_terminals(&m, &spec).unwrap();
        assert_eq!(tags.len(), 2);
        assert_ne!(tags[0].triangle, tags[1].triangle);
        // Tagged triangles lie on the end faces.
        assert!(m.centroids[tags[0].triangle].x < -0.49);
        assert!(m.centroids[tags[1].triangle].x > 0.49);

        let dup = [
            (Vector3::new(-0.5, 0.0, 0.0), 0usize, 1u8),
            (Vector3::new(-0.5, 0.001, 0.0), 0usize, 2u8),
        ];
        match tag_terminals(&m, &dup) {
            Err(MeshError::AmbiguousTerminal(_, _)) => {}
            other => panic!("expected AmbiguousTerminal, got {other:?}"),
        }

        match tag_terminals(&m, &[(Vector3::new(9.0, 9.0, 9.0), 0, 1)]) {
            Err(MeshError::NoNearbyTriangle(_, _, _)) => {}
            other => panic!("expected NoNearbyTriangle, got {other:?}"),
        }
    }
}
