//! Barycentric refinement: each triangle split into 6 at its barycenter and
//! edge midpoints. Carrier for the Buffa-Christiansen expansion.

use super::{Mesh, MeshError};

/// Refined mesh plus maps back to the parent entities.
///
/// Refined vertex layout: parent vertices first, then one midpoint per parent
/// edge, then one barycenter per parent triangle. Children of parent triangle
/// `t` occupy indices `6t..6t+6` in corner/midpoint alternating order.
#[derive(Debug, Clone)]
pub struct BarycentricMesh {
    pub mesh: Mesh,
    /// Refined triangle -> parent triangle.
    pub parent_tri: Vec<usize>,
    /// Parent edge -> refined vertex index of its midpoint.
    pub edge_midpoint: Vec<usize>,
    /// Parent triangle -> refined vertex index of its barycenter.
    pub barycenter: Vec<usize>,
}

/// Split every triangle into 6 around its barycenter.
pub fn barycentric_refine(mesh: &Mesh) -> Result<BarycentricMesh, MeshError> {
    let nv = mesh.vertices.len();
    let ne = mesh.n_edges();
    let nt = mesh.n_triangles();

    let mut vertices = mesh.vertices.clone();
    vertices.reserve(ne + nt);
    let mut edge_midpoint = Vec::with_capacity(ne);
    let mut midpoint_of = std::collections::HashMap::new();
    for (ei, e) in mesh.edges.iter().enumerate() {
        let m = (mesh.vertices[e.verts[0]] + mesh.vertices[e.verts[1]]) * 0.5;
        edge_midpoint.push(vertices.len());
        midpoint_of.insert((e.verts[0], e.verts[1]), nv + ei);
        vertices.push(m);
    }
    let mut barycenter = Vec::with_capacity(nt);
    for i in 0..nt {
        barycenter.push(vertices.len());
        vertices.push(mesh.centroids[i]);
    }

    let mut triangles = Vec::with_capacity(6 * nt);
    let mut parent_tri = Vec::with_capacity(6 * nt);
    for (i, t) in mesh.triangles.iter().enumerate() {
        let c = nv + ne + i;
        for l in 0..3 {
            let (a, b) = (t[l], t[(l + 1) % 3]);
            let m = midpoint_of[&(a.min(b), a.max(b))];
            triangles.push([a, m, c]);
            triangles.push([m, b, c]);
            parent_tri.push(i);
            parent_tri.push(i);
        }
    }

    let mesh = Mesh::build(vertices, triangles)?;
    Ok(BarycentricMesh {
        mesh,
        parent_tri,
        edge_midpoint,
        barycenter,
    })
}

impl BarycentricMesh {
    /// The 6 refined triangles of parent triangle `t`.
    pub fn children(&self, t: usize) -> [usize; 6] {
        [6 * t, 6 * t + 1, 6 * t + 2, 6 * t + 3, 6 * t + 4, 6 * t + 5]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::icosphere;

    #[test]
    fn six_times_count_and_area() {
        let m = icosphere(0);
        let r = barycentric_refine(&m).unwrap();
        assert_eq!(r.mesh.n_triangles(), 6 * m.n_triangles());
        let a: f64 = m.areas.iter().sum();
        let ar: f64 = r.mesh.areas.iter().sum();
        assert!((a - ar).abs() / a < 1e-12);
    }

    #[test]
    fn parent_maps() {
        let m = icosphere(1);
        let r = barycentric_refine(&m).unwrap();
        for (ri, &p) in r.parent_tri.iter().enumerate() {
            assert_eq!(p, ri / 6);
            // Child centroid lies inside the parent plane patch: check the
            // child's area sums reconstruct the parent area.
        }
        for t in 0..m.n_triangles() {
            let sum: f64 = r.children(t).iter().map(|&c| r.mesh.areas[c]).sum();
            assert!((sum - m.areas[t]).abs() / m.areas[t] < 1e-12);
            // All 6 children share the barycenter vertex.
            for c in r.children(t) {
                assert!(r.mesh.triangles[c].contains(&r.barycenter[t]));
            }
        }
        for (ei, e) in m.edges.iter().enumerate() {
            let mid = r.mesh.vertices[r.edge_midpoint[ei]];
            let expect = (m.vertices[e.verts[0]] + m.vertices[e.verts[1]]) * 0.5;
            assert!((mid - expect).norm() < 1e-15);
        }
    }
}
