//! Procedural test geometries: icosphere, rectangular bar, closed cylinder.
//! Used by the validation suites and tests; all deterministic.

use super::Mesh;
use nalgebra::Vector3;

/// Unit sphere from `subdiv` 4-way subdivisions of the icosahedron,
/// vertices projected to radius 1. Triangle count is 20·4^subdiv.
pub fn icosphere(subdiv: u32) -> Mesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|v| Vector3::new(v[0], v[1], v[2]).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
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
        [9, 8, 3],
    ];
    for _ in 0..subdiv {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for t in &tris {
            let mut m = [0usize; 3];
            for l in 0..3 {
                let (a, b) = (t[l], t[(l + 1) % 3]);
                let key = (a.min(b), a.max(b));
                m[l] = *mid.entry(key).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                    verts.len() - 1
                });
            }
            next.push([t[0], m[0], m[2]]);
            next.push([m[0], t[1], m[1]]);
            next.push([m[2], m[1], t[2]]);
            next.push([m[0], m[1], m[2]]);
        }
        tris = next;
    }
    Mesh::build(verts, tris).expect("icosphere is closed and manifold")
}

/// Axis-aligned box (bar) of size `lx × ly × lz` centered at `center`,
/// surface gridded with `nx × ny × nz` cells per direction.
pub fn bar(lx: f64, ly: f64, lz: f64, nx: usize, ny: usize, nz: usize, center: Vector3<f64>) -> Mesh {
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    let mut index = std::collections::HashMap::new();
    let (nx, ny, nz) = (nx.max(1), ny.max(1), nz.max(1));
    // Grid vertices on the box surface only, keyed by integer lattice coords.
    let mut vid = |i: usize, j: usize, k: usize, verts: &mut Vec<Vector3<f64>>| -> usize {
        *index.entry((i, j, k)).or_insert_with(|| {
            let p = Vector3::new(
                -0.5 * lx + lx * i as f64 / nx as f64,
                -0.5 * ly + ly * j as f64 / ny as f64,
                -0.5 * lz + lz * k as f64 / nz as f64,
            ) + center;
            verts.push(p);
            verts.len() - 1
        })
    };
    // Each face as a structured quad grid split into two triangles, wound so
    // that normals point outward.
    let mut quad = |a: usize, b: usize, c: usize, d: usize, tris: &mut Vec<[usize; 3]>| {
        tris.push([a, b, c]);
        tris.push([a, c, d]);
    };
    for j in 0..ny {
        for k in 0..nz {
            // x = -lx/2 face (normal -x): CCW seen from -x
            let v = [
                vid(0, j, k, &mut verts),
                vid(0, j, k + 1, &mut verts),
                vid(0, j + 1, k + 1, &mut verts),
                vid(0, j + 1, k, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
            // x = +lx/2 face (normal +x)
            let v = [
                vid(nx, j, k, &mut verts),
                vid(nx, j + 1, k, &mut verts),
                vid(nx, j + 1, k + 1, &mut verts),
                vid(nx, j, k + 1, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
        }
    }
    for i in 0..nx {
        for k in 0..nz {
            // y = -ly/2 face (normal -y)
            let v = [
                vid(i, 0, k, &mut verts),
                vid(i + 1, 0, k, &mut verts),
                vid(i + 1, 0, k + 1, &mut verts),
                vid(i, 0, k + 1, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
            // y = +ly/2 face (normal +y)
            let v = [
                vid(i, ny, k, &mut verts),
                vid(i, ny, k + 1, &mut verts),
                vid(i + 1, ny, k + 1, &mut verts),
                vid(i + 1, ny, k, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            // z = -lz/2 face (normal -z)
            let v = [
                vid(i, j, 0, &mut verts),
                vid(i, j + 1, 0, &mut verts),
                vid(i + 1, j + 1, 0, &mut verts),
                vid(i + 1, j, 0, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
            // z = +lz/2 face (normal +z)
            let v = [
                vid(i, j, nz, &mut verts),
                vid(i + 1, j, nz, &mut verts),
                vid(i + 1, j + 1, nz, &mut verts),
                vid(i, j + 1, nz, &mut verts),
            ];
            quad(v[0], v[1], v[2], v[3], &mut tris);
        }
    }
    Mesh::build(verts, tris).expect("bar surface is closed and manifold")
}

/// Closed circular cylinder along z: radius `r`, length `l`, centered at
/// `center`, `n_theta` azimuthal and `n_z` axial divisions, end caps as fans
/// around a center vertex.
pub fn cylinder(r: f64, l: f64, n_theta: usize, n_z: usize, center: Vector3<f64>) -> Mesh {
    let n_theta = n_theta.max(3);
    let n_z = n_z.max(1);
    let mut verts = Vec::new();
    let ring = |iz: usize| -> Vec<Vector3<f64>> {
        let z = -0.5 * l + l * iz as f64 / n_z as f64;
        (0..n_theta)
            .map(|it| {
                let th = 2.0 * std::f64::consts::PI * it as f64 / n_theta as f64;
                Vector3::new(r * th.cos(), r * th.sin(), z) + center
            })
            .collect()
    };
    for iz in 0..=n_z {
        verts.extend(ring(iz));
    }
    let bottom_c = verts.len();
    verts.push(Vector3::new(0.0, 0.0, -0.5 * l) + center);
    let top_c = verts.len();
    verts.push(Vector3::new(0.0, 0.0, 0.5 * l) + center);

    let mut tris = Vec::new();
    let idx = |iz: usize, it: usize| iz * n_theta + (it % n_theta);
    for iz in 0..n_z {
        for it in 0..n_theta {
            let (a, b, c, d) = (idx(iz, it), idx(iz, it + 1), idx(iz + 1, it + 1), idx(iz + 1, it));
            // Outward normal (radial): CCW seen from outside.
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    for it in 0..n_theta {
        // Bottom cap, normal -z.
        tris.push([bottom_c, idx(0, it + 1), idx(0, it)]);
        // Top cap, normal +z.
        tris.push([top_c, idx(n_z, it), idx(n_z, it + 1)]);
    }
    Mesh::build(verts, tris).expect("cylinder surface is closed and manifold")
}

/// Rigid translation.
pub fn translate(mesh: &Mesh, d: Vector3<f64>) -> Mesh {
    let verts = mesh.vertices.iter().map(|v| v + d).collect();
    Mesh::build(verts, mesh.triangles.clone()).expect("translation preserves validity")
}

/// Concatenate meshes into one multi-object mesh; connected-component
/// labeling in `Mesh::build` assigns the object ids.
pub fn merge(meshes: &[Mesh]) -> Mesh {
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    for m in meshes {
        let off = verts.len();
        verts.extend(m.vertices.iter().copied());
        tris.extend(m.triangles.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
    }
    Mesh::build(verts, tris).expect("merge of valid meshes is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_counts_match_subdivision() {
        assert_eq!(icosphere(2).n_triangles(), 320);
        assert_eq!(icosphere(3).n_triangles(), 1280);
        assert_eq!(icosphere(3).vertices.len(), 642);
    }

    #[test]
    fn bar_is_closed_with_correct_volume() {
        let m = bar(1e-3, 20e-6, 20e-6, 50, 2, 2, Vector3::zeros());
        assert_eq!(m.n_objects, 1);
        let v = m.object_volume(1);
        assert!((v - 1e-3 * 20e-6 * 20e-6).abs() / v.abs() < 1e-12);
    }

    #[test]
    fn cylinder_volume_converges() {
        let r = 0.5e-3;
        let l = 10e-3;
        let m = cylinder(r, l, 24, 16, Vector3::zeros());
        let v = m.object_volume(1);
        let exact = std::f64::consts::PI * r * r * l;
        // Inscribed polygon cross-section: sin(x)/x area deficit.
        assert!((v - exact).abs() / exact < 0.03);
        assert!(v < exact);
    }
}
