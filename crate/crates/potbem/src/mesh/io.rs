//! Mesh file readers and writers: Gmsh ASCII 2.2, OFF, ASCII STL.

use super::{Mesh, MeshError};
use nalgebra::Vector3;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// STL vertices closer than this (m) are merged.
pub const STL_WELD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    GmshAscii,
    Off,
    StlAscii,
}

impl MeshFormat {
    /// Guess from the file extension (.msh, .off, .stl).
    pub fn from_path(path: &Path) -> Option<MeshFormat> {
        match path.extension()?.to_str()? {
            "msh" => Some(MeshFormat::GmshAscii),
            "off" => Some(MeshFormat::Off),
            "stl" => Some(MeshFormat::StlAscii),
            _ => None,
        }
    }
}

fn perr(path: &Path, msg: impl Into<String>) -> MeshError {
    MeshError::Parse {
        file: path.display().to_string(),
        msg: msg.into(),
    }
}

/// Load and index a closed surface mesh in the declared format.
pub fn load_mesh(path: &Path, format: MeshFormat) -> Result<Mesh, MeshError> {
    let (vertices, triangles) = match format {
        MeshFormat::Off => read_off(path)?,
        MeshFormat::GmshAscii => read_gmsh22(path)?,
        MeshFormat::StlAscii => read_stl_ascii(path)?,
    };
    Mesh::build(vertices, triangles)
}

type RawMesh = (Vec<Vector3<f64>>, Vec<[usize; 3]>);

fn data_lines(path: &Path) -> Result<Vec<String>, MeshError> {
    let file = std::fs::File::open(path)?;
    Ok(BufReader::new(file)
        .lines()
        .map_while(Result::ok)
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn read_off(path: &Path) -> Result<RawMesh, MeshError> {
    let lines = data_lines(path)?;
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| perr(path, "empty file"))?;
    if header != "OFF" {
        return Err(perr(path, format!("expected OFF header, got '{header}'")));
    }
    let counts = it.next().ok_or_else(|| perr(path, "missing count line"))?;
    let mut c = counts.split_whitespace();
    let nv: usize = c
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(path, "bad vertex count"))?;
    let nf: usize = c
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(path, "bad face count"))?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = it.next().ok_or_else(|| perr(path, "truncated vertices"))?;
        let v: Vec<f64> = line
            .split_whitespace()
            .take(3)
            .map(|s| s.parse().unwrap_or(f64::NAN))
            .collect();
        if v.len() != 3 || v.iter().any(|x| x.is_nan()) {
            return Err(perr(path, format!("bad vertex line '{line}'")));
        }
        vertices.push(Vector3::new(v[0], v[1], v[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let line = it.next().ok_or_else(|| perr(path, "truncated faces"))?;
        let f: Vec<usize> = line
            .split_whitespace()
            .map(|s| s.parse().unwrap_or(usize::MAX))
            .collect();
        if f.is_empty() || f[0] != 3 || f.len() < 4 {
            return Err(perr(path, format!("only triangle faces supported: '{line}'")));
        }
        let t = [f[1], f[2], f[3]];
        if t.iter().any(|&i| i >= nv) {
            return Err(perr(path, format!("vertex index out of range: '{line}'")));
        }
        triangles.push(t);
    }
    Ok((vertices, triangles))
}

fn read_gmsh22(path: &Path) -> Result<RawMesh, MeshError> {
    let lines = data_lines(path)?;
    let mut it = lines.iter().peekable();
    let mut id_map = std::collections::HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    while let Some(line) = it.next() {
        match line.as_str() {
            "$MeshFormat" => {
                let fmt = it.next().ok_or_else(|| perr(path, "truncated $MeshFormat"))?;
                let ver = fmt.split_whitespace().next().unwrap_or("");
                if !ver.starts_with("2.") {
                    return Err(perr(path, format!("unsupported Gmsh version {ver}, need 2.x ASCII")));
                }
            }
            "$Nodes" => {
                let n: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| perr(path, "bad node count"))?;
                for _ in 0..n {
                    let l = it.next().ok_or_else(|| perr(path, "truncated nodes"))?;
                    let f: Vec<&str> = l.split_whitespace().collect();
                    if f.len() < 4 {
                        return Err(perr(path, format!("bad node line '{l}'")));
                    }
                    let id: usize = f[0].parse().map_err(|_| perr(path, "bad node id"))?;
                    let xyz: Vec<f64> = f[1..4]
                        .iter()
                        .map(|s| s.parse().unwrap_or(f64::NAN))
                        .collect();
                    if xyz.iter().any(|x| x.is_nan()) {
                        return Err(perr(path, format!("bad node coords '{l}'")));
                    }
                    id_map.insert(id, vertices.len());
                    vertices.push(Vector3::new(xyz[0], xyz[1], xyz[2]));
                }
            }
            "$Elements" => {
                let n: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| perr(path, "bad element count"))?;
                for _ in 0..n {
                    let l = it.next().ok_or_else(|| perr(path, "truncated elements"))?;
                    let f: Vec<usize> = l
                        .split_whitespace()
                        .map(|s| s.parse().unwrap_or(usize::MAX))
                        .collect();
                    if f.len() < 3 || f.contains(&usize::MAX) {
                        return Err(perr(path, format!("bad element line '{l}'")));
                    }
                    // id, type, ntags, tags..., nodes...
                    let ty = f[1];
                    if ty != 2 {
                        continue; // only 3-node triangles
                    }
                    let ntags = f[2];
                    let nodes = &f[3 + ntags..];
                    if nodes.len() != 3 {
                        return Err(perr(path, format!("triangle with {} nodes", nodes.len())));
                    }
                    let mut t = [0usize; 3];
                    for (k, id) in nodes.iter().enumerate() {
                        t[k] = *id_map
                            .get(id)
                            .ok_or_else(|| perr(path, format!("unknown node id {id}")))?;
                    }
                    triangles.push(t);
                }
            }
            _ => {} // skip other sections ($EndNodes, $PhysicalNames, ...)
        }
    }
    if triangles.is_empty() {
        return Err(perr(path, "no triangles found"));
    }
    Ok((vertices, triangles))
}

fn read_stl_ascii(path: &Path) -> Result<RawMesh, MeshError> {
    let file = std::fs::File::open(path)?;
    let mut raw: Vec<Vector3<f64>> = Vec::new();
    for line in BufReader::new(file).lines().map_while(Result::ok) {
        let l = line.trim();
        if let Some(rest) = l.strip_prefix("vertex") {
            let v: Vec<f64> = rest
                .split_whitespace()
                .map(|s| s.parse().unwrap_or(f64::NAN))
                .collect();
            if v.len() != 3 || v.iter().any(|x| x.is_nan()) {
                return Err(perr(path, format!("bad vertex line '{l}'")));
            }
            raw.push(Vector3::new(v[0], v[1], v[2]));
        } else if l.starts_with("solid")
            || l.starts_with("facet")
            || l.starts_with("outer")
            || l.starts_with("endloop")
            || l.starts_with("endfacet")
            || l.starts_with("endsolid")
            || l.is_empty()
        {
            continue;
        } else {
            return Err(perr(path, format!("unexpected line '{l}'")));
        }
    }
    if raw.len() % 3 != 0 || raw.is_empty() {
        return Err(perr(path, format!("{} vertices is not a facet multiple of 3", raw.len())));
    }
    // Weld vertices within STL_WELD_TOL using a quantized grid with neighbor probing.
    let inv = 1.0 / STL_WELD_TOL;
    let key_of = |p: &Vector3<f64>| {
        (
            (p.x * inv).round() as i64,
            (p.y * inv).round() as i64,
            (p.z * inv).round() as i64,
        )
    };
    let mut grid: std::collections::HashMap<(i64, i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    let mut vertices: Vec<Vector3<f64>> = Vec::new();
    let mut index = Vec::with_capacity(raw.len());
    for p in &raw {
        let (kx, ky, kz) = key_of(p);
        let mut found = None;
        'probe: for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                for dz in -1..=1i64 {
                    if let Some(cands) = grid.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &ci in cands {
                            if (vertices[ci] - p).norm() <= STL_WELD_TOL {
                                found = Some(ci);
                                break 'probe;
                            }
                        }
                    }
                }
            }
        }
        let idx = match found {
            Some(ci) => ci,
            None => {
                vertices.push(*p);
                grid.entry((kx, ky, kz)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            }
        };
        index.push(idx);
    }
    let triangles = index
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Ok((vertices, triangles))
}

pub fn write_off(mesh: &Mesh, path: &Path) -> Result<(), MeshError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "OFF")?;
    writeln!(f, "{} {} {}", mesh.vertices.len(), mesh.n_triangles(), mesh.n_edges())?;
    for v in &mesh.vertices {
        writeln!(f, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(f, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

pub fn write_gmsh22(mesh: &Mesh, path: &Path) -> Result<(), MeshError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "$MeshFormat\n2.2 0 8\n$EndMeshFormat")?;
    writeln!(f, "$Nodes\n{}", mesh.vertices.len())?;
    for (i, v) in mesh.vertices.iter().enumerate() {
        writeln!(f, "{} {:.17e} {:.17e} {:.17e}", i + 1, v.x, v.y, v.z)?;
    }
    writeln!(f, "$EndNodes\n$Elements\n{}", mesh.n_triangles())?;
    for (i, t) in mesh.triangles.iter().enumerate() {
        // elementary + physical tag = object id
        let obj = mesh.object_id[i];
        writeln!(f, "{} 2 2 {obj} {obj} {} {} {}", i + 1, t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    writeln!(f, "$EndElements")?;
    Ok(())
}

pub fn write_stl_ascii(mesh: &Mesh, path: &Path) -> Result<(), MeshError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "solid mesh")?;
    for (i, t) in mesh.triangles.iter().enumerate() {
        let n = mesh.normals[i];
        writeln!(f, "  facet normal {:.9e} {:.9e} {:.9e}", n.x, n.y, n.z)?;
        writeln!(f, "    outer loop")?;
        for &vi in t {
            let v = mesh.vertices[vi];
            writeln!(f, "      vertex {:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
        }
        writeln!(f, "    endloop")?;
        writeln!(f, "  endfacet")?;
    }
    writeln!(f, "endsolid mesh")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::icosphere;

    #[test]
    fn roundtrip_all_formats() {
        let m = icosphere(1);
        let dir = tempfile::tempdir().unwrap();
        for (fmt, name) in [
            (MeshFormat::Off, "m.off"),
            (MeshFormat::GmshAscii, "m.msh"),
            (MeshFormat::StlAscii, "m.stl"),
        ] {
            let p = dir.path().join(name);
            match fmt {
                MeshFormat::Off => write_off(&m, &p).unwrap(),
                MeshFormat::GmshAscii => write_gmsh22(&m, &p).unwrap(),
                MeshFormat::StlAscii => write_stl_ascii(&m, &p).unwrap(),
            }
            assert_eq!(MeshFormat::from_path(&p), Some(fmt));
            let l = load_mesh(&p, fmt).unwrap();
            assert_eq!(l.n_triangles(), m.n_triangles());
            assert_eq!(l.n_edges(), m.n_edges());
            assert_eq!(l.vertices.len(), m.vertices.len());
            assert!((l.object_area(1) - m.object_area(1)).abs() < 1e-9);
        }
    }

    #[test]
    fn parse_error_on_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.off");
        std::fs::write(&p, "NOT_OFF\n1 2 3\n").unwrap();
        match load_mesh(&p, MeshFormat::Off) {
            Err(MeshError::Parse { .. }) => {}
            other => panic!("expected Parse, got {other:?}"),
        }
    }
}
