//! Display geometry: polylines and tube meshes in OBJ and ASCII PLY.
//! Never used by any measurement.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::curve::SampledCurve;
use crate::geom::Vec3;

pub const TUBE_SIDES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    /// Polyline edges (vertex index pairs).
    pub edges: Vec<[usize; 2]>,
    /// Quad faces.
    pub faces: Vec<[usize; 4]>,
}

pub fn polyline(curve: &SampledCurve) -> Mesh {
    let m = curve.len();
    let segments = if curve.is_closed() { m } else { m - 1 };
    Mesh {
        vertices: curve.vecs(),
        edges: (0..segments).map(|i| [i, (i + 1) % m]).collect(),
        faces: Vec::new(),
    }
}

/// Tube of Euclidean `radius` around the samples. Cross-sections lie in the
/// plane spanned by the surface normal and the in-surface binormal, which
/// keeps consecutive rings aligned on a sphere.
pub fn tube(curve: &SampledCurve, radius: f64, sides: usize) -> Mesh {
    let m = curve.len();
    let tangents = curve.tangents();
    let mut vertices = Vec::with_capacity(m * sides);
    for (p, t) in curve.points().iter().zip(&tangents) {
        let n = *p.vec();
        let b = t.cross(&n);
        for s in 0..sides {
            let (sa, ca) = (2.0 * PI * s as f64 / sides as f64).sin_cos();
            vertices.push(n + (n * ca + b * sa) * radius);
        }
    }
    let rings = if curve.is_closed() { m } else { m - 1 };
    let mut faces = Vec::with_capacity(rings * sides);
    for i in 0..rings {
        let j = (i + 1) % m;
        for s in 0..sides {
            let s1 = (s + 1) % sides;
            faces.push([i * sides + s, i * sides + s1, j * sides + s1, j * sides + s]);
        }
    }
    Mesh {
        vertices,
        edges: Vec::new(),
        faces,
    }
}

pub fn to_obj(mesh: &Mesh, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "# sphere rope").unwrap();
    writeln!(out, "o {name}").unwrap();
    for v in &mesh.vertices {
        writeln!(out, "v {:.9} {:.9} {:.9}", v.x, v.y, v.z).unwrap();
    }
    if !mesh.edges.is_empty() {
        // one polyline element, chained through the edges
        out.push('l');
        write!(out, " {}", mesh.edges[0][0] + 1).unwrap();
        for e in &mesh.edges {
            write!(out, " {}", e[1] + 1).unwrap();
        }
        out.push('\n');
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1).unwrap();
    }
    out
}

pub fn to_ply(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    writeln!(out, "element vertex {}", mesh.vertices.len()).unwrap();
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    if !mesh.faces.is_empty() {
        writeln!(out, "element face {}", mesh.faces.len()).unwrap();
        out.push_str("property list uchar int vertex_indices\n");
    }
    if !mesh.edges.is_empty() {
        writeln!(out, "element edge {}", mesh.edges.len()).unwrap();
        out.push_str("property int vertex1\nproperty int vertex2\n");
    }
    out.push_str("end_header\n");
    for v in &mesh.vertices {
        writeln!(out, "{:.9} {:.9} {:.9}", v.x, v.y, v.z).unwrap();
    }
    for f in &mesh.faces {
        writeln!(out, "4 {} {} {} {}", f[0], f[1], f[2], f[3]).unwrap();
    }
    for e in &mesh.edges {
        writeln!(out, "{} {}", e[0], e[1]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_closed;

    #[test]
    fn equator_polyline_obj() {
        let c = generate_closed(1, 0).unwrap().sample_per_arc(8).unwrap();
        let obj = to_obj(&polyline(&c), "equator");
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 16);
        let l = obj.lines().find(|l| l.starts_with('l')).unwrap();
        // closed: the polyline returns to vertex 1
        assert_eq!(l.split_whitespace().count(), 1 + 17);
        assert!(l.ends_with(" 1"));
        for v in obj.lines().filter(|l| l.starts_with("v ")) {
            let z: f64 = v.split_whitespace().nth(3).unwrap().parse().unwrap();
            assert!(z.abs() < 1e-9);
        }
    }

    #[test]
    fn tube_ply_counts() {
        let c = generate_closed(2, 1).unwrap().sample_per_arc(10).unwrap();
        let mesh = tube(&c, 0.1, TUBE_SIDES);
        assert_eq!(mesh.vertices.len(), c.len() * TUBE_SIDES);
        assert_eq!(mesh.faces.len(), c.len() * TUBE_SIDES);
        let ply = to_ply(&mesh);
        assert!(ply.contains(&format!("element vertex {}", c.len() * TUBE_SIDES)));
        assert!(ply.contains("element face"));
        assert_eq!(ply, to_ply(&tube(&c, 0.1, TUBE_SIDES)));
        // rings sit at the tube radius from their sample
        for (i, p) in c.points().iter().enumerate() {
            let d = (mesh.vertices[i * TUBE_SIDES + 3] - p.vec()).norm();
            assert!((d - 0.1).abs() < 1e-12);
        }
    }
}
