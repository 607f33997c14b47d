use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Point3;

use super::{MeshError, Result, TriMesh};

/// Axis-aligned unit cube spanning [0, 1]³, two triangles per side.
pub fn unit_cube() -> TriMesh {
    let v = [
        [0., 0., 0.],
        [1., 0., 0.],
        [1., 1., 0.],
        [0., 1., 0.],
        [0., 0., 1.],
        [1., 0., 1.],
        [1., 1., 1.],
        [0., 1., 1.],
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [1, 2, 6],
        [1, 6, 5],
        [2, 3, 7],
        [2, 7, 6],
        [3, 0, 4],
        [3, 4, 7],
    ];
    let vertices = v.iter().map(|p| Point3::new(p[0], p[1], p[2])).collect();
    TriMesh::new(vertices, faces).expect("static cube is valid")
}

/// Geodesic sphere: an icosahedron with each triangle split into four
/// `subdivisions` times, vertices pushed to `radius`.
pub fn icosphere(radius: f64, subdivisions: u32) -> Result<TriMesh> {
    if !(radius > 0.0) {
        return Err(MeshError::Domain(format!("radius must be positive, got {radius}")));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Point3<f64>> = [
        [-1., t, 0.],
        [1., t, 0.],
        [-1., -t, 0.],
        [1., -t, 0.],
        [0., -1., t],
        [0., 1., t],
        [0., -1., -t],
        [0., 1., -t],
        [t, 0., -1.],
        [t, 0., 1.],
        [-t, 0., -1.],
        [-t, 0., 1.],
    ]
    .iter()
    .map(|p| Point3::from(Point3::new(p[0], p[1], p[2]).coords.normalize()))
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

    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Point3<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let m = (verts[a].coords + verts[b].coords).normalize();
                verts.push(Point3::from(m));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }

    let vertices = verts.into_iter().map(|p| Point3::from(p.coords * radius)).collect();
    TriMesh::new(vertices, faces)
}

/// Ellipsoid with semi-axes `a`, `b`, `c` along x, y, z, built from an
/// icosphere of the given subdivision level scaled per axis.
pub fn make_ellipsoid(a: f64, b: f64, c: f64, subdivisions: u32) -> Result<TriMesh> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(MeshError::Domain(format!("semi-axis {name} must be positive, got {v}")));
        }
    }
    if subdivisions == 0 {
        return Err(MeshError::Domain("ellipsoid needs at least one subdivision".into()));
    }
    let sphere = icosphere(1.0, subdivisions)?;
    Ok(sphere.map_vertices(|p| Point3::new(p.x * a, p.y * b, p.z * c)))
}

/// Prism along x of total `length` with an elliptical cross-section of
/// semi-axes `semi_y` and `semi_z`, sampled at `segments` points starting on
/// the +y axis. Caps are fanned around a centre vertex.
pub fn make_elliptic_prism(semi_y: f64, semi_z: f64, length: f64, segments: usize) -> Result<TriMesh> {
    if !(semi_y > 0.0 && semi_z > 0.0 && length > 0.0) {
        return Err(MeshError::Domain("prism dimensions must be positive".into()));
    }
    if segments < 3 {
        return Err(MeshError::Domain("prism needs at least 3 segments".into()));
    }
    let n = segments;
    let h = 0.5 * length;
    let mut vertices = Vec::with_capacity(2 * n + 2);
    for x in [-h, h] {
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            vertices.push(Point3::new(x, semi_y * t.cos(), semi_z * t.sin()));
        }
    }
    let left = vertices.len();
    vertices.push(Point3::new(-h, 0.0, 0.0));
    let right = vertices.len();
    vertices.push(Point3::new(h, 0.0, 0.0));

    let mut faces = Vec::with_capacity(4 * n);
    for k in 0..n {
        let k1 = (k + 1) % n;
        let (a0, a1, b0, b1) = (k, k1, n + k, n + k1);
        faces.push([a0, a1, b1]);
        faces.push([a0, b1, b0]);
        faces.push([left, a1, a0]);
        faces.push([right, b0, b1]);
    }
    TriMesh::new(vertices, faces)
}
