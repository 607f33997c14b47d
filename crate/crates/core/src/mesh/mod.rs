//! Triangle meshes of storage roots.
//!
//! Meshes are closed, outward-oriented (counter-clockwise seen from outside)
//! triangle soups in centimetres. Volume and centroid use the signed
//! tetrahedron sum, which is exact for closed meshes.

mod generate;
mod io;

use std::collections::HashMap;

use nalgebra::{Matrix3, Point3, SymmetricEigen, Vector3};
use thiserror::Error;

pub use generate::{icosphere, make_ellipsoid, make_elliptic_prism, unit_cube};
pub use io::{load_mesh, load_mesh_file, MeshFormat};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh has no faces")]
    Empty,
    #[error("face {face} references vertex {index}, but only {count} vertices exist")]
    BadIndex { face: usize, index: usize, count: usize },
    #[error("mesh needs at least 4 vertices and 4 faces, got {vertices} and {faces}")]
    TooSmall { vertices: usize, faces: usize },
    #[error("signed volume {0} is not positive; mesh is open or inward-oriented")]
    NonPositiveVolume(f64),
    #[error("{0}")]
    Domain(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MeshError>;

/// A triangle mesh. Immutable once built; face indices are validated.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point3<f64>>,
    faces: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let count = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&index) = f.iter().find(|&&i| i >= count) {
                return Err(MeshError::BadIndex { face: fi, index, count });
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn triangles(&self) -> impl Iterator<Item = [Point3<f64>; 3]> + '_ {
        self.faces.iter().map(|f| [self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]])
    }

    /// Applies `f` to every vertex, keeping connectivity.
    pub fn map_vertices(&self, f: impl Fn(&Point3<f64>) -> Point3<f64>) -> TriMesh {
        TriMesh { vertices: self.vertices.iter().map(f).collect(), faces: self.faces.clone() }
    }

    pub fn translated(&self, by: Vector3<f64>) -> TriMesh {
        self.map_vertices(|p| p + by)
    }

    /// Size requirements for volume and settling operations.
    pub fn check_solid(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(MeshError::Empty);
        }
        if self.vertices.len() < 4 || self.faces.len() < 4 {
            return Err(MeshError::TooSmall { vertices: self.vertices.len(), faces: self.faces.len() });
        }
        Ok(())
    }

    /// Edge-manifold and orientation report. A closed, consistently oriented
    /// mesh uses every undirected edge exactly twice, once per direction.
    pub fn closedness(&self) -> Closedness {
        let mut directed: HashMap<(usize, usize), u32> = HashMap::with_capacity(self.faces.len() * 3);
        for f in &self.faces {
            for k in 0..3 {
                *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut report = Closedness::default();
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        for (&(a, b), &fwd) in &directed {
            let key = (a.min(b), a.max(b));
            if seen.insert(key, ()).is_some() {
                continue;
            }
            let back = directed.get(&(b, a)).copied().unwrap_or(0);
            let total = fwd + back;
            if total == 1 {
                report.boundary_edges += 1;
            } else if total > 2 {
                report.nonmanifold_edges += 1;
            } else if fwd != 1 || back != 1 {
                report.misoriented_edges += 1;
            }
        }
        report
    }

    pub fn bounding_box(&self) -> (Point3<f64>, Point3<f64>) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Closedness {
    pub boundary_edges: usize,
    pub nonmanifold_edges: usize,
    pub misoriented_edges: usize,
}

impl Closedness {
    pub fn is_closed(&self) -> bool {
        self.boundary_edges == 0 && self.nonmanifold_edges == 0 && self.misoriented_edges == 0
    }
}

fn warn_if_open(mesh: &TriMesh) {
    let c = mesh.closedness();
    if !c.is_closed() {
        log::warn!(
            "mesh is not closed: {} boundary, {} non-manifold, {} misoriented edges",
            c.boundary_edges,
            c.nonmanifold_edges,
            c.misoriented_edges
        );
    }
}

/// Signed volume and first moment relative to the first vertex.
fn volume_and_moment(mesh: &TriMesh) -> (f64, Vector3<f64>) {
    let r = mesh.vertices[0];
    let mut vol6 = 0.0;
    let mut moment = Vector3::zeros();
    for [a, b, c] in mesh.triangles() {
        let (a, b, c) = (a - r, b - r, c - r);
        let v6 = a.dot(&b.cross(&c));
        vol6 += v6;
        moment += (a + b + c) * v6;
    }
    (vol6 / 6.0, moment / 24.0)
}

/// Divergence-theorem volume, Σ v0·(v1×v2)/6 over faces.
pub fn mesh_volume(mesh: &TriMesh) -> Result<f64> {
    mesh.check_solid()?;
    warn_if_open(mesh);
    let (v, _) = volume_and_moment(mesh);
    if v > 0.0 {
        Ok(v)
    } else {
        Err(MeshError::NonPositiveVolume(v))
    }
}

/// Volume centroid by the signed tetrahedron decomposition.
pub fn volume_centroid(mesh: &TriMesh) -> Result<Point3<f64>> {
    mesh.check_solid()?;
    let (v, m) = volume_and_moment(mesh);
    if v <= 0.0 {
        return Err(MeshError::NonPositiveVolume(v));
    }
    Ok(mesh.vertices[0] + m / v)
}

/// Uniformly scales `mesh` about the origin so its volume times `density`
/// equals `weight`.
pub fn scale_to_weight(mesh: &TriMesh, weight: f64, density: f64) -> Result<TriMesh> {
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(MeshError::Domain(format!("weight must be positive, got {weight}")));
    }
    if !(density > 0.0) || !density.is_finite() {
        return Err(MeshError::Domain(format!("density must be positive, got {density}")));
    }
    let v = mesh_volume(mesh)?;
    let s = (weight / (density * v)).cbrt();
    Ok(mesh.map_vertices(|p| Point3::from(p.coords * s)))
}

/// Volume, centroid and principal frame of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSummary {
    pub volume: f64,
    pub centroid: Point3<f64>,
    /// Columns are the principal directions, ordered to match `extents`,
    /// forming a right-handed orthonormal frame.
    pub principal_axes: Matrix3<f64>,
    /// Vertex spread along each principal direction, descending.
    pub extents: [f64; 3],
}

impl MeshSummary {
    pub fn major_axis(&self) -> Vector3<f64> {
        self.principal_axes.column(0).into_owned()
    }
}

/// Principal axes from the face-area-weighted covariance of face centroids,
/// with extents measured over the vertices.
pub fn principal_axes(mesh: &TriMesh) -> Result<MeshSummary> {
    let volume = mesh_volume(mesh)?;
    let centroid = volume_centroid(mesh)?;

    let mut total_area = 0.0;
    let mut mean = Vector3::zeros();
    let mut samples = Vec::with_capacity(mesh.faces.len());
    for [a, b, c] in mesh.triangles() {
        let area = 0.5 * (b - a).cross(&(c - a)).norm();
        let fc = (a.coords + b.coords + c.coords) / 3.0;
        total_area += area;
        mean += fc * area;
        samples.push((area, fc));
    }
    if total_area <= 0.0 {
        return Err(MeshError::Degenerate("mesh has zero surface area".into()));
    }
    mean /= total_area;
    let mut cov = Matrix3::zeros();
    for (area, fc) in &samples {
        let d = fc - mean;
        cov += d * d.transpose() * *area;
    }
    cov /= total_area;

    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = eig.eigenvalues[order[0]];
    if !(top > 0.0) || eig.eigenvalues[order[1]] <= 1e-12 * top {
        return Err(MeshError::Degenerate("surface samples are collinear".into()));
    }

    let mut axes: Vec<Vector3<f64>> = order.iter().map(|&i| eig.eigenvectors.column(i).normalize()).collect();
    // Re-orthogonalise and force right-handedness.
    axes[1] = (axes[1] - axes[0] * axes[0].dot(&axes[1])).normalize();
    axes[2] = axes[0].cross(&axes[1]);

    let mut extents = [0.0; 3];
    for (k, axis) in axes.iter().enumerate() {
        let (lo, hi) = mesh
            .vertices
            .iter()
            .map(|v| v.coords.dot(axis))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        extents[k] = hi - lo;
    }
    // Eigenvalue order and extent order can disagree on near-degenerate
    // shapes; extents are the documented ordering.
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| extents[j].total_cmp(&extents[i]));
    let mut sorted_axes = [axes[idx[0]], axes[idx[1]], Vector3::zeros()];
    sorted_axes[2] = sorted_axes[0].cross(&sorted_axes[1]);
    let extents = [extents[idx[0]], extents[idx[1]], extents[idx[2]]];
    if !(extents[2] > 0.0) {
        return Err(MeshError::Degenerate("mesh is flat".into()));
    }

    Ok(MeshSummary { volume, centroid, principal_axes: Matrix3::from_columns(&sorted_axes), extents })
}
