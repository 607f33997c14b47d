//! Uniform random rotations (Shoemake's method) and mesh rotation.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Quaternion, Rotation3, Vector3};

use super::SimError;
use crate::mesh::TriMesh;

/// Three independent variates strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomTriple {
    a: f64,
    b: f64,
    c: f64,
}

impl RandomTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, SimError> {
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(SimError::Domain(format!("{name} = {v} is outside (0, 1)")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
}

/// A rotation stored as a unit quaternion `w + i·x + j·y + k·z`
/// (Hamilton convention, vectors rotate as `q·v·q⁻¹`).
#[derive(Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl fmt::Debug for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

const UNIT_TOL: f64 = 1e-9;

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Accepts components whose norm is within 1e-9 of one and stores them
    /// renormalised.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self, SimError> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(SimError::Domain(format!("quaternion norm {n} is not 1")));
        }
        Ok(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Self {
        let q = nalgebra::UnitQuaternion::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
        Self::from_na(&q)
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub(crate) fn to_na(self) -> nalgebra::UnitQuaternion<f64> {
        nalgebra::UnitQuaternion::new_unchecked(Quaternion::new(self.w, self.x, self.y, self.z))
    }

    pub(crate) fn from_na(q: &nalgebra::UnitQuaternion<f64>) -> Self {
        let q = q.into_inner();
        let n = q.norm();
        Self { w: q.w / n, x: q.i / n, y: q.j / n, z: q.k / n }
    }

    pub fn to_rotation_matrix(self) -> Rotation3<f64> {
        self.to_na().to_rotation_matrix()
    }

    /// `self` applied after `first`.
    pub fn compose(self, first: UnitQuaternion) -> UnitQuaternion {
        Self::from_na(&(self.to_na() * first.to_na()))
    }

    pub fn rotate_vector(self, v: &Vector3<f64>) -> Vector3<f64> {
        self.to_na() * v
    }
}

/// Shoemake's uniform rotation:
/// W = sin(2πA)√(1−C), X = cos(2πA)√(1−C), Y = sin(2πB)√C, Z = cos(2πB)√C.
pub fn shoemake_sample(t: RandomTriple) -> UnitQuaternion {
    let (r1, r2) = ((1.0 - t.c).sqrt(), t.c.sqrt());
    let (s1, c1) = (2.0 * PI * t.a).sin_cos();
    let (s2, c2) = (2.0 * PI * t.b).sin_cos();
    UnitQuaternion { w: s1 * r1, x: c1 * r1, y: s2 * r2, z: c2 * r2 }
}

/// Rotates every vertex about the origin.
pub fn rotate_mesh(mesh: &TriMesh, q: UnitQuaternion) -> Result<TriMesh, SimError> {
    if (q.norm() - 1.0).abs() > UNIT_TOL {
        return Err(SimError::Domain(format!("quaternion norm {} is not 1", q.norm())));
    }
    let r = q.to_rotation_matrix();
    Ok(mesh.map_vertices(|p| r * p))
}
