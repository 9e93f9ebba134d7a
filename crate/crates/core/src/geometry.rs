//! Points, rotations and rigid motions, plus the coplanarity predicate every
//! constraint in the crate is built from.
//!
//! Rotation sign convention: `rotation_from_axis_angle(u, φ)` is
//!
//! ```text
//! A = cos φ · I + (1 − cos φ) · u uᵀ − sin φ · [u]ₓ
//! ```
//!
//! i.e. a rotation through φ that appears clockwise when looking from the tip
//! of `u` back towards the origin. With this convention the axis (1,1,1)/√3
//! and φ = 2π/3 send e₁ to e₃, and the reduced 6×4 coefficient matrix in
//! [`crate::solver::reduced_matrix`] holds with the signs as written.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Quaternion, Rotation3, UnitQuaternion, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Default tolerance for "is this residual zero" tests.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Tolerance on |u| = 1 and on orthogonality of rotation matrices.
pub const UNIT_TOL: f64 = 1e-12;

/// Unit axis and angle in the open interval (0, 2π).
///
/// The identity rotation is deliberately not representable: its cotangent
/// parameter diverges, so callers treat it as a separate case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    axis: Vec3,
    angle: f64,
}

impl AxisAngle {
    pub fn new(axis: Vec3, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitAxis { norm });
        }
        if !(angle > 0.0 && angle < TAU) {
            return Err(Error::AngleOutOfRange(angle));
        }
        Ok(Self { axis, angle })
    }

    /// Normalizes `axis` first; rejects the zero vector.
    pub fn normalized(axis: Vec3, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonUnitAxis { norm });
        }
        Self::new(axis / norm, angle)
    }

    /// Builds the rotation from the cotangent parameter s = cot(φ/2).
    pub fn from_cot(axis: Vec3, s: f64) -> Result<Self> {
        Self::new(axis, angle_from_cot(s))
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// s = cot(φ/2).
    pub fn s(&self) -> f64 {
        let half = 0.5 * self.angle;
        half.cos() / half.sin()
    }

    /// The equivalent description (−u, 2π − φ).
    pub fn flipped(&self) -> Self {
        Self {
            axis: -self.axis,
            angle: TAU - self.angle,
        }
    }
}

/// cot(φ/2) for 0 < φ < 2π.
pub fn cot_half(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi < TAU) {
        return Err(Error::AngleOutOfRange(phi));
    }
    let half = 0.5 * phi;
    Ok(half.cos() / half.sin())
}

/// Inverse of [`cot_half`]: maps s ∈ ℝ onto φ ∈ (0, 2π).
pub fn angle_from_cot(s: f64) -> f64 {
    2.0 * 1.0f64.atan2(s)
}

/// A 3×3 proper orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 3]; 3]", into = "[[f64; 3]; 3]")]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Validates orthogonality and det = +1 to within `tol`.
    pub fn from_matrix(m: Matrix3<f64>, tol: f64) -> Result<Self> {
        let defect = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det = m.determinant();
        if !(defect <= tol) || !((det - 1.0).abs() <= tol) {
            return Err(Error::NotARotation { defect, det });
        }
        Ok(Self(m))
    }

    pub fn from_axis_angle(aa: &AxisAngle) -> Self {
        rotation_from_axis_angle(aa)
    }

    /// Rotation taking a small step along the exponential chart: the
    /// standard right-handed rotation vector `w` composed on the left.
    pub fn perturbed(&self, w: &Vec3) -> Self {
        let step = Rotation3::new(*w);
        Self(step.matrix() * self.0)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.0 * x
    }

    pub fn compose(&self, other: &RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * other.0)
    }

    pub fn transpose(&self) -> RotationMatrix {
        RotationMatrix(self.0.transpose())
    }

    /// Rotation angle in [0, π] (convention-independent).
    pub fn angle(&self) -> f64 {
        let q = self.quaternion();
        2.0 * q.vector().norm().atan2(q.scalar().abs())
    }

    /// Axis-angle description with φ ∈ (0, π]; `None` when the rotation is
    /// the identity to within `tol` radians.
    pub fn to_axis_angle(&self, tol: f64) -> Option<AxisAngle> {
        let q = self.quaternion();
        let (mut w, mut v) = (q.scalar(), q.vector().into_owned());
        if w < 0.0 {
            w = -w;
            v = -v;
        }
        let vn = v.norm();
        let theta = 2.0 * vn.atan2(w);
        if theta <= tol || vn == 0.0 {
            return None;
        }
        // A right-handed rotation by θ about v is a rotation by θ about −v in
        // this crate's convention.
        let axis = -v / vn;
        Some(AxisAngle {
            axis,
            angle: theta.min(PI),
        })
    }

    fn quaternion(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(self.0))
    }

    /// Uniformly distributed rotation (Haar measure), via a random unit
    /// quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let q = Quaternion::new(
            b * (TAU * u3).cos(),
            a * (TAU * u2).sin(),
            a * (TAU * u2).cos(),
            b * (TAU * u3).sin(),
        );
        Self(*UnitQuaternion::from_quaternion(q).to_rotation_matrix().matrix())
    }

    /// Rotation vector w (standard right-handed) with exp([w]ₓ) = self · other⁻¹.
    pub fn log_relative(&self, other: &RotationMatrix) -> Vec3 {
        let rel = Rotation3::from_matrix_unchecked(self.0 * other.0.transpose());
        rel.scaled_axis()
    }
}

impl From<RotationMatrix> for [[f64; 3]; 3] {
    fn from(r: RotationMatrix) -> Self {
        let m = r.0;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }
}

impl TryFrom<[[f64; 3]; 3]> for RotationMatrix {
    type Error = Error;

    fn try_from(rows: [[f64; 3]; 3]) -> Result<Self> {
        let m = Matrix3::from_fn(|i, j| rows[i][j]);
        // Files carry 17 significant digits; allow a little slack.
        Self::from_matrix(m, 1e-9)
    }
}

/// x ↦ A x + b with A a proper rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub rotation: RotationMatrix,
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn new(rotation: RotationMatrix, translation: Vec3) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(RotationMatrix::identity(), Vec3::zeros())
    }

    pub fn pure_rotation(rotation: RotationMatrix) -> Self {
        Self::new(rotation, Vec3::zeros())
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.rotation.apply(x) + self.translation
    }

    /// Max-norm distance between two motions, treating the rotation matrix
    /// entries and translation components alike.
    pub fn distance(&self, other: &RigidMotion) -> f64 {
        let dr = (self.rotation.matrix() - other.rotation.matrix()).abs().max();
        let db = (self.translation - other.translation).abs().max();
        dr.max(db)
    }
}

/// Rotation through `aa.angle()` about `aa.axis()` in the crate convention.
pub fn rotation_from_axis_angle(aa: &AxisAngle) -> RotationMatrix {
    let u = aa.axis;
    let (sin, cos) = aa.angle.sin_cos();
    let cross = u.cross_matrix();
    RotationMatrix(Matrix3::identity() * cos + u * u.transpose() * (1.0 - cos) - cross * sin)
}

/// det[p2 − p1, q1 − p1, q2 − p1]: six times the signed volume of the
/// tetrahedron p1 p2 q1 q2. Zero exactly when the four points are coplanar.
pub fn coplanarity_residual(p1: &Vec3, p2: &Vec3, q1: &Vec3, q2: &Vec3) -> f64 {
    let e = p2 - p1;
    let a = q1 - p1;
    let c = q2 - p1;
    e.dot(&a.cross(&c))
}
