//! The tetrahedron pair inscribed in a parallelepiped and its six coplanarity
//! constraints.
//!
//! Vertex labels follow the unit cube: the fixed tetrahedron is
//! P⁰₁ = (1,−1,−1), P⁰₂ = (−1,1,−1), P⁰₃ = (−1,−1,1), P⁰₄ = (1,1,1) and the
//! moving tetrahedron starts at Q̄⁰ᵢ = −P⁰ᵢ. A parallelepiped is the image of
//! the cube under an invertible map D with det D > 0, so Pᵢ = D P⁰ᵢ and
//! Q̄ᵢ = −Pᵢ.
//!
//! Indices in this module are 0-based; vertex `i` here is vertex `i + 1` in
//! the usual labelling.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisAngle, RigidMotion, RotationMatrix, Vec3};

pub const CUBE_VERTICES: [[f64; 3]; 4] = [
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0],
];

/// Half-dimensions of a rectangular box with vertices (±d₁, ±d₂, ±d₃).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BoxDims([f64; 3]);

impl BoxDims {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let d = [d1, d2, d3];
        if d.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(Self(d))
        } else {
            Err(Error::InvalidDims(d))
        }
    }

    pub fn cube() -> Self {
        Self([1.0; 3])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    /// Half-dimension along axis `i` (0-based).
    pub fn half(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Dᵢ = dᵢ⁻².
    pub fn inverse_squares(&self) -> [f64; 3] {
        self.0.map(|d| 1.0 / (d * d))
    }

    /// max Dᵢ / (D₁ + D₂ + D₃), in [1/3, 1).
    pub fn max_share(&self) -> f64 {
        let big_d = self.inverse_squares();
        let total: f64 = big_d.iter().sum();
        big_d.iter().copied().fold(f64::MIN, f64::max) / total
    }

    pub fn is_cube(&self, rtol: f64) -> bool {
        let [a, b, c] = self.0;
        (a - b).abs() <= rtol * a.max(b) && (b - c).abs() <= rtol * b.max(c)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0[0] * factor, self.0[1] * factor, self.0[2] * factor)
    }
}

impl From<BoxDims> for [f64; 3] {
    fn from(d: BoxDims) -> Self {
        d.0
    }
}

impl TryFrom<[f64; 3]> for BoxDims {
    type Error = Error;

    fn try_from(d: [f64; 3]) -> Result<Self> {
        Self::new(d[0], d[1], d[2])
    }
}

/// The linear map D taking the cube with vertices (±1, ±1, ±1) onto the
/// parallelepiped. Always has det D > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelepipedMap {
    matrix: Matrix3<f64>,
    inverse: Matrix3<f64>,
}

impl ParallelepipedMap {
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        let det = matrix.determinant();
        let scale = matrix.norm().powi(3);
        if !det.is_finite() || det.abs() <= 1e-12 * scale {
            return Err(Error::SingularMap(det));
        }
        if det < 0.0 {
            return Err(Error::NegativeOrientation(det));
        }
        let inverse = matrix.try_inverse().ok_or(Error::SingularMap(det))?;
        Ok(Self { matrix, inverse })
    }

    pub fn from_box(dims: &BoxDims) -> Self {
        let matrix = Matrix3::from_diagonal(&Vec3::from(dims.as_array()));
        let inverse = Matrix3::from_diagonal(&Vec3::from(dims.as_array().map(|d| 1.0 / d)));
        Self { matrix, inverse }
    }

    pub fn cube() -> Self {
        Self::from_box(&BoxDims::cube())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix3<f64> {
        &self.inverse
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    /// The box half-dimensions when the map is diagonal.
    pub fn box_dims(&self) -> Option<BoxDims> {
        let m = &self.matrix;
        let off = (0..3)
            .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
            .all(|(i, j)| m[(i, j)] == 0.0);
        if off {
            BoxDims::new(m[(0, 0)], m[(1, 1)], m[(2, 2)]).ok()
        } else {
            None
        }
    }
}

/// Which face of the (deformed) cube a pairing lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Face {
    PosZ,
    NegZ,
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Face {
    /// Coordinate axis (0-based) normal to the face.
    pub fn axis(&self) -> usize {
        match self {
            Face::PosX | Face::NegX => 0,
            Face::PosY | Face::NegY => 1,
            Face::PosZ | Face::NegZ => 2,
        }
    }

    pub fn sign(&self) -> f64 {
        match self {
            Face::PosX | Face::PosY | Face::PosZ => 1.0,
            _ => -1.0,
        }
    }
}

/// Fixed edge PᵢPⱼ paired with moving edge QₖQₗ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub fixed: [usize; 2],
    pub moving: [usize; 2],
    pub face: Face,
}

const fn pairing(i: usize, j: usize, k: usize, l: usize, face: Face) -> Pairing {
    Pairing {
        fixed: [i - 1, j - 1],
        moving: [k - 1, l - 1],
        face,
    }
}

/// Pairing table in face order +z, −z, +x, −x, +y, −y. Every residual vector
/// in the crate is indexed by this order.
pub const PAIRINGS: [Pairing; 6] = [
    pairing(3, 4, 1, 2, Face::PosZ),
    pairing(1, 2, 3, 4, Face::NegZ),
    pairing(1, 4, 2, 3, Face::PosX),
    pairing(2, 3, 1, 4, Face::NegX),
    pairing(2, 4, 1, 3, Face::PosY),
    pairing(1, 3, 2, 4, Face::NegY),
];

pub fn edge_pairing() -> &'static [Pairing; 6] {
    &PAIRINGS
}

/// Index into [`PAIRINGS`] of the (+, −) faces normal to axis `i`.
pub fn faces_of_axis(i: usize) -> (usize, usize) {
    match i {
        0 => (2, 3),
        1 => (4, 5),
        2 => (0, 1),
        _ => panic!("axis index {i} out of range"),
    }
}

/// Six constraint values ordered as [`PAIRINGS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualVector(pub [f64; 6]);

impl ResidualVector {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn as_array(&self) -> [f64; 6] {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TetraPair {
    map: ParallelepipedMap,
    fixed: [Vec3; 4],
    moving: [Vec3; 4],
}

pub fn build_pair(map: &ParallelepipedMap) -> TetraPair {
    let fixed = CUBE_VERTICES.map(|p| map.matrix() * Vec3::from(p));
    let moving = fixed.map(|p| -p);
    TetraPair {
        map: *map,
        fixed,
        moving,
    }
}

impl TetraPair {
    pub fn from_box(dims: &BoxDims) -> Self {
        build_pair(&ParallelepipedMap::from_box(dims))
    }

    pub fn map(&self) -> &ParallelepipedMap {
        &self.map
    }

    pub fn fixed(&self) -> &[Vec3; 4] {
        &self.fixed
    }

    /// Moving vertices in the basic position.
    pub fn moving_basic(&self) -> &[Vec3; 4] {
        &self.moving
    }

    pub fn moved(&self, m: &RigidMotion) -> [Vec3; 4] {
        self.moving.map(|q| m.apply(&q))
    }

    /// det[Pⱼ − Pᵢ, Q̄ₖ' − Pᵢ, Q̄ₗ' − Pᵢ] per pairing, evaluated as
    /// e·((AQ̄ₖ + b − Pᵢ) × A(Q̄ₗ − Q̄ₖ)). The moving edge is rotated before
    /// the translation is added, so rounding grows like |b| rather than |b|².
    pub fn residuals(&self, m: &RigidMotion) -> ResidualVector {
        ResidualVector(PAIRINGS.map(|p| {
            let pi = self.fixed[p.fixed[0]];
            let e = self.fixed[p.fixed[1]] - pi;
            let (qk, ql) = (self.moving[p.moving[0]], self.moving[p.moving[1]]);
            let a = m.rotation.apply(&qk) + (m.translation - pi);
            let d = m.rotation.apply(&(ql - qk));
            e.dot(&a.cross(&d))
        }))
    }

    /// |PⱼPᵢ| · |Q̄ₗQ̄ₖ| for each pairing; both lengths are motion invariant.
    pub fn residual_scales(&self) -> [f64; 6] {
        PAIRINGS.map(|p| {
            (self.fixed[p.fixed[1]] - self.fixed[p.fixed[0]]).norm()
                * (self.moving[p.moving[1]] - self.moving[p.moving[0]]).norm()
        })
    }

    /// Residuals divided by the edge-length products: each entry is then a
    /// length (distance between the edge lines times the sine of their angle).
    pub fn scaled_residuals(&self, m: &RigidMotion) -> ResidualVector {
        let r = self.residuals(m);
        let s = self.residual_scales();
        ResidualVector(std::array::from_fn(|k| r.0[k] / s[k]))
    }
}

pub fn residuals(pair: &TetraPair, m: &RigidMotion) -> ResidualVector {
    pair.residuals(m)
}

/// Residuals of the equivalent cube problem: the cube vertices moved by
/// x ↦ D⁻¹ A D x + D⁻¹ b. Each entry equals the corresponding entry of
/// [`residuals`] divided by det D.
pub fn conjugated_motion_check(map: &ParallelepipedMap, m: &RigidMotion) -> ResidualVector {
    let conj = map.inverse() * m.rotation.matrix() * map.matrix();
    let shift = map.inverse() * m.translation;
    let fixed = CUBE_VERTICES.map(Vec3::from);
    ResidualVector(PAIRINGS.map(|p| {
        let pi = fixed[p.fixed[0]];
        let e = fixed[p.fixed[1]] - pi;
        let (qk, ql) = (-fixed[p.moving[0]], -fixed[p.moving[1]]);
        let a = conj * qk + (shift - pi);
        e.dot(&a.cross(&(conj * (ql - qk))))
    }))
}

/// One linear equation `coeffs · b⁰ = rhs` in the conjugated translation
/// b⁰ = D⁻¹ b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatedEquation {
    pub coeffs: [f64; 3],
    pub rhs: f64,
}

/// The six conjugated equations in the order I/1, I/2, I/3, II/1, II/2, II/3,
/// written in terms of the entries of B = D⁻¹ A D. Rows I/i and II/i combine
/// the two faces normal to axis i.
pub fn conjugated_equations(map: &ParallelepipedMap, rotation: &RotationMatrix) -> [ConjugatedEquation; 6] {
    let b = map.inverse() * rotation.matrix() * map.matrix();
    let a = |i: usize, j: usize| b[(i, j)];
    let mut out = [ConjugatedEquation {
        coeffs: [0.0; 3],
        rhs: 0.0,
    }; 6];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let mut first = [0.0; 3];
        first[i] = -(a(j, j) + a(k, k));
        first[j] = a(i, j);
        first[k] = a(i, k);
        out[i] = ConjugatedEquation {
            coeffs: first,
            rhs: a(j, i) * a(i, k) + a(k, i) * a(i, j) + (a(j, k) + a(k, j)) * (1.0 - a(i, i)),
        };
        let mut second = [0.0; 3];
        second[i] = -(a(j, k) + a(k, j));
        second[j] = a(i, k);
        second[k] = a(i, j);
        out[i + 3] = ConjugatedEquation {
            coeffs: second,
            rhs: a(i, j) * a(j, i) + a(k, i) * a(i, k) + (a(j, j) + a(k, k)) * (1.0 - a(i, i)),
        };
    }
    out
}

/// Sum of the right-hand sides of the three II equations for the rotation
/// `aa` under `map`. It equals 2 Tr(B) − 2 m₂(B) for B = D⁻¹ A D, and since
/// both invariants are shared with A and coincide for any rotation, it is
/// identically zero. The left-hand coefficients of the II rows also sum to
/// zero term by term, so the three II equations carry at most two
/// independent constraints.
pub fn ii_sum_identity(map: &ParallelepipedMap, aa: &AxisAngle) -> f64 {
    let rotation = RotationMatrix::from_axis_angle(aa);
    let eqs = conjugated_equations(map, &rotation);
    let rhs: f64 = eqs[3..].iter().map(|e| e.rhs).sum();
    let lhs: [f64; 3] = std::array::from_fn(|c| eqs[3..].iter().map(|e| e.coeffs[c]).sum());
    // The coefficient sums vanish symbolically; folding them in keeps the
    // return value an honest check of the whole equation sum.
    rhs - lhs.iter().sum::<f64>()
}

/// Sum of the symmetric 2×2 principal minors.
pub fn principal_minor_sum(m: &Matrix3<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]
        + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{coplanarity_residual, rotation_from_axis_angle};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    pub(crate) fn random_rotation(rng: &mut impl Rng) -> AxisAngle {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        AxisAngle::new(Vec3::new(r * t.cos(), r * t.sin(), z), rng.gen_range(0.01..6.27)).unwrap()
    }

    pub(crate) fn random_map(rng: &mut impl Rng) -> ParallelepipedMap {
        loop {
            let m = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0)) + Matrix3::identity() * 1.5;
            if let Ok(map) = ParallelepipedMap::new(m) {
                return map;
            }
        }
    }

    fn random_motion(rng: &mut impl Rng) -> RigidMotion {
        let aa = random_rotation(rng);
        let b = Vec3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        RigidMotion::new(rotation_from_axis_angle(&aa), b)
    }

    #[test]
    fn cube_and_box_vertices() {
        let pair = build_pair(&ParallelepipedMap::cube());
        assert_eq!(pair.fixed()[0], Vec3::new(1.0, -1.0, -1.0));
        assert_eq!(pair.fixed()[1], Vec3::new(-1.0, 1.0, -1.0));
        assert_eq!(pair.fixed()[2], Vec3::new(-1.0, -1.0, 1.0));
        assert_eq!(pair.fixed()[3], Vec3::new(1.0, 1.0, 1.0));
        let pair = TetraPair::from_box(&BoxDims::new(0.5, 2.0, 3.0).unwrap());
        assert_eq!(pair.fixed()[0], Vec3::new(0.5, -2.0, -3.0));
        for i in 0..4 {
            assert_eq!(pair.moving_basic()[i], -pair.fixed()[i]);
        }
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(BoxDims::new(1.0, 0.0, 1.0).is_err());
        assert!(BoxDims::new(1.0, f64::NAN, 1.0).is_err());
        assert!(matches!(ParallelepipedMap::new(Matrix3::zeros()), Err(Error::SingularMap(_))));
        let flip = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(matches!(ParallelepipedMap::new(flip), Err(Error::NegativeOrientation(_))));
    }

    #[test]
    fn pairings_lie_on_their_faces() {
        let dims = BoxDims::new(1.3, 0.7, 2.1).unwrap();
        let pair = TetraPair::from_box(&dims);
        for p in edge_pairing() {
            let axis = p.face.axis();
            let level = p.face.sign() * dims.half(axis);
            let pts = [
                pair.fixed()[p.fixed[0]],
                pair.fixed()[p.fixed[1]],
                pair.moving_basic()[p.moving[0]],
                pair.moving_basic()[p.moving[1]],
            ];
            for q in pts {
                assert_eq!(q[axis], level, "{:?}", p.face);
            }
            let mut all: Vec<usize> = p.fixed.iter().chain(p.moving.iter()).copied().collect();
            all.sort();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
        // Spot checks from the table.
        assert_eq!(PAIRINGS[0].fixed, [2, 3]);
        assert_eq!(PAIRINGS[0].moving, [0, 1]);
        assert_eq!(PAIRINGS[2].fixed, [0, 3]);
        assert_eq!(PAIRINGS[2].moving, [1, 2]);
        assert_eq!(PAIRINGS[5].fixed, [0, 2]);
        assert_eq!(PAIRINGS[5].moving, [1, 3]);
    }

    #[test]
    fn top_face_residual_vanishes_for_any_box() {
        let pair = TetraPair::from_box(&BoxDims::new(0.4, 1.9, 1.1).unwrap());
        let p = pair.fixed();
        let q = pair.moving_basic();
        assert_eq!(coplanarity_residual(&p[2], &p[3], &q[0], &q[1]), 0.0);
    }

    #[test]
    fn identity_and_axis_rotation_are_admitted() {
        let pair = TetraPair::from_box(&BoxDims::new(0.8, 1.4, 2.0).unwrap());
        assert!(pair.residuals(&RigidMotion::identity()).is_zero(0.0));
        for phi in [0.3, 1.0, PI, 4.0] {
            let a = rotation_from_axis_angle(&AxisAngle::new(Vec3::z(), phi).unwrap());
            assert!(pair.residuals(&RigidMotion::pure_rotation(a)).is_zero(1e-12));
        }
    }

    #[test]
    fn random_motion_is_generically_not_admitted() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = TetraPair::from_box(&BoxDims::new(1.0, 1.5, 0.8).unwrap());
        for _ in 0..50 {
            assert!(pair.residuals(&random_motion(&mut rng)).max_abs() > 1e-6);
        }
    }

    #[test]
    fn conjugated_check_matches_direct_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let map = random_map(&mut rng);
            let pair = build_pair(&map);
            let m = random_motion(&mut rng);
            let direct = pair.residuals(&m);
            let conj = conjugated_motion_check(&map, &m);
            for k in 0..6 {
                assert!((conj.0[k] * map.det() - direct.0[k]).abs() < 1e-10 * (1.0 + direct.0[k].abs()));
                if direct.0[k].abs() > 1e-9 {
                    assert_eq!(conj.0[k].signum(), direct.0[k].signum());
                }
            }
        }
        let m = random_motion(&mut rng);
        let cube = ParallelepipedMap::cube();
        assert_eq!(
            conjugated_motion_check(&cube, &m),
            build_pair(&cube).residuals(&m)
        );
        assert!(conjugated_motion_check(&random_map(&mut rng), &RigidMotion::identity()).is_zero(1e-12));
    }

    #[test]
    fn basic_position_admitted_for_every_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let pair = build_pair(&random_map(&mut rng));
            assert!(pair.residuals(&RigidMotion::identity()).is_zero(1e-12));
        }
    }

    #[test]
    fn conjugated_equations_are_face_sums_and_differences() {
        // Row I/i is ε(r₋ − r₊)/8 and II/i is ε(r₊ + r₋)/8 on the faces normal
        // to axis i, with ε = (+, −, +) from the orientation of the table.
        let eps = [1.0, -1.0, 1.0];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let map = random_map(&mut rng);
            let m = random_motion(&mut rng);
            let r = conjugated_motion_check(&map, &m).0;
            let b0 = map.inverse() * m.translation;
            let eqs = conjugated_equations(&map, &m.rotation);
            for i in 0..3 {
                let (plus, minus) = faces_of_axis(i);
                let eval = |e: &ConjugatedEquation| {
                    e.coeffs[0] * b0[0] + e.coeffs[1] * b0[1] + e.coeffs[2] * b0[2] - e.rhs
                };
                assert_abs_diff_eq!(eval(&eqs[i]), eps[i] * (r[minus] - r[plus]) / 8.0, epsilon = 1e-10);
                assert_abs_diff_eq!(eval(&eqs[i + 3]), eps[i] * (r[plus] + r[minus]) / 8.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn ii_sum_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        assert_abs_diff_eq!(
            ii_sum_identity(&ParallelepipedMap::cube(), &AxisAngle::new(Vec3::x(), 1.0).unwrap()),
            0.0,
            epsilon = 1e-14
        );
        for _ in 0..1000 {
            let map = random_map(&mut rng);
            let aa = random_rotation(&mut rng);
            assert!(ii_sum_identity(&map, &aa).abs() < 1e-9);
            let b = map.inverse() * rotation_from_axis_angle(&aa).matrix() * map.matrix();
            let a = rotation_from_axis_angle(&aa);
            assert_abs_diff_eq!(b.trace(), a.matrix().trace(), epsilon = 1e-10);
            assert_abs_diff_eq!(principal_minor_sum(&b), principal_minor_sum(a.matrix()), epsilon = 1e-10);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn scaled_residuals_scale_as_lengths(
                d in prop::array::uniform3(0.3f64..3.0),
                seed in any::<u64>(),
                b in prop::array::uniform3(-2.0f64..2.0),
                factor in 0.1f64..10.0,
            ) {
                let dims = BoxDims::new(d[0], d[1], d[2]).unwrap();
                let rotation = RotationMatrix::random(&mut ChaCha8Rng::seed_from_u64(seed));
                let b = Vec3::from(b);
                let small = TetraPair::from_box(&dims).scaled_residuals(&RigidMotion::new(rotation, b));
                let large = TetraPair::from_box(&dims.scaled(factor).unwrap())
                    .scaled_residuals(&RigidMotion::new(rotation, b * factor));
                for k in 0..6 {
                    prop_assert!((small.0[k] * factor - large.0[k]).abs() < 1e-10 * (1.0 + large.0[k].abs()));
                }
            }

            #[test]
            fn identity_admitted_by_any_parallelepiped(
                m in prop::array::uniform9(-1.0f64..1.0),
            ) {
                let matrix = Matrix3::from_row_slice(&m) + Matrix3::identity() * 2.5;
                prop_assume!(matrix.determinant() > 0.1);
                let pair = build_pair(&ParallelepipedMap::new(matrix).unwrap());
                prop_assert!(pair.scaled_residuals(&RigidMotion::identity()).max_abs() < 1e-12);
            }
        }
    }
}
