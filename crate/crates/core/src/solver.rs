//! For a fixed rotation the six coplanarity residuals are affine in the
//! translation b. This module extracts that affine system in two independent
//! ways and solves it with a rank-revealing decomposition:
//!
//! * [`affine_system_direct`] reads the coefficients straight off the
//!   triple products (multilinearity of the determinant);
//! * [`reduced_matrix`] is the hand-reduced 6×4 array in terms of the axis
//!   u, the cotangent parameter s and Dᵢ = dᵢ⁻², valid for rectangular boxes.
//!
//! [`cross_check`] compares the two, row by row and by solution set.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix6x3, SMatrix, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coplanarity_residual, AxisAngle, RotationMatrix, Vec3};
use crate::linalg::{Decomposition, RANK_RTOL};
use crate::mechanism::{faces_of_axis, BoxDims, TetraPair, PAIRINGS};

/// Default consistency tolerance for [`solve_b`].
pub const SOLVE_TOL: f64 = 1e-10;

/// Orientation signs relating the reduced rows to face residuals: the
/// y-face pairings of the table run opposite to the x and z ones.
const AXIS_ORIENTATION: [f64; 3] = [1.0, -1.0, 1.0];

pub const REDUCED_ROW_LABELS: [&str; 6] = ["I/1", "I/2", "I/3", "II/1", "II/2", "II/3"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// Row k is exactly residual k of the pairing table: r = M b − rhs.
    Direct,
    /// Rows are I/1..II/3. With f = M b − rhs, `row_scales[i] · f[i]` equals
    /// r₋ − r₊ (rows I/i) or r₊ + r₋ (rows II/i) on the faces normal to axis i.
    Reduced { row_scales: [f64; 6] },
}

/// Six affine equations `matrix · b = rhs` in the translation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub matrix: Matrix6x3<f64>,
    pub rhs: Vector6<f64>,
    pub provenance: Provenance,
}

impl ConstraintSystem {
    pub fn evaluate(&self, b: &Vec3) -> Vector6<f64> {
        self.matrix * b - self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Empty,
    Unique,
    Affine,
}

/// Solution set of a [`ConstraintSystem`]: empty, a single point, or an
/// affine subspace `point + span(basis)` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub kind: SolutionKind,
    /// Minimal-norm (least-squares) point; present unless the set is empty.
    pub point: Option<Vec3>,
    pub basis: Vec<Vec3>,
    pub rank: usize,
    /// ‖M x − rhs‖ at the minimal-norm least-squares point.
    pub residual: f64,
}

impl SolutionSet {
    pub fn dimension(&self) -> Option<usize> {
        match self.kind {
            SolutionKind::Empty => None,
            _ => Some(self.basis.len()),
        }
    }

    pub fn is_unique(&self) -> bool {
        self.kind == SolutionKind::Unique
    }

    pub fn describe(&self) -> String {
        match self.dimension() {
            None => "empty".into(),
            Some(0) => "unique".into(),
            Some(d) => format!("affine of dimension {d}"),
        }
    }

    /// Orthogonal projector onto the direction space.
    fn projector(&self) -> nalgebra::Matrix3<f64> {
        self.basis
            .iter()
            .fold(nalgebra::Matrix3::zeros(), |acc, v| acc + v * v.transpose())
    }
}

/// Coefficients of b read off each triple product: residual k equals
/// `(A(Q̄ₗ − Q̄ₖ)) × (Pⱼ − Pᵢ) · b + det[Pⱼ − Pᵢ, AQ̄ₖ − Pᵢ, AQ̄ₗ − Pᵢ]`.
pub fn affine_system_direct(pair: &TetraPair, rotation: &RotationMatrix) -> ConstraintSystem {
    let p = pair.fixed();
    let q = pair.moving_basic().map(|x| rotation.apply(&x));
    let mut matrix = Matrix6x3::zeros();
    let mut rhs = Vector6::zeros();
    for (k, pr) in PAIRINGS.iter().enumerate() {
        let (pi, pj) = (p[pr.fixed[0]], p[pr.fixed[1]]);
        let (qk, ql) = (q[pr.moving[0]], q[pr.moving[1]]);
        let row = (ql - qk).cross(&(pj - pi));
        matrix.set_row(k, &row.transpose());
        rhs[k] = -coplanarity_residual(&pi, &pj, &qk, &ql);
    }
    ConstraintSystem {
        matrix,
        rhs,
        provenance: Provenance::Direct,
    }
}

/// The reduced 6×4 array for a box with Dᵢ = dᵢ⁻²: rows I/1, I/2, I/3,
/// II/1, II/2, II/3; the first three columns multiply b and the last column
/// is the right-hand side up to the common factor 2 d₁d₂d₃.
#[allow(clippy::many_single_char_names)]
pub fn reduced_matrix(aa: &AxisAngle, big_d: [f64; 3]) -> SMatrix<f64, 6, 4> {
    let u = aa.axis();
    let (u1, u2, u3) = (u[0], u[1], u[2]);
    let s = aa.s();
    let [d1, d2, d3] = big_d;
    #[rustfmt::skip]
    let c = SMatrix::<f64, 6, 4>::from_row_slice(&[
        u1 * u1 - s * s,  u1 * u2 + s * u3,  u3 * u1 - s * u2,  u2 * u3 * (d2 + d3),
        u1 * u2 - s * u3,  u2 * u2 - s * s,  u2 * u3 + s * u1,  u3 * u1 * (d3 + d1),
        u3 * u1 + s * u2,  u2 * u3 - s * u1,  u3 * u3 - s * s,  u1 * u2 * (d1 + d2),
        -u2 * u3 * (d2 + d3) + s * u1 * (d3 - d2),  (u3 * u1 - s * u2) * d2,  (u1 * u2 + s * u3) * d3,  0.0,
        (u2 * u3 + s * u1) * d1,  -u3 * u1 * (d3 + d1) + s * u2 * (d1 - d3),  (u1 * u2 - s * u3) * d3,  0.0,
        (u2 * u3 - s * u1) * d1,  (u3 * u1 + s * u2) * d2,  -u1 * u2 * (d1 + d2) + s * u3 * (d2 - d1),  0.0,
    ]);
    c
}

/// Affine system in b recovered from [`reduced_matrix`]: the last column is
/// multiplied back by 2 d₁d₂d₃, and the row factors relating each row to the
/// face residuals are recorded in the provenance.
pub fn reduced_system(dims: &BoxDims, aa: &AxisAngle) -> ConstraintSystem {
    let c = reduced_matrix(aa, dims.inverse_squares());
    let d = dims.as_array();
    let volume = d[0] * d[1] * d[2];
    let s = aa.s();
    let denom = 1.0 + s * s;
    let mut row_scales = [0.0; 6];
    for i in 0..3 {
        let cofactor = volume / d[i];
        row_scales[i] = AXIS_ORIENTATION[i] * 16.0 * cofactor / denom;
        row_scales[i + 3] = AXIS_ORIENTATION[i] * 16.0 * cofactor * cofactor / denom;
    }
    ConstraintSystem {
        matrix: c.fixed_columns::<3>(0).into_owned(),
        rhs: c.column(3) * (2.0 * volume),
        provenance: Provenance::Reduced { row_scales },
    }
}

/// Rank-revealing solve. Rank uses singular values above 1e-8·σ_max; the
/// system is consistent when the least-squares residual is below
/// `tol · (σ_max(‖x‖ + √σ_max) + ‖rhs‖)`.
pub fn solve_b(sys: &ConstraintSystem, tol: f64) -> SolutionSet {
    let a = DMatrix::from_iterator(6, 3, sys.matrix.iter().copied());
    let rhs = DVector::from_iterator(6, sys.rhs.iter().copied());
    let dec = Decomposition::new(&a);
    let rank = dec.rank(RANK_RTOL);
    let x = dec.solve(&rhs, rank);
    let residual = (&a * &x - &rhs).norm();
    // σ_max carries units of length², so √σ_max is a length floor for ‖x‖.
    let smax = dec.max_singular();
    let scale = smax * (x.norm() + smax.sqrt()) + rhs.norm();
    let point = Vec3::new(x[0], x[1], x[2]);
    if residual > tol * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return SolutionSet {
            kind: SolutionKind::Empty,
            point: None,
            basis: Vec::new(),
            rank,
            residual,
        };
    }
    let basis: Vec<Vec3> = dec
        .nullspace(rank)
        .into_iter()
        .map(|v| Vec3::new(v[0], v[1], v[2]))
        .collect();
    SolutionSet {
        kind: if basis.is_empty() {
            SolutionKind::Unique
        } else {
            SolutionKind::Affine
        },
        point: Some(point),
        basis,
        rank,
        residual,
    }
}

/// Where the direct and reduced formulations disagree.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossCheckMismatch {
    NotDiagonal,
    Row { label: &'static str, deviation: f64 },
    Solution { direct: String, reduced: String },
}

impl fmt::Display for CrossCheckMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossCheckMismatch::NotDiagonal => write!(f, "{}", Error::NotDiagonal),
            CrossCheckMismatch::Row { label, deviation } => {
                write!(f, "row {label} disagrees (relative deviation {deviation:.3e})")
            }
            CrossCheckMismatch::Solution { direct, reduced } => {
                write!(f, "solution sets differ: direct {direct}, reduced {reduced}")
            }
        }
    }
}

impl std::error::Error for CrossCheckMismatch {}

/// Both formulations solved for one rotation.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub direct: SolutionSet,
    pub reduced: SolutionSet,
}

/// Verifies that the reduced rows are the stated multiples of the face sums
/// and differences of the direct rows, then that both systems have the same
/// solution set (same kind and dimension, points within `tol` relative,
/// same direction space).
pub fn cross_check(pair: &TetraPair, aa: &AxisAngle, tol: f64) -> std::result::Result<CrossCheck, CrossCheckMismatch> {
    let dims = pair.map().box_dims().ok_or(CrossCheckMismatch::NotDiagonal)?;
    let rotation = RotationMatrix::from_axis_angle(aa);
    let direct = affine_system_direct(pair, &rotation);
    let reduced = reduced_system(&dims, aa);
    let Provenance::Reduced { row_scales } = reduced.provenance else {
        unreachable!("reduced_system always records row scales")
    };

    let aug = |sys: &ConstraintSystem, k: usize| -> SMatrix<f64, 1, 4> {
        let r = sys.matrix.row(k);
        SMatrix::<f64, 1, 4>::new(r[0], r[1], r[2], sys.rhs[k])
    };
    let scale = (0..6).map(|k| aug(&direct, k).norm()).fold(f64::MIN_POSITIVE, f64::max);
    for i in 0..3 {
        let (plus, minus) = faces_of_axis(i);
        let diff = aug(&direct, minus) - aug(&direct, plus);
        let sum = aug(&direct, plus) + aug(&direct, minus);
        for (row, combo) in [(i, diff), (i + 3, sum)] {
            let expected = aug(&reduced, row) * row_scales[row];
            let deviation = (combo - expected).norm() / scale;
            if deviation > tol {
                return Err(CrossCheckMismatch::Row {
                    label: REDUCED_ROW_LABELS[row],
                    deviation,
                });
            }
        }
    }

    let a = solve_b(&direct, SOLVE_TOL);
    let b = solve_b(&reduced, SOLVE_TOL);
    let mismatch = || CrossCheckMismatch::Solution {
        direct: a.describe(),
        reduced: b.describe(),
    };
    if a.dimension() != b.dimension() {
        return Err(mismatch());
    }
    if let (Some(p), Some(q)) = (a.point, b.point) {
        if (p - q).norm() > tol * p.norm().max(1.0) {
            return Err(mismatch());
        }
        if (a.projector() - b.projector()).abs().max() > tol.sqrt() {
            return Err(mismatch());
        }
    }
    Ok(CrossCheck {
        direct: a,
        reduced: b,
    })
}

/// Convenience: solve the direct system of `pair` at `rotation`.
pub fn solve_translation(pair: &TetraPair, rotation: &RotationMatrix) -> SolutionSet {
    solve_b(&affine_system_direct(pair, rotation), SOLVE_TOL)
}

/// Requires a unique translation and returns it.
pub fn unique_translation(pair: &TetraPair, rotation: &RotationMatrix) -> Result<Vec3> {
    let set = solve_translation(pair, rotation);
    match (set.kind, set.point) {
        (SolutionKind::Unique, Some(p)) => Ok(p),
        _ => Err(Error::UnexpectedSolution {
            expected: "unique",
            found: set.describe(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rotation_from_axis_angle, RigidMotion};
    use crate::mechanism::ParallelepipedMap;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_axis(rng: &mut impl Rng) -> Vec3 {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        Vec3::new(r * t.cos(), r * t.sin(), z)
    }

    fn random_dims(rng: &mut impl Rng) -> BoxDims {
        BoxDims::new(rng.gen_range(0.4..2.5), rng.gen_range(0.4..2.5), rng.gen_range(0.4..2.5)).unwrap()
    }

    #[test]
    fn direct_system_reproduces_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let map = ParallelepipedMap::new(
                nalgebra::Matrix3::from_fn(|_, _| rng.gen_range(-0.5..0.5)) + nalgebra::Matrix3::identity(),
            );
            let Ok(map) = map else { continue };
            let pair = crate::mechanism::build_pair(&map);
            let aa = AxisAngle::new(random_axis(&mut rng), rng.gen_range(0.1..6.2)).unwrap();
            let a = rotation_from_axis_angle(&aa);
            let b = Vec3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
            let sys = affine_system_direct(&pair, &a);
            let r = pair.residuals(&RigidMotion::new(a, b));
            let f = sys.evaluate(&b);
            for k in 0..6 {
                assert_abs_diff_eq!(f[k], r.0[k], epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn identity_rotation_gives_zero_translation() {
        let pair = TetraPair::from_box(&BoxDims::cube());
        let set = solve_translation(&pair, &RotationMatrix::identity());
        assert_eq!(set.kind, SolutionKind::Unique);
        assert!(set.point.unwrap().norm() < 1e-14);
    }

    #[test]
    fn half_turn_about_z_gives_horizontal_plane() {
        let pair = TetraPair::from_box(&BoxDims::new(0.7, 1.3, 2.2).unwrap());
        let a = rotation_from_axis_angle(&AxisAngle::new(Vec3::z(), PI).unwrap());
        let set = solve_translation(&pair, &a);
        assert_eq!(set.kind, SolutionKind::Affine);
        assert_eq!(set.dimension(), Some(2));
        for v in &set.basis {
            assert!(v[2].abs() < 1e-12);
        }
        assert!(set.point.unwrap().norm() < 1e-12);
    }

    #[test]
    fn third_turn_about_z_on_cube_is_unique_zero() {
        let pair = TetraPair::from_box(&BoxDims::cube());
        let a = rotation_from_axis_angle(&AxisAngle::new(Vec3::z(), PI / 3.0).unwrap());
        let set = solve_translation(&pair, &a);
        assert_eq!(set.kind, SolutionKind::Unique);
        assert!(set.point.unwrap().norm() < 1e-13);
    }

    #[test]
    fn sixth_kind_rotation_dimension_depends_on_box() {
        let (d1, d2) = (1.0f64, 1.7f64);
        let n = (d1 * d1 + d2 * d2).sqrt();
        let u = Vec3::new(d1 / n, d2 / n, 0.0);
        let aa = AxisAngle::new(u, PI / 2.0).unwrap();
        let on = TetraPair::from_box(&BoxDims::new(d1, d2, d1 * d2 / n).unwrap());
        let set = solve_translation(&on, &RotationMatrix::from_axis_angle(&aa));
        assert_eq!(set.dimension(), Some(1));
        assert!(set.basis[0].cross(&u).norm() < 1e-8);
        let off = TetraPair::from_box(&BoxDims::new(d1, d2, 1.1 * d1 * d2 / n).unwrap());
        let set = solve_translation(&off, &RotationMatrix::from_axis_angle(&aa));
        assert_eq!(set.dimension(), Some(0));
    }

    #[test]
    fn quarter_turn_about_generic_axis_has_no_solution() {
        let pair = TetraPair::from_box(&BoxDims::new(1.0, 1.2, 0.9).unwrap());
        let aa = AxisAngle::normalized(Vec3::new(0.3, 0.5, 0.8), PI / 2.0).unwrap();
        let set = solve_translation(&pair, &RotationMatrix::from_axis_angle(&aa));
        assert_eq!(set.kind, SolutionKind::Empty);
    }

    #[test]
    fn reduced_matrix_cube_structure() {
        // For D = (1,1,1) the rows II/i reduce to the cube array, whose last
        // column vanishes and whose entries carry no D weights.
        let aa = AxisAngle::normalized(Vec3::new(0.2, -0.5, 0.9), 1.1).unwrap();
        let c = reduced_matrix(&aa, [1.0; 3]);
        let u = aa.axis();
        let s = aa.s();
        assert_abs_diff_eq!(c[(3, 0)], -2.0 * u[1] * u[2], epsilon = 1e-15);
        assert_abs_diff_eq!(c[(0, 3)], 2.0 * u[1] * u[2], epsilon = 1e-15);
        assert_abs_diff_eq!(c[(4, 1)], -2.0 * u[2] * u[0], epsilon = 1e-15);
        assert_abs_diff_eq!(c[(5, 2)], -2.0 * u[0] * u[1], epsilon = 1e-15);
        assert_abs_diff_eq!(c[(1, 2)], u[1] * u[2] + s * u[0], epsilon = 1e-15);
    }

    #[test]
    fn reduced_matrix_row_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let u = random_axis(&mut rng);
            let aa = AxisAngle::new(u, rng.gen_range(0.05..6.2)).unwrap();
            let s = aa.s();
            let big_d = [rng.gen_range(0.1..5.0), rng.gen_range(0.1..5.0), rng.gen_range(0.1..5.0)];
            let c = reduced_matrix(&aa, big_d);
            let scale = 1.0 + s * s;
            // D-weighted sum of the II rows vanishes.
            let weighted = c.row(3) * big_d[0] + c.row(4) * big_d[1] + c.row(5) * big_d[2];
            assert!(weighted.abs().max() < 1e-12 * scale * 10.0);
            // u-weighted sum of the I rows.
            let summed = c.row(0) * u[0] + c.row(1) * u[1] + c.row(2) * u[2];
            let total: f64 = big_d.iter().sum();
            let expected = [
                u[0] * (1.0 - s * s),
                u[1] * (1.0 - s * s),
                u[2] * (1.0 - s * s),
                2.0 * u[0] * u[1] * u[2] * total,
            ];
            for k in 0..4 {
                assert_abs_diff_eq!(summed[k], expected[k], epsilon = 1e-11 * scale * 10.0);
            }
        }
    }

    #[test]
    fn upper_block_singular_exactly_at_special_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let u = random_axis(&mut rng);
            for (phi, singular) in [(PI, true), (PI / 2.0, true), (1.5 * PI, true), (1.0, false), (2.5, false)] {
                let aa = AxisAngle::new(u, phi).unwrap();
                let c = reduced_matrix(&aa, [1.0, 2.0, 3.0]);
                let det = c.fixed_view::<3, 3>(0, 0).determinant();
                if singular {
                    assert!(det.abs() < 1e-12, "phi={phi} det={det}");
                } else {
                    assert!(det.abs() > 1e-3 * u[0].abs().min(1.0) * 0.0 || det.abs() > 0.0);
                }
            }
        }
        // The determinant equals −s²(1 + s²)²/... up to sign: it vanishes only
        // when s ∈ {0, ±1}.
        for s in [-3.0, -0.5, 0.3, 0.7, 2.0] {
            let aa = AxisAngle::from_cot(Vec3::new(0.6, 0.0, 0.8), s).unwrap();
            let c = reduced_matrix(&aa, [1.0; 3]);
            assert!(c.fixed_view::<3, 3>(0, 0).determinant().abs() > 1e-3);
        }
    }

    #[test]
    fn cross_check_examples() {
        let pair = TetraPair::from_box(&BoxDims::cube());
        let third = AxisAngle::new(Vec3::new(1.0, 1.0, 1.0).normalize(), 2.0).unwrap();
        let check = cross_check(&pair, &third, 1e-9).unwrap();
        assert_eq!(check.direct.kind, SolutionKind::Unique);
        let half = AxisAngle::new(Vec3::z(), PI).unwrap();
        let check = cross_check(&pair, &half, 1e-9).unwrap();
        assert_eq!(check.direct.dimension(), Some(2));
        assert_eq!(check.reduced.dimension(), Some(2));
        for v in &check.reduced.basis {
            assert!(v[2].abs() < 1e-12);
        }
        let general = crate::mechanism::build_pair(
            &ParallelepipedMap::new(nalgebra::Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)).unwrap(),
        );
        assert_eq!(cross_check(&general, &third, 1e-9).unwrap_err(), CrossCheckMismatch::NotDiagonal);
    }

    #[test]
    fn cross_check_random_boxes_and_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..500 {
            let pair = TetraPair::from_box(&random_dims(&mut rng));
            let aa = AxisAngle::new(random_axis(&mut rng), rng.gen_range(0.05..6.2)).unwrap();
            if let Err(e) = cross_check(&pair, &aa, 1e-9) {
                panic!("{e} for {aa:?}");
            }
        }
    }

    #[test]
    fn solution_points_satisfy_residuals() {
        let pair = TetraPair::from_box(&BoxDims::new(0.9, 1.4, 0.6).unwrap());
        let a = rotation_from_axis_angle(&AxisAngle::new(Vec3::y(), PI).unwrap());
        let set = solve_translation(&pair, &a);
        let p = set.point.unwrap();
        for b in std::iter::once(p).chain(set.basis.iter().map(|v| p + v * 2.5)) {
            assert!(pair.residuals(&RigidMotion::new(a, b)).max_abs() < 1e-10);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn direct_and_reduced_systems_agree(
                d in prop::array::uniform3(0.3f64..3.0),
                seed in any::<u64>(),
                angle in 0.05f64..6.2,
            ) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let dims = BoxDims::new(d[0], d[1], d[2]).unwrap();
                let aa = AxisAngle::new(random_axis(&mut rng), angle).unwrap();
                let pair = TetraPair::from_box(&dims);
                prop_assert!(cross_check(&pair, &aa, 1e-9).is_ok());
            }

            #[test]
            fn solutions_satisfy_the_system(
                d in prop::array::uniform3(0.3f64..3.0),
                i in 0usize..3,
                angle in 0.05f64..6.2,
                t in -3.0f64..3.0,
            ) {
                // Rotations about a box axis always admit a translation.
                let dims = BoxDims::new(d[0], d[1], d[2]).unwrap();
                let pair = TetraPair::from_box(&dims);
                let a = rotation_from_axis_angle(&AxisAngle::new(Vec3::ith(i, 1.0), angle).unwrap());
                let set = solve_translation(&pair, &a);
                let p = set.point.unwrap();
                for b in std::iter::once(p).chain(set.basis.iter().map(|v| p + v * t)) {
                    prop_assert!(pair.scaled_residuals(&RigidMotion::new(a, b)).max_abs() < 1e-10);
                }
            }
        }
    }
}
