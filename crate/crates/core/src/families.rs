//! Closed-form generators for the motion kinds of the tetrahedron pair in a
//! rectangular box, and a classifier mapping an admitted motion back to the
//! smallest family that contains it.
//!
//! Axis indices in this module's public API are 1-based (1 = x, 2 = y, 3 = z).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_from_cot, rotation_from_axis_angle, AxisAngle, RigidMotion, RotationMatrix, Vec3};
use crate::mechanism::{BoxDims, TetraPair};
use crate::solver::{solve_translation, unique_translation, SolutionKind};

/// Relative tolerance of [`sixth_kind_condition`].
pub const SIXTH_KIND_RTOL: f64 = 1e-12;

/// An admitted motion's family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MotionKind {
    Identity,
    /// Rotation about a coordinate axis, b = 0. `angle` ∈ (0, 2π).
    First { axis: usize, angle: f64 },
    /// Rotation about a unit axis `coeffs[0] e_a + coeffs[1] e_b` in a
    /// coordinate plane, unique translation.
    Intermediate {
        axes: [usize; 2],
        coeffs: [f64; 2],
        angle: f64,
        translation: [f64; 3],
    },
    /// Rotation from the third-kind axis law at parameter s with orthant
    /// `signs`, unique translation.
    Third {
        s: f64,
        signs: [i8; 3],
        translation: [f64; 3],
    },
    /// Half turn about e_axis with b = shift · e_along.
    Fourth { axis: usize, along: usize, shift: f64 },
    /// Half turn about e_axis with b in the perpendicular coordinate plane;
    /// `shift` lists the components along the other two axes in increasing
    /// index order.
    Fifth { axis: usize, shift: [f64; 2] },
    /// Quarter turn about a face diagonal, b = b₀ + t·u on the solution line.
    Sixth {
        short_axis: usize,
        diagonal: i8,
        sense: i8,
        t: f64,
    },
}

impl MotionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MotionKind::Identity => "identity",
            MotionKind::First { .. } => "first",
            MotionKind::Intermediate { .. } => "intermediate",
            MotionKind::Third { .. } => "third",
            MotionKind::Fourth { .. } => "fourth",
            MotionKind::Fifth { .. } => "fifth",
            MotionKind::Sixth { .. } => "sixth",
        }
    }
}

/// Parameters of a feasible third-kind axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThirdKindParams {
    pub s: f64,
    pub signs: [i8; 3],
    pub axis: Vec3,
    /// Common value of the per-axis ratios eliminated from the axis law.
    pub lambda: f64,
}

impl ThirdKindParams {
    pub fn axis_angle(&self) -> AxisAngle {
        AxisAngle::new(self.axis, angle_from_cot(self.s)).expect("unit axis and angle in (0, 2π)")
    }

    pub fn rotation(&self) -> RotationMatrix {
        rotation_from_axis_angle(&self.axis_angle())
    }
}

/// Outcome of [`third_kind_axis`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ThirdKindAxis {
    Feasible(ThirdKindParams),
    /// Some squared component is not strictly positive.
    Infeasible { s: f64, u_squared: [f64; 3] },
    /// s = ±1 admits no third-kind motion.
    ExcludedAngle { s: f64 },
}

impl ThirdKindAxis {
    pub fn feasible(self) -> Option<ThirdKindParams> {
        match self {
            ThirdKindAxis::Feasible(p) => Some(p),
            _ => None,
        }
    }
}

pub(crate) fn axis_slot(i: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::InvalidAxes(vec![i]))
    }
}

fn check_signs(signs: [i8; 3]) -> Result<()> {
    if signs.iter().all(|s| *s == 1 || *s == -1) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("orthant signs must be ±1, got {signs:?}")))
    }
}

/// The two coordinate slots other than `k`, increasing.
fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Rotation by any real angle about a unit axis; multiples of 2π give the
/// identity.
fn rotation_about(axis: Vec3, phi: f64) -> RotationMatrix {
    let phi = phi.rem_euclid(TAU);
    match AxisAngle::new(axis, phi) {
        Ok(aa) => rotation_from_axis_angle(&aa),
        Err(_) => RotationMatrix::identity(),
    }
}

/// Rotation by `phi` about e_i with b = 0.
pub fn first_kind(i: usize, phi: f64) -> Result<RigidMotion> {
    let slot = axis_slot(i)?;
    Ok(RigidMotion::pure_rotation(rotation_about(Vec3::ith(slot, 1.0), phi)))
}

/// Rotation by `phi` about the normalized axis `c1 e_i + c2 e_j` with the
/// unique admissible translation.
pub fn intermediate_kind(dims: &BoxDims, i: usize, j: usize, c1: f64, c2: f64, phi: f64) -> Result<RigidMotion> {
    let (a, b) = (axis_slot(i)?, axis_slot(j)?);
    if a == b {
        return Err(Error::InvalidAxes(vec![i, j]));
    }
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let phi = phi.rem_euclid(TAU);
    if (phi - PI).abs() < 1e-12 {
        return Err(Error::HalfTurnExcluded);
    }
    if phi == 0.0 {
        return Err(Error::AngleOutOfRange(phi));
    }
    let mut axis = Vec3::zeros();
    axis[a] = c1;
    axis[b] = c2;
    let aa = AxisAngle::normalized(axis, phi)?;
    let rotation = rotation_from_axis_angle(&aa);
    let b = unique_translation(&TetraPair::from_box(dims), &rotation)?;
    Ok(RigidMotion::new(rotation, b))
}

/// Squared axis components forced by the third-kind law at parameter s:
/// u_i² = ½[(1 + s²) − (1 + 3s²)·D_i/ΣD].
///
/// The law comes from the rank condition on rows I/1–I/3 plus one II/i row
/// of the reduced matrix: for s·u₁u₂u₃ ≠ 0 the quantities
/// (s² + Σu² − 2u_i²)/D_i must agree for i = 1, 2, 3.
pub fn third_kind_u_squared(dims: &BoxDims, s: f64) -> [f64; 3] {
    let big_d = dims.inverse_squares();
    let total: f64 = big_d.iter().sum();
    let s2 = s * s;
    big_d.map(|d| 0.5 * ((1.0 + s2) - (1.0 + 3.0 * s2) * d / total))
}

/// The third-kind rotation axis at parameter s in the orthant `signs`.
pub fn third_kind_axis(dims: &BoxDims, s: f64, signs: [i8; 3]) -> Result<ThirdKindAxis> {
    check_signs(signs)?;
    if !s.is_finite() {
        return Err(Error::Invalid(format!("s must be finite, got {s}")));
    }
    if ((s * s) - 1.0).abs() < 1e-12 {
        return Ok(ThirdKindAxis::ExcludedAngle { s });
    }
    let u_squared = third_kind_u_squared(dims, s);
    if u_squared.iter().any(|x| *x <= 0.0) {
        return Ok(ThirdKindAxis::Infeasible { s, u_squared });
    }
    let mut axis = Vec3::from_fn(|i, _| f64::from(signs[i]) * u_squared[i].sqrt());
    // Renormalize away the last ulp so the axis passes the unit check.
    axis /= axis.norm();
    let s2 = s * s;
    let total: f64 = dims.inverse_squares().iter().sum();
    let lambda = (1.0 + 3.0 * s2) / total;
    Ok(ThirdKindAxis::Feasible(ThirdKindParams { s, signs, axis, lambda }))
}

/// Third-kind motion at parameter s: axis from [`third_kind_axis`], unique
/// translation from the solver.
pub fn third_kind(dims: &BoxDims, s: f64, signs: [i8; 3]) -> Result<RigidMotion> {
    let params = match third_kind_axis(dims, s, signs)? {
        ThirdKindAxis::Feasible(p) => p,
        ThirdKindAxis::Infeasible { u_squared, .. } => {
            return Err(Error::ThirdKindInfeasible {
                s,
                reason: format!("squared axis components {u_squared:?} not all positive"),
            })
        }
        ThirdKindAxis::ExcludedAngle { .. } => {
            return Err(Error::ThirdKindInfeasible {
                s,
                reason: "s = ±1 admits no third-kind motion".into(),
            })
        }
    };
    let rotation = params.rotation();
    let b = unique_translation(&TetraPair::from_box(dims), &rotation)?;
    Ok(RigidMotion::new(rotation, b))
}

/// Half turn about e_i with b = c1 e_j + c2 e_k, where j < k are the other
/// two axes. `c2 = 0` is the fourth kind.
pub fn fifth_kind(i: usize, c1: f64, c2: f64) -> Result<RigidMotion> {
    let slot = axis_slot(i)?;
    let (j, k) = others(slot);
    let mut b = Vec3::zeros();
    b[j] = c1;
    b[k] = c2;
    Ok(RigidMotion::new(rotation_about(Vec3::ith(slot, 1.0), PI), b))
}

/// Whether d_k equals d_i d_j / √(d_i² + d_j²) to relative 1e-12.
pub fn sixth_kind_condition(dims: &BoxDims, k: usize) -> Result<bool> {
    let slot = axis_slot(k)?;
    let (i, j) = others(slot);
    let d = dims.as_array();
    let target = d[i] * d[j] / d[i].hypot(d[j]);
    Ok((d[slot] - target).abs() <= SIXTH_KIND_RTOL * target)
}

/// Unit face-diagonal axis (d_i e_i + diagonal·d_j e_j)/√(d_i²+d_j²) for
/// short axis k.
pub fn sixth_kind_axis(dims: &BoxDims, k: usize, diagonal: i8) -> Result<Vec3> {
    let slot = axis_slot(k)?;
    if diagonal != 1 && diagonal != -1 {
        return Err(Error::Invalid(format!("diagonal sign must be ±1, got {diagonal}")));
    }
    let (i, j) = others(slot);
    let d = dims.as_array();
    let mut u = Vec3::zeros();
    u[i] = d[i];
    u[j] = f64::from(diagonal) * d[j];
    Ok(u / u.norm())
}

/// Quarter turn (sense +1: φ = π/2, sense −1: φ = 3π/2) about a face
/// diagonal of the faces normal to axis k, with b = b₀ + t·u where b₀ is the
/// minimal-norm admissible translation.
pub fn sixth_kind(dims: &BoxDims, k: usize, diagonal: i8, sense: i8, t: f64) -> Result<RigidMotion> {
    if sense != 1 && sense != -1 {
        return Err(Error::Invalid(format!("sense must be ±1, got {sense}")));
    }
    if !sixth_kind_condition(dims, k)? {
        return Err(Error::SixthKindCondition { k });
    }
    let u = sixth_kind_axis(dims, k, diagonal)?;
    let phi = if sense > 0 { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 };
    let rotation = rotation_from_axis_angle(&AxisAngle::new(u, phi)?);
    let set = solve_translation(&TetraPair::from_box(dims), &rotation);
    match (set.kind, set.point, set.basis.as_slice()) {
        (SolutionKind::Affine, Some(b0), [_]) => Ok(RigidMotion::new(rotation, b0 + u * t)),
        _ => Err(Error::UnexpectedSolution {
            expected: "one-dimensional",
            found: set.describe(),
        }),
    }
}

/// Tolerances for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyTol {
    /// Bound on the scaled residuals for the motion to count as admitted.
    pub residual: f64,
    /// Angle tolerance (radians) for the identity, half and quarter turns.
    pub angle: f64,
    /// Tolerance on axis components and on the third-kind axis law.
    pub axis: f64,
    /// Translation tolerance relative to the largest half-dimension.
    pub translation: f64,
}

impl Default for ClassifyTol {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            angle: 1e-9,
            axis: 1e-9,
            translation: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Classification {
    Kind(MotionKind),
    NotAMotion { max_residual: f64 },
    Unclassified { reason: String },
}

impl Classification {
    pub fn kind(&self) -> Option<&MotionKind> {
        match self {
            Classification::Kind(k) => Some(k),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Kind(k) => k.tag(),
            Classification::NotAMotion { .. } => "not_a_motion",
            Classification::Unclassified { .. } => "unclassified",
        }
    }
}

/// Canonical axis-angle: the first clearly nonzero axis component is
/// positive, angle in (0, 2π).
fn canonical_axis_angle(rotation: &RotationMatrix, tol: &ClassifyTol) -> Option<AxisAngle> {
    let aa = rotation.to_axis_angle(tol.angle)?;
    let u = aa.axis();
    let lead = (0..3).find(|&i| u[i].abs() > tol.axis).unwrap_or(0);
    Some(if u[lead] < 0.0 { aa.flipped() } else { aa })
}

fn sign_of(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Names the smallest family containing `m`. Families are tested from the
/// most specific: Identity, Sixth, Third, Fourth/Fifth, First/Intermediate.
/// A half turn about a coordinate axis is First when b = 0, Fourth when b
/// has one nonzero component and Fifth otherwise.
pub fn classify(pair: &TetraPair, m: &RigidMotion, tol: &ClassifyTol) -> Classification {
    let max_residual = pair.scaled_residuals(m).max_abs();
    if !(max_residual <= tol.residual) {
        return Classification::NotAMotion { max_residual };
    }
    let Some(aa) = canonical_axis_angle(&m.rotation, tol) else {
        return Classification::Kind(MotionKind::Identity);
    };
    let Some(dims) = pair.map().box_dims() else {
        return Classification::Unclassified {
            reason: "families are defined for rectangular boxes only".into(),
        };
    };
    let d = dims.as_array();
    let length = d.iter().copied().fold(0.0, f64::max);
    let b = m.translation;
    let b_tol = tol.translation * length.max(1.0);
    let u = aa.axis();
    let phi = aa.angle();
    let zero: Vec<usize> = (0..3).filter(|&i| u[i].abs() <= tol.axis).collect();
    let half_turn = (phi - PI).abs() <= tol.angle;
    let quarter_turn = (phi - FRAC_PI_2).abs() <= tol.angle || (phi - 3.0 * FRAC_PI_2).abs() <= tol.angle;

    if quarter_turn && zero.len() == 1 {
        let k = zero[0];
        if sixth_kind_condition(&dims, k + 1).unwrap_or(false) {
            let (i, j) = others(k);
            let diagonal = sign_of(u[i] * u[j]);
            let expected = sixth_kind_axis(&dims, k + 1, diagonal).expect("valid slot and sign");
            if (u - expected).norm() <= tol.axis * 10.0 {
                let sense = if phi < PI { 1 } else { -1 };
                return Classification::Kind(MotionKind::Sixth {
                    short_axis: k + 1,
                    diagonal,
                    sense,
                    t: b.dot(&u),
                });
            }
        }
    }

    if zero.is_empty() {
        let s = aa.s();
        if half_turn || ((s * s) - 1.0).abs() > tol.angle {
            let expected = third_kind_u_squared(&dims, s);
            let scale = 1.0 + s * s;
            if (0..3).all(|i| (u[i] * u[i] - expected[i]).abs() <= tol.axis * scale) {
                return Classification::Kind(MotionKind::Third {
                    s: if half_turn { 0.0 } else { s },
                    signs: [sign_of(u[0]), sign_of(u[1]), sign_of(u[2])],
                    translation: b.into(),
                });
            }
        }
        return Classification::Unclassified {
            reason: format!("general axis {u:?} at angle {phi} matches no family"),
        };
    }

    if zero.len() == 2 {
        let i = (0..3).find(|i| !zero.contains(i)).expect("one nonzero component");
        if half_turn && b.norm() > b_tol {
            if b[i].abs() > b_tol {
                return Classification::Unclassified {
                    reason: format!("half turn about axis {} with axial translation {}", i + 1, b[i]),
                };
            }
            let (j, k) = others(i);
            return Classification::Kind(match (b[j].abs() > b_tol, b[k].abs() > b_tol) {
                (true, false) => MotionKind::Fourth {
                    axis: i + 1,
                    along: j + 1,
                    shift: b[j],
                },
                (false, true) => MotionKind::Fourth {
                    axis: i + 1,
                    along: k + 1,
                    shift: b[k],
                },
                _ => MotionKind::Fifth {
                    axis: i + 1,
                    shift: [b[j], b[k]],
                },
            });
        }
        if b.norm() > b_tol {
            return Classification::Unclassified {
                reason: format!("rotation about axis {} with nonzero translation", i + 1),
            };
        }
        return Classification::Kind(MotionKind::First { axis: i + 1, angle: phi });
    }

    // One vanishing component: an axis in a coordinate plane.
    if half_turn {
        return Classification::Unclassified {
            reason: "half turn about an axis in a coordinate plane".into(),
        };
    }
    let (i, j) = others(zero[0]);
    Classification::Kind(MotionKind::Intermediate {
        axes: [i + 1, j + 1],
        coeffs: [u[i], u[j]],
        angle: phi,
        translation: b.into(),
    })
}
