//! The one-sided relaxation of the coplanarity constraints: each pairing
//! may either be coplanar or have its signed volume on the side opposite to
//! a centred reference configuration. A search harness looks for relaxed
//! motions that are not strict motions.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coplanarity_residual, RigidMotion, RotationMatrix, Vec3};
use crate::linalg::{Decomposition, RANK_RTOL};
use crate::manifold::residual_jacobian;
use crate::mechanism::{TetraPair, PAIRINGS};

/// Band around zero, on the scaled residuals, treated as "coplanar".
pub const ZERO_BAND: f64 = 1e-10;
/// Counterexample threshold on the scaled residuals.
pub const COUNTEREXAMPLE_TOL: f64 = 1e-8;

/// Reference sign σ_k per pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConvention(pub [i8; 6]);

/// σ_k = sign det[Pⱼ − Pᵢ, Rₖ − Pᵢ, Rₗ − Pᵢ], where RₖRₗ is the segment
/// Q̄ₖQ̄ₗ translated so that its midpoint is the centre.
pub fn reference_signs(pair: &TetraPair) -> Result<SignConvention> {
    let p = pair.fixed();
    let q = pair.moving_basic();
    let mut signs = [0i8; 6];
    for (k, pr) in PAIRINGS.iter().enumerate() {
        let (qk, ql) = (q[pr.moving[0]], q[pr.moving[1]]);
        let mid = (qk + ql) * 0.5;
        let volume = coplanarity_residual(&p[pr.fixed[0]], &p[pr.fixed[1]], &(qk - mid), &(ql - mid));
        let scale = pair.residual_scales()[k] * (p[pr.fixed[0]].norm() + 1.0);
        if volume.abs() <= 1e-12 * scale {
            return Err(Error::DegenerateReference(k));
        }
        signs[k] = if volume > 0.0 { 1 } else { -1 };
    }
    Ok(SignConvention(signs))
}

/// Per-pairing violation σ_k·r̂_k clipped at zero (r̂ the scaled residual).
fn violations(pair: &TetraPair, m: &RigidMotion, conv: &SignConvention) -> [f64; 6] {
    let r = pair.scaled_residuals(m);
    std::array::from_fn(|k| (f64::from(conv.0[k]) * r.0[k]).max(0.0))
}

/// True iff every scaled residual is within `band` of zero or has the sign
/// opposite to σ_k.
pub fn generalized_admissible(pair: &TetraPair, m: &RigidMotion, conv: &SignConvention, band: f64) -> bool {
    let r = pair.scaled_residuals(m);
    (0..6).all(|k| r.0[k].abs() <= band || f64::from(conv.0[k]) * r.0[k] < 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub motion: RigidMotion,
    pub scaled_residuals: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub samples: usize,
    pub signs: SignConvention,
    /// Searches ending at a relaxed-admissible motion.
    pub admissible_found: usize,
    /// Largest |r̂_k| over those endpoints.
    pub max_residual_among_admissible: f64,
    pub counterexamples: Vec<Counterexample>,
}

/// Active-set Gauss–Newton: drives the violated pairings to zero with a
/// minimal-norm step, re-evaluating the active set each iteration.
fn push_into_cone(pair: &TetraPair, start: &RigidMotion, conv: &SignConvention, iterations: usize) -> RigidMotion {
    let mut m = *start;
    for _ in 0..iterations {
        let v = violations(pair, &m, conv);
        let active: Vec<usize> = (0..6).filter(|&k| v[k] > 0.1 * ZERO_BAND).collect();
        if active.is_empty() {
            break;
        }
        let (r, jac) = residual_jacobian(pair, &m);
        let a = DMatrix::from_fn(active.len(), 6, |i, j| jac[(active[i], j)]);
        let rhs = DVector::from_iterator(active.len(), active.iter().map(|&k| -r[k]));
        let dec = Decomposition::new(&a);
        let mut step = dec.solve(&rhs, dec.rank(RANK_RTOL).max(1));
        let norm = step.norm();
        if norm > 0.5 {
            step *= 0.5 / norm;
        }
        m = RigidMotion::new(
            m.rotation.perturbed(&Vec3::new(step[0], step[1], step[2])),
            m.translation + Vec3::new(step[3], step[4], step[5]),
        );
    }
    m
}

/// Random motions pushed into the allowed sign cone; any endpoint that is
/// relaxed-admissible but has some |r̂_k| > 1e-8 is a counterexample.
pub fn relaxed_counterexample_search(pair: &TetraPair, n_samples: usize, seed: u64) -> Result<HarnessReport> {
    if n_samples == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let signs = reference_signs(pair)?;
    let length = pair.fixed().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = HarnessReport {
        samples: n_samples,
        signs,
        admissible_found: 0,
        max_residual_among_admissible: 0.0,
        counterexamples: Vec::new(),
    };
    for _ in 0..n_samples {
        let rotation = RotationMatrix::random(&mut rng);
        let b = Vec3::from_fn(|_, _| rng.gen_range(-length..length));
        let start = RigidMotion::new(rotation, b);
        for m in [start, push_into_cone(pair, &start, &signs, 60)] {
            if !generalized_admissible(pair, &m, &signs, ZERO_BAND) {
                continue;
            }
            report.admissible_found += 1;
            let r = pair.scaled_residuals(&m);
            let worst = r.max_abs();
            report.max_residual_among_admissible = report.max_residual_among_admissible.max(worst);
            if worst > COUNTEREXAMPLE_TOL {
                report.counterexamples.push(Counterexample { motion: m, scaled_residuals: r.0 });
            }
        }
    }
    Ok(report)
}
