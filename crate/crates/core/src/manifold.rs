//! The solution set as a whole: the third-kind branch structure and its
//! connectivity threshold, Gauss–Newton refinement onto the solution
//! set, predictor–corrector continuation along one-parameter pieces, and a
//! randomized completeness probe.
//!
//! Motions are perturbed in a left exponential chart: A ← exp([δω]ₓ)·A with
//! δω a standard right-handed rotation vector, b ← b + δb. The chart is
//! recentred at every iterate, so no special treatment is needed near the
//! identity or near half turns.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, Matrix6, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{classify, third_kind, third_kind_u_squared, Classification, ClassifyTol};
use crate::geometry::{angle_from_cot, rotation_from_axis_angle, AxisAngle, RigidMotion, RotationMatrix, Vec3};
use crate::linalg::{Decomposition, RANK_RTOL};
use crate::mechanism::{BoxDims, TetraPair, PAIRINGS};
use crate::solver::unique_translation;

/// Relative tolerance for deciding that D values tie.
pub const TIE_RTOL: f64 = 1e-12;
/// Default samples per feasible s-interval in [`branch_scan`].
pub const DEFAULT_RESOLUTION: usize = 2048;
/// The connectivity threshold: the feasibility bound at s² = 1.
pub const THRESHOLD: f64 = 0.5;

/// Feasibility bound of the third-kind axis law, g(x) = (1 + x)/(1 + 3x).
/// All u_i² are positive at s exactly when g(s²) > max D_i/ΣD. Strictly
/// decreasing from 1 to 1/3 on [0, ∞).
pub fn share_bound(s2: f64) -> f64 {
    (1.0 + s2) / (1.0 + 3.0 * s2)
}

/// The x ≥ 0 with g(x) = y, for y ∈ (1/3, 1].
pub fn share_bound_inverse(y: f64) -> Result<f64> {
    if !(y > 1.0 / 3.0 && y <= 1.0) {
        return Err(Error::OutsideInverseDomain(y));
    }
    Ok((1.0 - y) / (3.0 * y - 1.0))
}

/// f(x) = (x² + 3x + 1)/(3x² + 7x + 1), strictly decreasing from 1 to 1/3
/// on [0, ∞), with f(1) = 5/11. This closed form does not bound the axis law
/// used here; [`share_bound`] does. Kept for comparison reports.
pub fn f_of(s2: f64) -> f64 {
    (s2 * s2 + 3.0 * s2 + 1.0) / (3.0 * s2 * s2 + 7.0 * s2 + 1.0)
}

/// The x ≥ 0 with f(x) = y, for y ∈ (1/3, 1], by bisection on a bracket.
pub fn f_inverse(y: f64) -> Result<f64> {
    if !(y > 1.0 / 3.0 && y <= 1.0) {
        return Err(Error::OutsideInverseDomain(y));
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while f_of(hi) > y {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutsideInverseDomain(y));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) * 1e-3 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f_of(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentClass {
    /// The cube: the third-kind law holds for every s.
    AllS,
    Connected,
    ThreeComponents,
}

pub fn connectivity_class(dims: &BoxDims) -> ComponentClass {
    if dims.is_cube(TIE_RTOL) {
        ComponentClass::AllS
    } else if dims.max_share() >= THRESHOLD * (1.0 - TIE_RTOL) {
        ComponentClass::Connected
    } else {
        ComponentClass::ThreeComponents
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointTag {
    /// One axis component vanishes: the branch ends on the intermediate kind.
    IntermediateLimit,
    /// Two components vanish (two maximal D values): the branch ends on the
    /// first kind.
    FirstKindLimit,
    /// s → ±1 from inside a feasible range; the translation diverges.
    DivergesAtUnit,
    /// s → ±∞ (cube only): the branch approaches the basic position.
    BasicPosition,
}

/// Open interval of s; `None` stands for ∓∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SInterval {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub lo_tag: EndpointTag,
    pub hi_tag: EndpointTag,
}

impl SInterval {
    pub fn contains(&self, s: f64) -> bool {
        self.lo.is_none_or(|lo| s > lo) && self.hi.is_none_or(|hi| s < hi)
    }

    /// The interval in angle space, φ ∈ (0, 2π), as (low, high).
    fn angle_range(&self) -> (f64, f64) {
        let low = self.hi.map_or(0.0, angle_from_cot);
        let high = self.lo.map_or(std::f64::consts::TAU, angle_from_cot);
        (low, high)
    }
}

/// The feasible third-kind s-intervals for a box, sorted.
pub fn feasible_intervals(dims: &BoxDims) -> Vec<SInterval> {
    use EndpointTag::*;
    let class = connectivity_class(dims);
    if class == ComponentClass::AllS {
        return vec![
            SInterval { lo: None, hi: Some(-1.0), lo_tag: BasicPosition, hi_tag: DivergesAtUnit },
            SInterval { lo: Some(-1.0), hi: Some(1.0), lo_tag: DivergesAtUnit, hi_tag: DivergesAtUnit },
            SInterval { lo: Some(1.0), hi: None, lo_tag: DivergesAtUnit, hi_tag: BasicPosition },
        ];
    }
    let share = dims.max_share();
    let a = share_bound_inverse(share).expect("max share lies in (1/3, 1)").sqrt();
    let limit = if maximal_axes(dims).len() >= 2 { FirstKindLimit } else { IntermediateLimit };
    match class {
        // At share 1/2 the vanishing component and s = ±1 coincide; the
        // translation still diverges there, like 1/√(1 − |s|).
        ComponentClass::Connected if (a - 1.0).abs() <= 1e-9 => vec![SInterval {
            lo: Some(-1.0),
            hi: Some(1.0),
            lo_tag: DivergesAtUnit,
            hi_tag: DivergesAtUnit,
        }],
        ComponentClass::Connected => vec![SInterval { lo: Some(-a), hi: Some(a), lo_tag: limit, hi_tag: limit }],
        _ => vec![
            SInterval { lo: Some(-a), hi: Some(-1.0), lo_tag: limit, hi_tag: DivergesAtUnit },
            SInterval { lo: Some(-1.0), hi: Some(1.0), lo_tag: DivergesAtUnit, hi_tag: DivergesAtUnit },
            SInterval { lo: Some(1.0), hi: Some(a), lo_tag: DivergesAtUnit, hi_tag: limit },
        ],
    }
}

/// 0-based indices of the maximal D values (ties within [`TIE_RTOL`]).
fn maximal_axes(dims: &BoxDims) -> Vec<usize> {
    let d = dims.inverse_squares();
    let max = d.iter().copied().fold(f64::MIN, f64::max);
    (0..3).filter(|&i| max - d[i] <= TIE_RTOL * max).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchSample {
    pub s: f64,
    pub motion: RigidMotion,
    pub max_residual: f64,
}

/// The limit of a branch at a finite endpoint and how samples approach it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub s: f64,
    pub tag: EndpointTag,
    pub limit: RigidMotion,
    /// Tag of the limit motion under [`classify`].
    pub limit_kind: String,
    /// Distances from on-branch samples at s-offsets 10⁻², 10⁻⁴, … to the limit.
    pub approach: Vec<f64>,
}

/// |b| just inside a feasible range next to s = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCheck {
    pub endpoint: f64,
    pub s: f64,
    pub translation_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub dims: BoxDims,
    pub signs: [i8; 3],
    pub class: ComponentClass,
    pub component_count: usize,
    pub intervals: Vec<SInterval>,
    pub sample_count: usize,
    pub failed_samples: usize,
    pub max_residual: f64,
    pub endpoints: Vec<EndpointCheck>,
    pub divergence: Vec<DivergenceCheck>,
    #[serde(skip)]
    pub samples: Vec<BranchSample>,
}

/// Limit motion at a finite non-unit endpoint: the maximal-D axis
/// components are set to zero, the remaining ones follow the axis law.
pub fn endpoint_limit(dims: &BoxDims, s: f64, signs: [i8; 3]) -> Result<RigidMotion> {
    let vanishing = maximal_axes(dims);
    let u2 = third_kind_u_squared(dims, s);
    let mut axis = Vec3::from_fn(|i, _| {
        if vanishing.contains(&i) {
            0.0
        } else {
            f64::from(signs[i]) * u2[i].max(0.0).sqrt()
        }
    });
    axis /= axis.norm();
    let rotation = rotation_from_axis_angle(&AxisAngle::new(axis, angle_from_cot(s))?);
    let b = unique_translation(&TetraPair::from_box(dims), &rotation)?;
    Ok(RigidMotion::new(rotation, b))
}

/// s-values for one interval: `resolution` points uniform in angle, plus
/// points approaching each finite endpoint geometrically.
fn interval_samples(iv: &SInterval, resolution: usize) -> Vec<f64> {
    let (low, high) = iv.angle_range();
    let mut out: Vec<f64> = (0..resolution)
        .map(|k| {
            let phi = low + (high - low) * (k as f64 + 0.5) / resolution as f64;
            let half = 0.5 * phi;
            half.cos() / half.sin()
        })
        .filter(|s| iv.contains(*s))
        .collect();
    for (end, tag, inward) in [(iv.lo, iv.lo_tag, 1.0), (iv.hi, iv.hi_tag, -1.0)] {
        let Some(e) = end else { continue };
        let depth = if tag == EndpointTag::DivergesAtUnit { 5 } else { 10 };
        for j in 2..=depth {
            let s = e + inward * 10f64.powi(-j);
            if iv.contains(s) {
                out.push(s);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Samples every feasible third-kind interval, verifies each sample, checks
/// the endpoint limits and the divergence at s = ±1.
pub fn branch_scan(dims: &BoxDims, signs: [i8; 3], resolution: usize) -> Result<BranchReport> {
    if resolution == 0 {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let pair = TetraPair::from_box(dims);
    let class = connectivity_class(dims);
    let intervals = feasible_intervals(dims);
    let mut samples = Vec::new();
    let mut failed = 0;
    for iv in &intervals {
        for s in interval_samples(iv, resolution) {
            match third_kind(dims, s, signs) {
                Ok(m) => samples.push(BranchSample {
                    s,
                    max_residual: pair.scaled_residuals(&m).max_abs(),
                    motion: m,
                }),
                Err(_) => failed += 1,
            }
        }
    }
    let max_residual = samples.iter().map(|x| x.max_residual).fold(0.0, f64::max);

    let tol = ClassifyTol::default();
    let mut endpoints = Vec::new();
    let mut divergence = Vec::new();
    for iv in &intervals {
        for (end, tag, inward) in [(iv.lo, iv.lo_tag, 1.0), (iv.hi, iv.hi_tag, -1.0)] {
            let Some(e) = end else { continue };
            match tag {
                EndpointTag::DivergesAtUnit => {
                    let s = e + inward * 1e-4;
                    if let Ok(m) = third_kind(dims, s, signs) {
                        divergence.push(DivergenceCheck {
                            endpoint: e,
                            s,
                            translation_norm: m.translation.norm(),
                        });
                    }
                }
                EndpointTag::IntermediateLimit | EndpointTag::FirstKindLimit => {
                    if endpoints.iter().any(|c: &EndpointCheck| c.s == e) {
                        continue;
                    }
                    let limit = endpoint_limit(dims, e, signs)?;
                    let limit_kind = classify(&pair, &limit, &tol).tag().to_string();
                    let approach = (1..=5)
                        .filter_map(|j| third_kind(dims, e + inward * 10f64.powi(-2 * j), signs).ok())
                        .map(|m| m.distance(&limit))
                        .collect();
                    endpoints.push(EndpointCheck { s: e, tag, limit, limit_kind, approach });
                }
                EndpointTag::BasicPosition => {}
            }
        }
    }

    Ok(BranchReport {
        dims: *dims,
        signs,
        class,
        component_count: intervals.len(),
        intervals,
        sample_count: samples.len(),
        failed_samples: failed,
        max_residual,
        endpoints,
        divergence,
        samples,
    })
}

/// Scaled residuals and their Jacobian in the left exponential chart
/// (columns: δω, then δb).
pub fn residual_jacobian(pair: &TetraPair, m: &RigidMotion) -> (Vector6<f64>, Matrix6<f64>) {
    let p = pair.fixed();
    let rotated = pair.moving_basic().map(|q| m.rotation.apply(&q));
    let scales = pair.residual_scales();
    let mut r = Vector6::zeros();
    let mut jac = Matrix6::zeros();
    for (k, pr) in PAIRINGS.iter().enumerate() {
        let pi = p[pr.fixed[0]];
        let e = p[pr.fixed[1]] - pi;
        let (ak, al) = (rotated[pr.moving[0]], rotated[pr.moving[1]]);
        let wk = ak + m.translation - pi;
        let wl = al + m.translation - pi;
        let w = 1.0 / scales[k];
        r[k] = e.dot(&wk.cross(&(al - ak))) * w;
        let d_omega = ak.cross(&wl.cross(&e)) + al.cross(&e.cross(&wk));
        let d_b = (wl - wk).cross(&e);
        for c in 0..3 {
            jac[(k, c)] = d_omega[c] * w;
            jac[(k, c + 3)] = d_b[c] * w;
        }
    }
    (r, jac)
}

fn chart_step(m: &RigidMotion, delta: &Vector6<f64>) -> RigidMotion {
    let w = Vec3::new(delta[0], delta[1], delta[2]);
    let db = Vec3::new(delta[3], delta[4], delta[5]);
    RigidMotion::new(m.rotation.perturbed(&w), m.translation + db)
}

/// Chart coordinates of `to` relative to `from`.
fn chart_difference(from: &RigidMotion, to: &RigidMotion) -> Vector6<f64> {
    let w = to.rotation.log_relative(&from.rotation);
    let db = to.translation - from.translation;
    Vector6::new(w[0], w[1], w[2], db[0], db[1], db[2])
}

struct Svd6(Decomposition);

impl Svd6 {
    fn new(a: &Matrix6<f64>) -> Self {
        Self(Decomposition::new(&DMatrix::from_fn(6, 6, |i, j| a[(i, j)])))
    }

    fn rank(&self, rtol: f64) -> usize {
        self.0.rank(rtol)
    }

    fn solve(&self, b: &Vector6<f64>, rank: usize) -> Vector6<f64> {
        let x = self.0.solve(&DVector::from_column_slice(b.as_slice()), rank);
        Vector6::from_column_slice(x.as_slice())
    }

    fn null_vectors(&self, rank: usize) -> Vec<Vector6<f64>> {
        self.0.nullspace(rank).iter().map(|v| Vector6::from_column_slice(v.as_slice())).collect()
    }
}

/// Minimal-norm Gauss–Newton step.
fn gauss_newton_step(pair: &TetraPair, m: &RigidMotion) -> (f64, Vector6<f64>) {
    let (r, jac) = residual_jacobian(pair, m);
    let svd = Svd6::new(&jac);
    let rank = svd.rank(RANK_RTOL).max(1);
    (r.amax(), -svd.solve(&r, rank))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    /// Target max scaled residual.
    pub tol: f64,
    pub max_iterations: usize,
    /// Largest chart step per iteration.
    pub max_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iterations: 60,
            max_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NewtonOutcome {
    Converged { motion: RigidMotion, iterations: usize, residual: f64 },
    NotConverged { motion: RigidMotion, iterations: usize, residual: f64 },
}

impl NewtonOutcome {
    pub fn converged(&self) -> Option<&RigidMotion> {
        match self {
            NewtonOutcome::Converged { motion, .. } => Some(motion),
            NewtonOutcome::NotConverged { .. } => None,
        }
    }
}

/// Gauss–Newton with a pseudo-inverse on the six scaled residuals over the
/// six motion parameters. Steps longer than `max_step` are shortened.
pub fn newton_refine(pair: &TetraPair, m0: &RigidMotion, opts: &NewtonOptions) -> NewtonOutcome {
    let mut m = *m0;
    for it in 0..=opts.max_iterations {
        let (residual, mut step) = gauss_newton_step(pair, &m);
        if residual < opts.tol {
            return NewtonOutcome::Converged { motion: m, iterations: it, residual };
        }
        if it == opts.max_iterations || !residual.is_finite() {
            return NewtonOutcome::NotConverged { motion: m, iterations: it, residual };
        }
        let norm = step.norm();
        if norm > opts.max_step {
            step *= opts.max_step / norm;
        }
        m = chart_step(&m, &step);
    }
    unreachable!("loop returns on its last iteration")
}

/// Local dimension estimate: nullity of the residual Jacobian at `m`.
pub fn local_nullity(pair: &TetraPair, m: &RigidMotion) -> usize {
    let (_, jac) = residual_jacobian(pair, m);
    6 - Svd6::new(&jac).rank(RANK_RTOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuationOptions {
    pub initial_step: f64,
    pub max_step: f64,
    /// Trace aborts when the step would have to shrink below this.
    pub min_step: f64,
    /// Residual bound for accepted points.
    pub tol: f64,
    pub corrector_iterations: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.02,
            max_step: 0.1,
            min_step: 1e-10,
            tol: 1e-12,
            corrector_iterations: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Accumulated chart arclength from the seed.
    pub parameter: f64,
    pub motion: RigidMotion,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    StepFailure { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationTrace {
    pub points: Vec<TracePoint>,
    pub termination: Termination,
}

/// Tangent of the solution set at `m`: the Jacobian null vector closest to
/// `reference` (any null vector when the reference is orthogonal to them).
fn tangent(pair: &TetraPair, m: &RigidMotion, reference: &Vector6<f64>) -> Vector6<f64> {
    let (_, jac) = residual_jacobian(pair, m);
    let svd = Svd6::new(&jac);
    let rank = svd.rank(RANK_RTOL).min(5);
    let null = svd.null_vectors(rank);
    let mut t = null.iter().fold(Vector6::zeros(), |acc, v| acc + v * v.dot(reference));
    if t.norm() < 1e-12 {
        t = null[0];
    }
    t = t.normalize();
    if t.dot(reference) < 0.0 {
        -t
    } else {
        t
    }
}

fn correct(pair: &TetraPair, m: &RigidMotion, opts: &ContinuationOptions) -> Option<(RigidMotion, f64)> {
    let mut m = *m;
    for _ in 0..=opts.corrector_iterations {
        let (residual, step) = gauss_newton_step(pair, &m);
        if residual < opts.tol {
            return Some((m, residual));
        }
        m = chart_step(&m, &step);
    }
    None
}

/// Pseudo-arclength style continuation: tangent predictor from the
/// Jacobian null space, minimal-norm Gauss–Newton corrector, step halving on
/// failure. `direction` (δω, δb) orients the first step.
pub fn continuation(
    pair: &TetraPair,
    seed: &RigidMotion,
    direction: &[f64; 6],
    steps: usize,
    opts: &ContinuationOptions,
) -> Result<ContinuationTrace> {
    let residual = pair.scaled_residuals(seed).max_abs();
    let (seed, residual) = if residual < opts.tol {
        (*seed, residual)
    } else {
        correct(pair, seed, opts).ok_or(Error::ConstraintViolation(residual))?
    };
    let mut points = vec![TracePoint { parameter: 0.0, motion: seed, max_residual: residual }];
    let mut reference = Vector6::from_column_slice(direction);
    if reference.norm() == 0.0 {
        return Err(Error::Invalid("direction hint must be nonzero".into()));
    }
    let mut h = opts.initial_step;
    let mut current = seed;
    let mut parameter = 0.0;
    while points.len() <= steps {
        let t = tangent(pair, &current, &reference);
        let accepted = loop {
            if h < opts.min_step {
                break None;
            }
            let predicted = chart_step(&current, &(t * h));
            if let Some((next, res)) = correct(pair, &predicted, opts) {
                let moved = chart_difference(&current, &next);
                let next_t = tangent(pair, &next, &t);
                if moved.norm() < 2.0 * h && moved.dot(&t) > 0.0 && next_t.dot(&t) > 0.5 {
                    break Some((next, res, moved.norm(), next_t));
                }
            }
            h *= 0.5;
        };
        let Some((next, res, length, next_t)) = accepted else {
            return Ok(ContinuationTrace {
                points,
                termination: Termination::StepFailure {
                    reason: format!("step size fell below {:e}", opts.min_step),
                },
            });
        };
        parameter += length;
        points.push(TracePoint { parameter, motion: next, max_residual: res });
        current = next;
        reference = next_t;
        h = (h * 1.5).min(opts.max_step);
    }
    Ok(ContinuationTrace { points, termination: Termination::Completed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeCandidate {
    pub motion: RigidMotion,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub dims: BoxDims,
    pub attempts: usize,
    pub converged: usize,
    pub not_converged: usize,
    /// Converged solutions per family tag.
    pub kinds: BTreeMap<String, usize>,
    pub unclassified: Vec<ProbeCandidate>,
    /// Nullity of the residual Jacobian at the basic position.
    pub basic_position_nullity: usize,
}

/// Classification tolerances used by the probe. Newton-converged points sit
/// within about 1e-12 of the solution set, but near intersections of
/// families the axis and angle are less well conditioned than the residual.
pub fn probe_tolerances() -> ClassifyTol {
    ClassifyTol {
        residual: 1e-9,
        angle: 1e-7,
        axis: 1e-7,
        translation: 1e-7,
    }
}

/// Random rotation and translation (components uniform in ±2·max dᵢ), then
/// Gauss–Newton. Continues until `target` seeds converged or 50·target
/// attempts were made.
pub fn completeness_probe(dims: &BoxDims, target: usize, seed: u64) -> Result<ProbeReport> {
    if target == 0 {
        return Err(Error::Invalid("seed count must be positive".into()));
    }
    let pair = TetraPair::from_box(dims);
    let length = dims.as_array().iter().copied().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = NewtonOptions::default();
    let tol = probe_tolerances();
    let mut report = ProbeReport {
        dims: *dims,
        attempts: 0,
        converged: 0,
        not_converged: 0,
        kinds: BTreeMap::new(),
        unclassified: Vec::new(),
        basic_position_nullity: local_nullity(&pair, &RigidMotion::identity()),
    };
    while report.converged < target && report.attempts < 50 * target {
        report.attempts += 1;
        let rotation = RotationMatrix::random(&mut rng);
        let b = Vec3::from_fn(|_, _| rng.gen_range(-2.0 * length..2.0 * length));
        let NewtonOutcome::Converged { motion, .. } = newton_refine(&pair, &RigidMotion::new(rotation, b), &opts)
        else {
            report.not_converged += 1;
            continue;
        };
        report.converged += 1;
        match classify(&pair, &motion, &tol) {
            Classification::Kind(k) => *report.kinds.entry(k.tag().to_string()).or_default() += 1,
            Classification::Unclassified { reason } => report.unclassified.push(ProbeCandidate { motion, reason }),
            Classification::NotAMotion { max_residual } => report.unclassified.push(ProbeCandidate {
                motion,
                reason: format!("converged but residual {max_residual:e} after classification"),
            }),
        }
    }
    Ok(report)
}

/// 6×6 Jacobian as a plain array, row-major, for callers outside the crate.
pub fn jacobian_rows(pair: &TetraPair, m: &RigidMotion) -> [[f64; 6]; 6] {
    let (_, jac) = residual_jacobian(pair, m);
    std::array::from_fn(|i| std::array::from_fn(|j| jac[(i, j)]))
}
