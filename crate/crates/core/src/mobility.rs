//! First-order mobility of bar structures whose constraints are bar lengths
//! and coplanarity of edge pairs, and the pyramid pairs built from two
//! coaxial right pyramids with twisted regular n-gon bases.
//!
//! A configuration is a flat vector of 3·|vertices| coordinates. Bar rows
//! are gradients of |pₐ − p_b|²; coplanarity rows are gradients of the triple
//! product divided by the product of the two rest edge lengths, so both kinds
//! of row carry units of length.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coplanarity_residual, Vec3};
use crate::linalg::{Decomposition, RANK_RTOL};
use crate::mechanism::{BoxDims, TetraPair, PAIRINGS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub ends: [usize; 2],
    pub length: f64,
}

/// Two edges (a, b) and (c, d) that must stay coplanar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoplanarPair {
    pub first: [usize; 2],
    pub second: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarStructure {
    pub vertices: Vec<Vec3>,
    pub bars: Vec<Bar>,
    pub coplanar_pairs: Vec<CoplanarPair>,
    /// One flag per coordinate; `true` pins it.
    pub fixed_mask: Vec<bool>,
}

impl BarStructure {
    /// Bars get their rest lengths from `vertices`.
    pub fn new(vertices: Vec<Vec3>, bars: &[[usize; 2]], coplanar_pairs: Vec<CoplanarPair>, pinned: &[usize]) -> Result<Self> {
        let n = vertices.len();
        let in_range = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(Error::Invalid(format!("vertex index {i} out of range ({n} vertices)")))
            }
        };
        let mut out = Vec::with_capacity(bars.len());
        for &[a, b] in bars {
            in_range(a)?;
            in_range(b)?;
            let length = (vertices[a] - vertices[b]).norm();
            if !(length > 0.0) {
                return Err(Error::Invalid(format!("bar ({a}, {b}) has zero length")));
            }
            out.push(Bar { ends: [a, b], length });
        }
        for c in &coplanar_pairs {
            for i in c.first.iter().chain(&c.second) {
                in_range(*i)?;
            }
        }
        let mut fixed_mask = vec![false; 3 * n];
        for &v in pinned {
            in_range(v)?;
            fixed_mask[3 * v..3 * v + 3].iter_mut().for_each(|f| *f = true);
        }
        Ok(Self {
            vertices,
            bars: out,
            coplanar_pairs,
            fixed_mask,
        })
    }

    pub fn rest_configuration(&self) -> Vec<f64> {
        self.vertices.iter().flat_map(|v| [v[0], v[1], v[2]]).collect()
    }

    pub fn free_count(&self) -> usize {
        self.fixed_mask.iter().filter(|f| !**f).count()
    }

    pub fn constraint_count(&self) -> usize {
        self.bars.len() + self.coplanar_pairs.len()
    }

    fn point(config: &[f64], i: usize) -> Vec3 {
        Vec3::new(config[3 * i], config[3 * i + 1], config[3 * i + 2])
    }

    fn check_len(&self, config: &[f64]) -> Result<()> {
        let expected = 3 * self.vertices.len();
        if config.len() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: config.len(),
            })
        }
    }

    fn coplanar_scale(&self, c: &CoplanarPair) -> f64 {
        let v = &self.vertices;
        (v[c.first[1]] - v[c.first[0]]).norm() * (v[c.second[1]] - v[c.second[0]]).norm()
    }

    /// Constraint values: |pₐ − p_b|² − L² per bar, then scaled triple
    /// products per coplanar pair.
    pub fn constraint_values(&self, config: &[f64]) -> Result<Vec<f64>> {
        self.check_len(config)?;
        let p = |i| Self::point(config, i);
        let mut out: Vec<f64> = self
            .bars
            .iter()
            .map(|b| (p(b.ends[0]) - p(b.ends[1])).norm_squared() - b.length * b.length)
            .collect();
        for c in &self.coplanar_pairs {
            let r = coplanarity_residual(&p(c.first[0]), &p(c.first[1]), &p(c.second[0]), &p(c.second[1]));
            out.push(r / self.coplanar_scale(c));
        }
        Ok(out)
    }

    /// Largest violation, with bar entries measured as length differences.
    pub fn max_violation(&self, config: &[f64]) -> Result<f64> {
        let values = self.constraint_values(config)?;
        let bars = self.bars.iter().zip(&values).map(|(b, v)| ((b.length * b.length + v).max(0.0).sqrt() - b.length).abs());
        let coplanar = values[self.bars.len()..].iter().map(|v| v.abs());
        Ok(bars.chain(coplanar).fold(0.0, f64::max))
    }
}

/// Jacobian of [`BarStructure::constraint_values`] restricted to the free
/// coordinates: one row per bar, then one per coplanar pair.
pub fn constraint_jacobian(structure: &BarStructure, config: &[f64]) -> Result<DMatrix<f64>> {
    structure.check_len(config)?;
    let n = structure.vertices.len();
    let mut full = DMatrix::zeros(structure.constraint_count(), 3 * n);
    let p = |i| BarStructure::point(config, i);
    for (row, bar) in structure.bars.iter().enumerate() {
        let [a, b] = bar.ends;
        let g = (p(a) - p(b)) * 2.0;
        for c in 0..3 {
            full[(row, 3 * a + c)] += g[c];
            full[(row, 3 * b + c)] -= g[c];
        }
    }
    for (k, pair) in structure.coplanar_pairs.iter().enumerate() {
        let row = structure.bars.len() + k;
        let w = 1.0 / structure.coplanar_scale(pair);
        let [ia, ib] = pair.first;
        let [ic, id] = pair.second;
        let (a, b, c, d) = (p(ia), p(ib), p(ic), p(id));
        // r = (b − a)·((c − a) × (d − a))
        let gb = (c - a).cross(&(d - a));
        let gc = (d - a).cross(&(b - a));
        let gd = (b - a).cross(&(c - a));
        let ga = -(gb + gc + gd);
        for (idx, g) in [(ia, ga), (ib, gb), (ic, gc), (id, gd)] {
            for j in 0..3 {
                full[(row, 3 * idx + j)] += g[j] * w;
            }
        }
    }
    let free: Vec<usize> = (0..3 * n).filter(|&i| !structure.fixed_mask[i]).collect();
    Ok(full.select_columns(free.iter()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityReport {
    pub free_coordinates: usize,
    pub constraint_count: usize,
    pub rank: usize,
    pub dof: usize,
    /// Full singular value spectrum, descending.
    pub singular_values: Vec<f64>,
}

/// DOF = free coordinates − numerical rank of the constraint Jacobian
/// (singular values above 1e-8·σ_max). The configuration must satisfy the
/// constraints to within `tol`.
pub fn infinitesimal_dof(structure: &BarStructure, config: &[f64], tol: f64) -> Result<MobilityReport> {
    let violation = structure.max_violation(config)?;
    if !(violation <= tol) {
        return Err(Error::ConstraintViolation(violation));
    }
    let jac = constraint_jacobian(structure, config)?;
    let free = jac.ncols();
    let (rank, singular_values) = if jac.nrows() == 0 || free == 0 {
        (0, vec![0.0; free])
    } else {
        let dec = Decomposition::new(&jac);
        (dec.rank(RANK_RTOL), dec.singular)
    };
    Ok(MobilityReport {
        free_coordinates: free,
        constraint_count: structure.constraint_count(),
        rank,
        dof: free - rank,
        singular_values,
    })
}

/// Lateral-to-base edge ratio at which the lateral faces are equilateral;
/// for n = 3 both pyramids are then regular tetrahedra.
pub fn regular_ratio(n: usize) -> f64 {
    3f64.sqrt() / (2.0 * (PI / n as f64).sin())
}

/// Heights of the pyramid pair with unit base edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PyramidLayout {
    pub n: usize,
    pub ratio: f64,
    pub circumradius: f64,
    /// Height of the fixed pyramid's apex; the moving apex sits at −apex.
    pub apex: f64,
    /// Level of the fixed pyramid's base; the moving base sits at −base.
    pub base: f64,
}

impl PyramidLayout {
    /// Places the pyramids so that each base edge of one meets a lateral
    /// edge of the other: with c = cos(π/n) and k = (1 − c)/(1 + c) the
    /// apex is at height H/(1 + k) and the base at −k times that.
    pub fn new(n: usize, ratio: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Invalid(format!("pyramid needs n ≥ 3, got {n}")));
        }
        let circumradius = 1.0 / (2.0 * (PI / n as f64).sin());
        if !(ratio > circumradius) {
            return Err(Error::DegeneratePyramid {
                n,
                ratio,
                min: circumradius,
            });
        }
        let height = (ratio * ratio - circumradius * circumradius).sqrt();
        let c = (PI / n as f64).cos();
        let k = (1.0 - c) / (1.0 + c);
        let apex = height / (1.0 + k);
        Ok(Self {
            n,
            ratio,
            circumradius,
            apex,
            base: -k * apex,
        })
    }
}

/// Vertex order: fixed apex, fixed base 0..n, moving apex, moving base
/// 0..n. Bars: base edges and lateral edges of both pyramids. Coplanar
/// pairs: each base edge with the lateral edge of the other pyramid it
/// meets. The fixed apex and fixed base vertices 0 and 1 are pinned.
pub fn build_pyramid_pair(n: usize, ratio: f64) -> Result<BarStructure> {
    let layout = PyramidLayout::new(n, ratio)?;
    let r = layout.circumradius;
    let step = 2.0 * PI / n as f64;
    let mut vertices = vec![Vec3::new(0.0, 0.0, layout.apex)];
    vertices.extend((0..n).map(|j| {
        let t = step * j as f64;
        Vec3::new(r * t.cos(), r * t.sin(), layout.base)
    }));
    vertices.push(Vec3::new(0.0, 0.0, -layout.apex));
    vertices.extend((0..n).map(|j| {
        let t = step * j as f64 + PI / n as f64;
        Vec3::new(r * t.cos(), r * t.sin(), -layout.base)
    }));
    let fixed_apex = 0;
    let fixed_base = |j: usize| 1 + j % n;
    let moving_apex = n + 1;
    let moving_base = |j: usize| n + 2 + j % n;

    let mut bars = Vec::with_capacity(4 * n);
    for (apex, base) in [(fixed_apex, &fixed_base as &dyn Fn(usize) -> usize), (moving_apex, &moving_base)] {
        for j in 0..n {
            bars.push([base(j), base(j + 1)]);
            bars.push([apex, base(j)]);
        }
    }
    let mut pairs = Vec::with_capacity(2 * n);
    for j in 0..n {
        pairs.push(CoplanarPair {
            first: [fixed_base(j), fixed_base(j + 1)],
            second: [moving_apex, moving_base(j)],
        });
        pairs.push(CoplanarPair {
            first: [moving_base(j), moving_base(j + 1)],
            second: [fixed_apex, fixed_base(j + 1)],
        });
    }
    BarStructure::new(vertices, &bars, pairs, &[fixed_apex, fixed_base(0), fixed_base(1)])
}

/// The tetrahedron pair of a box: P₁..P₄ then Q̄₁..Q̄₄, all tetrahedron edges
/// as bars, the six pairings as coplanar pairs, the fixed tetrahedron pinned.
pub fn tetra_pair_as_bar_structure(dims: &BoxDims) -> Result<BarStructure> {
    let pair = TetraPair::from_box(dims);
    let mut vertices: Vec<Vec3> = pair.fixed().to_vec();
    vertices.extend_from_slice(pair.moving_basic());
    let mut bars = Vec::with_capacity(12);
    for offset in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                bars.push([offset + i, offset + j]);
            }
        }
    }
    let pairs = PAIRINGS
        .iter()
        .map(|p| CoplanarPair {
            first: p.fixed,
            second: [4 + p.moving[0], 4 + p.moving[1]],
        })
        .collect();
    BarStructure::new(vertices, &bars, pairs, &[0, 1, 2, 3])
}

/// Outcome of [`pyramid_axial_motion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AxialOutcome {
    Solved { translation: f64, configuration: Vec<f64> },
    NoSolution { reason: String },
}

/// Rotates the moving pyramid about the common axis by `angle` and finds the
/// axial shift that restores every coplanarity. Each residual is affine in
/// the shift, so the shift is solved from one pairing exactly and the rest
/// are verified.
pub fn pyramid_axial_motion(n: usize, ratio: f64, angle: f64) -> Result<AxialOutcome> {
    let structure = build_pyramid_pair(n, ratio)?;
    let (cos, sin) = (angle.cos(), angle.sin());
    let place = |shift: f64| -> Vec<f64> {
        let mut config = structure.rest_configuration();
        for v in n + 1..2 * n + 2 {
            let (x, y) = (config[3 * v], config[3 * v + 1]);
            config[3 * v] = cos * x - sin * y;
            config[3 * v + 1] = sin * x + cos * y;
            config[3 * v + 2] += shift;
        }
        config
    };
    let nb = structure.bars.len();
    let at = |shift: f64| structure.constraint_values(&place(shift)).map(|v| v[nb]);
    let r0 = at(0.0)?;
    let slope = at(1.0)? - r0;
    if slope.abs() < 1e-14 {
        return Ok(AxialOutcome::NoSolution {
            reason: "coplanarity residual does not depend on the axial shift".into(),
        });
    }
    let shift = -r0 / slope;
    let configuration = place(shift);
    let worst = structure.max_violation(&configuration)?;
    if worst > 1e-10 {
        return Ok(AxialOutcome::NoSolution {
            reason: format!("remaining violation {worst:e} at shift {shift}"),
        });
    }
    Ok(AxialOutcome::Solved {
        translation: shift,
        configuration,
    })
}
