//! Command-line front end: configuration, motion files, CSV export and the
//! subcommands of the `tetraflex` binary.
//!
//! Exit codes: 0 success, 2 infeasible request, 3 validation failure,
//! 4 parse error.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::families::{
    classify, fifth_kind, first_kind, intermediate_kind, sixth_kind, sixth_kind_condition, third_kind, ClassifyTol,
};
use crate::generalized::{generalized_admissible, reference_signs, ZERO_BAND};
use crate::geometry::{AxisAngle, RigidMotion, RotationMatrix, Vec3};
use crate::manifold::{branch_scan, completeness_probe, feasible_intervals, BranchSample, DEFAULT_RESOLUTION};
use crate::mechanism::{build_pair, BoxDims, ParallelepipedMap, TetraPair};
use crate::mobility::{build_pyramid_pair, infinitesimal_dof, regular_ratio, tetra_pair_as_bar_structure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

/// Frozen CSV header.
pub const CSV_HEADER: &str = "s,u1,u2,u3,phi,b1,b2,b3,max_residual,kind";

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARSE, message: message.into() }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ThirdKindInfeasible { .. }
            | Error::SixthKindCondition { .. }
            | Error::HalfTurnExcluded
            | Error::UnexpectedSolution { .. }
            | Error::DegeneratePyramid { .. } => EXIT_INFEASIBLE,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

/// Optional overrides of the classification tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<f64>,
}

impl Tolerances {
    pub fn classify_tol(&self) -> ClassifyTol {
        let d = ClassifyTol::default();
        ClassifyTol {
            residual: self.residual.unwrap_or(d.residual),
            angle: self.angle.unwrap_or(d.angle),
            axis: self.axis.unwrap_or(d.axis),
            translation: self.translation.unwrap_or(d.translation),
        }
    }
}

/// Run configuration: exactly one of `dims` (half-dimensions of a box) and
/// `matrix` (row-major 3×3 map of the cube).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.dims, &self.matrix) {
            (Some(_), Some(_)) => Err(CliError::validation("config: give either dims or matrix, not both")),
            (None, None) => Err(CliError::validation("config: one of dims or matrix is required")),
            _ => self.map().map(|_| ()),
        }
    }

    pub fn map(&self) -> Result<ParallelepipedMap, CliError> {
        match (&self.dims, &self.matrix) {
            (Some(d), None) => Ok(ParallelepipedMap::from_box(&BoxDims::new(d[0], d[1], d[2])?)),
            (None, Some(m)) => Ok(ParallelepipedMap::new(Matrix3::from_fn(|i, j| m[i][j]))?),
            _ => Err(CliError::validation("config: give exactly one of dims or matrix")),
        }
    }

    pub fn pair(&self) -> Result<TetraPair, CliError> {
        Ok(build_pair(&self.map()?))
    }

    pub fn box_dims(&self) -> Result<BoxDims, CliError> {
        self.map()?.box_dims().ok_or_else(|| Error::NotDiagonal.into())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn classify_tol(&self) -> ClassifyTol {
        self.tolerances.unwrap_or_default().classify_tol()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// On-disk motion: the matrix is authoritative, the axis-angle advisory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionRecord {
    pub rotation: [[f64; 3]; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_angle: Option<AxisAngle>,
    pub translation: [f64; 3],
}

impl MotionRecord {
    pub fn from_motion(m: &RigidMotion) -> Self {
        Self {
            rotation: m.rotation.into(),
            axis_angle: m.rotation.to_axis_angle(0.0),
            translation: m.translation.into(),
        }
    }

    pub fn to_motion(&self) -> Result<RigidMotion, CliError> {
        let rotation = RotationMatrix::try_from(self.rotation)?;
        Ok(RigidMotion::new(rotation, Vec3::from(self.translation)))
    }
}

/// Reads one motion, an array of motions, or any object carrying a
/// `motions` array (directly or under `results`).
pub fn parse_motions(text: &str) -> Result<Vec<RigidMotion>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse(format!("motion file: {e}")))?;
    let items = match &value {
        Value::Array(a) => a.clone(),
        Value::Object(o) if o.contains_key("rotation") => vec![value.clone()],
        Value::Object(o) => o
            .get("motions")
            .or_else(|| o.get("results").and_then(|r| r.get("motions")))
            .and_then(Value::as_array)
            .cloned()
            .ok_or_else(|| CliError::parse("motion file: expected a motion, an array, or a `motions` list"))?,
        _ => return Err(CliError::parse("motion file: expected a JSON object or array")),
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let rec: MotionRecord =
                serde_json::from_value(v).map_err(|e| CliError::parse(format!("motion file, entry {i}: {e}")))?;
            rec.to_motion()
        })
        .collect()
}

/// One CSV row in the frozen column order.
pub fn csv_row(m: &RigidMotion, max_residual: f64, kind: &str) -> String {
    let (s, u, phi) = match m.rotation.to_axis_angle(0.0) {
        Some(aa) => (aa.s(), aa.axis(), aa.angle()),
        None => (f64::INFINITY, Vec3::zeros(), 0.0),
    };
    let b = m.translation;
    format!(
        "{s:e},{:e},{:e},{:e},{phi:e},{:e},{:e},{:e},{max_residual:e},{kind}",
        u[0], u[1], u[2], b[0], b[1], b[2]
    )
}

pub fn csv_table(rows: &[(RigidMotion, f64, String)]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (m, r, k) in rows {
        out.push_str(&csv_row(m, *r, k));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Identity,
    First,
    Intermediate,
    Third,
    Fourth,
    Fifth,
    Sixth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "tetraflex", version, about = "Finite motions of the tetrahedron pair in a parallelepiped")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Inline half-dimensions d1,d2,d3 (overrides the config's dims/matrix).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub dims: Option<Vec<f64>>,
    /// Seed for stochastic commands (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate motions of one family with residuals and vertex positions.
    Families {
        #[arg(long, value_enum)]
        kind: Family,
        /// Rotation axis (1..3) for first, fourth and fifth kinds.
        #[arg(long)]
        axis: Option<usize>,
        /// Two distinct axes i,j for the intermediate kind.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        axes: Option<Vec<usize>>,
        #[arg(long, allow_negative_numbers = true)]
        c1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        c2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        s: Option<f64>,
        /// Orthant signs such as "+-+".
        #[arg(long)]
        signs: Option<String>,
        /// Third kind: this many s values evenly spaced in angle over the
        /// feasible range.
        #[arg(long)]
        s_grid: Option<usize>,
        #[arg(long)]
        short_axis: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        diagonal: Option<i8>,
        #[arg(long, allow_negative_numbers = true)]
        sense: Option<i8>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// Number of draws; parameters not given are drawn at random.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Third-kind branch structure.
    Scan {
        #[arg(long, default_value = "+++")]
        signs: String,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Also write every branch sample as CSV.
        #[arg(long)]
        samples_csv: Option<PathBuf>,
    },
    /// Classify the motions in a motion file.
    Classify {
        #[arg(long)]
        motion: PathBuf,
    },
    /// Infinitesimal mobility of the tetrahedron pair or a pyramid pair.
    Mobility {
        /// n and lateral/basic edge ratio; with --regular only n.
        #[arg(long, num_args = 1..=2)]
        pyramid: Option<Vec<f64>>,
        /// Use the ratio making the lateral faces equilateral.
        #[arg(long)]
        regular: bool,
    },
    /// Newton-refine random seeds and classify the converged motions.
    Probe {
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
    },
    /// Residuals of the motions in a motion file.
    Check {
        #[arg(long)]
        motion: PathBuf,
        /// Also test the one-sided relaxed condition.
        #[arg(long)]
        generalized: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config_hash: String,
    pub results: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// What a command produced: a JSON report or raw text (CSV).
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(RunReport),
    Text(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Report(r) => {
                let mut s = serde_json::to_string_pretty(r).expect("report serializes");
                s.push('\n');
                s
            }
            Output::Text(t) => t.clone(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn resolve_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(p) => Config::from_json(&read_file(p)?)?,
        None => Config::default(),
    };
    if let Some(d) = &cli.dims {
        let d: [f64; 3] = d.as_slice().try_into().map_err(|_| CliError::parse("--dims takes exactly three values d1,d2,d3"))?;
        config.dims = Some(d);
        config.matrix = None;
    }
    if config.dims.is_none() && config.matrix.is_none() {
        config.dims = Some([1.0; 3]);
    }
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    config.validate()?;
    Ok(config)
}

pub fn parse_signs(text: &str) -> Result<[i8; 3], CliError> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() != 3 {
        return Err(CliError::parse(format!("signs must be three of '+'/'-', got {text:?}")));
    }
    let mut out = [0i8; 3];
    for (o, c) in out.iter_mut().zip(chars) {
        *o = match c {
            '+' => 1,
            '-' => -1,
            _ => return Err(CliError::parse(format!("signs must be three of '+'/'-', got {text:?}"))),
        };
    }
    Ok(out)
}

fn motion_json(pair: &TetraPair, m: &RigidMotion, tol: &ClassifyTol) -> Value {
    let vertices: Vec<[f64; 3]> = pair.moved(m).iter().map(|v| (*v).into()).collect();
    json!({
        "rotation": <[[f64; 3]; 3]>::from(m.rotation),
        "axis_angle": m.rotation.to_axis_angle(0.0),
        "translation": <[f64; 3]>::from(m.translation),
        "max_residual": pair.scaled_residuals(m).max_abs(),
        "kind": classify(pair, m, tol),
        "vertices": vertices,
    })
}

fn random_sign(rng: &mut ChaCha8Rng) -> i8 {
    if rng.gen::<bool>() {
        1
    } else {
        -1
    }
}

#[allow(clippy::too_many_arguments)]
fn family_motions(
    config: &Config,
    kind: Family,
    axis: Option<usize>,
    axes: Option<Vec<usize>>,
    c1: Option<f64>,
    c2: Option<f64>,
    phi: Option<f64>,
    s: Option<f64>,
    signs: Option<String>,
    s_grid: Option<usize>,
    short_axis: Option<usize>,
    diagonal: Option<i8>,
    sense: Option<i8>,
    t: Option<f64>,
    samples: Option<usize>,
) -> Result<Vec<RigidMotion>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let n = samples.unwrap_or(1);
    let signs = signs.as_deref().map(parse_signs).transpose()?;
    let mut out = Vec::new();
    match kind {
        Family::Identity => out.push(RigidMotion::identity()),
        Family::First => {
            for _ in 0..n {
                let i = axis.unwrap_or_else(|| rng.gen_range(1..=3));
                let angle = phi.unwrap_or_else(|| rng.gen_range(0.0..TAU));
                out.push(first_kind(i, angle)?);
            }
        }
        Family::Intermediate => {
            let dims = config.box_dims()?;
            for _ in 0..n {
                let (i, j) = match &axes {
                    Some(a) => (a[0], a[1]),
                    None => {
                        let k = rng.gen_range(1..=3);
                        ((k % 3) + 1, ((k + 1) % 3) + 1)
                    }
                };
                let a = c1.unwrap_or_else(|| rng.gen_range(-1.0..1.0));
                let b = c2.unwrap_or_else(|| rng.gen_range(-1.0..1.0));
                let angle = phi.unwrap_or_else(|| {
                    let x: f64 = rng.gen_range(0.05..PI - 0.05);
                    if rng.gen::<bool>() { x } else { TAU - x }
                });
                out.push(intermediate_kind(&dims, i, j, a, b, angle)?);
            }
        }
        Family::Third => {
            let dims = config.box_dims()?;
            if let Some(count) = s_grid {
                let sg = signs.unwrap_or([1, 1, 1]);
                for s in third_kind_grid(&dims, count) {
                    out.push(third_kind(&dims, s, sg)?);
                }
            } else {
                let ranges = feasible_intervals(&dims);
                for _ in 0..n {
                    let sg = signs.unwrap_or_else(|| [random_sign(&mut rng), random_sign(&mut rng), random_sign(&mut rng)]);
                    let value = match s {
                        Some(v) => v,
                        None => loop {
                            let v = (rng.gen_range(0.0..PI) - 0.5 * PI).tan() * 1.5;
                            if ranges.iter().any(|iv| iv.contains(v)) && ((v * v) - 1.0).abs() > 1e-2 {
                                break v;
                            }
                        },
                    };
                    out.push(third_kind(&dims, value, sg)?);
                }
            }
        }
        Family::Fourth | Family::Fifth => {
            for _ in 0..n {
                let i = axis.unwrap_or_else(|| rng.gen_range(1..=3));
                let a = c1.unwrap_or_else(|| rng.gen_range(-2.0..2.0));
                let b = if kind == Family::Fourth { 0.0 } else { c2.unwrap_or_else(|| rng.gen_range(-2.0..2.0)) };
                out.push(fifth_kind(i, a, b)?);
            }
        }
        Family::Sixth => {
            let dims = config.box_dims()?;
            let k = match short_axis {
                Some(k) => k,
                None => (1..=3)
                    .find(|&k| sixth_kind_condition(&dims, k).unwrap_or(false))
                    .ok_or(Error::SixthKindCondition { k: 3 })?,
            };
            for _ in 0..n {
                let d = diagonal.unwrap_or_else(|| random_sign(&mut rng));
                let se = sense.unwrap_or_else(|| random_sign(&mut rng));
                let tt = t.unwrap_or_else(|| rng.gen_range(-2.0..2.0));
                out.push(sixth_kind(&dims, k, d, se, tt)?);
            }
        }
    }
    Ok(out)
}

/// `count` values of s, evenly spaced in angle over the feasible third-kind
/// range and kept away from s = ±1.
pub fn third_kind_grid(dims: &BoxDims, count: usize) -> Vec<f64> {
    let intervals = feasible_intervals(dims);
    let low = intervals.last().and_then(|iv| iv.hi).map_or(0.0, crate::geometry::angle_from_cot);
    let high = intervals.first().and_then(|iv| iv.lo).map_or(TAU, crate::geometry::angle_from_cot);
    (0..count)
        .map(|k| {
            let phi = low + (high - low) * (k as f64 + 1.0) / (count as f64 + 1.0);
            let half = 0.5 * phi;
            half.cos() / half.sin()
        })
        .filter(|s| ((s * s) - 1.0).abs() > 1e-6)
        .collect()
}

fn echo(args: &[String]) -> Vec<String> {
    args.iter().skip(1).cloned().collect()
}

fn report(args: &[String], config: &Config, results: Value) -> Output {
    Output::Report(RunReport {
        command: echo(args),
        config_hash: config.hash(),
        results,
        wall_time_s: None,
    })
}

fn sample_rows(pair: &TetraPair, samples: &[BranchSample], tol: &ClassifyTol) -> Vec<(RigidMotion, f64, String)> {
    samples
        .iter()
        .map(|x| (x.motion, x.max_residual, classify(pair, &x.motion, tol).tag().to_string()))
        .collect()
}

/// Runs the parsed command. `args` is only echoed into the report.
pub fn execute(cli: &Cli, args: &[String]) -> Result<Output, CliError> {
    if let Command::Mobility { pyramid: Some(p), regular } = &cli.command {
        let n = p[0];
        if n.fract() != 0.0 || n < 3.0 {
            return Err(CliError::validation(format!("pyramid n must be an integer ≥ 3, got {n}")));
        }
        let n = n as usize;
        let ratio = match (regular, p.get(1)) {
            (true, None) => regular_ratio(n),
            (false, Some(r)) => *r,
            _ => return Err(CliError::parse("--pyramid takes n and a ratio, or n with --regular")),
        };
        let structure = build_pyramid_pair(n, ratio)?;
        let mobility = infinitesimal_dof(&structure, &structure.rest_configuration(), 1e-10)?;
        let config = Config::default();
        return Ok(report(args, &config, json!({ "n": n, "ratio": ratio, "mobility": mobility })));
    }

    let config = resolve_config(cli)?;
    let tol = config.classify_tol();
    match &cli.command {
        Command::Families {
            kind,
            axis,
            axes,
            c1,
            c2,
            phi,
            s,
            signs,
            s_grid,
            short_axis,
            diagonal,
            sense,
            t,
            samples,
            format,
        } => {
            let pair = config.pair()?;
            let motions = family_motions(
                &config,
                *kind,
                *axis,
                axes.clone(),
                *c1,
                *c2,
                *phi,
                *s,
                signs.clone(),
                *s_grid,
                *short_axis,
                *diagonal,
                *sense,
                *t,
                *samples,
            )?;
            match format {
                Format::Csv => {
                    let rows: Vec<_> = motions
                        .iter()
                        .map(|m| (*m, pair.scaled_residuals(m).max_abs(), classify(&pair, m, &tol).tag().to_string()))
                        .collect();
                    Ok(Output::Text(csv_table(&rows)))
                }
                Format::Json => {
                    let items: Vec<Value> = motions.iter().map(|m| motion_json(&pair, m, &tol)).collect();
                    Ok(report(args, &config, json!({ "family": format!("{kind:?}").to_lowercase(), "motions": items })))
                }
            }
        }
        Command::Scan { signs, resolution, samples_csv } => {
            let dims = config.box_dims()?;
            let signs = parse_signs(signs)?;
            let branch = branch_scan(&dims, signs, *resolution)?;
            if let Some(path) = samples_csv {
                let rows = sample_rows(&TetraPair::from_box(&dims), &branch.samples, &tol);
                std::fs::write(path, csv_table(&rows))
                    .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            }
            Ok(report(args, &config, serde_json::to_value(&branch).expect("report serializes")))
        }
        Command::Classify { motion } => {
            let pair = config.pair()?;
            let motions = parse_motions(&read_file(motion)?)?;
            let items: Vec<Value> = motions
                .iter()
                .map(|m| {
                    json!({
                        "max_residual": pair.scaled_residuals(m).max_abs(),
                        "classification": classify(&pair, m, &tol),
                    })
                })
                .collect();
            Ok(report(args, &config, json!({ "motions": items })))
        }
        Command::Mobility { .. } => {
            let structure = tetra_pair_as_bar_structure(&config.box_dims()?)?;
            let mobility = infinitesimal_dof(&structure, &structure.rest_configuration(), 1e-10)?;
            Ok(report(args, &config, json!({ "structure": "tetrahedron pair", "mobility": mobility })))
        }
        Command::Probe { seeds } => {
            let probe = completeness_probe(&config.box_dims()?, *seeds, config.seed())?;
            Ok(report(args, &config, serde_json::to_value(&probe).expect("report serializes")))
        }
        Command::Check { motion, generalized } => {
            let pair = config.pair()?;
            let motions = parse_motions(&read_file(motion)?)?;
            let signs = if *generalized { Some(reference_signs(&pair)?) } else { None };
            let items: Vec<Value> = motions
                .iter()
                .map(|m| {
                    let scaled = pair.scaled_residuals(m);
                    let mut v = json!({
                        "residuals": pair.residuals(m).0,
                        "scaled_residuals": scaled.0,
                        "max_residual": scaled.max_abs(),
                        "admitted": scaled.max_abs() <= tol.residual,
                    });
                    if let Some(conv) = &signs {
                        v["generalized"] = json!({
                            "signs": conv.0,
                            "admissible": generalized_admissible(&pair, m, conv, ZERO_BAND),
                        });
                    }
                    v
                })
                .collect();
            Ok(report(args, &config, json!({ "motions": items })))
        }
    }
}

/// Entry point shared by the binary and the tests: parses `args`, runs the
/// command, writes output, and returns the exit code.
pub fn run(args: &[String], stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let start = Instant::now();
    let output = match execute(&cli, args) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.code;
        }
    };
    let output = match output {
        Output::Report(mut r) if cli.timing => {
            r.wall_time_s = Some(start.elapsed().as_secs_f64());
            Output::Report(r)
        }
        o => o,
    };
    let text = output.render();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return EXIT_VALIDATION;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        std::iter::once("tetraflex").chain(list.iter().copied()).map(String::from).collect()
    }

    fn run_capture(list: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&args(list), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_validation() {
        assert!(Config::from_json(r#"{"dims": [1, 2, 3], "seed": 4}"#).unwrap().validate().is_ok());
        let both = Config::from_json(r#"{"dims": [1, 2, 3], "matrix": [[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        assert_eq!(both.validate().unwrap_err().code, EXIT_VALIDATION);
        let neg = Config::from_json(r#"{"matrix": [[-1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        assert_eq!(neg.validate().unwrap_err().code, EXIT_VALIDATION);
        let err = Config::from_json("{\n  \"dims\": [1, 2,\n").unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
        assert!(err.message.contains("line"));
        assert_eq!(Config::from_json(r#"{"dimz": [1,1,1]}"#).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn hash_is_stable() {
        let a = Config { dims: Some([1.0, 2.0, 3.0]), seed: Some(1), ..Config::default() };
        assert_eq!(a.hash(), a.clone().hash());
        assert_ne!(a.hash(), Config { seed: Some(2), ..a.clone() }.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn signs_parse() {
        assert_eq!(parse_signs("+-+").unwrap(), [1, -1, 1]);
        assert!(parse_signs("++").is_err());
        assert!(parse_signs("+x+").is_err());
    }

    #[test]
    fn motion_record_round_trip() {
        let m = third_kind(&BoxDims::new(1.0, 1.2, 0.9).unwrap(), 0.3, [1, 1, -1]).unwrap();
        let text = serde_json::to_string(&MotionRecord::from_motion(&m)).unwrap();
        let back = parse_motions(&text).unwrap();
        assert_eq!(back, vec![m]);
        assert_eq!(parse_motions(&format!("[{text},{text}]")).unwrap().len(), 2);
        assert_eq!(parse_motions("{\"rotation\": [[1,0,0]]").unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn csv_columns() {
        let row = csv_row(&fifth_kind(3, 0.5, 0.0).unwrap(), 0.0, "fourth");
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.ends_with(",fourth"));
    }

    #[test]
    fn first_kind_command() {
        let (code, out, _) = run_capture(&["families", "--kind", "first", "--axis", "3", "--phi", "0.7"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let motions = v["results"]["motions"].as_array().unwrap();
        assert_eq!(motions.len(), 1);
        assert_eq!(motions[0]["translation"], json!([0.0, 0.0, 0.0]));
    }

    #[test]
    fn sixth_kind_on_cube_is_infeasible() {
        let (code, _, err) = run_capture(&["families", "--kind", "sixth"]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert!(err.contains("not satisfied"), "{err}");
    }

    #[test]
    fn unknown_flag_is_parse_error() {
        let (code, _, _) = run_capture(&["families", "--kind", "first", "--bogus"]);
        assert_eq!(code, EXIT_PARSE);
    }
}
