//! Python bindings. Results cross the boundary as JSON and come out as
//! plain dicts and lists; the `*_json` functions are the Rust-side cores.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use tetraflex::cli::{self, parse_motions, parse_signs};
use tetraflex::families::{third_kind, ClassifyTol};
use tetraflex::manifold::{connectivity_class, feasible_intervals};
use tetraflex::{classify, BoxDims, TetraPair};

fn box_of(dims: [f64; 3]) -> Result<BoxDims, String> {
    BoxDims::new(dims[0], dims[1], dims[2]).map_err(|e| e.to_string())
}

/// The third-kind motion of a box at cotangent s with orthant signs like "+-+".
pub fn third_kind_json(dims: [f64; 3], s: f64, signs: &str) -> Result<Value, String> {
    let dims = box_of(dims)?;
    let signs = parse_signs(signs).map_err(|e| e.to_string())?;
    let m = third_kind(&dims, s, signs).map_err(|e| e.to_string())?;
    let pair = TetraPair::from_box(&dims);
    Ok(json!({
        "rotation": <[[f64; 3]; 3]>::from(m.rotation),
        "translation": <[f64; 3]>::from(m.translation),
        "max_residual": pair.scaled_residuals(&m).max_abs(),
    }))
}

/// Classification and scaled residuals of one motion given as
/// `{"rotation": [[..]], "translation": [..]}`.
pub fn classify_json(dims: [f64; 3], motion: &str) -> Result<Value, String> {
    let dims = box_of(dims)?;
    let motions = parse_motions(motion).map_err(|e| e.to_string())?;
    let pair = TetraPair::from_box(&dims);
    let items: Vec<Value> = motions
        .iter()
        .map(|m| {
            json!({
                "classification": classify(&pair, m, &ClassifyTol::default()),
                "scaled_residuals": pair.scaled_residuals(m).0,
            })
        })
        .collect();
    Ok(match items.len() {
        1 => items.into_iter().next().unwrap(),
        _ => Value::Array(items),
    })
}

/// Component class and feasible s-intervals of the third-kind branch.
pub fn connectivity_json(dims: [f64; 3]) -> Result<Value, String> {
    let dims = box_of(dims)?;
    Ok(json!({
        "class": connectivity_class(&dims),
        "max_share": dims.max_share(),
        "intervals": feasible_intervals(&dims),
    }))
}

/// Runs the command-line tool in-process on `args` (without a program
/// name): (exit code, stdout, stderr).
pub fn run_cli(args: &[String]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("tetraflex".to_string()).chain(args.iter().cloned()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(&argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn to_py<'py>(py: Python<'py>, result: Result<Value, String>) -> PyResult<Bound<'py, PyAny>> {
    let value = result.map_err(PyValueError::new_err)?;
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

#[pyfunction]
#[pyo3(name = "third_kind", signature = (dims, s, signs = "+++"))]
fn py_third_kind<'py>(py: Python<'py>, dims: [f64; 3], s: f64, signs: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, third_kind_json(dims, s, signs))
}

#[pyfunction]
#[pyo3(name = "classify")]
fn py_classify<'py>(py: Python<'py>, dims: [f64; 3], motion: Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (motion,))?.extract()?;
    to_py(py, classify_json(dims, &text))
}

#[pyfunction]
#[pyo3(name = "connectivity")]
fn py_connectivity<'py>(py: Python<'py>, dims: [f64; 3]) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, connectivity_json(dims))
}

#[pyfunction]
#[pyo3(name = "run")]
fn py_run(args: Vec<String>) -> (i32, String, String) {
    run_cli(&args)
}

#[pymodule]
pub fn tetraflex_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(py_third_kind, m)?)?;
    m.add_function(wrap_pyfunction!(py_classify, m)?)?;
    m.add_function(wrap_pyfunction!(py_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(py_run, m)?)?;
    Ok(())
}
