use pyo3::prelude::*;
use pyo3::types::PyDict;
use tetraflex_py::{classify_json, connectivity_json, run_cli, third_kind_json};

#[test]
fn third_kind_round_trips_through_classify() {
    let motion = third_kind_json([1.0, 1.3, 0.8], 0.3, "+-+").unwrap();
    assert!(motion["max_residual"].as_f64().unwrap() < 1e-12);
    let classified = classify_json([1.0, 1.3, 0.8], &motion.to_string()).unwrap();
    assert_eq!(classified["classification"]["kind"], "third");
    assert_eq!(classified["scaled_residuals"].as_array().unwrap().len(), 6);
}

#[test]
fn errors_are_messages() {
    assert!(third_kind_json([1.0, 1.3, 0.8], 5.0, "+-+").unwrap_err().contains("infeasible"));
    assert!(third_kind_json([1.0, 1.3, 0.8], 0.3, "+x+").is_err());
    assert!(connectivity_json([1.0, -1.0, 1.0]).is_err());
    assert!(classify_json([1.0, 1.0, 1.0], "{}").is_err());
}

#[test]
fn connectivity_of_a_generic_box() {
    let report = connectivity_json([1.0, 1.3, 0.8]).unwrap();
    assert_eq!(report["class"], "three_components");
    assert_eq!(report["intervals"].as_array().unwrap().len(), 3);
}

#[test]
fn cli_runs_in_process() {
    let args: Vec<String> = ["mobility", "--pyramid", "5", "--regular"].map(String::from).to_vec();
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["results"]["mobility"]["dof"], 1);
    assert_eq!(run_cli(&["families".to_string()]).0, 4);
}

#[test]
fn module_functions_return_python_objects() {
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::new(py, "tetraflex_py").unwrap();
        tetraflex_py::tetraflex_py(&module).unwrap();
        let motion = module.getattr("third_kind").unwrap().call1(([1.0, 1.3, 0.8], 0.3, "+-+")).unwrap();
        assert!(motion.cast::<PyDict>().is_ok());
        let result = module.getattr("classify").unwrap().call1(([1.0, 1.3, 0.8], motion)).unwrap();
        let kind: String = result.get_item("classification").unwrap().get_item("kind").unwrap().extract().unwrap();
        assert_eq!(kind, "third");
        let err = module.getattr("connectivity").unwrap().call1(([0.0, 1.0, 1.0],)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
