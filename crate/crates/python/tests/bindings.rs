use pyo3::prelude::*;
use pyo3::types::PyDict;

fn module(py: Python<'_>) -> Bound<'_, PyModule> {
    let m = PyModule::new(py, "pyorbivertex").unwrap();
    pyorbivertex::register(&m).unwrap();
    m
}

#[test]
fn character_table_rows() {
    Python::attach(|py| {
        let m = module(py);
        let (labels, rows): (Vec<Vec<u32>>, Vec<Vec<i64>>) =
            m.getattr("character_table").unwrap().call1((3,)).unwrap().extract().unwrap();
        assert_eq!(labels, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(rows[2], vec![1, -1, 1]);
    });
}

#[test]
fn disk_series_coefficients() {
    Python::attach(|py| {
        let m = module(py);
        let kw = PyDict::new(py);
        kw.set_item("x_order", 0).unwrap();
        kw.set_item("lambda_order", 3).unwrap();
        let g = m.getattr("g_bullet").unwrap().call((1, vec![1u32]), Some(&kw)).unwrap();
        let exps = PyDict::new(py);
        exps.set_item("lambda", "1").unwrap();
        let c: String = g.call_method1("coefficient", (exps,)).unwrap().extract().unwrap();
        assert_eq!(c, "1/24");
    });
}

#[test]
fn errors_become_value_errors() {
    Python::attach(|py| {
        let m = module(py);
        let err = m.getattr("verify").unwrap().call1(("nonsense",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let err = m.getattr("Partition").unwrap().call1((vec![1u32, 2],)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
