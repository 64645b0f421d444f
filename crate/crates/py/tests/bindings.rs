use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(script: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "layerpot_py").unwrap();
        layerpot_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("lp", m).unwrap();
        if let Err(e) = py.run(script, Some(&globals), None) {
            e.display(py);
            panic!("python script failed");
        }
    });
}

#[test]
fn evaluate_matches_reference() {
    with_module(c_str!(
        r#"
e = lp.Element([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
got = lp.evaluate(e, [0.3, 0.2, 0.01], [(0, 0, 1.0), (2, 0, 0.5)], kernel="helmholtz", k=1.0, normal=e.normal)
want = lp.reference(e, [0.3, 0.2, 0.01], [(0, 0, 1.0), (2, 0, 0.5)], kernel="helmholtz", k=1.0)
for g, w in zip([got.v, got.k, got.k_prime, got.d], want):
    assert abs(g - w) <= 1e-9 * abs(w), (g, w)
"#
    ));
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(c_str!(
        r#"
e = lp.Element([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
try:
    lp.evaluate(e, [0.0, 0.0, 0.0], [(0, 0, 1.0)])
    raise AssertionError("vertex accepted")
except lp.LayerpotError:
    pass
try:
    lp.monomials(e, [0.2, 0.2, 0.2], 2, kernel="yukawa")
    raise AssertionError("unknown kernel accepted")
except ValueError:
    pass
"#
    ));
}
