//! Python bindings for `layerpot`.
//!
//! Densities are passed as lists of `(b, c, coefficient)` terms of `x^b y^c` in
//! the element frame, or as shape functions of a Lagrange family.

use layerpot::oracle::adaptive_potentials;
use layerpot::{
    evaluate_monomials, shape_potentials, ElementGeometry, EvalRequest, HelmholtzRoute, Kernel, Location,
    MonomialExpansion, MonomialPotentials, PotentialQuad, ShapeSet, Vec3, C64,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(layerpot_py, LayerpotError, PyException);

fn to_py(e: layerpot::Error) -> PyErr {
    match e {
        layerpot::Error::InvalidInput(_) | layerpot::Error::DegenerateElement { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => LayerpotError::new_err(e.to_string()),
    }
}

fn kernel(name: &str, k: f64) -> PyResult<Kernel> {
    match name {
        "laplace" => Ok(Kernel::Laplace),
        "helmholtz" if k > 0.0 && k.is_finite() => Ok(Kernel::Helmholtz { k }),
        "helmholtz" => Err(PyValueError::new_err("helmholtz kernel needs a positive wavenumber k")),
        other => Err(PyValueError::new_err(format!("unknown kernel {other:?}"))),
    }
}

fn route(name: &str) -> PyResult<HelmholtzRoute> {
    match name {
        "auto" => Ok(HelmholtzRoute::Auto),
        "recursion" => Ok(HelmholtzRoute::Recursion),
        "low_frequency" => Ok(HelmholtzRoute::LowFrequency),
        other => Err(PyValueError::new_err(format!("unknown route {other:?}"))),
    }
}

fn density(terms: &[(usize, usize, f64)]) -> MonomialExpansion {
    let order = terms.iter().map(|&(b, c, _)| b + c).max().unwrap_or(0);
    let mut m = MonomialExpansion::zeros(order);
    for &(b, c, v) in terms {
        m.set(b, c, m.get(b, c) + v);
    }
    m
}

/// A flat triangle.
#[pyclass(name = "Element", module = "layerpot_py", frozen)]
struct PyElement {
    inner: ElementGeometry,
}

#[pymethods]
impl PyElement {
    #[new]
    fn new(vertices: [[f64; 3]; 3]) -> PyResult<Self> {
        ElementGeometry::from_arrays(vertices).map(|inner| Self { inner }).map_err(to_py)
    }

    #[getter]
    fn vertices(&self) -> [[f64; 3]; 3] {
        self.inner.vertices.map(|v| [v.x, v.y, v.z])
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter
    }

    #[getter]
    fn normal(&self) -> [f64; 3] {
        let n = self.inner.k_hat;
        [n.x, n.y, n.z]
    }

    /// Global coordinates to the element frame `(x, y, z)`.
    fn to_local(&self, point: [f64; 3]) -> [f64; 3] {
        let l = self.inner.to_local(&Vec3::from(point));
        [l.x, l.y, l.z]
    }

    /// Projection of `point` onto the element plane.
    fn project<'py>(&self, py: Python<'py>, point: [f64; 3]) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.project(&Vec3::from(point));
        let d = PyDict::new(py);
        d.set_item("x", p.x_p)?;
        d.set_item("y", p.y_p)?;
        d.set_item("h", p.h)?;
        d.set_item("barycentric", p.barycentric)?;
        let location = match p.location {
            Location::StrictInterior => "interior",
            Location::OnContour => "contour",
            Location::StrictExterior => "exterior",
        };
        d.set_item("location", location)?;
        d.set_item("vertex", p.vertex)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Element(vertices={:?})", self.vertices())
    }
}

/// The four potentials of one density at one point.
///
/// `k_prime` and `d` are `None` when no observation normal was given.
#[pyclass(name = "Potentials", module = "layerpot_py", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyPotentials {
    v: C64,
    k: C64,
    k_prime: Option<C64>,
    d: Option<C64>,
}

impl From<PotentialQuad> for PyPotentials {
    fn from(q: PotentialQuad) -> Self {
        Self { v: q.v, k: q.k, k_prime: q.kp, d: q.d }
    }
}

#[pymethods]
impl PyPotentials {
    fn __repr__(&self) -> String {
        format!("Potentials(v={}, k={}, k_prime={:?}, d={:?})", self.v, self.k, self.k_prime, self.d)
    }
}

/// Potentials of every monomial `x^b y^c` with `b + c <= order`.
#[pyclass(name = "MonomialPotentials", module = "layerpot_py", frozen)]
struct PyMonomialPotentials {
    inner: MonomialPotentials,
}

#[pymethods]
impl PyMonomialPotentials {
    #[getter]
    fn order(&self) -> usize {
        self.inner.meta.order
    }

    /// Taylor terms used on the edges, when a Helmholtz recursion ran.
    #[getter]
    fn p_e(&self) -> Option<usize> {
        self.inner.meta.p_e
    }

    /// Weight of the point term: 1 inside the element, 0 outside.
    #[getter]
    fn point_weight(&self) -> f64 {
        self.inner.meta.point_weight
    }

    fn get(&self, b: usize, c: usize) -> PyResult<PyPotentials> {
        if b + c > self.inner.meta.order {
            return Err(PyValueError::new_err(format!("monomial ({b}, {c}) exceeds order {}", self.inner.meta.order)));
        }
        Ok((*self.inner.get(b, c)).into())
    }

    /// Potentials of `sum coefficient * x^b y^c`.
    fn contract(&self, terms: Vec<(usize, usize, f64)>) -> PyResult<PyPotentials> {
        let m = density(&terms);
        if m.order() > self.inner.meta.order {
            return Err(PyValueError::new_err("density degree exceeds the evaluated order"));
        }
        Ok(self.inner.contract(&m).into())
    }
}

fn request(
    element: &PyElement,
    point: [f64; 3],
    kernel_name: &str,
    k: f64,
    order: usize,
    normal: Option<[f64; 3]>,
    route_name: &str,
) -> PyResult<EvalRequest> {
    let mut req = EvalRequest::new(element.inner.clone(), Vec3::from(point), kernel(kernel_name, k)?, order)
        .with_route(route(route_name)?);
    if let Some(n) = normal {
        req = req.with_normal(Vec3::from(n));
    }
    Ok(req)
}

/// Potentials of all monomials up to `order` at `point`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (element, point, order, kernel = "laplace", k = 0.0, normal = None, route = "auto"))]
fn monomials(
    py: Python<'_>,
    element: &PyElement,
    point: [f64; 3],
    order: usize,
    kernel: &str,
    k: f64,
    normal: Option<[f64; 3]>,
    route: &str,
) -> PyResult<PyMonomialPotentials> {
    let req = request(element, point, kernel, k, order, normal, route)?;
    let inner = py.detach(|| evaluate_monomials(&req)).map_err(to_py)?;
    Ok(PyMonomialPotentials { inner })
}

/// Potentials of one polynomial density given as `(b, c, coefficient)` terms.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (element, point, density, kernel = "laplace", k = 0.0, normal = None, route = "auto"))]
fn evaluate(
    py: Python<'_>,
    element: &PyElement,
    point: [f64; 3],
    density: Vec<(usize, usize, f64)>,
    kernel: &str,
    k: f64,
    normal: Option<[f64; 3]>,
    route: &str,
) -> PyResult<PyPotentials> {
    let m = self::density(&density);
    let req = request(element, point, kernel, k, m.order(), normal, route)?;
    let mono = py.detach(|| evaluate_monomials(&req)).map_err(to_py)?;
    Ok(mono.contract(&m).into())
}

/// Potentials of each Lagrange shape function of the given order, in node order.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (element, point, order, kernel = "laplace", k = 0.0, normal = None, route = "auto"))]
fn lagrange(
    py: Python<'_>,
    element: &PyElement,
    point: [f64; 3],
    order: usize,
    kernel: &str,
    k: f64,
    normal: Option<[f64; 3]>,
    route: &str,
) -> PyResult<Vec<PyPotentials>> {
    let req = request(element, point, kernel, k, order, normal, route)?;
    let shapes = ShapeSet::lagrange(&element.inner, order).map_err(to_py)?;
    let quads = py.detach(|| shape_potentials(&req, &shapes)).map_err(to_py)?;
    Ok(quads.into_iter().map(Into::into).collect())
}

/// Adaptive quadrature reference for `(V, K, K', D)`; the normal defaults to the element normal.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (element, point, density, kernel = "laplace", k = 0.0, normal = None, tol = 1e-12))]
fn reference(
    py: Python<'_>,
    element: &PyElement,
    point: [f64; 3],
    density: Vec<(usize, usize, f64)>,
    kernel: &str,
    k: f64,
    normal: Option<[f64; 3]>,
    tol: f64,
) -> PyResult<(C64, C64, C64, C64)> {
    let m = self::density(&density);
    let kern = self::kernel(kernel, k)?;
    let n = normal.map(Vec3::from).unwrap_or(element.inner.k_hat);
    let r = py
        .detach(|| adaptive_potentials(&element.inner, &m, kern, &Vec3::from(point), &n, tol))
        .map_err(to_py)?;
    let [v, kk, kp, d] = r.values;
    Ok((v, kk, kp, d))
}

/// Add the classes and functions of the extension to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyPotentials>()?;
    m.add_class::<PyMonomialPotentials>()?;
    m.add_function(wrap_pyfunction!(monomials, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(lagrange, m)?)?;
    m.add_function(wrap_pyfunction!(reference, m)?)?;
    m.add("LayerpotError", m.py().get_type::<LayerpotError>())?;
    Ok(())
}

#[pymodule]
fn layerpot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
