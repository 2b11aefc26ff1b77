//! Python bindings: scenarios, singular points, the identity suite and tracing.

// pyo3 0.22 macro expansion trips this lint on every PyResult function.
#![allow(clippy::useless_conversion)]

use fdoa_core::identities::run_suite;
use fdoa_core::maps::{membership as member, VarietyId};
use fdoa_core::singularities::{
    genus_degree as genus, hc_singularities, v_singularities, z_singularities,
};
use fdoa_core::tracer::{self, TraceConfig};
use fdoa_core::{Error, Frame, ProjPoint, Scalar, Scenario as CoreScenario};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: Error) -> PyErr {
    match e {
        Error::ScenarioParse(_) | Error::InvalidConfig(_) | Error::Scalar(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<PyObject> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_py(py),
        },
        Value::String(s) => s.into_py(py),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new_bound(py, items).into_py(py)
        }
        Value::Object(m) => {
            let d = PyDict::new_bound(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py(py)
        }
    })
}

fn scalar(text: &str) -> PyResult<Scalar> {
    Scalar::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn frame(name: &str) -> PyResult<Frame> {
    [
        Frame::Original,
        Frame::Plane,
        Frame::W,
        Frame::Z,
        Frame::U,
        Frame::Q,
        Frame::P3,
        Frame::P1,
    ]
    .into_iter()
    .find(|f| f.name().eq_ignore_ascii_case(name))
    .ok_or_else(|| PyValueError::new_err(format!("unknown frame {name:?}")))
}

/// Velocities `v1 = (v11, v12)`, `v2 = (v21, v22)` and FDOA value `d`, given as exact literals.
#[pyclass(name = "Scenario", module = "fdoa_py")]
#[derive(Clone)]
struct Scenario {
    inner: CoreScenario,
}

#[pymethods]
impl Scenario {
    #[new]
    fn new(v11: &str, v12: &str, v21: &str, v22: &str, d: &str) -> PyResult<Self> {
        let inner = CoreScenario::new(
            scalar(v11)?,
            scalar(v12)?,
            scalar(v21)?,
            scalar(v22)?,
            scalar(d)?,
        )
        .map_err(err)?;
        Ok(Self { inner })
    }

    /// `v1 = v2 = (0, v)`.
    #[staticmethod]
    fn equal_velocity(v: &str, d: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoreScenario::equal_velocity(scalar(v)?, scalar(d)?).map_err(err)?,
        })
    }

    /// Parses `key=value` lines.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoreScenario::parse(text).map_err(err)?,
        })
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.inner.to_json())
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    fn satisfies_no_l_factors(&self) -> bool {
        self.inner.satisfies_no_l_factors()
    }

    fn __repr__(&self) -> String {
        format!("Scenario({})", self.inner)
    }
}

/// Singular points of `variety` ("HC_F", "V" or "Z") as a list of dicts.
#[pyfunction]
fn singularities(py: Python<'_>, scenario: &Scenario, variety: &str) -> PyResult<PyObject> {
    let s = &scenario.inner;
    let report = match variety {
        "HC_F" => hc_singularities(s),
        "V" => v_singularities(s),
        "Z" => z_singularities(s),
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown variety {variety:?}"
            )))
        }
    }
    .map_err(err)?;
    let lines = serde_json::Value::Array(report.to_json_lines());
    let out = PyDict::new_bound(py);
    out.set_item("points", to_py(py, &lines)?)?;
    out.set_item("genus", report.genus)?;
    Ok(out.into_py(py))
}

/// Runs the exact identity suite; returns a summary dict.
#[pyfunction]
#[pyo3(signature = (n = 100, seed = 0, inject_fault = None))]
fn check_identities(
    py: Python<'_>,
    n: usize,
    seed: u64,
    inject_fault: Option<&str>,
) -> PyResult<PyObject> {
    let report = py.allow_threads(|| run_suite(n, seed, None, inject_fault));
    let out = PyDict::new_bound(py);
    out.set_item("passed", report.all_passed())?;
    out.set_item("checks", report.results.len())?;
    out.set_item("failed_identities", report.failed_identities())?;
    Ok(out.into_py(py))
}

/// Traces the real curve; returns `{branch label: [polyline, ...]}` with
/// polylines as lists of `(y1, y2)` tuples.
#[pyfunction]
#[pyo3(signature = (scenario, window = (-3.0, 3.0, -3.0, 3.0), grid = 512, refine_depth = 3, zero_tol = 1e-10))]
fn trace(
    py: Python<'_>,
    scenario: &Scenario,
    window: (f64, f64, f64, f64),
    grid: usize,
    refine_depth: u32,
    zero_tol: f64,
) -> PyResult<PyObject> {
    let cfg = TraceConfig {
        window,
        grid: (grid, grid),
        refine_depth,
        zero_tol,
    };
    let s = scenario.inner.clone();
    let r = py.allow_threads(|| tracer::trace(&s, &cfg)).map_err(err)?;
    let out = PyDict::new_bound(py);
    for b in &r.branches {
        out.set_item(b.label.label(), b.polylines.clone())?;
    }
    Ok(out.into_py(py))
}

/// Exact membership of a point (coordinates as exact literals) in a variety.
#[pyfunction]
#[pyo3(signature = (coords, frame_name, variety, scenario = None))]
fn membership(
    coords: Vec<String>,
    frame_name: &str,
    variety: &str,
    scenario: Option<&Scenario>,
) -> PyResult<bool> {
    let f = frame(frame_name)?;
    let c = coords
        .iter()
        .map(|t| scalar(t))
        .collect::<PyResult<Vec<_>>>()?;
    let pt = ProjPoint::new(f, c).map_err(err)?;
    let need = || {
        scenario
            .map(|s| s.inner.clone())
            .ok_or_else(|| PyValueError::new_err("scenario required"))
    };
    let v = match variety {
        "Y" => VarietyId::Y,
        "HC_F" => VarietyId::Hcf(need()?),
        "V" => VarietyId::V(need()?),
        "Z" => VarietyId::Z(need()?),
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown variety {variety:?}"
            )))
        }
    };
    member(&pt, &v).map_err(err)
}

/// `(degree - 1)(degree - 2) / 2` minus the deltas of `(multiplicity, delta)` pairs.
#[pyfunction]
fn genus_degree(degree: u32, data: Vec<(u32, u32)>) -> PyResult<i64> {
    genus(degree, &data).map_err(err)
}

#[pymodule]
fn fdoa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(singularities, m)?)?;
    m.add_function(wrap_pyfunction!(check_identities, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(genus_degree, m)?)?;
    Ok(())
}
