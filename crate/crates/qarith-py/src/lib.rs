//! Python bindings: circuits, builders, simulation and metrics.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qarith::io::{emit_qasm, parse_qasm, RoleSidecar};
use qarith::metrics::{nisq_check, predicted_report, resource_report, FidelityConvention};
use qarith::rotation::{build_shear_circuit, Axis, ImageGrid, ShearCase};
use qarith::sim::{measure as measure_state, run_classical, run_statevector, unitary_of, StateVector};
use qarith::{arithmetic, lowering, qft, BasisState, DepthConvention, Gate, QubitId};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any().unbind(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any().unbind(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

/// A quantum circuit with qubit roles and a block hierarchy.
#[pyclass(name = "Circuit", module = "qarith")]
struct PyCircuit {
    inner: qarith::Circuit,
}

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn from_qasm(text: &str, roles_json: Option<&str>) -> PyResult<Self> {
        let c = parse_qasm(text).map_err(err)?;
        let c = match roles_json {
            Some(j) => RoleSidecar::from_json(j).and_then(|r| r.apply(&c)).map_err(err)?,
            None => c,
        };
        Ok(PyCircuit { inner: c })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn gate_count(&self) -> usize {
        self.inner.gate_count()
    }

    /// Register name to qubit indices.
    #[getter]
    fn registers(&self) -> Vec<(String, Vec<usize>)> {
        self.inner
            .registers()
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|q| q.0).collect()))
            .collect()
    }

    fn to_qasm(&self) -> String {
        emit_qasm(&self.inner)
    }

    /// Roles sidecar, indexed like the qubits of `to_qasm()`.
    fn roles_json(&self) -> String {
        RoleSidecar::of(&self.inner).to_json()
    }

    fn lower(&self) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: lowering::lower(&self.inner).map_err(err)?,
        })
    }

    fn invert(&self) -> Self {
        PyCircuit {
            inner: self.inner.invert(),
        }
    }

    fn bennett_wrap(&self, results: Vec<usize>) -> PyResult<Self> {
        let results: Vec<QubitId> = results.into_iter().map(QubitId).collect();
        Ok(PyCircuit {
            inner: lowering::bennett_wrap(&self.inner, &results).map_err(err)?,
        })
    }

    /// Resource report of a lowered circuit; `convention` is "scheduled" or "serial".
    #[pyo3(signature = (convention = "scheduled"))]
    fn metrics(&self, py: Python<'_>, convention: &str) -> PyResult<Py<PyAny>> {
        let convention: DepthConvention = convention.parse().map_err(err)?;
        let report = resource_report(&self.inner, convention).map_err(err)?;
        to_py(py, &serde_json::to_value(report).map_err(err)?)
    }

    /// Classical run on a bit string (character i is qubit i).
    fn run_classical(&self, bits: &str) -> PyResult<String> {
        let input = BasisState::parse(bits).ok_or_else(|| err("bits must be 0/1 characters"))?;
        Ok(run_classical(&self.inner, &input).map_err(err)?.to_string())
    }

    fn run_statevector(&self, amplitudes: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let psi = StateVector::from_amplitudes(amplitudes).map_err(err)?;
        Ok(run_statevector(&self.inner, &psi).map_err(err)?.into_amplitudes())
    }

    /// Dense unitary as a list of rows.
    fn unitary(&self) -> PyResult<Vec<Vec<Complex64>>> {
        let u = unitary_of(&self.inner).map_err(err)?;
        Ok((0..u.dim()).map(|r| (0..u.dim()).map(|c| u.get(r, c)).collect()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Circuit(n_qubits={}, gates={})", self.inner.n_qubits(), self.inner.gate_count())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn wrap<E: std::fmt::Display>(r: Result<qarith::Circuit, E>) -> PyResult<PyCircuit> {
    r.map(|inner| PyCircuit { inner }).map_err(err)
}

#[pyfunction]
fn build_adder(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_adder(n))
}

#[pyfunction]
fn build_subtractor(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_subtractor(n))
}

#[pyfunction]
fn build_addsub(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_addsub(n))
}

#[pyfunction]
fn build_conditional_adder(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_conditional_adder(n))
}

#[pyfunction]
fn build_multiplier(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_multiplier(n))
}

#[pyfunction]
fn build_divider(n: usize) -> PyResult<PyCircuit> {
    wrap(arithmetic::build_divider(n))
}

#[pyfunction]
fn build_qft(n: usize) -> PyResult<PyCircuit> {
    wrap(qft::build_qft(n))
}

/// `axis` is "horizontal" or "vertical", `case` is "le" or "gt".
#[pyfunction]
fn build_shear(axis: &str, case: &str, n: usize, frac: usize) -> PyResult<PyCircuit> {
    let axis = match axis {
        "horizontal" => Axis::Horizontal,
        "vertical" => Axis::Vertical,
        _ => return Err(err(format!("unknown axis `{axis}`"))),
    };
    let case = match case {
        "le" => ShearCase::LeRef,
        "gt" => ShearCase::GtRef,
        _ => return Err(err(format!("unknown case `{case}`"))),
    };
    wrap(build_shear_circuit(axis, case, n, frac).map(|(c, _)| c))
}

#[pyfunction]
fn toffoli() -> PyResult<PyCircuit> {
    let mut c = qarith::Circuit::plain(3).map_err(err)?;
    c.append(Gate::toffoli(QubitId(0), QubitId(1), QubitId(2))).map_err(err)?;
    Ok(PyCircuit { inner: c })
}

#[pyfunction]
fn fredkin() -> PyResult<PyCircuit> {
    let mut c = qarith::Circuit::plain(3).map_err(err)?;
    c.append(Gate::fredkin(QubitId(0), QubitId(1), QubitId(2))).map_err(err)?;
    Ok(PyCircuit { inner: c })
}

#[pyfunction]
fn nonrestoring_reference(a: u64, b: u64, n: usize) -> PyResult<(u64, u64)> {
    arithmetic::nonrestoring_reference(a, b, n).map_err(err)
}

/// Closed-form costs of "adder" or "conditional_adder".
#[pyfunction]
fn predicted(py: Python<'_>, family: &str, n: u64) -> PyResult<Py<PyAny>> {
    let p = predicted_report(family, n).map_err(err)?;
    to_py(py, &serde_json::to_value(p).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, epsilon, convention = "paper"))]
fn nisq_verdict(a: f64, epsilon: f64, convention: &str) -> PyResult<String> {
    let convention: FidelityConvention = convention.parse().map_err(err)?;
    Ok(nisq_check(a, epsilon, convention).map_err(err)?.to_string())
}

/// Seeded measurement histogram keyed by bit string.
#[pyfunction]
#[pyo3(signature = (amplitudes, shots, seed = 0))]
fn measure(amplitudes: Vec<Complex64>, shots: usize, seed: u64) -> PyResult<Vec<(String, usize)>> {
    let psi = StateVector::from_amplitudes(amplitudes).map_err(err)?;
    let n = psi.n_qubits();
    let (_, hist) = measure_state(&psi, shots, seed).map_err(err)?;
    Ok(hist
        .into_iter()
        .map(|(i, c)| ((0..n).map(|b| if i >> b & 1 == 1 { '1' } else { '0' }).collect(), c))
        .collect())
}

/// Three-shear rotation of a square image given as rows.
#[pyfunction]
#[pyo3(signature = (rows, theta_deg, frac = 8))]
fn rotate_image(rows: Vec<Vec<u32>>, theta_deg: f64, frac: u32) -> PyResult<Vec<Vec<u32>>> {
    let side = rows.len();
    if rows.iter().any(|r| r.len() != side) {
        return Err(err("image must be square"));
    }
    let grid = ImageGrid::new(side, rows.into_iter().flatten().collect()).map_err(err)?;
    let out = qarith::rotation::rotate_image(&grid, theta_deg.to_radians(), frac).map_err(err)?;
    Ok(out.pixels().chunks(side).map(<[u32]>::to_vec).collect())
}

#[pymodule]
#[pyo3(name = "qarith")]
fn qarith_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(build_adder, m)?)?;
    m.add_function(wrap_pyfunction!(build_subtractor, m)?)?;
    m.add_function(wrap_pyfunction!(build_addsub, m)?)?;
    m.add_function(wrap_pyfunction!(build_conditional_adder, m)?)?;
    m.add_function(wrap_pyfunction!(build_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(build_divider, m)?)?;
    m.add_function(wrap_pyfunction!(build_qft, m)?)?;
    m.add_function(wrap_pyfunction!(build_shear, m)?)?;
    m.add_function(wrap_pyfunction!(toffoli, m)?)?;
    m.add_function(wrap_pyfunction!(fredkin, m)?)?;
    m.add_function(wrap_pyfunction!(nonrestoring_reference, m)?)?;
    m.add_function(wrap_pyfunction!(predicted, m)?)?;
    m.add_function(wrap_pyfunction!(nisq_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_image, m)?)?;
    Ok(())
}
