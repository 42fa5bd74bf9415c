//! Python bindings for the helike atomic-structure crate.
//!
//! Exposes the coupling constants, the closed-form hydrogen-like
//! eigensolutions, the correlated integral kernel, and the variational
//! ground-state solver. Build with maturin, or grab the cdylib from
//! `cargo build -p helike-python` and import it as `helike_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use helike::couplings;
use helike::functionals::{self, HylleraasState, ModelKind};
use helike::hydrogenic;
use helike::integrals;
use helike::optimizer::{self, OptimizerConfig, XiInitStrategy};
use helike::reference;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_model(model: &str) -> PyResult<ModelKind> {
    match model {
        "schrodinger" => Ok(ModelKind::Schrodinger),
        "improved" => Ok(ModelKind::Improved),
        other => Err(PyValueError::new_err(format!(
            "model must be 'schrodinger' or 'improved', got {other:?}"
        ))),
    }
}

/// Step index kdot(Z).
#[pyfunction]
fn kdot(z: i32) -> PyResult<i32> {
    couplings::kdot(z).map_err(value_err)
}

/// The three intermediate functions as a dict.
#[pyfunction]
fn lambdas(py: Python<'_>, z: i32) -> PyResult<Py<PyDict>> {
    let l = couplings::lambdas(z).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("l1", l.l1)?;
    d.set_item("l2", l.l2)?;
    d.set_item("l3", l.l3)?;
    d.set_item("kdot", l.kdot)?;
    Ok(d.into())
}

/// The three correction couplings as a dict.
#[pyfunction]
fn deltas(py: Python<'_>, z: i32) -> PyResult<Py<PyDict>> {
    let v = couplings::deltas(z).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("d1", v.d1)?;
    d.set_item("d2", v.d2)?;
    d.set_item("d3", v.d3)?;
    Ok(d.into())
}

/// The non-integer basis exponents as a dict.
#[pyfunction]
fn basis_exponents(py: Python<'_>, z: i32) -> PyResult<Py<PyDict>> {
    let e = couplings::basis_exponents(z).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("a0", e.a0)?;
    d.set_item("a1", e.a1)?;
    d.set_item("b0", e.b0)?;
    d.set_item("b1", e.b1)?;
    d.set_item("c", e.c)?;
    Ok(d.into())
}

/// Relativistic correction of the hydrogen-like ground state.
#[pyfunction]
fn dirac_correction(z: i32) -> PyResult<f64> {
    hydrogenic::dirac_correction(z).map_err(value_err)
}

/// Closed-form eigensolution of one hydrogen-like orbital.
#[pyclass]
struct OrbitalSolution {
    inner: hydrogenic::OrbitalSolution,
}

#[pymethods]
impl OrbitalSolution {
    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }
    #[getter]
    fn xi(&self) -> f64 {
        self.inner.xi
    }
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }
    #[getter]
    fn l_eff(&self) -> f64 {
        self.inner.l_eff
    }
    #[getter]
    fn radial_exponent(&self) -> f64 {
        self.inner.radial_exponent
    }
    #[getter]
    fn sine_exponent(&self) -> f64 {
        self.inner.sine_exponent()
    }
    #[getter]
    fn radial_coeffs(&self) -> Vec<f64> {
        self.inner.radial_coeffs.clone()
    }
    #[getter]
    fn angular_coeffs(&self) -> Vec<f64> {
        self.inner.angular_coeffs.clone()
    }

    /// Un-normalized radial amplitude R(r).
    fn radial(&self, r: f64) -> f64 {
        hydrogenic::radial_wavefunction(&self.inner, r)
    }

    /// Un-normalized angular amplitude Theta(theta).
    fn angular(&self, theta: f64) -> PyResult<f64> {
        hydrogenic::angular_wavefunction(&self.inner, theta).map_err(value_err)
    }

    /// L2 norm of the radial amplitude.
    fn radial_norm(&self) -> PyResult<f64> {
        hydrogenic::radial_norm(&self.inner).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let o = &self.inner.orbital;
        format!(
            "OrbitalSolution(n={}, l={}, m={}, j={}, p={}, energy={})",
            o.n(),
            o.l(),
            o.m(),
            o.spin_j(),
            o.parity_p(),
            self.inner.energy
        )
    }
}

/// Solve the hydrogen-like orbital (n, l, m, J, P) for nuclear charge Z.
#[pyfunction]
#[pyo3(signature = (z, n, l=0, m=0, j=0, p=1))]
fn solve_orbital(z: i32, n: i32, l: i32, m: i32, j: i32, p: i32) -> PyResult<OrbitalSolution> {
    let orb = hydrogenic::Orbital::new(n, l, m, j, p).map_err(value_err)?;
    let inner = hydrogenic::solve_orbital(&orb, z).map_err(value_err)?;
    Ok(OrbitalSolution { inner })
}

/// Closed-form correlated triple integral I(a, b, i, j, k); i and j may
/// be real, k must be an integer >= -1.
#[pyfunction]
fn hylleraas_integral(a: f64, b: f64, i: f64, j: f64, k: i32) -> PyResult<f64> {
    integrals::hylleraas_integral_shifted(a, b, i, j, k).map_err(value_err)
}

/// Independent quadrature evaluation of the same integral.
#[pyfunction]
#[pyo3(signature = (a, b, i, j, k, rel_tol=1e-9))]
fn quadrature_oracle(a: f64, b: f64, i: f64, j: f64, k: i32, rel_tol: f64) -> PyResult<f64> {
    integrals::quadrature_oracle_shifted(a, b, i, j, k, rel_tol).map_err(value_err)
}

/// Ground-state energy functional at a fixed variational state.
///
/// `coeffs` is the full correlation polynomial including the leading 1.
#[pyfunction]
fn energy(xi1: f64, xi2: f64, coeffs: Vec<f64>, z: i32, model: &str) -> PyResult<f64> {
    let state = HylleraasState::new(xi1, xi2, coeffs).map_err(value_err)?;
    functionals::energy(&state, z, parse_model(model)?).map_err(value_err)
}

/// Full variational minimization for one charge.
#[pyfunction]
#[pyo3(signature = (z, model="improved", order=None, seed_from_table=false))]
fn solve_full(
    py: Python<'_>,
    z: i32,
    model: &str,
    order: Option<usize>,
    seed_from_table: bool,
) -> PyResult<Py<PyDict>> {
    let kind = parse_model(model)?;
    let cfg = OptimizerConfig {
        xi_init_strategy: if seed_from_table {
            XiInitStrategy::TableSeed
        } else {
            XiInitStrategy::Heuristic
        },
        ..OptimizerConfig::default()
    };
    let order = order.unwrap_or_else(|| optimizer::default_order(z));
    let r = optimizer::solve_full_with_order(z, kind, &cfg, order).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("z", z)?;
    d.set_item("model", kind.label())?;
    d.set_item("energy", r.energy)?;
    d.set_item("xi1", r.state.xi1)?;
    d.set_item("xi2", r.state.xi2)?;
    d.set_item("coeffs", r.state.coeffs.clone())?;
    d.set_item("outer_iters", r.outer_iters)?;
    d.set_item("converged", r.converged)?;
    Ok(d.into())
}

/// Embedded reference row for one charge.
#[pyfunction]
fn reference_row(py: Python<'_>, z: i32) -> PyResult<Py<PyDict>> {
    let r = reference::row(z).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("z", r.z)?;
    d.set_item("lambda1", r.lambda1)?;
    d.set_item("lambda2", r.lambda2)?;
    d.set_item("xi1", r.xi1)?;
    d.set_item("xi2", r.xi2)?;
    d.set_item("e_s", r.e_s)?;
    d.set_item("e_z", r.e_z)?;
    d.set_item("diff", r.diff)?;
    d.set_item("a", r.a.clone())?;
    d.set_item("b", r.b.clone())?;
    d.set_item("e0", r.e0)?;
    d.set_item("e_corr", r.e_corr)?;
    d.set_item("e_exp", r.e_exp)?;
    d.set_item("eta_printed", r.eta_printed)?;
    Ok(d.into())
}

/// Relative deviation |(e_z - e_exp)/e_exp|.
#[pyfunction]
fn epsilon_metric(e_z: f64, e_exp: f64) -> PyResult<f64> {
    reference::epsilon_metric(e_z, e_exp).map_err(value_err)
}

/// Correction ratio (e_s - e_z) / (e0 - e_corr).
#[pyfunction]
fn eta_metric(e_s: f64, e_z: f64, e0: f64, e_corr: f64) -> PyResult<f64> {
    reference::eta_metric(e_s, e_z, e0, e_corr).map_err(value_err)
}

#[pymodule]
fn helike_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(kdot, m)?)?;
    m.add_function(wrap_pyfunction!(lambdas, m)?)?;
    m.add_function(wrap_pyfunction!(deltas, m)?)?;
    m.add_function(wrap_pyfunction!(basis_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(dirac_correction, m)?)?;
    m.add_function(wrap_pyfunction!(solve_orbital, m)?)?;
    m.add_function(wrap_pyfunction!(hylleraas_integral, m)?)?;
    m.add_function(wrap_pyfunction!(quadrature_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(solve_full, m)?)?;
    m.add_function(wrap_pyfunction!(reference_row, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_metric, m)?)?;
    m.add_function(wrap_pyfunction!(eta_metric, m)?)?;
    m.add_class::<OrbitalSolution>()?;
    Ok(())
}
