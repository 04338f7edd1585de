//! Python bindings: problems, certificates and verification reports.

use etale_core::cli::problem::{BaseSpec, Problem as CoreProblem};
use etale_core::cli::{self, verify, CliError};
use etale_core::standardize::Mode;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};
use serde_json::Value;

create_exception!(etale, EtaleError, PyException, "Raised with (message, exit_code).");

fn err(e: CliError) -> PyErr {
    EtaleError::new_err((e.message, e.code))
}

fn base_from_py(base: &Bound<'_, PyAny>) -> PyResult<BaseSpec> {
    if let Ok(s) = base.cast::<PyString>() {
        return BaseSpec::from_flag(s.to_str()?).map_err(err);
    }
    if base.is_instance_of::<PyDict>() {
        let text: String = base.py().import("json")?.call_method1("dumps", (base,))?.extract()?;
        let v: Value = serde_json::from_str(&text).map_err(|e| err(CliError::parse(e.to_string())))?;
        return BaseSpec::from_json(&v).map_err(err);
    }
    Err(EtaleError::new_err(("base must be a short form string or a descriptor dict", cli::EXIT_PARSE)))
}

/// A presented algebra over a base ring.
#[pyclass(module = "etale", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Problem {
    inner: CoreProblem,
}

#[pymethods]
impl Problem {
    #[new]
    #[pyo3(signature = (base, relations, vars = None, invert = None, jacobian_witness = None))]
    fn new(
        base: &Bound<'_, PyAny>,
        relations: Vec<String>,
        vars: Option<Vec<String>>,
        invert: Option<String>,
        jacobian_witness: Option<String>,
    ) -> PyResult<Self> {
        let inner = CoreProblem {
            base: base_from_py(base)?,
            vars: vars.unwrap_or_else(|| vec!["x".into()]),
            relations,
            invert,
            jacobian_witness,
        };
        Ok(Problem { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| err(CliError::parse(e.to_string())))?;
        Ok(Problem { inner: CoreProblem::from_json(&v).map_err(err)? })
    }

    #[getter]
    fn base(&self) -> String {
        self.inner.base.to_json().to_string()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars.clone()
    }

    #[getter]
    fn relations(&self) -> Vec<String> {
        self.inner.relations.clone()
    }

    fn __repr__(&self) -> String {
        format!("Problem(base={}, vars={:?}, relations={:?})", self.inner.base.to_json(), self.inner.vars, self.inner.relations)
    }
}

/// A certificate as produced by the pipelines or read back from JSON.
#[pyclass(module = "etale", frozen)]
pub struct Certificate {
    value: Value,
}

#[pymethods]
impl Certificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value = serde_json::from_str(text).map_err(|e| err(CliError::parse(format!("certificate: {e}"))))?;
        Ok(Certificate { value })
    }

    #[getter]
    fn kind(&self) -> Option<String> {
        self.value.get("kind").and_then(Value::as_str).map(str::to_string)
    }

    #[getter]
    fn digest(&self) -> Option<String> {
        self.value.get("digest").and_then(Value::as_str).map(str::to_string)
    }

    #[pyo3(signature = (pretty = false))]
    fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(&self.value).expect("JSON values serialize")
        } else {
            self.value.to_string()
        }
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("json")?.call_method1("loads", (self.value.to_string(),))
    }

    fn verify(&self) -> Report {
        Report::from(verify::verify(&self.value))
    }

    fn __repr__(&self) -> String {
        format!("Certificate(kind={:?})", self.kind().unwrap_or_default())
    }
}

/// The outcome of re-checking a certificate.
#[pyclass(module = "etale", frozen, get_all)]
pub struct Report {
    ok: bool,
    violations: Vec<(String, String)>,
    warnings: Vec<String>,
}

impl From<verify::Report> for Report {
    fn from(r: verify::Report) -> Self {
        Report {
            ok: r.ok(),
            violations: r.violations.into_iter().map(|v| (v.path, v.message)).collect(),
            warnings: r.warnings,
        }
    }
}

#[pymethods]
impl Report {
    fn __bool__(&self) -> bool {
        self.ok
    }

    fn __repr__(&self) -> String {
        format!("Report(ok={}, violations={}, warnings={})", self.ok, self.violations.len(), self.warnings.len())
    }
}

fn certificate(r: Result<Value, CliError>) -> PyResult<Certificate> {
    r.map(|value| Certificate { value }).map_err(err)
}

/// Standard etale presentations over a local base. `mode` is one of
/// `"etale"`, `"unramified"` or `"flat-unramified"`.
#[pyfunction]
#[pyo3(signature = (problem, mode = "etale"))]
fn standardize(py: Python<'_>, problem: &Problem, mode: &str) -> PyResult<Certificate> {
    let mode = match mode {
        "etale" => Mode::Etale,
        "unramified" => Mode::Unramified,
        "flat-unramified" => Mode::FlatUnramified,
        other => return Err(EtaleError::new_err((format!("unknown mode '{other}'"), cli::EXIT_PARSE))),
    };
    let p = problem.inner.clone();
    certificate(py.detach(|| cli::standardize(&p, mode)))
}

/// A comaximal cover over a global base.
#[pyfunction]
#[pyo3(signature = (problem, over_r = false))]
fn cover(py: Python<'_>, problem: &Problem, over_r: bool) -> PyResult<Certificate> {
    let p = problem.inner.clone();
    certificate(py.detach(|| cli::cover(&p, over_r)))
}

/// Monogene separable components of the residual algebra.
#[pyfunction]
fn decompose_residual(py: Python<'_>, problem: &Problem) -> PyResult<Certificate> {
    let p = problem.inner.clone();
    certificate(py.detach(|| cli::decompose_residual(&p)))
}

/// The cover of `Z[X]/(1 - t X)`.
#[pyfunction]
#[pyo3(signature = (t = 5))]
fn demo_basic(py: Python<'_>, t: i64) -> PyResult<Certificate> {
    certificate(py.detach(|| cli::demo_basic(t)))
}

/// Re-checks a certificate given as an object or as JSON text.
#[pyfunction]
fn verify_certificate(cert: &Bound<'_, PyAny>) -> PyResult<Report> {
    if let Ok(c) = cert.cast::<Certificate>() {
        return Ok(c.get().verify());
    }
    let text: String = cert.extract()?;
    Ok(Certificate::from_json(&text)?.verify())
}

#[pymodule]
fn etale(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Certificate>()?;
    m.add_class::<Report>()?;
    m.add("EtaleError", m.py().get_type::<EtaleError>())?;
    m.add_function(wrap_pyfunction!(standardize, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_residual, m)?)?;
    m.add_function(wrap_pyfunction!(demo_basic, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add("EXIT_PARSE", cli::EXIT_PARSE)?;
    m.add("EXIT_UNSUPPORTED", cli::EXIT_UNSUPPORTED)?;
    m.add("EXIT_PIPELINE", cli::EXIT_PIPELINE)?;
    Ok(())
}
