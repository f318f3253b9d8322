//! Python bindings. Tensors are loaded from the JSON tensor format; results
//! come back as plain Python ints, lists, complex numbers and dicts.

use num_bigint::BigUint;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tensoreig::cohomology::{self, BundleDescriptor};
use tensoreig::eigen::{self, SingularTuple, SolveConfig};
use tensoreig::tensor::{AnyTensor, TensorFile, TensorFormat};

fn value_err(e: tensoreig::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn format(degrees: Vec<u32>, dims: Vec<u32>) -> PyResult<TensorFormat> {
    TensorFormat::new(degrees, dims).map_err(value_err)
}

/// A symmetric or multisymmetric tensor with exact or complex coefficients.
#[pyclass(frozen, module = "tensoreig")]
struct Tensor {
    inner: AnyTensor,
}

#[pymethods]
impl Tensor {
    /// Parse the JSON tensor format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = TensorFile::from_json(text)
            .and_then(TensorFile::into_tensor)
            .map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| PyIOError::new_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        match &self.inner {
            AnyTensor::Exact(t) => TensorFile::from_exact(t).to_json(),
            AnyTensor::Complex(t) => TensorFile::from_complex(t).to_json(),
        }
    }

    #[getter]
    fn degrees(&self) -> Vec<u32> {
        self.inner.format().degrees().to_vec()
    }

    #[getter]
    fn dims(&self) -> Vec<u32> {
        self.inner.format().dims().to_vec()
    }

    /// True for rational coefficients.
    #[getter]
    fn is_exact(&self) -> bool {
        matches!(self.inner, AnyTensor::Exact(_))
    }

    fn __repr__(&self) -> String {
        format!(
            "Tensor(degrees={:?}, dims={:?}, exact={})",
            self.degrees(),
            self.dims(),
            self.is_exact()
        )
    }
}

/// Number of singular tuples of a general tensor of this format.
#[pyfunction]
fn ed_degree(degrees: Vec<u32>, dims: Vec<u32>) -> PyResult<BigUint> {
    Ok(tensoreig::ed::ed_degree(&format(degrees, dims)?))
}

#[pyfunction]
fn validate_format<'py>(
    py: Python<'py>,
    degrees: Vec<u32>,
    dims: Vec<u32>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = format(degrees, dims)?.validate();
    let d = PyDict::new(py);
    d.set_item("triangle_ok", r.triangle_ok)?;
    d.set_item("theorem_applicable", r.theorem_applicable)?;
    d.set_item("excluded_case", r.excluded_case)?;
    Ok(d)
}

/// Degrees `q` with `H^q != 0` for `family` in `"line"`, `"omega"`,
/// `"wedgeqq"` on `P^m`.
#[pyfunction]
#[pyo3(signature = (family, m, t, r=None))]
fn bott_support(family: &str, m: u32, t: i64, r: Option<u32>) -> PyResult<Vec<u32>> {
    let need_r = || r.ok_or_else(|| PyValueError::new_err(format!("family {family:?} needs r")));
    let b = match family {
        "line" => BundleDescriptor::line(m, t),
        "omega" => BundleDescriptor::cotangent(m, need_r()?, t),
        "wedgeqq" => BundleDescriptor::wedge_q_tensor_q(m, need_r()?, t),
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
    .map_err(value_err)?;
    Ok(cohomology::bott_support(&b).iter().collect())
}

#[pyfunction]
fn vanishing_scan<'py>(
    py: Python<'py>,
    degrees: Vec<u32>,
    dims: Vec<u32>,
) -> PyResult<Bound<'py, PyDict>> {
    let f = format(degrees, dims)?;
    let r = py.detach(|| cohomology::vanishing_scan(&f));
    let d = PyDict::new(py);
    d.set_item("all_clear", r.all_clear)?;
    d.set_item("summands_checked", r.summands_checked)?;
    let witnesses = r
        .witnesses
        .iter()
        .map(|w| {
            let x = PyDict::new(py);
            x.set_item("r", w.r)?;
            x.set_item("j", w.j)?;
            x.set_item("composition", &w.composition)?;
            x.set_item("q_assignment", &w.q_assignment)?;
            Ok(x)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("witnesses", witnesses)?;
    Ok(d)
}

fn tuple_dict<'py>(py: Python<'py>, t: &SingularTuple) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("points", &t.points)?;
    d.set_item("residual", t.residual)?;
    d.set_item("multiplicity", t.multiplicity)?;
    Ok(d)
}

/// Singular tuples by random-restart Newton. Deterministic in `seed`.
#[pyfunction]
#[pyo3(signature = (tensor, seed, max_restarts=None))]
fn solve<'py>(
    py: Python<'py>,
    tensor: &Tensor,
    seed: u64,
    max_restarts: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = tensor.inner.to_complex();
    let config = SolveConfig {
        max_restarts,
        ..SolveConfig::with_seed(seed)
    };
    let r = py.detach(|| eigen::solve_singular_tuples(&t, &config));
    let d = PyDict::new(py);
    d.set_item("ed_degree", r.target)?;
    d.set_item("complete", r.complete)?;
    d.set_item("restarts_used", r.restarts_used)?;
    let tuples = r
        .tuples
        .iter()
        .map(|x| tuple_dict(py, x))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("tuples", tuples)?;
    Ok(d)
}

/// Eigenvectors of an exact binary form with exact multiplicities.
#[pyfunction]
fn binary_eigenvectors<'py>(py: Python<'py>, tensor: &Tensor) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let AnyTensor::Exact(t) = &tensor.inner else {
        return Err(PyValueError::new_err(
            "binary_eigenvectors needs exact coefficients",
        ));
    };
    let tuples = eigen::binary_eigenvectors(t).map_err(value_err)?;
    tuples.iter().map(|x| tuple_dict(py, x)).collect()
}

/// Solve, rebuild the span of tensors with the same singular tuples, and
/// report its dimension.
#[pyfunction]
fn fiber_check<'py>(py: Python<'py>, tensor: &Tensor, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let t = tensor.inner.to_complex();
    let (solved, report) = py.detach(|| {
        let solved = eigen::solve_singular_tuples(&t, &SolveConfig::with_seed(seed));
        let report = tensoreig::fiber::fiber_dimension(t.format(), &solved.tuples);
        (solved, report)
    });
    let report = report.map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("complete", solved.complete)?;
    d.set_item("num_points", report.num_points)?;
    d.set_item("numerical_rank", report.numerical_rank)?;
    d.set_item("kernel_dimension", report.kernel_dimension())?;
    d.set_item("gap_ratio", report.gap_ratio)?;
    d.set_item("singular_values", &report.singular_values)?;
    d.set_item("input_residual", report.projection_residual(&t))?;
    d.set_item("q_claimed", report.q_membership.as_ref().map(|q| q.claimed))?;
    d.set_item("kernel_basis", &report.kernel_basis)?;
    d.set_item("flags", &report.flags)?;
    Ok(d)
}

/// `[(j, h_j)]` with `f = sum_j q^j h_j`, each `h_j` harmonic, as canonical
/// text.
#[pyfunction]
fn harmonic(tensor: &Tensor) -> PyResult<Vec<(u32, String)>> {
    let AnyTensor::Exact(t) = &tensor.inner else {
        return Err(PyValueError::new_err("harmonic needs exact coefficients"));
    };
    let f = t.format();
    if f.k() != 1 {
        return Err(PyValueError::new_err("harmonic needs a single block"));
    }
    let dec = tensoreig::harmonic::harmonic_decompose(t.polynomial(), f.degrees()[0])
        .map_err(value_err)?;
    Ok(dec
        .to_text()
        .into_iter()
        .map(|c| (c.j, c.harmonic))
        .collect())
}

/// The full check battery: one dict per criterion.
#[pyfunction]
fn reproduce<'py>(py: Python<'py>, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let results = py.detach(|| tensoreig::battery::run_battery(seed));
    results
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("id", c.id)?;
            d.set_item("title", &c.title)?;
            d.set_item("passed", c.passed)?;
            d.set_item("seconds", c.seconds)?;
            d.set_item("details", &c.details)?;
            Ok(d)
        })
        .collect()
}

#[pymodule(name = "tensoreig")]
fn tensoreig_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", tensoreig::VERSION)?;
    m.add_class::<Tensor>()?;
    m.add_function(wrap_pyfunction!(ed_degree, m)?)?;
    m.add_function(wrap_pyfunction!(validate_format, m)?)?;
    m.add_function(wrap_pyfunction!(bott_support, m)?)?;
    m.add_function(wrap_pyfunction!(vanishing_scan, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(binary_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(fiber_check, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}
