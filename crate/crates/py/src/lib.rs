//! Python module `mubw`. Matrices cross the boundary as lists of rows of
//! complex numbers, so `numpy.array(m)` works on every returned matrix.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use mubw_core::blockpos::{self, SeeSawConfig};
use mubw_core::detect;
use mubw_core::matrix::{realignment_value, BipartiteDims, ComplexMatrix};
use mubw_core::mub;
use mubw_core::rotation::RotationSpec;
use mubw_core::witness::{self as core_witness, MapOperator, MubSource, WitnessFile, WitnessSpec};

type Rows = Vec<Vec<Complex64>>;

fn err(e: mubw_core::Error) -> PyErr {
    match e {
        mubw_core::Error::Internal(_) | mubw_core::Error::NoConvergence(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    ComplexMatrix::from_vec(n, m, rows.into_iter().flatten().collect()).map_err(err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn dims_for(n: usize, d: Option<usize>) -> PyResult<BipartiteDims> {
    match d {
        Some(d) if d > 0 && n.is_multiple_of(d) => Ok(BipartiteDims::new(d, n / d)),
        Some(d) => Err(PyValueError::new_err(format!("d = {d} does not divide {n}"))),
        None => BipartiteDims::infer_square(n).map_err(err),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn report_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

fn source(name: Option<&str>, d: usize) -> PyResult<MubSource> {
    match name {
        None => MubSource::default_for(d).map_err(err),
        Some("d3-canonical") => Ok(MubSource::D3Canonical),
        Some("prime-weyl") => Ok(MubSource::PrimeWeyl),
        Some(path) => Ok(MubSource::File(path.into())),
    }
}

/// A witness operator together with the spec that produced it.
#[pyclass(module = "mubw", frozen)]
struct Witness {
    file: WitnessFile,
}

#[pymethods]
impl Witness {
    /// Build from angles (d = 3), 0-based permutations, or identity rotations.
    /// `mubs` is `d3-canonical`, `prime-weyl` or a path to a bases file.
    #[new]
    #[pyo3(signature = (d, angles=None, perms=None, L=None, mubs=None))]
    #[allow(non_snake_case)]
    fn new(
        d: usize,
        angles: Option<Vec<f64>>,
        perms: Option<Vec<Vec<usize>>>,
        L: Option<usize>,
        mubs: Option<&str>,
    ) -> PyResult<Self> {
        let mut rotations: Vec<RotationSpec> = match (angles, perms) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give angles or perms, not both")),
            (Some(a), None) => a.into_iter().map(RotationSpec::Angle).collect(),
            (None, Some(p)) => p.into_iter().map(RotationSpec::Perm).collect(),
            (None, None) => Vec::new(),
        };
        let l = L.unwrap_or(if rotations.is_empty() { d + 1 } else { rotations.len() });
        if rotations.is_empty() {
            rotations = vec![RotationSpec::Perm((0..d).collect()); l];
        }
        let spec = WitnessSpec { d, l, rotations, mub_source: source(mubs, d)? };
        Ok(Witness { file: WitnessFile::build(spec).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Witness { file: WitnessFile::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.file.to_json()
    }

    #[getter]
    fn d(&self) -> usize {
        self.file.spec.d
    }

    #[getter(L)]
    fn l(&self) -> usize {
        self.file.spec.l
    }

    #[getter]
    fn matrix(&self) -> Rows {
        to_rows(&self.file.witness)
    }

    fn trace(&self) -> f64 {
        self.file.witness.trace().re
    }

    fn expectation(&self, rho: Rows) -> PyResult<f64> {
        detect::witness_expectation(&to_matrix(rho)?, &self.file.witness).map_err(err)
    }

    fn min_eigenvalue(&self) -> PyResult<f64> {
        mubw_core::eigen::min_eigenvalue(&self.file.witness).map_err(err)
    }

    fn map(&self) -> PyResult<Map> {
        Ok(Map { op: core_witness::build_map(&self.file.spec).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Witness(d={}, L={})", self.file.spec.d, self.file.spec.l)
    }
}

/// Linear map on d x d matrices.
#[pyclass(module = "mubw", frozen)]
struct Map {
    op: MapOperator,
}

#[pymethods]
impl Map {
    #[getter]
    fn d(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: Rows) -> PyResult<Rows> {
        Ok(to_rows(&self.op.apply(&to_matrix(x)?).map_err(err)?))
    }

    fn __call__(&self, x: Rows) -> PyResult<Rows> {
        self.apply(x)
    }

    fn dual(&self) -> Map {
        Map { op: self.op.dual() }
    }

    fn choi_witness(&self) -> Rows {
        to_rows(&self.op.choi_witness())
    }

    fn trace_preservation_defect(&self) -> f64 {
        self.op.trace_preservation_defect()
    }

    /// Random-state positivity probe; returns the report as a dict.
    #[pyo3(signature = (samples=1000, seed=0))]
    fn probe<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| blockpos::map_positivity_probe(&self.op, samples, seed)).map_err(err)?;
        report_to_py(py, &r)
    }

    #[staticmethod]
    fn reduction(d: usize) -> Map {
        Map { op: core_witness::reduction_map(d) }
    }

    #[staticmethod]
    fn ando(d: usize, k: usize) -> PyResult<Map> {
        Ok(Map { op: core_witness::ando_map(d, k).map_err(err)? })
    }
}

/// Bases as lists of vectors, plus the maximal pairwise deviation from unbiasedness.
#[pyfunction]
#[pyo3(signature = (d, source=None))]
fn mub_family(d: usize, source: Option<&str>) -> PyResult<(Vec<Vec<Vec<Complex64>>>, f64)> {
    let f = self::source(source, d)?.load(d).map_err(err)?;
    let bases = f.bases().iter().map(|b| b.vectors().to_vec()).collect();
    Ok((bases, mub::unbiasedness_defect(&f)))
}

#[pyfunction]
fn canonical_state() -> Rows {
    to_rows(&detect::canonical_rho())
}

#[pyfunction]
#[pyo3(signature = (rho, d=None))]
fn ppt_min_eigenvalue(rho: Rows, d: Option<usize>) -> PyResult<f64> {
    let rho = to_matrix(rho)?;
    detect::ppt_min_eigenvalue(&rho, dims_for(rho.rows(), d)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho, d=None))]
fn realignment(rho: Rows, d: Option<usize>) -> PyResult<f64> {
    let rho = to_matrix(rho)?;
    realignment_value(&rho, dims_for(rho.rows(), d)?).map_err(err)
}

/// Full detection report as a dict.
#[pyfunction]
#[pyo3(signature = (rho, witnesses=Vec::new(), d=None))]
fn check_state<'py>(
    py: Python<'py>,
    rho: Rows,
    witnesses: Vec<PyRef<'py, Witness>>,
    d: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let rho = to_matrix(rho)?;
    let dims = dims_for(rho.rows(), d)?;
    let ws: Vec<(String, ComplexMatrix)> =
        witnesses.iter().enumerate().map(|(i, w)| (format!("w{i}"), w.file.witness.clone())).collect();
    let report = detect::check_state(&rho, dims, &ws).map_err(err)?;
    report_to_py(py, &report)
}

/// Grid minimisation of Tr(rho W) over qutrit torus witnesses.
#[pyfunction]
#[pyo3(signature = (rho, L=4, grid=detect::DEFAULT_GRID, single_angle=None))]
#[allow(non_snake_case)]
fn scan<'py>(
    py: Python<'py>,
    rho: Rows,
    L: usize,
    grid: usize,
    single_angle: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let rho = to_matrix(rho)?;
    let family = match single_angle {
        Some(a) => detect::ScanFamily::SingleAngle(a),
        None => detect::ScanFamily::Torus(L),
    };
    let result = py.detach(|| detect::detection_scan(&rho, family, grid, false)).map_err(err)?;
    report_to_py(py, &result)
}

/// See-saw classification of an operator on C^d x C^d.
#[pyfunction]
#[pyo3(signature = (w, d=None, restarts=50, max_iters=200, conv_tol=1e-12, seed=0))]
fn classify<'py>(
    py: Python<'py>,
    w: Rows,
    d: Option<usize>,
    restarts: usize,
    max_iters: usize,
    conv_tol: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let w = to_matrix(w)?;
    let dims = dims_for(w.rows(), d)?;
    let cfg = SeeSawConfig { restarts, max_iters, conv_tol, seed };
    let class = py.detach(|| blockpos::classify(&w, dims, &cfg)).map_err(err)?;
    report_to_py(py, &class)
}

#[pymodule]
fn mubw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Witness>()?;
    m.add_class::<Map>()?;
    m.add_function(wrap_pyfunction!(mub_family, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_state, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_min_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(realignment, m)?)?;
    m.add_function(wrap_pyfunction!(check_state, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add("DETECTION_TOL", detect::DETECTION_TOL)?;
    Ok(())
}
