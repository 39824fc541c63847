//! Python bindings for brauer-core. The extension module is named `brauer`.

use std::path::PathBuf;

use brauer_core::bounds::{quartic_threshold_check, size_bound, QUARTIC_BR_ORDER};
use brauer_core::eval::{self, Constancy};
use brauer_core::model::{count_points, AmbientSpace, ModelSpec};
use brauer_core::modelfile::ModelFile;
use brauer_core::sing::classify_model;
use brauer_core::torsor::{parse_rational, KummerTorsor, SymbolAlgebra};
use brauer_core::verdict::{
    parse_coefficients, verdict_custom, verdict_diagonal, Family, VerdictOptions, VerdictReport,
};
use brauer_core::Error;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(brauer, BrauerError, PyException, "Base class of errors raised by brauer.");
create_exception!(brauer, DomainError, BrauerError, "Input outside the mathematical domain (CLI exit code 2).");
create_exception!(brauer, UnsupportedError, BrauerError, "Budget exceeded or unsupported input (CLI exit code 3).");

fn to_py(e: Error) -> PyErr {
    if e.exit_code() == 3 {
        UnsupportedError::new_err(e.to_string())
    } else {
        DomainError::new_err(e.to_string())
    }
}

type PyRes<T> = Result<T, PyErr>;

/// A model over Z_(p): equations in a projective or weighted projective space.
#[pyclass(name = "Model", module = "brauer", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyModel {
    inner: ModelSpec,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (vars, weights, equations, p, label = "model"))]
    fn new(vars: Vec<String>, weights: Vec<u32>, equations: Vec<String>, p: u64, label: &str) -> PyRes<Self> {
        let ambient = AmbientSpace::new(vars, weights).map_err(to_py)?;
        let refs: Vec<&str> = equations.iter().map(String::as_str).collect();
        Ok(PyModel { inner: ModelSpec::parse(ambient, &refs, p, label).map_err(to_py)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.prime()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.ambient().names().to_vec()
    }

    /// SHA-256 of the canonical model text, as used by the point-count cache.
    fn hash(&self) -> String {
        self.inner.hash_hex()
    }

    #[pyo3(signature = (k = 1, smooth_only = false))]
    fn count_points(&self, py: Python<'_>, k: u32, smooth_only: bool) -> PyRes<u128> {
        let m = &self.inner;
        py.detach(|| count_points(m, k, smooth_only)).map_err(to_py)
    }

    /// Singular points, ADE types and the Brauer table entry as a dict.
    #[pyo3(signature = (max_ext = 2))]
    fn classify<'py>(&self, py: Python<'py>, max_ext: u32) -> PyRes<Bound<'py, PyDict>> {
        let m = &self.inner;
        let r = py.detach(|| classify_model(m, max_ext)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("singularity_type", r.singularity_type.to_string())?;
        let points: Vec<(String, String, u32, Option<bool>)> = r
            .points
            .iter()
            .map(|p| (p.point.to_string(), p.ade.to_string(), p.field_degree, p.regular))
            .collect();
        d.set_item("points", points)?;
        d.set_item("certified_complete", r.certified_complete)?;
        d.set_item("del_pezzo_degree", r.del_pezzo_degree)?;
        if let Some(t) = &r.table {
            d.set_item("br_bar", t.br_bar.to_string())?;
            d.set_item("h1", t.h1.to_string())?;
            d.set_item("br_nr", t.br_nr.as_ref().map(|g| g.to_string()))?;
            d.set_item("br_nr_factors", t.br_nr.as_ref().map(|g| g.factors().to_vec()))?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, p={})", self.inner.label(), self.inner.prime())
    }
}

/// The cyclic algebra (a, f)_n with f = f_num / f_den.
#[pyclass(name = "Algebra", module = "brauer", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyAlgebra {
    inner: SymbolAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    #[pyo3(signature = (n, a, f_num, model, f_den = "1"))]
    fn new(n: u64, a: &str, f_num: &str, model: &PyModel, f_den: &str) -> PyRes<Self> {
        let inner = SymbolAlgebra::parse(n, a, f_num, f_den, model.inner.vars()).map_err(to_py)?;
        Ok(PyAlgebra { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn a(&self) -> String {
        self.inner.a().to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({})", self.inner)
    }
}

/// The Kummer torsor over the smooth locus of the special fibre.
#[pyclass(name = "Torsor", module = "brauer", frozen)]
pub struct PyTorsor {
    inner: KummerTorsor,
}

#[pymethods]
impl PyTorsor {
    /// The residue torsor of an algebra.
    #[staticmethod]
    fn residue(algebra: &PyAlgebra, model: &PyModel) -> PyRes<Self> {
        Ok(PyTorsor { inner: KummerTorsor::residue(&algebra.inner, &model.inner).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn twist_class(&self) -> String {
        self.inner.twist_class().to_string()
    }

    fn is_constant(&self) -> bool {
        self.inner.is_constant()
    }

    /// Twist by j/n.
    fn twist(&self, j: i64) -> PyRes<Self> {
        let c = brauer_core::arith::QZClass::new(j as i128, self.inner.n());
        Ok(PyTorsor { inner: self.inner.twist(c).map_err(to_py)? })
    }

    /// F_{p^k}-points of the twisted torsor above determinate base points.
    #[pyo3(signature = (k = 1))]
    fn count_points(&self, py: Python<'_>, k: u32) -> PyRes<u128> {
        let t = &self.inner;
        Ok(py.detach(|| t.count_twist_points(k)).map_err(to_py)?.points)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Evaluation image over smooth F_{p^k}-reduction points.
#[pyfunction]
#[pyo3(signature = (algebra, model, k = 1))]
fn evaluation_image<'py>(py: Python<'py>, algebra: &PyAlgebra, model: &PyModel, k: u32) -> PyRes<Bound<'py, PyDict>> {
    let r = py.detach(|| eval::evaluation_image(&algebra.inner, &model.inner, k)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("image", r.image.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    d.set_item("normalized_image", r.normalized_image().iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    d.set_item("constant", r.constant)?;
    d.set_item("determinate_points", r.determinate_points())?;
    d.set_item("indeterminate_points", r.indeterminate)?;
    d.set_item("normalization_point", r.normalization_point.map(|p| p.to_string()))?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (algebras, model, k = 1))]
fn prolific_check(py: Python<'_>, algebras: Vec<PyAlgebra>, model: &PyModel, k: u32) -> PyRes<bool> {
    let algs: Vec<SymbolAlgebra> = algebras.into_iter().map(|a| a.inner).collect();
    py.detach(|| eval::prolific_check(&algs, &model.inner, k)).map_err(to_py)
}

#[pyfunction]
fn zero_cycle_image(py: Python<'_>, algebra: &PyAlgebra, model: &PyModel, max_degree: u32) -> PyRes<Vec<String>> {
    let s = py.detach(|| eval::zero_cycle_image(&algebra.inner, &model.inner, max_degree)).map_err(to_py)?;
    Ok(s.iter().map(|c| c.to_string()).collect())
}

/// "ConstantCertified", "NonconstantWitness" or "Unknown".
#[pyfunction]
fn constancy(py: Python<'_>, algebra: &PyAlgebra, model: &PyModel, max_degree: u32) -> PyRes<String> {
    let c = py.detach(|| eval::is_constant_with_trivial_tau(&algebra.inner, &model.inner, max_degree)).map_err(to_py)?;
    Ok(match c {
        Constancy::ConstantCertified => "ConstantCertified",
        Constancy::NonconstantWitness { .. } => "NonconstantWitness",
        Constancy::Unknown => "Unknown",
    }
    .to_string())
}

/// Hilbert symbol (a, b)_p in {1, -1}; a and b are rationals given as strings.
#[pyfunction]
fn hilbert_symbol(a: &str, b: &str, p: u64) -> PyRes<i8> {
    let a = parse_rational(a).map_err(to_py)?;
    let b = parse_rational(b).map_err(to_py)?;
    eval::hilbert_symbol(&a, &b, p).map_err(to_py)
}

/// The cone bound for genus g and order N.
#[pyfunction]
fn cone_bound<'py>(py: Python<'py>, genus: u64, order: u64) -> PyRes<Bound<'py, PyDict>> {
    let t = size_bound(genus, order).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("g_prime", t.g_prime().to_string())?;
    d.set_item("expression", t.expression())?;
    d.set_item("decimal", t.decimal(6))?;
    d.set_item("strict_integer_threshold", t.strict_integer_threshold().to_string())?;
    Ok(d)
}

/// Whether q (a decimal string or int) exceeds the cone bound.
#[pyfunction]
fn exceeds_bound(genus: u64, order: u64, q: &str) -> PyRes<bool> {
    let q = q.trim().parse().map_err(|_| DomainError::new_err(format!("bad integer '{q}'")))?;
    Ok(size_bound(genus, order).map_err(to_py)?.exceeded_by(&q))
}

#[pyfunction]
#[pyo3(signature = (p, br_order = QUARTIC_BR_ORDER))]
fn quartic_threshold<'py>(py: Python<'py>, p: &str, br_order: u64) -> PyRes<Bound<'py, PyDict>> {
    let p = p.trim().parse().map_err(|_| DomainError::new_err(format!("bad integer '{p}'")))?;
    let r = quartic_threshold_check(&p, br_order).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("stated", r.stated_threshold.to_string())?;
    d.set_item("computed_ceiling", r.computed.ceiling().to_string())?;
    d.set_item("difference", r.difference.to_string())?;
    d.set_item("passes", r.passes)?;
    d.set_item("passes_computed", r.passes_computed)?;
    Ok(d)
}

fn verdict_dict<'py>(py: Python<'py>, r: &VerdictReport) -> PyRes<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("family", r.family.name())?;
    d.set_item("label", &r.label)?;
    d.set_item("candidates", r.candidates.clone())?;
    d.set_item("prime", r.prime)?;
    d.set_item("genus", r.genus)?;
    d.set_item("br_order", r.br_order.as_ref().map(|b| b.value))?;
    let conds: Vec<(String, Option<bool>, String)> = r
        .conditions
        .iter()
        .map(|c| (c.key.to_string(), c.holds, c.provenance.name().to_string()))
        .collect();
    d.set_item("conditions", conds)?;
    d.set_item("prolific_direct", r.prolific_direct)?;
    d.set_item("notes", r.notes.clone())?;
    d.set_item("verdict", r.verdict.to_string())?;
    Ok(d)
}

/// Verdict for a diagonal family ("diagonal-quartic" or "diagonal-cubic").
#[pyfunction]
#[pyo3(signature = (family, coeffs, p = None, assume_br_order = None, algebras = Vec::new(), certified_elsewhere = false))]
fn verdict<'py>(
    py: Python<'py>,
    family: &str,
    coeffs: &str,
    p: Option<u64>,
    assume_br_order: Option<u64>,
    algebras: Vec<PyAlgebra>,
    certified_elsewhere: bool,
) -> PyRes<Bound<'py, PyDict>> {
    let family: Family = family.parse().map_err(to_py)?;
    let coeffs = parse_coefficients(coeffs).map_err(to_py)?;
    let opts = VerdictOptions {
        prime: p,
        assume_br_order,
        algebras: algebras.into_iter().map(|a| a.inner).collect(),
        certified_elsewhere,
    };
    let r = py.detach(|| verdict_diagonal(family, &coeffs, &opts)).map_err(to_py)?;
    verdict_dict(py, &r)
}

/// Verdict for an arbitrary surface in P^3.
#[pyfunction]
#[pyo3(signature = (model, assume_br_order = None, algebras = Vec::new(), certified_elsewhere = false))]
fn verdict_model<'py>(
    py: Python<'py>,
    model: &PyModel,
    assume_br_order: Option<u64>,
    algebras: Vec<PyAlgebra>,
    certified_elsewhere: bool,
) -> PyRes<Bound<'py, PyDict>> {
    let opts = VerdictOptions {
        prime: None,
        assume_br_order,
        algebras: algebras.into_iter().map(|a| a.inner).collect(),
        certified_elsewhere,
    };
    let r = py.detach(|| verdict_custom(&model.inner, &opts)).map_err(to_py)?;
    verdict_dict(py, &r)
}

/// Reads a TOML model file; returns the model and its algebras.
#[pyfunction]
fn load_model(path: PathBuf) -> PyRes<(PyModel, Vec<PyAlgebra>)> {
    let f = ModelFile::load(&path).map_err(to_py)?;
    Ok((PyModel { inner: f.model }, f.algebras.into_iter().map(|inner| PyAlgebra { inner }).collect()))
}

#[pymodule]
#[pyo3(name = "brauer")]
fn brauer_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes, functions and exceptions to `m`; lets an embedding
/// interpreter build the module without importing the extension.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("BrauerError", py.get_type::<BrauerError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("UnsupportedError", py.get_type::<UnsupportedError>())?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyTorsor>()?;
    m.add_function(wrap_pyfunction!(evaluation_image, m)?)?;
    m.add_function(wrap_pyfunction!(prolific_check, m)?)?;
    m.add_function(wrap_pyfunction!(zero_cycle_image, m)?)?;
    m.add_function(wrap_pyfunction!(constancy, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(cone_bound, m)?)?;
    m.add_function(wrap_pyfunction!(exceeds_bound, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(verdict_model, m)?)?;
    m.add_function(wrap_pyfunction!(load_model, m)?)?;
    Ok(())
}
