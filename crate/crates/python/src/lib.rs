//! Python bindings: quivers, finite A-infinity categories, free categories,
//! functor extension and the restriction-equivalence check.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ainfree_core::ainfty::{check_an_category, check_an_functor, AnCategory as CoreCategory, CheckReport};
use ainfree_core::free::FreeCategory as CoreFree;
use ainfree_core::io::{to_json, CategoryFile, FunctorFile, QuiverFile, SourceKind};
use ainfree_core::lift::{extend_functor, extend_strict, restrict_functor, verify_restriction_equivalence};
use ainfree_core::quiver::{Category, DGQuiver};
use ainfree_core::tensor::CocatHom;
use ainfree_core::trees::enumerate_trees;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(err)
}

fn json_value<'py>(py: Python<'py>, x: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn summary(report: &CheckReport) -> (bool, usize, Option<String>) {
    let first = report.first_failure().map(|(k, c)| format!("k={k}: {}", c.input));
    (report.passed(), report.instances(), first)
}

/// A DG quiver with shifted degrees.
#[pyclass(frozen)]
struct Quiver {
    inner: DGQuiver,
}

#[pymethods]
impl Quiver {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse::<QuiverFile>(text)?.to_quiver().map_err(err)?;
        Ok(Quiver { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&QuiverFile::from_quiver(&self.inner)).map_err(err)
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.quiver.objects.clone()
    }

    /// `(name, source, target, shifted degree)` for every generator.
    #[getter]
    fn generators(&self) -> Vec<(String, String, String, i64)> {
        let objs = &self.inner.quiver.objects;
        self.inner.gens().iter().map(|g| (g.name.clone(), objs[g.src].clone(), objs[g.dst].clone(), g.sdeg)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Quiver({} objects, {} generators)", self.inner.quiver.objects.len(), self.inner.gens().len())
    }
}

/// A finite A-infinity category given by basis morphisms and operation tables.
#[pyclass(name = "Category", frozen)]
struct PyCategory {
    inner: CoreCategory,
}

#[pymethods]
impl PyCategory {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse::<CategoryFile>(text)?.to_category().map_err(err)?;
        Ok(PyCategory { inner })
    }

    /// Endomorphisms of the contractible complex `k → k` over the integers.
    #[staticmethod]
    fn matrix_toy() -> PyResult<Self> {
        let inner = CoreCategory::matrix_toy(ainfree_core::scalars::Ring::Integers).map_err(err)?;
        Ok(PyCategory { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&CategoryFile::from_category(&self.inner)).map_err(err)
    }

    #[getter]
    fn morphisms(&self) -> Vec<(String, i64)> {
        self.inner.mors.iter().map(|m| (m.name.clone(), m.sdeg)).collect()
    }

    /// Checks the A-infinity identities up to `max_k`; returns
    /// `(passed, instances, first counterexample)`.
    #[pyo3(signature = (max_k = 4, max_weight = 4))]
    fn check(&self, max_k: usize, max_weight: usize) -> PyResult<(bool, usize, Option<String>)> {
        Ok(summary(&check_an_category(&self.inner, max_k, max_weight).map_err(err)?))
    }
}

/// The free A-infinity category on a quiver, truncated by leaves and arity.
#[pyclass(frozen)]
struct FreeCategory {
    inner: CoreFree,
}

#[pymethods]
impl FreeCategory {
    #[new]
    #[pyo3(signature = (quiver, leaves = 4, arity = 4))]
    fn new(quiver: &Quiver, leaves: usize, arity: usize) -> PyResult<Self> {
        let inner = CoreFree::new(quiver.inner.clone(), leaves, arity).map_err(err)?;
        Ok(FreeCategory { inner })
    }

    #[getter]
    fn tree_count(&self) -> usize {
        self.inner.tree_count()
    }

    /// Basis morphisms `src → dst` whose tree has `leaves` leaves.
    fn basis(&self, src: &str, dst: &str, leaves: usize) -> PyResult<Vec<String>> {
        let q = &self.inner.quiver.quiver;
        let (x, y) = (q.object_id(src).map_err(err)?, q.object_id(dst).map_err(err)?);
        Ok(self.inner.basis_with_leaves(x, y, leaves).iter().map(|m| self.inner.show(m)).collect())
    }

    /// Shifted degrees of the same basis, in the same order.
    fn degrees(&self, src: &str, dst: &str, leaves: usize) -> PyResult<Vec<i64>> {
        let q = &self.inner.quiver.quiver;
        let (x, y) = (q.object_id(src).map_err(err)?, q.object_id(dst).map_err(err)?);
        Ok(self.inner.basis_with_leaves(x, y, leaves).iter().map(|m| self.inner.degree(m)).collect())
    }

    #[pyo3(signature = (max_k = 4))]
    fn check(&self, max_k: usize) -> PyResult<(bool, usize, Option<String>)> {
        Ok(summary(&check_an_category(&self.inner, max_k, self.inner.leaf_budget).map_err(err)?))
    }
}

fn functor(free: &CoreFree, tgt: &CoreCategory, text: &str) -> PyResult<CocatHom<ainfree_core::free::FreeMor, usize>> {
    let file: FunctorFile = parse(text)?;
    match file.source {
        SourceKind::Quiver => extend_strict(free, tgt, &file.to_quiver_map(&free.quiver, tgt).map_err(err)?).map_err(err),
        SourceKind::Free => {
            let f = file.to_free_functor(free, tgt).map_err(err)?;
            let mut higher = CocatHom::new(f.obj_map.clone());
            for (w, v) in f.comps.iter().filter(|(w, _)| w.len() >= 2) {
                higher.set(w.clone(), v.clone()).map_err(err)?;
            }
            extend_functor(free, tgt, &restrict_functor::<CoreCategory>(free, &f), &higher).map_err(err)
        }
    }
}

/// Trees with `n` leaves in canonical text form.
#[pyfunction]
fn trees(n: usize) -> PyResult<Vec<String>> {
    Ok(enumerate_trees(n).map_err(err)?.iter().map(|t| t.to_string()).collect())
}

/// Extends a functor file (a chain map, or a free functor with higher
/// components) to the free category and returns the functor file.
#[pyfunction]
fn extend(free: &FreeCategory, category: &PyCategory, functor_json: &str) -> PyResult<String> {
    let f = functor(&free.inner, &category.inner, functor_json)?;
    to_json(&FunctorFile::from_free_functor(&free.inner, &category.inner, &f)).map_err(err)
}

/// Restricts a functor file to the generating quiver.
#[pyfunction]
fn restrict(free: &FreeCategory, category: &PyCategory, functor_json: &str) -> PyResult<String> {
    let f = functor(&free.inner, &category.inner, functor_json)?;
    let f1 = restrict_functor::<CoreCategory>(&free.inner, &f);
    to_json(&FunctorFile::from_quiver_map(&free.inner.quiver, &category.inner, &f1)).map_err(err)
}

/// Checks the functor equations of an extended functor file up to `max_k`.
#[pyfunction]
#[pyo3(signature = (free, category, functor_json, max_k = 4))]
fn check_functor(free: &FreeCategory, category: &PyCategory, functor_json: &str, max_k: usize) -> PyResult<(bool, usize, Option<String>)> {
    let f = functor(&free.inner, &category.inner, functor_json)?;
    let report = check_an_functor(&free.inner, &category.inner, &f, max_k, free.inner.leaf_budget).map_err(err)?;
    Ok(summary(&report))
}

/// Verifies that restriction is an equivalence on the hom complex between
/// two functors; returns the report as a dict.
#[pyfunction]
fn verify_equivalence<'py>(
    py: Python<'py>,
    free: &FreeCategory,
    category: &PyCategory,
    phi_json: &str,
    psi_json: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let phi = functor(&free.inner, &category.inner, phi_json)?;
    let psi = functor(&free.inner, &category.inner, psi_json)?;
    let l = free.inner.leaf_budget;
    let report = verify_restriction_equivalence(&free.inner, &category.inner, &phi, &psi, l, l).map_err(err)?;
    let mut value = serde_json::to_value(&report).map_err(err)?;
    value["passed"] = report.passed().into();
    json_value(py, &value)
}

/// Runs the command line with the given arguments; returns
/// `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = ainfree_core::cli::run(std::iter::once("ainfree".to_string()).chain(args), &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
fn ainfree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Quiver>()?;
    m.add_class::<PyCategory>()?;
    m.add_class::<FreeCategory>()?;
    m.add_function(wrap_pyfunction!(trees, m)?)?;
    m.add_function(wrap_pyfunction!(extend, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    m.add_function(wrap_pyfunction!(check_functor, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
