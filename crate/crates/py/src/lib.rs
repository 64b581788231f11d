//! Python bindings.
//!
//! Subsets cross the boundary as iterables of world labels (lists, tuples,
//! sets); the empty set is `[]`. Operations that are undefined on a total
//! contradiction raise `TotalContradictionError`, every other failure raises
//! `ValueError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};

use tbm_core::{
    self as core, EvidenceItem, EvidentialCorpus, Frame, MassFunction, Partition, Subset,
};

create_exception!(tbm, TotalContradictionError, PyValueError);

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::TotalContradiction => TotalContradictionError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn labels_from(obj: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    if obj.is_instance_of::<PyString>() {
        return Err(PyTypeError::new_err(
            "a set of worlds must be an iterable of labels, not a string",
        ));
    }
    obj.try_iter()?
        .map(|item| item?.extract::<String>())
        .collect()
}

fn subset_of(frame: &Frame, obj: &Bound<'_, PyAny>) -> PyResult<Subset> {
    frame.subset(labels_from(obj)?).map_err(to_py)
}

fn labels_of(set: &Subset) -> Vec<String> {
    set.labels().into_iter().map(str::to_string).collect()
}

#[pyclass(name = "Frame", module = "tbm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFrame {
    inner: Frame,
}

#[pymethods]
impl PyFrame {
    #[new]
    fn new(labels: Vec<String>) -> PyResult<Self> {
        Frame::new(labels)
            .map(|inner| PyFrame { inner })
            .map_err(to_py)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Frame({:?})", self.inner.labels())
    }
}

#[pyclass(name = "MassFunction", module = "tbm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMass {
    inner: MassFunction,
}

impl PyMass {
    fn wrap(inner: MassFunction) -> Self {
        PyMass { inner }
    }

    fn set(&self, obj: &Bound<'_, PyAny>) -> PyResult<Subset> {
        subset_of(self.inner.frame(), obj)
    }
}

#[pymethods]
impl PyMass {
    /// `masses` is a dict `{labels: mass}` or an iterable of `(labels, mass)`
    /// pairs. Repeated sets add up; the total must be 1 within 1e-9.
    #[new]
    fn new(frame: &PyFrame, masses: &Bound<'_, PyAny>) -> PyResult<Self> {
        let pairs: Vec<Bound<'_, PyAny>> = match masses.cast::<PyDict>() {
            Ok(dict) => dict.items().into_iter().collect(),
            Err(_) => masses.try_iter()?.collect::<PyResult<_>>()?,
        };
        let mut entries = Vec::with_capacity(pairs.len());
        for pair in pairs {
            let (set, mass): (Bound<'_, PyAny>, f64) = pair.extract()?;
            entries.push((subset_of(&frame.inner, &set)?, mass));
        }
        MassFunction::new(&frame.inner, entries)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    #[staticmethod]
    fn vacuous(frame: &PyFrame) -> Self {
        PyMass::wrap(MassFunction::vacuous(&frame.inner))
    }

    #[staticmethod]
    fn categorical(frame: &PyFrame, set: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyMass::wrap(MassFunction::categorical(&subset_of(
            &frame.inner,
            set,
        )?)))
    }

    #[staticmethod]
    fn contradiction(frame: &PyFrame) -> Self {
        PyMass::wrap(MassFunction::contradiction(&frame.inner))
    }

    /// Inverts a belief vector in powerset order (`2^n - 1` values without
    /// ∅, or `2^n` with `bel(∅) = 0`).
    #[staticmethod]
    fn from_belief(frame: &PyFrame, bel: Vec<f64>) -> PyResult<Self> {
        MassFunction::from_belief(&frame.inner, &bel)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_commonality(frame: &PyFrame, q: Vec<f64>) -> PyResult<Self> {
        MassFunction::from_commonality(&frame.inner, &q)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    #[getter]
    fn frame(&self) -> PyFrame {
        PyFrame {
            inner: self.inner.frame().clone(),
        }
    }

    /// `m(∅)`.
    #[getter]
    fn conflict(&self) -> f64 {
        self.inner.conflict()
    }

    fn mass(&self, set: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.inner.mass(&self.set(set)?).map_err(to_py)
    }

    fn bel(&self, set: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.inner.bel(&self.set(set)?).map_err(to_py)
    }

    fn pl(&self, set: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.inner.pl(&self.set(set)?).map_err(to_py)
    }

    fn commonality(&self, set: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.inner.commonality_of(&self.set(set)?).map_err(to_py)
    }

    /// Focal sets as `(labels, mass)` in powerset order.
    fn focal(&self) -> Vec<(Vec<String>, f64)> {
        self.inner
            .focal_sets()
            .map(|(s, m)| (labels_of(&s), m))
            .collect()
    }

    fn to_dense(&self) -> Vec<f64> {
        self.inner.to_dense()
    }

    fn bel_values(&self) -> Vec<f64> {
        self.inner.belief_view().bel_values().to_vec()
    }

    fn pl_values(&self) -> Vec<f64> {
        self.inner.belief_view().pl_values().to_vec()
    }

    fn commonality_values(&self) -> Vec<f64> {
        self.inner.commonality().values().to_vec()
    }

    fn condition(&self, set: &Bound<'_, PyAny>) -> PyResult<Self> {
        core::condition(&self.inner, &self.set(set)?)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    fn combine(&self, other: &PyMass) -> PyResult<Self> {
        core::combine_conjunctive(&self.inner, &other.inner)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    fn normalize(&self) -> PyResult<Self> {
        core::normalize(&self.inner)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    fn discount(&self, alpha: f64) -> PyResult<Self> {
        core::discount(&self.inner, alpha)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    /// Pushes the mass onto the frame whose worlds are `blocks`.
    fn coarsen(&self, blocks: &Bound<'_, PyAny>) -> PyResult<Self> {
        let blocks = blocks
            .try_iter()?
            .map(|b| self.set(&b?))
            .collect::<PyResult<Vec<_>>>()?;
        let partition = Partition::new(self.inner.frame(), blocks).map_err(to_py)?;
        core::coarsen(&self.inner, &partition)
            .map(PyMass::wrap)
            .map_err(to_py)
    }

    /// `{world: BetP}`.
    fn pignistic<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let betp = core::pignistic(&self.inner).map_err(to_py)?;
        let out = PyDict::new(py);
        for (label, p) in self.inner.frame().labels().iter().zip(betp.probabilities()) {
            out.set_item(label, *p)?;
        }
        Ok(out)
    }

    #[pyo3(signature = (other, tolerance = 1e-12))]
    fn approx_eq(&self, other: &PyMass, tolerance: f64) -> bool {
        self.inner.approx_eq(&other.inner, tolerance)
    }

    fn __repr__(&self) -> String {
        format!("MassFunction({:?})", self.inner)
    }
}

#[pyfunction]
fn mixture(p: f64, m1: &PyMass, m2: &PyMass) -> PyResult<PyMass> {
    core::mixture(p, &m1.inner, &m2.inner)
        .map(PyMass::wrap)
        .map_err(to_py)
}

#[pyclass(name = "Corpus", module = "tbm")]
struct PyCorpus {
    inner: EvidentialCorpus,
}

#[pymethods]
impl PyCorpus {
    #[new]
    fn new(frame: &PyFrame) -> Self {
        PyCorpus {
            inner: EvidentialCorpus::new(&frame.inner),
        }
    }

    #[pyo3(signature = (id, mass, description = None))]
    fn expand(&mut self, id: String, mass: &PyMass, description: Option<String>) -> PyResult<()> {
        let mut item = EvidenceItem::new(id, mass.inner.clone());
        if let Some(d) = description {
            item = item.with_description(d);
        }
        self.inner.expand(item).map_err(to_py)
    }

    fn contract(&mut self, id: &str) -> PyResult<()> {
        self.inner.contract(id).map(|_| ()).map_err(to_py)
    }

    /// Adds `categorical(set)` and returns the generated item id.
    fn condition(&mut self, set: &Bound<'_, PyAny>) -> PyResult<String> {
        let set = subset_of(self.inner.frame(), set)?;
        self.inner.condition(&set).map_err(to_py)
    }

    #[getter]
    fn current(&self) -> PyMass {
        PyMass::wrap(self.inner.current().clone())
    }

    #[getter]
    fn conflict(&self) -> f64 {
        self.inner.conflict()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.items().iter().map(|i| i.id().to_string()).collect()
    }

    /// `[(sequence, event, id, conflict)]`.
    fn history(&self) -> Vec<(u64, String, String, f64)> {
        self.inner
            .history()
            .iter()
            .map(|h| (h.sequence, h.kind.to_string(), h.id.clone(), h.conflict))
            .collect()
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.conflict_report().map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("conflict", report.conflict)?;
        let loo = PyList::empty(py);
        for l in &report.leave_one_out {
            loo.append((l.id.clone(), l.conflict_without))?;
        }
        out.set_item("leave_one_out", loo)?;
        out.set_item("most_conflicting", report.most_conflicting)?;
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pymodule]
fn tbm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyMass>()?;
    m.add_class::<PyCorpus>()?;
    m.add_function(wrap_pyfunction!(mixture, m)?)?;
    m.add(
        "TotalContradictionError",
        m.py().get_type::<TotalContradictionError>(),
    )?;
    Ok(())
}
