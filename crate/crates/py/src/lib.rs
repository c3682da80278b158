//! Python bindings: `import reflex`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use reflex_core::algebra::{self, Assignment};
use reflex_core::neuron::{self, NeuronParams, Pulse};
use reflex_core::report;
use reflex_core::rgt::{self, DecisionResult, Relation};
use reflex_core::scenario::{self, Scenario, ScenarioConfig};

/// `(t, x, y, spike)` rows of a trace.
type Samples = Vec<(f64, f64, f64, bool)>;

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "UniversalSet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyUniversalSet(algebra::UniversalSet);

#[pyclass(name = "ActionSet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyActionSet(algebra::ActionSet);

#[pyclass(name = "Expr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExpr {
    expr: algebra::Expr,
    universe: algebra::UniversalSet,
}

#[pymethods]
impl PyUniversalSet {
    #[new]
    fn new(actions: Vec<String>) -> PyResult<Self> {
        algebra::UniversalSet::new(actions).map(Self).map_err(err)
    }

    #[getter]
    fn actions(&self) -> Vec<String> {
        self.0.actions().to_vec()
    }

    fn full(&self) -> PyActionSet {
        PyActionSet(self.0.full())
    }

    fn empty(&self) -> PyActionSet {
        PyActionSet(self.0.empty())
    }

    /// Parses `1`, `0` or `{a,b}`.
    fn set(&self, text: &str) -> PyResult<PyActionSet> {
        self.0.parse_set(text).map(PyActionSet).map_err(err)
    }

    /// All 2^n elements in binary counting order.
    fn elements(&self) -> Vec<PyActionSet> {
        algebra::all_elements(&self.0).into_iter().map(PyActionSet).collect()
    }

    fn parse(&self, text: &str) -> PyResult<PyExpr> {
        let expr = algebra::Expr::parse(text, &self.0).map_err(err)?;
        Ok(PyExpr {
            expr,
            universe: self.0.clone(),
        })
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("UniversalSet({:?})", self.0.actions())
    }
}

#[pymethods]
impl PyActionSet {
    fn members(&self) -> Vec<String> {
        self.0.members().into_iter().map(String::from).collect()
    }

    #[getter]
    fn bits(&self) -> u32 {
        self.0.bits()
    }

    fn issubset(&self, other: &PyActionSet) -> PyResult<bool> {
        self.0.is_subset(&other.0).map_err(err)
    }

    fn __and__(&self, other: &PyActionSet) -> PyResult<PyActionSet> {
        algebra::meet(&self.0, &other.0).map(PyActionSet).map_err(err)
    }

    fn __or__(&self, other: &PyActionSet) -> PyResult<PyActionSet> {
        algebra::join(&self.0, &other.0).map(PyActionSet).map_err(err)
    }

    fn __invert__(&self) -> PyActionSet {
        PyActionSet(algebra::complement(&self.0))
    }

    fn __eq__(&self, other: &PyActionSet) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        u64::from(self.0.bits())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ActionSet({})", self.0)
    }
}

fn assignment(u: &algebra::UniversalSet, values: BTreeMap<String, String>) -> PyResult<Assignment> {
    values
        .into_iter()
        .map(|(k, v)| Ok((k, u.parse_set(&v).map_err(err)?)))
        .collect()
}

fn assignment_strings(a: &Assignment) -> BTreeMap<String, String> {
    a.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

#[pymethods]
impl PyExpr {
    fn variables(&self) -> Vec<String> {
        self.expr.variables().into_iter().collect()
    }

    /// Evaluates with subject values given as set literals.
    fn eval(&self, values: BTreeMap<String, String>) -> PyResult<PyActionSet> {
        let env = assignment(&self.universe, values)?;
        algebra::eval(&self.expr, &env).map(PyActionSet).map_err(err)
    }

    fn equivalent(&self, other: &PyExpr) -> PyResult<bool> {
        let mut vars = self.expr.variables();
        vars.extend(other.expr.variables());
        let vars: Vec<String> = vars.into_iter().collect();
        algebra::equivalent(&self.expr, &other.expr, &vars, &self.universe).map_err(err)
    }

    /// Stratifies a polynomial and folds its diagonal form.
    fn fold(&self) -> PyResult<PyExpr> {
        let tree = rgt::stratify(&self.expr).map_err(err)?;
        Ok(PyExpr {
            expr: rgt::fold_diagonal(&tree),
            universe: self.universe.clone(),
        })
    }

    /// `(A, B)` of the decision equation `x = Ax + B~x`.
    fn coefficients(&self, subject: &str, influences: BTreeMap<String, String>) -> PyResult<(PyActionSet, PyActionSet)> {
        let env = assignment(&self.universe, influences)?;
        let c = rgt::canonical_coefficients(&self.expr, subject, &env, &self.universe).map_err(err)?;
        Ok((PyActionSet(c.a), PyActionSet(c.b)))
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?})", self.expr.to_string())
    }
}

fn relation(label: &str) -> PyResult<Relation> {
    label.parse().map_err(err)
}

/// Polynomial of a relationship graph given as `(a, b, "alliance"|"conflict")`
/// triples.
#[pyfunction]
fn polynomial(universe: &PyUniversalSet, subjects: Vec<String>, relations: Vec<(String, String, String)>) -> PyResult<PyExpr> {
    let pairs = relations
        .into_iter()
        .map(|(a, b, r)| Ok((a, b, relation(&r)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let g = rgt::RelationshipGraph::new(subjects, pairs).map_err(err)?;
    let expr = rgt::graph_to_polynomial(&g).map_err(err)?;
    Ok(PyExpr {
        expr,
        universe: universe.0.clone(),
    })
}

fn decision(r: &DecisionResult) -> Option<(PyActionSet, PyActionSet)> {
    match r {
        DecisionResult::Frustration => None,
        DecisionResult::Interval { lower, upper } => Some((PyActionSet(lower.clone()), PyActionSet(upper.clone()))),
    }
}

/// Per-subject `(lower, upper)` bounds, or `None` for a frustrated subject.
/// `influences` maps `(from, to)` to a set literal.
#[pyfunction]
fn forward_task(
    folded: &PyExpr,
    influences: BTreeMap<(String, String), String>,
) -> PyResult<BTreeMap<String, Option<(PyActionSet, PyActionSet)>>> {
    let subjects: Vec<String> = folded.expr.variables().into_iter().collect();
    let mut m = rgt::InfluenceMatrix::new(folded.universe.clone(), subjects);
    for ((from, to), v) in influences {
        let set = folded.universe.parse_set(&v).map_err(err)?;
        m.set(&from, &to, set).map_err(err)?;
    }
    let out = rgt::forward_task(&folded.expr, &m).map_err(err)?;
    Ok(out.iter().map(|(k, r)| (k.clone(), decision(r))).collect())
}

/// Joint influences pinning `controlled` to exactly `target`.
#[pyfunction]
fn inverse_task(folded: &PyExpr, controlled: &str, target: &str) -> PyResult<Vec<BTreeMap<String, String>>> {
    let target = folded.universe.parse_set(target).map_err(err)?;
    let out = rgt::inverse_task(&folded.expr, controlled, &target).map_err(err)?;
    Ok(out.iter().map(assignment_strings).collect())
}

/// Simulates one resonator from rest. Returns `(spike_times, samples)`
/// with samples as `(t, x, y, spike)`.
#[pyfunction]
#[pyo3(signature = (omega, pulses, duration, damping=NeuronParams::DEFAULT_DAMPING, tau=NeuronParams::DEFAULT_TAU))]
fn simulate(
    omega: f64,
    pulses: Vec<(f64, f64)>,
    duration: f64,
    damping: f64,
    tau: f64,
) -> PyResult<(Vec<f64>, Samples)> {
    let params = NeuronParams {
        damping,
        tau,
        ..NeuronParams::with_omega(omega)
    };
    let pulses: Vec<Pulse> = pulses.into_iter().map(|(t, m)| Pulse::new(t, m)).collect();
    let trace = neuron::simulate(&params, &pulses, duration).map_err(err)?;
    let samples = trace.samples.iter().map(|s| (s.t, s.x, s.y, s.spike)).collect();
    Ok((trace.spikes, samples))
}

/// Runs a scenario file end to end and returns the decisions report as
/// JSON text.
#[pyfunction]
#[pyo3(signature = (path, seed=None))]
fn run_scenario(path: PathBuf, seed: Option<u64>) -> PyResult<String> {
    let cfg = ScenarioConfig::load(&path).map_err(err)?;
    let s = Scenario::from_config(&cfg).map_err(err)?;
    let out = scenario::run_scenario(&s, seed.unwrap_or(s.seed)).map_err(err)?;
    Ok(report::to_pretty(&report::run_report(&out)))
}

/// Messages of a scenario run as `messages.csv` text.
#[pyfunction]
#[pyo3(signature = (path, seed=None))]
fn run_messages(path: PathBuf, seed: Option<u64>) -> PyResult<String> {
    let cfg = ScenarioConfig::load(&path).map_err(err)?;
    let s = Scenario::from_config(&cfg).map_err(err)?;
    let out = scenario::run_scenario(&s, seed.unwrap_or(s.seed)).map_err(err)?;
    let mut buf = Vec::new();
    report::write_messages_csv(&mut buf, out.messages()).map_err(err)?;
    String::from_utf8(buf).map_err(err)
}

#[pymodule]
fn reflex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyUniversalSet>()?;
    m.add_class::<PyActionSet>()?;
    m.add_class::<PyExpr>()?;
    m.add_function(wrap_pyfunction!(polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(forward_task, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_task, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_messages, m)?)?;
    Ok(())
}
