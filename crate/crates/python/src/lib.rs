use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cpq_core::baselines::{self, CorenessMethod, CorenessVector};
use cpq_core::harness::{run_method, Method, RunConfig};
use cpq_core::objective::evaluate;
use cpq_core::{
    AnnealSchedule, Error, GraphFormat, ObjectiveKind, Partition, QuboFileFormat, QuboKind, SbmSpec,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::Internal(_) | Error::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn partition(bits: &[u8]) -> PyResult<Partition> {
    Partition::from_u8(bits).map_err(to_py)
}

// Vec<u8> would come back as `bytes`
fn bits(p: &Partition) -> Vec<u32> {
    p.bits().iter().map(|&b| u32::from(b)).collect()
}

/// Undirected simple graph with string node labels.
#[pyclass(name = "Graph", module = "cpq", frozen)]
struct PyGraph {
    inner: cpq_core::Graph,
}

#[pymethods]
impl PyGraph {
    /// Builds a graph from labelled edges; labels are sorted numerically
    /// when all are integers, otherwise lexicographically.
    #[new]
    fn new(edges: Vec<(String, String)>) -> PyResult<Self> {
        let inner = cpq_core::Graph::from_labeled_edges(edges).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Graph on nodes `0..n` labelled by their index.
    #[staticmethod]
    fn from_indices(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = cpq_core::Graph::with_index_labels(n, edges).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Reads an edge list ("edgelist") or MatrixMarket ("matrixmarket") file.
    #[staticmethod]
    #[pyo3(signature = (path, format = "edgelist"))]
    fn load(path: &str, format: &str) -> PyResult<Self> {
        let format: GraphFormat = parse(format)?;
        let inner = cpq_core::load_graph(path, format).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    /// Returns the graph without isolated nodes and the dropped labels.
    fn remove_isolated(&self) -> (PyGraph, Vec<String>) {
        let (inner, dropped) = cpq_core::remove_isolated(&self.inner);
        (PyGraph { inner }, dropped)
    }

    /// `(n, n1, n2, rho)`: node count, present and missing edges, `n1 / n2`.
    fn stats(&self) -> PyResult<(usize, u64, u64, f64)> {
        let s = cpq_core::stats(&self.inner).map_err(to_py)?;
        Ok((s.n, s.n1, s.n2, s.rho_f64()))
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.num_edges())
    }
}

/// Dense `Q` ("q") or sparsified `Q-hat` ("qhat") of a graph.
#[pyclass(name = "Qubo", module = "cpq", frozen)]
struct PyQubo {
    inner: cpq_core::QuboMatrix,
}

#[pymethods]
impl PyQubo {
    #[new]
    #[pyo3(signature = (graph, kind = "q"))]
    fn new(graph: &PyGraph, kind: &str) -> PyResult<Self> {
        let kind: QuboKind = parse(kind)?;
        let inner = cpq_core::QuboMatrix::build(&graph.inner, kind).map_err(to_py)?;
        Ok(PyQubo { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho_f64()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    fn coefficient(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("index out of range for n = {n}")));
        }
        Ok(self.inner.coefficient(i, j))
    }

    /// `x^T Q x` for a 0/1 vector.
    fn quad_form(&self, x: Vec<u8>) -> PyResult<f64> {
        self.inner.quad_form(&partition(&x)?).map_err(to_py)
    }

    fn matvec(&self, v: Vec<f64>) -> PyResult<Vec<f64>> {
        if v.len() != self.inner.n() {
            return Err(to_py(Error::LengthMismatch {
                expected: self.inner.n(),
                found: v.len(),
            }));
        }
        Ok(self.inner.matvec(&v))
    }

    /// Writes the minimization form (`-Q`) as "json" or qbsolv "qubo" text.
    #[pyo3(signature = (path, format = "json"))]
    fn export(&self, path: &str, format: &str) -> PyResult<()> {
        let format: QuboFileFormat = parse(format)?;
        cpq_core::export_qubo(&self.inner, path, format).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Qubo(kind={}, n={}, rho={})", self.inner.kind(), self.inner.n(), self.inner.rho_f64())
    }
}

/// Objective of a 0/1 core indicator: "max-count", "unnormalized",
/// "normalized" or "rescaled".
#[pyfunction]
#[pyo3(signature = (graph, x, kind = "normalized"))]
fn objective(graph: &PyGraph, x: Vec<u8>, kind: &str) -> PyResult<f64> {
    let kind: ObjectiveKind = parse(kind)?;
    evaluate(&graph.inner, &partition(&x)?, kind).map_err(to_py)
}

/// Objective values of every prefix of `order`; returns `(values, argmax)`.
#[pyfunction]
#[pyo3(signature = (graph, order, kind = "normalized"))]
fn sweep(graph: &PyGraph, order: Vec<usize>, kind: &str) -> PyResult<(Vec<f64>, usize)> {
    let kind: ObjectiveKind = parse(kind)?;
    let curve = cpq_core::sweep_prefix_with(&graph.inner, &order, kind).map_err(to_py)?;
    Ok((curve.values, curve.argmax))
}

/// Exact maximizer by enumeration (n <= 24); returns `(x, value)`.
#[pyfunction]
fn solve_exhaustive(py: Python<'_>, q: &PyQubo) -> PyResult<(Vec<u32>, f64)> {
    let (p, v) = py
        .detach(|| cpq_core::solve_exhaustive(&q.inner))
        .map_err(to_py)?;
    Ok((bits(&p), v))
}

/// Simulated annealing; returns distinct samples `(x, value, count)`, best
/// first.
#[pyfunction]
#[pyo3(signature = (q, seed = 0, reads = None, sweeps = None))]
fn solve_anneal(
    py: Python<'_>,
    q: &PyQubo,
    seed: u64,
    reads: Option<usize>,
    sweeps: Option<usize>,
) -> PyResult<Vec<(Vec<u32>, f64, usize)>> {
    let mut sched = AnnealSchedule::default_for(&q.inner, seed);
    if let Some(r) = reads {
        sched = sched.with_reads(r);
    }
    if let Some(s) = sweeps {
        sched = sched.with_sweeps(s);
    }
    let set = py
        .detach(|| cpq_core::solve_anneal(&q.inner, &sched))
        .map_err(to_py)?;
    Ok(set
        .samples
        .into_iter()
        .map(|s| (bits(&s.partition), s.value, s.count))
        .collect())
}

/// Steepest single-flip ascent from `x`; returns `(x, value)`.
#[pyfunction]
fn greedy_ascent(q: &PyQubo, x: Vec<u8>) -> PyResult<(Vec<u32>, f64)> {
    let (p, v) = cpq_core::greedy_ascent(&q.inner, &partition(&x)?).map_err(to_py)?;
    Ok((bits(&p), v))
}

/// Coreness scores: "degree", "eig-a", "eig-q", "nonlin-pm", "h-index" or
/// "gen-be".
#[pyfunction]
#[pyo3(signature = (graph, method, seed = 0))]
fn coreness(py: Python<'_>, graph: &PyGraph, method: &str, seed: u64) -> PyResult<Vec<f64>> {
    let method: CorenessMethod = parse(method)?;
    let c = py
        .detach(|| baselines::coreness(&graph.inner, method, seed))
        .map_err(to_py)?;
    Ok(c.scores)
}

/// Best prefix of the score ranking under `x^T Q x`; returns
/// `(x, value, k)`.
#[pyfunction]
fn threshold(graph: &PyGraph, scores: Vec<f64>) -> PyResult<(Vec<u32>, f64, usize)> {
    let c = CorenessVector::new(scores, CorenessMethod::Degree);
    let t = baselines::threshold_optimal(&graph.inner, &c).map_err(to_py)?;
    Ok((bits(&t.partition), t.value, t.k))
}

/// Runs any harness method and returns `(value, core_size, core_labels)`
/// with the value in the dense-`Q` scale.
#[pyfunction]
#[pyo3(signature = (graph, method, seed = 0, samples = None))]
fn run(
    py: Python<'_>,
    graph: &PyGraph,
    method: &str,
    seed: u64,
    samples: Option<usize>,
) -> PyResult<(f64, usize, Vec<String>)> {
    let method: Method = parse(method)?;
    let g = &graph.inner;
    let r = py
        .detach(|| {
            let q = cpq_core::build_q(g)?;
            let cfg = RunConfig {
                seed,
                samples,
                sweeps: None,
            };
            run_method(g, &q, method, &cfg, None)
        })
        .map_err(to_py)?;
    Ok((r.value.unwrap_or(0.0), r.core_size.unwrap_or(0), r.core_labels))
}

/// Samples SBM(n, m, p1, p2, p3); the first `m` nodes are the planted core.
#[pyfunction]
#[pyo3(signature = (n, m, p1, p2, p3, seed = 0))]
fn sample_sbm(n: usize, m: usize, p1: f64, p2: f64, p3: f64, seed: u64) -> PyResult<PyGraph> {
    let inner = cpq_core::sample_sbm(&SbmSpec::new(n, m, p1, p2, p3, seed)).map_err(to_py)?;
    Ok(PyGraph { inner })
}

#[pymodule]
fn cpq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyQubo>()?;
    m.add_function(wrap_pyfunction!(objective, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exhaustive, m)?)?;
    m.add_function(wrap_pyfunction!(solve_anneal, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_ascent, m)?)?;
    m.add_function(wrap_pyfunction!(coreness, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sample_sbm, m)?)?;
    Ok(())
}
