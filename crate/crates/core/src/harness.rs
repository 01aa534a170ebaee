//! Experiment harness: runs methods on a graph, assembles comparison reports
//! and sweep curves. The `cpq` binary is a thin layer over this module.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{
    coreness, partition_by_coreness, CorenessMethod, CorenessVector, NONLIN_PM_ALPHA,
};
use crate::error::{Error, Result};
use crate::graph::{load_graph, remove_isolated, stats, Graph, GraphFormat};
use crate::objective::{sweep_prefix_with, ObjectiveKind, Partition, SweepCurve};
use crate::qubo::{build_q, build_qhat, QuboMatrix};
use crate::solvers::{solve_anneal, solve_exhaustive, values_tie, AnnealSchedule, EXHAUSTIVE_MAX_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    AnnealQ,
    AnnealQhat,
    Exhaustive,
    Coreness(CorenessMethod),
    /// The generating partition of an SBM sample.
    Planted,
}

impl Method {
    /// Every method runnable on an arbitrary graph, in report order.
    pub fn standard() -> Vec<Method> {
        let mut all = vec![Method::AnnealQ, Method::AnnealQhat, Method::Exhaustive];
        all.extend(CorenessMethod::ALL.into_iter().map(Method::Coreness));
        all
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::AnnealQ => "anneal-q",
            Method::AnnealQhat => "anneal-qhat",
            Method::Exhaustive => "exhaustive",
            Method::Coreness(c) => c.name(),
            Method::Planted => "planted",
        }
    }

    fn uses_seed(self) -> bool {
        matches!(
            self,
            Method::AnnealQ | Method::AnnealQhat | Method::Coreness(CorenessMethod::GenBe)
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anneal-q" => Ok(Method::AnnealQ),
            "anneal-qhat" => Ok(Method::AnnealQhat),
            "exhaustive" => Ok(Method::Exhaustive),
            "planted" => Ok(Method::Planted),
            _ => s.parse().map(Method::Coreness),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Annealing reads; the schedule default when absent.
    pub samples: Option<usize>,
    /// Annealing sweeps per read; the schedule default when absent.
    pub sweeps: Option<usize>,
}

impl RunConfig {
    pub fn new(seed: u64) -> Self {
        RunConfig {
            seed,
            samples: None,
            sweeps: None,
        }
    }

    fn schedule(&self, q: &QuboMatrix) -> AnnealSchedule {
        let mut s = AnnealSchedule::default_for(q, self.seed);
        if let Some(r) = self.samples {
            s = s.with_reads(r);
        }
        if let Some(w) = self.sweeps {
            s = s.with_sweeps(w);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Outcome of one method. `value` is always `x^T Q x` for the dense `Q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub method: String,
    pub status: Status,
    pub value: Option<f64>,
    /// `x^T Q̂ x` of the same partition.
    pub qhat_value: Option<f64>,
    pub core_size: Option<usize>,
    pub core_labels: Vec<String>,
    /// Seconds; left out of serialized output unless timing is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub partition: Option<Partition>,
}

impl RunResult {
    pub fn failed(method: &str, err: &Error) -> Self {
        RunResult {
            method: method.to_owned(),
            status: Status::Error,
            value: None,
            qhat_value: None,
            core_size: None,
            core_labels: Vec::new(),
            wall_time: None,
            seed: None,
            error: Some(err.to_string()),
            partition: None,
        }
    }
}

/// Recomputes `x^T Q x` and compares with the reported value.
pub fn self_check(q: &QuboMatrix, p: &Partition, value: f64) -> Result<()> {
    let fresh = q.quad_form(p)?;
    if values_tie(fresh, value) {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "reported value {value} differs from recomputed x^T Q x = {fresh}"
        )))
    }
}

/// Runs one method. `q` must be the dense matrix of `g`; `planted` is
/// required for [`Method::Planted`].
pub fn run_method(
    g: &Graph,
    q: &QuboMatrix,
    method: Method,
    cfg: &RunConfig,
    planted: Option<&Partition>,
) -> Result<RunResult> {
    let start = Instant::now();
    let (partition, value) = match method {
        Method::AnnealQ => {
            let set = solve_anneal(q, &cfg.schedule(q))?;
            let best = set.best();
            (best.partition.clone(), best.value)
        }
        Method::AnnealQhat => {
            let qhat = build_qhat(g)?;
            let set = solve_anneal(&qhat, &cfg.schedule(&qhat))?;
            let p = set.best().partition.clone();
            let v = q.quad_form(&p)?;
            (p, v)
        }
        Method::Exhaustive => solve_exhaustive(q)?,
        Method::Coreness(c) => {
            let t = partition_by_coreness(g, q, c, cfg.seed)?;
            (t.partition, t.value)
        }
        Method::Planted => {
            let p = planted
                .ok_or_else(|| {
                    Error::InvalidParameter("planted partition is only known for SBM input".into())
                })?
                .clone();
            p.check_len(g.n())?;
            let v = q.quad_form(&p)?;
            (p, v)
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    self_check(q, &partition, value)?;
    let qhat_value = build_qhat(g)?.quad_form(&partition)?;
    Ok(RunResult {
        method: method.name().to_owned(),
        status: Status::Ok,
        value: Some(value),
        qhat_value: Some(qhat_value),
        core_size: Some(partition.core_size()),
        core_labels: partition
            .core_indices()
            .into_iter()
            .map(|i| g.label(i).to_owned())
            .collect(),
        wall_time: Some(wall_time),
        seed: method.uses_seed().then_some(cfg.seed),
        error: None,
        partition: Some(partition),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphMeta {
    pub n: usize,
    pub n1: u64,
    pub n2: u64,
    pub rho: f64,
    /// `rho` as an exact fraction `n1/n2` in lowest terms.
    pub rho_exact: String,
    pub dropped_isolated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEntry {
    pub method: String,
    pub value: f64,
    pub rank_1: bool,
    pub rank_2: bool,
    /// Another method reached the same value.
    pub tie: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub graph: GraphMeta,
    pub results: Vec<RunResult>,
    pub ranking: Vec<RankEntry>,
}

/// Successful results by value, descending (report order on ties), with flags
/// for the largest and second-largest distinct values.
pub fn rank_results(results: &[RunResult]) -> Vec<RankEntry> {
    let mut ok: Vec<(&str, f64)> = results
        .iter()
        .filter_map(|r| r.value.map(|v| (r.method.as_str(), v)))
        .collect();
    ok.sort_by(|a, b| b.1.total_cmp(&a.1));
    let first = ok.first().map(|e| e.1);
    let second = first.and_then(|f| ok.iter().map(|e| e.1).find(|&v| !values_tie(v, f)));
    ok.iter()
        .map(|&(method, value)| RankEntry {
            method: method.to_owned(),
            value,
            rank_1: first.is_some_and(|f| values_tie(value, f)),
            rank_2: second.is_some_and(|s| values_tie(value, s)),
            tie: ok
                .iter()
                .filter(|e| values_tie(e.1, value))
                .count()
                > 1,
        })
        .collect()
}

pub fn graph_meta(g: &Graph, dropped_isolated: usize) -> Result<GraphMeta> {
    let s = stats(g)?;
    Ok(GraphMeta {
        n: s.n,
        n1: s.n1,
        n2: s.n2,
        rho: s.rho_f64(),
        rho_exact: format!("{}/{}", s.rho.numer(), s.rho.denom()),
        dropped_isolated,
    })
}

/// Runs each named method; unknown names and failing methods become error
/// rows. Output order follows `methods` whether or not `parallel` is set.
pub fn bench(
    g: &Graph,
    methods: &[String],
    cfg: &RunConfig,
    planted: Option<&Partition>,
    dropped_isolated: usize,
    parallel: bool,
) -> Result<BenchReport> {
    let meta = graph_meta(g, dropped_isolated)?;
    let q = build_q(g)?;
    let run = |name: &String| -> RunResult {
        let outcome = name
            .parse::<Method>()
            .and_then(|m| run_method(g, &q, m, cfg, planted));
        match outcome {
            Ok(r) => r,
            Err(e) => {
                log::warn!("{name}: {e}");
                RunResult::failed(name, &e)
            }
        }
    };
    let results: Vec<RunResult> = if parallel {
        methods.par_iter().map(run).collect()
    } else {
        methods.iter().map(run).collect()
    };
    // a failed self-check is a bug, not a per-method failure
    if let Some(e) = results
        .iter()
        .filter_map(|r| r.error.as_deref())
        .find(|e| e.starts_with("internal consistency"))
    {
        return Err(Error::Internal(e.to_owned()));
    }
    let ranking = rank_results(&results);
    Ok(BenchReport {
        graph: meta,
        results,
        ranking,
    })
}

/// Default bench methods for a graph: every standard method, with
/// exhaustive search only when it is feasible, and the planted partition
/// when known.
pub fn default_bench_methods(n: usize, has_planted: bool) -> Vec<String> {
    let mut out: Vec<String> = Method::standard()
        .into_iter()
        .filter(|m| *m != Method::Exhaustive || n <= EXHAUSTIVE_MAX_N)
        .map(|m| m.name().to_owned())
        .collect();
    if has_planted {
        out.push(Method::Planted.name().to_owned());
    }
    out
}

impl BenchReport {
    /// Columns `method,value,core_size,wall_time_s,seed,status,rank_1,rank_2`.
    /// Missing fields are left empty; `wall_time_s` is empty unless
    /// `timing` is set, so untimed reports are reproducible byte for byte.
    pub fn write_csv<W: Write>(&self, out: W, timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_io = |e: csv::Error| Error::Internal(format!("CSV output failed: {e}"));
        w.write_record([
            "method",
            "value",
            "core_size",
            "wall_time_s",
            "seed",
            "status",
            "rank_1",
            "rank_2",
        ])
        .map_err(to_io)?;
        for r in &self.results {
            let rank = self.ranking.iter().find(|e| e.method == r.method);
            let opt = |v: Option<String>| v.unwrap_or_default();
            w.write_record([
                r.method.clone(),
                opt(r.value.map(|v| v.to_string())),
                opt(r.core_size.map(|v| v.to_string())),
                opt(r.wall_time.filter(|_| timing).map(|v| format!("{v:.6}"))),
                opt(r.seed.map(|v| v.to_string())),
                match r.status {
                    Status::Ok => "ok".to_owned(),
                    Status::Error => "error".to_owned(),
                },
                rank.is_some_and(|e| e.rank_1).to_string(),
                rank.is_some_and(|e| e.rank_2).to_string(),
            ])
            .map_err(to_io)?;
        }
        w.flush().map_err(|e| Error::Internal(format!("CSV output failed: {e}")))?;
        Ok(())
    }

    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        let mut report = self.clone();
        if !timing {
            report.results.iter_mut().for_each(|r| r.wall_time = None);
        }
        serde_json::to_value(&report).expect("report serializes")
    }
}

/// Node orderings for prefix sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    Original,
    Degree,
    EigA,
    NonlinPm,
    /// One node label per line.
    File(PathBuf),
}

impl FromStr for OrderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(OrderSpec::Original),
            "degree" => Ok(OrderSpec::Degree),
            "eig-a" => Ok(OrderSpec::EigA),
            "nonlin-pm" => Ok(OrderSpec::NonlinPm),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(OrderSpec::File(PathBuf::from(p))),
                _ => Err(Error::InvalidParameter(format!(
                    "unknown order {s:?}; expected original, degree, eig-a, nonlin-pm or file:PATH"
                ))),
            },
        }
    }
}

fn ranking_of(c: CorenessVector) -> Vec<usize> {
    c.ranking()
}

/// Reads an order file: one label per line, blank lines and lines starting
/// with `#` skipped. Every node must appear exactly once.
pub fn read_order_file(g: &Graph, path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for (k, line) in text.lines().enumerate() {
        let label = line.trim();
        if label.is_empty() || label.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_owned(),
            line: k + 1,
            message,
        };
        let i = g
            .index_of(label)
            .ok_or_else(|| parse_err(format!("unknown node {label:?}")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(parse_err(format!("node {label:?} listed twice")));
        }
        order.push(i);
    }
    if order.len() != g.n() {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: text.lines().count(),
            message: format!("order lists {} of {} nodes", order.len(), g.n()),
        });
    }
    Ok(order)
}

pub fn resolve_order(g: &Graph, spec: &OrderSpec) -> Result<Vec<usize>> {
    match spec {
        OrderSpec::Original => Ok((0..g.n()).collect()),
        OrderSpec::Degree => Ok(ranking_of(coreness(g, CorenessMethod::Degree, 0)?)),
        OrderSpec::EigA => Ok(ranking_of(coreness(g, CorenessMethod::EigA, 0)?)),
        OrderSpec::NonlinPm => Ok(ranking_of(crate::baselines::coreness_nonlin_pm(
            g,
            NONLIN_PM_ALPHA,
            2.0 * NONLIN_PM_ALPHA,
        )?)),
        OrderSpec::File(p) => read_order_file(g, p),
    }
}

/// A prefix curve with plot-ready scaled values.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub curve: SweepCurve,
    /// `value / max` when `max > 0`; otherwise a copy of the raw values.
    pub scaled: Vec<f64>,
    pub was_scaled: bool,
}

pub fn sweep(g: &Graph, order: &[usize], kind: ObjectiveKind) -> Result<SweepOutput> {
    let curve = sweep_prefix_with(g, order, kind)?;
    let max = curve.max_value();
    let was_scaled = max > 0.0;
    let scaled = if was_scaled {
        curve.values.iter().map(|v| v / max).collect()
    } else {
        log::warn!("sweep maximum is {max}; values left unscaled");
        curve.values.clone()
    };
    Ok(SweepOutput {
        curve,
        scaled,
        was_scaled,
    })
}

impl SweepOutput {
    /// Columns `k,value,value_scaled`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_io = |e: csv::Error| Error::Internal(format!("CSV output failed: {e}"));
        w.write_record(["k", "value", "value_scaled"]).map_err(to_io)?;
        for (k, (v, s)) in self.curve.values.iter().zip(&self.scaled).enumerate() {
            w.write_record([k.to_string(), v.to_string(), s.to_string()])
                .map_err(to_io)?;
        }
        w.flush().map_err(|e| Error::Internal(format!("CSV output failed: {e}")))?;
        Ok(())
    }
}

/// Loads a graph file, optionally dropping isolated nodes. Returns the
/// graph and the labels that were dropped.
pub fn load_input(path: &Path, format: GraphFormat, drop_isolated: bool) -> Result<(Graph, Vec<String>)> {
    let g = load_graph(path, format)?;
    if drop_isolated {
        let (g, dropped) = remove_isolated(&g);
        if !dropped.is_empty() {
            log::info!("dropped {} isolated nodes", dropped.len());
        }
        Ok((g, dropped))
    } else {
        Ok((g, Vec::new()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{p3, random_graph, star};
    use crate::synth::{planted_partition, sample_sbm, SbmSpec};

    #[test]
    fn method_names_round_trip() {
        for m in Method::standard().into_iter().chain([Method::Planted]) {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!(matches!("qaoa".parse::<Method>(), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn star_exhaustive_and_degree_agree() {
        let g = star();
        let q = build_q(&g).unwrap();
        let cfg = RunConfig::new(1);
        let ex = run_method(&g, &q, Method::Exhaustive, &cfg, None).unwrap();
        assert_eq!(ex.value, Some(8.0));
        assert_eq!(ex.core_size, Some(1));
        assert_eq!(ex.core_labels, vec!["a".to_string()]);
        assert_eq!(ex.seed, None);
        let deg = run_method(&g, &q, Method::Coreness(CorenessMethod::Degree), &cfg, None).unwrap();
        assert_eq!(deg.partition, ex.partition);
        assert_eq!(deg.value, ex.value);
    }

    #[test]
    fn p3_anneal_value() {
        let g = p3();
        let q = build_q(&g).unwrap();
        let mut cfg = RunConfig::new(7);
        cfg.samples = Some(100);
        let r = run_method(&g, &q, Method::AnnealQ, &cfg, None).unwrap();
        assert_eq!(r.value, Some(4.0));
        assert_eq!(r.seed, Some(7));
    }

    #[test]
    fn anneal_qhat_reports_dense_value() {
        let g = random_graph(14, 0.3, 5);
        let q = build_q(&g).unwrap();
        let r = run_method(&g, &q, Method::AnnealQhat, &RunConfig::new(3), None).unwrap();
        let p = r.partition.clone().unwrap();
        assert_eq!(r.value.unwrap(), q.quad_form(&p).unwrap());
        let s = p.core_size() as f64;
        let rho = q.rho_f64();
        assert!((r.value.unwrap() - r.qhat_value.unwrap() - rho * s * (s - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn self_check_rejects_wrong_value() {
        let g = p3();
        let q = build_q(&g).unwrap();
        let p = Partition::from_core(3, &[1]);
        assert!(self_check(&q, &p, 4.0).is_ok());
        let err = self_check(&q, &p, 4.5).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_INTERNAL);
    }

    #[test]
    fn planted_requires_sbm() {
        let g = p3();
        let q = build_q(&g).unwrap();
        assert!(run_method(&g, &q, Method::Planted, &RunConfig::new(0), None).is_err());
    }

    #[test]
    fn ranking_flags() {
        let mk = |m: &str, v: Option<f64>| RunResult {
            value: v,
            status: if v.is_some() { Status::Ok } else { Status::Error },
            ..RunResult::failed(m, &Error::EmptyGrid)
        };
        let results = vec![
            mk("a", Some(3.0)),
            mk("b", Some(5.0)),
            mk("c", None),
            mk("d", Some(5.0)),
            mk("e", Some(4.0)),
        ];
        let ranking = rank_results(&results);
        let names: Vec<&str> = ranking.iter().map(|e| e.method.as_str()).collect();
        assert_eq!(names, ["b", "d", "e", "a"]);
        let flags: Vec<(bool, bool, bool)> = ranking.iter().map(|e| (e.rank_1, e.rank_2, e.tie)).collect();
        assert_eq!(
            flags,
            [(true, false, true), (true, false, true), (false, true, false), (false, false, false)]
        );
    }

    #[test]
    fn bench_unknown_method_becomes_error_row() {
        let g = star();
        let methods: Vec<String> = ["degree", "bogus", "h-index"].map(String::from).to_vec();
        let report = bench(&g, &methods, &RunConfig::new(0), None, 0, false).unwrap();
        assert_eq!(report.results.len(), 3);
        assert_eq!(report.results[1].status, Status::Error);
        assert_eq!(report.ranking.len(), 2);
    }

    #[test]
    fn bench_edgeless_sbm_all_zero() {
        let spec = SbmSpec::new(12, 3, 0.0, 0.0, 0.0, 4);
        let g = sample_sbm(&spec).unwrap();
        let planted = planted_partition(&spec);
        let methods = default_bench_methods(g.n(), true);
        let report = bench(&g, &methods, &RunConfig::new(4), Some(&planted), 0, false).unwrap();
        for r in &report.results {
            match r.status {
                Status::Ok => assert_eq!(r.value, Some(0.0), "{}", r.method),
                // spectral methods need at least one edge
                Status::Error => assert!(
                    ["eig-a", "nonlin-pm"].contains(&r.method.as_str()),
                    "{}: {:?}",
                    r.method,
                    r.error
                ),
            }
        }
    }

    #[test]
    fn bench_is_deterministic_and_parallel_matches() {
        let spec = SbmSpec::new(40, 10, 0.6, 0.4, 0.05, 2);
        let g = sample_sbm(&spec).unwrap();
        let planted = planted_partition(&spec);
        let methods = default_bench_methods(g.n(), true);
        let cfg = RunConfig::new(11);
        let render = |parallel| {
            let r = bench(&g, &methods, &cfg, Some(&planted), 0, parallel).unwrap();
            let mut buf = Vec::new();
            r.write_csv(&mut buf, false).unwrap();
            (String::from_utf8(buf).unwrap(), r.to_json(false).to_string())
        };
        let a = render(false);
        assert_eq!(a, render(false));
        assert_eq!(a, render(true));
        assert!(a.0.starts_with("method,value,core_size,wall_time_s,seed,status,rank_1,rank_2\n"));
    }

    #[test]
    fn sweep_p3_original_order() {
        let g = p3();
        let out = sweep(&g, &[0, 1, 2], ObjectiveKind::Normalized).unwrap();
        let want = [
            2.0,
            crate::objective::eval_normalized(&g, &Partition::from_core(3, &[0])).unwrap(),
            crate::objective::eval_normalized(&g, &Partition::from_core(3, &[0, 1])).unwrap(),
            2.0,
        ];
        assert_eq!(out.curve.values, want);
        assert!(out.was_scaled);
        assert_eq!(out.scaled.iter().cloned().fold(0.0, f64::max), 1.0);
    }

    #[test]
    fn sweep_star_degree_order() {
        let g = star();
        let order = resolve_order(&g, &OrderSpec::Degree).unwrap();
        assert_eq!(order[0], 0);
        assert_eq!(sweep(&g, &order, ObjectiveKind::Normalized).unwrap().curve.argmax, 1);
    }

    #[test]
    fn sweep_nonpositive_max_left_unscaled() {
        // leaves first: every proper prefix of the star scores below zero
        let g = star();
        let out = sweep(&g, &[1, 2, 3, 4, 0], ObjectiveKind::Rescaled).unwrap();
        assert_eq!(out.curve.max_value(), 0.0);
        assert!(!out.was_scaled);
        assert_eq!(out.scaled, out.curve.values);
    }

    #[test]
    fn order_specs() {
        assert_eq!("original".parse::<OrderSpec>().unwrap(), OrderSpec::Original);
        assert_eq!(
            "file:o.txt".parse::<OrderSpec>().unwrap(),
            OrderSpec::File(PathBuf::from("o.txt"))
        );
        assert!("file:".parse::<OrderSpec>().is_err());
        assert!("random".parse::<OrderSpec>().is_err());
    }

    #[test]
    fn order_file_validation() {
        let g = p3();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("order.txt");
        std::fs::write(&path, "# hubs first\nb\na\n\nc\n").unwrap();
        assert_eq!(read_order_file(&g, &path).unwrap(), vec![1, 0, 2]);
        std::fs::write(&path, "b\na\n").unwrap();
        assert!(matches!(read_order_file(&g, &path), Err(Error::Parse { .. })));
        std::fs::write(&path, "b\nb\nc\n").unwrap();
        assert!(matches!(read_order_file(&g, &path), Err(Error::Parse { line: 2, .. })));
        std::fs::write(&path, "b\nz\nc\n").unwrap();
        assert!(read_order_file(&g, &path).is_err());
    }
}
