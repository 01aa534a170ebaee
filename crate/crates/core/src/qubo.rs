//! QUBO coefficient matrices for the rescaled core-periphery objective.
//!
//! The dense matrix is
//! `Q = 2(1+rho)D - 2(n-1)rho I - (1+rho)A + rho E` with `E = 11^T - I`, so
//! its off-diagonal entries are `-1` on edges and `rho` on missing edges. The
//! sparse variant drops `rho E`, keeping off-diagonal entries `-(1+rho)` on
//! edges only. For binary `x` with `s` ones the two differ by exactly
//! `rho * s * (s - 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{stats, Graph};
use crate::objective::Partition;

/// Dense matrices are stored explicitly up to this dimension.
pub const DENSE_MATERIALIZE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuboKind {
    /// Full matrix `Q`.
    Dense,
    /// `Q` without the `rho E` term; same sparsity as the adjacency matrix.
    Sparse,
}

impl fmt::Display for QuboKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuboKind::Dense => "q",
            QuboKind::Sparse => "qhat",
        })
    }
}

impl FromStr for QuboKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "dense" => Ok(QuboKind::Dense),
            "qhat" | "sparse" => Ok(QuboKind::Sparse),
            other => Err(Error::InvalidParameter(format!(
                "unknown matrix {other:?} (expected q or qhat)"
            ))),
        }
    }
}

/// Symmetric QUBO matrix built from a graph. Maximize `x^T Q x`.
#[derive(Clone, Debug)]
pub struct QuboMatrix {
    kind: QuboKind,
    diag: Vec<f64>,
    adj: Vec<Vec<usize>>,
    rho: Ratio<u64>,
    rho_f: f64,
    /// `-(1 + rho)`: the adjacency coefficient before `rho E` is added.
    edge_coupling: f64,
    dense: Option<Vec<f64>>,
}

/// Builds the dense matrix `Q`.
pub fn build_q(g: &Graph) -> Result<QuboMatrix> {
    QuboMatrix::build(g, QuboKind::Dense)
}

/// Builds the sparse matrix `Q-hat`.
pub fn build_qhat(g: &Graph) -> Result<QuboMatrix> {
    QuboMatrix::build(g, QuboKind::Sparse)
}

impl QuboMatrix {
    pub fn build(g: &Graph, kind: QuboKind) -> Result<Self> {
        let st = stats(g)?;
        let n = g.n();
        let num = *st.rho.numer() as i128;
        let den = *st.rho.denom() as i128;
        let diag: Vec<f64> = st
            .degrees
            .iter()
            .map(|&d| {
                let scaled = 2 * (den + num) * d as i128 - 2 * (n as i128 - 1) * num;
                scaled as f64 / den as f64
            })
            .collect();
        let rho_f = st.rho_f64();
        let edge_coupling = -((den + num) as f64 / den as f64);
        let adj: Vec<Vec<usize>> = (0..n).map(|i| g.neighbors(i).to_vec()).collect();

        let dense = (kind == QuboKind::Dense && n <= DENSE_MATERIALIZE_LIMIT).then(|| {
            let mut m = vec![rho_f; n * n];
            for i in 0..n {
                m[i * n + i] = diag[i];
                for &j in &adj[i] {
                    m[i * n + j] = -1.0;
                }
            }
            m
        });

        Ok(QuboMatrix {
            kind,
            diag,
            adj,
            rho: st.rho,
            rho_f,
            edge_coupling,
            dense,
        })
    }

    pub fn kind(&self) -> QuboKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn rho(&self) -> Ratio<u64> {
        self.rho
    }

    pub fn rho_f64(&self) -> f64 {
        self.rho_f
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn is_materialized(&self) -> bool {
        self.dense.is_some()
    }

    pub(crate) fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    fn is_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Entry `(i, j)`; symmetric.
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        if let Some(m) = &self.dense {
            return m[i * self.n() + j];
        }
        match (self.kind, self.is_edge(i, j)) {
            (QuboKind::Dense, true) => -1.0,
            (QuboKind::Dense, false) => self.rho_f,
            (QuboKind::Sparse, true) => self.edge_coupling,
            (QuboKind::Sparse, false) => 0.0,
        }
    }

    /// Nonzero off-diagonal entries `(i, j, q_ij)` with `i < j`, row-major.
    pub fn upper_entries(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        match self.kind {
            QuboKind::Sparse => {
                for i in 0..n {
                    for &j in self.adj[i].iter().filter(|&&j| j > i) {
                        out.push((i, j, self.edge_coupling));
                    }
                }
            }
            QuboKind::Dense => {
                for i in 0..n {
                    for j in i + 1..n {
                        let c = self.coefficient(i, j);
                        if c != 0.0 {
                            out.push((i, j, c));
                        }
                    }
                }
            }
        }
        out
    }

    /// Value of `x^T Q x` for a 0/1 vector.
    ///
    /// The sparse form costs `O(core size + edges at the core)`. The dense form
    /// sums the explicit core block when materialized and otherwise adds
    /// `rho s (s-1)` to the sparse value.
    pub fn quad_form(&self, p: &Partition) -> Result<f64> {
        p.check_len(self.n())?;
        let core = p.core_indices();
        if let Some(m) = &self.dense {
            let n = self.n();
            let mut total = 0.0;
            for &i in &core {
                let row = &m[i * n..(i + 1) * n];
                total += core.iter().map(|&j| row[j]).sum::<f64>();
            }
            return Ok(total);
        }
        let mut diag_sum = 0.0;
        let mut internal_twice = 0usize;
        for &i in &core {
            diag_sum += self.diag[i];
            internal_twice += self.adj[i].iter().filter(|&&j| p.is_core(j)).count();
        }
        let sparse = diag_sum + self.edge_coupling * internal_twice as f64;
        Ok(match self.kind {
            QuboKind::Sparse => sparse,
            QuboKind::Dense => {
                let s = core.len() as f64;
                sparse + self.rho_f * s * (s - 1.0)
            }
        })
    }

    /// Local fields `h_i = sum_{j != i} q_ij x_j`.
    pub(crate) fn fields(&self, x: &[bool]) -> SparseFields {
        let mut adj_field = vec![0.0; self.n()];
        let mut core_size = 0;
        for (i, &on) in x.iter().enumerate() {
            if on {
                core_size += 1;
                for &j in &self.adj[i] {
                    adj_field[j] += self.edge_coupling;
                }
            }
        }
        SparseFields {
            adj_field,
            core_size,
        }
    }

    /// Gain in `x^T Q x` from flipping bit `i`.
    #[inline]
    pub(crate) fn flip_delta(&self, f: &SparseFields, x: &[bool], i: usize) -> f64 {
        let mut h = f.adj_field[i];
        if self.kind == QuboKind::Dense {
            let others = f.core_size - x[i] as usize;
            h += self.rho_f * others as f64;
        }
        let sign = if x[i] { -1.0 } else { 1.0 };
        sign * (self.diag[i] + 2.0 * h)
    }

    #[inline]
    pub(crate) fn apply_flip(&self, f: &mut SparseFields, x: &mut [bool], i: usize) {
        let add = !x[i];
        x[i] = add;
        let c = if add { self.edge_coupling } else { -self.edge_coupling };
        for &j in &self.adj[i] {
            f.adj_field[j] += c;
        }
        if add {
            f.core_size += 1;
        } else {
            f.core_size -= 1;
        }
    }

    /// Product `Q v` for a real vector, in `O(n + edges)`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let total: f64 = v.iter().sum();
        (0..n)
            .map(|i| {
                let adj: f64 = self.adj[i].iter().map(|&j| v[j]).sum();
                let mut out = self.diag[i] * v[i] + self.edge_coupling * adj;
                if self.kind == QuboKind::Dense {
                    out += self.rho_f * (total - v[i]);
                }
                out
            })
            .collect()
    }

    /// Row-major matrix `den * Q` with integer entries, where `rho = num/den`.
    pub(crate) fn scaled_integer_matrix(&self) -> (Vec<i64>, i64) {
        let n = self.n();
        let num = *self.rho.numer() as i64;
        let den = *self.rho.denom() as i64;
        let (edge, non_edge) = match self.kind {
            QuboKind::Dense => (-den, num),
            QuboKind::Sparse => (-(den + num), 0),
        };
        let mut m = vec![non_edge; n * n];
        for i in 0..n {
            let d = self.adj[i].len() as i64;
            m[i * n + i] = 2 * (den + num) * d - 2 * (n as i64 - 1) * num;
            for &j in &self.adj[i] {
                m[i * n + j] = edge;
            }
        }
        (m, den)
    }

    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(|&d| d == 0.0)
            && match self.kind {
                QuboKind::Dense => self.rho_f == 0.0 && self.adj.iter().all(Vec::is_empty),
                QuboKind::Sparse => self.adj.iter().all(Vec::is_empty),
            }
    }
}

/// Incrementally maintained adjacency part of the local fields plus the core
/// size; the `rho E` part of dense fields is `rho * (core size - x_i)`.
#[derive(Clone, Debug)]
pub(crate) struct SparseFields {
    pub(crate) adj_field: Vec<f64>,
    pub(crate) core_size: usize,
}

/// Minimization problem `min y^T C y` equivalent to maximizing `x^T Q x`,
/// with linear terms on the diagonal and couplers folded into `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExportedQubo {
    pub n: usize,
    pub offset: f64,
    pub linear: Vec<f64>,
    /// `(i, j, c_ij)` with `i < j`, sorted.
    pub quadratic: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuboFileFormat {
    /// qbsolv-style text: `p qubo 0 maxNodes nNodes nCouplers` header.
    QuboText,
    Json,
}

impl FromStr for QuboFileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qubo" | "qubo_text" | "qubo-text" | "text" => Ok(QuboFileFormat::QuboText),
            "json" => Ok(QuboFileFormat::Json),
            other => Err(Error::InvalidParameter(format!(
                "unknown QUBO file format {other:?} (expected qubo or json)"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonQubo {
    n: usize,
    offset: f64,
    linear: serde_json::Map<String, serde_json::Value>,
    quadratic: serde_json::Map<String, serde_json::Value>,
}

impl ExportedQubo {
    pub fn from_matrix(q: &QuboMatrix) -> Self {
        ExportedQubo {
            n: q.n(),
            offset: 0.0,
            linear: q.diag().iter().map(|&d| -d).collect(),
            quadratic: q
                .upper_entries()
                .into_iter()
                .map(|(i, j, c)| (i, j, -2.0 * c))
                .collect(),
        }
    }

    /// `offset + sum_i c_i x_i + sum_{i<j} c_ij x_i x_j`.
    pub fn energy(&self, x: &[bool]) -> f64 {
        let lin: f64 = self
            .linear
            .iter()
            .zip(x)
            .filter(|(_, &on)| on)
            .map(|(c, _)| c)
            .sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .filter(|&&(i, j, _)| x[i] && x[j])
            .map(|&(_, _, c)| c)
            .sum();
        self.offset + lin + quad
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let num = |v: f64| {
            serde_json::Number::from_f64(v)
                .map(serde_json::Value::Number)
                .ok_or_else(|| Error::Internal(format!("non-finite coefficient {v}")))
        };
        let mut linear = serde_json::Map::new();
        for (i, &c) in self.linear.iter().enumerate() {
            linear.insert(i.to_string(), num(c)?);
        }
        let mut quadratic = serde_json::Map::new();
        for &(i, j, c) in &self.quadratic {
            quadratic.insert(format!("{i},{j}"), num(c)?);
        }
        let doc = JsonQubo {
            n: self.n,
            offset: self.offset,
            linear,
            quadratic,
        };
        serde_json::to_writer_pretty(out, &doc)
            .map_err(|e| Error::Internal(format!("JSON serialization failed: {e}")))
    }

    pub fn read_json<R: std::io::Read>(input: R) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            path: "<json>".into(),
            line: 0,
            message: m,
        };
        let doc: JsonQubo = serde_json::from_reader(input).map_err(|e| bad(e.to_string()))?;
        let value = |v: &serde_json::Value| {
            v.as_f64()
                .ok_or_else(|| bad(format!("coefficient {v} is not a number")))
        };
        let index = |s: &str| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&i| i < doc.n)
                .ok_or_else(|| bad(format!("invalid node index {s:?}")))
        };
        let mut linear = vec![0.0; doc.n];
        for (k, v) in &doc.linear {
            linear[index(k)?] += value(v)?;
        }
        let mut quadratic = BTreeMap::new();
        for (k, v) in &doc.quadratic {
            let (a, b) = k
                .split_once(',')
                .ok_or_else(|| bad(format!("coupler key {k:?} is not \"i,j\"")))?;
            let (i, j) = (index(a)?, index(b)?);
            let c = value(v)?;
            if i == j {
                linear[i] += c;
            } else {
                *quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += c;
            }
        }
        Ok(ExportedQubo {
            n: doc.n,
            offset: doc.offset,
            linear,
            quadratic: quadratic.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
        })
    }

    pub fn write_qubo_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "c core-periphery QUBO (minimization), 0-based ids")?;
        writeln!(
            out,
            "p qubo 0 {} {} {}",
            self.n,
            self.linear.len(),
            self.quadratic.len()
        )?;
        for (i, c) in self.linear.iter().enumerate() {
            writeln!(out, "{i} {i} {c}")?;
        }
        for &(i, j, c) in &self.quadratic {
            writeln!(out, "{i} {j} {c}")?;
        }
        Ok(())
    }

    pub fn read_qubo_text<R: BufRead>(input: R) -> Result<Self> {
        let bad = |line: usize, m: String| Error::Parse {
            path: "<qubo>".into(),
            line,
            message: m,
        };
        let mut header: Option<(usize, usize, usize)> = None;
        let mut linear = Vec::new();
        let mut quadratic = BTreeMap::new();
        let (mut nodes, mut couplers) = (0, 0);
        for (idx, line) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::io("<qubo>", e))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "p" {
                if tokens.len() != 6 || tokens[1] != "qubo" {
                    return Err(bad(lineno, format!("malformed header {line:?}")));
                }
                let nums: Vec<usize> = tokens[3..]
                    .iter()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| bad(lineno, e.to_string()))?;
                header = Some((nums[0], nums[1], nums[2]));
                linear = vec![0.0; nums[0]];
                continue;
            }
            let Some((n, _, _)) = header else {
                return Err(bad(lineno, "entry before `p qubo` header".into()));
            };
            if tokens.len() != 3 {
                return Err(bad(lineno, format!("expected `i j value`, found {line:?}")));
            }
            let i: usize = tokens[0].parse().map_err(|_| bad(lineno, "bad index".into()))?;
            let j: usize = tokens[1].parse().map_err(|_| bad(lineno, "bad index".into()))?;
            let c: f64 = tokens[2].parse().map_err(|_| bad(lineno, "bad value".into()))?;
            if i >= n || j >= n {
                return Err(bad(lineno, format!("index out of range 0..{n}")));
            }
            if i == j {
                linear[i] += c;
                nodes += 1;
            } else {
                *quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += c;
                couplers += 1;
            }
        }
        let (n, want_nodes, want_couplers) =
            header.ok_or_else(|| bad(0, "missing `p qubo` header".into()))?;
        if nodes != want_nodes || couplers != want_couplers {
            return Err(bad(
                0,
                format!(
                    "header announces {want_nodes} nodes / {want_couplers} couplers, found {nodes} / {couplers}"
                ),
            ));
        }
        Ok(ExportedQubo {
            n,
            offset: 0.0,
            linear,
            quadratic: quadratic.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
        })
    }
}

/// Writes the minimization form of `q` to `path`.
pub fn export_qubo(q: &QuboMatrix, path: impl AsRef<Path>, format: QuboFileFormat) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let exported = ExportedQubo::from_matrix(q);
    match format {
        QuboFileFormat::Json => exported.write_json(&mut out)?,
        QuboFileFormat::QuboText => exported
            .write_qubo_text(&mut out)
            .map_err(|e| Error::io(path, e))?,
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn import_qubo(path: impl AsRef<Path>, format: QuboFileFormat) -> Result<ExportedQubo> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    match format {
        QuboFileFormat::Json => ExportedQubo::read_json(reader),
        QuboFileFormat::QuboText => ExportedQubo::read_qubo_text(reader),
    }
}
