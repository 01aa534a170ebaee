//! Undirected simple graphs, file loaders and edge statistics.
//!
//! Node ids are dense `0..n`. When a graph is built from labelled edges the
//! labels are sorted to fix the id order: numerically when every label is a
//! non-negative integer, lexicographically otherwise. This makes runs
//! independent of the record order in the input file and keeps the natural
//! `0..n-1` order of generated block-model files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Immutable undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph from explicit labels and 0-based edges.
    ///
    /// Duplicate and reversed pairs are merged. Self-loops and out-of-range
    /// endpoints are rejected.
    pub fn from_edges<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on node {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut num_edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        Ok(Graph {
            labels,
            adj,
            num_edges: num_edges / 2,
        })
    }

    /// Graph on nodes labelled `"0".."n-1"` in id order.
    pub fn with_index_labels<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Builds a graph from labelled pairs, assigning ids in sorted label order.
    pub fn from_labeled_edges<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let pairs: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(a, b)| (a.as_ref().to_owned(), b.as_ref().to_owned()))
            .collect();
        let labels = sorted_labels(pairs.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]));
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
            .collect();
        Graph::from_edges(labels, edges)
    }

    /// The empty graph with no nodes.
    pub fn empty() -> Self {
        Graph {
            labels: Vec::new(),
            adj: Vec::new(),
            num_edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Sorted neighbour ids of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Subgraph induced by `keep` (ids in the new graph follow `keep`'s order).
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut remap = vec![usize::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let mut adj = Vec::with_capacity(keep.len());
        let mut num_edges = 0;
        for &old in keep {
            let mut list: Vec<usize> = self.adj[old]
                .iter()
                .filter_map(|&j| (remap[j] != usize::MAX).then_some(remap[j]))
                .collect();
            list.sort_unstable();
            num_edges += list.len();
            adj.push(list);
        }
        Graph {
            labels,
            adj,
            num_edges: num_edges / 2,
        }
    }
}

fn sorted_labels<'a>(labels: impl Iterator<Item = &'a str>) -> Vec<String> {
    let unique: BTreeSet<&str> = labels.collect();
    let numeric: Option<Vec<(u128, &str)>> = unique
        .iter()
        .map(|l| l.parse::<u128>().ok().map(|v| (v, *l)))
        .collect();
    match numeric {
        Some(mut keyed) => {
            // "007" and "7" are distinct labels with the same value
            keyed.sort();
            keyed.into_iter().map(|(_, l)| l.to_owned()).collect()
        }
        None => unique.into_iter().map(str::to_owned).collect(),
    }
}

/// Drops nodes of degree zero. Returns the induced subgraph on the remaining
/// nodes (relative order kept) and the labels that were removed.
pub fn remove_isolated(g: &Graph) -> (Graph, Vec<String>) {
    let (keep, drop): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&i| g.degree(i) > 0);
    let removed = drop.into_iter().map(|i| g.labels[i].clone()).collect();
    (g.induced_subgraph(&keep), removed)
}

/// Present/missing edge counts and their ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    /// Number of present edges.
    pub n1: u64,
    /// Number of missing edges.
    pub n2: u64,
    /// `n1 / n2`, kept exact.
    pub rho: Ratio<u64>,
    pub degrees: Vec<usize>,
}

impl GraphStats {
    pub fn rho_f64(&self) -> f64 {
        *self.rho.numer() as f64 / *self.rho.denom() as f64
    }
}

/// Edge statistics. Fails for graphs with fewer than two nodes and for
/// complete graphs, where the missing-edge count is zero.
pub fn stats(g: &Graph) -> Result<GraphStats> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let n1 = g.num_edges() as u64;
    let n2 = pairs - n1;
    if n2 == 0 {
        return Err(Error::Density(
            "complete graph has no missing edges; rho undefined".into(),
        ));
    }
    Ok(GraphStats {
        n,
        n1,
        n2,
        rho: Ratio::new(n1, n2),
        degrees: g.degrees(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "matrixmarket" | "mtx" | "mm" => Ok(GraphFormat::MatrixMarket),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph format {other:?} (expected edgelist or matrixmarket)"
            ))),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::EdgeList => "edgelist",
            GraphFormat::MatrixMarket => "matrixmarket",
        })
    }
}

pub fn load_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        GraphFormat::EdgeList => parse_edgelist(&text, path),
        GraphFormat::MatrixMarket => parse_matrix_market(&text, path),
    }
}

/// Parses whitespace-separated `u v` records. Lines starting with `#` or `%`
/// are comments; extra columns (weights) are ignored.
pub fn parse_edgelist(text: &str, path: &Path) -> Result<Graph> {
    let mut pairs = Vec::new();
    let mut warned = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (u, v) = match (tokens.next(), tokens.next()) {
            (Some(u), Some(v)) => (u, v),
            _ => {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line: lineno,
                    message: format!("expected two node labels, found {line:?}"),
                })
            }
        };
        if tokens.next().is_some() && !warned {
            log::warn!(
                "{}: line {lineno}: extra columns ignored (edges are unweighted)",
                path.display()
            );
            warned = true;
        }
        if u == v {
            return Err(Error::SelfLoop {
                path: path.to_owned(),
                line: lineno,
                label: u.to_owned(),
            });
        }
        pairs.push((u, v));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput {
            path: path.to_owned(),
        });
    }
    Graph::from_labeled_edges(pairs)
}

/// Parses a MatrixMarket coordinate file. Values are ignored and entries of
/// `general` matrices are symmetrized. Node labels are the 1-based indices.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<Graph> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((i, l)) => break (i + 1, l),
            None => {
                return Err(Error::EmptyInput {
                    path: path.to_owned(),
                })
            }
        }
    };
    let fields: Vec<String> = header
        .1
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(header.0, "missing %%MatrixMarket matrix header".into()));
    }
    if fields[2] != "coordinate" {
        return Err(parse_err(
            header.0,
            format!("only coordinate format is supported, found {}", fields[2]),
        ));
    }
    if !matches!(fields[4].as_str(), "symmetric" | "general") {
        return Err(parse_err(
            header.0,
            format!("unsupported symmetry {:?}", fields[4]),
        ));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen_entries = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse_index = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("invalid integer {tok:?}")))
        };
        match size {
            None => {
                if tokens.len() < 3 {
                    return Err(parse_err(lineno, "expected size line `rows cols nnz`".into()));
                }
                let rows = parse_index(tokens[0])?;
                let cols = parse_index(tokens[1])?;
                parse_index(tokens[2])?;
                if rows != cols {
                    return Err(parse_err(
                        lineno,
                        format!("adjacency matrix must be square, found {rows}x{cols}"),
                    ));
                }
                size = Some((rows, lineno));
            }
            Some((n, _)) => {
                if tokens.len() < 2 {
                    return Err(parse_err(lineno, "expected entry `i j [value]`".into()));
                }
                let i = parse_index(tokens[0])?;
                let j = parse_index(tokens[1])?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(
                        lineno,
                        format!("entry ({i}, {j}) out of range 1..={n}"),
                    ));
                }
                if i == j {
                    return Err(Error::SelfLoop {
                        path: path.to_owned(),
                        line: lineno,
                        label: i.to_string(),
                    });
                }
                edges.push((i - 1, j - 1));
                seen_entries += 1;
            }
        }
    }
    let (n, _) = size.ok_or_else(|| Error::EmptyInput {
        path: path.to_owned(),
    })?;
    if n == 0 {
        return Err(Error::EmptyInput {
            path: path.to_owned(),
        });
    }
    log::debug!("{}: {n} nodes, {seen_entries} entries", path.display());
    Graph::from_edges((1..=n).map(|i| i.to_string()).collect(), edges)
}

/// Writes `u v` lines using node labels.
pub fn write_edgelist<W: std::io::Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (i, j) in g.edges() {
        writeln!(out, "{} {}", g.label(i), g.label(j))?;
    }
    Ok(())
}

/// Writes a `coordinate pattern symmetric` MatrixMarket file (lower triangle).
pub fn write_matrix_market<W: std::io::Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(out, "{} {} {}", g.n(), g.n(), g.num_edges())?;
    for (i, j) in g.edges() {
        writeln!(out, "{} {}", j + 1, i + 1)?;
    }
    Ok(())
}
