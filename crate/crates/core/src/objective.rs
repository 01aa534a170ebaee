//! Scalar objectives over binary core/periphery partitions.
//!
//! Every objective depends on a partition only through two integers: the
//! number of edges with at least one core endpoint and the core size. Values
//! are formed as exact integer numerators over a fixed positive denominator,
//! so comparisons (argmax, ties) are exact and the floating-point value is
//! produced by a single division.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{stats, Graph, GraphStats};

/// Binary core indicator (`true` = core).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    bits: Vec<bool>,
    core_size: usize,
}

impl Partition {
    pub fn new(bits: Vec<bool>) -> Self {
        let core_size = bits.iter().filter(|&&b| b).count();
        Partition { bits, core_size }
    }

    pub fn all_periphery(n: usize) -> Self {
        Partition::new(vec![false; n])
    }

    pub fn all_core(n: usize) -> Self {
        Partition::new(vec![true; n])
    }

    pub fn from_core(n: usize, core: &[usize]) -> Self {
        let mut bits = vec![false; n];
        for &i in core {
            bits[i] = true;
        }
        Partition::new(bits)
    }

    /// Core = the first `k` nodes of `order`.
    pub fn prefix(n: usize, order: &[usize], k: usize) -> Self {
        Partition::from_core(n, &order[..k])
    }

    /// Parses 0/1 integers.
    pub fn from_u8(values: &[u8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "partition entries must be 0 or 1, found {other}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Partition::new)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn core_size(&self) -> usize {
        self.core_size
    }

    pub fn is_core(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }

    pub fn core_indices(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
        if self.bits[i] {
            self.core_size += 1;
        } else {
            self.core_size -= 1;
        }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.bits.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.bits.len(),
            });
        }
        Ok(())
    }
}

/// Which objective to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Ordered edge pairs touching the core.
    MaxCount,
    /// Present edges touching the core plus missing edges avoiding it.
    Unnormalized,
    /// As `Unnormalized`, with the two terms divided by the present and
    /// missing edge counts.
    Normalized,
    /// `Normalized` shifted by 2 and scaled by the present-edge count; equals
    /// `x^T Q x`.
    Rescaled,
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-count" => Ok(ObjectiveKind::MaxCount),
            "unnormalized" => Ok(ObjectiveKind::Unnormalized),
            "normalized" => Ok(ObjectiveKind::Normalized),
            "rescaled" => Ok(ObjectiveKind::Rescaled),
            other => Err(Error::InvalidParameter(format!("unknown objective {other:?}"))),
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveKind::MaxCount => "max-count",
            ObjectiveKind::Unnormalized => "unnormalized",
            ObjectiveKind::Normalized => "normalized",
            ObjectiveKind::Rescaled => "rescaled",
        })
    }
}

/// Integer scaling for one objective on one graph.
#[derive(Clone, Debug)]
pub(crate) struct Scale {
    kind: ObjectiveKind,
    n: i128,
    n1: i128,
    n2: i128,
    rho_num: i128,
    rho_den: i128,
}

impl Scale {
    pub(crate) fn new(kind: ObjectiveKind, g: &Graph) -> Result<Self> {
        let n = g.n() as i128;
        let n1 = g.num_edges() as i128;
        let n2 = n * (n - 1) / 2 - n1;
        let mut scale = Scale {
            kind,
            n,
            n1,
            n2,
            rho_num: 0,
            rho_den: 1,
        };
        match kind {
            ObjectiveKind::MaxCount | ObjectiveKind::Unnormalized => {}
            ObjectiveKind::Normalized => {
                let st = stats(g)?;
                if st.n1 == 0 {
                    return Err(Error::Density(
                        "normalized objective needs at least one edge".into(),
                    ));
                }
            }
            ObjectiveKind::Rescaled => {
                let st = stats(g)?;
                scale.set_rho(&st);
            }
        }
        Ok(scale)
    }

    fn set_rho(&mut self, st: &GraphStats) {
        self.rho_num = *st.rho.numer() as i128;
        self.rho_den = *st.rho.denom() as i128;
    }

    /// Exact numerator given the number of edges touching the core and the
    /// core size.
    pub(crate) fn numerator(&self, core_edges: i128, core_size: i128) -> i128 {
        let per = self.n - core_size;
        let peri_pairs = per * (per - 1) / 2;
        let core_pairs = self.n * (self.n - 1) / 2 - peri_pairs;
        let peri_missing = peri_pairs - (self.n1 - core_edges);
        match self.kind {
            ObjectiveKind::MaxCount => 2 * core_edges,
            ObjectiveKind::Unnormalized => 2 * core_edges + 2 * peri_missing,
            ObjectiveKind::Normalized => 2 * core_edges * self.n2 + 2 * peri_missing * self.n1,
            ObjectiveKind::Rescaled => {
                2 * (self.rho_den + self.rho_num) * core_edges - 2 * self.rho_num * core_pairs
            }
        }
    }

    pub(crate) fn denominator(&self) -> i128 {
        match self.kind {
            ObjectiveKind::MaxCount | ObjectiveKind::Unnormalized => 1,
            ObjectiveKind::Normalized => self.n1 * self.n2,
            ObjectiveKind::Rescaled => self.rho_den,
        }
    }

    pub(crate) fn to_f64(&self, numerator: i128) -> f64 {
        numerator as f64 / self.denominator() as f64
    }
}

/// Number of edges with at least one endpoint in the core.
pub(crate) fn core_edge_count(g: &Graph, p: &Partition) -> usize {
    let mut incident = 0;
    let mut internal_twice = 0;
    for i in p.core_indices() {
        incident += g.degree(i);
        internal_twice += g.neighbors(i).iter().filter(|&&j| p.is_core(j)).count();
    }
    incident - internal_twice / 2
}

pub fn evaluate(g: &Graph, p: &Partition, kind: ObjectiveKind) -> Result<f64> {
    p.check_len(g.n())?;
    let scale = Scale::new(kind, g)?;
    let num = scale.numerator(core_edge_count(g, p) as i128, p.core_size() as i128);
    Ok(scale.to_f64(num))
}

/// `sum_{i,j} a_ij max(x_i, x_j)`.
pub fn eval_max_count(g: &Graph, p: &Partition) -> Result<f64> {
    evaluate(g, p, ObjectiveKind::MaxCount)
}

/// `sum_{i != j} a_ij max(x_i,x_j) + (1 - a_ij)(1 - max(x_i,x_j))`.
pub fn eval_unnormalized(g: &Graph, p: &Partition) -> Result<f64> {
    evaluate(g, p, ObjectiveKind::Unnormalized)
}

/// Present-edge term divided by the edge count plus missing-edge term divided
/// by the missing-edge count. Needs at least one present and one missing edge.
pub fn eval_normalized(g: &Graph, p: &Partition) -> Result<f64> {
    evaluate(g, p, ObjectiveKind::Normalized)
}

/// `sum_{i != j} (a_ij (1 + rho) - rho) max(x_i, x_j)`, the score reported in
/// comparison tables. Equal to `x^T Q x`.
pub fn eval_rescaled(g: &Graph, p: &Partition) -> Result<f64> {
    evaluate(g, p, ObjectiveKind::Rescaled)
}

/// Objective values of the prefix partitions of a node ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCurve {
    /// `values[k]` is the objective with the first `k` nodes of the order in
    /// the core; `values[0]` is the all-periphery partition.
    pub values: Vec<f64>,
    /// Smallest maximizing `k`.
    pub argmax: usize,
}

impl SweepCurve {
    pub fn max_value(&self) -> f64 {
        self.values[self.argmax]
    }
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotPermutation { n });
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(Error::NotPermutation { n });
        }
        seen[i] = true;
    }
    Ok(())
}

/// Prefix sweep of the normalized objective.
pub fn sweep_prefix(g: &Graph, order: &[usize]) -> Result<SweepCurve> {
    sweep_prefix_with(g, order, ObjectiveKind::Normalized)
}

/// Prefix sweep of any objective, in `O(n + edges)`.
pub fn sweep_prefix_with(g: &Graph, order: &[usize], kind: ObjectiveKind) -> Result<SweepCurve> {
    let (numerators, scale) = prefix_numerators(g, order, kind)?;
    let argmax = first_argmax(&numerators);
    Ok(SweepCurve {
        values: numerators.iter().map(|&v| scale.to_f64(v)).collect(),
        argmax,
    })
}

pub(crate) fn prefix_numerators(
    g: &Graph,
    order: &[usize],
    kind: ObjectiveKind,
) -> Result<(Vec<i128>, Scale)> {
    let n = g.n();
    check_permutation(order, n)?;
    let scale = Scale::new(kind, g)?;
    let mut in_core = vec![false; n];
    let mut core_edges = 0i128;
    let mut out = Vec::with_capacity(n + 1);
    out.push(scale.numerator(0, 0));
    for (k, &v) in order.iter().enumerate() {
        core_edges += g.neighbors(v).iter().filter(|&&j| !in_core[j]).count() as i128;
        in_core[v] = true;
        out.push(scale.numerator(core_edges, k as i128 + 1));
    }
    Ok((out, scale))
}

pub(crate) fn first_argmax(values: &[i128]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = k;
        }
    }
    best
}
