//! Coreness-score methods and the optimal-threshold conversion from scores to
//! a binary partition.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::objective::{first_argmax, prefix_numerators, ObjectiveKind, Partition};
use crate::qubo::{build_q, QuboMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorenessMethod {
    Degree,
    EigA,
    EigQ,
    NonlinPm,
    HIndex,
    GenBe,
}

impl CorenessMethod {
    pub const ALL: [CorenessMethod; 6] = [
        CorenessMethod::Degree,
        CorenessMethod::EigA,
        CorenessMethod::EigQ,
        CorenessMethod::NonlinPm,
        CorenessMethod::HIndex,
        CorenessMethod::GenBe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorenessMethod::Degree => "degree",
            CorenessMethod::EigA => "eig-a",
            CorenessMethod::EigQ => "eig-q",
            CorenessMethod::NonlinPm => "nonlin-pm",
            CorenessMethod::HIndex => "h-index",
            CorenessMethod::GenBe => "gen-be",
        }
    }
}

impl fmt::Display for CorenessMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorenessMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorenessMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_owned()))
    }
}

/// Per-node scores; larger means more core-like.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorenessVector {
    pub scores: Vec<f64>,
    pub method: CorenessMethod,
}

impl CorenessVector {
    pub fn new(scores: Vec<f64>, method: CorenessMethod) -> Self {
        CorenessVector { scores, method }
    }

    /// Node ids by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        order
    }

    pub fn negated(&self) -> Self {
        CorenessVector {
            scores: self.scores.iter().map(|s| -s).collect(),
            method: self.method,
        }
    }
}

/// Best prefix of a coreness ranking under `x^T Q x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholded {
    pub partition: Partition,
    pub value: f64,
    /// Chosen prefix length (the predicted core size).
    pub k: usize,
}

/// Assigns the top-`k` nodes to the core for every `k` in `0..=n` and keeps
/// the first `k` attaining the maximum of `x^T Q x`.
pub fn threshold_optimal(g: &Graph, c: &CorenessVector) -> Result<Thresholded> {
    let q = build_q(g)?;
    threshold_optimal_with(g, &q, c)
}

/// As [`threshold_optimal`] with a prebuilt dense matrix for the reported value.
pub fn threshold_optimal_with(g: &Graph, q: &QuboMatrix, c: &CorenessVector) -> Result<Thresholded> {
    if c.scores.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: c.scores.len(),
        });
    }
    if c.scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{} scores contain non-finite entries",
            c.method
        )));
    }
    let order = c.ranking();
    let (numerators, _) = prefix_numerators(g, &order, ObjectiveKind::Rescaled)?;
    let k = first_argmax(&numerators);
    let partition = Partition::prefix(g.n(), &order, k);
    let value = q.quad_form(&partition)?;
    Ok(Thresholded {
        partition,
        value,
        k,
    })
}

/// Thresholds both `c` and `-c` and keeps the better (the original on ties).
pub fn threshold_both_orientations(
    g: &Graph,
    q: &QuboMatrix,
    c: &CorenessVector,
) -> Result<Thresholded> {
    let pos = threshold_optimal_with(g, q, c)?;
    let neg = threshold_optimal_with(g, q, &c.negated())?;
    Ok(if neg.value > pos.value { neg } else { pos })
}

pub fn coreness_degree(g: &Graph) -> CorenessVector {
    CorenessVector::new(
        g.degrees().into_iter().map(|d| d as f64).collect(),
        CorenessMethod::Degree,
    )
}

const EIG_TOL: f64 = 1e-10;
const EIG_RESIDUAL_TOL: f64 = 1e-8;
const EIG_MAX_ITER: usize = 100_000;

/// Unit eigenvector with its Rayleigh quotient and residual `||Mv - lv||_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub vector: Vec<f64>,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration on `M + shift I` for a symmetric operator `M`. Stops when
/// the iterate moves less than the tolerance and the residual against `M`
/// is below 1e-8.
fn shifted_power_iteration<F>(
    method: &'static str,
    apply: F,
    shift: f64,
    start: Vec<f64>,
) -> Result<Eigenpair>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut v = start;
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut residual = f64::INFINITY;
    for it in 1..=EIG_MAX_ITER {
        let mv = apply(&v);
        let mut w: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a + shift * b).collect();
        let nw = norm2(&w);
        if nw == 0.0 {
            return Ok(Eigenpair {
                vector: v,
                value: 0.0,
                residual: 0.0,
                iterations: it,
            });
        }
        w.iter_mut().for_each(|x| *x /= nw);
        let change = w.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        v = w;
        if change < EIG_TOL {
            let mv = apply(&v);
            let value: f64 = mv.iter().zip(&v).map(|(a, b)| a * b).sum();
            residual = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - value * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= EIG_RESIDUAL_TOL {
                return Ok(Eigenpair {
                    vector: v,
                    value,
                    residual,
                    iterations: it,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        method,
        iterations: EIG_MAX_ITER,
        residual,
    })
}

fn adjacency_matvec(g: &Graph, v: &[f64]) -> Vec<f64> {
    (0..g.n())
        .map(|i| g.neighbors(i).iter().map(|&j| v[j]).sum())
        .collect()
}

/// Perron eigenpair of the adjacency matrix via power iteration on `A + I`.
pub fn dominant_eigenpair_a(g: &Graph) -> Result<Eigenpair> {
    if g.num_edges() == 0 {
        return Err(Error::NoEdges { method: "eig-a" });
    }
    let mut pair = shifted_power_iteration(
        "eig-a",
        |v| adjacency_matvec(g, v),
        1.0,
        vec![1.0; g.n()],
    )?;
    if pair.vector.iter().sum::<f64>() < 0.0 {
        pair.vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(pair)
}

pub fn coreness_eig_a(g: &Graph) -> Result<CorenessVector> {
    Ok(CorenessVector::new(
        dominant_eigenpair_a(g)?.vector,
        CorenessMethod::EigA,
    ))
}

/// Shift making `Q + shift I` positive semidefinite: the larger of
/// `2(n-1)rho + 2(1+rho) max_degree` and the Gershgorin bound.
pub fn eig_q_shift(q: &QuboMatrix) -> f64 {
    let n = q.n();
    let rho = q.rho_f64();
    let max_deg = (0..n).map(|i| q.neighbors(i).len()).max().unwrap_or(0) as f64;
    let nominal = 2.0 * (n as f64 - 1.0) * rho + 2.0 * (1.0 + rho) * max_deg;
    let gershgorin = (0..n)
        .map(|i| {
            let deg = q.neighbors(i).len() as f64;
            let radius = deg * 1.0 + (n as f64 - 1.0 - deg) * rho;
            radius - q.diag()[i]
        })
        .fold(0.0f64, f64::max);
    nominal.max(gershgorin)
}

/// Eigenpair of the algebraically largest eigenvalue of the dense `Q`.
pub fn dominant_eigenpair_q(g: &Graph) -> Result<Eigenpair> {
    let q = build_q(g)?;
    let n = q.n();
    if q.is_zero() {
        let u = 1.0 / (n as f64).sqrt();
        return Ok(Eigenpair {
            vector: vec![u; n],
            value: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    // a fixed non-uniform start; the uniform vector can be orthogonal to the
    // top eigenvector on regular graphs
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let mut pair = shifted_power_iteration("eig-q", |v| q.matvec(v), eig_q_shift(&q), start)?;
    if pair.vector.iter().sum::<f64>() < 0.0 {
        pair.vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(pair)
}

/// Top eigenvector of `Q` (sign fixed to a nonnegative sum). Thresholding
/// should try both orientations, see [`threshold_both_orientations`].
pub fn coreness_eig_q(g: &Graph) -> Result<CorenessVector> {
    Ok(CorenessVector::new(
        dominant_eigenpair_q(g)?.vector,
        CorenessMethod::EigQ,
    ))
}

pub const NONLIN_PM_ALPHA: f64 = 10.0;
const NONLIN_TOL: f64 = 1e-9;
const NONLIN_MAX_ITER: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct NonlinPmOutcome {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// Largest `| ||x_k||_p - 1 |` over all iterates.
    pub max_norm_error: f64,
    /// Smallest entry among nodes of positive degree, over all iterates.
    pub min_positive_entry: f64,
}

fn p_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Nonlinear power method for `max sum_ij a_ij mu_alpha(x_i, x_j)` over the
/// nonnegative unit p-sphere, with `mu_alpha(y, z) = (|y|^a + |z|^a)^(1/a)`.
pub fn nonlin_pm(g: &Graph, alpha: f64, p: f64) -> Result<NonlinPmOutcome> {
    if g.num_edges() == 0 {
        return Err(Error::NoEdges { method: "nonlin-pm" });
    }
    if alpha.is_nan() || alpha <= 1.0 || alpha.is_infinite() {
        return Err(Error::InvalidParameter(format!("alpha must exceed 1, got {alpha}")));
    }
    if p.is_nan() || p < 2.0 * alpha || p.is_infinite() {
        return Err(Error::InvalidParameter(format!(
            "p must be at least 2 * alpha = {}, got {p}",
            2.0 * alpha
        )));
    }
    let n = g.n();
    let expo = (1.0 - alpha) / alpha;
    let mut x = vec![1.0; n];
    let nx = p_norm(&x, p);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut max_norm_error = (p_norm(&x, p) - 1.0).abs();
    let mut min_positive_entry = f64::INFINITY;
    let mut last_change = f64::INFINITY;
    for it in 1..=NONLIN_MAX_ITER {
        let mut y: Vec<f64> = (0..n)
            .map(|i| {
                let xi = x[i];
                let grad: f64 = g
                    .neighbors(i)
                    .iter()
                    .map(|&j| {
                        let m = xi.max(x[j]);
                        if m == 0.0 {
                            return 0.0;
                        }
                        // scale-free form of (xi^a + xj^a)^((1-a)/a) * xi^(a-1)
                        let (ri, rj) = (xi / m, x[j] / m);
                        ri.powf(alpha - 1.0) * (ri.powf(alpha) + rj.powf(alpha)).powf(expo)
                    })
                    .sum();
                grad.powf(1.0 / (p - 1.0))
            })
            .collect();
        let ny = p_norm(&y, p);
        y.iter_mut().for_each(|v| *v /= ny);
        max_norm_error = max_norm_error.max((p_norm(&y, p) - 1.0).abs());
        for (i, &yi) in y.iter().enumerate() {
            if g.degree(i) > 0 {
                min_positive_entry = min_positive_entry.min(yi);
            }
        }
        let diff: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        last_change = p_norm(&diff, p);
        x = y;
        if last_change < NONLIN_TOL {
            return Ok(NonlinPmOutcome {
                scores: x,
                iterations: it,
                max_norm_error,
                min_positive_entry,
            });
        }
    }
    Err(Error::NonConvergence {
        method: "nonlin-pm",
        iterations: NONLIN_MAX_ITER,
        residual: last_change,
    })
}

pub fn coreness_nonlin_pm(g: &Graph, alpha: f64, p: f64) -> Result<CorenessVector> {
    Ok(CorenessVector::new(
        nonlin_pm(g, alpha, p)?.scores,
        CorenessMethod::NonlinPm,
    ))
}

/// Largest `h` such that at least `h` of the values are `>= h`.
fn h_operator(values: &mut [usize]) -> usize {
    values.sort_unstable_by(|a, b| b.cmp(a));
    values
        .iter()
        .enumerate()
        .take_while(|&(k, &v)| v > k)
        .count()
}

/// Fixpoint of the h-index operator started from the degrees; equals the
/// k-core number of every node.
pub fn coreness_h_index(g: &Graph) -> CorenessVector {
    let n = g.n();
    let mut h = g.degrees();
    let mut buf = Vec::new();
    loop {
        let mut changed = false;
        let next: Vec<usize> = (0..n)
            .map(|i| {
                buf.clear();
                buf.extend(g.neighbors(i).iter().map(|&j| h[j]));
                let v = h_operator(&mut buf);
                changed |= v != h[i];
                v
            })
            .collect();
        h = next;
        if !changed {
            break;
        }
    }
    CorenessVector::new(h.into_iter().map(|v| v as f64).collect(), CorenessMethod::HIndex)
}

/// Default GenBE grid: sharpness in {0, 0.5, 1} by core fraction in
/// {0.1, 0.25, 0.5}.
pub fn gen_be_default_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for alpha in [0.0, 0.5, 1.0] {
        for beta in [0.1, 0.25, 0.5] {
            grid.push((alpha, beta));
        }
    }
    grid
}

/// Transition profile over ranks (rank 0 is the most core-like): a logistic
/// step centred after `beta * n` ranks whose width shrinks from `n / 4`
/// (`alpha = 0`) to a quarter rank (`alpha = 1`).
pub fn gen_be_profile(n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let boundary = beta * n as f64;
    let width = ((1.0 - alpha) * n as f64 / 4.0).max(0.25);
    (0..n)
        .map(|r| 1.0 / (1.0 + ((r as f64 + 0.5 - boundary) / width).exp()))
        .collect()
}

/// `sum over edges of C[rank u] * C[rank v]`.
pub fn gen_be_objective(g: &Graph, profile: &[f64], rank: &[usize]) -> f64 {
    g.edges().map(|(u, v)| profile[rank[u]] * profile[rank[v]]).sum()
}

const GEN_BE_STEPS_PER_NODE: usize = 400;

/// Swap annealing over rank assignments for one profile. Returns the best
/// ranks found and their objective.
pub fn gen_be_optimize(g: &Graph, profile: &[f64], seed: u64, stream: u64) -> (Vec<usize>, f64) {
    let n = g.n();
    let by_degree = coreness_degree(g).ranking();
    let mut rank = vec![0; n];
    for (r, &u) in by_degree.iter().enumerate() {
        rank[u] = r;
    }
    let mut value = gen_be_objective(g, profile, &rank);
    if n < 2 {
        return (rank, value);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    let swap_delta = |rank: &[usize], u: usize, v: usize| -> f64 {
        let (cu, cv) = (profile[rank[u]], profile[rank[v]]);
        let su: f64 = g.neighbors(u).iter().filter(|&&w| w != v).map(|&w| profile[rank[w]]).sum();
        let sv: f64 = g.neighbors(v).iter().filter(|&&w| w != u).map(|&w| profile[rank[w]]).sum();
        (cv - cu) * su + (cu - cv) * sv
    };

    let pick = |rng: &mut ChaCha8Rng| {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        (u, v)
    };

    let typical = {
        let total: f64 = (0..100)
            .map(|_| {
                let (u, v) = pick(&mut rng);
                swap_delta(&rank, u, v).abs()
            })
            .sum();
        if total > 0.0 {
            total / 100.0
        } else {
            1.0
        }
    };
    let steps = GEN_BE_STEPS_PER_NODE * n;
    let (t_start, t_end) = (typical, typical * 1e-4);
    let mut best = (rank.clone(), value);
    for step in 0..steps {
        let t = t_start * (t_end / t_start).powf(step as f64 / (steps - 1).max(1) as f64);
        let (u, v) = pick(&mut rng);
        let d = swap_delta(&rank, u, v);
        if d >= 0.0 || rng.random::<f64>() < (d / t).exp() {
            rank.swap(u, v);
            value += d;
            if value > best.1 + 1e-12 {
                best = (rank.clone(), value);
            }
        }
    }
    let exact = gen_be_objective(g, profile, &best.0);
    (best.0, exact)
}

/// Simplified GenBE: for each `(alpha, beta)` grid point, maximize
/// `sum_ij a_ij C_i C_j` over rank permutations of the transition profile,
/// then average each node's profile value across grid points weighted by the
/// achieved objective. Scores are scaled to a maximum of 1.
pub fn coreness_gen_be(g: &Graph, grid: &[(f64, f64)], seed: u64) -> Result<CorenessVector> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &(alpha, beta) in grid {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidParameter(format!(
                "GenBE grid point ({alpha}, {beta}) outside [0, 1]^2"
            )));
        }
    }
    let n = g.n();
    let runs: Vec<(Vec<f64>, Vec<usize>, f64)> = grid
        .par_iter()
        .enumerate()
        .map(|(t, &(alpha, beta))| {
            let profile = gen_be_profile(n, alpha, beta);
            let (rank, value) = gen_be_optimize(g, &profile, seed, t as u64);
            (profile, rank, value)
        })
        .collect();
    let total: f64 = runs.iter().map(|r| r.2).sum();
    let mut scores = vec![0.0; n];
    for (profile, rank, value) in &runs {
        let w = if total > 0.0 { value / total } else { 1.0 / runs.len() as f64 };
        for i in 0..n {
            scores[i] += w * profile[rank[i]];
        }
    }
    let max = scores.iter().cloned().fold(0.0f64, f64::max);
    if max > 0.0 {
        scores.iter_mut().for_each(|s| *s /= max);
    }
    Ok(CorenessVector::new(scores, CorenessMethod::GenBe))
}

/// Scores for `method` with default parameters.
pub fn coreness(g: &Graph, method: CorenessMethod, seed: u64) -> Result<CorenessVector> {
    match method {
        CorenessMethod::Degree => Ok(coreness_degree(g)),
        CorenessMethod::EigA => coreness_eig_a(g),
        CorenessMethod::EigQ => coreness_eig_q(g),
        CorenessMethod::NonlinPm => {
            coreness_nonlin_pm(g, NONLIN_PM_ALPHA, 2.0 * NONLIN_PM_ALPHA)
        }
        CorenessMethod::HIndex => Ok(coreness_h_index(g)),
        CorenessMethod::GenBe => coreness_gen_be(g, &gen_be_default_grid(), seed),
    }
}

/// Coreness scores followed by optimal thresholding (both orientations for
/// EigQ, whose sign is arbitrary).
pub fn partition_by_coreness(
    g: &Graph,
    q: &QuboMatrix,
    method: CorenessMethod,
    seed: u64,
) -> Result<Thresholded> {
    let c = coreness(g, method, seed)?;
    match method {
        CorenessMethod::EigQ => threshold_both_orientations(g, q, &c),
        _ => threshold_optimal_with(g, q, &c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c4, p3, random_graph, star};

    /// Batagelj-Zaversnik style peeling, independent of the h-operator.
    fn peeling_core_numbers(g: &Graph) -> Vec<usize> {
        let n = g.n();
        let mut deg = g.degrees();
        let mut removed = vec![false; n];
        let mut core = vec![0; n];
        let mut k = 0;
        for _ in 0..n {
            let v = (0..n).filter(|&i| !removed[i]).min_by_key(|&i| deg[i]).unwrap();
            k = k.max(deg[v]);
            core[v] = k;
            removed[v] = true;
            for &w in g.neighbors(v) {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        core
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn threshold_examples() {
        let g = p3();
        let t = threshold_optimal(&g, &coreness_degree(&g)).unwrap();
        assert_eq!((t.partition.core_indices(), t.k), (vec![1], 1));
        assert!((t.value - 4.0).abs() < 1e-12);

        let g = star();
        let t = threshold_optimal(&g, &coreness_degree(&g)).unwrap();
        assert_eq!((t.partition.core_indices(), t.k), (vec![0], 1));
        assert!((t.value - 8.0).abs() < 1e-12);

        let g = p3();
        let flat = CorenessVector::new(vec![1.0; 3], CorenessMethod::Degree);
        let t = threshold_optimal(&g, &flat).unwrap();
        assert_eq!(t.k, 0);
        assert_eq!(t.value, 0.0);
        assert_eq!(t.partition, Partition::all_periphery(3));
    }

    #[test]
    fn threshold_errors() {
        let g = p3();
        let short = CorenessVector::new(vec![1.0; 2], CorenessMethod::Degree);
        assert!(matches!(threshold_optimal(&g, &short), Err(Error::LengthMismatch { .. })));
        let nan = CorenessVector::new(vec![1.0, f64::NAN, 0.0], CorenessMethod::Degree);
        assert!(threshold_optimal(&g, &nan).is_err());
    }

    #[test]
    fn threshold_scale_invariance() {
        for seed in 0..10 {
            let g = random_graph(25, 0.2, seed);
            let c = coreness_h_index(&g);
            let scaled = CorenessVector::new(c.scores.iter().map(|s| s * 3.5).collect(), c.method);
            let a = threshold_optimal(&g, &c).unwrap();
            let b = threshold_optimal(&g, &scaled).unwrap();
            assert_eq!(a.partition, b.partition);
            assert!(a.value >= 0.0);
            let q = build_q(&g).unwrap();
            assert_eq!(a.value, q.quad_form(&a.partition).unwrap());
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(coreness_degree(&star()).scores, vec![4.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(coreness_degree(&p3()).scores, vec![1.0, 2.0, 1.0]);
        let g = Graph::with_index_labels(3, []).unwrap();
        assert_eq!(coreness_degree(&g).scores, vec![0.0; 3]);
    }

    #[test]
    fn eig_a_examples() {
        let pair = dominant_eigenpair_a(&star()).unwrap();
        let want: Vec<f64> = [2.0, 1.0, 1.0, 1.0, 1.0].iter().map(|v| v / 8f64.sqrt()).collect();
        assert!(close(&pair.vector, &want, 1e-8));
        assert!((pair.value - 2.0).abs() < 1e-8);
        assert!(pair.residual <= 1e-8);

        let pair = dominant_eigenpair_a(&c4()).unwrap();
        assert!(close(&pair.vector, &[0.5; 4], 1e-8));

        let pair = dominant_eigenpair_a(&p3()).unwrap();
        let want = [0.5, 1.0 / 2f64.sqrt(), 0.5];
        assert!(close(&pair.vector, &want, 1e-8));
        assert!((pair.value - 2f64.sqrt()).abs() < 1e-8);

        let g = Graph::with_index_labels(3, []).unwrap();
        assert!(matches!(coreness_eig_a(&g), Err(Error::NoEdges { .. })));
    }

    fn dense_top_eigen(q: &QuboMatrix) -> (f64, nalgebra::DVector<f64>) {
        let n = q.n();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| q.coefficient(i, j));
        let eig = nalgebra::SymmetricEigen::new(m);
        let (k, &val) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        (val, eig.eigenvectors.column(k).into_owned())
    }

    #[test]
    fn eig_q_matches_dense_solver() {
        for g in [star(), p3(), random_graph(8, 0.4, 2), random_graph(7, 0.3, 11)] {
            let pair = dominant_eigenpair_q(&g).unwrap();
            let q = build_q(&g).unwrap();
            let (val, _) = dense_top_eigen(&q);
            assert!((pair.value - val).abs() < 1e-6, "{} vs {}", pair.value, val);
            let qv = q.matvec(&pair.vector);
            let res: f64 = qv
                .iter()
                .zip(&pair.vector)
                .map(|(a, b)| (a - pair.value * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-8);
        }
    }

    #[test]
    fn eig_q_p3_characteristic_polynomial() {
        // Q = [[-2,-1,2],[-1,4,-1],[2,-1,-2]]: eigenvalues solve
        // (l + 4)(l^2 - 4l - 2) = 0, so the top one is 2 + sqrt(6) with
        // eigenvector proportional to (1, -(2 + sqrt 6), 1)
        let pair = dominant_eigenpair_q(&p3()).unwrap();
        assert!((pair.value - (2.0 + 6f64.sqrt())).abs() < 1e-8);
        let v = &pair.vector;
        assert!((v[0] - v[2]).abs() < 1e-8);
        assert!((v[1] / v[0] + 2.0 + 6f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn eig_q_edgeless_is_uniform() {
        let g = Graph::with_index_labels(4, []).unwrap();
        let c = coreness_eig_q(&g).unwrap();
        assert!(close(&c.scores, &[0.5; 4], 1e-15));
    }

    #[test]
    fn eig_q_shift_is_psd() {
        for seed in 0..10 {
            let g = random_graph(9, 0.1 * (seed % 9 + 1) as f64, seed);
            let Ok(q) = build_q(&g) else { continue };
            let shift = eig_q_shift(&q);
            let n = q.n();
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| q.coefficient(i, j));
            let min = nalgebra::SymmetricEigen::new(m).eigenvalues.min();
            assert!(min + shift >= -1e-9);
        }
    }

    #[test]
    fn nonlin_pm_star_and_c4() {
        let out = nonlin_pm(&star(), 10.0, 20.0).unwrap();
        assert!(out.scores[0] > out.scores[1]);
        assert!(out.scores[1..].windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12));
        assert!(out.max_norm_error <= 1e-12);

        let out = nonlin_pm(&c4(), 10.0, 20.0).unwrap();
        let want = 4f64.powf(-1.0 / 20.0);
        assert!(out.scores.iter().all(|s| (s - want).abs() < 1e-10));
    }

    #[test]
    fn nonlin_pm_p3_grid_oracle() {
        let (alpha, p) = (10.0, 20.0);
        let g = p3();
        let f = |x: &[f64]| -> f64 {
            let mut total = 0.0;
            for (i, j) in g.edges() {
                total += 2.0 * (x[i].powf(alpha) + x[j].powf(alpha)).powf(1.0 / alpha);
            }
            total
        };
        let out = nonlin_pm(&g, alpha, p).unwrap();
        let got = f(&out.scores);
        // grid over the simplex u0 + u1 + u2 = 1 with x_i = u_i^(1/p)
        let steps = 400;
        let mut best = 0.0f64;
        for a in 0..=steps {
            for b in 0..=steps - a {
                let u = [a as f64 / steps as f64, b as f64 / steps as f64, (steps - a - b) as f64 / steps as f64];
                let x: Vec<f64> = u.iter().map(|v| v.powf(1.0 / p)).collect();
                best = best.max(f(&x));
            }
        }
        assert!(got >= best - 1e-3, "{got} vs grid {best}");
        assert!((got - best).abs() < 1e-3);
    }

    #[test]
    fn nonlin_pm_errors_and_isolated_nodes() {
        let g = Graph::with_index_labels(3, []).unwrap();
        assert!(matches!(nonlin_pm(&g, 10.0, 20.0), Err(Error::NoEdges { .. })));
        assert!(nonlin_pm(&p3(), 1.0, 20.0).is_err());
        assert!(nonlin_pm(&p3(), 10.0, 19.0).is_err());
        let g = Graph::with_index_labels(5, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let out = nonlin_pm(&g, 10.0, 20.0).unwrap();
        assert_eq!(out.scores[4], 0.0);
        assert!(out.min_positive_entry > 0.0);
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(coreness_h_index(&star()).scores, vec![1.0; 5]);
        assert_eq!(coreness_h_index(&p3()).scores, vec![1.0; 3]);
        // K4 minus edge (0,1), plus pendant 4 on node 2
        let g = Graph::with_index_labels(5, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 4)]).unwrap();
        let h = coreness_h_index(&g);
        let peel: Vec<f64> = peeling_core_numbers(&g).into_iter().map(|v| v as f64).collect();
        assert_eq!(h.scores, peel);
        assert_eq!(h.scores, vec![2.0, 2.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn h_operator_values() {
        assert_eq!(h_operator(&mut [4, 1, 1, 1]), 1);
        assert_eq!(h_operator(&mut [3, 3, 3]), 3);
        assert_eq!(h_operator(&mut [5, 4, 1, 0]), 2);
        assert_eq!(h_operator(&mut []), 0);
    }

    #[test]
    fn h_index_equals_peeling_on_random_graphs() {
        for seed in 0..100 {
            let n = 5 + (seed as usize * 7) % 46;
            let g = random_graph(n, 0.05 + 0.004 * seed as f64, seed);
            let h: Vec<usize> = coreness_h_index(&g).scores.iter().map(|&v| v as usize).collect();
            assert_eq!(h, peeling_core_numbers(&g), "seed {seed}");
        }
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn gen_be_star_matches_exhaustive_permutations() {
        let g = star();
        let grid = gen_be_default_grid();
        for (t, &(alpha, beta)) in grid.iter().enumerate() {
            let profile = gen_be_profile(5, alpha, beta);
            let best = permutations(5)
                .iter()
                .map(|rank| gen_be_objective(&g, &profile, rank))
                .fold(f64::NEG_INFINITY, f64::max);
            let (rank, value) = gen_be_optimize(&g, &profile, 7, t as u64);
            assert!((value - best).abs() < 1e-12, "grid {t}: {value} vs {best}");
            assert_eq!(rank[0], 0, "center should take the top rank");
        }
        let c = coreness_gen_be(&g, &grid, 7).unwrap();
        assert_eq!(c.ranking()[0], 0);
    }

    #[test]
    fn gen_be_p3_sharp_boundary() {
        let g = p3();
        let grid = [(1.0, 1.0 / 3.0)];
        let profile = gen_be_profile(3, 1.0, 1.0 / 3.0);
        let best = permutations(3)
            .iter()
            .map(|rank| gen_be_objective(&g, &profile, rank))
            .fold(f64::NEG_INFINITY, f64::max);
        let (rank, value) = gen_be_optimize(&g, &profile, 1, 0);
        assert!((value - best).abs() < 1e-12);
        assert_eq!(rank[1], 0);
        let c = coreness_gen_be(&g, &grid, 1).unwrap();
        assert_eq!(c.ranking()[0], 1);
    }

    #[test]
    fn gen_be_c4_reaches_optimum_at_every_grid_point() {
        // scores come from ranks, so they cannot all be equal on C4; every
        // grid point reaches the permutation optimum instead
        let g = c4();
        for (t, &(alpha, beta)) in gen_be_default_grid().iter().enumerate() {
            let profile = gen_be_profile(4, alpha, beta);
            let best = permutations(4)
                .iter()
                .map(|rank| gen_be_objective(&g, &profile, rank))
                .fold(f64::NEG_INFINITY, f64::max);
            for seed in 0..4 {
                let (_, value) = gen_be_optimize(&g, &profile, seed, t as u64);
                assert!((value - best).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gen_be_deterministic_and_errors() {
        let g = random_graph(30, 0.2, 4);
        let a = coreness_gen_be(&g, &gen_be_default_grid(), 9).unwrap();
        let b = coreness_gen_be(&g, &gen_be_default_grid(), 9).unwrap();
        assert_eq!(a, b);
        assert!(matches!(coreness_gen_be(&g, &[], 9), Err(Error::EmptyGrid)));
        assert!(coreness_gen_be(&g, &[(2.0, 0.1)], 9).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in CorenessMethod::ALL {
            assert_eq!(m.name().parse::<CorenessMethod>().unwrap(), m);
        }
        assert!(matches!("pagerank".parse::<CorenessMethod>(), Err(Error::UnknownMethod(_))));
    }
}
