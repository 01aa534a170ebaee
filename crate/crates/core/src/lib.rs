//! Core-periphery partitioning with a normalized edge/non-edge objective.
//!
//! The objective is a QUBO, so any QUBO maximizer can be used to find a
//! partition. This crate provides the objective and its matrices, exact and
//! annealing solvers, coreness-score baselines with optimal thresholding, a
//! stochastic block model generator and the experiment harness behind the
//! `cpq` command-line tool.

pub mod baselines;
pub mod error;
pub mod graph;
pub mod harness;
pub mod objective;
pub mod qubo;
pub mod solvers;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{load_graph, remove_isolated, stats, Graph, GraphFormat, GraphStats};
pub use objective::{
    eval_max_count, eval_normalized, eval_rescaled, eval_unnormalized, sweep_prefix,
    sweep_prefix_with, ObjectiveKind, Partition, SweepCurve,
};
pub use qubo::{
    build_q, build_qhat, export_qubo, import_qubo, ExportedQubo, QuboFileFormat, QuboKind,
    QuboMatrix,
};
pub use solvers::{greedy_ascent, solve_anneal, solve_exhaustive, AnnealSchedule, Sample, SampleSet};
pub use synth::{planted_partition, sample_sbm, SbmSpec};

#[cfg(test)]
pub(crate) mod fixtures {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::graph::Graph;

    /// Path a - b - c.
    pub fn p3() -> Graph {
        Graph::from_labeled_edges([("a", "b"), ("b", "c")]).unwrap()
    }

    /// K_{1,4} with center "a" (id 0).
    pub fn star() -> Graph {
        Graph::from_labeled_edges([("a", "b"), ("a", "c"), ("a", "d"), ("a", "e")]).unwrap()
    }

    pub fn c4() -> Graph {
        Graph::with_index_labels(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    /// Erdos-Renyi G(n, p).
    pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        Graph::with_index_labels(n, edges).unwrap()
    }
}
