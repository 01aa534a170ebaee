//! Stochastic block model with a planted core.
//!
//! Pairs `i < j` are visited in row-major order and each consumes exactly one
//! `f64` draw from a `ChaCha8Rng` seeded with `seed_from_u64(seed)`; the edge
//! is present when the draw is below the block probability. The sample is
//! therefore fixed by the spec on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::objective::Partition;

/// `SBM(n, m, p1, p2, p3)`: the first `m` nodes form the core; `p1`, `p2`,
/// `p3` are the core-core, core-periphery and periphery-periphery
/// edge probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub n: usize,
    pub m: usize,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub seed: u64,
}

impl SbmSpec {
    pub fn new(n: usize, m: usize, p1: f64, p2: f64, p3: f64, seed: u64) -> Self {
        SbmSpec {
            n,
            m,
            p1,
            p2,
            p3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > self.n {
            return Err(Error::InvalidParameter(format!(
                "core size {} exceeds node count {}",
                self.m, self.n
            )));
        }
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p3", self.p3)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        Ok(())
    }

    fn block_probability(&self, i: usize, j: usize) -> f64 {
        match (i < self.m, j < self.m) {
            (true, true) => self.p1,
            (false, false) => self.p3,
            _ => self.p2,
        }
    }

    /// Expected numbers of present and missing edges.
    pub fn expected_counts(&self) -> (f64, f64) {
        let (n, m) = (self.n as f64, self.m as f64);
        let cc = m * (m - 1.0) / 2.0;
        let cp = m * (n - m);
        let pp = (n - m) * (n - m - 1.0) / 2.0;
        let present = self.p1 * cc + self.p2 * cp + self.p3 * pp;
        (present, cc + cp + pp - present)
    }
}

/// Parses `N,M,P1,P2,P3`.
impl std::str::FromStr for SbmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParameter(format!("expected N,M,P1,P2,P3, got {s:?}"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let n = parts[0].parse().map_err(|_| bad())?;
        let m = parts[1].parse().map_err(|_| bad())?;
        let p: Vec<f64> = parts[2..]
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let spec = SbmSpec::new(n, m, p[0], p[1], p[2], 0);
        spec.validate()?;
        Ok(spec)
    }
}

pub fn sample_sbm(spec: &SbmSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            let draw: f64 = rng.random();
            if draw < spec.block_probability(i, j) {
                edges.push((i, j));
            }
        }
    }
    Graph::with_index_labels(spec.n, edges)
}

/// The first `m` nodes in the core.
pub fn planted_partition(spec: &SbmSpec) -> Partition {
    let m = spec.m.min(spec.n);
    Partition::new((0..spec.n).map(|i| i < m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::stats;

    #[test]
    fn extremes() {
        let g = sample_sbm(&SbmSpec::new(10, 3, 0.0, 0.0, 0.0, 1)).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.num_edges(), 0);
        let g = sample_sbm(&SbmSpec::new(10, 3, 1.0, 1.0, 1.0, 1)).unwrap();
        assert_eq!(g.num_edges(), 45);
        assert!(stats(&g).is_err());
    }

    #[test]
    fn block_structure() {
        let g = sample_sbm(&SbmSpec::new(30, 10, 1.0, 0.0, 0.0, 7)).unwrap();
        assert_eq!(g.num_edges(), 45);
        assert!(g.edges().all(|(i, j)| i < 10 && j < 10));
        let g = sample_sbm(&SbmSpec::new(30, 10, 0.0, 1.0, 0.0, 7)).unwrap();
        assert_eq!(g.num_edges(), 200);
        assert!(g.edges().all(|(i, j)| i < 10 && j >= 10));
    }

    #[test]
    fn deterministic() {
        let spec = SbmSpec::new(60, 15, 0.3, 0.2, 0.05, 99);
        assert_eq!(sample_sbm(&spec).unwrap(), sample_sbm(&spec).unwrap());
        let other = SbmSpec { seed: 100, ..spec.clone() };
        assert_ne!(sample_sbm(&spec).unwrap(), sample_sbm(&other).unwrap());
    }

    #[test]
    fn labels_follow_ids() {
        let g = sample_sbm(&SbmSpec::new(12, 4, 0.5, 0.5, 0.5, 3)).unwrap();
        assert_eq!(g.label(11), "11");
    }

    #[test]
    fn planted() {
        assert_eq!(planted_partition(&SbmSpec::new(5, 0, 0.1, 0.1, 0.1, 0)).core_size(), 0);
        assert_eq!(
            planted_partition(&SbmSpec::new(5, 5, 0.1, 0.1, 0.1, 0)),
            Partition::all_core(5)
        );
        let p = planted_partition(&SbmSpec::new(100, 25, 0.1, 0.1, 0.1, 0));
        assert_eq!(p.core_size(), 25);
        assert!(p.is_core(24) && !p.is_core(25));
    }

    #[test]
    fn invalid_specs() {
        assert!(sample_sbm(&SbmSpec::new(5, 6, 0.1, 0.1, 0.1, 0)).is_err());
        assert!(sample_sbm(&SbmSpec::new(5, 2, 1.1, 0.1, 0.1, 0)).is_err());
        assert!(sample_sbm(&SbmSpec::new(5, 2, 0.1, f64::NAN, 0.1, 0)).is_err());
        assert!("100,25,0.1,0.1".parse::<SbmSpec>().is_err());
        let spec: SbmSpec = "100, 25, 0.6, 0.5, 0.1".parse().unwrap();
        assert_eq!((spec.n, spec.m, spec.p2), (100, 25, 0.5));
    }

    #[test]
    fn edge_count_concentration() {
        // Binomial(4950, 0.5): the mean of 200 samples has standard error
        // sqrt(4950 * 0.25 / 200); allow 3 of them.
        let trials = 200;
        let total: usize = (0..trials)
            .map(|seed| {
                sample_sbm(&SbmSpec::new(100, 25, 0.5, 0.5, 0.5, seed))
                    .unwrap()
                    .num_edges()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let se = (4950.0f64 * 0.25 / trials as f64).sqrt();
        assert!((mean - 2475.0).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn rho_concentration_sparse_model() {
        let trials = 200u64;
        let rhos: Vec<f64> = (0..trials)
            .map(|seed| {
                let g = sample_sbm(&SbmSpec::new(100, 25, 0.2, 0.2, 0.01, seed)).unwrap();
                stats(&g).unwrap().rho_f64()
            })
            .collect();
        let mean = rhos.iter().sum::<f64>() / trials as f64;
        let var = rhos.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        let se = (var / trials as f64).sqrt();
        let (present, missing) = SbmSpec::new(100, 25, 0.2, 0.2, 0.01, 0).expected_counts();
        let expected = present / missing;
        assert!((expected - 0.1).abs() < 0.01);
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean} expected {expected} se {se}");
    }
}
