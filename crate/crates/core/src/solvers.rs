//! Classical maximizers of `x^T Q x`: exhaustive enumeration, multi-read
//! simulated annealing with single-bit flips, and greedy 1-flip ascent.
//!
//! Annealing reads are independent. Read `r` draws from the ChaCha8 stream
//! `r` of the generator seeded with the master seed, so a sample set depends
//! only on `(matrix, schedule)` and not on how reads are scheduled on threads.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::Partition;
use crate::qubo::QuboMatrix;

/// Largest dimension accepted by [`solve_exhaustive`].
pub const EXHAUSTIVE_MAX_N: usize = 24;

const GREEDY_MIN_GAIN: f64 = 1e-9;

/// Relative tolerance used to treat two objective values as tied.
pub(crate) const TIE_TOL: f64 = 1e-9;

pub(crate) fn values_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Lexicographic order on 0/1 vectors, `false < true`.
fn lex_cmp(a: &[bool], b: &[bool]) -> Ordering {
    a.cmp(b)
}

/// Exact maximizer of `x^T Q x`; ties go to the smallest core, then to the
/// lexicographically smallest vector.
pub fn solve_exhaustive(q: &QuboMatrix) -> Result<(Partition, f64)> {
    let n = q.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    // Gray-code walk over den*Q, exact in i64.
    let (m, _) = q.scaled_integer_matrix();
    let mut field = vec![0i64; n];
    let mut x: u32 = 0;
    let mut value = 0i64;
    let mut best = (0i64, 0u32);
    for step in 1u64..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        let on = x >> i & 1 == 0;
        let gain = m[i * n + i] + 2 * field[i];
        let row = &m[i * n..(i + 1) * n];
        if on {
            value += gain;
            x |= 1 << i;
            for j in 0..n {
                if j != i {
                    field[j] += row[j];
                }
            }
        } else {
            value -= gain;
            x &= !(1 << i);
            for j in 0..n {
                if j != i {
                    field[j] -= row[j];
                }
            }
        }
        if better_mask(value, x, best.0, best.1) {
            best = (value, x);
        }
    }
    let p = Partition::new((0..n).map(|i| best.1 >> i & 1 == 1).collect());
    let v = q.quad_form(&p)?;
    Ok((p, v))
}

fn better_mask(value: i64, x: u32, best_value: i64, best_x: u32) -> bool {
    match value.cmp(&best_value) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match x.count_ones().cmp(&best_x.count_ones()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            // lowest differing bit decides: the vector with 0 there is smaller
            Ordering::Equal => {
                let diff = x ^ best_x;
                diff != 0 && best_x & (diff & diff.wrapping_neg()) != 0
            }
        },
    }
}

/// Repeatedly flips the bit with the largest positive gain until no single
/// flip improves the objective.
pub fn greedy_ascent(q: &QuboMatrix, p: &Partition) -> Result<(Partition, f64)> {
    p.check_len(q.n())?;
    let mut x = p.bits().to_vec();
    ascend(q, &mut x);
    let out = Partition::new(x);
    let v = q.quad_form(&out)?;
    Ok((out, v))
}

fn ascend(q: &QuboMatrix, x: &mut [bool]) -> usize {
    let mut fields = q.fields(x);
    let mut flips = 0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..x.len() {
            let d = q.flip_delta(&fields, x, i);
            if d > GREEDY_MIN_GAIN && best.is_none_or(|(_, b)| d > b) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, _)) => {
                q.apply_flip(&mut fields, x, i);
                flips += 1;
            }
            None => return flips,
        }
    }
}

/// Annealing parameters. Inverse temperatures are interpolated
/// geometrically from `beta_start` to `beta_end` over `sweeps` sweeps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnealSchedule {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub seed: u64,
}

impl AnnealSchedule {
    pub const DEFAULT_READS: usize = 100;

    /// `num_reads = 100`, `sweeps = 1000 * max(1, n / 100)`, and
    /// `beta` from `0.1 / t` to `50 / t` where `t` is the mean absolute flip
    /// gain over 100 random flips at a random state.
    pub fn default_for(q: &QuboMatrix, seed: u64) -> Self {
        let n = q.n();
        let typical = typical_gain(q, seed);
        AnnealSchedule {
            num_reads: Self::DEFAULT_READS,
            sweeps: 1000 * (n / 100).max(1),
            beta_start: 0.1 / typical,
            beta_end: 50.0 / typical,
            seed,
        }
    }

    pub fn with_reads(mut self, num_reads: usize) -> Self {
        self.num_reads = num_reads;
        self
    }

    pub fn with_sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps = sweeps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_reads == 0 {
            return Err(Error::InvalidSchedule("num_reads must be at least 1".into()));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidSchedule("sweeps must be at least 1".into()));
        }
        if !(self.beta_start.is_finite() && self.beta_end.is_finite())
            || self.beta_start <= 0.0
            || self.beta_start >= self.beta_end
        {
            return Err(Error::InvalidSchedule(format!(
                "need 0 < beta_start < beta_end, got {} and {}",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    fn beta(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let t = sweep as f64 / (self.sweeps - 1) as f64;
        self.beta_start * (self.beta_end / self.beta_start).powf(t)
    }
}

fn typical_gain(q: &QuboMatrix, seed: u64) -> f64 {
    let n = q.n();
    if n == 0 {
        return 1.0;
    }
    let mut rng = read_rng(seed, u64::MAX);
    let x: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    let fields = q.fields(&x);
    let total: f64 = (0..100)
        .map(|_| q.flip_delta(&fields, &x, rng.random_range(0..n)).abs())
        .sum();
    let mean = total / 100.0;
    if mean > 0.0 && mean.is_finite() {
        mean
    } else {
        1.0
    }
}

fn read_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    #[serde(serialize_with = "serialize_bits")]
    pub partition: Partition,
    pub value: f64,
    pub count: usize,
}

fn serialize_bits<S: serde::Serializer>(p: &Partition, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.to_u8())
}

/// Distinct solver outputs with multiplicities, best first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub seed: u64,
    pub num_reads: usize,
}

impl SampleSet {
    pub fn best(&self) -> &Sample {
        &self.samples[0]
    }

    /// Aggregates raw read results: identical partitions are merged, samples
    /// are ordered by value (descending), core size, then bit vector, and the
    /// best of any values tied within tolerance is moved to the front.
    pub fn from_reads(reads: Vec<(Partition, f64)>, seed: u64) -> Self {
        let num_reads = reads.len();
        let mut merged: HashMap<Partition, (f64, usize)> = HashMap::new();
        for (p, v) in reads {
            merged.entry(p).or_insert((v, 0)).1 += 1;
        }
        let mut samples: Vec<Sample> = merged
            .into_iter()
            .map(|(partition, (value, count))| Sample {
                partition,
                value,
                count,
            })
            .collect();
        samples.sort_by(|a, b| {
            b.value
                .total_cmp(&a.value)
                .then(a.partition.core_size().cmp(&b.partition.core_size()))
                .then_with(|| lex_cmp(a.partition.bits(), b.partition.bits()))
        });
        if let Some(top) = samples.first().map(|s| s.value) {
            let best = (0..samples.len())
                .take_while(|&k| values_tie(samples[k].value, top))
                .min_by(|&a, &b| {
                    let (pa, pb) = (&samples[a].partition, &samples[b].partition);
                    pa.core_size()
                        .cmp(&pb.core_size())
                        .then_with(|| lex_cmp(pa.bits(), pb.bits()))
                })
                .unwrap_or(0);
            let chosen = samples.remove(best);
            samples.insert(0, chosen);
        }
        SampleSet {
            samples,
            seed,
            num_reads,
        }
    }

    /// Fraction of reads placing each node in the core.
    pub fn core_frequency(&self) -> Vec<f64> {
        let n = self.samples.first().map_or(0, |s| s.partition.len());
        let mut freq = vec![0.0; n];
        for s in &self.samples {
            for i in s.partition.core_indices() {
                freq[i] += s.count as f64;
            }
        }
        freq.iter_mut().for_each(|f| *f /= self.num_reads as f64);
        freq
    }
}

/// Multi-read simulated annealing followed by greedy refinement of each read.
pub fn solve_anneal(q: &QuboMatrix, sched: &AnnealSchedule) -> Result<SampleSet> {
    sched.validate()?;
    let reads: Vec<(Partition, f64)> = (0..sched.num_reads)
        .into_par_iter()
        .map(|r| anneal_read(q, sched, r as u64))
        .collect::<Result<_>>()?;
    Ok(SampleSet::from_reads(reads, sched.seed))
}

fn anneal_read(q: &QuboMatrix, sched: &AnnealSchedule, read: u64) -> Result<(Partition, f64)> {
    let n = q.n();
    let mut rng = read_rng(sched.seed, read);
    let mut x: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    let mut fields = q.fields(&x);
    let mut order: Vec<usize> = (0..n).collect();
    for sweep in 0..sched.sweeps {
        let beta = sched.beta(sweep);
        order.shuffle(&mut rng);
        for &i in &order {
            let d = q.flip_delta(&fields, &x, i);
            if d >= 0.0 || rng.random::<f64>() < (beta * d).exp() {
                q.apply_flip(&mut fields, &mut x, i);
            }
        }
    }
    // greedy_ascent recomputes the fields from scratch before refining
    greedy_ascent(q, &Partition::new(x))
}
