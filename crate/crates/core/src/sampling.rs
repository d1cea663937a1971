//! Seeded uniform samplers for permutations, full-rank matrices and
//! matrices with pairwise distinct nonzero rows.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded from a `u64` through
//! `SeedableRng::seed_from_u64`. Independent per-task streams for parallel
//! drivers come from [`SeededRng::derive`], which selects ChaCha stream
//! `task_index + 1` under the base seed.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParamError, Result};
use crate::gfp::{FieldElement, Fq};
use crate::linalg::{FqMatrix, Permutation};

/// Maximum rejection rounds for the rank conditions. Valid parameters
/// accept with probability at least 1/4 per round.
pub const REJECTION_CAP: u32 = 10_000;

/// Above this many candidate rows the distinct-row sampler switches from a
/// materialized partial shuffle to hash-set rejection.
const MATERIALIZE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for task `task_index` under `base_seed`, disjoint from
    /// `SeededRng::new(base_seed)` and from every other task index.
    pub fn derive(base_seed: u64, task_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(base_seed);
        inner.set_stream(task_index.wrapping_add(1));
        SeededRng {
            seed: base_seed,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, k)`; `k` must be positive.
    #[inline]
    pub fn below(&mut self, k: u64) -> u64 {
        self.inner.random_range(0..k)
    }

    #[inline]
    pub fn element(&mut self, field: Fq) -> FieldElement {
        self.below(field.q().into()) as u32
    }
}

/// Uniform over `S_m` (Fisher-Yates).
pub fn sample_permutation(m: usize, rng: &mut SeededRng) -> Permutation {
    let mut images: Vec<u32> = (0..m as u32).collect();
    for i in (1..m).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffle of identity is a bijection")
}

pub fn sample_matrix(field: Fq, rows: usize, cols: usize, rng: &mut SeededRng) -> FqMatrix {
    let data = (0..rows * cols).map(|_| rng.element(field)).collect();
    FqMatrix::from_vec(field, rows, cols, data)
}

/// Uniform over full-rank (rank `min(rows, cols)`) matrices of the given shape.
pub fn sample_full_rank(field: Fq, rows: usize, cols: usize, rng: &mut SeededRng) -> Result<FqMatrix> {
    sample_full_rank_counted(field, rows, cols, rng).map(|(m, _)| m)
}

/// As [`sample_full_rank`], also returning the number of draws consumed.
pub fn sample_full_rank_counted(
    field: Fq,
    rows: usize,
    cols: usize,
    rng: &mut SeededRng,
) -> Result<(FqMatrix, u32)> {
    let rank = rows.min(cols);
    for attempt in 1..=REJECTION_CAP {
        let x = sample_matrix(field, rows, cols, rng);
        if x.rank() == rank {
            return Ok((x, attempt));
        }
    }
    Err(Error::Internal(format!(
        "full-rank sampler exceeded {REJECTION_CAP} attempts"
    )))
}

/// Uniform over `m x n` matrices of rank `n` with `m` pairwise distinct
/// nonzero rows. Requires `n <= m < q^n`.
pub fn sample_distinct_nonzero_rows_full_rank(
    field: Fq,
    m: usize,
    n: usize,
    rng: &mut SeededRng,
) -> Result<FqMatrix> {
    let q = u64::from(field.q());
    let nonzero_rows = q.checked_pow(n as u32).map(|qn| qn - 1);
    if n > m || nonzero_rows.is_some_and(|c| (m as u64) > c) {
        return Err(ParamError::constraint(
            "n <= m < q^n",
            format!("q = {q}, m = {m}, n = {n}"),
        )
        .into());
    }
    for _ in 0..REJECTION_CAP {
        let x = match nonzero_rows {
            Some(count) if count <= MATERIALIZE_LIMIT => distinct_rows_shuffled(field, m, n, count, rng),
            _ => distinct_rows_rejection(field, m, n, rng),
        };
        if x.rank() == n {
            return Ok(x);
        }
    }
    Err(Error::Internal(format!(
        "distinct-row sampler exceeded {REJECTION_CAP} attempts"
    )))
}

/// Partial Fisher-Yates over the explicit list of nonzero row codes.
fn distinct_rows_shuffled(field: Fq, m: usize, n: usize, count: u64, rng: &mut SeededRng) -> FqMatrix {
    let mut codes: Vec<u64> = (1..=count).collect();
    let q = u64::from(field.q());
    let mut data = Vec::with_capacity(m * n);
    for i in 0..m {
        let j = i + rng.below((codes.len() - i) as u64) as usize;
        codes.swap(i, j);
        let mut code = codes[i];
        for _ in 0..n {
            data.push((code % q) as u32);
            code /= q;
        }
    }
    FqMatrix::from_vec(field, m, n, data)
}

fn distinct_rows_rejection(field: Fq, m: usize, n: usize, rng: &mut SeededRng) -> FqMatrix {
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(m);
    let mut data = Vec::with_capacity(m * n);
    while seen.len() < m {
        let row: Vec<u32> = (0..n).map(|_| rng.element(field)).collect();
        if row.iter().all(|&x| x == 0) || seen.contains(&row) {
            continue;
        }
        data.extend_from_slice(&row);
        seen.insert(row);
    }
    FqMatrix::from_vec(field, m, n, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{self, ExactRational};
    use std::collections::HashMap;

    fn f(q: u64) -> Fq {
        Fq::new(q).unwrap()
    }

    /// Every cell within 4 standard deviations of its binomial mean.
    fn assert_cells_uniform<K: std::fmt::Debug>(counts: &HashMap<K, u64>, support: usize, samples: u64) {
        assert_eq!(counts.len(), support, "support size");
        let p = 1.0 / support as f64;
        let mean = samples as f64 * p;
        let sd = (samples as f64 * p * (1.0 - p)).sqrt();
        for (k, &c) in counts {
            assert!((c as f64 - mean).abs() <= 4.0 * sd, "{k:?}: {c} vs {mean}");
        }
    }

    #[test]
    fn derived_streams_differ() {
        let mut a = SeededRng::new(7);
        let mut b = SeededRng::derive(7, 0);
        let mut c = SeededRng::derive(7, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.below(1 << 40)).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.below(1 << 40)).collect();
        let zs: Vec<u64> = (0..8).map(|_| c.below(1 << 40)).collect();
        assert_ne!(xs, ys);
        assert_ne!(ys, zs);
        let mut b2 = SeededRng::derive(7, 0);
        assert_eq!(ys, (0..8).map(|_| b2.below(1 << 40)).collect::<Vec<_>>());
    }

    #[test]
    fn permutation_sampler() {
        let mut rng = SeededRng::new(1);
        assert!(sample_permutation(1, &mut rng).is_identity());
        let mut counts = HashMap::new();
        for _ in 0..60_000 {
            *counts.entry(sample_permutation(3, &mut rng)).or_insert(0) += 1;
        }
        assert_cells_uniform(&counts, 6, 60_000);

        let a = sample_permutation(20, &mut SeededRng::new(99));
        let b = sample_permutation(20, &mut SeededRng::new(99));
        assert_eq!(a, b);
    }

    #[test]
    fn full_rank_sampler_uniform() {
        let mut rng = SeededRng::new(2);
        let mut counts = HashMap::new();
        for _ in 0..30_000 {
            let x = sample_full_rank(f(2), 1, 2, &mut rng).unwrap();
            *counts.entry(x.to_rows()).or_insert(0) += 1;
        }
        assert_cells_uniform(&counts, 3, 30_000);
        assert_eq!(sample_full_rank(f(2), 3, 2, &mut rng).unwrap().rank(), 2);
        for _ in 0..200 {
            assert_eq!(sample_full_rank(f(3), 3, 4, &mut rng).unwrap().rank(), 3);
        }
    }

    #[test]
    fn full_rank_acceptance_probability() {
        // q=2, 2x3: accept with probability |F^{2x3,2}| / 2^6 = 42/64
        let mut rng = SeededRng::new(3);
        let trials = 100_000u64;
        let mut attempts = 0u64;
        for _ in 0..trials {
            attempts += u64::from(sample_full_rank_counted(f(2), 2, 3, &mut rng).unwrap().1);
        }
        let p = ExactRational::from(exactnum::rank_count(2, 3, 2, 2)) / ExactRational::from(64u64);
        let p = p.to_f64();
        assert!((p - 42.0 / 64.0).abs() < 1e-12);
        // successes = trials out of `attempts` Bernoulli(p) draws
        let sd = (p * (1.0 - p) / attempts as f64).sqrt();
        let est = trials as f64 / attempts as f64;
        assert!((est - p).abs() <= 4.0 * sd, "{est} vs {p}");
    }

    #[test]
    fn distinct_rows_sampler() {
        let mut rng = SeededRng::new(4);
        let mut counts = HashMap::new();
        for _ in 0..24_000 {
            let x = sample_distinct_nonzero_rows_full_rank(f(5), 3, 1, &mut rng).unwrap();
            *counts.entry(x.to_rows()).or_insert(0) += 1;
        }
        assert_cells_uniform(&counts, 24, 24_000);

        for _ in 0..500 {
            let x = sample_distinct_nonzero_rows_full_rank(f(7), 3, 1, &mut rng).unwrap();
            let e = x.entries();
            assert!(e.iter().all(|&v| v != 0));
            assert!(e[0] != e[1] && e[1] != e[2] && e[0] != e[2]);
            assert_eq!(x.rank(), 1);
        }
        assert!(sample_distinct_nonzero_rows_full_rank(f(7), 7, 1, &mut rng).is_err());
        assert!(sample_distinct_nonzero_rows_full_rank(f(7), 1, 2, &mut rng).is_err());
    }

    #[test]
    fn distinct_rows_large_space_uses_rejection_path() {
        // q^n - 1 > 2^16
        let mut rng = SeededRng::new(5);
        for _ in 0..50 {
            let x = sample_distinct_nonzero_rows_full_rank(f(257), 6, 3, &mut rng).unwrap();
            assert_eq!(x.rank(), 3);
            let rows = x.to_rows();
            for i in 0..6 {
                assert!(rows[i].iter().any(|&v| v != 0));
                for j in 0..i {
                    assert_ne!(rows[i], rows[j]);
                }
            }
        }
    }

    #[test]
    fn distinct_rows_both_paths_uniform_support() {
        // q=2, n=2, m=3: all 6 orderings of the 3 nonzero rows, all rank 2
        let mut rng = SeededRng::new(6);
        let mut counts = HashMap::new();
        for _ in 0..60_000 {
            let x = sample_distinct_nonzero_rows_full_rank(f(2), 3, 2, &mut rng).unwrap();
            *counts.entry(x.to_rows()).or_insert(0) += 1;
        }
        assert_cells_uniform(&counts, 6, 60_000);
        let mut counts = HashMap::new();
        for _ in 0..60_000 {
            let x = distinct_rows_rejection(f(2), 3, 2, &mut rng);
            *counts.entry(x.to_rows()).or_insert(0) += 1;
        }
        assert_cells_uniform(&counts, 6, 60_000);
    }
}
