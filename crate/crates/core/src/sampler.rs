//! Reproducible i.i.d. sampling from a density over `{0,1}^m`.
//!
//! Draws come from ChaCha8 seeded with a 64-bit value. Each draw is a uniform
//! `u64` compared against integer thresholds `ceil(F_k · 2^64)` built from the
//! exact cumulative sums `F_k`, so no floating point is involved and every
//! cell's selection probability is within `2^-64` of its mass.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{pairs, point, Rational};
use crate::model::Density;

pub const GENERATOR_ID: &str = "chacha8";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBatch {
    pub m: usize,
    pub seed: u64,
    pub generator_id: String,
    /// Support index of each draw, in draw order.
    pub indices: Vec<usize>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn row(&self, k: usize) -> Vec<u8> {
        point(self.m, self.indices[k])
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.indices.iter().map(|&j| point(self.m, j))
    }

    /// How often each support point was drawn.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; 1 << self.m];
        for &j in &self.indices {
            counts[j] += 1;
        }
        counts
    }

    /// One draw per line under a `x_1,…,x_m` header.
    pub fn to_csv(&self) -> String {
        let mut out = (1..=self.m)
            .map(|i| format!("x_{i}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

/// `ceil(F_k · 2^64)` for the cumulative sums `F_k` of `f`.
fn thresholds(f: &Density) -> Vec<u128> {
    let scale = Rational::from_integer(BigInt::from(1u128 << 64));
    let mut cumulative = Rational::zero();
    f.values()
        .iter()
        .map(|v| {
            cumulative += v;
            (&cumulative * &scale)
                .ceil()
                .to_integer()
                .to_u128()
                .expect("threshold fits in 65 bits")
        })
        .collect()
}

pub fn sample(f: &Density, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidSampleSize(n));
    }
    let table = thresholds(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = (0..n)
        .map(|_| {
            let u = rng.next_u64() as u128;
            table.partition_point(|&t| t <= u)
        })
        .collect();
    Ok(SampleBatch {
        m: f.dimension(),
        seed,
        generator_id: GENERATOR_ID.to_string(),
        indices,
    })
}

/// Exact sample means of `X_i` (`order = 1`) or of `X_i X_j` for pairs in
/// lexicographic order (`order = 2`).
pub fn empirical_moments(batch: &SampleBatch, order: usize) -> Result<Vec<Rational>> {
    let subsets: Vec<usize> = match order {
        1 => (0..batch.m).map(|i| 1 << i).collect(),
        2 => pairs(batch.m)
            .into_iter()
            .map(|(i, j)| 1 << i | 1 << j)
            .collect(),
        k => return Err(Error::UnsupportedOrder(k)),
    };
    let counts = batch.counts();
    let n = BigInt::from(batch.len());
    Ok(subsets
        .into_iter()
        .map(|s| {
            let hits: u64 = counts
                .iter()
                .enumerate()
                .filter(|(j, _)| j & s == s)
                .map(|(_, c)| c)
                .sum();
            Rational::new(BigInt::from(hits), n.clone())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio, to_f64};
    use crate::model::FrechetClass;

    #[test]
    fn point_mass_draws_one_row() {
        let f = Density::point_mass(3, 7).unwrap();
        let batch = sample(&f, 50, 1).unwrap();
        assert!(batch.rows().all(|r| r == vec![1, 1, 1]));
        assert_eq!(empirical_moments(&batch, 2).unwrap(), vec![int(1); 3]);
        let zeros = sample(&Density::point_mass(2, 0).unwrap(), 10, 1).unwrap();
        assert_eq!(empirical_moments(&zeros, 1).unwrap(), vec![int(0); 2]);
    }

    #[test]
    fn same_seed_same_batch() {
        let c = FrechetClass::new(vec![ratio(1, 3), ratio(3, 5)]).unwrap();
        let f = Density::independence(&c);
        assert_eq!(sample(&f, 1000, 42).unwrap(), sample(&f, 1000, 42).unwrap());
        assert_ne!(sample(&f, 1000, 42).unwrap(), sample(&f, 1000, 43).unwrap());
    }

    #[test]
    fn zero_mass_cells_are_never_drawn() {
        let f = Density::new(vec![ratio(1, 2), int(0), int(0), ratio(1, 2)]).unwrap();
        let counts = sample(&f, 10_000, 9).unwrap().counts();
        assert_eq!((counts[1], counts[2]), (0, 0));
    }

    #[test]
    fn independence_pair_moment_is_calibrated() {
        let c = FrechetClass::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let n = 100_000;
        let batch = sample(&Density::independence(&c), n, 2024).unwrap();
        let got = to_f64(&empirical_moments(&batch, 2).unwrap()[0]);
        let se = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!((got - 0.25).abs() < 4.0 * se, "{got}");
    }

    #[test]
    fn csv_layout() {
        let batch = sample(&Density::point_mass(2, 1).unwrap(), 2, 0).unwrap();
        assert_eq!(batch.to_csv(), "x_1,x_2\n1,0\n1,0\n");
    }

    #[test]
    fn rejects_empty_batches_and_high_orders() {
        let f = Density::point_mass(2, 1).unwrap();
        assert!(sample(&f, 0, 0).is_err());
        let batch = sample(&f, 1, 0).unwrap();
        assert_eq!(
            empirical_moments(&batch, 3),
            Err(Error::UnsupportedOrder(3))
        );
    }
}
