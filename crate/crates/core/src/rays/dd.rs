//! Double description enumeration of the extreme rays of
//! `{f ∈ R^n : f >= 0, A f = 0}`.
//!
//! Starts from the unit vectors of the nonnegative orthant and intersects one
//! hyperplane at a time. Rays are kept as primitive integer vectors together
//! with their support bitmask. Two rays of the current cone are adjacent iff
//! the face they span, `{f : f_k = 0 outside U, A' f = 0}` with `U` the union
//! of their supports, has dimension `|U| - rank(A'[:, U]) = 2`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{rank_of_rows, Rational};

/// Widest support handled by the bitmask representation.
pub const MAX_COORDINATES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct IntRay {
    pub support: u128,
    pub coords: Vec<BigInt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DdStats {
    /// Ray count after each insertion.
    pub intermediate_counts: Vec<usize>,
    pub adjacency_tests: u64,
}

/// Scales a rational row to a primitive integer row with the same kernel.
pub(crate) fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(ints)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

fn dot_sparse(row: &[BigInt], ray: &IntRay) -> BigInt {
    let mut acc = BigInt::zero();
    let mut s = ray.support;
    while s != 0 {
        let k = s.trailing_zeros() as usize;
        acc += &row[k] * &ray.coords[k];
        s &= s - 1;
    }
    acc
}

struct RankOracle<'a> {
    rows: &'a [Vec<BigInt>],
    cache: HashMap<u128, usize>,
}

impl RankOracle<'_> {
    fn rank(&mut self, mask: u128) -> usize {
        if let Some(&r) = self.cache.get(&mask) {
            return r;
        }
        let cols: Vec<usize> = (0..128).filter(|k| mask >> k & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|row| {
                cols.iter()
                    .map(|&k| Rational::from_integer(row[k].clone()))
                    .collect()
            })
            .collect();
        let r = rank_of_rows(sub);
        self.cache.insert(mask, r);
        r
    }
}

/// Extreme rays of `{f >= 0, A f = 0}` as primitive integer vectors.
pub(crate) fn enumerate(n: usize, constraints: &[Vec<Rational>]) -> (Vec<IntRay>, DdStats) {
    assert!(
        n <= MAX_COORDINATES,
        "at most {MAX_COORDINATES} coordinates"
    );
    let mut stats = DdStats::default();
    let mut rays: Vec<IntRay> = (0..n)
        .map(|k| {
            let mut coords = vec![BigInt::zero(); n];
            coords[k] = BigInt::one();
            IntRay {
                support: 1u128 << k,
                coords,
            }
        })
        .collect();
    let mut inserted: Vec<Vec<BigInt>> = Vec::new();
    let mut inserted_rank = 0usize;

    for row in constraints {
        let row = integer_row(row);
        let values: Vec<BigInt> = rays.iter().map(|r| dot_sparse(&row, r)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for (idx, v) in values.iter().enumerate() {
            if v.is_positive() {
                pos.push(idx);
            } else if v.is_negative() {
                neg.push(idx);
            } else {
                next.push(rays[idx].clone());
            }
        }

        let mut oracle = RankOracle {
            rows: &inserted,
            cache: HashMap::new(),
        };
        let max_union = inserted_rank + 2;
        for &pi in &pos {
            let rp = &rays[pi];
            for &ni in &neg {
                let rn = &rays[ni];
                let union = rp.support | rn.support;
                let size = union.count_ones() as usize;
                if size > max_union {
                    continue;
                }
                stats.adjacency_tests += 1;
                if oracle.rank(union) + 2 != size {
                    continue;
                }
                // vp > 0 > vn: vp * rn - vn * rp lies on the hyperplane.
                let (vp, vn) = (values[pi].clone(), -&values[ni]);
                let coords: Vec<BigInt> = rp
                    .coords
                    .iter()
                    .zip(&rn.coords)
                    .map(|(a, b)| &vn * a + &vp * b)
                    .collect();
                next.push(IntRay {
                    support: union,
                    coords: primitive(coords),
                });
            }
        }

        let was_independent = {
            let mut with = inserted.clone();
            with.push(row.clone());
            let full = with
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| Rational::from_integer(x.clone()))
                        .collect()
                })
                .collect();
            rank_of_rows(full) > inserted_rank
        };
        if was_independent {
            inserted_rank += 1;
        }
        inserted.push(row);
        rays = next;
        stats.intermediate_counts.push(rays.len());
    }

    let mut seen = HashSet::new();
    rays.retain(|r| seen.insert(r.coords.clone()));
    (rays, stats)
}
