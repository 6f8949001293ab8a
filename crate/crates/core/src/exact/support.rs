//! Canonical ordering of the support `{0,1}^m`.
//!
//! Index `j` corresponds to the point whose coordinate `i` (1-based) is bit
//! `i - 1` of `j`, so coordinate 1 toggles fastest.

use crate::error::{Error, Result};

/// Largest dimension for which a dense `2^m` vector is materialized.
pub const MAX_DIMENSION: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportOrdering {
    m: usize,
}

impl SupportOrdering {
    pub fn new(m: usize) -> Result<Self> {
        check_dimension(m)?;
        Ok(Self { m })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector_of(&self, j: usize) -> Vec<u8> {
        point(self.m, j)
    }

    pub fn index_of(&self, x: &[u8]) -> usize {
        assert_eq!(x.len(), self.m);
        x.iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (usize::from(b != 0) << i))
    }

    /// Support index stored in row `k` of the complemented display order,
    /// where row `k` holds the point with bits `!k`.
    pub fn paper_row_to_index(&self, k: usize) -> usize {
        (self.len() - 1) ^ k
    }
}

pub fn check_dimension(m: usize) -> Result<()> {
    if (1..=MAX_DIMENSION).contains(&m) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange {
            m,
            max: MAX_DIMENSION,
        })
    }
}

/// Coordinates of support index `j` in dimension `m`.
pub fn point(m: usize, j: usize) -> Vec<u8> {
    (0..m).map(|i| ((j >> i) & 1) as u8).collect()
}

pub fn enumerate_support(m: usize) -> Result<Vec<Vec<u8>>> {
    check_dimension(m)?;
    Ok((0..1usize << m).map(|j| point(m, j)).collect())
}

/// Pairs `(i, j)`, `i < j`, zero-based, in lexicographic order.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Position of zero-based pair `(i, j)` in [`pairs`].
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < m, "pair ({i}, {j}) out of order for m = {m}");
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}
