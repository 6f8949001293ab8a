//! Ray densities of a Fréchet class (or of a family with fixed second-order
//! moments) and the moment maps built from them.

mod dd;

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{check_dimension, pairs, Matrix, Rational};
use crate::model::{moment_vector, select_moments, Density, FrechetClass, PairMoments};

pub use dd::{DdStats, MAX_COORDINATES};

/// Default largest `m` accepted by [`extreme_rays`].
pub const DEFAULT_RAY_DIMENSION_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// One row per coordinate, fixing the margins.
    Margins,
    /// One row per pair, fixing `E[X_i X_j]`.
    PairMoments,
}

/// Rows `A` of the homogeneous system `A f = 0`, one entry per support point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintMatrix {
    m: usize,
    kind: ConstraintKind,
    rows: Vec<Vec<Rational>>,
}

impl ConstraintMatrix {
    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.rows.clone())
    }

    pub fn annihilates(&self, f: &[Rational]) -> bool {
        self.rows
            .iter()
            .all(|row| crate::exact::dot(row, f).is_zero())
    }
}

/// Margin constraints: row `i` is `p_i` where `x_i = 0` and `-q_i` where
/// `x_i = 1`, i.e. `q_i (γ_i (1 - x_i) - x_i)` with odds `γ_i = p_i / q_i`.
pub fn build_h(class: &FrechetClass) -> ConstraintMatrix {
    let m = class.dimension();
    let rows = (0..m)
        .map(|i| {
            (0..1usize << m)
                .map(|j| {
                    if j >> i & 1 == 1 {
                        -class.q()[i].clone()
                    } else {
                        class.p()[i].clone()
                    }
                })
                .collect()
        })
        .collect();
    ConstraintMatrix {
        m,
        kind: ConstraintKind::Margins,
        rows,
    }
}

/// Pair-moment constraints: row `(i, j)` is `μ_ij` where `x_i x_j = 0` and
/// `-(1 - μ_ij)` where `x_i x_j = 1`.
///
/// This is the odds row `γ_ij (1 - x_ij) - x_ij` multiplied by `1 - μ_ij`, which
/// stays well defined at the boundary: `μ_ij = 0` forbids mass on
/// `x_i = x_j = 1` and `μ_ij = 1` forbids mass elsewhere.
pub fn build_h2(mu2: &PairMoments) -> Result<ConstraintMatrix> {
    mu2.check_range()?;
    let m = mu2.dimension();
    let rows = pairs(m)
        .into_iter()
        .zip(mu2.values())
        .map(|((a, b), mu)| {
            let off = Rational::one() - mu;
            (0..1usize << m)
                .map(|j| {
                    if j >> a & 1 == 1 && j >> b & 1 == 1 {
                        -off.clone()
                    } else {
                        mu.clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(ConstraintMatrix {
        m,
        kind: ConstraintKind::PairMoments,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayOptions {
    /// Largest dimension accepted; at most 7 (128 support points).
    pub max_dimension: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self {
            max_dimension: DEFAULT_RAY_DIMENSION_CAP,
        }
    }
}

/// Ray densities: normalized extreme rays, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayMatrix {
    m: usize,
    columns: Vec<Density>,
    stats: DdStats,
}

impl RayMatrix {
    pub fn dimension(&self) -> usize {
        self.m
    }

    /// Number of rays `n_F`.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Density] {
        &self.columns
    }

    pub fn stats(&self) -> &DdStats {
        &self.stats
    }

    /// `2^m × n_F` matrix with the ray densities as columns.
    pub fn to_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(1 << self.m, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.values().iter().enumerate() {
                out[(r, c)] = v.clone();
            }
        }
        out
    }

    /// `R λ` for simplex weights `λ`.
    pub fn combine(&self, lambda: &[Rational]) -> Result<Density> {
        if lambda.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                found: lambda.len(),
            });
        }
        let mut values = vec![Rational::zero(); 1 << self.m];
        for (w, col) in lambda.iter().zip(&self.columns) {
            if w.is_zero() {
                continue;
            }
            for (acc, v) in values.iter_mut().zip(col.values()) {
                *acc += w * v;
            }
        }
        Density::new(values)
    }
}

/// Extreme rays of `{f >= 0 : H f = 0}`, each scaled to sum 1.
pub fn extreme_rays(h: &ConstraintMatrix, options: &RayOptions) -> Result<RayMatrix> {
    let m = h.dimension();
    check_dimension(m)?;
    let cap = options.max_dimension.min(7);
    if m > cap {
        return Err(Error::RayDimensionCap { m, cap });
    }
    let (rays, stats) = dd::enumerate(1 << m, h.rows());
    let mut columns: Vec<Density> = rays
        .into_iter()
        .map(|ray| {
            let total: num_bigint::BigInt = ray.coords.iter().sum();
            let values = ray
                .coords
                .into_iter()
                .map(|c| Rational::new(c, total.clone()))
                .collect();
            Density::new(values).expect("normalized nonnegative ray is a density")
        })
        .collect();
    columns.sort_by(|a, b| lex_cmp(a.values(), b.values()));
    columns.dedup();
    Ok(RayMatrix { m, columns, stats })
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Ray densities of the class `F(p)`.
pub fn class_rays(class: &FrechetClass, options: &RayOptions) -> Result<RayMatrix> {
    extreme_rays(&build_h(class), options)
}

/// Ray densities of the family with second-order moments `mu2`.
pub fn moment_rays(mu2: &PairMoments, options: &RayOptions) -> Result<RayMatrix> {
    let rays = extreme_rays(&build_h2(mu2)?, options)?;
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    Ok(rays)
}

/// Selected moments of each ray: column `i` holds the order-`k` moments of
/// ray `i` (pairs in lexicographic order for `k = 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMap {
    order: usize,
    matrix: Matrix,
}

impl MomentMap {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        self.matrix.row(r)
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        self.matrix.column(c)
    }

    pub fn apply(&self, lambda: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(lambda)
    }

    /// `(min, max)` of every row.
    pub fn row_extrema(&self) -> Vec<(Rational, Rational)> {
        (0..self.matrix.rows())
            .map(|r| {
                let row = self.row(r);
                let lo = row.iter().min().cloned().unwrap_or_default();
                let hi = row.iter().max().cloned().unwrap_or_default();
                (lo, hi)
            })
            .collect()
    }
}

pub fn moment_map(rays: &RayMatrix, order: usize) -> Result<MomentMap> {
    if !(order == 1 || order == 2) {
        return Err(Error::UnsupportedOrder(order));
    }
    let m = rays.dimension();
    let columns: Vec<Vec<Rational>> = rays
        .columns()
        .iter()
        .map(|f| select_moments(&moment_vector(f), m, order))
        .collect();
    let rows = if order == 1 { m } else { m * (m - 1) / 2 };
    let mut matrix = Matrix::zeros(rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            matrix[(r, c)] = v.clone();
        }
    }
    Ok(MomentMap { order, matrix })
}
