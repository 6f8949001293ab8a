//! Fréchet classes of multivariate Bernoulli distributions and the maps
//! between densities, distribution functions, FGM coefficients and moments.
//!
//! All vectors of length `2^m` use the canonical support order of
//! [`crate::exact::SupportOrdering`]. Per-coordinate 2×2 operators act as:
//!
//! | operator        | block                          |
//! |-----------------|--------------------------------|
//! | CDF → density   | `[[1, 0], [-1, 1]]`            |
//! | density → CDF   | `[[1, 0], [1, 1]]`             |
//! | density → moments | `[[1, 1], [0, 1]]`           |
//! | θ → CDF         | `diag(q_i, 1) · [[1, p_i], [1, 0]]` |
//! | density → θ     | `[[1, 1], [1/q_i, -1/p_i]]`    |

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    apply_per_coordinate, block2, check_dimension, format_rational, pair_index, pairs,
    sqrt_rational, Block2, Rational, Sqrt,
};

/// The class `F(p_1, …, p_m)` of joint laws with Bernoulli(`p_i`) margins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrechetClass {
    p: Vec<Rational>,
    q: Vec<Rational>,
}

impl FrechetClass {
    pub fn new(p: Vec<Rational>) -> Result<Self> {
        check_dimension(p.len())?;
        for (i, pi) in p.iter().enumerate() {
            if !pi.is_positive() || pi >= &Rational::one() {
                return Err(Error::InvalidMargin {
                    index: i + 1,
                    value: format_rational(pi),
                });
            }
        }
        let q = p.iter().map(|pi| Rational::one() - pi).collect();
        Ok(Self { p, q })
    }

    pub fn dimension(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    /// Odds `p_i / q_i` of coordinate `i` (zero-based).
    pub fn odds(&self, i: usize) -> Rational {
        &self.p[i] / &self.q[i]
    }

    /// `p_i q_i p_j q_j`, the squared scale between correlation and moment.
    pub fn pair_variance_product(&self, i: usize, j: usize) -> Rational {
        &self.p[i] * &self.q[i] * &self.p[j] * &self.q[j]
    }

    pub fn pair_scale(&self, i: usize, j: usize) -> Sqrt {
        sqrt_rational(&self.pair_variance_product(i, j))
    }

    fn check_dim(&self, m: usize) -> Result<()> {
        if m == self.dimension() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: m,
            })
        }
    }
}

fn dimension_of_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidDensity(format!(
            "length {len} is not 2^m for m >= 1"
        )));
    }
    let m = len.trailing_zeros() as usize;
    check_dimension(m)?;
    Ok(m)
}

/// A probability vector over `{0,1}^m` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Density {
    values: Vec<Rational>,
}

impl Density {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        dimension_of_len(values.len())?;
        if let Some(j) = values.iter().position(Signed::is_negative) {
            return Err(Error::InvalidDensity(format!(
                "entry {j} is negative ({})",
                format_rational(&values[j])
            )));
        }
        let total: Rational = values.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDensity(format!(
                "entries sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Self { values })
    }

    pub fn dimension(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn margins(&self) -> Vec<Rational> {
        let m = self.dimension();
        (0..m)
            .map(|i| {
                self.values
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .sum()
            })
            .collect()
    }

    pub fn pair_moments(&self) -> PairMoments {
        PairMoments {
            m: self.dimension(),
            values: select_moments(&moment_vector(self), self.dimension(), 2),
        }
    }

    pub fn belongs_to(&self, class: &FrechetClass) -> bool {
        self.dimension() == class.dimension() && self.margins() == class.p()
    }

    /// Point mass at support index `j`.
    pub fn point_mass(m: usize, j: usize) -> Result<Self> {
        let mut values = vec![Rational::zero(); 1 << m];
        values[j] = Rational::one();
        Self::new(values)
    }

    /// Product density with margins `class.p()`.
    pub fn independence(class: &FrechetClass) -> Self {
        let m = class.dimension();
        let values = (0..1usize << m)
            .map(|j| {
                (0..m)
                    .map(|i| {
                        if j >> i & 1 == 1 {
                            &class.p()[i]
                        } else {
                            &class.q()[i]
                        }
                    })
                    .product()
            })
            .collect();
        Self { values }
    }
}

/// Values of a (candidate) distribution function over `{0,1}^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdf {
    values: Vec<Rational>,
}

impl Cdf {
    /// Wraps a vector of length `2^m`; validity is checked by
    /// [`density_from_cdf`].
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        dimension_of_len(values.len()).map_err(|e| Error::InvalidCdf(e.to_string()))?;
        Ok(Self { values })
    }

    pub fn dimension(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// FGM coefficients indexed by subset `α` in canonical order: entry 0 is
/// `θ_0`, entry `2^(i-1)` is `θ_i`, entry `2^(i-1) + 2^(j-1)` is `θ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaVector {
    values: Vec<Rational>,
}

impl ThetaVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        dimension_of_len(values.len())?;
        Ok(Self { values })
    }

    pub fn dimension(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `θ_α` for a zero-based subset of coordinates.
    pub fn coefficient(&self, subset: &[usize]) -> &Rational {
        &self.values[subset.iter().fold(0, |acc, &i| acc | 1 << i)]
    }

    /// `θ_0 = 1` and every singleton `θ_i = 0`.
    pub fn satisfies_class_conditions(&self) -> bool {
        self.values[0].is_one() && (0..self.dimension()).all(|i| self.values[1 << i].is_zero())
    }
}

/// Second-order moment targets `E[X_i X_j]`, pairs in lexicographic order.
///
/// Entries are not range-checked: a target computed from correlations may lie
/// outside `[0, 1]`, in which case it is simply infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMoments {
    m: usize,
    values: Vec<Rational>,
}

impl PairMoments {
    pub fn new(m: usize, values: Vec<Rational>) -> Result<Self> {
        check_pair_len(m, values.len())?;
        Ok(Self { m, values })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Moment for zero-based pair `(i, j)`, `i < j`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[pair_index(self.m, i, j)]
    }

    /// Errors unless every entry lies in `[0, 1]`.
    pub fn check_range(&self) -> Result<()> {
        for (&(i, j), v) in pairs(self.m).iter().zip(&self.values) {
            if v.is_negative() || v > &Rational::one() {
                return Err(Error::InvalidMoment {
                    i: i + 1,
                    j: j + 1,
                    value: format_rational(v),
                });
            }
        }
        Ok(())
    }
}

/// Pairwise correlations `ρ_ij`, pairs in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationSpec {
    m: usize,
    values: Vec<Rational>,
}

impl CorrelationSpec {
    pub fn new(m: usize, values: Vec<Rational>) -> Result<Self> {
        check_pair_len(m, values.len())?;
        for (&(i, j), v) in pairs(m).iter().zip(&values) {
            if v.abs() > Rational::one() {
                return Err(Error::InvalidCorrelation {
                    i: i + 1,
                    j: j + 1,
                    value: format_rational(v),
                });
            }
        }
        Ok(Self { m, values })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[pair_index(self.m, i, j)]
    }
}

fn check_pair_len(m: usize, len: usize) -> Result<()> {
    check_dimension(m)?;
    let expected = m * (m - 1) / 2;
    if len == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: len,
        })
    }
}

fn repeat(m: usize, block: Block2) -> Vec<Block2> {
    vec![block; m]
}

pub fn density_from_cdf(cdf: &Cdf) -> Result<Density> {
    let values = apply_per_coordinate(&repeat(cdf.dimension(), block2(1, 0, -1, 1)), cdf.values());
    Density::new(values).map_err(|e| match e {
        Error::InvalidDensity(msg) => Error::InvalidCdf(msg),
        other => other,
    })
}

pub fn cdf_from_density(f: &Density) -> Cdf {
    Cdf {
        values: apply_per_coordinate(&repeat(f.dimension(), block2(1, 0, 1, 1)), f.values()),
    }
}

fn theta_to_cdf_blocks(class: &FrechetClass) -> Vec<Block2> {
    class
        .p()
        .iter()
        .zip(class.q())
        .map(|(p, q)| [[q.clone(), q * p], [Rational::one(), Rational::zero()]])
        .collect()
}

/// `Λ_p U_p θ`. The result need not be a valid distribution function.
pub fn cdf_from_theta(class: &FrechetClass, theta: &ThetaVector) -> Result<Cdf> {
    class.check_dim(theta.dimension())?;
    Ok(Cdf {
        values: apply_per_coordinate(&theta_to_cdf_blocks(class), theta.values()),
    })
}

/// `D^{⊗m} Λ_p U_p θ` as a raw vector (possibly with negative entries).
pub fn density_values_from_theta(
    class: &FrechetClass,
    theta: &ThetaVector,
) -> Result<Vec<Rational>> {
    let cdf = cdf_from_theta(class, theta)?;
    Ok(apply_per_coordinate(
        &repeat(class.dimension(), block2(1, 0, -1, 1)),
        cdf.values(),
    ))
}

/// Exact solution of `Y_p θ = f` with `Y_p = D^{⊗m} Λ_p U_p`.
pub fn theta_from_density(class: &FrechetClass, f: &Density) -> Result<ThetaVector> {
    class.check_dim(f.dimension())?;
    let blocks: Vec<Block2> = class
        .p()
        .iter()
        .zip(class.q())
        .map(|(p, q)| [[Rational::one(), Rational::one()], [q.recip(), -p.recip()]])
        .collect();
    Ok(ThetaVector {
        values: apply_per_coordinate(&blocks, f.values()),
    })
}

/// `E[X^α]` for every subset `α`, indexed like the support.
pub fn moment_vector(f: &Density) -> Vec<Rational> {
    apply_per_coordinate(&repeat(f.dimension(), block2(1, 1, 0, 1)), f.values())
}

/// Indices `α` with `|α| = k`, ordered lexicographically by their sorted
/// coordinate tuples (so pairs come out as (1,2), (1,3), …).
pub fn subsets_of_order(m: usize, k: usize) -> Vec<usize> {
    fn rec(start: usize, m: usize, k: usize, acc: usize, out: &mut Vec<usize>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..m {
            if m - i < k {
                break;
            }
            rec(i + 1, m, k - 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, 0, &mut out);
    }
    out
}

pub fn select_moments(moments: &[Rational], m: usize, k: usize) -> Vec<Rational> {
    assert_eq!(moments.len(), 1 << m);
    subsets_of_order(m, k)
        .into_iter()
        .map(|a| moments[a].clone())
        .collect()
}

/// `μ_ij = ρ_ij √(p_i q_i p_j q_j) + p_i p_j`.
///
/// The root is exact when `p_i q_i p_j q_j` is a rational square, otherwise a
/// rational within 10^-40.
pub fn mu2_from_rho(class: &FrechetClass, rho: &CorrelationSpec) -> Result<PairMoments> {
    class.check_dim(rho.dimension())?;
    let m = class.dimension();
    let values = pairs(m)
        .into_iter()
        .zip(rho.values())
        .map(|((i, j), r)| r * class.pair_scale(i, j).value() + &class.p()[i] * &class.p()[j])
        .collect();
    Ok(PairMoments { m, values })
}

/// Inverse of [`mu2_from_rho`]; the result is clamped to nothing, so moments
/// outside the attainable range give correlations outside `[-1, 1]`.
pub fn rho_values_from_mu2(class: &FrechetClass, mu2: &PairMoments) -> Result<Vec<Rational>> {
    class.check_dim(mu2.dimension())?;
    Ok(pairs(class.dimension())
        .into_iter()
        .zip(mu2.values())
        .map(|((i, j), mu)| (mu - &class.p()[i] * &class.p()[j]) / class.pair_scale(i, j).value())
        .collect())
}

pub fn rho_from_mu2(class: &FrechetClass, mu2: &PairMoments) -> Result<CorrelationSpec> {
    let values = rho_values_from_mu2(class, mu2)?;
    CorrelationSpec::new(class.dimension(), values)
}

/// Correlation implied by a single pair moment.
pub fn rho_of_moment(class: &FrechetClass, i: usize, j: usize, mu: &Rational) -> Rational {
    (mu - &class.p()[i] * &class.p()[j]) / class.pair_scale(i, j).value()
}
