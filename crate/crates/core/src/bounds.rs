//! Attainable ranges of second-order moments and correlations.
//!
//! [`pair_bounds`] reads them off the ray densities of a class. The bivariate
//! functions give the closed forms for `m = 2` and serve as an independent
//! check on the ray path.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, pairs, sqrt_rational, Rational, Sqrt};
use crate::model::{density_from_cdf, Cdf, Density, FrechetClass, PairMoments};
use crate::rays::{moment_map, moment_rays, RayMatrix, RayOptions};

/// Bounds for one pair `(i, j)` (zero-based, `i < j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairBound {
    pub i: usize,
    pub j: usize,
    pub moment_lo: Rational,
    pub moment_hi: Rational,
    pub rho_lo: Sqrt,
    pub rho_hi: Sqrt,
    /// Index of a ray attaining `moment_lo`.
    pub lo_ray: usize,
    /// Index of a ray attaining `moment_hi`.
    pub hi_ray: usize,
}

/// `ρ = (μ - p_i p_j) / √(p_i q_i p_j q_j)`, evaluated as a signed square root
/// so it stays exact whenever the ratio squared is a rational square.
pub fn correlation_of_moment(class: &FrechetClass, i: usize, j: usize, mu: &Rational) -> Sqrt {
    let d = mu - &class.p()[i] * &class.p()[j];
    let root = sqrt_rational(&(&d * &d / class.pair_variance_product(i, j)));
    if d.is_negative() {
        -root
    } else {
        root
    }
}

/// Row extrema of `A_2p` for every pair, with the rays attaining them.
pub fn pair_bounds(class: &FrechetClass, rays: &RayMatrix) -> Result<Vec<PairBound>> {
    if rays.dimension() != class.dimension() {
        return Err(Error::DimensionMismatch {
            expected: class.dimension(),
            found: rays.dimension(),
        });
    }
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    let a2p = moment_map(rays, 2)?;
    Ok(pairs(class.dimension())
        .into_iter()
        .enumerate()
        .map(|(r, (i, j))| {
            let row = a2p.row(r);
            let mut lo_ray = 0;
            let mut hi_ray = 0;
            for (k, v) in row.iter().enumerate() {
                if v < &row[lo_ray] {
                    lo_ray = k;
                }
                if v > &row[hi_ray] {
                    hi_ray = k;
                }
            }
            let (moment_lo, moment_hi) = (row[lo_ray].clone(), row[hi_ray].clone());
            PairBound {
                i,
                j,
                rho_lo: correlation_of_moment(class, i, j, &moment_lo),
                rho_hi: correlation_of_moment(class, i, j, &moment_hi),
                moment_lo,
                moment_hi,
                lo_ray,
                hi_ray,
            }
        })
        .collect())
}

fn bivariate_class(p1: &Rational, p2: &Rational) -> Result<FrechetClass> {
    FrechetClass::new(vec![p1.clone(), p2.clone()])
}

/// Densities of the lower and upper Fréchet–Hoeffding bounds,
/// `F_L = max(F_1 + F_2 - 1, 0)` and `F_U = min(F_1, F_2)`.
pub fn bivariate_frechet_densities(p1: &Rational, p2: &Rational) -> Result<(Density, Density)> {
    let class = bivariate_class(p1, p2)?;
    let one = Rational::one();
    let f1 = [class.q()[0].clone(), one.clone()];
    let f2 = [class.q()[1].clone(), one.clone()];
    let mut lower = Vec::with_capacity(4);
    let mut upper = Vec::with_capacity(4);
    for j in 0..4 {
        let (a, b) = (&f1[j & 1], &f2[j >> 1]);
        lower.push((a + b - &one).max(Rational::zero()));
        upper.push(a.min(b).clone());
    }
    Ok((
        density_from_cdf(&Cdf::new(lower)?)?,
        density_from_cdf(&Cdf::new(upper)?)?,
    ))
}

/// `λ f_L + (1 - λ) f_U`.
pub fn bivariate_mixture(p1: &Rational, p2: &Rational, lambda: &Rational) -> Result<Density> {
    if lambda.is_negative() || lambda > &Rational::one() {
        return Err(Error::InvalidWeight(format_rational(lambda)));
    }
    let (lower, upper) = bivariate_frechet_densities(p1, p2)?;
    let mu = Rational::one() - lambda;
    Density::new(
        lower
            .values()
            .iter()
            .zip(upper.values())
            .map(|(l, u)| lambda * l + &mu * u)
            .collect(),
    )
}

/// Recovers `λ` from a member of `F(p1, p2)` via its mass at `(0, 0)`.
pub fn mixture_weight(p1: &Rational, p2: &Rational, f: &Density) -> Result<Rational> {
    if f.dimension() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.dimension(),
        });
    }
    let (lower, upper) = bivariate_frechet_densities(p1, p2)?;
    let (l, u) = (&lower.values()[0], &upper.values()[0]);
    Ok((&f.values()[0] - u) / (l - u))
}

/// Closed-form ranges for the class `F(p1, p2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateRanges {
    pub moment_lo: Rational,
    pub moment_hi: Rational,
    pub theta12_lo: Rational,
    pub theta12_hi: Rational,
    pub rho_lo: Sqrt,
    pub rho_hi: Sqrt,
}

/// Ranges of `E[X_1 X_2]`, `θ_12` and `ρ_12` over `F(p1, p2)`.
///
/// The coordinates are relabelled internally so that `q_2 >= q_1`.
pub fn bivariate_analytic_ranges(p1: &Rational, p2: &Rational) -> Result<BivariateRanges> {
    let class = bivariate_class(p1, p2)?;
    let (mut p1, mut p2) = (class.p()[0].clone(), class.p()[1].clone());
    let (mut q1, mut q2) = (class.q()[0].clone(), class.q()[1].clone());
    if q2 < q1 {
        std::mem::swap(&mut p1, &mut p2);
        std::mem::swap(&mut q1, &mut q2);
    }
    let pp = &p1 * &p2;
    let qq = &q1 * &q2;
    let theta12_hi = (&p1 * &q2).recip();
    let rho_hi = sqrt_rational(&(&p2 * &q1 / (&p1 * &q2)));
    let moment_hi = &pp + &p2 * &q1;
    let (moment_lo, theta12_lo, rho_lo) = if &q1 + &q2 <= Rational::one() {
        (&pp - &qq, -pp.recip(), -sqrt_rational(&(&qq / &pp)))
    } else {
        (
            Rational::zero(),
            (&q1 + &q2 - Rational::one() - &qq) / (&qq * &pp),
            -sqrt_rational(&(&pp / &qq)),
        )
    };
    Ok(BivariateRanges {
        moment_lo,
        moment_hi,
        theta12_lo,
        theta12_hi,
        rho_lo,
        rho_hi,
    })
}

/// Everything known in closed form about `F(p1, p2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateClassSummary {
    pub p1: Rational,
    pub p2: Rational,
    pub lower: Density,
    pub upper: Density,
    pub ranges: BivariateRanges,
}

pub fn bivariate_summary(p1: &Rational, p2: &Rational) -> Result<BivariateClassSummary> {
    let (lower, upper) = bivariate_frechet_densities(p1, p2)?;
    Ok(BivariateClassSummary {
        p1: p1.clone(),
        p2: p2.clone(),
        lower,
        upper,
        ranges: bivariate_analytic_ranges(p1, p2)?,
    })
}

/// Per-coordinate `[min, max]` of the margins over all densities with
/// second-order moments `mu2`. Fails with [`Error::EmptyCone`] when no such
/// density exists.
pub fn margin_bounds_given_mu2(
    mu2: &PairMoments,
    options: &RayOptions,
) -> Result<Vec<(Rational, Rational)>> {
    let rays = moment_rays(mu2, options)?;
    Ok(moment_map(&rays, 1)?.row_extrema())
}
