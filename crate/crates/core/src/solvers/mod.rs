//! Feasibility of moment targets, density construction, and projection of
//! infeasible correlation targets.
//!
//! Every fit is posed as `A x = b, x >= 0` and handed to the exact simplex in
//! [`crate::lp`]. A feasible answer reproduces its targets with no error; an
//! infeasible one carries a checked Farkas certificate for the stated system.

mod projection;

pub use projection::{
    nearest_feasible_correlation, nearest_feasible_moments, ProjectionResult, ProjectionSource,
};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{pairs, Matrix, Rational};
use crate::lp::{self, FarkasCertificate, LpOutcome};
use crate::model::{subsets_of_order, Density, FrechetClass, PairMoments};
use crate::rays::{moment_map, moment_rays, RayMatrix, RayOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitStatus {
    Feasible,
    Infeasible,
}

/// The equality system a fit was posed as, one label per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub a: Matrix,
    pub b: Vec<Rational>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitResult {
    pub status: FitStatus,
    /// Weights over the ray densities, when the fit ran over rays.
    pub lambda: Option<Vec<Rational>>,
    pub density: Option<Density>,
    pub certificate: Option<FarkasCertificate>,
    /// Optimal objective for [`minimize_higher_moments`].
    pub objective: Option<Rational>,
    pub system: LinearSystem,
    pub pivots: usize,
}

impl FitResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FitStatus::Feasible
    }
}

fn check_moments(m: usize, mu2: &PairMoments) -> Result<()> {
    if mu2.dimension() == m {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: m,
            found: mu2.dimension(),
        })
    }
}

/// Row of `M^{⊗m}` for subset `alpha`: ones where `x ⊇ alpha`.
fn moment_row(m: usize, alpha: usize) -> Vec<Rational> {
    (0..1usize << m)
        .map(|j| {
            if j & alpha == alpha {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

fn pair_labels(m: usize) -> impl Iterator<Item = String> {
    pairs(m)
        .into_iter()
        .map(|(i, j)| format!("mu_{},{}", i + 1, j + 1))
}

fn margin_labels(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|i| format!("p_{i}"))
}

/// `Σ f = 1`, margins `p`, pair moments `μ2`, over the `2^m` support points.
fn direct_system(class: &FrechetClass, mu2: &PairMoments) -> LinearSystem {
    let m = class.dimension();
    let mut rows = vec![moment_row(m, 0)];
    rows.extend(subsets_of_order(m, 1).into_iter().map(|a| moment_row(m, a)));
    rows.extend(subsets_of_order(m, 2).into_iter().map(|a| moment_row(m, a)));
    let mut b = vec![Rational::one()];
    b.extend(class.p().iter().cloned());
    b.extend(mu2.values().iter().cloned());
    let mut labels = vec!["total".to_string()];
    labels.extend(margin_labels(m));
    labels.extend(pair_labels(m));
    LinearSystem {
        a: Matrix::from_rows(rows),
        b,
        labels,
    }
}

/// `Σ λ = 1` stacked on top of a moment map.
fn simplex_system(map: &Matrix, target: &[Rational], labels: Vec<String>) -> LinearSystem {
    let mut rows = vec![vec![Rational::one(); map.cols()]];
    rows.extend(map.row_vecs());
    let mut b = vec![Rational::one()];
    b.extend(target.iter().cloned());
    let mut all = vec!["total".to_string()];
    all.extend(labels);
    LinearSystem {
        a: Matrix::from_rows(rows),
        b,
        labels: all,
    }
}

fn run(
    system: LinearSystem,
    cost: Option<Vec<Rational>>,
    to_density: impl FnOnce(&[Rational]) -> Result<Density>,
    keep_lambda: bool,
) -> Result<FitResult> {
    let minimize = cost.is_some();
    let c = cost.unwrap_or_else(|| vec![Rational::zero(); system.a.cols()]);
    match lp::solve(&system.a, &system.b, &c)? {
        LpOutcome::Optimal(sol) => {
            let density = to_density(&sol.x)?;
            Ok(FitResult {
                status: FitStatus::Feasible,
                objective: minimize.then_some(sol.objective),
                lambda: keep_lambda.then_some(sol.x),
                density: Some(density),
                certificate: None,
                system,
                pivots: sol.pivots,
            })
        }
        LpOutcome::Infeasible {
            certificate,
            pivots,
        } => Ok(FitResult {
            status: FitStatus::Infeasible,
            lambda: None,
            density: None,
            certificate: Some(certificate),
            objective: None,
            system,
            pivots,
        }),
        LpOutcome::Unbounded { .. } => Err(Error::Numerical(
            "bounded feasibility problem reported unbounded".into(),
        )),
    }
}

/// Finds simplex weights `λ` with `A_2p λ = μ2` over the ray densities of a
/// class, and the density `R λ`.
pub fn fit_lambda(rays: &RayMatrix, mu2: &PairMoments) -> Result<FitResult> {
    check_moments(rays.dimension(), mu2)?;
    let a2p = moment_map(rays, 2)?;
    let system = simplex_system(
        a2p.matrix(),
        mu2.values(),
        pair_labels(rays.dimension()).collect(),
    );
    run(system, None, |x| rays.combine(x), true)
}

/// Finds a density over `{0,1}^m` with margins `p` and pair moments `μ2`
/// directly, without enumerating rays.
pub fn fit_density_direct(class: &FrechetClass, mu2: &PairMoments) -> Result<FitResult> {
    check_moments(class.dimension(), mu2)?;
    run(
        direct_system(class, mu2),
        None,
        |x| Density::new(x.to_vec()),
        false,
    )
}

/// Sum of all moments of order at least 3 contributed by support point `j`:
/// `Σ_{k>=3} C(|x|, k) = 2^|x| - 1 - |x| - C(|x|, 2)`.
fn higher_moment_weight(j: usize) -> Rational {
    let n = j.count_ones() as i64;
    let total = (1i64 << n) - 1 - n - n * (n - 1) / 2;
    Rational::from_integer(total.into())
}

/// Among densities with margins `p` and pair moments `μ2`, one minimizing the
/// total mass of the moments of order `>= 3`.
pub fn minimize_higher_moments(class: &FrechetClass, mu2: &PairMoments) -> Result<FitResult> {
    check_moments(class.dimension(), mu2)?;
    let cost = (0..1usize << class.dimension())
        .map(higher_moment_weight)
        .collect();
    run(
        direct_system(class, mu2),
        Some(cost),
        |x| Density::new(x.to_vec()),
        false,
    )
}

/// Decides whether margins `p` are compatible with pair moments `μ2` using
/// the rays of the `μ2` family (`p = A_1μ2 λ`).
pub fn solve_margins_given_mu2(
    mu2: &PairMoments,
    p: &[Rational],
    options: &RayOptions,
) -> Result<FitResult> {
    let m = mu2.dimension();
    if p.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: p.len(),
        });
    }
    let rays = moment_rays(mu2, options)?;
    let a1 = moment_map(&rays, 1)?;
    let system = simplex_system(a1.matrix(), p, margin_labels(m).collect());
    run(system, None, |x| rays.combine(x), true)
}
