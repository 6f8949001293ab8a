//! Nearest attainable correlation vector to an arbitrary target.
//!
//! The squared correlation distance `Σ (ρ_ij - t_ij)^2` equals the weighted
//! moment distance `Σ w_ij (μ_ij - τ_ij)^2` with `w_ij = 1 / (p_i q_i p_j q_j)`,
//! which is rational. Minimizing it over the convex hull of the attainable
//! moment vectors is a minimum-norm-point problem, solved here exactly by
//! Wolfe's active-set algorithm. Its linear oracle is either a scan over the
//! columns of `A_2p` or an exact LP over the class polytope.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::bounds::correlation_of_moment;
use crate::error::{Error, Result};
use crate::exact::{dot, pairs, Matrix, Rational};
use crate::lp::{self, LpOutcome};
use crate::model::{
    mu2_from_rho, subsets_of_order, CorrelationSpec, Density, FrechetClass, PairMoments,
};
use crate::rays::{moment_map, RayMatrix};

const MAX_MAJOR_CYCLES: usize = 100_000;

/// Where the attainable moment vectors come from.
#[derive(Clone, Copy, Debug)]
pub enum ProjectionSource<'a> {
    /// Columns of `A_2p` for these ray densities.
    Rays(&'a RayMatrix),
    /// Vertices of the class polytope, found by LP on demand.
    Direct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub rho_star: CorrelationSpec,
    pub mu2_star: PairMoments,
    /// Squared distance in correlation coordinates.
    pub distance_squared: Rational,
    pub distance: f64,
    /// `false` when some `√(p_i q_i p_j q_j)` is irrational, in which case
    /// the target moments and `rho_star` carry a rounding error below 10^-39.
    pub exact: bool,
    /// Weights over the rays (ray source) or over `vertices` (direct source).
    pub lambda: Vec<Rational>,
    /// Class vertices used by the direct source; empty for the ray source.
    pub vertices: Vec<Density>,
    pub density: Density,
    pub iterations: usize,
}

fn weighted(w: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    w.iter()
        .zip(a)
        .zip(b)
        .filter(|((_, x), y)| !x.is_zero() && !y.is_zero())
        .map(|((w, x), y)| w * x * y)
        .sum()
}

struct Atom {
    id: usize,
    point: Vec<Rational>,
}

/// Minimum `w`-norm point of the convex hull of the atoms handed out by
/// `oracle`, which must return an atom minimizing `g · a` for the given `g`.
/// Returns the active atoms with their convex weights.
fn min_norm_point(
    w: &[Rational],
    oracle: &mut dyn FnMut(&[Rational]) -> Result<Atom>,
) -> Result<(Vec<(Atom, Rational)>, usize)> {
    let d = w.len();
    let first = oracle(&vec![Rational::zero(); d])?;
    let mut x = first.point.clone();
    let mut active = vec![(first, Rational::from_integer(1.into()))];

    for major in 0..MAX_MAJOR_CYCLES {
        if x.iter().all(Zero::is_zero) {
            return Ok((active, major));
        }
        let g: Vec<Rational> = w.iter().zip(&x).map(|(w, x)| w * x).collect();
        let atom = oracle(&g)?;
        if weighted(w, &x, &atom.point) >= weighted(w, &x, &x) {
            return Ok((active, major));
        }
        if active.iter().any(|(a, _)| a.id == atom.id) {
            return Err(Error::Numerical("oracle returned an active atom".into()));
        }
        active.push((atom, Rational::zero()));

        loop {
            let alpha = affine_minimizer(w, &active)?;
            if alpha.iter().all(Signed::is_positive) {
                for ((_, weight), a) in active.iter_mut().zip(alpha) {
                    *weight = a;
                }
                break;
            }
            // Step from the current weights toward `alpha` until one hits zero.
            let theta = active
                .iter()
                .zip(&alpha)
                .filter(|(_, a)| !a.is_positive())
                .map(|((_, l), a)| l / (l - a))
                .min()
                .expect("some coefficient is non-positive");
            for ((_, weight), a) in active.iter_mut().zip(&alpha) {
                *weight = &*weight + &theta * (a - &*weight);
            }
            active.retain(|(_, weight)| weight.is_positive());
        }
        x = combination(d, &active);
    }
    Err(Error::Numerical(format!(
        "projection did not converge in {MAX_MAJOR_CYCLES} cycles"
    )))
}

fn combination(d: usize, active: &[(Atom, Rational)]) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); d];
    for (atom, weight) in active {
        for (xi, ai) in x.iter_mut().zip(&atom.point) {
            *xi += weight * ai;
        }
    }
    x
}

/// Affine weights of the minimum-norm point of the affine hull of the active
/// atoms: `G α = ν 1`, `1ᵀ α = 1` with `G` the Gram matrix.
fn affine_minimizer(w: &[Rational], active: &[(Atom, Rational)]) -> Result<Vec<Rational>> {
    let k = active.len();
    let mut sys = Matrix::zeros(k + 1, k + 1);
    let one = Rational::from_integer(1.into());
    for r in 0..k {
        for c in r..k {
            let v = weighted(w, &active[r].0.point, &active[c].0.point);
            sys[(r, c)] = v.clone();
            sys[(c, r)] = v;
        }
        sys[(r, k)] = -one.clone();
        sys[(k, r)] = one.clone();
    }
    let mut rhs = vec![Rational::zero(); k + 1];
    rhs[k] = one;
    let mut sol = sys
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("active atoms are affinely dependent".into()))?;
    sol.truncate(k);
    Ok(sol)
}

/// Nearest point to the moment target `tau` (in the weighted norm) among the
/// attainable second-order moment vectors of `class`.
pub fn nearest_feasible_moments(
    class: &FrechetClass,
    tau: &PairMoments,
    source: ProjectionSource<'_>,
) -> Result<ProjectionResult> {
    let m = class.dimension();
    if tau.dimension() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: tau.dimension(),
        });
    }
    let pair_list = pairs(m);
    let w: Vec<Rational> = pair_list
        .iter()
        .map(|&(i, j)| class.pair_variance_product(i, j).recip())
        .collect();
    let shift = |moments: Vec<Rational>| -> Vec<Rational> {
        moments
            .iter()
            .zip(tau.values())
            .map(|(a, t)| a - t)
            .collect()
    };

    let (active, iterations, lambda, vertices, density) = match source {
        ProjectionSource::Rays(rays) => {
            if rays.dimension() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: rays.dimension(),
                });
            }
            if rays.is_empty() {
                return Err(Error::EmptyCone);
            }
            let a2p = moment_map(rays, 2)?;
            let columns: Vec<Vec<Rational>> = (0..rays.len()).map(|c| a2p.column(c)).collect();
            let mut oracle = |g: &[Rational]| -> Result<Atom> {
                let id = (0..columns.len())
                    .map(|c| (dot(g, &columns[c]), c))
                    .min()
                    .map(|(_, c)| c)
                    .expect("at least one ray");
                Ok(Atom {
                    id,
                    point: shift(columns[id].clone()),
                })
            };
            let (active, iterations) = min_norm_point(&w, &mut oracle)?;
            let mut lambda = vec![Rational::zero(); rays.len()];
            for (atom, weight) in &active {
                lambda[atom.id] = weight.clone();
            }
            let density = rays.combine(&lambda)?;
            (active, iterations, lambda, Vec::new(), density)
        }
        ProjectionSource::Direct => {
            let n = 1usize << m;
            let pair_sets = subsets_of_order(m, 2);
            let mut rows = vec![vec![Rational::from_integer(1.into()); n]];
            let mut b = vec![Rational::from_integer(1.into())];
            for (i, pi) in class.p().iter().enumerate() {
                rows.push(
                    (0..n)
                        .map(|j| Rational::from_integer(((j >> i & 1) as i64).into()))
                        .collect(),
                );
                b.push(pi.clone());
            }
            let a = Matrix::from_rows(rows);
            let mut found: Vec<Density> = Vec::new();
            let mut oracle = |g: &[Rational]| -> Result<Atom> {
                // g · M_2 f = Σ_x f(x) Σ_{pairs ⊆ x} g_pair
                let cost: Vec<Rational> = (0..n)
                    .map(|j| {
                        pair_sets
                            .iter()
                            .zip(g)
                            .filter(|(&s, _)| j & s == s)
                            .map(|(_, gi)| gi.clone())
                            .sum()
                    })
                    .collect();
                let LpOutcome::Optimal(sol) = lp::solve(&a, &b, &cost)? else {
                    return Err(Error::Numerical("class polytope LP failed".into()));
                };
                let f = Density::new(sol.x)?;
                let point = shift(f.pair_moments().values().to_vec());
                let id = match found.iter().position(|v| v == &f) {
                    Some(id) => id,
                    None => {
                        found.push(f);
                        found.len() - 1
                    }
                };
                Ok(Atom { id, point })
            };
            let (active, iterations) = min_norm_point(&w, &mut oracle)?;
            let vertices: Vec<Density> = active.iter().map(|(a, _)| found[a.id].clone()).collect();
            let lambda: Vec<Rational> = active.iter().map(|(_, l)| l.clone()).collect();
            let mut values = vec![Rational::zero(); n];
            for (v, l) in vertices.iter().zip(&lambda) {
                for (acc, x) in values.iter_mut().zip(v.values()) {
                    *acc += l * x;
                }
            }
            (active, iterations, lambda, vertices, Density::new(values)?)
        }
    };

    let x = combination(w.len(), &active);
    let distance_squared = weighted(&w, &x, &x);
    let mu2_values: Vec<Rational> = x.iter().zip(tau.values()).map(|(a, t)| a + t).collect();
    let mu2_star = PairMoments::new(m, mu2_values)?;
    let rho_star = CorrelationSpec::new(
        m,
        pair_list
            .iter()
            .map(|&(i, j)| {
                correlation_of_moment(class, i, j, mu2_star.get(i, j))
                    .value()
                    .clone()
            })
            .collect(),
    )?;
    let exact = pair_list
        .iter()
        .all(|&(i, j)| class.pair_scale(i, j).is_exact());
    Ok(ProjectionResult {
        rho_star,
        mu2_star,
        distance: distance_squared.to_f64().unwrap_or(f64::NAN).sqrt(),
        distance_squared,
        exact,
        lambda,
        vertices,
        density,
        iterations,
    })
}

/// Attainable correlation vector nearest to `rho` in Euclidean distance.
/// A target that is already attainable is returned unchanged.
pub fn nearest_feasible_correlation(
    class: &FrechetClass,
    rho: &CorrelationSpec,
    source: ProjectionSource<'_>,
) -> Result<ProjectionResult> {
    let tau = mu2_from_rho(class, rho)?;
    let mut result = nearest_feasible_moments(class, &tau, source)?;
    if result.distance_squared.is_zero() {
        result.rho_star = rho.clone();
    }
    Ok(result)
}
