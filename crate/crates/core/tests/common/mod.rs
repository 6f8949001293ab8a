//! Reference oracles shared by the integration tests. Nothing here calls into
//! the solvers it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use frechet_core::exact::{ratio, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// `x_i` of support index `j` (bit `i` of `j`).
pub fn bit(j: usize, i: usize) -> bool {
    (j >> i) & 1 == 1
}

pub fn pair_list(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

pub fn margins_of(f: &[Rational], m: usize) -> Vec<Rational> {
    (0..m)
        .map(|i| {
            (0..f.len())
                .filter(|&j| bit(j, i))
                .map(|j| f[j].clone())
                .sum()
        })
        .collect()
}

pub fn pair_moments_of(f: &[Rational], m: usize) -> Vec<Rational> {
    pair_list(m)
        .into_iter()
        .map(|(a, b)| {
            (0..f.len())
                .filter(|&j| bit(j, a) && bit(j, b))
                .map(|j| f[j].clone())
                .sum()
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let lead = rows[top][c].clone();
        for v in rows[top].iter_mut() {
            *v /= &lead;
        }
        for k in 0..rows.len() {
            if k != top && !rows[k][c].is_zero() {
                let factor = rows[k][c].clone();
                let pivot = rows[top].clone();
                for (v, pv) in rows[k].iter_mut().zip(&pivot) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Unique solution of a square system, if the matrix is nonsingular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain([v.clone()]).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for c in start..=n - (k - cur.len()) {
            cur.push(c);
            go(c + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Vertices of `{x >= 0 : A x = b}` by enumerating every basis and keeping
/// the nonnegative basic solutions. `None` when the system is inconsistent.
pub fn bfs_vertices(a: &[Vec<Rational>], b: &[Rational]) -> Option<BTreeSet<Vec<Rational>>> {
    let n = a[0].len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain([v.clone()]).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let k = pivots.len();
    let reduced: Vec<Vec<Rational>> = aug.iter().map(|row| row[..n].to_vec()).collect();
    let rhs: Vec<Rational> = aug.iter().map(|row| row[n].clone()).collect();
    let mut out = BTreeSet::new();
    combinations(n, k, &mut |cols| {
        let sub: Vec<Vec<Rational>> = reduced
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if let Some(x) = solve_square(&sub, &rhs) {
            if x.iter().all(|v| !v.is_negative()) {
                let mut full = vec![Rational::zero(); n];
                for (&c, v) in cols.iter().zip(x) {
                    full[c] = v;
                }
                out.insert(full);
            }
        }
    });
    Some(out)
}

/// Rows `1ᵀ f = 1` and `Σ_x x_i f(x) = p_i`.
pub fn class_system(p: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let m = p.len();
    let n = 1 << m;
    let mut a = vec![vec![Rational::one(); n]];
    let mut b = vec![Rational::one()];
    for (i, pi) in p.iter().enumerate() {
        a.push(
            (0..n)
                .map(|j| {
                    if bit(j, i) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        b.push(pi.clone());
    }
    (a, b)
}

/// Class system plus the pair-moment rows `Σ_x x_i x_j f(x) = μ_ij`.
pub fn moment_system(p: &[Rational], mu2: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let m = p.len();
    let (mut a, mut b) = class_system(p);
    for ((i, j), mu) in pair_list(m).into_iter().zip(mu2) {
        a.push(
            (0..1 << m)
                .map(|x| {
                    if bit(x, i) && bit(x, j) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        b.push(mu.clone());
    }
    (a, b)
}

/// Vertices of the class polytope (the normalized extreme rays).
pub fn class_vertices(p: &[Rational]) -> BTreeSet<Vec<Rational>> {
    let (a, b) = class_system(p);
    bfs_vertices(&a, &b).expect("class systems are consistent")
}

/// Bivariate Fréchet-Hoeffding lower and upper densities, canonical order.
pub fn frechet_pair(p1: &Rational, p2: &Rational) -> (Vec<Rational>, Vec<Rational>) {
    let build = |f11: Rational| {
        let f10 = p1 - &f11;
        let f01 = p2 - &f11;
        let f00 = Rational::one() - &f11 - &f10 - &f01;
        vec![f00, f10, f01, f11]
    };
    let lo = (p1 + p2 - Rational::one()).max(Rational::zero());
    (build(lo), build(p1.clone().min(p2.clone())))
}

/// `Σ_{|α| >= 3} μ_α`: each point contributes once per subset of its ones of
/// size at least three.
pub fn higher_moment_mass(f: &[Rational]) -> Rational {
    f.iter()
        .enumerate()
        .map(|(x, v)| {
            let k = x.count_ones() as u64;
            let lower = 1 + k + k * k.saturating_sub(1) / 2;
            v * Rational::from_integer((2u64.pow(k as u32).saturating_sub(lower)).into())
        })
        .sum()
}

pub fn random_margin(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(2..=12);
    r(rng.gen_range(1..d), d)
}

pub fn random_margins(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| random_margin(rng)).collect()
}

/// Random simplex weights with small denominators, at least one positive.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = loop {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..6)).collect();
        if raw.iter().any(|&v| v > 0) {
            break raw;
        }
    };
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|v| r(v, total)).collect()
}

pub fn combine(columns: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); columns[0].len()];
    for (col, wk) in columns.iter().zip(w) {
        for (acc, v) in out.iter_mut().zip(col) {
            *acc += wk * v;
        }
    }
    out
}

/// Outcome of matching a printed density against its targets under every
/// relabeling of the support by a coordinate permutation combined with a
/// complement mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    /// Entries nonnegative and total within tolerance.
    pub valid: bool,
    /// Some bijection matches margins and every labeled pair moment.
    pub labeled: bool,
    /// Some bijection matches margins and the pair moments as a multiset.
    pub unlabeled: bool,
}

impl Witness {
    pub fn passes(&self) -> bool {
        self.valid && (self.labeled || self.unlabeled)
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out
}

pub fn witness_check(f: &[f64], p: &[f64], mu_targets: &[f64], tol: f64) -> Witness {
    let m = p.len();
    let n = 1 << m;
    assert_eq!(f.len(), n);
    let total: f64 = f.iter().sum();
    let valid = f.iter().all(|&v| v >= 0.0) && (total - 1.0).abs() <= tol;
    let pairs = pair_list(m);
    let mut sorted_targets = mu_targets.to_vec();
    sorted_targets.sort_by(f64::total_cmp);
    let mut labeled = false;
    let mut unlabeled = false;
    for perm in permutations(m) {
        for mask in 0..n {
            let mut g = vec![0.0; n];
            for (k, v) in f.iter().enumerate() {
                let flipped = k ^ mask;
                let target: usize = (0..m)
                    .filter(|&i| bit(flipped, perm[i]))
                    .map(|i| 1 << i)
                    .sum();
                g[target] += v;
            }
            let margins_ok = (0..m).all(|i| {
                let mi: f64 = (0..n).filter(|&j| bit(j, i)).map(|j| g[j]).sum();
                (mi - p[i]).abs() <= tol
            });
            if !margins_ok {
                continue;
            }
            let mu: Vec<f64> = pairs
                .iter()
                .map(|&(a, b)| {
                    (0..n)
                        .filter(|&j| bit(j, a) && bit(j, b))
                        .map(|j| g[j])
                        .sum()
                })
                .collect();
            if mu.iter().zip(mu_targets).all(|(x, t)| (x - t).abs() <= tol) {
                labeled = true;
            }
            let mut sorted = mu.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted
                .iter()
                .zip(&sorted_targets)
                .all(|(x, t)| (x - t).abs() <= tol)
            {
                unlabeled = true;
            }
        }
    }
    Witness {
        valid,
        labeled,
        unlabeled,
    }
}

/// `μ_ij = p_i p_j + ρ_ij √(p_i q_i p_j q_j)` in floating point.
pub fn moments_from_rho(p: &[f64], rho: &[f64]) -> Vec<f64> {
    pair_list(p.len())
        .into_iter()
        .zip(rho)
        .map(|((i, j), r)| p[i] * p[j] + r * (p[i] * (1.0 - p[i]) * p[j] * (1.0 - p[j])).sqrt())
        .collect()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Minimizes `|Σ λ_k P_k - t|²` over the simplex: a full grid with `steps`
/// subdivisions, then pairwise mass transfers with a halving step.
pub fn grid_projection(points: &[Vec<f64>], target: &[f64], steps: usize) -> (Vec<f64>, f64) {
    let k = points.len();
    let eval = |w: &[f64]| {
        let x: Vec<f64> = (0..target.len())
            .map(|d| points.iter().zip(w).map(|(p, wk)| p[d] * wk).sum())
            .collect();
        let d = dist2(&x, target);
        (x, d)
    };
    let mut best_w = vec![0.0; k];
    let mut best = f64::INFINITY;
    let mut counts = vec![0usize; k];
    fn grid(slot: usize, left: usize, counts: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if slot + 1 == counts.len() {
            counts[slot] = left;
            visit(counts);
            return;
        }
        for c in 0..=left {
            counts[slot] = c;
            grid(slot + 1, left - c, counts, visit);
        }
    }
    grid(0, steps, &mut counts, &mut |c| {
        let w: Vec<f64> = c.iter().map(|&v| v as f64 / steps as f64).collect();
        let (_, d) = eval(&w);
        if d < best {
            best = d;
            best_w = w;
        }
    });
    let mut step = 1.0 / steps as f64;
    while step > 1e-13 {
        let mut improved = false;
        for a in 0..k {
            for b in 0..k {
                if a == b || best_w[a] <= 0.0 {
                    continue;
                }
                let delta = step.min(best_w[a]);
                let mut w = best_w.clone();
                w[a] -= delta;
                w[b] += delta;
                let (_, d) = eval(&w);
                if d < best {
                    best = d;
                    best_w = w;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    let (x, d) = eval(&best_w);
    (x, d)
}

/// Exact projection of `t` onto the convex hull of `points` under the
/// diagonal metric `w`: the best affine projection over every subset of at
/// most `dim + 1` points whose barycentric weights come out nonnegative.
pub fn face_projection(
    points: &[Vec<Rational>],
    target: &[Rational],
    w: &[Rational],
) -> (Vec<Rational>, Rational) {
    let dim = target.len();
    let mut best: Option<(Vec<Rational>, Rational)> = None;
    for size in 1..=(dim + 1).min(points.len()) {
        combinations(points.len(), size, &mut |idx| {
            let p0 = &points[idx[0]];
            let dirs: Vec<Vec<Rational>> = idx[1..]
                .iter()
                .map(|&k| points[k].iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            let wdot = |a: &[Rational], b: &[Rational]| -> Rational {
                a.iter().zip(b).zip(w).map(|((x, y), wk)| x * y * wk).sum()
            };
            let resid: Vec<Rational> = target.iter().zip(p0).map(|(a, b)| a - b).collect();
            let gram: Vec<Vec<Rational>> = dirs
                .iter()
                .map(|u| dirs.iter().map(|v| wdot(u, v)).collect())
                .collect();
            let rhs: Vec<Rational> = dirs.iter().map(|u| wdot(u, &resid)).collect();
            let alpha = if dirs.is_empty() {
                Vec::new()
            } else {
                match solve_square(&gram, &rhs) {
                    Some(a) => a,
                    None => return,
                }
            };
            let lead = Rational::one() - alpha.iter().sum::<Rational>();
            if lead.is_negative() || alpha.iter().any(Signed::is_negative) {
                return;
            }
            let mut x = p0.clone();
            for (a, u) in alpha.iter().zip(&dirs) {
                for (xk, uk) in x.iter_mut().zip(u) {
                    *xk += a * uk;
                }
            }
            let diff: Vec<Rational> = x.iter().zip(target).map(|(a, b)| a - b).collect();
            let d = wdot(&diff, &diff);
            if best.as_ref().is_none_or(|(_, bd)| &d < bd) {
                best = Some((x, d));
            }
        });
    }
    best.expect("a single point is always a candidate")
}
