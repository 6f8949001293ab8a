//! Exact rational simplex for `min c·x  s.t.  A x = b, x >= 0`.
//!
//! Two phases over a dense tableau with explicit artificial variables and
//! Bland's rule for both the entering and the leaving variable. When phase 1
//! ends with a positive artificial sum the phase-1 duals give a Farkas
//! certificate, which is checked before it is returned.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, Matrix, Rational};

/// `y` with `yᵀA >= 0` componentwise and `yᵀb < 0`, proving that
/// `A x = b, x >= 0` has no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub y: Vec<Rational>,
}

impl FarkasCertificate {
    pub fn verify(&self, a: &Matrix, b: &[Rational]) -> bool {
        if self.y.len() != a.rows() || b.len() != a.rows() {
            return false;
        }
        let combined = a.transpose().mul_vec(&self.y);
        combined.iter().all(|v| !v.is_negative()) && dot(&self.y, b).is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible {
        certificate: FarkasCertificate,
        pivots: usize,
    },
    Unbounded {
        pivots: usize,
    },
}

struct Tableau {
    /// Structural columns first, then one artificial per original row.
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    n: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, k: usize) {
        let inv = self.rows[r][k].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][k].is_zero() {
                continue;
            }
            let factor = self.rows[i][k].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = k;
        self.pivots += 1;
    }

    /// `c_j - Σ_r c_{B_r} T[r, j]` over the structural columns.
    fn reduced_costs(&self, cost: &dyn Fn(usize) -> Rational) -> Vec<Rational> {
        let basic: Vec<Rational> = self.basis.iter().map(|&b| cost(b)).collect();
        (0..self.n)
            .map(|j| {
                let mut d = cost(j);
                for (row, cb) in self.rows.iter().zip(&basic) {
                    if !cb.is_zero() && !row[j].is_zero() {
                        d -= cb * &row[j];
                    }
                }
                d
            })
            .collect()
    }

    /// Runs Bland's rule to optimality; `false` if unbounded.
    fn optimize(&mut self, cost: &dyn Fn(usize) -> Rational) -> bool {
        loop {
            let reduced = self.reduced_costs(cost);
            let Some(k) = reduced.iter().position(Signed::is_negative) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[k].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &row[k];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, k);
        }
    }
}

/// Solves `min c·x` subject to `A x = b`, `x >= 0`.
pub fn solve(a: &Matrix, b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }

    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rational> = a.row(i).to_vec();
        let mut bi = b[i].clone();
        if signs[i] {
            row.iter_mut().for_each(|v| *v = -v.clone());
            bi = -bi;
        }
        row.extend((0..m).map(|k| {
            if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        rows.push(row);
        rhs.push(bi);
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        n,
        pivots: 0,
    };

    let phase1 = |j: usize| {
        if j >= n {
            Rational::from_integer(1.into())
        } else {
            Rational::zero()
        }
    };
    t.optimize(&phase1);
    let infeasibility: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, v)| v.clone())
        .sum();

    if infeasibility.is_positive() {
        // Artificial columns hold B^{-1} of the sign-adjusted system.
        let y: Vec<Rational> = (0..m)
            .map(|i| {
                t.rows
                    .iter()
                    .zip(&t.basis)
                    .filter(|(_, &bv)| bv >= n)
                    .map(|(row, _)| row[n + i].clone())
                    .sum::<Rational>()
            })
            .collect();
        let certificate = FarkasCertificate {
            y: y.into_iter()
                .zip(&signs)
                .map(|(yi, &flipped)| if flipped { yi } else { -yi })
                .collect(),
        };
        if !certificate.verify(a, b) {
            return Err(Error::Numerical(
                "phase-1 duals failed the Farkas check".into(),
            ));
        }
        return Ok(LpOutcome::Infeasible {
            certificate,
            pivots: t.pivots,
        });
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(k) = (0..n).find(|&k| !t.rows[r][k].is_zero()) {
                t.pivot(r, k);
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    let phase2 = |j: usize| {
        if j < n {
            c[j].clone()
        } else {
            Rational::zero()
        }
    };
    if !t.optimize(&phase2) {
        return Ok(LpOutcome::Unbounded { pivots: t.pivots });
    }
    let mut x = vec![Rational::zero(); n];
    for (bv, v) in t.basis.iter().zip(&t.rhs) {
        x[*bv] = v.clone();
    }
    debug_assert_eq!(a.mul_vec(&x), b, "basic solution violates A x = b");
    let objective = dot(c, &x);
    Ok(LpOutcome::Optimal(LpSolution {
        x,
        objective,
        pivots: t.pivots,
    }))
}

/// Any point of `{A x = b, x >= 0}`, or a certificate that there is none.
pub fn find_feasible(a: &Matrix, b: &[Rational]) -> Result<LpOutcome> {
    solve(a, b, &vec![Rational::zero(); a.cols()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x0 - x1 s.t. x0 + 2 x1 + s0 = 4, 3 x0 + x1 + s1 = 6.
        let a = Matrix::from_i64(2, 4, &[1, 2, 1, 0, 3, 1, 0, 1]);
        let out = solve(&a, &ints(&[4, 6]), &ints(&[-1, -1, 0, 0])).unwrap();
        let LpOutcome::Optimal(sol) = out else {
            panic!("{out:?}")
        };
        assert_eq!(sol.objective, ratio(-14, 5));
        assert_eq!(&sol.x[..2], &[ratio(8, 5), ratio(6, 5)]);
    }

    #[test]
    fn infeasible_with_certificate() {
        // x0 + x1 = 1 and x0 + x1 = 2.
        let a = Matrix::from_i64(2, 2, &[1, 1, 1, 1]);
        let b = ints(&[1, 2]);
        let LpOutcome::Infeasible { certificate, .. } = find_feasible(&a, &b).unwrap() else {
            panic!()
        };
        assert!(certificate.verify(&a, &b));
    }

    #[test]
    fn negative_rhs_infeasible() {
        // x0 - x1 = -1 with x1 = 0 forced by x1 = 0 row.
        let a = Matrix::from_i64(2, 2, &[1, -1, 0, 1]);
        let b = ints(&[-1, 0]);
        let out = find_feasible(&a, &b).unwrap();
        let LpOutcome::Infeasible { certificate, .. } = out else {
            panic!("{out:?}")
        };
        assert!(certificate.verify(&a, &b));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = Matrix::from_i64(3, 3, &[1, 1, 1, 2, 2, 2, 1, 0, 0]);
        let b = vec![int(1), int(2), ratio(1, 3)];
        let LpOutcome::Optimal(sol) = solve(&a, &b, &ints(&[0, 1, 2])).unwrap() else {
            panic!()
        };
        assert_eq!(sol.x, vec![ratio(1, 3), ratio(2, 3), int(0)]);
        assert_eq!(sol.objective, ratio(2, 3));
    }

    #[test]
    fn unbounded() {
        let a = Matrix::from_i64(1, 2, &[1, -1]);
        let out = solve(&a, &ints(&[0]), &ints(&[-1, 0])).unwrap();
        assert!(matches!(out, LpOutcome::Unbounded { .. }));
    }

    #[test]
    fn bad_certificate_is_rejected() {
        let a = Matrix::from_i64(1, 1, &[1]);
        let b = ints(&[1]);
        assert!(!FarkasCertificate { y: ints(&[1]) }.verify(&a, &b));
        assert!(!FarkasCertificate { y: ints(&[-1]) }.verify(&a, &ints(&[1])));
        assert!(FarkasCertificate { y: ints(&[1]) }.verify(&a, &ints(&[-1])));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example in equality form; cycles without an anti-cycling rule.
        let a = Matrix::from_rows(vec![
            vec![
                ratio(1, 4),
                int(-60),
                ratio(-1, 25),
                int(9),
                int(1),
                int(0),
                int(0),
            ],
            vec![
                ratio(1, 2),
                int(-90),
                ratio(-1, 50),
                int(3),
                int(0),
                int(1),
                int(0),
            ],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ]);
        let b = ints(&[0, 0, 1]);
        let c = vec![
            ratio(-3, 4),
            int(150),
            ratio(-1, 50),
            int(6),
            int(0),
            int(0),
            int(0),
        ];
        let LpOutcome::Optimal(sol) = solve(&a, &b, &c).unwrap() else {
            panic!()
        };
        assert_eq!(sol.objective, ratio(-1, 20));
    }
}
