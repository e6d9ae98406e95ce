//! Feasibility of `A x = b, x ≥ 0` by the phase-one simplex method.
//!
//! The entering column has the most negative reduced cost until a run of
//! degenerate pivots appears; from then on Bland's rule applies, so the
//! method terminates on degenerate systems. With an exact scalar the answer is exact: either a vertex of the
//! feasible polytope, or a Farkas vector `y` with `Aᵀy ≥ 0` and `bᵀy < 0`
//! read off the final phase-one duals.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense equality system `A x = b` over nonnegative `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualitySystem<T> {
    pub matrix: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> EqualitySystem<T> {
    pub fn new(matrix: Vec<Vec<T>>, rhs: Vec<T>) -> Result<Self> {
        if matrix.len() != rhs.len() {
            return Err(Error::Domain(format!(
                "{} rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        if let Some(first) = matrix.first() {
            if matrix.iter().any(|r| r.len() != first.len()) {
                return Err(Error::Domain("ragged constraint matrix".into()));
            }
        }
        Ok(Self { matrix, rhs })
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// Largest violation of `A x = b`, or of `x ≥ 0`.
    pub fn residual(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (row, b) in self.matrix.iter().zip(&self.rhs) {
            let lhs: T = row
                .iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, v)| a.clone() * v.clone())
                .sum();
            let d = (lhs - b.clone()).abs();
            if d > worst {
                worst = d;
            }
        }
        for v in x {
            if *v < T::zero() && -v.clone() > worst {
                worst = -v.clone();
            }
        }
        worst
    }
}

/// Infeasibility proof: `Aᵀy ≥ 0` componentwise and `bᵀy < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate<T> {
    pub multipliers: Vec<T>,
}

impl<T: Scalar> FarkasCertificate<T> {
    /// Mechanical check against a system. For inexact scalars the
    /// inequalities are checked up to the scalar's tolerance.
    pub fn verify(&self, system: &EqualitySystem<T>) -> bool {
        if self.multipliers.len() != system.n_rows() {
            return false;
        }
        let columns_ok = (0..system.n_cols()).all(|j| {
            let s: T = system
                .matrix
                .iter()
                .zip(&self.multipliers)
                .map(|(row, y)| row[j].clone() * y.clone())
                .sum();
            !s.is_significant_negative()
        });
        let value = self.objective(system);
        columns_ok && value.is_significant_negative()
    }

    /// `bᵀy`
    pub fn objective(&self, system: &EqualitySystem<T>) -> T {
        system
            .rhs
            .iter()
            .zip(&self.multipliers)
            .map(|(b, y)| b.clone() * y.clone())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility<T> {
    /// A basic feasible solution.
    Feasible(Vec<T>),
    Infeasible(FarkasCertificate<T>),
}

/// Runs phase one on `system`.
pub fn solve<T: Scalar>(system: &EqualitySystem<T>) -> Result<Feasibility<T>> {
    let m = system.n_rows();
    let n = system.n_cols();
    if m == 0 {
        return Ok(Feasibility::Feasible(vec![T::zero(); n]));
    }
    let width = n + m;

    // Rows with a negative right-hand side are negated so the artificial
    // basis starts feasible.
    let signs: Vec<bool> = system.rhs.iter().map(|b| *b < T::zero()).collect();
    let mut tableau: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    for (i, (row, b)) in system.matrix.iter().zip(&system.rhs).enumerate() {
        let mut t = Vec::with_capacity(width);
        if signs[i] {
            t.extend(row.iter().map(|a| -a.clone()));
            rhs.push(-b.clone());
        } else {
            t.extend(row.iter().cloned());
            rhs.push(b.clone());
        }
        t.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs of the phase-one objective (sum of artificials) and the
    // negated objective value.
    let mut cost = vec![T::zero(); width];
    for j in 0..n {
        cost[j] = -tableau.iter().map(|r| r[j].clone()).sum::<T>();
    }
    let mut neg_value = -rhs.iter().cloned().sum::<T>();

    let mut bland = false;
    let mut degenerate_run = 0;
    loop {
        let candidates = (0..width).filter(|&j| cost[j].is_significant_negative());
        let enter = if bland {
            candidates.min()
        } else {
            candidates.min_by(|&a, &b| cost[a].partial_cmp(&cost[b]).unwrap_or(std::cmp::Ordering::Equal))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            let a = &tableau[i][enter];
            if !a.is_significant_positive() {
                continue;
            }
            let ratio = rhs[i].clone() / a.clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        let Some((row, step)) = leave else {
            // The phase-one objective is bounded below by zero.
            return Err(Error::Internal("phase-one simplex became unbounded".into()));
        };
        // Only degenerate pivots can cycle; non-degenerate ones strictly
        // lower the objective.
        if step.is_negligible() {
            degenerate_run += 1;
            bland |= degenerate_run > m;
        } else {
            degenerate_run = 0;
        }
        pivot(&mut tableau, &mut rhs, &mut cost, &mut neg_value, row, enter);
        basis[row] = enter;
    }

    let value = -neg_value;
    if value.is_significant_positive() {
        // y_k = 1 - d_k over the artificial columns; -y certifies the
        // normalized system, and undoing the row negations gives the
        // certificate for the original one.
        let multipliers = (0..m)
            .map(|k| {
                let y = T::one() - cost[n + k].clone();
                if signs[k] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        return Ok(Feasibility::Infeasible(FarkasCertificate { multipliers }));
    }

    let mut x = vec![T::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = rhs[i].clone();
        }
    }
    Ok(Feasibility::Feasible(x))
}

fn pivot<T: Scalar>(
    tableau: &mut [Vec<T>],
    rhs: &mut [T],
    cost: &mut [T],
    neg_value: &mut T,
    row: usize,
    col: usize,
) {
    let p = tableau[row][col].clone();
    for a in tableau[row].iter_mut() {
        if !a.is_zero() {
            *a = a.clone() / p.clone();
        }
    }
    rhs[row] = rhs[row].clone() / p;
    let support: Vec<usize> = tableau[row]
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(j, _)| j)
        .collect();
    let pivot_row = tableau[row].clone();
    let pivot_rhs = rhs[row].clone();

    let eliminate = |target: &mut [T], target_rhs: &mut T| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for &j in &support {
            target[j].sub_mul_assign(&factor, &pivot_row[j]);
        }
        target_rhs.sub_mul_assign(&factor, &pivot_rhs);
        // keep the entering column an exact unit vector under floats
        target[col] = T::zero();
    };
    for (i, (t, b)) in tableau.iter_mut().zip(rhs.iter_mut()).enumerate() {
        if i != row {
            eliminate(t, b);
        }
    }
    eliminate(cost, neg_value);
}
