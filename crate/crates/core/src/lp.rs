//! Phase-one revised simplex for small dense feasibility problems
//! `A x = b, x >= 0` with `b >= 0`.
//!
//! Columns are supplied lazily through [`Columns`], so the column count can be
//! large (every stable set of a graph) while the basis stays `rows x rows`.
//! Pivoting follows Bland's rule: the lowest-index improving column enters and
//! ratio-test ties leave by lowest variable index, which makes every run
//! deterministic and rules out cycling.

use crate::error::{invalid, Error, Result};

const PRICE_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-11;
const TIE_TOL: f64 = 1e-12;
/// Phase one stops once the artificial mass drops below this.
const ZERO_OBJECTIVE: f64 = 1e-14;
const MAX_ITERATIONS: usize = 100_000;

/// Column oracle for the constraint matrix.
pub trait Columns {
    fn rows(&self) -> usize;
    fn count(&self) -> usize;
    /// Writes column `k` into `out` (length `rows()`).
    fn column(&self, k: usize, out: &mut [f64]);
    /// Inner product of column `k` with `y`.
    fn dot(&self, k: usize, y: &[f64]) -> f64;
}

/// Dense column-major matrix, handy for tests and small callers.
#[derive(Clone, Debug)]
pub struct DenseColumns {
    rows: usize,
    cols: Vec<Vec<f64>>,
}

impl DenseColumns {
    pub fn new(rows: usize, cols: Vec<Vec<f64>>) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(invalid("every column must have one entry per row"));
        }
        Ok(Self { rows, cols })
    }
}

impl Columns for DenseColumns {
    fn rows(&self) -> usize {
        self.rows
    }
    fn count(&self) -> usize {
        self.cols.len()
    }
    fn column(&self, k: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.cols[k]);
    }
    fn dot(&self, k: usize, y: &[f64]) -> f64 {
        self.cols[k].iter().zip(y).map(|(a, b)| a * b).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    /// Nonzero basic structural variables as `(column, value)`, ascending by column.
    Feasible {
        solution: Vec<(usize, f64)>,
        artificial_mass: f64,
    },
    /// Phase one stalled with positive artificial mass.
    Infeasible { artificial_mass: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    Column(usize),
    Artificial(usize),
}

/// Searches for `x >= 0` with `A x = b`.
///
/// `accept` bounds the final artificial mass (sum of artificial values) that
/// still counts as feasible.
pub fn find_feasible<C: Columns>(cols: &C, b: &[f64], accept: f64) -> Result<Feasibility> {
    let m = cols.rows();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if b.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid("right-hand side must be finite and nonnegative"));
    }

    let mut binv = vec![0.0; m * m];
    for i in 0..m {
        binv[i * m + i] = 1.0;
    }
    let mut basis: Vec<Var> = (0..m).map(Var::Artificial).collect();
    let mut x: Vec<f64> = b.to_vec();
    let mut y = vec![0.0; m];
    let mut col = vec![0.0; m];
    let mut dir = vec![0.0; m];

    for _ in 0..MAX_ITERATIONS {
        let objective: f64 = basis
            .iter()
            .zip(&x)
            .filter(|(v, _)| matches!(v, Var::Artificial(_)))
            .map(|(_, xi)| xi)
            .sum();
        if objective <= ZERO_OBJECTIVE {
            break;
        }

        // Duals of the phase-one cost: y = c_B^T B^-1.
        y.iter_mut().for_each(|v| *v = 0.0);
        for (r, var) in basis.iter().enumerate() {
            if matches!(var, Var::Artificial(_)) {
                for (j, yj) in y.iter_mut().enumerate() {
                    *yj += binv[r * m + j];
                }
            }
        }

        // Reduced cost of a structural column is -y.a_k.
        let Some(entering) = (0..cols.count()).find(|&k| -cols.dot(k, &y) < -PRICE_TOL) else {
            break;
        };

        cols.column(entering, &mut col);
        for r in 0..m {
            dir[r] = (0..m).map(|j| binv[r * m + j] * col[j]).sum();
        }

        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            if dir[r] > PIVOT_TOL {
                let ratio = x[r] / dir[r];
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - TIE_TOL
                            || (ratio <= best_ratio + TIE_TOL && basis[r] < basis[best])
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = leave else {
            // Phase one is bounded below by zero, so this only happens through
            // accumulated rounding.
            return Err(Error::NumericalDegeneracy {
                residual: objective,
            });
        };

        let pivot = dir[r];
        for j in 0..m {
            binv[r * m + j] /= pivot;
        }
        x[r] /= pivot;
        for i in 0..m {
            if i != r && dir[i] != 0.0 {
                let factor = dir[i];
                for j in 0..m {
                    binv[i * m + j] -= factor * binv[r * m + j];
                }
                x[i] -= factor * x[r];
            }
        }
        basis[r] = Var::Column(entering);
    }

    // Recompute the basic solution from B^-1 rather than trusting the
    // incrementally updated values.
    for r in 0..m {
        x[r] = (0..m).map(|j| binv[r * m + j] * b[j]).sum();
    }
    let artificial_mass: f64 = basis
        .iter()
        .zip(&x)
        .filter(|(v, _)| matches!(v, Var::Artificial(_)))
        .map(|(_, xi)| xi.abs())
        .sum();
    if artificial_mass > accept {
        return Ok(Feasibility::Infeasible { artificial_mass });
    }
    let mut solution: Vec<(usize, f64)> = basis
        .iter()
        .zip(&x)
        .filter_map(|(v, &xi)| match v {
            Var::Column(k) if xi > 0.0 => Some((*k, xi)),
            _ => None,
        })
        .collect();
    solution.sort_by_key(|&(k, _)| k);
    Ok(Feasibility::Feasible {
        solution,
        artificial_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(cols: &DenseColumns, b: &[f64], sol: &[(usize, f64)]) -> f64 {
        let mut ax = vec![0.0; b.len()];
        for &(k, v) in sol {
            for (i, a) in cols.cols[k].iter().enumerate() {
                ax[i] += a * v;
            }
        }
        ax.iter()
            .zip(b)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn finds_convex_combination() {
        // Columns (0,0,1), (1,0,1), (0,1,1): target (0.3, 0.5, 1).
        let cols = DenseColumns::new(
            3,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        let b = [0.3, 0.5, 1.0];
        match find_feasible(&cols, &b, 1e-9).unwrap() {
            Feasibility::Feasible { solution, .. } => {
                assert!(residual(&cols, &b, &solution) < 1e-12);
                assert!(solution.iter().all(|&(_, v)| v >= 0.0));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // Same columns, target (0.6, 0.6, 1) needs the coordinates to sum to <= 1.
        let cols = DenseColumns::new(
            3,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        match find_feasible(&cols, &[0.6, 0.6, 1.0], 1e-9).unwrap() {
            Feasibility::Infeasible { artificial_mass } => {
                assert!((artificial_mass - 0.2).abs() < 1e-12)
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_zero_rhs() {
        let cols = DenseColumns::new(2, vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        match find_feasible(&cols, &[0.0, 1.0], 1e-9).unwrap() {
            Feasibility::Feasible { solution, .. } => assert_eq!(solution, vec![(1, 1.0)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_rhs() {
        let cols = DenseColumns::new(1, vec![vec![1.0]]).unwrap();
        assert!(find_feasible(&cols, &[-1.0], 1e-9).is_err());
        assert!(find_feasible(&cols, &[1.0, 2.0], 1e-9).is_err());
    }
}
