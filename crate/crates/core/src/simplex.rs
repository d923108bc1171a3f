//! A small dense two-phase simplex solver for equality-constrained linear
//! programs in standard form:
//!
//! ```text
//! minimize   c · x
//! subject to A x = b,  x >= 0
//! ```
//!
//! Bland's rule makes every pivot choice deterministic and rules out
//! cycling, which matters here because the moment polytopes this crate
//! optimizes over are highly degenerate (many vertices sit on far more
//! facets than the dimension).

use crate::error::{Error, Result};
use crate::tolerance;

/// Entries smaller than this are unusable as pivots.
const PIVOT_EPS: f64 = 1e-10;

/// Outcome of an LP solve.
#[derive(Clone, Debug)]
pub(crate) enum LpSolution {
    /// Optimum found: objective value and a point attaining it.
    Optimal { value: f64, x: Vec<f64> },
    /// The constraint set is empty.
    Infeasible,
}

struct Tableau {
    /// One row per constraint: `n` structural columns, `m` artificial
    /// columns, then the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Objective row in the same column layout (rhs = negated objective).
    obj: Vec<f64>,
    /// Basis column of each row.
    basis: Vec<usize>,
    n: usize,
    m: usize,
}

impl Tableau {
    fn new(a: &[Vec<f64>], b: &[f64]) -> Tableau {
        let m = a.len();
        let n = if m == 0 { 0 } else { a[0].len() };
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, row) in a.iter().enumerate() {
            let mut r = vec![0.0; width];
            let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for (j, &v) in row.iter().enumerate() {
                r[j] = flip * v;
            }
            r[n + i] = 1.0;
            r[width - 1] = flip * b[i];
            rows.push(r);
        }
        // Phase-1 objective: minimize the sum of artificials. Expressed in
        // terms of the current (artificial) basis, the reduced-cost row is
        // the negated column sums of the constraint rows.
        let mut obj = vec![0.0; width];
        for r in &rows {
            for j in 0..n {
                obj[j] -= r[j];
            }
            obj[width - 1] -= r[width - 1];
        }
        let basis = (n..n + m).collect();
        Tableau { rows, obj, basis, n, m }
    }

    fn rhs_col(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.rhs_col() + 1;
        let scale = self.rows[row][col];
        for j in 0..width {
            self.rows[row][j] /= scale;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..width {
                self.rows[i][j] -= factor * self.rows[row][j];
            }
        }
        let factor = self.obj[col];
        if factor != 0.0 {
            for j in 0..width {
                self.obj[j] -= factor * self.rows[row][j];
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations with Bland's rule until no reduced cost is
    /// negative. `cols` limits the entering-column scan (phase 2 must not
    /// re-enter artificial columns).
    fn optimize(&mut self, cols: usize) -> Result<()> {
        loop {
            // Bland: entering column = lowest index with negative reduced cost.
            let entering = (0..cols).find(|&j| self.obj[j] < -PIVOT_EPS);
            let Some(col) = entering else {
                return Ok(());
            };
            // Ratio test; ties broken by lowest basis index (Bland).
            let rhs = self.rhs_col();
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let coeff = self.rows[i][col];
                if coeff > PIVOT_EPS {
                    let ratio = self.rows[i][rhs] / coeff;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - PIVOT_EPS
                                || (ratio <= br + PIVOT_EPS && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = best else {
                return Err(Error::Internal(
                    "linear program is unbounded on a bounded polytope".into(),
                ));
            };
            self.pivot(row, col);
        }
    }

    /// Removes artificial variables from the basis after phase 1, pivoting
    /// them out where possible and dropping redundant rows otherwise.
    fn clean_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.n {
                i += 1;
                continue;
            }
            let col = (0..self.n).find(|&j| self.rows[i][j].abs() > PIVOT_EPS);
            match col {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    // Row is 0 = 0 within tolerance: redundant constraint.
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn extract(&self) -> Vec<f64> {
        let rhs = self.rhs_col();
        let mut x = vec![0.0; self.n];
        for (i, &col) in self.basis.iter().enumerate() {
            if col < self.n {
                x[col] = self.rows[i][rhs];
            }
        }
        x
    }
}

/// Solves `min c·x  s.t.  A x = b, x >= 0`.
pub(crate) fn minimize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    if a.len() != b.len() {
        return Err(Error::Internal(format!(
            "{} constraint rows with {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let n = c.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("ragged constraint matrix".into()));
    }

    let mut t = Tableau::new(a, b);
    // Phase 1: minimize artificial mass.
    t.optimize(t.n + t.m)?;
    let rhs = t.rhs_col();
    let phase1 = -t.obj[rhs];
    if phase1 > tolerance() {
        return Ok(LpSolution::Infeasible);
    }
    t.clean_artificials();

    // Phase 2: rebuild the objective row for c and re-optimize over the
    // structural columns only.
    let width = rhs + 1;
    t.obj = vec![0.0; width];
    t.obj[..n].copy_from_slice(c);
    for i in 0..t.rows.len() {
        let col = t.basis[i];
        let factor = t.obj[col];
        if factor != 0.0 {
            for j in 0..width {
                t.obj[j] -= factor * t.rows[i][j];
            }
        }
    }
    t.optimize(n)?;
    Ok(LpSolution::Optimal { value: -t.obj[rhs], x: t.extract() })
}

/// Solves `max c·x  s.t.  A x = b, x >= 0`.
pub(crate) fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    Ok(match minimize(a, b, &neg)? {
        LpSolution::Optimal { value, x } => LpSolution::Optimal { value: -value, x },
        LpSolution::Infeasible => LpSolution::Infeasible,
    })
}

/// Finds any feasible point of `A x = b, x >= 0`, or `None`.
pub(crate) fn feasible_point(a: &[Vec<f64>], b: &[f64]) -> Result<Option<Vec<f64>>> {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let zero = vec![0.0; n];
    Ok(match minimize(a, b, &zero)? {
        LpSolution::Optimal { x, .. } => Some(x),
        LpSolution::Infeasible => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::brute_force_lp;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn unwrap_value(s: LpSolution) -> f64 {
        match s {
            LpSolution::Optimal { value, .. } => value,
            LpSolution::Infeasible => panic!("expected a feasible program"),
        }
    }

    #[test]
    fn solves_a_textbook_program() {
        // min -x1 - 2 x2  s.t.  x1 + x2 + s = 4, x2 + t = 3 (slacks explicit)
        let a = vec![
            vec![1.0, 1.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
        ];
        let b = vec![4.0, 3.0];
        let c = vec![-1.0, -2.0, 0.0, 0.0];
        let v = unwrap_value(minimize(&a, &b, &c).unwrap());
        assert_abs_diff_eq!(v, -7.0, epsilon = 1e-9); // x = (1, 3)
    }

    #[test]
    fn detects_infeasible_program() {
        // x1 = 1 and x1 = 2 simultaneously
        let a = vec![vec![1.0], vec![1.0]];
        let b = vec![1.0, 2.0];
        let c = vec![0.0];
        assert!(matches!(
            minimize(&a, &b, &c).unwrap(),
            LpSolution::Infeasible
        ));
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // -x1 = -2  =>  x1 = 2
        let a = vec![vec![-1.0, 0.0], vec![0.0, 1.0]];
        let b = vec![-2.0, 1.0];
        let c = vec![1.0, 1.0];
        match minimize(&a, &b, &c).unwrap() {
            LpSolution::Optimal { value, x } => {
                assert_abs_diff_eq!(value, 3.0, epsilon = 1e-9);
                assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-9);
            }
            LpSolution::Infeasible => panic!("feasible program reported infeasible"),
        }
    }

    #[test]
    fn redundant_constraints_are_dropped() {
        let a = vec![
            vec![1.0, 1.0],
            vec![2.0, 2.0], // scalar multiple of the first row
        ];
        let b = vec![1.0, 2.0];
        let c = vec![1.0, 0.0];
        let v = unwrap_value(minimize(&a, &b, &c).unwrap());
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn maximize_negates_correctly() {
        let a = vec![vec![1.0, 1.0]];
        let b = vec![1.0];
        let c = vec![1.0, 0.0];
        let lo = unwrap_value(minimize(&a, &b, &c).unwrap());
        let hi = unwrap_value(maximize(&a, &b, &c).unwrap());
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn feasible_point_satisfies_constraints() {
        let a = vec![
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 0.0],
        ];
        let b = vec![1.0, 0.3];
        let x = feasible_point(&a, &b).unwrap().expect("feasible");
        for (row, &target) in a.iter().zip(&b) {
            let lhs: f64 = row.iter().zip(&x).map(|(r, v)| r * v).sum();
            assert_abs_diff_eq!(lhs, target, epsilon = 1e-9);
        }
        assert!(x.iter().all(|&v| v >= -1e-9));
    }

    #[test]
    fn matches_brute_force_on_random_moment_programs() {
        // Random probability-simplex programs over 3 binary variables with
        // two random moment constraints; compare against vertex enumeration.
        let mut rng = crate::sampling::rng(7);
        for _ in 0..60 {
            let n = 8usize;
            let mut a = vec![vec![1.0; n]];
            let mut b = vec![1.0];
            for _ in 0..2 {
                let row: Vec<f64> = (0..n)
                    .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
                    .collect();
                let coverage: f64 = row.iter().sum::<f64>() / n as f64;
                b.push(coverage * rng.random::<f64>());
                a.push(row);
            }
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let oracle = brute_force_lp(&a, &b, &c);
            match (minimize(&a, &b, &c).unwrap(), oracle) {
                (LpSolution::Optimal { value, x }, Some((lo, _hi))) => {
                    assert_abs_diff_eq!(value, lo, epsilon = 1e-7);
                    for (row, &target) in a.iter().zip(&b) {
                        let lhs: f64 = row.iter().zip(&x).map(|(r, v)| r * v).sum();
                        assert_abs_diff_eq!(lhs, target, epsilon = 1e-7);
                    }
                }
                (LpSolution::Infeasible, None) => {}
                (got, oracle) => panic!(
                    "simplex and brute force disagree: {got:?} vs oracle {oracle:?}"
                ),
            }
            match (maximize(&a, &b, &c).unwrap(), brute_force_lp(&a, &b, &c)) {
                (LpSolution::Optimal { value, .. }, Some((_lo, hi))) => {
                    assert_abs_diff_eq!(value, hi, epsilon = 1e-7);
                }
                (LpSolution::Infeasible, None) => {}
                (got, oracle) => panic!(
                    "simplex and brute force disagree: {got:?} vs oracle {oracle:?}"
                ),
            }
        }
    }
}
