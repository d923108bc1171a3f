//! Independent numerical oracles used only by the unit tests: a dense
//! linear solver and a vertex-enumerating LP oracle. Both are deliberately
//! written with different algorithms than the production code they check.

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when (numerically) singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Brute-force range of `c·x` over `{x >= 0 : a x = b}` by enumerating all
/// basic solutions (vertices). `None` when the region is empty.
///
/// Zero rows with zero right-hand side are dropped first; a zero row with a
/// non-zero right-hand side makes the program infeasible outright.
pub(crate) fn brute_force_lp(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
) -> Option<(f64, f64)> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (row, &target) in a.iter().zip(b) {
        if row.iter().all(|&v| v.abs() < 1e-15) {
            if target.abs() > 1e-12 {
                return None;
            }
            continue;
        }
        rows.push(row.clone());
        rhs.push(target);
    }
    let m = rows.len();
    let n = if m == 0 { 0 } else { rows[0].len() };
    if m == 0 {
        // No constraints: the region is the whole orthant; with the use
        // sites always passing a normalization row this cannot happen.
        return Some((0.0, 0.0));
    }
    let mut best: Option<(f64, f64)> = None;
    let mut columns = vec![0usize; m];
    enumerate_subsets(n, m, 0, 0, &mut columns, &mut |cols| {
        let square: Vec<Vec<f64>> = (0..m)
            .map(|i| cols.iter().map(|&j| rows[i][j]).collect())
            .collect();
        let Some(x_basis) = solve_linear(square, rhs.clone()) else {
            return;
        };
        if x_basis.iter().any(|&v| v < -1e-9) {
            return;
        }
        let value: f64 = cols.iter().zip(&x_basis).map(|(&j, &v)| c[j] * v).sum();
        best = Some(match best {
            None => (value, value),
            Some((lo, hi)) => (lo.min(value), hi.max(value)),
        });
    });
    best
}

/// Calls `f` with every size-`m` subset of `0..n`.
fn enumerate_subsets(
    n: usize,
    m: usize,
    start: usize,
    depth: usize,
    scratch: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == m {
        f(scratch);
        return;
    }
    for j in start..n {
        scratch[depth] = j;
        enumerate_subsets(n, m, j + 1, depth + 1, scratch, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_solver_inverts_a_simple_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let b = vec![5.0, 10.0];
        let x = solve_linear(a, b).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_solver_detects_singularity() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_linear(a, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn brute_force_solves_a_simplex_program() {
        // probabilities over 2 atoms with a fixed first coordinate
        let a = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let b = vec![1.0, 0.3];
        let c = vec![1.0, -1.0];
        let (lo, hi) = brute_force_lp(&a, &b, &c).unwrap();
        assert_abs_diff_eq!(lo, 0.3 - 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.3 - 0.7, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_detects_infeasibility() {
        let a = vec![vec![1.0], vec![1.0]];
        let b = vec![1.0, 2.0];
        assert!(brute_force_lp(&a, &b, &[0.0]).is_none());
    }
}
