//! A small dense two-phase simplex solver for equality-form linear
//! programs:
//!
//!   maximize c . x   subject to   A x = b,  x >= 0.
//!
//! The separability programs solved here have a handful of equality rows
//! and around a thousand variables, so a plain dense tableau with Bland's
//! rule is both sufficient and easy to audit. Phase one minimizes the total
//! artificial-variable mass; its optimum doubles as the infeasibility
//! margin. Redundant rows (the outcome constraints overlap the
//! normalization row) are detected after phase one and dropped.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    /// Phase-one mass below which the program counts as feasible.
    pub feasibility_tol: f64,
    /// Entries smaller than this never pivot.
    pub pivot_tol: f64,
    /// Hard cap on pivots across both phases.
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feasibility_tol: 1e-9,
            pivot_tol: 1e-10,
            max_pivots: 50_000,
        }
    }
}

/// Outcome of a solve.
#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution {
    /// A feasible (and, when an objective was given, optimal) point.
    Optimal { x: Vec<f64>, objective: f64 },
    /// No nonnegative solution of A x = b exists; the margin is the
    /// smallest total constraint violation achievable.
    Infeasible { infeasibility: f64 },
    /// The objective grows without bound on the feasible set.
    Unbounded,
}

/// Solves max c.x s.t. A x = b, x >= 0. With `objective = None` only
/// feasibility is decided and any feasible basic point is returned.
pub fn solve_equality_form(
    a: &[Vec<f64>],
    b: &[f64],
    objective: Option<&[f64]>,
    opts: &SimplexOptions,
) -> Result<LpSolution> {
    let m = a.len();
    if m == 0 || b.len() != m {
        return Err(Error::SolverFailure(format!(
            "constraint shape mismatch: {} rows, {} right-hand sides",
            m,
            b.len()
        )));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::SolverFailure("ragged constraint matrix".into()));
    }
    if let Some(c) = objective {
        if c.len() != n {
            return Err(Error::SolverFailure(format!(
                "objective length {} does not match {} variables",
                c.len(),
                n
            )));
        }
    }

    // Columns: n structural, m artificial, then the right-hand side.
    let width = n + m + 1;
    let rhs = n + m;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![0.0; width];
        let flip = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * a[r][j];
        }
        row[n + r] = 1.0;
        row[rhs] = flip * b[r];
        tab.push(row);
        basis.push(n + r);
    }

    // Phase one: maximize -(sum of artificials). The z-row stores -reduced
    // costs, so canonicalizing means subtracting every constraint row.
    let mut zrow = vec![0.0; width];
    for z in zrow[n..n + m].iter_mut() {
        *z = 1.0;
    }
    for row in &tab {
        for j in 0..width {
            zrow[j] -= row[j];
        }
    }

    let mut pivots = 0usize;
    iterate(
        &mut tab,
        &mut zrow,
        &mut basis,
        |j| j < n,
        opts,
        &mut pivots,
    )?
    .ok_or_else(|| {
        Error::SolverFailure("phase one unbounded; artificial objective is bounded by zero".into())
    })?;

    let infeasibility = -zrow[rhs];
    if infeasibility > opts.feasibility_tol {
        return Ok(LpSolution::Infeasible { infeasibility });
    }

    // Drive leftover artificials out of the basis; rows that offer no
    // structural pivot are redundant and dropped.
    let mut r = 0;
    while r < tab.len() {
        if basis[r] >= n {
            let col = (0..n).find(|&j| tab[r][j].abs() > opts.pivot_tol);
            match col {
                Some(j) => {
                    pivot(&mut tab, &mut zrow, &mut basis, r, j);
                    r += 1;
                }
                None => {
                    tab.remove(r);
                    basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    if let Some(c) = objective {
        for (j, z) in zrow.iter_mut().enumerate() {
            *z = if j < n { -c[j] } else { 0.0 };
        }
        for (r, row) in tab.iter().enumerate() {
            let factor = zrow[basis[r]];
            if factor != 0.0 {
                for j in 0..width {
                    zrow[j] -= factor * row[j];
                }
            }
        }
        let optimal = iterate(
            &mut tab,
            &mut zrow,
            &mut basis,
            |j| j < n,
            opts,
            &mut pivots,
        )?;
        if optimal.is_none() {
            return Ok(LpSolution::Unbounded);
        }
    }

    let mut x = vec![0.0; n];
    for (r, row) in tab.iter().enumerate() {
        if basis[r] < n {
            x[basis[r]] = row[rhs].max(0.0);
        }
    }
    Ok(LpSolution::Optimal {
        x,
        objective: zrow[rhs],
    })
}

/// Runs Bland-rule pivoting until optimal (Some) or unbounded (None).
fn iterate(
    tab: &mut [Vec<f64>],
    zrow: &mut [f64],
    basis: &mut [usize],
    allowed: impl Fn(usize) -> bool,
    opts: &SimplexOptions,
    pivots: &mut usize,
) -> Result<Option<()>> {
    let width = zrow.len();
    let rhs = width - 1;
    loop {
        let entering = (0..rhs).find(|&j| allowed(j) && zrow[j] < -opts.pivot_tol);
        let Some(j) = entering else {
            return Ok(Some(()));
        };

        let mut leaving: Option<(usize, f64)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[j] > opts.pivot_tol {
                let ratio = row[rhs] / row[j];
                let better = match leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - 1e-12
                            || ((ratio - lratio).abs() <= 1e-12 && basis[r] < basis[lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leaving else {
            return Ok(None);
        };

        *pivots += 1;
        if *pivots > opts.max_pivots {
            return Err(Error::SolverFailure(format!(
                "pivot limit {} exceeded ({} rows, {} columns)",
                opts.max_pivots,
                tab.len(),
                width - 1
            )));
        }
        pivot(tab, zrow, basis, r, j);
    }
}

fn pivot(tab: &mut [Vec<f64>], zrow: &mut [f64], basis: &mut [usize], r: usize, j: usize) {
    let width = zrow.len();
    let scale = tab[r][j];
    for v in tab[r].iter_mut() {
        *v /= scale;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && row[j] != 0.0 {
            let factor = row[j];
            for k in 0..width {
                row[k] -= factor * pivot_row[k];
            }
            row[j] = 0.0;
        }
    }
    if zrow[j] != 0.0 {
        let factor = zrow[j];
        for k in 0..width {
            zrow[k] -= factor * pivot_row[k];
        }
        zrow[j] = 0.0;
    }
    basis[r] = j;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(a: &[Vec<f64>], b: &[f64], c: Option<&[f64]>) -> LpSolution {
        solve_equality_form(a, b, c, &SimplexOptions::default()).unwrap()
    }

    #[test]
    fn maximizes_a_small_program() {
        // max x + 2y with x + y + slack = 1.
        let a = vec![vec![1.0, 1.0, 1.0]];
        let b = [1.0];
        match solve(&a, &b, Some(&[1.0, 2.0, 0.0])) {
            LpSolution::Optimal { x, objective } => {
                assert!((objective - 2.0).abs() < 1e-12);
                assert!((x[1] - 1.0).abs() < 1e-12);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility_with_margin() {
        // x + y = 1 and x + y = 2 cannot both hold.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = [1.0, 2.0];
        match solve(&a, &b, None) {
            LpSolution::Infeasible { infeasibility } => {
                assert!(infeasibility > 0.5);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn detects_unboundedness() {
        // y - x = 1 allows x to grow without bound.
        let a = vec![vec![-1.0, 1.0]];
        let b = [1.0];
        assert_eq!(solve(&a, &b, Some(&[1.0, 0.0])), LpSolution::Unbounded);
    }

    #[test]
    fn feasibility_only_returns_a_point() {
        let a = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let b = [1.0, 0.5];
        match solve(&a, &b, None) {
            LpSolution::Optimal { x, .. } => {
                assert!((x[0] + x[1] - 1.0).abs() < 1e-9);
                assert!((x[1] + x[2] - 0.5).abs() < 1e-9);
                assert!(x.iter().all(|&v| v >= 0.0));
            }
            other => panic!("expected feasible point, got {other:?}"),
        }
    }

    #[test]
    fn tolerates_redundant_rows() {
        // Second row duplicates the first.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = [1.0, 1.0, 0.0];
        match solve(&a, &b, Some(&[1.0, 1.0])) {
            LpSolution::Optimal { x, objective } => {
                assert!((objective - 1.0).abs() < 1e-9);
                assert!((x[0] - 0.5).abs() < 1e-9 && (x[1] - 0.5).abs() < 1e-9);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn negative_right_hand_sides_are_normalized() {
        // -x - y = -1 is x + y = 1.
        let a = vec![vec![-1.0, -1.0]];
        let b = [-1.0];
        match solve(&a, &b, Some(&[2.0, 1.0])) {
            LpSolution::Optimal { objective, .. } => {
                assert!((objective - 2.0).abs() < 1e-12);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let ragged = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(
            solve_equality_form(&ragged, &[1.0, 1.0], None, &SimplexOptions::default()).is_err()
        );
        let a = vec![vec![1.0]];
        assert!(solve_equality_form(&a, &[1.0, 2.0], None, &SimplexOptions::default()).is_err());
        assert!(
            solve_equality_form(&a, &[1.0], Some(&[1.0, 2.0]), &SimplexOptions::default()).is_err()
        );
    }
}
