//! Small dense two-phase simplex solver.
//!
//! Solves `maximize c.x  subject to  A x = b, x >= 0` for the handful of
//! variables and constraints produced by mixed-dominator searches. Phase one
//! introduces one artificial variable per row and minimizes their sum; phase
//! two optimizes the caller's objective. Bland's rule keeps the iteration
//! from cycling on degenerate tableaus. Every call builds a fresh tableau;
//! nothing is shared or cached.

use crate::{Error, Result};

/// Numerical tolerance on feasibility and reduced costs.
pub(crate) const LP_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 10_000;

#[derive(Clone, Debug)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Maximizes `c.x` over `A x = b, x >= 0`.
pub(crate) fn solve_standard(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Lp("dimension mismatch".into()));
    }

    // Tableau over original + artificial columns, rhs last. Rows are flipped
    // so the right-hand side is non-negative and artificials start basic.
    let total = n + m;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row: Vec<f64> = a[i].iter().map(|v| flip * v).collect();
        row.extend((0..m).map(|j| if j == i { 1.0 } else { 0.0 }));
        row.push(flip * b[i]);
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase one: drive the artificials to zero. Its objective is bounded
    // above by zero, so an unbounded end here is impossible.
    let phase1_cost: Vec<f64> = (0..total)
        .map(|j| if j >= n { -1.0 } else { 0.0 })
        .collect();
    let SimplexEnd::Optimal(value) = run_simplex(&mut t, &mut basis, &phase1_cost, total)? else {
        return Err(Error::Lp("phase one reported unbounded".into()));
    };
    if value < -LP_TOL {
        return Ok(LpOutcome::Infeasible);
    }

    // Pivot leftover basic artificials onto original columns, or drop their
    // (redundant) rows entirely.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > LP_TOL) {
                pivot(&mut t, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Phase two on the original columns only.
    for row in t.iter_mut() {
        let rhs = row.pop().expect("rhs");
        row.truncate(n);
        row.push(rhs);
    }
    match run_simplex(&mut t, &mut basis, c, n)? {
        SimplexEnd::Optimal(value) => {
            let mut x = vec![0.0; n];
            for (i, &bj) in basis.iter().enumerate() {
                if bj < n {
                    x[bj] = t[i][n];
                }
            }
            Ok(LpOutcome::Optimal { x, value })
        }
        SimplexEnd::Unbounded => Ok(LpOutcome::Unbounded),
    }
}

enum SimplexEnd {
    Optimal(f64),
    Unbounded,
}

/// Runs simplex iterations in place. `width` is the number of structural
/// columns (the rhs sits at index `width`). Entering variables are picked by
/// Bland's rule (lowest index with positive reduced cost), which rules out
/// cycling on degenerate tableaus.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    width: usize,
) -> Result<SimplexEnd> {
    for _ in 0..MAX_PIVOTS {
        // Reduced costs r_j = c_j - c_B . column_j.
        let entering = (0..width)
            .filter(|&j| !basis.contains(&j))
            .find(|&j| {
                let mut r = cost[j];
                for (i, row) in t.iter().enumerate() {
                    r -= cost[basis[i]] * row[j];
                }
                r > LP_TOL
            });
        let Some(j) = entering else {
            let value = t
                .iter()
                .enumerate()
                .map(|(i, row)| cost[basis[i]] * row[width])
                .sum();
            return Ok(SimplexEnd::Optimal(value));
        };
        // Ratio test; ties again break toward the lowest basis index.
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j] > LP_TOL {
                let ratio = row[width] / row[j];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - LP_TOL || (ratio < lr + LP_TOL && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            return Ok(SimplexEnd::Unbounded);
        };
        pivot(t, basis, i, j);
    }
    Err(Error::Lp("pivot limit exceeded".into()))
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..t[i].len() {
                t[i][j] -= f * t[row][j];
            }
        }
    }
    basis[row] = col;
}
