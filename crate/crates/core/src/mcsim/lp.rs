//! Hull membership as a Phase-I feasibility problem
//! `Σ λ_i p_i = x, Σ λ_i = 1, λ ≥ 0`, solved by a dense simplex method with
//! Bland's rule.

use crate::error::{ensure_domain, Result};

/// Largest residual infeasibility still counted as membership.
pub const FEASIBILITY_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;

/// Whether `x` lies in the convex hull of `points` (boundary included).
pub fn contains(points: &[Vec<f64>], x: &[f64]) -> Result<bool> {
    let d = x.len();
    let n = points.len();
    ensure_domain!(d >= 1, "empty query point");
    ensure_domain!(n > d, "need at least d+1 = {} points, got {n}", d + 1);
    ensure_domain!(points.iter().all(|p| p.len() == d), "point dimensions differ from the query");

    // Rows: d coordinates and the affine constraint. Columns: λ (n),
    // artificials (m), right-hand side.
    let m = d + 1;
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for (r, row) in t.iter_mut().enumerate() {
        for (j, p) in points.iter().enumerate() {
            row[j] = if r < d { p[r] } else { 1.0 };
        }
        row[n + r] = 1.0;
        row[width - 1] = if r < d { x[r] } else { 1.0 };
        if row[width - 1] < 0.0 {
            for (j, v) in row.iter_mut().enumerate() {
                if j < n || j == width - 1 {
                    *v = -*v;
                }
            }
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the Phase-I objective Σ artificials.
    let mut cost = vec![0.0; width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= row[j];
            }
        }
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_TOL) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            let a = t[r][enter];
            if a > PIVOT_TOL {
                let ratio = t[r][width - 1] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best || (ratio == best && basis[r] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        // The Phase-I objective is bounded below by zero, so a column with
        // no positive entry cannot improve it further.
        let Some(r) = leave else { break };
        let piv = t[r][enter];
        t[r].iter_mut().for_each(|v| *v /= piv);
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        let f = cost[enter];
        cost.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
        basis[r] = enter;
    }
    Ok(-cost[width - 1] <= FEASIBILITY_TOL)
}
