//! Hungarian method (Kuhn-Munkres with dual potentials, O(rows^2 * cols))
//! for rectangular cost matrices with `rows <= cols`.
//!
//! Rows are inserted one at a time; each insertion grows a shortest
//! augmenting path over reduced costs `c[i][j] - u[i] - v[j]`, which is the
//! potential-based form of the row/column reduction and zero-cover steps.
//! Ties resolve to the lowest column index.

use crate::error::{Error, Result};

/// Minimum-cost assignment of every row to a distinct column. `cost` is
/// row-major `rows x cols`. Returns the column chosen for each row.
pub fn solve_min(rows: usize, cols: usize, cost: &[f64]) -> Result<Vec<usize>> {
    if cost.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cost has {} entries, expected {rows}x{cols}",
            cost.len()
        )));
    }
    if rows > cols {
        return Err(Error::Infeasible {
            uavs: rows,
            capacity: cols,
        });
    }
    if let Some(i) = cost.iter().position(|c| !c.is_finite()) {
        return Err(Error::DimensionMismatch(format!(
            "cost entry ({}, {}) is not finite",
            i / cols.max(1),
            i % cols.max(1)
        )));
    }
    if rows == 0 {
        return Ok(Vec::new());
    }

    // 1-based internally; column 0 is the virtual root of each search tree.
    let at = |i: usize, j: usize| cost[(i - 1) * cols + (j - 1)];
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut row_of = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];

    for i in 1..=rows {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut min_v = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let reduced = at(i0, j) - u[i0] - v[j];
                if reduced < min_v[j] {
                    min_v[j] = reduced;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        // Flip the augmenting path.
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of = vec![0usize; rows];
    for j in 1..=cols {
        if row_of[j] != 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    Ok(col_of)
}

/// Maximum-utility assignment: negates the utilities (after scaling them
/// by their largest magnitude) and minimizes.
pub fn solve_max(rows: usize, cols: usize, utility: &[f64]) -> Result<Vec<usize>> {
    let scale = utility.iter().fold(0.0f64, |a, u| a.max(u.abs()));
    let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
    let cost: Vec<f64> = utility.iter().map(|u| -u / scale).collect();
    solve_min(rows, cols, &cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_3x3() {
        let c = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = solve_min(3, 3, &c).unwrap();
        let total: f64 = a.iter().enumerate().map(|(i, &j)| c[i * 3 + j]).sum();
        assert_eq!(total, 5.0);
    }

    #[test]
    fn diagonal_max() {
        assert_eq!(solve_max(2, 2, &[10.0, 1.0, 1.0, 10.0]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn wide_matrix() {
        // Both rows prefer column 2; row 1 gains more from it.
        let u = [1.0, 0.0, 5.0, 0.0, 2.0, 9.0];
        assert_eq!(solve_max(2, 3, &u).unwrap(), vec![0, 2]);
    }

    #[test]
    fn ties_take_lowest_column() {
        assert_eq!(solve_max(1, 4, &[3.0, 7.0, 7.0, 1.0]).unwrap(), vec![1]);
        assert_eq!(solve_max(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap().len(), 2);
    }

    #[test]
    fn tall_is_infeasible() {
        assert!(matches!(
            solve_min(3, 2, &[0.0; 6]),
            Err(Error::Infeasible { uavs: 3, capacity: 2 })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(solve_min(1, 2, &[0.0, f64::NAN]).is_err());
    }
}
