//! Dense tableau simplex for `max c.x  s.t.  A x = b, x >= 0` with `b >= 0`.
//!
//! Two phases with artificial variables; Bland's rule throughout.

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub status: Status,
    pub x: Vec<f64>,
    pub value: f64,
}

struct Tableau {
    m: usize,
    width: usize,
    /// `m` constraint rows of `width + 1` entries (rhs last).
    rows: Vec<Vec<f64>>,
    /// Reduced costs `c_j - c_B B^-1 A_j`; last entry is `-objective`.
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width;
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for j in 0..=w {
                    row[j] -= f * pivot_row[j];
                }
                row[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for j in 0..=w {
                self.cost[j] -= f * pivot_row[j];
            }
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Runs Bland-rule pivots over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        let max_iter = 50 * (self.width + self.m) + 1000;
        for _ in 0..max_iter {
            let Some(col) = (0..allowed).find(|&j| self.cost[j] > PIVOT_TOL) else {
                return Ok(());
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.m {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.rows[i][self.width] / a;
                    let better = match best {
                        None => true,
                        Some((br, bb, _)) => ratio < br - 1e-15 || (ratio <= br + 1e-15 && self.basis[i] < bb),
                    };
                    if better {
                        best = Some((ratio, self.basis[i], i));
                    }
                }
            }
            let Some((_, _, r)) = best else {
                return Err(Error::Numerical("linear program is unbounded".into()));
            };
            self.pivot(r, col);
        }
        Err(Error::Numerical("simplex iteration limit reached".into()))
    }
}

/// Solves `max c.x` subject to `a x = b`, `x >= 0`; `a` is row-major `m x n`.
pub fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Solution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(m, b.len()));
    }
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = sign * a[i][j];
        }
        row[n + i] = 1.0;
        row[width] = sign * b[i];
        rows.push(row);
    }
    // Phase 1: maximize -(sum of artificials).
    let mut cost = vec![0.0; width + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] += row[j];
        }
        cost[width] += row[width];
    }
    let mut t = Tableau {
        m,
        width,
        rows,
        cost,
        basis: (n..n + m).collect(),
    };
    t.optimize(width)?;
    if t.cost[width] > FEAS_TOL {
        return Ok(Solution {
            status: Status::Infeasible,
            x: vec![0.0; n],
            value: f64::NAN,
        });
    }
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| t.rows[r][j].abs() > PIVOT_TOL) {
                t.pivot(r, col);
            }
        }
    }
    // Phase 2 reduced costs.
    let mut cost = vec![0.0; width + 1];
    cost[..n].copy_from_slice(c);
    for (r, &bj) in t.basis.iter().enumerate() {
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..=width {
                cost[j] -= cb * t.rows[r][j];
            }
        }
    }
    t.cost = cost;
    t.optimize(n)?;
    let mut x = vec![0.0; n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rows[r][width];
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(Solution {
        status: Status::Optimal,
        x,
        value,
    })
}
