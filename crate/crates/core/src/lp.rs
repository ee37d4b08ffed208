//! Dense two-phase simplex for small linear programs.
//!
//! Solves `maximize c.x subject to A x <= b, x >= 0` where `b` may have any
//! sign. Bland's rule is used throughout so degenerate problems terminate.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

struct Tableau {
    // m constraint rows followed by the objective row; last column is the rhs.
    cells: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col];
        for v in self.cells[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.cells[row].clone();
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations on the objective row; `allowed` bounds the
    /// entering columns. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<bool> {
        let m = self.m();
        let rhs = self.ncols;
        for _ in 0..MAX_ITERATIONS {
            let entering = (0..allowed).find(|&j| self.cells[m][j] < -PIVOT_TOL);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.cells[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.cells[i][rhs] / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((row, _)) => self.pivot(row, col),
            }
        }
        Err(Error::LinearProgram("iteration limit reached".into()))
    }
}

impl LinearProgram {
    pub fn solve(&self) -> Result<LpSolution> {
        let n = self.objective.len();
        let m = self.rows.len();
        if self.rhs.len() != m || self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::LinearProgram("inconsistent dimensions".into()));
        }
        if self.rows.iter().flatten().chain(&self.rhs).chain(&self.objective).any(|v| !v.is_finite()) {
            return Err(Error::LinearProgram("non-finite input".into()));
        }
        let flipped: Vec<bool> = self.rhs.iter().map(|&b| b < 0.0).collect();
        let nart = flipped.iter().filter(|&&f| f).count();
        // columns: x (n), slacks (m), artificials (nart)
        let ncols = n + m + nart;
        let mut cells = vec![vec![0.0; ncols + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut art = n + m;
        for i in 0..m {
            let sign = if flipped[i] { -1.0 } else { 1.0 };
            for j in 0..n {
                cells[i][j] = sign * self.rows[i][j];
            }
            cells[i][n + i] = sign;
            cells[i][ncols] = sign * self.rhs[i];
            if flipped[i] {
                cells[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            } else {
                basis[i] = n + i;
            }
        }
        let mut tab = Tableau { cells, basis, ncols };

        if nart > 0 {
            // Phase 1: maximize -(sum of artificials).
            for j in n + m..ncols {
                tab.cells[m][j] = 1.0;
            }
            for i in 0..m {
                if flipped[i] {
                    for j in 0..=ncols {
                        tab.cells[m][j] -= tab.cells[i][j];
                    }
                }
            }
            tab.optimize(ncols)?;
            if tab.cells[m][ncols] < -FEAS_TOL * (1.0 + max_abs(&self.rhs)) {
                return Ok(LpSolution::Infeasible);
            }
            // Drive zero-level artificials out of the basis where possible.
            for i in 0..m {
                if tab.basis[i] >= n + m {
                    if let Some(j) = (0..n + m).find(|&j| tab.cells[i][j].abs() > PIVOT_TOL) {
                        tab.pivot(i, j);
                    }
                }
            }
        }

        // Phase 2.
        for j in 0..=ncols {
            tab.cells[m][j] = 0.0;
        }
        for j in 0..n {
            tab.cells[m][j] = -self.objective[j];
        }
        for i in 0..m {
            let b = tab.basis[i];
            let factor = tab.cells[m][b];
            if factor != 0.0 {
                for j in 0..=ncols {
                    tab.cells[m][j] -= factor * tab.cells[i][j];
                }
            }
        }
        if !tab.optimize(n + m)? {
            return Ok(LpSolution::Unbounded);
        }
        let mut x = vec![0.0; n];
        for i in 0..m {
            if tab.basis[i] < n {
                x[tab.basis[i]] = tab.cells[i][ncols];
            }
        }
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution::Optimal { x, value })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Whether `p` lies in the convex hull of `points`, decided by a phase-one
/// feasibility problem on the barycentric weights.
pub fn in_convex_hull(points: &[Vec<f64>], p: &[f64]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let dim = p.len();
    let k = points.len();
    let mut rows = Vec::with_capacity(2 * (dim + 1));
    let mut rhs = Vec::with_capacity(2 * (dim + 1));
    for d in 0..dim {
        let row: Vec<f64> = points.iter().map(|q| q[d]).collect();
        rows.push(row.iter().map(|v| -v).collect());
        rhs.push(-p[d]);
        rows.push(row);
        rhs.push(p[d]);
    }
    rows.push(vec![1.0; k]);
    rhs.push(1.0);
    rows.push(vec![-1.0; k]);
    rhs.push(-1.0);
    let lp = LinearProgram { objective: vec![0.0; k], rows, rhs };
    Ok(matches!(lp.solve()?, LpSolution::Optimal { .. }))
}
