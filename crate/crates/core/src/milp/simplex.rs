//! Dense two-phase primal simplex for `max c^T v  s.t.  A v <= b, v >= 0`.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
/// Pivots without objective progress before switching to Bland's rule.
const STALL_LIMIT: usize = 50;

/// A linear program in inequality form with nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct Lp {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    /// Sparse rows `(column, coefficient)`.
    pub rows: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
}

impl Lp {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, objective: vec![0.0; num_vars], rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(terms);
        self.rhs.push(rhs);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, solution: Vec<f64> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    /// Objective row: reduced costs `c_j - z_j` (maximization); last entry
    /// holds minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns that may not enter the basis.
    blocked: Vec<bool>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.width - 1]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f != 0.0 {
                for (v, p) in self.data[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = self.obj[pc];
        if f != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs primal simplex iterations on the current objective row.
    fn optimize(&mut self, max_pivots: usize) -> Result<bool> {
        let mut bland = false;
        let mut stall = 0;
        let mut last = f64::INFINITY;
        for _ in 0..max_pivots {
            let entering = if bland {
                (0..self.width - 1).find(|&c| !self.blocked[c] && self.obj[c] > PIVOT_TOL)
            } else {
                (0..self.width - 1)
                    .filter(|&c| !self.blocked[c] && self.obj[c] > PIVOT_TOL)
                    .max_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]).then(b.cmp(&a)))
            };
            let Some(pc) = entering else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((pr, _)) = leave else { return Ok(false) };
            self.pivot(pr, pc);
            let value = self.obj[self.width - 1];
            if value < last - 1e-12 {
                stall = 0;
                last = value;
            } else {
                stall += 1;
                if stall > STALL_LIMIT {
                    bland = true;
                }
            }
        }
        Err(Error::LpNumericalFailure(format!("no convergence within {max_pivots} pivots")))
    }
}

/// Solves the LP. Rows with negative right-hand side are handled through a
/// phase-one problem with artificial variables.
pub fn solve_lp(lp: &Lp) -> Result<LpOutcome> {
    let n = lp.num_vars;
    let m = lp.rows.len();
    if lp.objective.len() != n || lp.rhs.len() != m {
        return Err(Error::LpNumericalFailure("inconsistent LP dimensions".into()));
    }
    let negative: Vec<usize> = (0..m).filter(|&r| lp.rhs[r] < 0.0).collect();
    let n_art = negative.len();
    // columns: structural | slack (one per row) | artificial | rhs
    let width = n + m + n_art + 1;
    let mut data = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut art_col = n + m;
    for r in 0..m {
        let sign = if lp.rhs[r] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut data[r * width..(r + 1) * width];
        for &(c, v) in &lp.rows[r] {
            if c >= n {
                return Err(Error::LpNumericalFailure(format!("column {c} out of range")));
            }
            row[c] += sign * v;
        }
        row[n + r] = sign;
        row[width - 1] = sign * lp.rhs[r];
        if sign < 0.0 {
            row[art_col] = 1.0;
            basis[r] = art_col;
            art_col += 1;
        } else {
            basis[r] = n + r;
        }
    }
    let max_pivots = 50 * (m + n + 10);
    let mut t = Tableau { rows: m, width, data, obj: vec![0.0; width], basis, blocked: vec![false; width - 1] };

    if n_art > 0 {
        // maximize -sum(artificials), expressed in the nonbasic columns
        for &r in &negative {
            for c in 0..width {
                if !(n + m..n + m + n_art).contains(&c) {
                    t.obj[c] += t.at(r, c);
                }
            }
        }
        t.optimize(max_pivots)?;
        let infeasibility: f64 = (0..m).filter(|&r| t.basis[r] >= n + m).map(|r| t.rhs(r)).sum();
        if infeasibility > FEAS_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        // drive remaining (zero-valued) artificials out of the basis
        for r in 0..m {
            if t.basis[r] >= n + m {
                if let Some(c) = (0..n + m).find(|&c| t.at(r, c).abs() > PIVOT_TOL) {
                    t.pivot(r, c);
                }
            }
        }
        for c in n + m..n + m + n_art {
            t.blocked[c] = true;
        }
    }

    // phase two objective in terms of the current basis
    t.obj.iter_mut().for_each(|v| *v = 0.0);
    t.obj[..n].copy_from_slice(&lp.objective);
    for r in 0..m {
        let b = t.basis[r];
        let cb = if b < n { lp.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for c in 0..width {
                let v = t.at(r, c);
                t.obj[c] -= cb * v;
            }
        }
    }
    if !t.optimize(max_pivots)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut solution = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            solution[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let value = lp.objective.iter().zip(&solution).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { value, solution })
}
