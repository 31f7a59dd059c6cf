//! Branch-and-bound over the beam (`x`) and user (`y`) binaries with an LP
//! relaxation bound. For fixed integral `(x, y)` the best `z` is a maximum
//! matching of the induced subgraph, so leaves are scored exactly.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::graph::MilpInstance;
use super::matching::max_matching;
use super::simplex::{solve_lp, Lp, LpOutcome};
use crate::error::{Error, Result};

const INT_TOL: f64 = 1e-6;
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MilpOptions {
    /// Wall-clock budget per instance; `None` means unlimited.
    pub time_limit: Option<Duration>,
    pub max_nodes: usize,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self { time_limit: Some(Duration::from_secs(60)), max_nodes: 2_000_000 }
    }
}

/// Fixed and free binaries of a branch-and-bound node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    pub x: Vec<Option<bool>>,
    pub y: Vec<Option<bool>>,
}

impl PartialAssignment {
    pub fn free(num_beams: usize, num_users: usize) -> Self {
        Self { x: vec![None; num_beams], y: vec![None; num_users] }
    }

    pub fn fixed(x: &[bool], y: &[bool]) -> Self {
        Self { x: x.iter().map(|&v| Some(v)).collect(), y: y.iter().map(|&v| Some(v)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    /// Row-major M x K edge activations (0 or 1).
    pub z: Vec<f64>,
    pub matching_size: usize,
    pub objective: f64,
    pub proven_optimal: bool,
    /// Upper bound minus objective; zero when optimality is proven.
    pub gap: f64,
    pub nodes: usize,
}

impl MilpSolution {
    pub fn selected_beams(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&m| self.x[m]).collect()
    }

    pub fn selected_users(&self) -> Vec<usize> {
        (0..self.y.len()).filter(|&k| self.y[k]).collect()
    }
}

/// Whether an integral `(x, y)` satisfies the degree, power and beam
/// coverage constraints.
pub fn assignment_feasible(inst: &MilpInstance, x: &[bool], y: &[bool]) -> bool {
    let g = &inst.graph;
    let (nb, nu) = (g.num_beams(), g.num_users());
    for k in (0..nu).filter(|&k| y[k]) {
        let degree = (0..nb).filter(|&m| x[m] && g.adjacent(m, k)).count();
        if degree > inst.t_dl {
            return false;
        }
        let power: f64 = (0..nb).filter(|&m| x[m]).map(|m| g.weight(m, k)).sum();
        if inst.p0 > power {
            return false;
        }
    }
    (0..nb).all(|m| !x[m] || (0..nu).any(|k| y[k] && g.adjacent(m, k)))
}

/// Scores a feasible integral assignment: matching size of the induced
/// subgraph plus `epsilon_obj` per selected beam.
pub fn evaluate_assignment(inst: &MilpInstance, x: &[bool], y: &[bool]) -> (f64, Vec<f64>, usize) {
    let g = &inst.graph;
    let (nb, nu) = (g.num_beams(), g.num_users());
    let sub: Vec<bool> = (0..nb * nu).map(|i| g.adjacency()[i] && x[i / nu] && y[i % nu]).collect();
    let matching = max_matching(nb, nu, &sub);
    let mut z = vec![0.0; nb * nu];
    for &(m, k) in &matching.pairs {
        z[m * nu + k] = 1.0;
    }
    let beams = x.iter().filter(|&&v| v).count();
    let size = matching.size();
    (size as f64 + inst.epsilon_obj * beams as f64, z, size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    X(usize),
    Y(usize),
    Z(usize, usize),
}

struct Relaxation {
    lp: Lp,
    offset: f64,
    x_col: Vec<Option<usize>>,
    y_col: Vec<Option<usize>>,
}

/// Builds the LP over the free variables, or `None` when the fixed part
/// already violates a constraint.
fn build_relaxation(inst: &MilpInstance, asg: &PartialAssignment) -> Option<Relaxation> {
    let g = &inst.graph;
    let (nb, nu) = (g.num_beams(), g.num_users());
    let mut cols = 0;
    let mut next = || {
        cols += 1;
        cols - 1
    };
    let x_col: Vec<Option<usize>> = asg.x.iter().map(|f| f.is_none().then(&mut next)).collect();
    let y_col: Vec<Option<usize>> = asg.y.iter().map(|f| f.is_none().then(&mut next)).collect();
    let mut z_col = vec![None; nb * nu];
    for m in 0..nb {
        for k in 0..nu {
            if g.adjacent(m, k) && asg.x[m] != Some(false) && asg.y[k] != Some(false) {
                z_col[m * nu + k] = Some(next());
            }
        }
    }
    let mut lp = Lp::new(cols);
    for c in x_col.iter().flatten() {
        lp.objective[*c] = inst.epsilon_obj;
    }
    for c in z_col.iter().flatten() {
        lp.objective[*c] = 1.0;
    }
    let offset = inst.epsilon_obj * asg.x.iter().filter(|f| **f == Some(true)).count() as f64;

    let mut feasible = true;
    let mut add = |terms: Vec<(Var, f64)>, mut rhs: f64, lp: &mut Lp| {
        let mut row = Vec::with_capacity(terms.len());
        let mut has_z = false;
        let mut max_lhs = 0.0;
        for (var, coef) in terms {
            let (col, fixed) = match var {
                Var::X(m) => (x_col[m], asg.x[m]),
                Var::Y(k) => (y_col[k], asg.y[k]),
                Var::Z(m, k) => {
                    has_z = true;
                    (z_col[m * nu + k], Some(false))
                }
            };
            match col {
                Some(c) => {
                    row.push((c, coef));
                    max_lhs += coef.max(0.0);
                }
                None => {
                    if fixed == Some(true) {
                        rhs -= coef;
                    }
                }
            }
        }
        if row.is_empty() {
            if rhs < -PRUNE_TOL {
                feasible = false;
            }
            return;
        }
        // rows bounded by the unit boxes of x and y alone are redundant
        if !has_z && max_lhs <= rhs {
            return;
        }
        lp.add_row(row, rhs);
    };

    for m in 0..nb {
        let mut t: Vec<(Var, f64)> = (0..nu).filter(|&k| g.adjacent(m, k)).map(|k| (Var::Z(m, k), 1.0)).collect();
        if !t.is_empty() {
            t.push((Var::X(m), -1.0));
            add(t, 0.0, &mut lp);
        }
    }
    for k in 0..nu {
        let mut t: Vec<(Var, f64)> = (0..nb).filter(|&m| g.adjacent(m, k)).map(|m| (Var::Z(m, k), 1.0)).collect();
        if !t.is_empty() {
            t.push((Var::Y(k), -1.0));
            add(t, 0.0, &mut lp);
        }
    }
    // big-M of the degree row tightened from M to the user's neighbor count
    for k in 0..nu {
        let mut t: Vec<(Var, f64)> = (0..nb).filter(|&m| g.adjacent(m, k)).map(|m| (Var::X(m), 1.0)).collect();
        let d = t.len() as f64;
        if t.len() > inst.t_dl {
            t.push((Var::Y(k), d - inst.t_dl as f64));
            add(t, d, &mut lp);
        }
    }
    for k in 0..nu {
        let mut t: Vec<(Var, f64)> =
            (0..nb).filter(|&m| g.weight(m, k) > 0.0).map(|m| (Var::X(m), -g.weight(m, k))).collect();
        t.push((Var::Y(k), inst.p0));
        add(t, 0.0, &mut lp);
    }
    for m in 0..nb {
        let mut t: Vec<(Var, f64)> = (0..nu).filter(|&k| g.adjacent(m, k)).map(|k| (Var::Y(k), -1.0)).collect();
        t.push((Var::X(m), 1.0));
        add(t, 0.0, &mut lp);
    }
    if !feasible {
        return None;
    }
    for c in x_col.iter().chain(&y_col).flatten() {
        lp.add_row(vec![(*c, 1.0)], 1.0);
    }
    Some(Relaxation { lp, offset, x_col, y_col })
}

/// Bound that needs no LP: every free or selected user contributes at most
/// one matched edge, and every beam at most `epsilon_obj`.
fn trivial_bound(inst: &MilpInstance, asg: &PartialAssignment) -> f64 {
    let g = &inst.graph;
    let users = (0..g.num_users()).filter(|&k| asg.y[k] != Some(false) && g.user_beams(k).next().is_some()).count();
    let beams = asg.x.iter().filter(|f| **f != Some(false)).count();
    users.min(beams) as f64 + inst.epsilon_obj * beams as f64
}

/// Upper bound on the objective of every completion of `asg`;
/// `f64::NEG_INFINITY` when no completion is feasible.
pub fn lp_relax_bound(inst: &MilpInstance, asg: &PartialAssignment) -> Result<f64> {
    check_assignment_shape(inst, asg)?;
    let Some(relax) = build_relaxation(inst, asg) else { return Ok(f64::NEG_INFINITY) };
    match solve_lp(&relax.lp) {
        Ok(LpOutcome::Optimal { value, .. }) => Ok(value + relax.offset),
        Ok(LpOutcome::Infeasible) => Ok(f64::NEG_INFINITY),
        Ok(LpOutcome::Unbounded) => Err(Error::LpNumericalFailure("relaxation reported unbounded".into())),
        Err(e) => {
            log::warn!("LP relaxation failed ({e}); using trivial bound");
            Ok(trivial_bound(inst, asg))
        }
    }
}

fn check_assignment_shape(inst: &MilpInstance, asg: &PartialAssignment) -> Result<()> {
    if asg.x.len() != inst.graph.num_beams() {
        return Err(Error::shape(inst.graph.num_beams(), asg.x.len()));
    }
    if asg.y.len() != inst.graph.num_users() {
        return Err(Error::shape(inst.graph.num_users(), asg.y.len()));
    }
    Ok(())
}

struct Incumbent {
    objective: f64,
    x: Vec<bool>,
    y: Vec<bool>,
}

impl Incumbent {
    fn offer(&mut self, inst: &MilpInstance, x: Vec<bool>, y: Vec<bool>) {
        if !assignment_feasible(inst, &x, &y) {
            return;
        }
        let (obj, _, _) = evaluate_assignment(inst, &x, &y);
        if obj > self.objective + PRUNE_TOL {
            *self = Incumbent { objective: obj, x, y };
        }
    }
}

/// Proven-optimal (or, past the budget, best-found) selection of beams and
/// users.
/// Smallest objective increase worth exploring. Objectives are
/// `matching + eps * beams`; when `1 / eps` is an integer they all lie on
/// the lattice `eps * Z`, so a node must promise a full step to matter.
fn min_improvement(eps: f64) -> f64 {
    let r = 1.0 / eps;
    if (r - r.round()).abs() <= 1e-9 * r {
        eps - PRUNE_TOL
    } else {
        PRUNE_TOL
    }
}

pub fn solve_milp(inst: &MilpInstance, opts: &MilpOptions) -> Result<MilpSolution> {
    inst.validate()?;
    let g = &inst.graph;
    let (nb, nu) = (g.num_beams(), g.num_users());
    let start = Instant::now();
    let x_weight: Vec<f64> = (0..nb).map(|m| (0..nu).map(|k| g.weight(m, k)).sum()).collect();
    let y_weight: Vec<f64> = (0..nu).map(|k| g.user_power(k)).collect();

    let min_gain = min_improvement(inst.epsilon_obj);
    let mut best = Incumbent { objective: 0.0, x: vec![false; nb], y: vec![false; nu] };
    let mut stack = vec![(PartialAssignment::free(nb, nu), f64::INFINITY)];
    let mut nodes = 0;
    let mut open_bound = f64::NEG_INFINITY;

    while let Some((asg, parent_bound)) = stack.pop() {
        if parent_bound < best.objective + min_gain {
            continue;
        }
        let out_of_budget = nodes >= opts.max_nodes || opts.time_limit.is_some_and(|t| start.elapsed() >= t);
        if out_of_budget {
            open_bound = open_bound.max(parent_bound);
            for (_, b) in &stack {
                open_bound = open_bound.max(*b);
            }
            break;
        }
        nodes += 1;
        let Some(relax) = build_relaxation(inst, &asg) else { continue };
        let (bound, values) = match solve_lp(&relax.lp) {
            Ok(LpOutcome::Optimal { value, solution }) => (value + relax.offset, Some(solution)),
            Ok(LpOutcome::Infeasible) => continue,
            Ok(LpOutcome::Unbounded) => {
                return Err(Error::LpNumericalFailure("relaxation reported unbounded".into()))
            }
            Err(e) => {
                log::warn!("LP relaxation failed ({e}); using trivial bound");
                (trivial_bound(inst, &asg), None)
            }
        };
        let bound = bound.min(parent_bound);
        if bound < best.objective + min_gain {
            continue;
        }

        let value_of = |fixed: Option<bool>, col: Option<usize>| -> f64 {
            match (fixed, col, &values) {
                (Some(v), _, _) => f64::from(u8::from(v)),
                (None, Some(c), Some(vals)) => vals[c],
                _ => 0.5,
            }
        };
        let xv: Vec<f64> = (0..nb).map(|m| value_of(asg.x[m], relax.x_col[m])).collect();
        let yv: Vec<f64> = (0..nu).map(|k| value_of(asg.y[k], relax.y_col[k])).collect();
        let integral = |v: &f64| (v - v.round()).abs() <= INT_TOL;
        if values.is_some() && xv.iter().all(integral) && yv.iter().all(integral) {
            best.offer(inst, xv.iter().map(|v| *v > 0.5).collect(), yv.iter().map(|v| *v > 0.5).collect());
            continue;
        }
        // rounding heuristic for an early incumbent
        best.offer(inst, xv.iter().map(|v| *v > 0.5).collect(), yv.iter().map(|v| *v > 0.5).collect());

        let mut pick: Option<(f64, f64, bool, usize)> = None;
        let candidates = (0..nb)
            .filter(|&m| asg.x[m].is_none())
            .map(|m| (xv[m], x_weight[m], true, m))
            .chain((0..nu).filter(|&k| asg.y[k].is_none()).map(|k| (yv[k], y_weight[k], false, k)));
        let y_fractional = (0..nu).any(|k| asg.y[k].is_none() && !integral(&yv[k]));
        for (v, w, is_x, idx) in candidates {
            if y_fractional && is_x {
                continue;
            }
            let frac = 0.5 - (v - 0.5).abs();
            let better = match pick {
                None => true,
                Some((pf, pw, _, _)) => frac > pf + 1e-12 || ((frac - pf).abs() <= 1e-12 && w > pw),
            };
            if better {
                pick = Some((frac, w, is_x, idx));
            }
        }
        let Some((_, _, is_x, idx)) = pick else { continue };
        for value in [false, true] {
            let mut child = asg.clone();
            if is_x {
                child.x[idx] = Some(value);
            } else {
                child.y[idx] = Some(value);
            }
            stack.push((child, bound));
        }
    }

    let (objective, z, matching_size) = evaluate_assignment(inst, &best.x, &best.y);
    let gap = (open_bound - objective).max(0.0);
    Ok(MilpSolution {
        x: best.x,
        y: best.y,
        z,
        matching_size,
        objective,
        proven_optimal: gap < min_gain,
        gap,
        nodes,
    })
}
