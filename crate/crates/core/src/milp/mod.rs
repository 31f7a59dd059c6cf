//! Exact beam/user selection: maximum bipartite matching, a dense simplex LP
//! solver, and branch-and-bound for the selection MILP.

mod bnb;
mod graph;
mod matching;
mod simplex;
mod text;

pub use bnb::{
    assignment_feasible, evaluate_assignment, lp_relax_bound, solve_milp, MilpOptions, MilpSolution,
    PartialAssignment,
};
pub use graph::{BeamGraph, MilpInstance, DEFAULT_RELATIVE_THRESHOLD};
pub use matching::{induced_matching_size, max_matching, Matching};
pub use simplex::{solve_lp, Lp, LpOutcome};
pub use text::{read_instance, write_instance, write_solution};
