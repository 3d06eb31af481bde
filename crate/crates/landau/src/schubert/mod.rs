//! Fibers of the Landau map: lines meeting prescribed external lines and each other.

pub mod box4;
pub mod cycle;
pub mod fiber;
pub mod homotopy;
pub mod solve;
pub mod tree;

pub use box4::{
    box_chain_coefficients, box_quadratic, proportional, solve_box4, solve_box4_exact, transversal_of_five,
    transversals_by_elimination, BoxQuadratic, BoxSolution, ExactBoxSolution,
};
pub use cycle::{
    build_cycle_polynomial, build_cycle_polynomial_exact, cycle_parameter, cycle_polynomial_eval, solve_cycle, CycleSolve,
};
pub use fiber::{
    classify_solution, classify_triangle, collision_indicator, dedupe, make_solution, newton_refine, verify_fiber,
    FiberSolution, ResidualReport,
};
pub use tree::{solve_tree, tree_orientation};
pub use homotopy::{monodromy_component, random_component_point, transport_fiber, MonodromyOptions, MonodromyResult, Segment};
pub use solve::{route_for, solve_cycle_robust, solve_fiber, solve_triangle, SolverRoute};
