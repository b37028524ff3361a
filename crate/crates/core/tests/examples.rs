//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;
    };
}

example!(spline_space, "../examples/spline_space.rs");
example!(basis_functions, "../examples/basis_functions.rs");
example!(element_fronts, "../examples/element_fronts.rs");
example!(elimination_tree, "../examples/elimination_tree.rs");
example!(solve_example, "../examples/solve.rs");
example!(cost_predictions, "../examples/cost_predictions.rs");
example!(scaling_sweep, "../examples/scaling_sweep.rs");

#[test]
fn spline_space_runs() {
    spline_space::run().unwrap();
}

#[test]
fn basis_functions_runs() {
    basis_functions::run().unwrap();
}

#[test]
fn element_fronts_runs() {
    element_fronts::run().unwrap();
}

#[test]
fn elimination_tree_runs() {
    elimination_tree::run().unwrap();
}

#[test]
fn solve_runs() {
    solve_example::run().unwrap();
}

#[test]
fn cost_predictions_runs() {
    cost_predictions::run().unwrap();
}

#[test]
fn scaling_sweep_runs() {
    scaling_sweep::run().unwrap();
}
