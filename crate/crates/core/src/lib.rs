//! Minimum-cost integer network synthesis when edge costs form a tree metric.
//!
//! Given terminals `V`, a weighted tree `T ⊇ V` whose path lengths define the
//! cost of connecting two terminals, and an integer connectivity requirement
//! `r(s, t)`, the solver builds an integer capacity `y` on terminal pairs such
//! that every pair `s, t` can carry `r(s, t)` units of flow, at minimum total
//! cost `Σ dist(s, t)·y(s, t)`.
//!
//! The route is: tree-edge cut requirements ([`model`]), a cheapest parity
//! repair on the tree ([`join`]), then splitting off every inner tree node
//! while preserving connectivity ([`splitoff`]). Every cut requirement must
//! be at least 2. [`verify`] holds independent checkers and exhaustive oracles.

pub mod join;
pub mod maxflow;
pub mod model;
pub mod solver;
pub mod splitoff;
pub mod verify;

pub use join::{
    brute_force_join, min_cost_ij_join, parity_sets, JoinError, JoinResult, ParityInstance,
};
pub use maxflow::{connectivity_snapshot, max_flow, CapacitatedMultigraph, FlowError};
pub use model::{
    Capacity, EdgeCapacity, EdgeId, Instance, MetricTree, ModelError, NodeId, Rational,
    Realization, RequirementMatrix, TreeEdge,
};
pub use solver::{
    check_preconditions, optimal_cost_formula, solve, solve_with, Solution, SolveError,
};
pub use splitoff::{obtain_integer_realization, SplitError, SplitEvent, SplitObserver, SplitState};
