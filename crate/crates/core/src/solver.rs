//! End-to-end minimum-cost integer realization.

use std::fmt;

use thiserror::Error;

use crate::join::{min_cost_ij_join, parity_sets, JoinError, JoinResult};
use crate::model::{Capacity, EdgeCapacity, EdgeId, Instance, Rational, Realization};
use crate::splitoff::{obtain_integer_realization, SplitError, SplitObserver};

/// A tree edge whose cut requirement is below 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreconditionViolation {
    pub edge: EdgeId,
    pub requirement: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<PreconditionViolation>,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cut requirement below 2 on edges")?;
        for v in &self.violations {
            write!(f, " #{} (R = {})", v.edge, v.requirement)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(ViolationReport),
    #[error("internal solver error: {0}")]
    Split(#[from] SplitError),
    #[error("internal solver error: {0}")]
    Join(#[from] JoinError),
    #[error("internal solver error: realization cost {cost} differs from optimum {formula}")]
    FormulaMismatch { cost: Rational, formula: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub realization: Realization,
    /// The feasible tree capacity that was split off.
    pub capacity: EdgeCapacity,
    pub join: JoinResult,
    pub cost: Rational,
    pub formula_cost: Rational,
}

/// Lists every tree edge whose cut requirement is at most 1.
pub fn check_preconditions(instance: &Instance) -> Result<(), ViolationReport> {
    let violations: Vec<_> = instance
        .base_capacity()
        .values()
        .iter()
        .enumerate()
        .filter(|&(_, &r)| r <= 1)
        .map(|(edge, &requirement)| PreconditionViolation { edge, requirement })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ViolationReport { violations })
    }
}

/// Cut requirements plus the cheapest parity repair, and the repaired capacity.
fn optimal_capacity(instance: &Instance) -> Result<(EdgeCapacity, JoinResult), SolveError> {
    check_preconditions(instance).map_err(SolveError::PreconditionViolated)?;
    let mut c = instance.base_capacity();
    let join = min_cost_ij_join(&parity_sets(instance, &c))?;
    for &e in &join.edges {
        c.set(e, c.get(e) + 1);
    }
    Ok((c, join))
}

/// `Σ l(e)·R(X_e) + l(F)` for a cheapest inner-odd join `F`.
pub fn optimal_cost_formula(instance: &Instance) -> Result<Rational, SolveError> {
    check_preconditions(instance).map_err(SolveError::PreconditionViolated)?;
    let base = instance.base_capacity();
    let join = min_cost_ij_join(&parity_sets(instance, &base))?;
    Ok(base.cost(instance.tree()) + join.cost)
}

pub fn solve(instance: &Instance) -> Result<Solution, SolveError> {
    solve_with(instance, &mut ())
}

/// [`solve`], reporting every splitting step to `observer`.
pub fn solve_with(
    instance: &Instance,
    observer: &mut dyn SplitObserver,
) -> Result<Solution, SolveError> {
    let (capacity, join) = optimal_capacity(instance)?;
    let formula_cost = capacity.cost(instance.tree());
    let realization = obtain_integer_realization(instance, &capacity, observer)?;
    let cost = instance
        .realization_cost(&realization)
        .expect("splitting yields terminal pairs only");
    if cost != formula_cost {
        return Err(SolveError::FormulaMismatch {
            cost,
            formula: formula_cost,
        });
    }
    Ok(Solution {
        realization,
        capacity,
        join,
        cost,
        formula_cost,
    })
}
