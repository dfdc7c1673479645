//! Checkers and exhaustive oracles, independent of the solver's route.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::maxflow::{max_flow, CapacitatedMultigraph};
use crate::model::{Capacity, EdgeCapacity, EdgeId, Instance, NodeId, Rational, Realization};

/// Largest terminal count [`brute_force_insp`] accepts.
pub const BRUTE_FORCE_TERMINAL_LIMIT: usize = 5;

/// Largest candidate count [`brute_force_insp`] enumerates.
pub const BRUTE_FORCE_CANDIDATE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("a requirement value of 1 is not covered by the formula")]
    ValueOne,
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("no realization with entries at most {0}")]
    NoRealizationWithinBound(Capacity),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizationViolation {
    pub s: NodeId,
    pub t: NodeId,
    pub required: Capacity,
    pub achieved: Capacity,
}

impl RealizationViolation {
    pub fn deficit(&self) -> Capacity {
        self.required - self.achieved
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityViolation {
    /// The capacity is not keyed by the tree's edges.
    WrongEdgeCount { expected: usize, found: usize },
    /// An inner node carries an odd total load.
    OddInnerLoad { node: NodeId, load: Capacity },
    /// An edge is below its cut requirement.
    BelowRequirement {
        edge: EdgeId,
        capacity: Capacity,
        requirement: Capacity,
    },
}

/// Every pair with positive requirement must have enough max-flow under `y`.
pub fn verify_realization(
    instance: &Instance,
    y: &Realization,
) -> Result<(), Vec<RealizationViolation>> {
    let mut g = CapacitatedMultigraph::new(instance.tree().node_count());
    for (s, t, v) in y.iter() {
        g.add(s, t, v);
    }
    let violations: Vec<_> = instance
        .requirements()
        .iter()
        .filter_map(|(s, t, required)| {
            let achieved = max_flow(&g, s, t).expect("distinct terminals");
            (achieved < required).then_some(RealizationViolation {
                s,
                t,
                required,
                achieved,
            })
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Even load at every inner node and every edge at least its cut requirement.
pub fn verify_feasible_capacity(
    instance: &Instance,
    c: &EdgeCapacity,
) -> Result<(), Vec<CapacityViolation>> {
    let tree = instance.tree();
    if c.len() != tree.edge_count() {
        return Err(vec![CapacityViolation::WrongEdgeCount {
            expected: tree.edge_count(),
            found: c.len(),
        }]);
    }
    let mut violations = Vec::new();
    for node in tree.inner_nodes() {
        let load = c.load(tree, node);
        if load % 2 == 1 {
            violations.push(CapacityViolation::OddInnerLoad { node, load });
        }
    }
    for (edge, &requirement) in instance.base_capacity().values().iter().enumerate() {
        if c.get(edge) < requirement {
            violations.push(CapacityViolation::BelowRequirement {
                edge,
                capacity: c.get(edge),
                requirement,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Load each tree edge carries when every pair `ij` routes `y(ij)` along its
/// tree path.
pub fn tree_loads(instance: &Instance, y: &Realization) -> EdgeCapacity {
    let tree = instance.tree();
    let mut loads = vec![0; tree.edge_count()];
    for (e, load) in loads.iter_mut().enumerate() {
        let side = tree.cut_side(e).expect("edge in range");
        *load = y
            .iter()
            .filter(|&(s, t, _)| side.contains(&s) != side.contains(&t))
            .map(|(_, _, v)| v)
            .sum();
    }
    EdgeCapacity::new(loads)
}

/// `Σ l(e)·R(X_e)`: the optimum with fractional capacities allowed.
pub fn fractional_lower_bound(instance: &Instance) -> Rational {
    instance.base_capacity().cost(instance.tree())
}

/// `½·ΣR(u)`: the fractional optimum under uniform unit cost.
pub fn uniform_fractional_formula(values: &[Capacity]) -> Rational {
    Rational::new(values.iter().sum::<Capacity>() as i128, 2)
}

/// `⌈½·ΣR(u)⌉`: the integer optimum under uniform unit cost when no `R(u)` is 1.
pub fn uniform_integer_formula(values: &[Capacity]) -> Result<Rational, VerifyError> {
    if values.contains(&1) {
        return Err(VerifyError::ValueOne);
    }
    Ok(uniform_fractional_formula(values).ceil())
}

/// `R(u)` for every terminal, in terminal order.
pub fn singleton_requirements(instance: &Instance) -> Vec<Capacity> {
    instance
        .terminals()
        .iter()
        .map(|&u| {
            if instance.terminals().len() < 2 {
                return 0;
            }
            instance
                .cut_requirement(&BTreeSet::from([u]))
                .expect("singleton is a proper cut")
        })
        .collect()
}

/// Cheapest integer realization with every entry in `0..=per_edge_bound`,
/// found by enumeration. Feasibility is checked over all terminal cuts, so
/// this shares no code with the flow-based checker. The bound defaults to
/// the largest requirement.
pub fn brute_force_insp(
    instance: &Instance,
    per_edge_bound: Option<Capacity>,
) -> Result<(Realization, Rational), VerifyError> {
    let terminals = instance.terminals();
    let k = terminals.len();
    if k > BRUTE_FORCE_TERMINAL_LIMIT {
        return Err(VerifyError::TooLarge(format!("{k} terminals")));
    }
    let max_r = instance.requirements().max();
    let bound = per_edge_bound.unwrap_or(max_r);
    if bound > max_r {
        return Err(VerifyError::TooLarge(format!(
            "entry bound {bound} above the largest requirement {max_r}"
        )));
    }

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect();
    let radix = bound + 1;
    let total = (0..pairs.len()).try_fold(1u64, |acc, _| acc.checked_mul(radix));
    let total = match total {
        Some(t) if t <= BRUTE_FORCE_CANDIDATE_LIMIT => t,
        _ => {
            return Err(VerifyError::TooLarge(format!(
                "{radix}^{} candidates",
                pairs.len()
            )))
        }
    };

    // cuts are bitmasks over terminal positions containing position 0
    let cuts: Vec<u32> = (1u32..(1 << k))
        .filter(|m| m & 1 == 1 && *m != (1 << k) - 1)
        .collect();
    let cut_requirement: Vec<Capacity> = cuts
        .iter()
        .map(|&m| {
            pairs
                .iter()
                .filter(|&&(i, j)| (m >> i & 1) != (m >> j & 1))
                .map(|&(i, j)| instance.requirement(terminals[i], terminals[j]))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let crossing: Vec<Vec<bool>> = pairs
        .iter()
        .map(|&(i, j)| cuts.iter().map(|&m| (m >> i & 1) != (m >> j & 1)).collect())
        .collect();
    let pair_cost: Vec<Rational> = pairs
        .iter()
        .map(|&(i, j)| instance.tree_distance(terminals[i], terminals[j]).unwrap())
        .collect();

    let decode = |mut code: u64| -> Vec<Capacity> {
        let mut digits = vec![0; pairs.len()];
        for d in digits.iter_mut() {
            *d = code % radix;
            code /= radix;
        }
        digits
    };
    let feasible = |digits: &[Capacity]| {
        cuts.iter().enumerate().all(|(ci, _)| {
            let across: Capacity = digits
                .iter()
                .zip(&crossing)
                .filter(|(_, cross)| cross[ci])
                .map(|(&d, _)| d)
                .sum();
            across >= cut_requirement[ci]
        })
    };

    let mut candidates: Vec<(Rational, u64)> = (0..total)
        .map(|code| {
            let cost = decode(code)
                .iter()
                .zip(&pair_cost)
                .fold(Rational::zero(), |acc, (&d, &c)| {
                    acc + c * Rational::from_integer(d as i128)
                });
            (cost, code)
        })
        .collect();
    candidates.sort();
    for (cost, code) in candidates {
        let digits = decode(code);
        if feasible(&digits) {
            let mut y = Realization::new();
            for (&(i, j), &d) in pairs.iter().zip(&digits) {
                y.set(terminals[i], terminals[j], d);
            }
            return Ok((y, cost));
        }
    }
    Err(VerifyError::NoRealizationWithinBound(bound))
}
