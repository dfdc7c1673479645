//! Minimum-cost parity joins on a tree.
//!
//! An `(I, J)`-join is a set of tree edges `F` such that every node of `I`
//! meets an even number of edges of `F` and every node of `J` an odd number;
//! other nodes are unconstrained. The inner-odd join used by the solver is
//! the special case where `I`/`J` are the inner nodes with even/odd load.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::model::{EdgeCapacity, EdgeId, Instance, MetricTree, NodeId, Rational};

/// Largest edge count [`brute_force_join`] will enumerate.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("no edge set satisfies the parity constraints")]
    Infeasible,
    #[error("node {0} is constrained both even and odd")]
    Overlap(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("{0} edges exceed the enumeration limit of {BRUTE_FORCE_EDGE_LIMIT}")]
    TooLarge(usize),
    #[error("internal error: join fails its own parity check")]
    CertificateFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity constraints over the nodes of a tree.
#[derive(Debug, Clone)]
pub struct ParityInstance<'t> {
    tree: &'t MetricTree,
    even: BTreeSet<NodeId>,
    odd: BTreeSet<NodeId>,
}

impl<'t> ParityInstance<'t> {
    pub fn new(
        tree: &'t MetricTree,
        even: BTreeSet<NodeId>,
        odd: BTreeSet<NodeId>,
    ) -> Result<Self, JoinError> {
        let n = tree.node_count();
        if let Some(&x) = even.iter().chain(&odd).find(|&&x| x >= n) {
            return Err(JoinError::UnknownNode(x));
        }
        if let Some(&x) = even.intersection(&odd).next() {
            return Err(JoinError::Overlap(x));
        }
        Ok(Self { tree, even, odd })
    }

    pub fn tree(&self) -> &'t MetricTree {
        self.tree
    }

    pub fn even_set(&self) -> &BTreeSet<NodeId> {
        &self.even
    }

    pub fn odd_set(&self) -> &BTreeSet<NodeId> {
        &self.odd
    }

    pub fn required(&self, x: NodeId) -> Option<Parity> {
        if self.even.contains(&x) {
            Some(Parity::Even)
        } else if self.odd.contains(&x) {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    fn accepts(&self, x: NodeId, odd_degree: bool) -> bool {
        match self.required(x) {
            None => true,
            Some(Parity::Even) => !odd_degree,
            Some(Parity::Odd) => odd_degree,
        }
    }

    /// Whether `edges` meets every parity constraint.
    pub fn is_satisfied_by(&self, edges: &[EdgeId]) -> bool {
        let mut odd = vec![false; self.tree.node_count()];
        for &e in edges {
            let edge = &self.tree.edges()[e];
            odd[edge.u] ^= true;
            odd[edge.v] ^= true;
        }
        self.tree.nodes().all(|x| self.accepts(x, odd[x]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinResult {
    /// Selected edges, ascending.
    pub edges: Vec<EdgeId>,
    pub cost: Rational,
}

impl JoinResult {
    fn from_edges(tree: &MetricTree, edges: Vec<EdgeId>) -> Self {
        let cost = edges.iter().map(|&e| tree.edges()[e].length).sum();
        Self { edges, cost }
    }
}

/// `I`/`J` for the inner-odd join: inner nodes whose load under `c` is even/odd.
pub fn parity_sets<'a>(instance: &'a Instance, c: &EdgeCapacity) -> ParityInstance<'a> {
    let tree = instance.tree();
    let (even, odd): (BTreeSet<_>, BTreeSet<_>) = tree
        .inner_nodes()
        .partition(|&x| c.load(tree, x).is_multiple_of(2));
    ParityInstance::new(tree, even, odd).expect("partition of inner nodes")
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y < x { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    Some(a? + b?)
}

/// Optimal join cost with some edges forced in (`Some(true)`) or out (`Some(false)`).
///
/// Rooted tree DP; `state[x][p]` is the cheapest selection inside the subtree
/// of `x` where `p` is the parity of selected child edges at `x`.
fn constrained_optimum(p: &ParityInstance<'_>, forced: &[Option<bool>]) -> Option<Rational> {
    let tree = p.tree;
    let mut state: Vec<[Option<Rational>; 2]> =
        vec![[Some(Rational::zero()), None]; tree.node_count()];
    for &x in tree.preorder().iter().rev() {
        let Some((parent, e)) = tree.parent(x) else {
            continue;
        };
        let [even, odd] = state[x];
        // parity at x once the parent edge is decided
        let settle = |edge_taken: bool| {
            let a = if p.accepts(x, edge_taken) { even } else { None };
            let b = if p.accepts(x, !edge_taken) { odd } else { None };
            min_opt(a, b)
        };
        let skip = if forced[e] == Some(true) {
            None
        } else {
            settle(false)
        };
        let take = if forced[e] == Some(false) {
            None
        } else {
            settle(true).map(|v| v + tree.edges()[e].length)
        };
        let [pe, po] = state[parent];
        state[parent] = [
            min_opt(add_opt(pe, skip), add_opt(po, take)),
            min_opt(add_opt(po, skip), add_opt(pe, take)),
        ];
    }
    let root = tree.root();
    let [even, odd] = state[root];
    min_opt(
        if p.accepts(root, false) { even } else { None },
        if p.accepts(root, true) { odd } else { None },
    )
}

/// Minimum-cost `(I, J)`-join in linear time per query.
///
/// Among optimal joins the one with the lexicographically smallest indicator
/// vector in edge order is returned, i.e. earlier edges are left out whenever
/// that keeps the cost optimal.
pub fn min_cost_ij_join(p: &ParityInstance<'_>) -> Result<JoinResult, JoinError> {
    let m = p.tree.edge_count();
    let mut forced = vec![None; m];
    let best = constrained_optimum(p, &forced).ok_or(JoinError::Infeasible)?;
    for e in 0..m {
        forced[e] = Some(false);
        if constrained_optimum(p, &forced) != Some(best) {
            forced[e] = Some(true);
        }
    }
    let edges: Vec<EdgeId> = (0..m).filter(|&e| forced[e] == Some(true)).collect();
    let result = JoinResult::from_edges(p.tree, edges);
    if result.cost != best || !p.is_satisfied_by(&result.edges) {
        return Err(JoinError::CertificateFailed);
    }
    Ok(result)
}

/// Exhaustive minimum over all edge subsets, with the same tie-break as
/// [`min_cost_ij_join`].
pub fn brute_force_join(p: &ParityInstance<'_>) -> Result<JoinResult, JoinError> {
    let m = p.tree.edge_count();
    if m > BRUTE_FORCE_EDGE_LIMIT {
        return Err(JoinError::TooLarge(m));
    }
    let mut best: Option<JoinResult> = None;
    // bit (m - 1 - e) selects edge e, so counting up walks indicator vectors lexicographically
    for code in 0u64..(1u64 << m) {
        let edges: Vec<EdgeId> = (0..m).filter(|&e| code >> (m - 1 - e) & 1 == 1).collect();
        if !p.is_satisfied_by(&edges) {
            continue;
        }
        let candidate = JoinResult::from_edges(p.tree, edges);
        if best.as_ref().is_none_or(|b| candidate.cost < b.cost) {
            best = Some(candidate);
        }
    }
    best.ok_or(JoinError::Infeasible)
}
