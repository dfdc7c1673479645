//! Turning a feasible tree capacity into a realization by splitting off
//! every inner node.
//!
//! The tree edges become capacitated edges of a multigraph on all tree nodes.
//! Inner nodes are then eliminated one at a time: while the active node `s`
//! has edges, some capacity on a pair `su`, `sw` is replaced by capacity on
//! `uw`, in the largest amount that keeps the edge-connectivity between
//! every two other nodes at its value from when `s` became active. When all
//! inner nodes are isolated, the remaining edges join terminals only.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::maxflow::{
    connectivity_at_least, equivalent_flow_tree, path_minima, CapacitatedMultigraph,
};
use crate::model::{Capacity, EdgeCapacity, Instance, MetricTree, NodeId, Rational, Realization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("node {neighbor} is not a neighbor of {node}")]
    NotANeighbor { node: NodeId, neighbor: NodeId },
    #[error("no splittable pair at node {node} (degree {degree})")]
    NoSplittablePair { node: NodeId, degree: Capacity },
    #[error("node {node} has odd degree {degree}")]
    OddDegree { node: NodeId, degree: Capacity },
    #[error("inner node {node} still has degree {degree}")]
    ResidualInnerDegree { node: NodeId, degree: Capacity },
}

/// Progress notifications from the elimination, in order:
/// one `Start`, then per inner node an `Activate` followed by its `Split`s,
/// then one `Finish`.
#[derive(Debug)]
pub enum SplitEvent<'a> {
    Start {
        graph: &'a CapacitatedMultigraph,
    },
    Activate {
        node: NodeId,
        graph: &'a CapacitatedMultigraph,
        demands: &'a BTreeMap<(NodeId, NodeId), Capacity>,
    },
    Split {
        node: NodeId,
        u: NodeId,
        w: NodeId,
        amount: Capacity,
        graph: &'a CapacitatedMultigraph,
        demands: &'a BTreeMap<(NodeId, NodeId), Capacity>,
    },
    Finish {
        graph: &'a CapacitatedMultigraph,
    },
}

/// Receives [`SplitEvent`]s. Closures work, and `()` ignores everything.
pub trait SplitObserver {
    fn observe(&mut self, event: &SplitEvent<'_>);
}

impl SplitObserver for () {
    fn observe(&mut self, _: &SplitEvent<'_>) {}
}

impl<F: FnMut(&SplitEvent<'_>)> SplitObserver for F {
    fn observe(&mut self, event: &SplitEvent<'_>) {
        self(event)
    }
}

/// Graph on the tree nodes with `z(u, v) = c(uv)` on tree edges.
pub fn expand_capacity_graph(instance: &Instance, c: &EdgeCapacity) -> CapacitatedMultigraph {
    let tree = instance.tree();
    let mut g = CapacitatedMultigraph::new(tree.node_count());
    for (e, edge) in tree.edges().iter().enumerate() {
        g.add(edge.u, edge.v, c.get(e));
    }
    g
}

/// `Σ d(u, v)·z(u, v)` over node pairs, `d` being the tree distance.
pub fn potential(tree: &MetricTree, g: &CapacitatedMultigraph) -> Rational {
    let mut total = Rational::zero();
    for (u, v, z) in g.pairs() {
        total += tree.distance(u, v).expect("graph nodes are tree nodes")
            * Rational::from_integer(z as i128);
    }
    total
}

/// Elimination of one inner node.
#[derive(Debug, Clone)]
pub struct SplitState {
    graph: CapacitatedMultigraph,
    active: NodeId,
    demands: BTreeMap<(NodeId, NodeId), Capacity>,
    // weighted tree over the non-active nodes whose path minima are the demands;
    // checking its edges certifies every demand
    checks: Vec<(NodeId, NodeId, Capacity)>,
}

impl SplitState {
    /// Activates `active` and snapshots the connectivity among all other nodes.
    pub fn new(graph: CapacitatedMultigraph, active: NodeId) -> Self {
        let nodes: Vec<NodeId> = (0..graph.node_count())
            .filter(|&x| x == active || graph.degree(x) > 0)
            .collect();
        let flow_tree = equivalent_flow_tree(&graph, &nodes);

        // Drop `active` from the flow tree by hanging its other tree neighbors
        // on the heaviest one; path minima between the remaining nodes are unchanged.
        let mut around: Vec<(NodeId, Capacity)> = Vec::new();
        let mut checks = Vec::new();
        for &(a, b, w) in &flow_tree {
            if a == active {
                around.push((b, w));
            } else if b == active {
                around.push((a, w));
            } else {
                checks.push((a, b, w));
            }
        }
        if let Some(&(hub, _)) = around
            .iter()
            .max_by_key(|&&(x, w)| (w, std::cmp::Reverse(x)))
        {
            checks.extend(
                around
                    .iter()
                    .filter(|&&(x, _)| x != hub)
                    .map(|&(x, w)| (x, hub, w)),
            );
        }
        let others: Vec<NodeId> = nodes.iter().copied().filter(|&x| x != active).collect();
        let demands = path_minima(&others, &checks);
        checks.retain(|&(_, _, w)| w > 0);
        Self {
            graph,
            active,
            demands,
            checks,
        }
    }

    pub fn graph(&self) -> &CapacitatedMultigraph {
        &self.graph
    }

    pub fn active_node(&self) -> NodeId {
        self.active
    }

    /// The connectivity snapshot being preserved.
    pub fn demands(&self) -> &BTreeMap<(NodeId, NodeId), Capacity> {
        &self.demands
    }

    pub fn into_graph(self) -> CapacitatedMultigraph {
        self.graph
    }

    fn apply(g: &mut CapacitatedMultigraph, s: NodeId, u: NodeId, w: NodeId, t: Capacity) {
        if u == w {
            g.remove(s, u, 2 * t);
        } else {
            g.remove(s, u, t);
            g.remove(s, w, t);
            g.add(u, w, t);
        }
    }

    fn preserves_demands(&self, u: NodeId, w: NodeId, t: Capacity) -> bool {
        let mut g = self.graph.clone();
        Self::apply(&mut g, self.active, u, w, t);
        self.checks
            .iter()
            .all(|&(a, b, d)| connectivity_at_least(&g, a, b, d).expect("valid pair"))
    }

    /// Largest amount that can be split off the pair `su`, `sw` (a loop when
    /// `u == w`) without dropping any demanded connectivity.
    pub fn admissible_amount(&self, u: NodeId, w: NodeId) -> Result<Capacity, SplitError> {
        let s = self.active;
        let zu = self.graph.capacity(s, u);
        let zw = self.graph.capacity(s, w);
        for (x, z) in [(u, zu), (w, zw)] {
            if z == 0 {
                return Err(SplitError::NotANeighbor {
                    node: s,
                    neighbor: x,
                });
            }
        }
        let most = if u == w { zu / 2 } else { zu.min(zw) };
        if most == 0 || !self.preserves_demands(u, w, 1) {
            return Ok(0);
        }
        if self.preserves_demands(u, w, most) {
            return Ok(most);
        }
        // admissibility is monotone in the amount: lo passes, hi fails
        let (mut lo, mut hi) = (1, most);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.preserves_demands(u, w, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Splits `t` units off the pair `su`, `sw`. No admissibility check.
    pub fn split(&mut self, u: NodeId, w: NodeId, t: Capacity) {
        Self::apply(&mut self.graph, self.active, u, w, t);
    }

    /// Finds the first splittable pair and splits it maximally.
    ///
    /// Distinct neighbor pairs are tried in ascending order before loops.
    /// Returns `None` once the active node is isolated.
    pub fn split_once(&mut self) -> Result<Option<(NodeId, NodeId, Capacity)>, SplitError> {
        let s = self.active;
        let degree = self.graph.degree(s);
        if degree == 0 {
            return Ok(None);
        }
        if degree % 2 == 1 {
            return Err(SplitError::OddDegree { node: s, degree });
        }
        let neighbors: Vec<NodeId> = self.graph.neighbors(s).map(|(x, _)| x).collect();
        let distinct = neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| neighbors[i + 1..].iter().map(move |&w| (u, w)));
        let loops = neighbors.iter().map(|&u| (u, u));
        for (u, w) in distinct.chain(loops) {
            let t = self.admissible_amount(u, w)?;
            if t > 0 {
                self.split(u, w, t);
                return Ok(Some((u, w, t)));
            }
        }
        Err(SplitError::NoSplittablePair { node: s, degree })
    }

    /// Splits until the active node is isolated.
    pub fn split_node(&mut self, observer: &mut dyn SplitObserver) -> Result<(), SplitError> {
        while let Some((u, w, amount)) = self.split_once()? {
            observer.observe(&SplitEvent::Split {
                node: self.active,
                u,
                w,
                amount,
                graph: &self.graph,
                demands: &self.demands,
            });
        }
        Ok(())
    }
}

/// Isolates every inner node of the instance's tree, in ascending node order.
pub fn eliminate_inner_nodes(
    instance: &Instance,
    mut graph: CapacitatedMultigraph,
    observer: &mut dyn SplitObserver,
) -> Result<CapacitatedMultigraph, SplitError> {
    for s in instance.tree().inner_nodes() {
        if graph.degree(s) == 0 {
            continue;
        }
        let mut state = SplitState::new(graph, s);
        observer.observe(&SplitEvent::Activate {
            node: s,
            graph: state.graph(),
            demands: state.demands(),
        });
        state.split_node(observer)?;
        graph = state.into_graph();
    }
    Ok(graph)
}

/// Reads the realization off a graph whose inner nodes are all isolated.
pub fn extract_realization(
    instance: &Instance,
    g: &CapacitatedMultigraph,
) -> Result<Realization, SplitError> {
    let tree = instance.tree();
    if let Some(node) = tree.inner_nodes().find(|&x| g.degree(x) > 0) {
        return Err(SplitError::ResidualInnerDegree {
            node,
            degree: g.degree(node),
        });
    }
    let mut y = Realization::new();
    for (u, v, z) in g.pairs() {
        y.set(u, v, z);
    }
    Ok(y)
}

/// Expands `c`, eliminates all inner nodes and reads off the realization.
///
/// `c` must be feasible for the instance (even load at inner nodes, every
/// edge at least its cut requirement) with all cut requirements at least 2;
/// otherwise a [`SplitError`] may be returned.
pub fn obtain_integer_realization(
    instance: &Instance,
    c: &EdgeCapacity,
    observer: &mut dyn SplitObserver,
) -> Result<Realization, SplitError> {
    let graph = expand_capacity_graph(instance, c);
    observer.observe(&SplitEvent::Start { graph: &graph });
    let graph = eliminate_inner_nodes(instance, graph, observer)?;
    observer.observe(&SplitEvent::Finish { graph: &graph });
    extract_realization(instance, &graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    fn star_graph(za: Capacity, zb: Capacity, zc: Capacity) -> CapacitatedMultigraph {
        // s = 0, a = 1, b = 2, c = 3
        let mut g = CapacitatedMultigraph::new(4);
        g.add(0, 1, za);
        g.add(0, 2, zb);
        g.add(0, 3, zc);
        g
    }

    #[test]
    fn expands_tree_capacities() {
        let inst = Instance::build(&["a", "b"], &["a", "b"], &[("a", "b", r(1))], &[]).unwrap();
        let g = expand_capacity_graph(&inst, &EdgeCapacity::new(vec![5]));
        assert_eq!(g.capacity(0, 1), 5);

        let inst = star(2, 2, 2);
        let g = expand_capacity_graph(&inst, &EdgeCapacity::new(vec![2, 2, 2]));
        let s = inst.tree().node_id("s").unwrap();
        assert_eq!(
            g.neighbors(s).map(|(_, z)| z).collect::<Vec<_>>(),
            vec![2, 2, 2]
        );
    }

    #[test]
    fn admissible_amounts_on_star() {
        let state = SplitState::new(star_graph(2, 2, 2), 0);
        assert_eq!(
            state.demands().values().copied().collect::<Vec<_>>(),
            vec![2, 2, 2]
        );
        assert_eq!(state.admissible_amount(1, 2).unwrap(), 1);
        assert_eq!(state.admissible_amount(1, 1).unwrap(), 0);
        assert_eq!(
            state.admissible_amount(1, 9),
            Err(SplitError::NotANeighbor {
                node: 0,
                neighbor: 9
            })
        );
    }

    #[test]
    fn admissible_amount_on_path() {
        // a = 1 - s = 0 - b = 2
        let mut g = CapacitatedMultigraph::new(3);
        g.add(0, 1, 3);
        g.add(0, 2, 3);
        let mut state = SplitState::new(g, 0);
        assert_eq!(state.admissible_amount(1, 2).unwrap(), 3);
        state.split_node(&mut ()).unwrap();
        assert_eq!(state.graph().capacity(1, 2), 3);
        assert_eq!(state.graph().degree(0), 0);
    }

    #[test]
    fn star_becomes_triangle() {
        let mut state = SplitState::new(star_graph(2, 2, 2), 0);
        state.split_node(&mut ()).unwrap();
        let g = state.into_graph();
        assert_eq!(
            (g.capacity(1, 2), g.capacity(1, 3), g.capacity(2, 3)),
            (1, 1, 1)
        );
    }

    #[test]
    fn uneven_star() {
        // r(a,b) = 3, r(a,c) = r(b,c) = 2
        let mut state = SplitState::new(star_graph(3, 3, 2), 0);
        state.split_node(&mut ()).unwrap();
        let g = state.into_graph();
        assert_eq!(
            (g.capacity(1, 2), g.capacity(1, 3), g.capacity(2, 3)),
            (2, 1, 1)
        );
    }

    #[test]
    fn odd_degree_is_rejected() {
        let mut state = SplitState::new(star_graph(2, 2, 1), 0);
        assert_eq!(
            state.split_once(),
            Err(SplitError::OddDegree { node: 0, degree: 5 })
        );
    }

    #[test]
    fn hanging_node_is_removed_by_loop() {
        // s = 0 hangs on a = 1 with two parallel edges; a - b = 2 carries 2
        let mut g = CapacitatedMultigraph::new(3);
        g.add(0, 1, 2);
        g.add(1, 2, 2);
        let mut state = SplitState::new(g, 0);
        assert_eq!(state.split_once().unwrap(), Some((1, 1, 1)));
        assert_eq!(state.graph().capacity(1, 2), 2);
    }

    #[test]
    fn loop_that_cuts_is_refused() {
        // a = 1 reaches b = 2 only through s = 0
        let mut g = CapacitatedMultigraph::new(3);
        g.add(0, 1, 2);
        g.add(0, 2, 2);
        let state = SplitState::new(g, 0);
        assert_eq!(state.admissible_amount(1, 1).unwrap(), 0);
    }

    #[test]
    fn residual_degree_is_reported() {
        let inst = star(2, 2, 2);
        let g = expand_capacity_graph(&inst, &inst.base_capacity());
        assert!(matches!(
            extract_realization(&inst, &g),
            Err(SplitError::ResidualInnerDegree { .. })
        ));
    }

    #[test]
    fn extraction_keeps_positive_terminal_pairs() {
        let inst = star(2, 2, 2);
        let mut g = CapacitatedMultigraph::new(4);
        g.add(0, 1, 1);
        g.add(1, 2, 1);
        g.add(0, 2, 1);
        g.add(1, 1, 4);
        let y = extract_realization(&inst, &g).unwrap();
        assert_eq!(
            y.iter().collect::<Vec<_>>(),
            vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)]
        );
    }

    #[test]
    fn twin_triangles_parity_fix_cannot_be_split() {
        let inst = twin_triangles();
        let mut c = inst.base_capacity();
        let tree = inst.tree();
        let uv = tree
            .edge_between(tree.node_id("u").unwrap(), tree.node_id("v").unwrap())
            .unwrap();
        // parities at u and v are repaired, but uv is now a cut edge at both
        c.set(uv, 1);
        let g = expand_capacity_graph(&inst, &c);
        assert_eq!(g.pairs().filter(|&(_, _, z)| z == 3).count(), 6);
        assert_eq!(potential(tree, &g), r(37));
        assert!(matches!(
            obtain_integer_realization(&inst, &c, &mut ()),
            Err(SplitError::NoSplittablePair { .. })
        ));
    }
}
