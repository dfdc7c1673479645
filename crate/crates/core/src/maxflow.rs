//! Integer max-flow and pairwise edge-connectivity on undirected capacitated graphs.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::model::{ordered, Capacity, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("source and sink are the same node {0}")]
    SameNode(NodeId),
}

/// Undirected multigraph with integer multiplicities, stored as capacities.
///
/// Loops are never stored: they carry no flow and cost nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacitatedMultigraph {
    adjacency: Vec<BTreeMap<NodeId, Capacity>>,
}

impl CapacitatedMultigraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            adjacency: vec![BTreeMap::new(); node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn capacity(&self, u: NodeId, v: NodeId) -> Capacity {
        self.adjacency[u].get(&v).copied().unwrap_or(0)
    }

    pub fn add(&mut self, u: NodeId, v: NodeId, c: Capacity) {
        if u == v || c == 0 {
            return;
        }
        *self.adjacency[u].entry(v).or_insert(0) += c;
        *self.adjacency[v].entry(u).or_insert(0) += c;
    }

    /// Removes `c` units between `u` and `v`.
    ///
    /// # Panics
    /// If fewer than `c` units are present.
    pub fn remove(&mut self, u: NodeId, v: NodeId, c: Capacity) {
        if u == v || c == 0 {
            return;
        }
        for (a, b) in [(u, v), (v, u)] {
            let slot = self.adjacency[a].get_mut(&b).expect("edge present");
            *slot = slot.checked_sub(c).expect("enough capacity to remove");
            if *slot == 0 {
                self.adjacency[a].remove(&b);
            }
        }
    }

    /// Total capacity incident to `u`.
    pub fn degree(&self, u: NodeId) -> Capacity {
        self.adjacency[u].values().sum()
    }

    /// Neighbors of `u` with positive capacity, ascending.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, Capacity)> + '_ {
        self.adjacency[u].iter().map(|(&v, &c)| (v, c))
    }

    /// Every positive pair once, as `(u, v, z)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId, Capacity)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.range(u + 1..).map(move |(&v, &c)| (u, v, c)))
    }

    fn check(&self, s: NodeId, t: NodeId) -> Result<(), FlowError> {
        let n = self.node_count();
        if s >= n {
            return Err(FlowError::UnknownNode(s));
        }
        if t >= n {
            return Err(FlowError::UnknownNode(t));
        }
        if s == t {
            return Err(FlowError::SameNode(s));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    residual: Capacity,
}

/// Dinic's algorithm on the undirected graph; each undirected edge becomes a
/// pair of opposite arcs sharing one residual budget.
struct Dinic {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl Dinic {
    fn new(g: &CapacitatedMultigraph) -> Self {
        let n = g.node_count();
        let mut arcs = Vec::new();
        let mut out = vec![Vec::new(); n];
        for (u, v, c) in g.pairs() {
            out[u].push(arcs.len());
            arcs.push(Arc { to: v, residual: c });
            out[v].push(arcs.len());
            arcs.push(Arc { to: u, residual: c });
        }
        Self {
            arcs,
            out,
            level: vec![-1; n],
            cursor: vec![0; n],
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let arc = self.arcs[a];
                if arc.residual > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[x] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, limit: Capacity) -> Capacity {
        if x == t {
            return limit;
        }
        while self.cursor[x] < self.out[x].len() {
            let a = self.out[x][self.cursor[x]];
            let Arc { to, residual } = self.arcs[a];
            if residual > 0 && self.level[to] == self.level[x] + 1 {
                let pushed = self.dfs(to, t, limit.min(residual));
                if pushed > 0 {
                    self.arcs[a].residual -= pushed;
                    self.arcs[a ^ 1].residual += pushed;
                    return pushed;
                }
            }
            self.cursor[x] += 1;
        }
        0
    }

    /// Pushes flow until `bound` is reached or no augmenting path remains.
    fn run(&mut self, s: usize, t: usize, bound: Capacity) -> Capacity {
        let mut flow = 0;
        while flow < bound && self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.dfs(s, t, bound - flow);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
                if flow >= bound {
                    break;
                }
            }
        }
        flow
    }

    /// Nodes reachable from the source in the residual graph.
    fn source_side(&self, s: usize) -> Vec<bool> {
        let mut side = vec![false; self.out.len()];
        side[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.out[x] {
                let arc = self.arcs[a];
                if arc.residual > 0 && !side[arc.to] {
                    side[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        side
    }
}

/// Exact maximum `s`-`t` flow, equal to the minimum cut separating them.
pub fn max_flow(g: &CapacitatedMultigraph, s: NodeId, t: NodeId) -> Result<Capacity, FlowError> {
    g.check(s, t)?;
    Ok(Dinic::new(g).run(s, t, Capacity::MAX))
}

/// Whether the `s`-`t` connectivity is at least `bound`; stops early once it is.
pub fn connectivity_at_least(
    g: &CapacitatedMultigraph,
    s: NodeId,
    t: NodeId,
    bound: Capacity,
) -> Result<bool, FlowError> {
    g.check(s, t)?;
    if bound == 0 {
        return Ok(true);
    }
    Ok(Dinic::new(g).run(s, t, bound) >= bound)
}

/// A minimum `s`-`t` cut: its value and the source side as a membership mask.
pub fn min_cut(
    g: &CapacitatedMultigraph,
    s: NodeId,
    t: NodeId,
) -> Result<(Capacity, Vec<bool>), FlowError> {
    g.check(s, t)?;
    let mut dinic = Dinic::new(g);
    let value = dinic.run(s, t, Capacity::MAX);
    Ok((value, dinic.source_side(s)))
}

/// Equivalent flow tree over `nodes` (Gusfield): pairwise connectivity equals
/// the minimum edge weight on the tree path. Returned as `(a, b, λ(a, b))`
/// edges; `nodes.len() - 1` max-flow computations.
pub fn equivalent_flow_tree(
    g: &CapacitatedMultigraph,
    nodes: &[NodeId],
) -> Vec<(NodeId, NodeId, Capacity)> {
    let k = nodes.len();
    let mut parent = vec![0usize; k];
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    for i in 1..k {
        let (value, side) = min_cut(g, nodes[i], nodes[parent[i]]).expect("distinct nodes");
        edges.push((nodes[i], nodes[parent[i]], value));
        for j in i + 1..k {
            if side[nodes[j]] && parent[j] == parent[i] {
                parent[j] = i;
            }
        }
    }
    edges
}

/// All pairwise connectivities read off a weighted tree by path minima.
pub(crate) fn path_minima(
    nodes: &[NodeId],
    tree: &[(NodeId, NodeId, Capacity)],
) -> BTreeMap<(NodeId, NodeId), Capacity> {
    let mut adj: BTreeMap<NodeId, Vec<(NodeId, Capacity)>> = BTreeMap::new();
    for &(a, b, w) in tree {
        adj.entry(a).or_default().push((b, w));
        adj.entry(b).or_default().push((a, w));
    }
    let mut out = BTreeMap::new();
    for &src in nodes {
        let mut best: BTreeMap<NodeId, Capacity> = BTreeMap::from([(src, Capacity::MAX)]);
        let mut stack = vec![src];
        while let Some(x) = stack.pop() {
            let bx = best[&x];
            for &(y, w) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::btree_map::Entry::Vacant(slot) = best.entry(y) {
                    slot.insert(bx.min(w));
                    stack.push(y);
                }
            }
        }
        for (&y, &v) in &best {
            if src < y {
                out.insert(ordered(src, y), v);
            }
        }
    }
    out
}

/// Connectivity `λ(x, y)` for every pair of positive-degree nodes other than `exclude`.
pub fn connectivity_snapshot(
    g: &CapacitatedMultigraph,
    exclude: NodeId,
) -> BTreeMap<(NodeId, NodeId), Capacity> {
    let nodes: Vec<NodeId> = (0..g.node_count())
        .filter(|&x| g.degree(x) > 0 || x == exclude)
        .collect();
    let tree = equivalent_flow_tree(g, &nodes);
    let mut all = path_minima(&nodes, &tree);
    all.retain(|&(a, b), _| a != exclude && b != exclude);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CapacitatedMultigraph {
        let mut g = CapacitatedMultigraph::new(3);
        g.add(0, 1, 1);
        g.add(1, 2, 1);
        g.add(0, 2, 1);
        g
    }

    #[test]
    fn triangle_flows() {
        let g = triangle();
        for (s, t) in [(0, 1), (1, 2), (0, 2), (2, 0)] {
            assert_eq!(max_flow(&g, s, t).unwrap(), 2);
        }
    }

    #[test]
    fn star_bottleneck() {
        // s = 0, a = 1, b = 2
        let mut g = CapacitatedMultigraph::new(3);
        g.add(0, 1, 3);
        g.add(0, 2, 2);
        assert_eq!(max_flow(&g, 1, 2).unwrap(), 2);
        assert!(connectivity_at_least(&g, 1, 2, 2).unwrap());
        assert!(!connectivity_at_least(&g, 1, 2, 3).unwrap());
    }

    #[test]
    fn disconnected_sides() {
        let mut g = CapacitatedMultigraph::new(4);
        g.add(0, 1, 3);
        g.add(2, 3, 3);
        assert_eq!(max_flow(&g, 0, 3).unwrap(), 0);
    }

    #[test]
    fn errors() {
        let g = triangle();
        assert_eq!(max_flow(&g, 1, 1), Err(FlowError::SameNode(1)));
        assert_eq!(max_flow(&g, 0, 7), Err(FlowError::UnknownNode(7)));
    }

    #[test]
    fn loops_and_removal() {
        let mut g = CapacitatedMultigraph::new(2);
        g.add(0, 0, 5);
        assert_eq!(g.degree(0), 0);
        g.add(0, 1, 3);
        g.remove(1, 0, 2);
        assert_eq!(g.capacity(0, 1), 1);
        g.remove(0, 1, 1);
        assert_eq!(g.neighbors(0).count(), 0);
    }

    #[test]
    fn snapshots() {
        // star s=0 with a,b,c = 1,2,3 at capacity 2
        let mut g = CapacitatedMultigraph::new(4);
        for x in 1..=3 {
            g.add(0, x, 2);
        }
        let snap = connectivity_snapshot(&g, 0);
        assert_eq!(
            snap,
            BTreeMap::from([((1, 2), 2), ((1, 3), 2), ((2, 3), 2)])
        );

        // path a - s - b with capacities (3, 2)
        let mut g = CapacitatedMultigraph::new(3);
        g.add(1, 0, 3);
        g.add(0, 2, 2);
        assert_eq!(connectivity_snapshot(&g, 0), BTreeMap::from([((1, 2), 2)]));
    }
}
