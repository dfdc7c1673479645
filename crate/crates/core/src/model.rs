//! Instances, the representing tree, requirements, capacities and realizations.
//!
//! Every identifier handed to the library is a string; internally nodes are
//! addressed by [`NodeId`], an index into the (pruned) tree's node list, and
//! tree edges by [`EdgeId`], an index into its edge list. Both orders follow
//! the input order, so everything downstream is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

/// Exact nonnegative rational used for lengths and costs.
pub type Rational = Ratio<i128>;

/// Index of a node of the representing tree.
pub type NodeId = usize;

/// Index of an edge of the representing tree.
pub type EdgeId = usize;

/// Integer capacity or requirement value.
pub type Capacity = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("tree is not a tree: {0}")]
    NotATree(String),
    #[error("edge {u}-{v} has negative length {length}")]
    NegativeLength {
        u: String,
        v: String,
        length: Rational,
    },
    #[error("terminal `{0}` is not a node of the tree")]
    TerminalNotInTree(String),
    #[error("duplicate requirement for pair {0}-{1}")]
    DuplicateRequirement(String, String),
    #[error("requirement between `{0}` and itself")]
    SelfRequirement(String),
    #[error("requirement names `{0}`, which is not a terminal")]
    UnknownTerminal(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate terminal `{0}`")]
    DuplicateTerminal(String),
    #[error("instance has no terminals")]
    NoTerminals,
    #[error("unknown edge index {0}")]
    UnknownEdge(EdgeId),
    #[error("pair {0}-{1} is not a pair of distinct terminals")]
    UnknownTerminalPair(String, String),
    #[error("cut side must be a nonempty proper subset of the terminals")]
    EmptyOrFullCut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub length: Rational,
}

impl TreeEdge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// The tree representing the edge cost, rooted at a terminal.
///
/// Leaves that are not terminals are removed on construction, so every
/// leaf is a terminal and both sides of every edge cut contain terminals.
#[derive(Debug, Clone)]
pub struct MetricTree {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    terminal: Vec<bool>,
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    root: NodeId,
    // rooted structure
    parent: Vec<Option<(NodeId, EdgeId)>>,
    depth: Vec<usize>,
    root_distance: Vec<Rational>,
    preorder: Vec<NodeId>,
    enter: Vec<usize>,
    exit: Vec<usize>,
    // the endpoint of each edge farther from the root
    lower: Vec<NodeId>,
}

impl PartialEq for MetricTree {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.terminal == other.terminal
            && self.edges == other.edges
            && self.root == other.root
    }
}

impl Eq for MetricTree {}

impl MetricTree {
    fn new(
        names: Vec<String>,
        terminal: Vec<bool>,
        edges: Vec<TreeEdge>,
        root: NodeId,
    ) -> Result<Self, ModelError> {
        let n = names.len();
        if edges.len() + 1 != n {
            return Err(ModelError::NotATree(format!(
                "{} nodes but {} edges",
                n,
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(ModelError::NotATree(format!("loop at `{}`", names[e.u])));
            }
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }

        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root_distance = vec![Rational::zero(); n];
        let mut seen = vec![false; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            preorder.push(x);
            // reversed so children are visited in adjacency order
            for &(y, e) in adjacency[x].iter().rev() {
                if seen[y] {
                    if parent[x].map(|(_, pe)| pe) != Some(e) {
                        return Err(ModelError::NotATree(format!(
                            "cycle through `{}`",
                            names[y]
                        )));
                    }
                    continue;
                }
                seen[y] = true;
                parent[y] = Some((x, e));
                depth[y] = depth[x] + 1;
                root_distance[y] = root_distance[x] + edges[e].length;
                stack.push(y);
            }
        }
        if let Some(lost) = seen.iter().position(|s| !s) {
            return Err(ModelError::NotATree(format!(
                "`{}` is not reachable",
                names[lost]
            )));
        }

        let mut enter = vec![0; n];
        let mut exit = vec![0; n];
        for (pos, &x) in preorder.iter().enumerate() {
            enter[x] = pos;
        }
        // subtree of x occupies preorder[enter[x]..exit[x]]
        for &x in preorder.iter().rev() {
            exit[x] = exit[x].max(enter[x] + 1);
            if let Some((p, _)) = parent[x] {
                exit[p] = exit[p].max(exit[x]);
            }
        }
        let lower = edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                if parent[e.v].map(|(_, pe)| pe) == Some(id) {
                    e.v
                } else {
                    e.u
                }
            })
            .collect();

        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            names,
            index,
            terminal,
            edges,
            adjacency,
            root,
            parent,
            depth,
            root_distance,
            preorder,
            enter,
            exit,
            lower,
        })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.names.len()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&TreeEdge, ModelError> {
        self.edges.get(e).ok_or(ModelError::UnknownEdge(e))
    }

    pub fn name(&self, x: NodeId) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownNode(name.to_string()))
    }

    /// Finds the edge joining `a` and `b`, in either orientation.
    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|&&(y, _)| y == b)
            .map(|&(_, e)| e)
    }

    pub fn is_terminal(&self, x: NodeId) -> bool {
        self.terminal[x]
    }

    /// Nodes of the tree that are not terminals.
    pub fn inner_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(move |&x| !self.terminal[x])
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Incident `(neighbor, edge)` pairs of `x`.
    pub fn incident(&self, x: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[x]
    }

    pub fn parent(&self, x: NodeId) -> Option<(NodeId, EdgeId)> {
        self.parent[x]
    }

    /// Nodes in depth-first preorder from the root.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    /// Endpoint of `e` on the far side from the root.
    pub fn lower_endpoint(&self, e: EdgeId) -> NodeId {
        self.lower[e]
    }

    /// Whether `x` lies in the subtree hanging below `top`.
    pub fn in_subtree(&self, top: NodeId, x: NodeId) -> bool {
        self.enter[top] <= self.enter[x] && self.enter[x] < self.exit[top]
    }

    fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap().0;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap().0;
        }
        while a != b {
            a = self.parent[a].unwrap().0;
            b = self.parent[b].unwrap().0;
        }
        a
    }

    /// Length of the unique tree path between `i` and `j`.
    pub fn distance(&self, i: NodeId, j: NodeId) -> Result<Rational, ModelError> {
        let n = self.node_count();
        if i >= n || j >= n {
            return Err(ModelError::UnknownNode(i.max(j).to_string()));
        }
        let top = self.lca(i, j);
        Ok(self.root_distance[i] + self.root_distance[j] - self.root_distance[top] * 2)
    }

    /// All pairwise tree distances, indexed `[i][j]`.
    pub fn distance_matrix(&self) -> Vec<Vec<Rational>> {
        self.nodes()
            .map(|i| self.nodes().map(|j| self.distance(i, j).unwrap()).collect())
            .collect()
    }

    /// Edges on the tree path between `i` and `j`.
    pub fn path_edges(&self, mut i: NodeId, mut j: NodeId) -> Vec<EdgeId> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[i] > self.depth[j] {
            let (p, e) = self.parent[i].unwrap();
            up.push(e);
            i = p;
        }
        while self.depth[j] > self.depth[i] {
            let (p, e) = self.parent[j].unwrap();
            down.push(e);
            j = p;
        }
        while i != j {
            let (pi, ei) = self.parent[i].unwrap();
            let (pj, ej) = self.parent[j].unwrap();
            up.push(ei);
            down.push(ej);
            i = pi;
            j = pj;
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// The terminals reachable from the root without crossing `e`.
    pub fn cut_side(&self, e: EdgeId) -> Result<BTreeSet<NodeId>, ModelError> {
        self.edge(e)?;
        let below = self.lower[e];
        Ok(self
            .nodes()
            .filter(|&x| self.terminal[x] && !self.in_subtree(below, x))
            .collect())
    }
}

/// Symmetric integer requirement over unordered terminal pairs.
///
/// Only positive values are stored; absent pairs mean zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RequirementMatrix {
    values: BTreeMap<(NodeId, NodeId), Capacity>,
}

pub(crate) fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl RequirementMatrix {
    pub fn get(&self, s: NodeId, t: NodeId) -> Capacity {
        self.values.get(&ordered(s, t)).copied().unwrap_or(0)
    }

    fn set(&mut self, s: NodeId, t: NodeId, r: Capacity) {
        if r > 0 {
            self.values.insert(ordered(s, t), r);
        }
    }

    /// Positive entries as `(s, t, r)` with `s < t`.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId, Capacity)> + '_ {
        self.values.iter().map(|(&(s, t), &r)| (s, t, r))
    }

    pub fn max(&self) -> Capacity {
        self.values.values().copied().max().unwrap_or(0)
    }
}

/// An integer capacity on every edge of the tree, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCapacity(Vec<Capacity>);

impl EdgeCapacity {
    pub fn new(values: Vec<Capacity>) -> Self {
        Self(values)
    }

    pub fn get(&self, e: EdgeId) -> Capacity {
        self.0[e]
    }

    pub fn set(&mut self, e: EdgeId, c: Capacity) {
        self.0[e] = c;
    }

    pub fn values(&self) -> &[Capacity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total capacity on the edges incident to `x`.
    pub fn load(&self, tree: &MetricTree, x: NodeId) -> Capacity {
        tree.incident(x).iter().map(|&(_, e)| self.0[e]).sum()
    }

    /// `Σ l(e)·c(e)`.
    pub fn cost(&self, tree: &MetricTree) -> Rational {
        tree.edges()
            .iter()
            .zip(&self.0)
            .map(|(e, &c)| e.length * Rational::from_integer(c as i128))
            .sum()
    }
}

/// Sparse integer capacity on terminal pairs. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Realization {
    values: BTreeMap<(NodeId, NodeId), Capacity>,
}

impl Realization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: NodeId, t: NodeId) -> Capacity {
        self.values.get(&ordered(s, t)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, s: NodeId, t: NodeId, y: Capacity) {
        if y == 0 {
            self.values.remove(&ordered(s, t));
        } else {
            self.values.insert(ordered(s, t), y);
        }
    }

    pub fn add(&mut self, s: NodeId, t: NodeId, y: Capacity) {
        let cur = self.get(s, t);
        self.set(s, t, cur + y);
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId, Capacity)> + '_ {
        self.values.iter().map(|(&(s, t), &y)| (s, t, y))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A validated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    terminals: Vec<NodeId>,
    tree: MetricTree,
    requirements: RequirementMatrix,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instance: {} terminals, {} tree nodes, {} requirement pairs",
            self.terminals.len(),
            self.tree.node_count(),
            self.requirements.values.len()
        )
    }
}

impl Instance {
    /// Validates raw input and builds an instance.
    ///
    /// Non-terminal leaves are pruned repeatedly before the tree is rooted at
    /// the first terminal. Pairs missing from `requirements` get `r = 0`.
    pub fn build<S: AsRef<str>>(
        terminals: &[S],
        tree_nodes: &[S],
        tree_edges: &[(S, S, Rational)],
        requirements: &[(S, S, Capacity)],
    ) -> Result<Self, ModelError> {
        if terminals.is_empty() {
            return Err(ModelError::NoTerminals);
        }
        let mut raw_index: HashMap<&str, usize> = HashMap::new();
        for (i, name) in tree_nodes.iter().enumerate() {
            if raw_index.insert(name.as_ref(), i).is_some() {
                return Err(ModelError::DuplicateNode(name.as_ref().to_string()));
            }
        }
        let mut is_terminal = vec![false; tree_nodes.len()];
        let mut seen_terminals = BTreeSet::new();
        for t in terminals {
            let t = t.as_ref();
            let &i = raw_index
                .get(t)
                .ok_or_else(|| ModelError::TerminalNotInTree(t.to_string()))?;
            if !seen_terminals.insert(t) {
                return Err(ModelError::DuplicateTerminal(t.to_string()));
            }
            is_terminal[i] = true;
        }
        let mut raw_edges = Vec::with_capacity(tree_edges.len());
        for (u, v, length) in tree_edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *raw_index
                .get(u)
                .ok_or_else(|| ModelError::UnknownNode(u.to_string()))?;
            let iv = *raw_index
                .get(v)
                .ok_or_else(|| ModelError::UnknownNode(v.to_string()))?;
            if *length < Rational::zero() {
                return Err(ModelError::NegativeLength {
                    u: u.to_string(),
                    v: v.to_string(),
                    length: *length,
                });
            }
            raw_edges.push((iu, iv, *length));
        }
        let n = tree_nodes.len();
        if raw_edges.len() + 1 != n {
            return Err(ModelError::NotATree(format!(
                "{} nodes but {} edges",
                n,
                raw_edges.len()
            )));
        }

        // Prune non-terminal leaves until none is left.
        let mut degree = vec![0usize; n];
        for &(u, v, _) in &raw_edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut edge_alive = vec![true; raw_edges.len()];
        let mut node_alive = vec![true; n];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, &(u, v, _)) in raw_edges.iter().enumerate() {
            incident[u].push(k);
            incident[v].push(k);
        }
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&x| !is_terminal[x] && degree[x] <= 1)
            .collect();
        while let Some(x) = queue.pop_front() {
            if !node_alive[x] || degree[x] > 1 {
                continue;
            }
            node_alive[x] = false;
            for &k in &incident[x] {
                if edge_alive[k] {
                    edge_alive[k] = false;
                    let (u, v, _) = raw_edges[k];
                    let y = if u == x { v } else { u };
                    degree[y] -= 1;
                    degree[x] -= 1;
                    if !is_terminal[y] && degree[y] <= 1 {
                        queue.push_back(y);
                    }
                }
            }
        }

        let mut remap = vec![usize::MAX; n];
        let mut names = Vec::new();
        let mut terminal_flags = Vec::new();
        for x in 0..n {
            if node_alive[x] {
                remap[x] = names.len();
                names.push(tree_nodes[x].as_ref().to_string());
                terminal_flags.push(is_terminal[x]);
            }
        }
        let edges: Vec<TreeEdge> = raw_edges
            .iter()
            .zip(&edge_alive)
            .filter(|(_, &alive)| alive)
            .map(|(&(u, v, length), _)| {
                if remap[u] == usize::MAX || remap[v] == usize::MAX {
                    // an edge survived next to a pruned node: only possible with a cycle
                    return Err(ModelError::NotATree("cycle detected".into()));
                }
                Ok(TreeEdge {
                    u: remap[u],
                    v: remap[v],
                    length,
                })
            })
            .collect::<Result<_, _>>()?;
        let terminal_ids: Vec<NodeId> = terminals
            .iter()
            .map(|t| remap[raw_index[t.as_ref()]])
            .collect();
        let tree = MetricTree::new(names, terminal_flags, edges, terminal_ids[0])?;

        let mut matrix = RequirementMatrix::default();
        let mut seen_pairs = BTreeSet::new();
        for (s, t, r) in requirements {
            let (s, t) = (s.as_ref(), t.as_ref());
            let lookup = |name: &str| {
                tree.node_id(name)
                    .ok()
                    .filter(|&x| tree.is_terminal(x))
                    .ok_or_else(|| ModelError::UnknownTerminal(name.to_string()))
            };
            let (is, it) = (lookup(s)?, lookup(t)?);
            if is == it {
                return Err(ModelError::SelfRequirement(s.to_string()));
            }
            if !seen_pairs.insert(ordered(is, it)) {
                return Err(ModelError::DuplicateRequirement(
                    s.to_string(),
                    t.to_string(),
                ));
            }
            matrix.set(is, it, *r);
        }

        Ok(Self {
            terminals: terminal_ids,
            tree,
            requirements: matrix,
        })
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn tree(&self) -> &MetricTree {
        &self.tree
    }

    pub fn requirements(&self) -> &RequirementMatrix {
        &self.requirements
    }

    pub fn requirement(&self, s: NodeId, t: NodeId) -> Capacity {
        self.requirements.get(s, t)
    }

    pub fn tree_distance(&self, i: NodeId, j: NodeId) -> Result<Rational, ModelError> {
        self.tree.distance(i, j)
    }

    /// `R(X)`: the largest requirement between a terminal in `side` and one outside it.
    pub fn cut_requirement(&self, side: &BTreeSet<NodeId>) -> Result<Capacity, ModelError> {
        if let Some(&x) = side.iter().find(|&&x| !self.is_terminal_id(x)) {
            return Err(ModelError::UnknownTerminal(x.to_string()));
        }
        if side.is_empty() || side.len() == self.terminals.len() {
            return Err(ModelError::EmptyOrFullCut);
        }
        Ok(self
            .requirements
            .iter()
            .filter(|&(s, t, _)| side.contains(&s) != side.contains(&t))
            .map(|(_, _, r)| r)
            .max()
            .unwrap_or(0))
    }

    fn is_terminal_id(&self, x: NodeId) -> bool {
        x < self.tree.node_count() && self.tree.is_terminal(x)
    }

    /// `c^R`: every tree edge gets the requirement of the cut it induces.
    pub fn base_capacity(&self) -> EdgeCapacity {
        let values = (0..self.tree.edge_count())
            .map(|e| {
                let side = self.tree.cut_side(e).expect("edge index in range");
                self.cut_requirement(&side)
                    .expect("pruned trees have nonempty cut sides")
            })
            .collect();
        EdgeCapacity(values)
    }

    /// `Σ a(ij)·y(ij)` with `a` the tree distance.
    pub fn realization_cost(&self, y: &Realization) -> Result<Rational, ModelError> {
        let mut total = Rational::zero();
        for (s, t, v) in y.iter() {
            if s == t || !self.is_terminal_id(s) || !self.is_terminal_id(t) {
                return Err(ModelError::UnknownTerminalPair(
                    s.to_string(),
                    t.to_string(),
                ));
            }
            total += self.tree.distance(s, t)? * Rational::from_integer(v as i128);
        }
        Ok(total)
    }

    pub fn terminal_name(&self, x: NodeId) -> &str {
        self.tree.name(x)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn id(inst: &Instance, name: &str) -> NodeId {
        inst.tree().node_id(name).unwrap()
    }

    fn set(inst: &Instance, names: &[&str]) -> BTreeSet<NodeId> {
        names.iter().map(|n| id(inst, n)).collect()
    }

    #[test]
    fn builds_twin_triangles() {
        let inst = twin_triangles();
        assert_eq!(inst.terminals().len(), 6);
        assert_eq!(inst.tree().node_count(), 8);
        assert_eq!(inst.tree().root(), id(&inst, "u1"));
    }

    #[test]
    fn single_terminal_is_valid() {
        let inst = Instance::build::<&str>(&["a"], &["a"], &[], &[]).unwrap();
        assert_eq!(inst.tree().edge_count(), 0);
        assert!(inst.base_capacity().is_empty());
    }

    #[test]
    fn rejects_cycle() {
        let err = Instance::build(
            &["a", "b", "c"],
            &["a", "b", "c", "d"],
            &[("a", "b", r(1)), ("b", "c", r(1)), ("c", "a", r(1))],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::NotATree(_)), "{err}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let nodes = ["a", "b"];
        let e = [("a", "b", r(1))];
        assert!(matches!(
            Instance::build(&["a", "z"], &nodes, &e, &[]),
            Err(ModelError::TerminalNotInTree(_))
        ));
        assert!(matches!(
            Instance::build(&["a", "b"], &nodes, &[("a", "b", r(-1))], &[]),
            Err(ModelError::NegativeLength { .. })
        ));
        assert!(matches!(
            Instance::build(&["a", "b"], &nodes, &e, &[("a", "b", 2), ("b", "a", 3)]),
            Err(ModelError::DuplicateRequirement(..))
        ));
        assert!(matches!(
            Instance::build(&["a", "b"], &nodes, &e, &[("a", "a", 2)]),
            Err(ModelError::SelfRequirement(_))
        ));
        assert!(matches!(
            Instance::build(&["a", "b"], &["a", "b", "c"], &[("a", "b", r(1))], &[]),
            Err(ModelError::NotATree(_))
        ));
        assert!(matches!(
            Instance::build(
                &["a", "b", "c", "d"],
                &["a", "b", "c", "d"],
                &[("a", "b", r(1)), ("a", "b", r(1)), ("c", "d", r(1))],
                &[]
            ),
            Err(ModelError::NotATree(_))
        ));
    }

    #[test]
    fn prunes_non_terminal_leaves() {
        // x hangs off b, y-z is a dangling non-terminal chain
        let inst = Instance::build(
            &["a", "b"],
            &["a", "b", "x", "y", "z"],
            &[
                ("a", "b", r(1)),
                ("b", "x", r(4)),
                ("a", "y", r(1)),
                ("y", "z", r(1)),
            ],
            &[("a", "b", 2)],
        )
        .unwrap();
        assert_eq!(inst.tree().names(), &["a", "b"]);
        assert_eq!(inst.tree().edge_count(), 1);
        assert_eq!(inst.base_capacity().values(), &[2]);
    }

    #[test]
    fn distances_on_twin_triangles() {
        let inst = twin_triangles();
        assert_eq!(
            inst.tree_distance(id(&inst, "u1"), id(&inst, "v1"))
                .unwrap(),
            r(5)
        );
        assert_eq!(
            inst.tree_distance(id(&inst, "u1"), id(&inst, "u2"))
                .unwrap(),
            r(4)
        );
        assert_eq!(
            inst.tree_distance(id(&inst, "v3"), id(&inst, "v3"))
                .unwrap(),
            r(0)
        );
        assert!(inst.tree_distance(0, 99).is_err());
    }

    #[test]
    fn cut_sides() {
        let inst = twin_triangles();
        let t = inst.tree();
        let uv = t.edge_between(id(&inst, "u"), id(&inst, "v")).unwrap();
        assert_eq!(t.cut_side(uv).unwrap(), set(&inst, &["u1", "u2", "u3"]));
        let uu1 = t.edge_between(id(&inst, "u"), id(&inst, "u1")).unwrap();
        assert_eq!(
            t.cut_side(uu1).unwrap(),
            set(&inst, &["u1"]),
            "root side of a root leaf edge is the root alone"
        );
        assert!(matches!(t.cut_side(42), Err(ModelError::UnknownEdge(42))));

        let star = star(2, 2, 2);
        let sb = star
            .tree()
            .edge_between(id(&star, "s"), id(&star, "b"))
            .unwrap();
        assert_eq!(star.tree().cut_side(sb).unwrap(), set(&star, &["a", "c"]));

        let path = Instance::build(&["a", "b"], &["a", "b"], &[("a", "b", r(1))], &[]).unwrap();
        assert_eq!(path.tree().cut_side(0).unwrap(), set(&path, &["a"]));
    }

    #[test]
    fn cut_requirements() {
        let inst = twin_triangles();
        let x = set(&inst, &["u2", "u3", "v1", "v2", "v3"]);
        assert_eq!(inst.cut_requirement(&x).unwrap(), 3);
        assert_eq!(
            inst.cut_requirement(&set(&inst, &["u1", "u2", "u3"]))
                .unwrap(),
            0
        );
        assert_eq!(
            inst.cut_requirement(&BTreeSet::new()),
            Err(ModelError::EmptyOrFullCut)
        );
        let all: BTreeSet<_> = inst.terminals().iter().copied().collect();
        assert_eq!(inst.cut_requirement(&all), Err(ModelError::EmptyOrFullCut));

        let constant = star(4, 4, 4);
        assert_eq!(
            constant.cut_requirement(&set(&constant, &["b"])).unwrap(),
            4
        );
    }

    #[test]
    fn base_capacities() {
        let inst = twin_triangles();
        let c = inst.base_capacity();
        for (e, edge) in inst.tree().edges().iter().enumerate() {
            let inner_edge = !inst.tree().is_terminal(edge.u) && !inst.tree().is_terminal(edge.v);
            assert_eq!(c.get(e), if inner_edge { 0 } else { 3 });
        }
        assert_eq!(star(2, 2, 2).base_capacity().values(), &[2, 2, 2]);
        let ab = Instance::build(
            &["a", "b"],
            &["a", "b"],
            &[("a", "b", r(1))],
            &[("a", "b", 5)],
        )
        .unwrap();
        assert_eq!(ab.base_capacity().values(), &[5]);
    }

    #[test]
    fn realization_costs() {
        let inst = twin_triangles();
        let mut y = Realization::new();
        for g in ["u", "v"] {
            for i in 1..=3 {
                for j in i + 1..=3 {
                    y.set(
                        id(&inst, &format!("{g}{i}")),
                        id(&inst, &format!("{g}{j}")),
                        1,
                    );
                }
            }
        }
        for i in 1..=3 {
            y.set(id(&inst, &format!("u{i}")), id(&inst, &format!("v{i}")), 1);
        }
        assert_eq!(inst.realization_cost(&y).unwrap(), r(39));
        assert_eq!(inst.realization_cost(&Realization::new()).unwrap(), r(0));

        let ab = Instance::build(&["a", "b"], &["a", "b"], &[("a", "b", r(1))], &[]).unwrap();
        let mut y = Realization::new();
        y.set(0, 1, 4);
        assert_eq!(ab.realization_cost(&y).unwrap(), r(4));

        let mut bad = Realization::new();
        bad.set(id(&inst, "u"), id(&inst, "u1"), 1);
        assert!(matches!(
            inst.realization_cost(&bad),
            Err(ModelError::UnknownTerminalPair(..))
        ));
    }

    #[test]
    fn realization_never_stores_zero() {
        let mut y = Realization::new();
        y.set(0, 1, 0);
        assert!(y.is_empty());
        y.set(1, 0, 2);
        assert_eq!(y.get(0, 1), 2);
        y.set(0, 1, 0);
        assert!(y.is_empty());
    }
}
