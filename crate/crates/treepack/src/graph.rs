//! Finite loopless multigraphs with stable integer edge identities.
//!
//! Parallel edges are stored as distinct records so every algorithm can
//! treat copies as distinguishable; all certificates reference edge ids,
//! never endpoint pairs.

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// A finite multigraph without loops. Vertices are `0..vertex_count`,
/// edge ids are dense `0..edge_count` in insertion order. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl MultiGraph {
    /// Builds a graph from an edge list. Rejects loops and out-of-range
    /// endpoints.
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Input(format!(
                    "edge {id} = ({u},{v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("edge {id} is a loop at vertex {u}")));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Ok(MultiGraph { vertex_count, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "edge id {e} out of range 0..{}",
                self.edges.len()
            )))
        }
    }

    /// Neighbours of `v` with the id of the connecting edge; parallel edges
    /// appear once per copy.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    /// Degree counting multiplicities.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().enumerate().map(|(id, &(u, v))| (id, u, v))
    }

    /// True iff the graph has exactly one connected component. The empty
    /// graph is not connected; a single vertex is.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }
}

/// A set of edge ids of some host graph, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    ids: Vec<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet { ids: Vec::new() }
    }

    pub fn from_ids(mut ids: Vec<EdgeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        EdgeSet { ids }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.ids.binary_search(&e).is_ok()
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        match self.ids.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.ids.insert(pos, e);
                true
            }
        }
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        match self.ids.binary_search(&e) {
            Ok(pos) => {
                self.ids.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        // Both sorted; walk in lockstep.
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Ids present in the host graph check.
    pub fn validate_in(&self, g: &MultiGraph) -> Result<()> {
        for &e in &self.ids {
            g.check_edge(e)?;
        }
        Ok(())
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = EdgeId>>(iter: T) -> Self {
        EdgeSet::from_ids(iter.into_iter().collect())
    }
}

/// Plain union-find over vertex indices.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `x` and `y` were already joined.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

/// Why an edge set fails to be a spanning tree; used by certificate
/// verification to report the first failing clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDefect {
    WrongSize { got: usize, want: usize },
    Cycle { closing_edge: EdgeId },
    Disconnected,
}

impl std::fmt::Display for TreeDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TreeDefect::WrongSize { got, want } => {
                write!(f, "has {got} edges, a spanning tree needs {want}")
            }
            TreeDefect::Cycle { closing_edge } => {
                write!(f, "contains a cycle (closed by edge {closing_edge})")
            }
            TreeDefect::Disconnected => write!(f, "does not connect all vertices"),
        }
    }
}

/// Checks the spanning-tree clauses in order: edge ids valid, size
/// `|V|-1`, acyclic, connects every vertex. The single-vertex graph has
/// the empty set as its unique spanning tree.
pub fn check_spanning_tree(g: &MultiGraph, t: &EdgeSet) -> Result<std::result::Result<(), TreeDefect>> {
    t.validate_in(g)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Err(TreeDefect::Disconnected));
    }
    if t.len() != n - 1 {
        return Ok(Err(TreeDefect::WrongSize { got: t.len(), want: n - 1 }));
    }
    let mut ds = DisjointSets::new(n);
    for e in t.iter() {
        let (u, v) = g.endpoints(e);
        if !ds.union(u, v) {
            return Ok(Err(TreeDefect::Cycle { closing_edge: e }));
        }
    }
    // n-1 successful unions on n vertices leave one component.
    Ok(Ok(()))
}

/// True iff `t` induces a spanning tree of `g`.
pub fn is_spanning_tree(g: &MultiGraph, t: &EdgeSet) -> Result<bool> {
    Ok(check_spanning_tree(g, t)?.is_ok())
}

/// An edge set validated to be a spanning tree of its host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    edges: EdgeSet,
}

impl SpanningTree {
    pub fn new(g: &MultiGraph, edges: EdgeSet) -> Result<Self> {
        match check_spanning_tree(g, &edges)? {
            Ok(()) => Ok(SpanningTree { edges }),
            Err(defect) => Err(Error::Input(format!("not a spanning tree: {defect}"))),
        }
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(e)
    }
}

/// The unique cycle in `t + e` for a non-tree edge `e`. The result
/// contains `e`; every other edge lies in `t`.
pub fn fundamental_cycle(g: &MultiGraph, t: &SpanningTree, e: EdgeId) -> Result<EdgeSet> {
    g.check_edge(e)?;
    if t.contains(e) {
        return Err(Error::Input(format!("edge {e} already lies in the tree")));
    }
    let (src, dst) = g.endpoints(e);
    let path = tree_path_edges(g, t.edges(), src, dst).ok_or_else(|| {
        Error::Invariant(format!("tree does not connect endpoints of edge {e}"))
    })?;
    let mut cycle = EdgeSet::from_ids(path);
    cycle.insert(e);
    Ok(cycle)
}

/// Edge ids on the unique path from `src` to `dst` inside the forest
/// `tree`; `None` when they are in different components.
pub(crate) fn tree_path_edges(
    g: &MultiGraph,
    tree: &EdgeSet,
    src: VertexId,
    dst: VertexId,
) -> Option<Vec<EdgeId>> {
    if src == dst {
        return Some(Vec::new());
    }
    let n = g.vertex_count();
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[src] = true;
    queue.push_back(src);
    'bfs: while let Some(v) = queue.pop_front() {
        for &(w, id) in g.incident(v) {
            if tree.contains(id) && !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, id));
                if w == dst {
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
    }
    if !seen[dst] {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = dst;
    while cur != src {
        let (prev, id) = parent[cur].expect("path reconstruction");
        path.push(id);
        cur = prev;
    }
    Some(path)
}

/// Contracts the vertex set `x` to a single vertex, deleting the edges
/// internal to `x`. Returns the new graph together with, per surviving
/// edge id, the original edge id. The merged vertex takes the slot of the
/// smallest member of `x`; the remaining vertices keep their relative
/// order.
pub fn contract(g: &MultiGraph, x: &[VertexId]) -> Result<(MultiGraph, Vec<EdgeId>)> {
    if x.is_empty() {
        return Err(Error::Input("cannot contract an empty vertex set".into()));
    }
    let n = g.vertex_count();
    let mut in_x = vec![false; n];
    for &v in x {
        if v >= n {
            return Err(Error::Input(format!("vertex {v} out of range 0..{n}")));
        }
        in_x[v] = true;
    }
    let rep = *x.iter().min().unwrap();
    // New index for each old vertex: members of x collapse onto rep's slot.
    let mut new_index = vec![0usize; n];
    let mut next = 0;
    for v in 0..n {
        if in_x[v] && v != rep {
            continue;
        }
        new_index[v] = next;
        next += 1;
    }
    for v in 0..n {
        if in_x[v] {
            new_index[v] = new_index[rep];
        }
    }
    let mut edges = Vec::new();
    let mut mapping = Vec::new();
    for (id, u, v) in g.edges() {
        if in_x[u] && in_x[v] {
            continue; // would become a loop
        }
        edges.push((new_index[u], new_index[v]));
        mapping.push(id);
    }
    Ok((MultiGraph::new(next, edges)?, mapping))
}

/// Validates that the bipartition `(left, V \ left)` is a bond: both
/// sides are non-empty and each induces a connected subgraph. Returns the
/// crossing edge ids.
pub fn bond_edges(g: &MultiGraph, left: &[VertexId]) -> Result<EdgeSet> {
    let n = g.vertex_count();
    let mut side = vec![false; n];
    for &v in left {
        if v >= n {
            return Err(Error::Input(format!("vertex {v} out of range 0..{n}")));
        }
        side[v] = true;
    }
    let left_size = side.iter().filter(|&&b| b).count();
    if left_size == 0 || left_size == n {
        return Err(Error::Input("a bond needs two non-empty sides".into()));
    }
    for (in_left, name) in [(true, "left"), (false, "right")] {
        if !side_connected(g, &side, in_left) {
            return Err(Error::Input(format!(
                "the {name} side of the cut is not connected, so the cut is not a bond"
            )));
        }
    }
    Ok(g.edges()
        .filter(|&(_, u, v)| side[u] != side[v])
        .map(|(id, _, _)| id)
        .collect())
}

fn side_connected(g: &MultiGraph, side: &[bool], value: bool) -> bool {
    let start = match (0..g.vertex_count()).find(|&v| side[v] == value) {
        Some(v) => v,
        None => return false,
    };
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &(w, _) in g.incident(v) {
            if side[w] == value && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..g.vertex_count()).all(|v| side[v] != value || seen[v])
}

/// True iff `t` contains an edge crossing the given bond. The cut is
/// passed as one of its sides.
pub fn crosses_bond(g: &MultiGraph, t: &EdgeSet, left: &[VertexId]) -> Result<bool> {
    t.validate_in(g)?;
    let crossing = bond_edges(g, left)?;
    let hit = crossing.iter().any(|e| t.contains(e));
    Ok(hit)
}

/// Spanning tree picked by BFS from vertex 0 preferring small edge ids;
/// `None` when `g` is disconnected or empty. Deterministic, and used as
/// the fixed extension order when growing forests.
pub fn bfs_spanning_tree(g: &MultiGraph) -> Option<EdgeSet> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let mut ds = DisjointSets::new(n);
    let mut tree = EdgeSet::new();
    for (id, u, v) in g.edges() {
        if ds.union(u, v) {
            tree.insert(id);
        }
    }
    if tree.len() == n - 1 {
        Some(tree)
    } else {
        None
    }
}
