//! k-fold graphic-matroid union via augmenting exchange walks.
//!
//! One engine serves two callers: partitioning all edges into k forests
//! (the constructive side of the density criterion) and packing k
//! edge-disjoint spanning trees. Failures come with witnesses: a dense
//! vertex set in the first case, a sparse vertex partition in the second.

use std::collections::VecDeque;

use serde::Serialize;

use crate::cert::{CertKind, Certificate};
use crate::error::{Error, Result};
use crate::graph::{tree_path_edges, DisjointSets, EdgeId, EdgeSet, MultiGraph, VertexId};

/// Forest membership state during matroid union.
struct ForestUnion<'g> {
    g: &'g MultiGraph,
    k: usize,
    assignment: Vec<Option<usize>>,
    forests: Vec<EdgeSet>,
    /// component label of each vertex per forest, rebuilt after changes
    comp: Vec<Vec<usize>>,
}

impl<'g> ForestUnion<'g> {
    fn new(g: &'g MultiGraph, k: usize) -> Self {
        let mut fu = ForestUnion {
            g,
            k,
            assignment: vec![None; g.edge_count()],
            forests: vec![EdgeSet::new(); k],
            comp: vec![Vec::new(); k],
        };
        for i in 0..k {
            fu.rebuild_components(i);
        }
        fu
    }

    fn rebuild_components(&mut self, i: usize) {
        let n = self.g.vertex_count();
        let mut ds = DisjointSets::new(n);
        for e in self.forests[i].iter() {
            let (u, v) = self.g.endpoints(e);
            ds.union(u, v);
        }
        self.comp[i] = (0..n).map(|v| ds.find(v)).collect();
    }

    fn insertable(&self, e: EdgeId, i: usize) -> bool {
        let (u, v) = self.g.endpoints(e);
        self.comp[i][u] != self.comp[i][v]
    }

    /// Tries to absorb `e0` into the union by an augmenting walk.
    /// On failure returns the reachable edge set (including `e0`).
    fn augment(&mut self, e0: EdgeId) -> std::result::Result<(), Vec<EdgeId>> {
        debug_assert!(self.assignment[e0].is_none());
        let m = self.g.edge_count();
        let mut parent: Vec<EdgeId> = vec![usize::MAX; m];
        let mut visited = vec![false; m];
        let mut queue = VecDeque::new();
        visited[e0] = true;
        queue.push_back(e0);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.k {
                if self.assignment[x] == Some(i) {
                    continue;
                }
                if self.insertable(x, i) {
                    self.apply_walk(x, i, &parent);
                    return Ok(());
                }
            }
            for i in 0..self.k {
                if self.assignment[x] == Some(i) {
                    continue;
                }
                let (u, v) = self.g.endpoints(x);
                let path = tree_path_edges(self.g, &self.forests[i], u, v)
                    .expect("connected endpoints have a tree path");
                for f in path {
                    if !visited[f] {
                        visited[f] = true;
                        parent[f] = x;
                        queue.push_back(f);
                    }
                }
            }
        }
        Err((0..m).filter(|&e| visited[e]).collect())
    }

    /// Moves `x` into forest `dest` and shifts each ancestor on the walk
    /// into the slot its child vacated, ending at the unassigned root.
    fn apply_walk(&mut self, x: EdgeId, dest: usize, parent: &[EdgeId]) {
        let mut cur = x;
        let mut dest = dest;
        loop {
            let old = self.assignment[cur];
            self.assignment[cur] = Some(dest);
            self.forests[dest].insert(cur);
            match old {
                None => break,
                Some(j) => {
                    self.forests[j].remove(cur);
                    cur = parent[cur];
                    dest = j;
                }
            }
        }
        for i in 0..self.k {
            self.rebuild_components(i);
        }
        self.check_forests();
    }

    /// All forests must stay acyclic after every walk.
    fn check_forests(&self) {
        for i in 0..self.k {
            let mut ds = DisjointSets::new(self.g.vertex_count());
            for e in self.forests[i].iter() {
                let (u, v) = self.g.endpoints(e);
                assert!(ds.union(u, v), "augmenting walk created a cycle in forest {i}");
            }
        }
    }
}

/// Result of trying to partition the whole edge set into `k` forests.
pub(crate) enum PartitionOutcome {
    /// Every edge assigned; the forests cover and partition `E(G)`.
    Partitioned(Vec<EdgeSet>),
    /// Some edge cannot be absorbed; `reachable` is its exchange-walk
    /// closure witnessing a dense vertex set.
    Stuck { reachable: Vec<EdgeId> },
}

/// Tries to partition `E(G)` into `k` forests, processing edges in id
/// order and augmenting each.
pub(crate) fn partition_into_forests(g: &MultiGraph, k: usize) -> PartitionOutcome {
    let mut fu = ForestUnion::new(g, k);
    for e in 0..g.edge_count() {
        if let Err(reachable) = fu.augment(e) {
            return PartitionOutcome::Stuck { reachable };
        }
    }
    PartitionOutcome::Partitioned(fu.forests)
}

/// A vertex partition certifying that no `k` edge-disjoint spanning
/// trees exist: it has fewer than `k (|parts| - 1)` crossing edges.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<VertexId>>,
    pub cross_edges: usize,
    pub bound: usize,
}

/// Result of a packing attempt.
#[derive(Debug, Clone)]
pub enum PackingOutcome {
    Packing(Certificate),
    Infeasible(PartitionWitness),
}

/// Looks for `k` pairwise edge-disjoint spanning trees. Runs the matroid
/// union to a maximum independent set; succeeds exactly when its size is
/// `k (|V| - 1)`, in which case every forest is a spanning tree. On
/// failure the exchange-walk closure of the unassigned edges yields the
/// witness partition.
pub fn max_tree_packing(g: &MultiGraph, k: usize) -> Result<PackingOutcome> {
    if g.vertex_count() == 0 {
        return Err(Error::Precondition("packing needs at least one vertex".into()));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("packing needs a connected graph".into()));
    }
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut fu = ForestUnion::new(g, k);
    let mut unassigned = Vec::new();
    for e in 0..m {
        if fu.augment(e).is_err() {
            unassigned.push(e);
        }
    }
    let rank: usize = fu.forests.iter().map(EdgeSet::len).sum();
    if rank == k * (n - 1) {
        return Ok(PackingOutcome::Packing(Certificate::from_sets(
            CertKind::Packing,
            fu.forests,
        )));
    }
    // Closure of all unassigned edges in the final exchange digraph.
    let mut visited = vec![false; m];
    let mut queue: VecDeque<EdgeId> = VecDeque::new();
    for &e in &unassigned {
        visited[e] = true;
        queue.push_back(e);
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..k {
            if fu.assignment[x] == Some(i) {
                continue;
            }
            debug_assert!(!fu.insertable(x, i), "maximal state has no insertable edge");
            let (u, v) = g.endpoints(x);
            let path = tree_path_edges(g, &fu.forests[i], u, v)
                .expect("connected endpoints have a tree path");
            for f in path {
                if !visited[f] {
                    visited[f] = true;
                    queue.push_back(f);
                }
            }
        }
    }
    // Parts: components of the reachable edge set, plus singletons.
    let mut ds = DisjointSets::new(n);
    for e in 0..m {
        if visited[e] {
            let (u, v) = g.endpoints(e);
            ds.union(u, v);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<VertexId>> = Default::default();
    for v in 0..n {
        groups.entry(ds.find(v)).or_default().push(v);
    }
    let parts: Vec<Vec<VertexId>> = groups.into_values().collect();
    let mut part_of = vec![0usize; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let cross_edges = g.edges().filter(|&(_, u, v)| part_of[u] != part_of[v]).count();
    let bound = k * (parts.len() - 1);
    debug_assert!(cross_edges < bound, "witness partition must violate the packing bound");
    Ok(PackingOutcome::Infeasible(PartitionWitness {
        parts,
        cross_edges,
        bound,
    }))
}
