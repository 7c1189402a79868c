//! Forest covers, the density criterion for k-coverings, and the
//! constructive covering pipeline.

use serde::Serialize;

use crate::cert::{CertKind, Certificate};
use crate::error::{Error, Result};
use crate::graph::{bfs_spanning_tree, DisjointSets, EdgeSet, MultiGraph, VertexId};
use crate::matroid::{partition_into_forests, PartitionOutcome};
use crate::ordering::{back_edge_partition, GoodOrdering};

/// `k` acyclic edge sets whose union is the whole edge set. As built
/// here the forests are pairwise disjoint, though external covers are
/// not required to be.
#[derive(Debug, Clone)]
pub struct ForestCover {
    pub k: usize,
    pub forests: Vec<EdgeSet>,
}

/// Splits each back-edge block injectively across `k` colours; the
/// monochromatic classes are forests because a cycle meets the block of
/// its latest vertex twice. Requires every block to fit, i.e.
/// `k >= mu - 1`.
pub fn eh_forest_cover(g: &MultiGraph, ord: &GoodOrdering, k: usize) -> Result<ForestCover> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    let partition = back_edge_partition(g, ord);
    for (pos, class) in partition.classes().iter().enumerate() {
        if class.len() > k {
            return Err(Error::Precondition(format!(
                "vertex {} has {} back edges, more than k = {k}",
                ord.order()[pos],
                class.len()
            )));
        }
    }
    let mut forests = vec![EdgeSet::new(); k];
    for class in partition.classes() {
        for (colour, &e) in class.iter().enumerate() {
            forests[colour].insert(e);
        }
    }
    Ok(ForestCover { k, forests })
}

/// Grows every forest to a spanning tree by adding edges of a fixed
/// reference spanning tree; edges may be reused across trees, so the
/// result is a covering, not a packing.
pub fn extend_to_spanning_trees(g: &MultiGraph, fc: &ForestCover) -> Result<Certificate> {
    let base = bfs_spanning_tree(g).ok_or_else(|| {
        Error::Precondition("covering requires a connected graph".into())
    })?;
    let mut trees = Vec::with_capacity(fc.forests.len());
    for (i, forest) in fc.forests.iter().enumerate() {
        forest.validate_in(g)?;
        let mut ds = DisjointSets::new(g.vertex_count());
        let mut tree = forest.clone();
        for e in forest.iter() {
            let (u, v) = g.endpoints(e);
            if !ds.union(u, v) {
                return Err(Error::Input(format!("forest {i} contains a cycle")));
            }
        }
        for e in base.iter() {
            let (u, v) = g.endpoints(e);
            if ds.union(u, v) {
                tree.insert(e);
            }
        }
        trees.push(tree);
    }
    Ok(Certificate::from_sets(CertKind::Covering, trees))
}

/// Verdict of the density check: either every vertex set satisfies
/// `e(U) <= k (|U| - 1)` or a violating witness set.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum DensityCertificate {
    Ok,
    Violated { witness: Vec<VertexId>, edge_count: usize, bound: usize },
}

impl DensityCertificate {
    pub fn is_ok(&self) -> bool {
        matches!(self, DensityCertificate::Ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NwMode {
    /// Enumerate connected vertex subsets; a densest violating set may be
    /// assumed connected, since a violation splits over the components of
    /// `G[U]`. Gated by a vertex limit.
    Exhaustive,
    /// Run the k-forest partition; a stuck exchange walk yields the
    /// witness. No size limit.
    Matroid,
}

pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 20;

/// Checks the k-covering density criterion. Both modes agree on the
/// verdict; the witness is the first one found in each mode's own
/// deterministic order.
pub fn nash_williams_check(g: &MultiGraph, k: usize, mode: NwMode) -> Result<DensityCertificate> {
    nash_williams_check_with_limit(g, k, mode, EXHAUSTIVE_VERTEX_LIMIT)
}

pub fn nash_williams_check_with_limit(
    g: &MultiGraph,
    k: usize,
    mode: NwMode,
    exhaustive_limit: usize,
) -> Result<DensityCertificate> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    match mode {
        NwMode::Exhaustive => {
            if g.vertex_count() > exhaustive_limit {
                return Err(Error::Resource(format!(
                    "exhaustive density check limited to {exhaustive_limit} vertices, got {}",
                    g.vertex_count()
                )));
            }
            Ok(nash_williams_exhaustive(g, k))
        }
        NwMode::Matroid => Ok(nash_williams_matroid(g, k)),
    }
}

fn nash_williams_exhaustive(g: &MultiGraph, k: usize) -> DensityCertificate {
    let n = g.vertex_count();
    if n < 2 {
        return DensityCertificate::Ok;
    }
    let mut mult = vec![vec![0usize; n]; n];
    for (_, u, v) in g.edges() {
        mult[u][v] += 1;
        mult[v][u] += 1;
    }
    let adj_mask: Vec<u64> = (0..n)
        .map(|u| (0..n).filter(|&v| mult[u][v] > 0).fold(0u64, |m, v| m | (1 << v)))
        .collect();

    // Recursive connected-subset enumeration: each connected set is
    // visited once, rooted at its smallest vertex.
    struct Search<'a> {
        n: usize,
        mult: &'a [Vec<usize>],
        adj_mask: &'a [u64],
        k: usize,
        found: Option<(u64, usize)>,
    }
    impl Search<'_> {
        fn extend(&mut self, subset: u64, size: usize, edges: usize, cands: u64, excluded: u64) {
            if self.found.is_some() {
                return;
            }
            if size >= 2 && edges > self.k * (size - 1) {
                self.found = Some((subset, edges));
                return;
            }
            let mut rest = cands;
            let mut excluded = excluded;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let vbit = 1u64 << v;
                let added: usize = (0..self.n)
                    .filter(|&u| subset & (1 << u) != 0)
                    .map(|u| self.mult[u][v])
                    .sum();
                let new_subset = subset | vbit;
                let new_cands = (rest | (self.adj_mask[v] & !excluded)) & !new_subset;
                self.extend(new_subset, size + 1, edges + added, new_cands, excluded);
                if self.found.is_some() {
                    return;
                }
                excluded |= vbit;
            }
        }
    }

    let mut search = Search { n, mult: &mult, adj_mask: &adj_mask, k, found: None };
    for s in 0..n {
        let excluded = (1u64 << s) - 1;
        let cands = adj_mask[s] & !excluded;
        search.extend(1 << s, 1, 0, cands, excluded);
        if search.found.is_some() {
            break;
        }
    }
    match search.found {
        None => DensityCertificate::Ok,
        Some((subset, edge_count)) => {
            let witness: Vec<VertexId> = (0..n).filter(|&v| subset & (1 << v) != 0).collect();
            let bound = k * (witness.len() - 1);
            DensityCertificate::Violated { witness, edge_count, bound }
        }
    }
}

fn nash_williams_matroid(g: &MultiGraph, k: usize) -> DensityCertificate {
    match partition_into_forests(g, k) {
        PartitionOutcome::Partitioned(_) => DensityCertificate::Ok,
        PartitionOutcome::Stuck { reachable } => density_witness(g, k, &reachable),
    }
}

/// Turns a stuck exchange-walk closure into the violating vertex set:
/// the vertices it covers span more than `k (|U| - 1)` edges.
fn density_witness(g: &MultiGraph, k: usize, reachable: &[crate::graph::EdgeId]) -> DensityCertificate {
    let mut in_u = vec![false; g.vertex_count()];
    for &e in reachable {
        let (u, v) = g.endpoints(e);
        in_u[u] = true;
        in_u[v] = true;
    }
    let witness: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| in_u[v]).collect();
    let edge_count = g.edges().filter(|&(_, u, v)| in_u[u] && in_u[v]).count();
    let bound = k * (witness.len() - 1);
    debug_assert!(edge_count > bound, "stuck walk must witness a violation");
    DensityCertificate::Violated { witness, edge_count, bound }
}

/// Result of asking for a k-covering.
#[derive(Debug, Clone)]
pub enum CoverOutcome {
    Covering(Certificate),
    /// The density criterion fails; no k-covering exists.
    Infeasible(DensityCertificate),
}

/// Builds a verified k-covering when one exists: partition into k
/// forests, then extend each to a spanning tree.
pub fn build_covering(g: &MultiGraph, k: usize) -> Result<CoverOutcome> {
    if !g.is_connected() {
        return Err(Error::Precondition("covering requires a connected graph".into()));
    }
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    match partition_into_forests(g, k) {
        PartitionOutcome::Partitioned(forests) => {
            let fc = ForestCover { k, forests };
            Ok(CoverOutcome::Covering(extend_to_spanning_trees(g, &fc)?))
        }
        PartitionOutcome::Stuck { reachable } => {
            Ok(CoverOutcome::Infeasible(density_witness(g, k, &reachable)))
        }
    }
}

/// Smallest `k` admitting a k-covering of a connected graph: the first
/// `k` from the counting lower bound upward for which the k-forest
/// partition succeeds.
pub fn min_cover_number(g: &MultiGraph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Precondition("covering requires a connected graph".into()));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Ok(1);
    }
    let mut k = m.div_ceil(n - 1).max(1);
    loop {
        if matches!(partition_into_forests(g, k), PartitionOutcome::Partitioned(_)) {
            return Ok(k);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::verify_certificate;

    fn cycle(n: usize) -> MultiGraph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        MultiGraph::new(n, edges).unwrap()
    }

    fn complete(n: usize) -> MultiGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        MultiGraph::new(n, edges).unwrap()
    }

    fn is_forest(g: &MultiGraph, set: &EdgeSet) -> bool {
        let mut ds = DisjointSets::new(g.vertex_count());
        set.iter().all(|e| {
            let (u, v) = g.endpoints(e);
            ds.union(u, v)
        })
    }

    #[test]
    fn c5_two_forest_cover() {
        let g = cycle(5);
        let ord = GoodOrdering::from_order(&g, (0..5).collect()).unwrap();
        let fc = eh_forest_cover(&g, &ord, 2).unwrap();
        assert_eq!(fc.forests.len(), 2);
        let total: usize = fc.forests.iter().map(EdgeSet::len).sum();
        assert_eq!(total, 5);
        for forest in &fc.forests {
            assert!(is_forest(&g, forest));
        }
    }

    #[test]
    fn path_covers_itself() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let ord = GoodOrdering::from_order(&g, (0..4).collect()).unwrap();
        let fc = eh_forest_cover(&g, &ord, 1).unwrap();
        assert_eq!(fc.forests[0].len(), 3);
    }

    #[test]
    fn parallel_pair_rainbow_split() {
        let g = MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let ord = GoodOrdering::from_order(&g, vec![0, 1]).unwrap();
        let fc = eh_forest_cover(&g, &ord, 2).unwrap();
        assert_eq!(fc.forests[0].as_slice(), &[0]);
        assert_eq!(fc.forests[1].as_slice(), &[1]);
    }

    #[test]
    fn oversized_block_names_vertex() {
        let g = MultiGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let ord = GoodOrdering::from_order(&g, vec![0, 1]).unwrap();
        let err = eh_forest_cover(&g, &ord, 2).unwrap_err();
        assert!(err.to_string().contains("vertex 1"));
    }

    #[test]
    fn extension_yields_covering() {
        let g = cycle(5);
        let ord = GoodOrdering::from_order(&g, (0..5).collect()).unwrap();
        let fc = eh_forest_cover(&g, &ord, 2).unwrap();
        let cert = extend_to_spanning_trees(&g, &fc).unwrap();
        assert!(verify_certificate(&g, &cert).unwrap().valid);
    }

    #[test]
    fn empty_forest_extends_to_whole_path() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let fc = ForestCover { k: 1, forests: vec![EdgeSet::new()] };
        let cert = extend_to_spanning_trees(&g, &fc).unwrap();
        assert_eq!(cert.trees[0], vec![0, 1]);
    }

    #[test]
    fn already_spanning_forests_unchanged() {
        let g = MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let fc = ForestCover {
            k: 2,
            forests: vec![EdgeSet::from_ids(vec![0]), EdgeSet::from_ids(vec![1])],
        };
        let cert = extend_to_spanning_trees(&g, &fc).unwrap();
        assert_eq!(cert.trees, vec![vec![0], vec![1]]);
    }

    #[test]
    fn extension_needs_connected_graph() {
        let g = MultiGraph::new(3, vec![(0, 1)]).unwrap();
        let fc = ForestCover { k: 1, forests: vec![EdgeSet::new()] };
        assert!(extend_to_spanning_trees(&g, &fc).is_err());
    }

    #[test]
    fn nw_c5_k1_violated() {
        let g = cycle(5);
        for mode in [NwMode::Exhaustive, NwMode::Matroid] {
            match nash_williams_check(&g, 1, mode).unwrap() {
                DensityCertificate::Violated { witness, edge_count, bound } => {
                    assert_eq!(witness, vec![0, 1, 2, 3, 4]);
                    assert_eq!(edge_count, 5);
                    assert_eq!(bound, 4);
                }
                DensityCertificate::Ok => panic!("C5 violates the 1-covering bound"),
            }
        }
    }

    #[test]
    fn nw_c5_k2_and_k4_k2_ok() {
        for g in [cycle(5), complete(4)] {
            for mode in [NwMode::Exhaustive, NwMode::Matroid] {
                assert!(nash_williams_check(&g, 2, mode).unwrap().is_ok());
            }
        }
    }

    #[test]
    fn exhaustive_limit_enforced() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            nash_williams_check_with_limit(&g, 1, NwMode::Exhaustive, 2),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn min_cover_examples() {
        let tree = MultiGraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(min_cover_number(&tree).unwrap(), 1);
        assert_eq!(min_cover_number(&cycle(5)).unwrap(), 2);
        assert_eq!(min_cover_number(&complete(4)).unwrap(), 2);
        let single = MultiGraph::new(1, vec![]).unwrap();
        assert_eq!(min_cover_number(&single).unwrap(), 1);
    }

    #[test]
    fn build_covering_roundtrip() {
        let g = complete(4);
        match build_covering(&g, 2).unwrap() {
            CoverOutcome::Covering(cert) => {
                assert!(verify_certificate(&g, &cert).unwrap().valid);
            }
            CoverOutcome::Infeasible(_) => panic!("K4 has a 2-covering"),
        }
        match build_covering(&g, 1).unwrap() {
            CoverOutcome::Covering(_) => panic!("K4 has no 1-covering"),
            CoverOutcome::Infeasible(cert) => assert!(!cert.is_ok()),
        }
    }
}
