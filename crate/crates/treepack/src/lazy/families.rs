//! Built-in countable families and the finite embedding.
//!
//! Every family presents its vertices in a fixed good ordering (the
//! vertex id is the ordering position) and enumerates edges block by
//! block: all back edges of position p come before those of p+1, so
//! stage subgraphs are plain enumeration prefixes.
//!
//! The comb-star family is the worked positive instance. Tree 0 is the
//! comb: the spine s_0, s_1, ... entered through t_0, with each tooth
//! attached to its spine vertex. Tree 1 is star-like: every tooth t_j
//! hangs off the root, and spine vertex s_i hangs off the later tooth
//! t_{2i+2}. Odd teeth carry one extra edge u_i = (s_i, t_{2i+1})
//! belonging to no tree, so infinitely many edges start uncovered while
//! every vertex keeps back degree at most 2.
//!
//! Vertex layout for comb-star: root = 0, t_j = 2j+1, s_j = 2j+2.
//! Blocks: position 1 holds the two parallel root edges of t_0; position
//! 2 holds (t_0,s_0); every later position holds exactly two edges, so a
//! stage with n teeth has 2n+1 vertices and 4n-1 edges.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, VertexId};
use crate::ordering::{back_edge_partition, build_edge_order, degeneracy_ordering, EdgeOrder, GoodOrdering};

/// One enumerated edge: endpoints in lazy vertex ids and the ordering
/// position of the later endpoint (its block).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LazyEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub block: usize,
}

#[derive(Debug, Clone)]
pub(crate) enum FamilyKind {
    DoubledRay,
    MultipliedRay { m: usize },
    CombStar,
    Finite {
        graph: MultiGraph,
        ord: GoodOrdering,
        eord: EdgeOrder,
        trees: Vec<EdgeSet>,
        /// per tree, per ordering position: parent position and lazy edge id
        parents: Vec<Vec<Option<(VertexId, EdgeId)>>>,
    },
}

impl FamilyKind {
    pub fn name(&self) -> String {
        match self {
            FamilyKind::DoubledRay => "doubled_ray".into(),
            FamilyKind::MultipliedRay { m } => format!("multiplied_ray(m={m})"),
            FamilyKind::CombStar => "comb_star".into(),
            FamilyKind::Finite { .. } => "finite".into(),
        }
    }

    pub fn tree_count(&self) -> usize {
        match self {
            FamilyKind::Finite { trees, .. } => trees.len(),
            _ => 2,
        }
    }

    /// Number of vertices in the stage-n window.
    pub fn stage_vertex_count(&self, stage: usize) -> usize {
        match self {
            FamilyKind::DoubledRay | FamilyKind::MultipliedRay { .. } => stage + 1,
            FamilyKind::CombStar => 2 * stage + 1,
            FamilyKind::Finite { graph, .. } => graph.vertex_count(),
        }
    }

    /// Number of enumerated edges with both endpoints in the stage-n
    /// window; a prefix of the enumeration by construction.
    pub fn stage_edge_count(&self, stage: usize) -> usize {
        match self {
            FamilyKind::DoubledRay => 2 * stage,
            FamilyKind::MultipliedRay { m } => m * stage,
            FamilyKind::CombStar => self.edges_before_position(2 * stage + 1),
            FamilyKind::Finite { graph, .. } => graph.edge_count(),
        }
    }

    pub fn edge_limit(&self) -> Option<usize> {
        match self {
            FamilyKind::Finite { graph, .. } => Some(graph.edge_count()),
            _ => None,
        }
    }

    /// First enumeration index of the block at ordering position `pos`.
    pub fn edges_before_position(&self, pos: usize) -> usize {
        match self {
            FamilyKind::DoubledRay => 2 * pos.saturating_sub(1),
            FamilyKind::MultipliedRay { m } => m * pos.saturating_sub(1),
            FamilyKind::CombStar => match pos {
                0 | 1 => 0,
                2 => 2,
                p => 2 * p - 3,
            },
            FamilyKind::Finite { eord, ord, .. } => {
                // Blocks are contiguous in the edge order; count edges in
                // earlier blocks.
                let _ = ord;
                (0..eord.len())
                    .take_while(|&r| eord.block_of(eord.edge_at(r)) < pos)
                    .count()
            }
        }
    }

    pub fn edge_record(&self, id: EdgeId) -> LazyEdge {
        match self {
            FamilyKind::DoubledRay => {
                let pos = id / 2 + 1;
                LazyEdge { u: pos - 1, v: pos, block: pos }
            }
            FamilyKind::MultipliedRay { m } => {
                let pos = id / m + 1;
                LazyEdge { u: pos - 1, v: pos, block: pos }
            }
            FamilyKind::CombStar => match id {
                0 | 1 => LazyEdge { u: 0, v: 1, block: 1 },
                2 => LazyEdge { u: 1, v: 2, block: 2 },
                _ => {
                    let q = id - 3;
                    let pos = 3 + q / 2;
                    let within = q % 2;
                    if pos % 2 == 1 {
                        // tooth t_j, j = (pos-1)/2 >= 1
                        let j = (pos - 1) / 2;
                        if within == 0 {
                            LazyEdge { u: 0, v: pos, block: pos } // a_j
                        } else {
                            // partner spine: u_i for odd j, b_i for even j
                            let i = if j % 2 == 1 { (j - 1) / 2 } else { (j - 2) / 2 };
                            LazyEdge { u: 2 * i + 2, v: pos, block: pos }
                        }
                    } else {
                        // spine s_j, j = (pos-2)/2 >= 1
                        if within == 0 {
                            LazyEdge { u: pos - 1, v: pos, block: pos } // c_j
                        } else {
                            LazyEdge { u: pos - 2, v: pos, block: pos } // d_{j-1}
                        }
                    }
                }
            },
            FamilyKind::Finite { graph, ord, eord, .. } => {
                let fin = eord.edge_at(id);
                let (u, v) = graph.endpoints(fin);
                let (pu, pv) = (ord.position(u), ord.position(v));
                LazyEdge { u: pu.min(pv), v: pu.max(pv), block: pu.max(pv) }
            }
        }
    }

    pub fn base_tree_contains(&self, tree: usize, id: EdgeId) -> bool {
        // comb-star: tree 0 is the comb, tree 1 the star, so the first
        // uncovered edge (whose block-mate lies in the star) lands in
        // the smallest eligible index.
        match self {
            FamilyKind::DoubledRay => id % 2 == tree,
            FamilyKind::MultipliedRay { m } => id % m == tree,
            FamilyKind::CombStar => match id {
                0 => tree == 1,
                1 | 2 => tree == 0,
                _ => {
                    let q = id - 3;
                    let pos = 3 + q / 2;
                    let within = q % 2;
                    if pos % 2 == 1 {
                        let j = (pos - 1) / 2;
                        match within {
                            0 => tree == 1,                      // a_j
                            _ if j % 2 == 0 => tree == 1,        // b_i
                            _ => false,                          // u_i is uncovered
                        }
                    } else {
                        tree == 0 // c_j and d_{j-1}
                    }
                }
            },
            FamilyKind::Finite { trees, eord, .. } => trees[tree].contains(eord.edge_at(id)),
        }
    }

    /// Parent of `v` in the base tree, as (parent vertex, connecting edge
    /// id); `None` at the root. All builtin trees are rooted at vertex 0.
    pub fn base_parent(&self, tree: usize, v: VertexId) -> Option<(VertexId, EdgeId)> {
        match self {
            FamilyKind::DoubledRay => {
                (v > 0).then(|| (v - 1, 2 * (v - 1) + tree))
            }
            FamilyKind::MultipliedRay { m } => {
                (v > 0).then(|| (v - 1, m * (v - 1) + tree))
            }
            FamilyKind::CombStar => {
                if v == 0 {
                    return None;
                }
                if tree == 1 {
                    // the star tree
                    if v % 2 == 1 {
                        // tooth t_j -> root via a_j
                        let j = (v - 1) / 2;
                        let a = if j == 0 { 0 } else { 2 * v - 3 };
                        Some((0, a))
                    } else {
                        // spine s_i -> tooth t_{2i+2} via b_i
                        let i = (v - 2) / 2;
                        Some((4 * i + 5, 8 * i + 8))
                    }
                } else if v == 1 {
                    Some((0, 1)) // t_0 -> root via the parallel copy
                } else if v == 2 {
                    Some((1, 2)) // s_0 -> t_0
                } else if v % 2 == 0 {
                    // spine s_j -> s_{j-1} via d_{j-1}
                    let j = (v - 2) / 2;
                    Some((v - 2, 4 * j + 2))
                } else {
                    // tooth t_j -> s_j via c_j
                    let j = (v - 1) / 2;
                    Some((v + 1, 4 * j + 1))
                }
            }
            FamilyKind::Finite { parents, .. } => parents[tree].get(v).copied().flatten(),
        }
    }

    /// Stage large enough that every fundamental cycle needed at steps
    /// up to `step` stays inside it; soundness is re-checked at runtime.
    pub fn window_stage(&self, step: usize) -> usize {
        match self {
            FamilyKind::DoubledRay | FamilyKind::MultipliedRay { .. } => step + 4,
            FamilyKind::CombStar => step + 16,
            FamilyKind::Finite { .. } => 0,
        }
    }

    /// Edges with enumeration index below this are guaranteed stable
    /// after `step`: each was processed at its own index and later swaps
    /// only remove strictly later edges.
    pub fn stable_prefix(&self, step: usize) -> usize {
        match self.edge_limit() {
            Some(m) => step.min(m),
            None => step,
        }
    }

    /// Finite bonds declared for monitoring, as lazy edge id sets.
    pub fn declared_bonds(&self) -> Vec<EdgeSet> {
        match self {
            FamilyKind::DoubledRay => (0..3)
                .map(|p| EdgeSet::from_ids(vec![2 * p, 2 * p + 1]))
                .collect(),
            FamilyKind::MultipliedRay { m } => (0..3)
                .map(|p| EdgeSet::from_ids((m * p..m * (p + 1)).collect()))
                .collect(),
            FamilyKind::CombStar => vec![
                // stars of t_1, t_3, s_1, s_2; each leaves the rest connected
                EdgeSet::from_ids(vec![3, 4, 5]),
                EdgeSet::from_ids(vec![11, 12, 13]),
                EdgeSet::from_ids(vec![5, 6, 10, 12, 16]),
                EdgeSet::from_ids(vec![9, 10, 14, 20, 24]),
            ],
            FamilyKind::Finite { .. } => Vec::new(),
        }
    }
}

pub(crate) fn make_multiplied_ray(m: usize) -> Result<FamilyKind> {
    if m < 2 {
        return Err(Error::Input(format!(
            "multiplied_ray needs at least 2 copies per edge, got {m}"
        )));
    }
    Ok(FamilyKind::MultipliedRay { m })
}

/// Embeds a finite graph with a packing as a constant family: stages no
/// longer grow and the enumeration is the finite edge order.
pub(crate) fn make_finite(graph: MultiGraph, trees: Vec<EdgeSet>) -> Result<FamilyKind> {
    if graph.vertex_count() == 0 {
        return Err(Error::Input("finite family needs at least one vertex".into()));
    }
    for (i, tree) in trees.iter().enumerate() {
        match crate::graph::check_spanning_tree(&graph, tree)? {
            Ok(()) => {}
            Err(defect) => {
                return Err(Error::Input(format!("base tree {i} is not spanning: {defect}")))
            }
        }
    }
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if !trees[i].is_disjoint(&trees[j]) {
                return Err(Error::Input(format!("base trees {i} and {j} share an edge")));
            }
        }
    }
    let ord = degeneracy_ordering(&graph);
    let partition = back_edge_partition(&graph, &ord);
    let eord = build_edge_order(&partition, None)?;
    // Parent pointers per tree, rooted at ordering position 0, in lazy
    // (position) coordinates.
    let root = ord.order()[0];
    let mut parents = Vec::with_capacity(trees.len());
    for tree in &trees {
        let n = graph.vertex_count();
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &(w, id) in graph.incident(v) {
                if tree.contains(id) && !seen[w] {
                    seen[w] = true;
                    parent[ord.position(w)] = Some((ord.position(v), eord.rank_of(id)));
                    queue.push_back(w);
                }
            }
        }
        parents.push(parent);
    }
    Ok(FamilyKind::Finite { graph, ord, eord, trees, parents })
}
