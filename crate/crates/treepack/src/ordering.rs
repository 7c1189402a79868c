//! Good vertex orderings, the colouring number, back-edge blocks and the
//! edge order built from them.
//!
//! A good ordering lists the vertices so that every vertex has fewer than
//! `mu` edges to earlier vertices. For finite multigraphs the least such
//! `mu` is one more than the degeneracy and min-degree peeling attains it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// A vertex ordering together with its witnessed colouring number.
/// `back_degrees` is indexed by vertex id.
#[derive(Debug, Clone)]
pub struct GoodOrdering {
    order: Vec<VertexId>,
    position: Vec<usize>,
    mu: usize,
    back_degrees: Vec<usize>,
}

impl GoodOrdering {
    /// Wraps an explicit ordering, computing its back degrees and the
    /// colouring number it witnesses (1 + max back degree).
    pub fn from_order(g: &MultiGraph, order: Vec<VertexId>) -> Result<Self> {
        let position = check_permutation(g.vertex_count(), &order)?;
        let mut back_degrees = vec![0usize; g.vertex_count()];
        for (_, u, v) in g.edges() {
            let later = if position[u] > position[v] { u } else { v };
            back_degrees[later] += 1;
        }
        let mu = 1 + back_degrees.iter().copied().max().unwrap_or(0);
        Ok(GoodOrdering { order, position, mu, back_degrees })
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Position of vertex `v` in the ordering.
    pub fn position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn back_degree(&self, v: VertexId) -> usize {
        self.back_degrees[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

fn check_permutation(n: usize, order: &[VertexId]) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::Input(format!(
            "ordering has {} entries, the graph has {n} vertices",
            order.len()
        )));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n {
            return Err(Error::Input(format!("vertex {v} out of range 0..{n}")));
        }
        if position[v] != usize::MAX {
            return Err(Error::Input(format!("vertex {v} listed twice")));
        }
        position[v] = i;
    }
    Ok(position)
}

/// Min-degree peeling: repeatedly remove a vertex of minimum remaining
/// degree (counting multiplicities, ties broken by smallest index) and
/// place it last. The resulting ordering minimises the maximum back
/// degree over all orderings; `mu` is 1 + that maximum, so `mu = 1` for
/// edgeless graphs.
pub fn degeneracy_ordering(g: &MultiGraph) -> GoodOrdering {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    // Lazy heap: stale entries are skipped when popped.
    let mut heap: BinaryHeap<Reverse<(usize, VertexId)>> =
        (0..n).map(|v| Reverse((degree[v], v))).collect();
    let mut order = vec![0; n];
    for slot in (0..n).rev() {
        let v = loop {
            let Reverse((d, v)) = heap.pop().expect("heap exhausted early");
            if !removed[v] && degree[v] == d {
                break v;
            }
        };
        removed[v] = true;
        order[slot] = v;
        for &(w, _) in g.incident(v) {
            if !removed[w] {
                degree[w] -= 1;
                heap.push(Reverse((degree[w], w)));
            }
        }
    }
    GoodOrdering::from_order(g, order).expect("peeling yields a permutation")
}

/// The colouring number of a finite multigraph: `mu` of the degeneracy
/// ordering.
pub fn colouring_number(g: &MultiGraph) -> usize {
    degeneracy_ordering(g).mu()
}

/// True iff every vertex has fewer than `mu` edges to earlier vertices
/// under `order`.
pub fn verify_good_ordering(g: &MultiGraph, order: &[VertexId], mu: usize) -> Result<bool> {
    let ord = GoodOrdering::from_order(g, order.to_vec())?;
    Ok((0..g.vertex_count()).all(|v| ord.back_degree(v) < mu))
}

/// The per-position blocks `E_i`: edges whose later endpoint sits at
/// position `i`. Blocks are internally ordered; the default is increasing
/// edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackEdgePartition {
    classes: Vec<Vec<EdgeId>>,
}

impl BackEdgePartition {
    pub fn classes(&self) -> &[Vec<EdgeId>] {
        &self.classes
    }

    pub fn class(&self, position: usize) -> &[EdgeId] {
        &self.classes[position]
    }

    pub fn total_edges(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }
}

/// Partitions `E(G)` into the blocks of `ord`. Every edge lands in the
/// block of its later endpoint; block sizes are bounded by `mu - 1`.
pub fn back_edge_partition(g: &MultiGraph, ord: &GoodOrdering) -> BackEdgePartition {
    let mut classes = vec![Vec::new(); g.vertex_count()];
    for (id, u, v) in g.edges() {
        let later = if ord.position(u) > ord.position(v) { u } else { v };
        classes[ord.position(later)].push(id);
    }
    BackEdgePartition { classes }
}

/// A total order on edge ids: the blocks concatenated in position order,
/// each block in its internal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    sequence: Vec<EdgeId>,
    rank: Vec<usize>,
    /// block index (= ordering position of the later endpoint) per edge
    block_of: Vec<usize>,
    /// first rank of each block
    block_start: Vec<usize>,
}

impl EdgeOrder {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn edge_at(&self, rank: usize) -> EdgeId {
        self.sequence[rank]
    }

    pub fn rank_of(&self, e: EdgeId) -> usize {
        self.rank[e]
    }

    pub fn sequence(&self) -> &[EdgeId] {
        &self.sequence
    }

    pub fn block_of(&self, e: EdgeId) -> usize {
        self.block_of[e]
    }

    /// First rank of the block containing the edge at `rank`.
    pub fn block_start_of_rank(&self, rank: usize) -> usize {
        self.block_start[self.block_of[self.sequence[rank]]]
    }
}

/// Concatenates the blocks into the edge order. `within`, when given,
/// overrides the internal order and must permute each block.
pub fn build_edge_order(
    p: &BackEdgePartition,
    within: Option<&[Vec<EdgeId>]>,
) -> Result<EdgeOrder> {
    if let Some(w) = within {
        if w.len() != p.classes.len() {
            return Err(Error::Input(format!(
                "within has {} blocks, the partition has {}",
                w.len(),
                p.classes.len()
            )));
        }
        for (i, (given, class)) in w.iter().zip(&p.classes).enumerate() {
            let mut a = given.clone();
            let mut b = class.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Input(format!(
                    "within block {i} is not a permutation of E_{i}"
                )));
            }
        }
    }
    let total = p.total_edges();
    let mut sequence = Vec::with_capacity(total);
    let mut rank = vec![usize::MAX; total];
    let mut block_of = vec![usize::MAX; total];
    let mut block_start = Vec::with_capacity(p.classes.len());
    for (i, class) in p.classes.iter().enumerate() {
        block_start.push(sequence.len());
        let block: &[EdgeId] = match within {
            Some(w) => &w[i],
            None => class,
        };
        for &e in block {
            if e >= total {
                return Err(Error::Input(format!(
                    "edge id {e} exceeds the partition's edge count {total}"
                )));
            }
            block_of[e] = i;
            rank[e] = sequence.len();
            sequence.push(e);
        }
    }
    Ok(EdgeOrder { sequence, rank, block_of, block_start })
}

/// Brute-force minimum over all vertex orderings of (1 + max back
/// degree). Exponential; intended as a test oracle for small graphs.
pub fn colouring_number_bruteforce(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 1;
    }
    let edges: Vec<(VertexId, VertexId)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    let mut order: Vec<VertexId> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |perm| {
        let mut pos = vec![0; n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        let mut back = vec![0usize; n];
        let mut worst = 0;
        for &(u, v) in &edges {
            let later = if pos[u] > pos[v] { u } else { v };
            back[later] += 1;
            worst = worst.max(back[later]);
        }
        best = best.min(worst);
    });
    best + 1
}

fn permute(items: &mut Vec<VertexId>, k: usize, visit: &mut impl FnMut(&[VertexId])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
