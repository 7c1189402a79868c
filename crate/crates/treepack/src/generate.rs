//! Deterministic graph generators for the CLI and the test corpora.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// The two-vertex seed graph grown by repeatedly joining every existing
/// vertex pair with `c` fresh length-two paths. Every added midpoint has
/// degree two, so the colouring number stays 3 from the first level on.
pub fn prop32(levels: usize, c: usize) -> Result<MultiGraph> {
    if c == 0 {
        return Err(Error::Input("prop32 needs at least one path per pair".into()));
    }
    let mut vertex_count = 2usize;
    let mut edges = vec![(0usize, 1usize)];
    for _ in 0..levels {
        let old = vertex_count;
        for u in 0..old {
            for v in u + 1..old {
                for _ in 0..c {
                    let mid = vertex_count;
                    vertex_count += 1;
                    edges.push((u, mid));
                    edges.push((mid, v));
                }
            }
        }
    }
    MultiGraph::new(vertex_count, edges)
}

pub fn complete(n: usize) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::Input("complete graph needs at least one vertex".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    MultiGraph::new(n, edges)
}

pub fn cycle(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::Input("a cycle needs at least three vertices".into()));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
    MultiGraph::new(n, edges)
}

/// A uniform random labelled tree on `n` vertices with every edge
/// doubled; the copies form a 2-decomposition. Adjacent ids are the two
/// copies of one tree edge.
pub fn doubled_tree(n: usize, seed: u64) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::Input("doubled tree needs at least one vertex".into()));
    }
    let mut edges = Vec::new();
    for (u, v) in random_tree_edges(n, seed) {
        edges.push((u, v));
        edges.push((u, v));
    }
    MultiGraph::new(n, edges)
}

/// `m` edges drawn uniformly over unordered vertex pairs, with
/// replacement; repeats become parallel edges. Not necessarily
/// connected.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> Result<MultiGraph> {
    if n < 2 && m > 0 {
        return Err(Error::Input("edges need at least two vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = loop {
            let v = rng.gen_range(0..n);
            if v != u {
                break v;
            }
        };
        edges.push((u.min(v), u.max(v)));
    }
    MultiGraph::new(n, edges)
}

/// A random spanning tree plus `extra` additional random edges; always
/// connected.
pub fn random_connected_multigraph(n: usize, extra: usize, seed: u64) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::Input("graph needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_tree_edges(n, seed.wrapping_add(1));
    for _ in 0..extra {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = loop {
            let v = rng.gen_range(0..n);
            if v != u {
                break v;
            }
        };
        edges.push((u.min(v), u.max(v)));
    }
    MultiGraph::new(n, edges)
}

/// Random labelled tree: each vertex i >= 1 attaches to a uniformly
/// chosen earlier vertex.
fn random_tree_edges(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..n).map(|v| (rng.gen_range(0..v), v)).collect()
}
