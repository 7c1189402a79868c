//! Shared corpus builders and independent brute-force oracles. These
//! deliberately avoid the library's algorithms: packings are found by
//! enumerating spanning-tree tuples, cuts by enumerating bipartitions,
//! density by enumerating raw subsets.

#![allow(dead_code)]

use treepack::{EdgeSet, MultiGraph};

/// Visits every multigraph on `n` labelled vertices with at most
/// `max_edges` edges, as multiplicity assignments over vertex pairs.
/// Edge ids group parallel copies of the same pair together.
pub fn for_each_multigraph(n: usize, max_edges: usize, visit: &mut impl FnMut(&MultiGraph)) {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    fn rec(
        n: usize,
        pairs: &[(usize, usize)],
        idx: usize,
        budget: usize,
        edges: &mut Vec<(usize, usize)>,
        visit: &mut impl FnMut(&MultiGraph),
    ) {
        if idx == pairs.len() {
            let g = MultiGraph::new(n, edges.clone()).unwrap();
            visit(&g);
            return;
        }
        rec(n, pairs, idx + 1, budget, edges, visit);
        let mut added = 0;
        while added < budget {
            edges.push(pairs[idx]);
            added += 1;
            rec(n, pairs, idx + 1, budget - added, edges, visit);
        }
        for _ in 0..added {
            edges.pop();
        }
    }
    rec(n, &pairs, 0, max_edges, &mut edges, visit);
}

/// All spanning trees of `g`, as edge sets, found by testing every
/// (n-1)-subset of edge ids.
pub fn all_spanning_trees(g: &MultiGraph) -> Vec<EdgeSet> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![EdgeSet::new()];
    }
    let want = n - 1;
    if m < want {
        return Vec::new();
    }
    let mut trees = Vec::new();
    let mut pick: Vec<usize> = (0..want).collect();
    loop {
        let set = EdgeSet::from_ids(pick.clone());
        if treepack::is_spanning_tree(g, &set).unwrap() {
            trees.push(set);
        }
        // next combination
        let mut i = want;
        loop {
            if i == 0 {
                return trees;
            }
            i -= 1;
            if pick[i] != i + m - want {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..want {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Whether `k` pairwise edge-disjoint spanning trees exist, by
/// exhaustive search over tree tuples (trees chosen in increasing list
/// order to cut symmetry).
pub fn packing_exists_bruteforce(g: &MultiGraph, k: usize) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if g.edge_count() < k * (n - 1) {
        return false;
    }
    let trees = all_spanning_trees(g);
    let masks: Vec<u64> = trees
        .iter()
        .map(|t| t.iter().fold(0u64, |m, e| m | (1 << e)))
        .collect();
    fn search(masks: &[u64], used: u64, from: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        for i in from..masks.len() {
            if masks[i] & used == 0 && search(masks, used | masks[i], i + 1, remaining - 1) {
                return true;
            }
        }
        false
    }
    search(&masks, 0, 0, k)
}

/// Minimum edge cut by enumerating all vertex bipartitions.
pub fn min_cut_bruteforce(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    assert!(n >= 2 && n <= 20);
    let mut best = usize::MAX;
    for side in 1..(1u32 << (n - 1)) {
        // vertex n-1 always on the right, so each split counted once
        let count = g
            .edges()
            .filter(|&(_, u, v)| (side >> u) & 1 != (side >> v) & 1)
            .count();
        best = best.min(count);
    }
    best
}

/// The density criterion over raw subsets (no connectivity pruning).
pub fn nash_williams_bruteforce(g: &MultiGraph, k: usize) -> bool {
    let n = g.vertex_count();
    assert!(n <= 20);
    for subset in 1u32..(1 << n) {
        let size = subset.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let edges = g
            .edges()
            .filter(|&(_, u, v)| (subset >> u) & 1 == 1 && (subset >> v) & 1 == 1)
            .count();
        if edges > k * (size - 1) {
            return false;
        }
    }
    true
}

/// Minimum over all vertex orderings of the maximum back degree, by
/// dynamic programming over vertex subsets: placing `v` last among `S`
/// costs its degree into `S`, so
/// `f(S) = min_v max(f(S - v), deg_S(v))`.
pub fn min_max_back_degree_dp(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    if n == 0 {
        return 0;
    }
    let mut mult = vec![vec![0usize; n]; n];
    for (_, u, v) in g.edges() {
        mult[u][v] += 1;
        mult[v][u] += 1;
    }
    let full = (1usize << n) - 1;
    let mut f = vec![0usize; full + 1];
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let deg: usize = (0..n)
                .filter(|&u| without >> u & 1 == 1)
                .map(|u| mult[u][v])
                .sum();
            best = best.min(f[without].max(deg));
        }
        f[s] = best;
    }
    f[full]
}

/// The same minimum by literally enumerating every permutation; used to
/// validate the subset DP on small graphs.
pub fn min_max_back_degree_perms(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(_, u, v)| (u, v)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute_visit(&mut perm, 0, &mut |p| {
        let mut pos = [0usize; 20];
        for (i, &v) in p.iter().enumerate() {
            pos[v] = i;
        }
        let mut back = [0usize; 20];
        let mut worst = 0;
        for &(u, v) in &edges {
            let later = if pos[u] > pos[v] { u } else { v };
            back[later] += 1;
            worst = worst.max(back[later]);
            if worst >= best {
                return;
            }
        }
        best = best.min(worst);
    });
    best
}

fn permute_visit(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_visit(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// One corpus instance: a graph and the k to test it with.
pub struct Instance {
    pub graph: MultiGraph,
    pub k: usize,
    pub label: String,
}

/// The seeded mixed corpus shared by the acceptance criteria: random
/// multigraphs, random connected graphs, and structured families that
/// keep the packing/decomposition criteria non-vacuous.
pub fn corpus(seed: u64, count: usize) -> Vec<Instance> {
    use treepack::generate::*;
    let mut out = Vec::new();
    // structured seeds first
    for n in 1..=7 {
        if let Ok(g) = doubled_tree(n, seed ^ n as u64) {
            out.push(Instance { graph: g, k: 2, label: format!("doubled_tree({n})") });
        }
    }
    for n in 2..=7 {
        let g = random_connected_multigraph(n, 0, seed ^ (100 + n as u64)).unwrap();
        out.push(Instance { graph: g, k: 1, label: format!("tree({n})") });
    }
    for n in 3..=7 {
        out.push(Instance { graph: cycle(n).unwrap(), k: 2, label: format!("cycle({n})") });
    }
    for n in 2..=6 {
        out.push(Instance { graph: complete(n).unwrap(), k: 2, label: format!("complete({n})") });
    }
    for c in 1..=3 {
        let g = MultiGraph::new(2, vec![(0, 1); c]).unwrap();
        out.push(Instance { graph: g, k: c.min(3), label: format!("multi_k2({c})") });
    }
    out.push(Instance {
        graph: MultiGraph::new(1, vec![]).unwrap(),
        k: 3,
        label: "single_vertex".into(),
    });
    out.push(Instance {
        graph: prop32(1, 2).unwrap(),
        k: 2,
        label: "prop32(1,2)".into(),
    });
    // seeded random remainder
    let mut i = 0u64;
    while out.len() < count {
        let s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(i);
        let n = 2 + (s % 6) as usize; // 2..=7
        let k = 1 + ((s >> 8) % 3) as usize; // 1..=3
        let graph = if s % 3 == 0 {
            let extra = ((s >> 16) % 7) as usize;
            random_connected_multigraph(n, extra, s).unwrap()
        } else {
            let m = ((s >> 16) % 13) as usize;
            random_multigraph(n, m, s).unwrap()
        };
        out.push(Instance { graph, k, label: format!("random#{i}(n={n},k={k})") });
        i += 1;
    }
    out.truncate(count);
    out
}
