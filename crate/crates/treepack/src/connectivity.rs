//! Global minimum edge cut of a multigraph, counting multiplicities.

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Size of a minimum edge cut of `g`. Needs at least two vertices;
/// disconnected graphs have edge-connectivity 0.
pub fn edge_connectivity(g: &MultiGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Input(
            "edge connectivity needs at least two vertices".into(),
        ));
    }
    let mut w = vec![vec![0usize; n]; n];
    for (_, u, v) in g.edges() {
        w[u][v] += 1;
        w[v][u] += 1;
    }
    Ok(stoer_wagner(&mut w))
}

/// Stoer–Wagner minimum cut on a symmetric weight matrix.
fn stoer_wagner(w: &mut [Vec<usize>]) -> usize {
    let n = w.len();
    let mut vertices: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    while vertices.len() > 1 {
        let m = vertices.len();
        let mut weights = vec![0usize; m];
        let mut added = vec![false; m];
        let mut order = Vec::with_capacity(m);
        let mut phase_cut = 0;
        for _ in 0..m {
            let mut sel = usize::MAX;
            for i in 0..m {
                if !added[i] && (sel == usize::MAX || weights[i] > weights[sel]) {
                    sel = i;
                }
            }
            added[sel] = true;
            phase_cut = weights[sel];
            order.push(sel);
            for i in 0..m {
                if !added[i] {
                    weights[i] += w[vertices[sel]][vertices[i]];
                }
            }
        }
        best = best.min(phase_cut);
        // Merge the last vertex of the phase into the one before it.
        let t = vertices[order[m - 1]];
        let s = vertices[order[m - 2]];
        for i in 0..m {
            let x = vertices[i];
            w[s][x] += w[t][x];
            w[x][s] += w[x][t];
        }
        w[s][s] = 0;
        vertices.remove(order[m - 1]);
    }
    best
}
