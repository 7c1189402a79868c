//! Packing / covering / decomposition certificates and their verifier.
//!
//! The JSON shape is shared with the CLI and frozen in docs/format.md:
//! `{"kind": "packing"|"covering"|"decomposition", "k": int, "trees": [[edge_id,...],...]}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{check_spanning_tree, EdgeId, EdgeSet, MultiGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Packing,
    Covering,
    Decomposition,
}

impl std::fmt::Display for CertKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertKind::Packing => write!(f, "packing"),
            CertKind::Covering => write!(f, "covering"),
            CertKind::Decomposition => write!(f, "decomposition"),
        }
    }
}

/// `k` spanning trees claimed to form a packing, covering or
/// decomposition. Tree edge lists are kept exactly as supplied; the
/// verifier re-checks every clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub k: usize,
    pub trees: Vec<Vec<EdgeId>>,
}

impl Certificate {
    pub fn from_sets(kind: CertKind, trees: Vec<EdgeSet>) -> Self {
        Certificate {
            kind,
            k: trees.len(),
            trees: trees.into_iter().map(|t| t.as_slice().to_vec()).collect(),
        }
    }

    pub fn tree_sets(&self) -> Vec<EdgeSet> {
        self.trees.iter().map(|t| EdgeSet::from_ids(t.clone())).collect()
    }
}

/// Outcome of certificate verification, with the first failing clause.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub reason: Option<String>,
}

impl Verdict {
    fn ok() -> Self {
        Verdict { valid: true, reason: None }
    }

    fn fail(reason: String) -> Self {
        Verdict { valid: false, reason: Some(reason) }
    }
}

/// Checks every defining clause of the certificate kind: tree count,
/// each tree a spanning tree, disjointness for packings, full coverage
/// for coverings, both for decompositions. Ids outside the graph are an
/// input error rather than a verdict.
pub fn verify_certificate(g: &MultiGraph, cert: &Certificate) -> Result<Verdict> {
    for tree in &cert.trees {
        for &e in tree {
            g.check_edge(e)?;
        }
    }
    if cert.trees.len() != cert.k {
        return Ok(Verdict::fail(format!(
            "certificate claims k = {} but lists {} trees",
            cert.k,
            cert.trees.len()
        )));
    }
    let mut sets = Vec::with_capacity(cert.trees.len());
    for (i, tree) in cert.trees.iter().enumerate() {
        let set = EdgeSet::from_ids(tree.clone());
        if set.len() != tree.len() {
            return Ok(Verdict::fail(format!("tree {i} lists an edge twice")));
        }
        match check_spanning_tree(g, &set)? {
            Ok(()) => sets.push(set),
            Err(defect) => {
                return Ok(Verdict::fail(format!("tree {i} is not a spanning tree: {defect}")))
            }
        }
    }
    let needs_disjoint =
        matches!(cert.kind, CertKind::Packing | CertKind::Decomposition);
    let needs_cover =
        matches!(cert.kind, CertKind::Covering | CertKind::Decomposition);
    if needs_disjoint {
        let mut owner: Vec<Option<usize>> = vec![None; g.edge_count()];
        for (i, set) in sets.iter().enumerate() {
            for e in set.iter() {
                if let Some(j) = owner[e] {
                    return Ok(Verdict::fail(format!(
                        "trees {j} and {i} share edge {e}"
                    )));
                }
                owner[e] = Some(i);
            }
        }
    }
    if needs_cover {
        let mut covered = vec![false; g.edge_count()];
        for set in &sets {
            for e in set.iter() {
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Ok(Verdict::fail(format!("edge {e} is covered by no tree")));
        }
    }
    Ok(Verdict::ok())
}
