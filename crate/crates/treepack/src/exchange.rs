//! The packing-to-decomposition exchange engine.
//!
//! Edges are processed once, in the edge order built from a good
//! ordering. An uncovered edge is inserted into a tree that holds no
//! earlier edge of the same block, displacing the latest edge of the
//! resulting fundamental cycle. Every swap removes a strictly later
//! edge, so covered edges stay covered and, on finite graphs, a valid
//! run performs no swaps at all. The engine is generic over the tree
//! storage so the same step logic drives finite graphs and budgeted
//! windows of lazily presented ones.

use serde::{Deserialize, Serialize};

use crate::cert::{verify_certificate, CertKind, Certificate};
use crate::error::{Error, Result};
use crate::graph::{is_spanning_tree, tree_path_edges, EdgeId, EdgeSet, MultiGraph, VertexId};
use crate::ordering::{verify_good_ordering, EdgeOrder, GoodOrdering};

/// Storage interface for the exchange engine. Ranks are positions in the
/// ambient edge order; hosts map them to edge ids and answer tree
/// membership and cycle queries.
pub trait ExchangeHost {
    fn tree_count(&self) -> usize;
    fn edge_at_rank(&self, rank: usize) -> EdgeId;
    fn rank_of(&self, e: EdgeId) -> usize;
    /// First rank of the block containing the edge at `rank`.
    fn block_start_of_rank(&self, rank: usize) -> usize;
    /// The tree currently holding `e`, if any.
    fn covered_by(&self, e: EdgeId) -> Option<usize>;
    fn tree_contains(&self, tree: usize, e: EdgeId) -> bool;
    /// The unique cycle of `e` in the given tree, including `e` itself.
    fn fundamental_cycle(&mut self, tree: usize, e: EdgeId) -> Result<Vec<EdgeId>>;
    fn apply_swap(&mut self, tree: usize, insert: EdgeId, remove: EdgeId);
}

/// What happened at one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum StepAction {
    Noop,
    Swap { tree: usize, removed: EdgeId },
    Error { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeStepRecord {
    pub t: usize,
    pub edge: EdgeId,
    #[serde(flatten)]
    pub action: StepAction,
}

/// Smallest tree index holding no edge of the current block earlier than
/// the edge at `rank`. Such a tree exists whenever blocks are no larger
/// than the tree count.
pub fn choose_tree<H: ExchangeHost>(host: &H, rank: usize) -> Result<usize> {
    let identity: Vec<usize> = (0..host.tree_count()).collect();
    choose_tree_among(host, rank, &identity)
}

/// Like [`choose_tree`] but scanning trees in the given preference
/// order; property tests use this to randomize the tie-break.
pub fn choose_tree_among<H: ExchangeHost>(
    host: &H,
    rank: usize,
    preference: &[usize],
) -> Result<usize> {
    let start = host.block_start_of_rank(rank);
    'trees: for &i in preference {
        for r in start..rank {
            if host.tree_contains(i, host.edge_at_rank(r)) {
                continue 'trees;
            }
        }
        return Ok(i);
    }
    Err(Error::NoEligibleTree { step: rank, edge: host.edge_at_rank(rank) })
}

/// Processes the edge at `rank`: no-op when covered, otherwise swaps it
/// for the latest edge of its fundamental cycle in the chosen tree. The
/// removed edge is always strictly later, which the step re-checks.
pub fn exchange_step<H: ExchangeHost>(host: &mut H, rank: usize) -> Result<ExchangeStepRecord> {
    let e = host.edge_at_rank(rank);
    if host.covered_by(e).is_some() {
        return Ok(ExchangeStepRecord { t: rank, edge: e, action: StepAction::Noop });
    }
    let tree = choose_tree(host, rank)?;
    let cycle = host.fundamental_cycle(tree, e)?;
    let f = cycle
        .iter()
        .copied()
        .max_by_key(|&x| host.rank_of(x))
        .ok_or_else(|| Error::Invariant("fundamental cycle is empty".into()))?;
    if f == e || host.rank_of(f) <= rank {
        return Err(Error::Invariant(format!(
            "cycle maximum {f} does not come after inserted edge {e}"
        )));
    }
    host.apply_swap(tree, e, f);
    Ok(ExchangeStepRecord {
        t: rank,
        edge: e,
        action: StepAction::Swap { tree, removed: f },
    })
}

/// The mutable state of a finite exchange run: k edge-disjoint spanning
/// trees plus a coverage index.
#[derive(Debug, Clone)]
pub struct PackingState<'g> {
    g: &'g MultiGraph,
    eord: &'g EdgeOrder,
    trees: Vec<EdgeSet>,
    coverage: Vec<Option<usize>>,
    step: usize,
}

impl<'g> PackingState<'g> {
    pub fn trees(&self) -> &[EdgeSet] {
        &self.trees
    }

    pub fn coverage(&self, e: EdgeId) -> Option<usize> {
        self.coverage[e]
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn uncovered_count(&self) -> usize {
        self.coverage.iter().filter(|c| c.is_none()).count()
    }

    fn verify_packing(&self) -> Result<()> {
        let cert = Certificate::from_sets(CertKind::Packing, self.trees.clone());
        let verdict = verify_certificate(self.g, &cert)?;
        if verdict.valid {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "packing lost at step {}: {}",
                self.step,
                verdict.reason.unwrap_or_default()
            )))
        }
    }
}

impl ExchangeHost for PackingState<'_> {
    fn tree_count(&self) -> usize {
        self.trees.len()
    }

    fn edge_at_rank(&self, rank: usize) -> EdgeId {
        self.eord.edge_at(rank)
    }

    fn rank_of(&self, e: EdgeId) -> usize {
        self.eord.rank_of(e)
    }

    fn block_start_of_rank(&self, rank: usize) -> usize {
        self.eord.block_start_of_rank(rank)
    }

    fn covered_by(&self, e: EdgeId) -> Option<usize> {
        self.coverage[e]
    }

    fn tree_contains(&self, tree: usize, e: EdgeId) -> bool {
        self.trees[tree].contains(e)
    }

    fn fundamental_cycle(&mut self, tree: usize, e: EdgeId) -> Result<Vec<EdgeId>> {
        let (u, v) = self.g.endpoints(e);
        let mut cycle = tree_path_edges(self.g, &self.trees[tree], u, v).ok_or_else(|| {
            Error::Invariant(format!("tree {tree} does not connect the ends of edge {e}"))
        })?;
        cycle.push(e);
        Ok(cycle)
    }

    fn apply_swap(&mut self, tree: usize, insert: EdgeId, remove: EdgeId) {
        self.trees[tree].remove(remove);
        self.trees[tree].insert(insert);
        self.coverage[remove] = None;
        self.coverage[insert] = Some(tree);
    }
}

/// Builds the state at step 0 from a verified packing. The edge order
/// must come from the given ordering's back-edge partition.
pub fn init_state<'g>(
    g: &'g MultiGraph,
    ord: &GoodOrdering,
    eord: &'g EdgeOrder,
    packing: &Certificate,
) -> Result<PackingState<'g>> {
    let as_packing = Certificate {
        kind: CertKind::Packing,
        k: packing.k,
        trees: packing.trees.clone(),
    };
    let verdict = verify_certificate(g, &as_packing)?;
    if !verdict.valid {
        return Err(Error::Precondition(format!(
            "packing does not verify: {}",
            verdict.reason.unwrap_or_default()
        )));
    }
    if eord.len() != g.edge_count() {
        return Err(Error::Input(format!(
            "edge order covers {} edges, the graph has {}",
            eord.len(),
            g.edge_count()
        )));
    }
    for (id, u, v) in g.edges() {
        let later = if ord.position(u) > ord.position(v) { u } else { v };
        if eord.block_of(id) != ord.position(later) {
            return Err(Error::Input(format!(
                "edge order was not built from this ordering's blocks (edge {id})"
            )));
        }
    }
    let mut coverage = vec![None; g.edge_count()];
    let trees = as_packing.tree_sets();
    for (i, tree) in trees.iter().enumerate() {
        for e in tree.iter() {
            coverage[e] = Some(i);
        }
    }
    Ok(PackingState { g, eord, trees, coverage, step: 0 })
}

/// Runs the exchange over all edges in order and returns the verified
/// decomposition with the trace. Requires the ordering to witness
/// colouring number at most k+1 and the packing to verify. On finite
/// graphs the counting argument forces the packing to already cover
/// everything, so the trace is asserted to contain no swaps.
pub fn run_finite(
    g: &MultiGraph,
    ord: &GoodOrdering,
    eord: &EdgeOrder,
    packing: &Certificate,
) -> Result<(Certificate, Vec<ExchangeStepRecord>)> {
    let k = packing.k;
    if !verify_good_ordering(g, ord.order(), k + 1)? {
        return Err(Error::Precondition(format!(
            "ordering witnesses colouring number {} > k+1 = {}",
            ord.mu(),
            k + 1
        )));
    }
    let mut state = init_state(g, ord, eord, packing)?;
    let mut trace = Vec::with_capacity(eord.len());
    for rank in 0..eord.len() {
        let record = exchange_step(&mut state, rank)?;
        state.step = rank + 1;
        state.verify_packing()?;
        trace.push(record);
    }
    let swaps = trace
        .iter()
        .filter(|r| matches!(r.action, StepAction::Swap { .. }))
        .count();
    assert_eq!(swaps, 0, "a finite run from a valid packing cannot swap");
    let cert = Certificate::from_sets(CertKind::Decomposition, state.trees.clone());
    let verdict = verify_certificate(g, &cert)?;
    if !verdict.valid {
        return Err(Error::Invariant(format!(
            "run did not end in a decomposition: {}",
            verdict.reason.unwrap_or_default()
        )));
    }
    Ok((cert, trace))
}

/// Watches one bond: per tree, the earliest bond edge it contains. The
/// minima may only move earlier over time, and every tree must keep
/// meeting the bond.
#[derive(Debug, Clone)]
pub struct BondMonitor {
    bond: EdgeSet,
    mins: Vec<Option<usize>>,
    violations: Vec<String>,
}

impl BondMonitor {
    /// Monitor from an explicit bond edge set (already known to be a
    /// bond, e.g. declared by a lazy family).
    pub fn from_edges<H: ExchangeHost>(host: &H, bond: EdgeSet) -> Self {
        let mut monitor = BondMonitor { bond, mins: vec![None; host.tree_count()], violations: Vec::new() };
        monitor.mins = monitor.current_mins(host);
        for (i, m) in monitor.mins.iter().enumerate() {
            if m.is_none() {
                monitor
                    .violations
                    .push(format!("tree {i} misses the bond at attach time"));
            }
        }
        monitor
    }

    pub fn bond(&self) -> &EdgeSet {
        &self.bond
    }

    fn current_mins<H: ExchangeHost>(&self, host: &H) -> Vec<Option<usize>> {
        (0..host.tree_count())
            .map(|i| {
                self.bond
                    .iter()
                    .filter(|&e| host.tree_contains(i, e))
                    .map(|e| host.rank_of(e))
                    .min()
            })
            .collect()
    }

    /// Re-reads the minima after a step and records any violation.
    pub fn advance<H: ExchangeHost>(&mut self, host: &H, step: usize) {
        let now = self.current_mins(host);
        for i in 0..now.len() {
            match (self.mins[i], now[i]) {
                (_, None) => self
                    .violations
                    .push(format!("tree {i} lost its bond edge at step {step}")),
                (Some(prev), Some(cur)) if cur > prev => self.violations.push(format!(
                    "tree {i} bond minimum moved later ({prev} -> {cur}) at step {step}"
                )),
                _ => {}
            }
        }
        self.mins = now;
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validates that the cut given by `left` is a bond of `g` and attaches
/// a monitor to the state.
pub fn attach_bond_monitor(
    g: &MultiGraph,
    state: &PackingState<'_>,
    left: &[VertexId],
) -> Result<BondMonitor> {
    let bond = crate::graph::bond_edges(g, left)?;
    Ok(BondMonitor::from_edges(state, bond))
}

/// Offline check of a complete trace against the three step invariants.
#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    /// trees stopped being pairwise-disjoint spanning trees
    pub packing_violations: Vec<String>,
    /// an edge already processed (hence covered for good) was removed
    pub persistence_violations: Vec<String>,
    /// a swap removed an edge that does not come after the inserted one
    pub direction_violations: Vec<String>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.packing_violations.is_empty()
            && self.persistence_violations.is_empty()
            && self.direction_violations.is_empty()
    }
}

/// Replays a trace from the initial trees and reports every violation:
/// packing preservation per step, covered persistence, and swap
/// direction.
pub fn invariant_report(
    g: &MultiGraph,
    eord: &EdgeOrder,
    initial_trees: &[EdgeSet],
    trace: &[ExchangeStepRecord],
) -> InvariantReport {
    let mut report = InvariantReport::default();
    let mut trees: Vec<EdgeSet> = initial_trees.to_vec();
    for record in trace {
        let t = record.t;
        match &record.action {
            StepAction::Noop | StepAction::Error { .. } => {}
            StepAction::Swap { tree, removed } => {
                let e = record.edge;
                if eord.rank_of(*removed) <= eord.rank_of(e) {
                    report.direction_violations.push(format!(
                        "step {t}: removed edge {removed} does not come after inserted edge {e}"
                    ));
                }
                if eord.rank_of(*removed) < t {
                    report.persistence_violations.push(format!(
                        "step {t}: edge {removed} was covered at its own step {} and removed again",
                        eord.rank_of(*removed)
                    ));
                }
                if *tree >= trees.len() {
                    report
                        .packing_violations
                        .push(format!("step {t}: tree index {tree} out of range"));
                    continue;
                }
                if !trees[*tree].remove(*removed) {
                    report.packing_violations.push(format!(
                        "step {t}: removed edge {removed} was not in tree {tree}"
                    ));
                }
                if let Some(other) = trees.iter().position(|s| s.contains(e)) {
                    report.packing_violations.push(format!(
                        "step {t}: inserted edge {e} already lies in tree {other}"
                    ));
                }
                trees[*tree].insert(e);
                for (i, set) in trees.iter().enumerate() {
                    match is_spanning_tree(g, set) {
                        Ok(true) => {}
                        _ => report.packing_violations.push(format!(
                            "step {t}: tree {i} is no longer a spanning tree"
                        )),
                    }
                }
            }
        }
    }
    report
}
